#include <doctest.h>

#include <cmath>
#include <vector>

#include "enavs/errors.hpp"
#include "enavs/mlp.hpp"
#include "enavs/rng.hpp"

using namespace enavs;

namespace {

std::vector<double> random_input(int dim, Rng& rng) {
    std::vector<double> x(dim);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    return x;
}

// Central finite difference of f(params) = sum_k dout[k] * forward(x)[k].
double fd_gradient(Mlp& net, const std::vector<double>& x, const std::vector<double>& dout,
                   size_t param_idx, double step) {
    const double saved = net.params()[param_idx];
    const auto project = [&]() {
        const std::vector<double> y = net.forward(x);
        double s = 0.0;
        for (size_t k = 0; k < y.size(); ++k) s += dout[k] * y[k];
        return s;
    };
    net.params()[param_idx] = saved + step;
    const double hi = project();
    net.params()[param_idx] = saved - step;
    const double lo = project();
    net.params()[param_idx] = saved;
    return (hi - lo) / (2.0 * step);
}

}  // namespace

TEST_CASE("parameter layout counts weights and biases per layer") {
    Mlp net(MlpSpec{3, {4, 5}, 2});
    CHECK(net.num_params() == (3 * 4 + 4) + (4 * 5 + 5) + (5 * 2 + 2));
    Mlp linear(MlpSpec{6, {}, 1});
    CHECK(linear.num_params() == 7);
}

TEST_CASE("fresh weights leave the output layer at zero") {
    Rng rng(11);
    Mlp net(MlpSpec{5, {8}, 3});
    net.init_weights(rng);
    const std::vector<double> y = net.forward(random_input(5, rng));
    REQUIRE(y.size() == 3);
    for (double v : y) CHECK(v == 0.0);
    // hidden weights bounded by 1/sqrt(fan_in), not all zero
    double max_abs = 0.0;
    for (size_t i = 0; i < 5 * 8 + 8; ++i)
        max_abs = std::max(max_abs, std::abs(net.params()[i]));
    CHECK(max_abs > 0.0);
    CHECK(max_abs <= 1.0 / std::sqrt(5.0));
}

TEST_CASE("no hidden layers reduces to an affine map") {
    Mlp net(MlpSpec{2, {}, 1});
    net.params() = {1.5, -2.0, 0.25};  // w = [1.5, -2], b = 0.25
    const std::vector<double> y = net.forward({2.0, 1.0});
    CHECK(y[0] == doctest::Approx(1.5 * 2.0 - 2.0 * 1.0 + 0.25).epsilon(1e-12));
}

TEST_CASE("single tanh unit computes the closed form") {
    // 1 -> 1 -> 1: y = w2 * tanh(w1 x + b1) + b2
    Mlp net(MlpSpec{1, {1}, 1});
    net.params() = {0.7, -0.2, 1.3, 0.05};
    const double x = 0.9;
    const double expected = 1.3 * std::tanh(0.7 * x - 0.2) + 0.05;
    CHECK(net.forward({x})[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("forward is deterministic and checks the input size") {
    Rng rng(3);
    Mlp net(MlpSpec{4, {6}, 2});
    net.init_weights(rng);
    for (double& p : net.params()) p = rng.uniform(-0.5, 0.5);
    const std::vector<double> x = random_input(4, rng);
    CHECK(net.forward(x) == net.forward(x));
    CHECK_THROWS_AS(net.forward({1.0, 2.0}), DomainError);
}

TEST_CASE("backward matches central finite differences") {
    Rng rng(17);
    Mlp net(MlpSpec{32, {16}, 10});
    net.init_weights(rng);
    for (double& p : net.params()) p = rng.uniform(-0.5, 0.5);

    const std::vector<double> x = random_input(32, rng);
    std::vector<double> dout(10);
    for (double& v : dout) v = rng.uniform(-1.0, 1.0);

    Mlp::Tape tape;
    std::vector<double> out(10);
    net.forward(x.data(), out.data(), &tape);
    std::vector<double> grad(net.num_params(), 0.0);
    net.backward(tape, dout.data(), grad.data());

    Rng pick(29);
    for (int trial = 0; trial < 60; ++trial) {
        const size_t i = pick.uniform_index(net.num_params());
        const double fd = fd_gradient(net, x, dout, i, 1e-5);
        const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
        CHECK(std::abs(grad[i] - fd) / denom < 1e-4);
    }
}

TEST_CASE("backward accumulates instead of overwriting") {
    Rng rng(5);
    Mlp net(MlpSpec{3, {4}, 2});
    net.init_weights(rng);
    for (double& p : net.params()) p = rng.uniform(-0.5, 0.5);
    const std::vector<double> x = random_input(3, rng);
    const std::vector<double> dout = {0.3, -0.8};

    Mlp::Tape tape;
    std::vector<double> out(2);
    net.forward(x.data(), out.data(), &tape);
    std::vector<double> once(net.num_params(), 0.0);
    net.backward(tape, dout.data(), once.data());
    std::vector<double> twice(net.num_params(), 0.0);
    net.backward(tape, dout.data(), twice.data());
    net.backward(tape, dout.data(), twice.data());
    for (size_t i = 0; i < once.size(); ++i)
        CHECK(twice[i] == doctest::Approx(2.0 * once[i]).epsilon(1e-12));
}

TEST_CASE("add_scaled shifts the parameter vector") {
    Mlp net(MlpSpec{2, {}, 1});
    net.params() = {1.0, 2.0, 3.0};
    const std::vector<double> g = {0.5, -1.0, 2.0};
    net.add_scaled(g.data(), -0.1);
    CHECK(net.params()[0] == doctest::Approx(0.95));
    CHECK(net.params()[1] == doctest::Approx(2.1));
    CHECK(net.params()[2] == doctest::Approx(2.8));
}

TEST_CASE("json round-trip preserves spec and parameters") {
    Rng rng(23);
    Mlp net(MlpSpec{5, {7, 3}, 2});
    net.init_weights(rng);
    for (double& p : net.params()) p = rng.uniform(-0.5, 0.5);

    const Mlp back = Mlp::from_json(net.to_json());
    CHECK(back.spec() == net.spec());
    REQUIRE(back.num_params() == net.num_params());
    CHECK(back.params() == net.params());
    const std::vector<double> x = random_input(5, rng);
    CHECK(back.forward(x) == net.forward(x));
}

TEST_CASE("json loading rejects inconsistent shapes") {
    Mlp net(MlpSpec{2, {2}, 1});
    nlohmann::json j = net.to_json();
    j["params"] = std::vector<double>{1.0, 2.0};  // wrong count
    CHECK_THROWS_AS(Mlp::from_json(j), ParseError);
    nlohmann::json missing = net.to_json();
    missing.erase("hidden");
    CHECK_THROWS_AS(Mlp::from_json(missing), ParseError);
}
