#include <doctest.h>

#include <cmath>
#include <vector>

#include "enavs/errors.hpp"
#include "enavs/kernels.hpp"
#include "enavs/rng.hpp"

using namespace enavs;

namespace {

std::vector<double> random_vec(Rng& rng, size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-2.0, 2.0);
    return v;
}

}  // namespace

TEST_CASE("scalar matvec computes W x + b") {
    const kernels::Backend& k = kernels::scalar_backend();
    // W = [[1,2],[3,4],[5,6]], x = [1,-1], b = [10,20,30]
    const double W[] = {1, 2, 3, 4, 5, 6};
    const double x[] = {1, -1};
    const double b[] = {10, 20, 30};
    double y[3];
    k.matvec(W, x, b, y, 3, 2);
    CHECK(y[0] == doctest::Approx(9.0));
    CHECK(y[1] == doctest::Approx(19.0));
    CHECK(y[2] == doctest::Approx(29.0));

    double xt[2] = {0, 0};
    const double g[] = {1.0, 0.5, -1.0};
    k.matvec_t(W, g, xt, 3, 2);  // W^T g
    CHECK(xt[0] == doctest::Approx(1.0 + 1.5 - 5.0));
    CHECK(xt[1] == doctest::Approx(2.0 + 2.0 - 6.0));

    double G[6] = {0};
    k.ger(G, g, x, 2.0, 3, 2);  // G += 2 * g x^T
    CHECK(G[0] == doctest::Approx(2.0));
    CHECK(G[1] == doctest::Approx(-2.0));
    CHECK(G[2] == doctest::Approx(1.0));
    CHECK(G[5] == doctest::Approx(2.0));

    double acc[2] = {1.0, 1.0};
    k.axpy(3.0, x, acc, 2);
    CHECK(acc[0] == doctest::Approx(4.0));
    CHECK(acc[1] == doctest::Approx(-2.0));

    CHECK(k.dot(x, x, 2) == doctest::Approx(2.0));
}

TEST_CASE("avx2 kernels match scalar on random shapes") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 not available on this host; skipping equivalence checks");
        return;
    }
    const kernels::Backend& sc = kernels::scalar_backend();
    const kernels::Backend& vx = kernels::avx2_backend();
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t m = 1 + rng.uniform_index(33);
        const size_t n = 1 + rng.uniform_index(33);
        const auto W = random_vec(rng, m * n);
        const auto x = random_vec(rng, n);
        const auto b = random_vec(rng, m);
        const auto g = random_vec(rng, m);

        std::vector<double> y1(m), y2(m);
        sc.matvec(W.data(), x.data(), b.data(), y1.data(), m, n);
        vx.matvec(W.data(), x.data(), b.data(), y2.data(), m, n);
        for (size_t i = 0; i < m; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));

        std::vector<double> t1(n, 0.0), t2(n, 0.0);
        sc.matvec_t(W.data(), g.data(), t1.data(), m, n);
        vx.matvec_t(W.data(), g.data(), t2.data(), m, n);
        for (size_t i = 0; i < n; ++i) CHECK(t1[i] == doctest::Approx(t2[i]).epsilon(1e-12));

        std::vector<double> G1(m * n, 0.5), G2(m * n, 0.5);
        sc.ger(G1.data(), g.data(), x.data(), 1.25, m, n);
        vx.ger(G2.data(), g.data(), x.data(), 1.25, m, n);
        for (size_t i = 0; i < m * n; ++i)
            CHECK(G1[i] == doctest::Approx(G2[i]).epsilon(1e-12));

        std::vector<double> a1(n, 0.25), a2(n, 0.25);
        sc.axpy(-0.75, x.data(), a1.data(), n);
        vx.axpy(-0.75, x.data(), a2.data(), n);
        for (size_t i = 0; i < n; ++i) CHECK(a1[i] == doctest::Approx(a2[i]).epsilon(1e-12));

        CHECK(sc.dot(x.data(), x.data(), n) ==
              doctest::Approx(vx.dot(x.data(), x.data(), n)).epsilon(1e-12));
    }
}

TEST_CASE("backend selection") {
    const kernels::Backend& before = kernels::active();
    kernels::select("scalar");
    CHECK(std::string(kernels::active().name) == "scalar");
    if (kernels::avx2_available()) {
        kernels::select("avx2");
        CHECK(std::string(kernels::active().name) == "avx2");
    }
    kernels::select("auto");
    if (kernels::avx2_available())
        CHECK(std::string(kernels::active().name) == "avx2");
    else
        CHECK(std::string(kernels::active().name) == "scalar");
    CHECK_THROWS_AS(kernels::select("gpu"), ConfigError);
    // restore whatever was active when the test started
    kernels::select(before.name);
}
