#include "enavs/mlp.hpp"

#include <cmath>
#include <cstring>

#include "enavs/errors.hpp"
#include "enavs/kernels.hpp"

namespace enavs {

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
    if (spec_.input_dim <= 0 || spec_.output_dim <= 0)
        throw ConfigError("mlp: input_dim and output_dim must be positive");
    for (int h : spec_.hidden)
        if (h <= 0) throw ConfigError("mlp: hidden widths must be positive");
    build_layout();
}

void Mlp::build_layout() {
    layers_.clear();
    size_t off = 0;
    int in = spec_.input_dim;
    auto push = [&](int out) {
        LayerRef l;
        l.w_off = off;
        off += static_cast<size_t>(out) * in;
        l.b_off = off;
        off += out;
        l.in = in;
        l.out = out;
        layers_.push_back(l);
        in = out;
    };
    for (int h : spec_.hidden) push(h);
    push(spec_.output_dim);
    params_.assign(off, 0.0);
}

void Mlp::init_weights(Rng& rng) {
    // Output layer stays zero-initialized.
    for (size_t li = 0; li + 1 < layers_.size(); ++li) {
        const LayerRef& l = layers_[li];
        const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
        for (size_t k = 0; k < static_cast<size_t>(l.out) * l.in; ++k)
            params_[l.w_off + k] = rng.uniform(-bound, bound);
        for (int k = 0; k < l.out; ++k) params_[l.b_off + k] = 0.0;
    }
    const LayerRef& last = layers_.back();
    std::fill(params_.begin() + last.w_off, params_.end(), 0.0);
}

void Mlp::forward(const double* x, double* out, Tape* tape) const {
    const kernels::Backend& k = kernels::active();
    std::vector<double> cur(x, x + spec_.input_dim);
    if (tape) {
        // acts[0] holds the input; hidden activations follow.
        tape->acts.assign(layers_.size(), {});
        tape->acts[0] = cur;
    }
    std::vector<double> next;
    for (size_t li = 0; li < layers_.size(); ++li) {
        const LayerRef& l = layers_[li];
        const bool last = li + 1 == layers_.size();
        double* dst = last ? out : (next.assign(l.out, 0.0), next.data());
        k.matvec(params_.data() + l.w_off, cur.data(), params_.data() + l.b_off,
                 dst, l.out, l.in);
        if (!last) {
            for (int i = 0; i < l.out; ++i) dst[i] = std::tanh(dst[i]);
            cur.assign(dst, dst + l.out);
            if (tape) tape->acts[li + 1] = cur;
        }
    }
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != spec_.input_dim)
        throw DomainError("mlp: input size mismatch");
    std::vector<double> out(spec_.output_dim, 0.0);
    forward(x.data(), out.data(), nullptr);
    return out;
}

void Mlp::backward(const Tape& tape, const double* dout, double* grad) const {
    const kernels::Backend& k = kernels::active();
    std::vector<double> g(dout, dout + spec_.output_dim);
    for (size_t li = layers_.size(); li-- > 0;) {
        const LayerRef& l = layers_[li];
        const double* act_in = tape.acts[li].data();
        k.ger(grad + l.w_off, g.data(), act_in, 1.0, l.out, l.in);
        k.axpy(1.0, g.data(), grad + l.b_off, l.out);
        if (li == 0) break;
        std::vector<double> gprev(l.in, 0.0);
        k.matvec_t(params_.data() + l.w_off, g.data(), gprev.data(), l.out, l.in);
        const std::vector<double>& h = tape.acts[li];  // tanh outputs of layer li-1
        for (int i = 0; i < l.in; ++i) gprev[i] *= 1.0 - h[i] * h[i];
        g.swap(gprev);
    }
}

void Mlp::add_scaled(const double* grad, double scale) {
    kernels::active().axpy(scale, grad, params_.data(), params_.size());
}

nlohmann::json Mlp::to_json() const {
    return {{"input_dim", spec_.input_dim},
            {"hidden", spec_.hidden},
            {"output_dim", spec_.output_dim},
            {"params", params_}};
}

Mlp Mlp::from_json(const nlohmann::json& j) {
    MlpSpec spec;
    std::vector<double> p;
    try {
        spec.input_dim = j.at("input_dim").get<int>();
        spec.hidden = j.at("hidden").get<std::vector<int>>();
        spec.output_dim = j.at("output_dim").get<int>();
        p = j.at("params").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("mlp: ") + e.what());
    }
    Mlp m(spec);
    if (p.size() != m.params_.size())
        throw ParseError("mlp: parameter count does not match architecture");
    m.params_ = std::move(p);
    return m;
}

}  // namespace enavs
