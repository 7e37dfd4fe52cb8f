#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "enavs/rng.hpp"

namespace enavs {

struct MlpSpec {
    int input_dim = 0;
    std::vector<int> hidden;
    int output_dim = 0;

    friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

// Fully-connected net, tanh hidden activations, linear output. Parameters
// live in one flat vector (per layer: row-major weights, then biases) so
// updates, checkpoints, and finite-difference checks can treat the model
// as a plain parameter vector.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(MlpSpec spec);

    const MlpSpec& spec() const { return spec_; }
    size_t num_params() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Hidden layers: uniform +/- 1/sqrt(fan_in). Output layer zero, so a
    // fresh actor is exactly uniform and a fresh critic predicts 0.
    void init_weights(Rng& rng);

    // Post-activation values per layer; acts[0] is the input.
    struct Tape {
        std::vector<std::vector<double>> acts;
    };

    void forward(const double* x, double* out, Tape* tape = nullptr) const;
    std::vector<double> forward(const std::vector<double>& x) const;

    // Accumulates d(out . dout)/d(params) into grad (same flat layout).
    // Requires the tape recorded by forward for the same input.
    void backward(const Tape& tape, const double* dout, double* grad) const;

    void add_scaled(const double* grad, double scale);  // params += scale * grad

    nlohmann::json to_json() const;
    static Mlp from_json(const nlohmann::json& j);

private:
    struct LayerRef {
        size_t w_off = 0, b_off = 0;
        int in = 0, out = 0;
    };

    MlpSpec spec_;
    std::vector<double> params_;
    std::vector<LayerRef> layers_;  // hidden layers then the output layer

    void build_layout();
};

}  // namespace enavs
