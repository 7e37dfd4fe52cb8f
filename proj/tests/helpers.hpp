#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "enavs/corpus.hpp"
#include "enavs/quality_model.hpp"
#include "enavs/sim.hpp"
#include "enavs/trace.hpp"
#include "enavs/trainer.hpp"

namespace testutil {

inline std::shared_ptr<const enavs::BandwidthTrace> constant_trace(double mbps,
                                                                   double duration_s = 1000.0) {
    return std::make_shared<enavs::BandwidthTrace>(
        enavs::BandwidthTrace::from_samples({{0.0, mbps}}, duration_s));
}

// Jitter-free manifest over the default calibrated model.
inline std::shared_ptr<const enavs::MpdManifest> flat_mpd(
    int num_chunks, std::vector<double> ladder = {2.0, 4.0}, double chunk_duration_s = 1.0) {
    const enavs::RateQualityModel model = enavs::default_quality_model(0.0);
    return std::make_shared<enavs::MpdManifest>(
        enavs::generate_mpd(model, num_chunks, ladder, chunk_duration_s, 1));
}

inline enavs::ComputeProfile profile_x(double scale) {
    enavs::ComputeProfile p;
    p.name = "test";
    p.scale_factor = scale;
    return p;
}

inline enavs::SimConfig simple_config(int num_chunks, double mbps, double scale = 4.5,
                                      std::vector<double> ladder = {2.0, 4.0}) {
    enavs::SimConfig cfg;
    cfg.mpd = flat_mpd(num_chunks, std::move(ladder));
    cfg.trace = constant_trace(mbps);
    cfg.profile = profile_x(scale);
    return cfg;
}

// One-step environment: a single terminal decision where exactly one action
// pays reward 1. The observation is a constant vector.
class BanditEnv final : public enavs::Env {
public:
    BanditEnv(int num_actions, int best_action)
        : num_actions_(num_actions), best_(best_action) {}

    int obs_dim() const override { return 4; }
    int num_actions() const override { return num_actions_; }

    enavs::Observation reset(uint64_t) override {
        last_ = std::numeric_limits<double>::quiet_NaN();
        return {1.0, 0.0, 0.0, 0.0};
    }

    Feedback step(int action_index) override {
        last_ = action_index == best_ ? 1.0 : 0.0;
        return {{0.0, 1.0, 0.0, 0.0}, last_, true};
    }

    double episode_score() const override { return last_; }

private:
    int num_actions_;
    int best_;
    double last_ = 0.0;
};

}  // namespace testutil
