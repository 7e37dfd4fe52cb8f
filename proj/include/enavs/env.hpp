#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "enavs/corpus.hpp"
#include "enavs/qoe.hpp"
#include "enavs/sim.hpp"
#include "enavs/trainer.hpp"

namespace enavs {

// Episode sampler over a corpus split: each reset draws (video, trace,
// compute profile) from the pools using the episode seed, then plays one
// full video through the pipeline. Rewards are per-chunk QoE terms.
struct StreamingEnvConfig {
    std::vector<std::shared_ptr<const MpdManifest>> videos;
    std::vector<std::shared_ptr<const BandwidthTrace>> traces;
    std::vector<ComputeProfile> profiles;
    QoeWeights weights;
    int db_cap = 5;
    int pb_cap = 5;
    int k1 = 8;
    int k2 = 8;
    ObsNorm norm;

    void validate() const;
};

class StreamingEnv final : public Env {
public:
    explicit StreamingEnv(StreamingEnvConfig cfg);

    int obs_dim() const override;
    int num_actions() const override;
    Observation reset(uint64_t episode_seed) override;
    Feedback step(int action_index) override;
    double episode_score() const override;  // episode QoE so far

    const std::vector<StepOutcome>& log() const { return log_; }
    const Pipeline& pipeline() const;

private:
    StreamingEnvConfig cfg_;
    std::optional<Pipeline> pipe_;
    std::vector<StepOutcome> log_;
};

}  // namespace enavs
