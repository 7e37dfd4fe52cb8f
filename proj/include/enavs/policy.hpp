#pragma once

#include <memory>
#include <string>
#include <vector>

#include "enavs/action.hpp"
#include "enavs/rng.hpp"
#include "enavs/sim.hpp"

namespace enavs {

// Decision rules see both views of the pipeline state: the structured
// context (rule-based policies) and the encoded observation vector
// (learned policies).
class Policy {
public:
    virtual ~Policy() = default;
    virtual Action decide(const DecisionContext& ctx, const Observation& obs) = 0;
    virtual std::string name() const = 0;
};

// Full action set in canonical order for a ladder of the given size.
std::vector<Action> full_action_set(int ladder_size);

// Restrict the set: allow_enhance=false drops every p=1 action. Throws
// ConfigError when the result is empty.
std::vector<Action> mask_actions(const std::vector<Action>& actions, bool allow_enhance);

// Rate-based rule: predict throughput as the arithmetic mean of the
// available history (newest first), pick the largest ladder rate <= the
// prediction, lowest rate as fallback. Never enhances.
Action bdash_decide(const std::vector<double>& recent_throughput_mbps,
                    const std::vector<double>& ladder_mbps);

// Myopic rule: among actions predicted stall-free given the playback runway
// (remaining play time + chunk_duration * pb occupancy), pick the one with
// maximal PSNR for this chunk; ties prefer the lower bitrate, then no
// enhancement. Falls back to (lowest rate, no enhance).
Action greedy_decide(const DecisionContext& ctx);

// Runs one full episode: observe -> decide -> step until done. The pipeline
// must be freshly reset. Returns the per-chunk log.
std::vector<StepOutcome> rollout_policy(Pipeline& pipe, Policy& policy);

class BDashPolicy final : public Policy {
public:
    explicit BDashPolicy(int window = 5) : window_(window) {}
    Action decide(const DecisionContext& ctx, const Observation&) override;
    std::string name() const override { return "bdash"; }

private:
    int window_;
};

class GreedyPolicy final : public Policy {
public:
    Action decide(const DecisionContext& ctx, const Observation&) override {
        return greedy_decide(ctx);
    }
    std::string name() const override { return "greedy"; }
};

class RandomPolicy final : public Policy {
public:
    RandomPolicy(uint64_t seed, bool allow_enhance = true)
        : rng_(seed), allow_enhance_(allow_enhance) {}
    Action decide(const DecisionContext& ctx, const Observation&) override;
    std::string name() const override { return "random"; }

private:
    Rng rng_;
    bool allow_enhance_;
};

class FixedPolicy final : public Policy {
public:
    explicit FixedPolicy(Action a) : action_(a) {}
    Action decide(const DecisionContext&, const Observation&) override { return action_; }
    std::string name() const override { return "fixed"; }

private:
    Action action_;
};

}  // namespace enavs
