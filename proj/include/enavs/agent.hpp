#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "enavs/mlp.hpp"
#include "enavs/policy.hpp"

namespace enavs {

// Numerically stable softmax (shift by the max logit).
std::vector<double> softmax(const std::vector<double>& logits);

// Softmax restricted to the legal action indices; illegal entries get
// probability exactly 0. `legal` must be non-empty and in range.
std::vector<double> masked_softmax(const std::vector<double>& logits,
                                   const std::vector<int>& legal);

// Shannon entropy -sum p ln p with the 0 ln 0 = 0 convention.
double policy_entropy(const std::vector<double>& probs);

// One-step advantage r + gamma V(s') - V(s); the bootstrap term is dropped
// on terminal transitions.
double advantage(double reward, double v_next, double v_cur, double gamma, bool terminal);

// Indices 0..num_actions-1, with odd (enhance) entries dropped when
// enhancement is disallowed. Assumes the canonical action encoding.
std::vector<int> legal_action_indices(int num_actions, bool allow_enhance);

// Actor-critic parameter pair plus the action-mask flag the agent was
// trained under. Serializes to a versioned JSON checkpoint.
struct AgentParams {
    Mlp actor;
    Mlp critic;
    bool allow_enhance = true;

    AgentParams() = default;
    AgentParams(int obs_dim, const std::vector<int>& hidden, int num_actions,
                bool allow_enhance, Rng& rng);

    int obs_dim() const { return actor.spec().input_dim; }
    int num_actions() const { return actor.spec().output_dim; }

    // Masked action distribution and state value for one observation.
    std::pair<std::vector<double>, double> forward(const Observation& obs) const;

    nlohmann::json to_json() const;
    static AgentParams from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static AgentParams load(const std::string& path);
};

// Wraps a trained agent as a deterministic evaluation policy (argmax over
// the masked distribution; first index wins ties).
class AgentPolicy final : public Policy {
public:
    explicit AgentPolicy(AgentParams params) : params_(std::move(params)) {}
    Action decide(const DecisionContext& ctx, const Observation& obs) override;
    std::string name() const override { return params_.allow_enhance ? "enavs" : "no-enhance"; }
    const AgentParams& params() const { return params_; }

private:
    AgentParams params_;
};

}  // namespace enavs
