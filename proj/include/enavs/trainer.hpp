#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <vector>

#include "enavs/agent.hpp"
#include "enavs/rng.hpp"

namespace enavs {

// Episodic environment contract for the trainer. Implementations must be
// deterministic given the seed passed to reset().
class Env {
public:
    virtual ~Env() = default;
    virtual int obs_dim() const = 0;
    virtual int num_actions() const = 0;
    virtual Observation reset(uint64_t episode_seed) = 0;

    struct Feedback {
        Observation obs;
        double reward = 0.0;
        bool done = false;
    };
    virtual Feedback step(int action_index) = 0;

    // Score of the episode that just finished, for the learning curve.
    virtual double episode_score() const {
        return std::numeric_limits<double>::quiet_NaN();
    }
};

using EnvFactory = std::function<std::unique_ptr<Env>()>;

struct Rollout {
    std::vector<Observation> states;
    std::vector<int> actions;
    std::vector<double> rewards;
    Observation final_state;
    bool terminal = true;
    double mean_entropy = 0.0;  // of the behaviour distribution, per step

    size_t size() const { return actions.size(); }
};

// Samples one episode from the current policy. Entropy of each step's
// masked distribution is averaged into rollout.mean_entropy.
Rollout sample_episode(Env& env, const AgentParams& params, uint64_t episode_seed, Rng& rng);

// V(s_0..s_{N-1}) plus the bootstrap value of the final state (0 when the
// rollout is terminal). Size N+1.
std::vector<double> critic_values(const Mlp& critic, const Rollout& ro);

// advantages[i] = r_i + gamma * values[i+1] - values[i] (values includes the
// bootstrap entry, already zeroed on terminal rollouts).
std::vector<double> compute_advantages(const Rollout& ro, const std::vector<double>& values,
                                       double gamma);

// Objective the actor ascends:  sum_i A_i ln pi(a_i|s_i) + eta * H(pi(.|s_i)),
// with advantages held constant. Gradient is returned in the actor's flat
// parameter layout.
double actor_objective(const Mlp& actor, const Rollout& ro,
                       const std::vector<double>& advantages, double entropy_weight,
                       const std::vector<int>& legal);
std::vector<double> actor_gradient(const Mlp& actor, const Rollout& ro,
                                   const std::vector<double>& advantages,
                                   double entropy_weight, const std::vector<int>& legal);

// Loss the critic descends:  0.5 * sum_i (target_i - V(s_i))^2 with fixed
// targets (semi-gradient).
double critic_loss(const Mlp& critic, const Rollout& ro, const std::vector<double>& targets);
std::vector<double> critic_gradient(const Mlp& critic, const Rollout& ro,
                                    const std::vector<double>& targets);

// One accumulated gradient-ascent step over the whole rollout.
void actor_update(Mlp& actor, const Rollout& ro, const std::vector<double>& advantages,
                  double lr, double entropy_weight, const std::vector<int>& legal);

// Computes targets r_i + gamma * V(s_{i+1}) from the current critic, then
// takes one semi-gradient descent step.
void critic_update(Mlp& critic, const Rollout& ro, double gamma, double lr);

struct TrainConfig {
    std::vector<int> hidden = {128, 128};
    double gamma = 0.9;
    double entropy_weight = 0.01;
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    int episodes = 1000;  // 0 is legal: returns the freshly initialized params
    int workers = 1;
    uint64_t seed = 1;
    bool allow_enhance = true;
    // Training aborts once mean |advantage| stays above the bound for this
    // many consecutive episodes.
    double divergence_bound = 1e4;
    int divergence_patience = 50;
    bool async_updates = false;  // lock-free-ish hogwild mode; not reproducible

    void validate() const;
};

struct EpisodeStats {
    int episode = 0;
    int steps = 0;
    double total_reward = 0.0;
    double mean_reward = 0.0;
    double score = 0.0;  // env-reported episode score (QoE for streaming envs)
    double mean_entropy = 0.0;
    double mean_abs_advantage = 0.0;
};

struct TrainResult {
    AgentParams params;
    std::vector<EpisodeStats> curve;
};

// Round-based synchronous training: each round, up to `workers` episodes are
// sampled in parallel from a snapshot of the parameters and their updates are
// applied serially in episode order, so repeated runs with the same config
// are bit-identical regardless of thread scheduling. async_updates=true
// trades that guarantee for wall-clock.
TrainResult train(const TrainConfig& cfg, const EnvFactory& make_env,
                  const std::function<void(const EpisodeStats&)>& on_episode = nullptr);

void write_curve_csv(std::ostream& out, const std::vector<EpisodeStats>& curve);

}  // namespace enavs
