#include "enavs/trainer.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "enavs/errors.hpp"

namespace enavs {

namespace {

int sample_categorical(const std::vector<double>& probs, const std::vector<int>& legal,
                       Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int idx : legal) {
        acc += probs[idx];
        if (u < acc) return idx;
    }
    return legal.back();  // guards against accumulated rounding
}

}  // namespace

Rollout sample_episode(Env& env, const AgentParams& params, uint64_t episode_seed, Rng& rng) {
    Rollout ro;
    const std::vector<int> legal =
        legal_action_indices(params.num_actions(), params.allow_enhance);
    Observation obs = env.reset(episode_seed);
    double entropy_sum = 0.0;
    while (true) {
        const std::vector<double> probs =
            masked_softmax(params.actor.forward(obs), legal);
        entropy_sum += policy_entropy(probs);
        const int a = sample_categorical(probs, legal, rng);
        Env::Feedback fb = env.step(a);
        ro.states.push_back(std::move(obs));
        ro.actions.push_back(a);
        ro.rewards.push_back(fb.reward);
        obs = std::move(fb.obs);
        if (fb.done) break;
    }
    ro.final_state = std::move(obs);
    ro.terminal = true;
    ro.mean_entropy = ro.size() ? entropy_sum / static_cast<double>(ro.size()) : 0.0;
    return ro;
}

std::vector<double> critic_values(const Mlp& critic, const Rollout& ro) {
    std::vector<double> v(ro.size() + 1, 0.0);
    for (size_t i = 0; i < ro.size(); ++i) v[i] = critic.forward(ro.states[i])[0];
    v.back() = ro.terminal ? 0.0 : critic.forward(ro.final_state)[0];
    return v;
}

std::vector<double> compute_advantages(const Rollout& ro, const std::vector<double>& values,
                                       double gamma) {
    if (values.size() != ro.size() + 1)
        throw DomainError("compute_advantages: values must have N+1 entries");
    std::vector<double> adv(ro.size());
    for (size_t i = 0; i < ro.size(); ++i)
        adv[i] = ro.rewards[i] + gamma * values[i + 1] - values[i];
    return adv;
}

double actor_objective(const Mlp& actor, const Rollout& ro,
                       const std::vector<double>& advantages, double entropy_weight,
                       const std::vector<int>& legal) {
    double obj = 0.0;
    for (size_t i = 0; i < ro.size(); ++i) {
        const std::vector<double> probs = masked_softmax(actor.forward(ro.states[i]), legal);
        obj += advantages[i] * std::log(probs[ro.actions[i]]);
        obj += entropy_weight * policy_entropy(probs);
    }
    return obj;
}

std::vector<double> actor_gradient(const Mlp& actor, const Rollout& ro,
                                   const std::vector<double>& advantages,
                                   double entropy_weight, const std::vector<int>& legal) {
    if (advantages.size() != ro.size())
        throw DomainError("actor_gradient: advantage count mismatch");
    std::vector<double> grad(actor.num_params(), 0.0);
    const int n_out = actor.spec().output_dim;
    std::vector<double> logits(n_out), dlogits(n_out);
    Mlp::Tape tape;
    for (size_t i = 0; i < ro.size(); ++i) {
        actor.forward(ro.states[i].data(), logits.data(), &tape);
        const std::vector<double> probs = masked_softmax(logits, legal);
        const double h = policy_entropy(probs);
        const int a = ro.actions[i];
        // d/dz_k [ A ln p_a ] = A (1{k==a} - p_k)     on legal k
        // d/dz_k [ eta H ]    = -eta p_k (ln p_k + H)  on legal k
        std::fill(dlogits.begin(), dlogits.end(), 0.0);
        for (int k : legal) {
            const double pk = probs[k];
            double g = advantages[i] * ((k == a ? 1.0 : 0.0) - pk);
            if (pk > 0.0) g -= entropy_weight * pk * (std::log(pk) + h);
            dlogits[k] = g;
        }
        actor.backward(tape, dlogits.data(), grad.data());
    }
    return grad;
}

double critic_loss(const Mlp& critic, const Rollout& ro, const std::vector<double>& targets) {
    double loss = 0.0;
    for (size_t i = 0; i < ro.size(); ++i) {
        const double d = targets[i] - critic.forward(ro.states[i])[0];
        loss += 0.5 * d * d;
    }
    return loss;
}

std::vector<double> critic_gradient(const Mlp& critic, const Rollout& ro,
                                    const std::vector<double>& targets) {
    if (targets.size() != ro.size())
        throw DomainError("critic_gradient: target count mismatch");
    if (critic.spec().output_dim != 1)
        throw DomainError("critic_gradient: critic must be scalar-valued");
    std::vector<double> grad(critic.num_params(), 0.0);
    double v = 0.0, dv = 0.0;
    Mlp::Tape tape;
    for (size_t i = 0; i < ro.size(); ++i) {
        critic.forward(ro.states[i].data(), &v, &tape);
        dv = v - targets[i];  // d loss / d V(s_i)
        critic.backward(tape, &dv, grad.data());
    }
    return grad;
}

void actor_update(Mlp& actor, const Rollout& ro, const std::vector<double>& advantages,
                  double lr, double entropy_weight, const std::vector<int>& legal) {
    const std::vector<double> g = actor_gradient(actor, ro, advantages, entropy_weight, legal);
    actor.add_scaled(g.data(), lr);  // ascent
}

void critic_update(Mlp& critic, const Rollout& ro, double gamma, double lr) {
    const std::vector<double> values = critic_values(critic, ro);
    std::vector<double> targets(ro.size());
    for (size_t i = 0; i < ro.size(); ++i)
        targets[i] = ro.rewards[i] + gamma * values[i + 1];
    const std::vector<double> g = critic_gradient(critic, ro, targets);
    critic.add_scaled(g.data(), -lr);  // descent
}

void TrainConfig::validate() const {
    if (hidden.empty()) throw ConfigError("train: need at least one hidden layer");
    for (int h : hidden)
        if (h <= 0) throw ConfigError("train: hidden widths must be positive");
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("train: gamma must be in [0,1]");
    if (entropy_weight < 0.0) throw ConfigError("train: entropy_weight must be >= 0");
    if (actor_lr <= 0.0 || critic_lr <= 0.0) throw ConfigError("train: learning rates must be > 0");
    if (episodes < 0) throw ConfigError("train: episodes must be >= 0");
    if (workers <= 0) throw ConfigError("train: workers must be > 0");
    if (divergence_bound <= 0.0) throw ConfigError("train: divergence_bound must be > 0");
    if (divergence_patience <= 0) throw ConfigError("train: divergence_patience must be > 0");
}

namespace {

struct EpisodeWork {
    Rollout rollout;
    std::vector<double> actor_grad;
    std::vector<double> critic_grad;
    double mean_abs_advantage = 0.0;
    double score = 0.0;
};

// Everything derived from one episode against a fixed parameter snapshot.
EpisodeWork run_episode(Env& env, const AgentParams& snapshot, const TrainConfig& cfg,
                        int episode_index) {
    EpisodeWork w;
    Rng rng(derive_seed(cfg.seed, 2 * static_cast<uint64_t>(episode_index) + 1));
    const uint64_t env_seed = derive_seed(cfg.seed, 2 * static_cast<uint64_t>(episode_index));
    w.rollout = sample_episode(env, snapshot, env_seed, rng);
    w.score = env.episode_score();

    const std::vector<double> values = critic_values(snapshot.critic, w.rollout);
    const std::vector<double> adv = compute_advantages(w.rollout, values, cfg.gamma);
    double abs_sum = 0.0;
    for (double a : adv) abs_sum += std::fabs(a);
    w.mean_abs_advantage = adv.empty() ? 0.0 : abs_sum / static_cast<double>(adv.size());

    const std::vector<int> legal =
        legal_action_indices(snapshot.num_actions(), snapshot.allow_enhance);
    w.actor_grad =
        actor_gradient(snapshot.actor, w.rollout, adv, cfg.entropy_weight, legal);
    std::vector<double> targets(adv.size());
    for (size_t i = 0; i < adv.size(); ++i) targets[i] = adv[i] + values[i];
    w.critic_grad = critic_gradient(snapshot.critic, w.rollout, targets);
    return w;
}

EpisodeStats stats_from(const EpisodeWork& w, int episode_index) {
    EpisodeStats st;
    st.episode = episode_index;
    st.steps = static_cast<int>(w.rollout.size());
    for (double r : w.rollout.rewards) st.total_reward += r;
    st.mean_reward = st.steps ? st.total_reward / st.steps : 0.0;
    st.score = w.score;
    st.mean_entropy = w.rollout.mean_entropy;
    st.mean_abs_advantage = w.mean_abs_advantage;
    return st;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const EnvFactory& make_env,
                  const std::function<void(const EpisodeStats&)>& on_episode) {
    cfg.validate();

    std::unique_ptr<Env> probe = make_env();
    const int obs_dim = probe->obs_dim();
    const int num_actions = probe->num_actions();
    if (obs_dim <= 0 || num_actions <= 0)
        throw ConfigError("train: env reports non-positive dimensions");

    Rng init_rng(derive_seed(cfg.seed, 0xa5a5a5a5ULL));
    TrainResult result{
        AgentParams(obs_dim, cfg.hidden, num_actions, cfg.allow_enhance, init_rng), {}};
    result.curve.reserve(cfg.episodes);

    std::vector<std::unique_ptr<Env>> envs;
    envs.push_back(std::move(probe));
    while (static_cast<int>(envs.size()) < cfg.workers) envs.push_back(make_env());

    int divergence_streak = 0;
    auto apply = [&](const EpisodeWork& w, int episode_index) {
        result.params.actor.add_scaled(w.actor_grad.data(), cfg.actor_lr);
        result.params.critic.add_scaled(w.critic_grad.data(), -cfg.critic_lr);
        if (w.mean_abs_advantage > cfg.divergence_bound) {
            if (++divergence_streak >= cfg.divergence_patience)
                throw TrainError("training diverged: mean |advantage| above " +
                                 std::to_string(cfg.divergence_bound) + " for " +
                                 std::to_string(divergence_streak) + " consecutive episodes");
        } else {
            divergence_streak = 0;
        }
        const EpisodeStats st = stats_from(w, episode_index);
        result.curve.push_back(st);
        if (on_episode) on_episode(st);
    };

    if (cfg.async_updates && cfg.workers > 1) {
        std::mutex mu;
        std::atomic<int> next_episode{0};
        std::exception_ptr failure;
        auto body = [&](int slot) {
            try {
                while (true) {
                    const int e = next_episode.fetch_add(1);
                    if (e >= cfg.episodes) return;
                    AgentParams snap;
                    {
                        std::lock_guard<std::mutex> lk(mu);
                        snap = result.params;
                    }
                    EpisodeWork w = run_episode(*envs[slot], snap, cfg, e);
                    std::lock_guard<std::mutex> lk(mu);
                    if (failure) return;
                    apply(w, e);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!failure) failure = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        for (int s = 0; s < cfg.workers; ++s) pool.emplace_back(body, s);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        return result;
    }

    for (int base = 0; base < cfg.episodes; base += cfg.workers) {
        const int batch = std::min(cfg.workers, cfg.episodes - base);
        std::vector<EpisodeWork> work(batch);
        if (batch == 1) {
            work[0] = run_episode(*envs[0], result.params, cfg, base);
        } else {
            const AgentParams snapshot = result.params;  // fixed for the round
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs(batch);
            for (int w = 0; w < batch; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        work[w] = run_episode(*envs[w], snapshot, cfg, base + w);
                    } catch (...) {
                        errs[w] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
            for (auto& e : errs)
                if (e) std::rethrow_exception(e);
        }
        for (int w = 0; w < batch; ++w) apply(work[w], base + w);
    }
    return result;
}

void write_curve_csv(std::ostream& out, const std::vector<EpisodeStats>& curve) {
    out << "episode,steps,total_reward,mean_reward,score,mean_entropy,mean_abs_advantage\n";
    out.precision(12);
    for (const EpisodeStats& s : curve)
        out << s.episode << ',' << s.steps << ',' << s.total_reward << ',' << s.mean_reward
            << ',' << s.score << ',' << s.mean_entropy << ',' << s.mean_abs_advantage << '\n';
}

}  // namespace enavs
