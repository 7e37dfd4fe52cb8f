#include "enavs/env.hpp"

#include "enavs/action.hpp"
#include "enavs/errors.hpp"
#include "enavs/rng.hpp"

namespace enavs {

void StreamingEnvConfig::validate() const {
    if (videos.empty()) throw ConfigError("env: no videos");
    if (traces.empty()) throw ConfigError("env: no traces");
    if (profiles.empty()) throw ConfigError("env: no compute profiles");
    weights.validate();
    const size_t ladder = videos.front()->ladder_mbps.size();
    for (const auto& v : videos) {
        v->validate();
        if (v->ladder_mbps.size() != ladder)
            throw ConfigError("env: videos disagree on ladder size");
    }
    for (const auto& p : profiles) p.validate();
}

StreamingEnv::StreamingEnv(StreamingEnvConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
}

int StreamingEnv::obs_dim() const {
    return 5 + cfg_.k1 + cfg_.k2 + 1 + num_actions();
}

int StreamingEnv::num_actions() const {
    return 2 * static_cast<int>(cfg_.videos.front()->ladder_mbps.size());
}

Observation StreamingEnv::reset(uint64_t episode_seed) {
    Rng rng(episode_seed);
    SimConfig sc;
    sc.mpd = cfg_.videos[rng.uniform_index(cfg_.videos.size())];
    sc.trace = cfg_.traces[rng.uniform_index(cfg_.traces.size())];
    sc.profile = cfg_.profiles[rng.uniform_index(cfg_.profiles.size())];
    sc.db_cap = cfg_.db_cap;
    sc.pb_cap = cfg_.pb_cap;
    sc.k1 = cfg_.k1;
    sc.k2 = cfg_.k2;
    sc.norm = cfg_.norm;
    pipe_.emplace(sc);
    log_.clear();
    return pipe_->observe();
}

Env::Feedback StreamingEnv::step(int action_index) {
    if (!pipe_) throw DomainError("env: step before reset");
    if (pipe_->done()) throw DomainError("env: episode already finished");
    if (action_index < 0 || action_index >= num_actions())
        throw DomainError("env: action index out of range");
    const StepOutcome out = pipe_->step(action_from_index(action_index));
    log_.push_back(out);
    Feedback fb;
    fb.reward = chunk_reward(cfg_.weights, out);
    fb.done = out.done;
    fb.obs = out.done ? Observation(obs_dim(), 0.0) : pipe_->observe();
    return fb;
}

double StreamingEnv::episode_score() const {
    if (log_.empty()) return 0.0;
    return episode_qoe(cfg_.weights, log_).weighted_total;
}

const Pipeline& StreamingEnv::pipeline() const {
    if (!pipe_) throw DomainError("env: no active episode");
    return *pipe_;
}

}  // namespace enavs
