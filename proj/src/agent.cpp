#include "enavs/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "enavs/errors.hpp"

namespace enavs {

std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty()) throw DomainError("softmax: empty logits");
    const double zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - zmax);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> masked_softmax(const std::vector<double>& logits,
                                   const std::vector<int>& legal) {
    if (legal.empty()) throw DomainError("masked_softmax: no legal actions");
    double zmax = -std::numeric_limits<double>::infinity();
    for (int idx : legal) {
        if (idx < 0 || idx >= static_cast<int>(logits.size()))
            throw DomainError("masked_softmax: legal index out of range");
        zmax = std::max(zmax, logits[idx]);
    }
    std::vector<double> p(logits.size(), 0.0);
    double sum = 0.0;
    for (int idx : legal) {
        p[idx] = std::exp(logits[idx] - zmax);
        sum += p[idx];
    }
    for (int idx : legal) p[idx] /= sum;
    return p;
}

double policy_entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

double advantage(double reward, double v_next, double v_cur, double gamma, bool terminal) {
    return reward + (terminal ? 0.0 : gamma * v_next) - v_cur;
}

std::vector<int> legal_action_indices(int num_actions, bool allow_enhance) {
    std::vector<int> out;
    for (int i = 0; i < num_actions; ++i)
        if (allow_enhance || i % 2 == 0) out.push_back(i);
    if (out.empty()) throw ConfigError("action mask left no legal actions");
    return out;
}

AgentParams::AgentParams(int obs_dim, const std::vector<int>& hidden, int num_actions,
                         bool allow_enhance_, Rng& rng)
    : actor(MlpSpec{obs_dim, hidden, num_actions}),
      critic(MlpSpec{obs_dim, hidden, 1}),
      allow_enhance(allow_enhance_) {
    actor.init_weights(rng);
    critic.init_weights(rng);
}

std::pair<std::vector<double>, double> AgentParams::forward(const Observation& obs) const {
    const std::vector<double> logits = actor.forward(obs);
    const std::vector<double> probs =
        masked_softmax(logits, legal_action_indices(num_actions(), allow_enhance));
    const double value = critic.forward(obs)[0];
    return {probs, value};
}

nlohmann::json AgentParams::to_json() const {
    return {{"format_version", 1},
            {"allow_enhance", allow_enhance},
            {"actor", actor.to_json()},
            {"critic", critic.to_json()}};
}

AgentParams AgentParams::from_json(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != 1)
        throw ParseError("checkpoint: unsupported format_version");
    AgentParams p;
    p.allow_enhance = j.at("allow_enhance").get<bool>();
    p.actor = Mlp::from_json(j.at("actor"));
    p.critic = Mlp::from_json(j.at("critic"));
    if (p.actor.spec().input_dim != p.critic.spec().input_dim)
        throw ParseError("checkpoint: actor/critic input dims differ");
    if (p.critic.spec().output_dim != 1)
        throw ParseError("checkpoint: critic must have one output");
    return p;
}

void AgentParams::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << to_json().dump(2) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

AgentParams AgentParams::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Action AgentPolicy::decide(const DecisionContext& ctx, const Observation& obs) {
    if (static_cast<int>(obs.size()) != params_.obs_dim())
        throw DomainError("agent policy: observation size mismatch");
    if (static_cast<int>(ctx.psnr_row->size()) != params_.num_actions())
        throw DomainError("agent policy: action count mismatch");
    const auto [probs, value] = params_.forward(obs);
    (void)value;
    int best = 0;
    for (int i = 1; i < static_cast<int>(probs.size()); ++i)
        if (probs[i] > probs[best]) best = i;
    return action_from_index(best);
}

}  // namespace enavs
