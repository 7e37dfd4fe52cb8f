#include "enavs/policy.hpp"

#include <algorithm>
#include <numeric>

#include "enavs/errors.hpp"

namespace enavs {

std::vector<Action> full_action_set(int ladder_size) {
    std::vector<Action> out;
    out.reserve(static_cast<size_t>(ladder_size) * 2);
    for (int b = 0; b < ladder_size; ++b) {
        out.push_back({b, false});
        out.push_back({b, true});
    }
    return out;
}

std::vector<Action> mask_actions(const std::vector<Action>& actions, bool allow_enhance) {
    std::vector<Action> out;
    for (const Action& a : actions)
        if (allow_enhance || !a.enhance) out.push_back(a);
    if (out.empty()) throw ConfigError("action mask left no legal actions");
    return out;
}

Action bdash_decide(const std::vector<double>& recent_throughput_mbps,
                    const std::vector<double>& ladder_mbps) {
    if (ladder_mbps.empty()) throw ConfigError("bdash: empty ladder");
    Action a{0, false};
    if (recent_throughput_mbps.empty()) return a;  // cold start: lowest rate
    const double predicted =
        std::accumulate(recent_throughput_mbps.begin(), recent_throughput_mbps.end(), 0.0) /
        static_cast<double>(recent_throughput_mbps.size());
    for (int b = 0; b < static_cast<int>(ladder_mbps.size()); ++b)
        if (ladder_mbps[b] <= predicted) a.bitrate_index = b;
    return a;
}

Action BDashPolicy::decide(const DecisionContext& ctx, const Observation&) {
    std::vector<double> window(ctx.recent_throughput_mbps.begin(),
                               ctx.recent_throughput_mbps.begin() +
                                   std::min<size_t>(window_, ctx.recent_throughput_mbps.size()));
    return bdash_decide(window, *ctx.ladder_mbps);
}

Action greedy_decide(const DecisionContext& ctx) {
    const std::vector<double>& ladder = *ctx.ladder_mbps;
    if (ladder.empty()) throw ConfigError("greedy: empty ladder");

    const auto mean = [](const std::vector<double>& v, double fallback) {
        if (v.empty()) return fallback;
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double c_hat = mean(ctx.recent_throughput_mbps, ladder.front());
    const double tau_e_hat = mean(ctx.recent_enhance_s, 0.0);

    // playback runway: what is left of the playing chunk plus the queued ones
    const double slack =
        ctx.remaining_play_s + ctx.chunk_duration_s * ctx.pb_occupancy;

    const Action fallback{0, false};
    Action best = fallback;
    double best_psnr = -1.0;
    bool found = false;
    // canonical order doubles as the tie-break: lower bitrate, then p=0
    for (int idx = 0; idx < static_cast<int>(ctx.psnr_row->size()); ++idx) {
        const Action a = action_from_index(idx);
        const double eta = ladder[a.bitrate_index] * ctx.chunk_duration_s / c_hat +
                           (a.enhance ? tau_e_hat : 0.0);
        if (eta > slack) continue;
        const double p = (*ctx.psnr_row)[idx];
        if (!found || p > best_psnr) {
            best = a;
            best_psnr = p;
            found = true;
        }
    }
    return found ? best : fallback;
}

Action RandomPolicy::decide(const DecisionContext& ctx, const Observation&) {
    const auto legal =
        mask_actions(full_action_set(static_cast<int>(ctx.ladder_mbps->size())), allow_enhance_);
    return legal[rng_.uniform_index(legal.size())];
}

std::vector<StepOutcome> rollout_policy(Pipeline& pipe, Policy& policy) {
    std::vector<StepOutcome> log;
    while (!pipe.done()) {
        const DecisionContext ctx = pipe.decision_context();
        const Observation obs = pipe.observe();
        log.push_back(pipe.step(policy.decide(ctx, obs)));
    }
    return log;
}

}  // namespace enavs
