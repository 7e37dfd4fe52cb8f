#include "enavs/oracle.hpp"

#include <string>

#include "enavs/errors.hpp"

namespace enavs {

OracleResult exhaustive_best(const SimConfig& cfg, const QoeWeights& weights,
                             uint64_t budget) {
    cfg.validate();
    weights.validate();
    const int n = cfg.mpd->num_chunks;
    const int a = cfg.mpd->action_count();

    uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > budget / static_cast<uint64_t>(a))
            throw ConfigError("oracle: |A|^N = " + std::to_string(a) + "^" +
                              std::to_string(n) + " exceeds budget " +
                              std::to_string(budget));
        total *= static_cast<uint64_t>(a);
    }

    OracleResult best;
    std::vector<int> seq(n, 0);  // odometer, most-significant digit first
    std::vector<StepOutcome> log;
    log.reserve(n);
    bool first = true;
    while (true) {
        Pipeline pipe(cfg);
        log.clear();
        for (int i = 0; i < n; ++i) log.push_back(pipe.step(action_from_index(seq[i])));
        const QoeBreakdown q = episode_qoe(weights, log);
        ++best.evaluated;
        // strict > keeps the lexicographically smallest maximizer
        if (first || q.weighted_total > best.best_qoe) {
            first = false;
            best.best_qoe = q.weighted_total;
            best.breakdown = q;
            best.best_sequence.clear();
            for (int i = 0; i < n; ++i) best.best_sequence.push_back(action_from_index(seq[i]));
        }
        int pos = n - 1;
        while (pos >= 0 && seq[pos] == a - 1) seq[pos--] = 0;
        if (pos < 0) break;
        ++seq[pos];
    }
    return best;
}

}  // namespace enavs
