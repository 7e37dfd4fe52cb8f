#pragma once

#include <cstdint>
#include <vector>

#include "enavs/action.hpp"
#include "enavs/qoe.hpp"
#include "enavs/sim.hpp"

namespace enavs {

struct OracleResult {
    double best_qoe = 0.0;
    std::vector<Action> best_sequence;
    QoeBreakdown breakdown;
    uint64_t evaluated = 0;
};

// Enumerates every action sequence over the manifest's full horizon,
// re-simulating each from scratch, and returns the maximum episode QoE.
// Sequences are visited in lexicographic action-index order and ties keep
// the first (smallest) sequence. Throws ConfigError when |A|^N exceeds
// the budget.
OracleResult exhaustive_best(const SimConfig& cfg, const QoeWeights& weights,
                             uint64_t budget = 1000000);

}  // namespace enavs
