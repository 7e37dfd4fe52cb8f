#pragma once

#include <vector>

#include <json.hpp>

#include "enavs/sim.hpp"

namespace enavs {

// User preference among quality, bitrate variation, and re-buffering.
struct QoeWeights {
    double alpha1 = 1.0;   // per dB
    double alpha2 = 1.0;   // per Mbps
    double alpha3 = 30.0;  // per second

    void validate() const;

    nlohmann::json to_json() const;
    static QoeWeights from_json(const nlohmann::json& j);
};

struct QoeBreakdown {
    double avg_psnr_db = 0.0;
    double avg_variation_mbps = 0.0;
    double avg_rebuffer_s = 0.0;
    double weighted_total = 0.0;

    nlohmann::json to_json() const;
};

// Per-chunk training reward:
//   alpha1*PSNR - alpha2*|R_i - R_{i-1}| - alpha3*rebuffer.
// The variation term is 0 for the first chunk so that summed rewards agree
// with the episode metric below.
double chunk_reward(const QoeWeights& w, const StepOutcome& out);

// Episode averages: PSNR and re-buffering over N chunks, variation over the
// N-1 consecutive pairs (0 when N = 1), combined with the weights.
QoeBreakdown episode_qoe(const QoeWeights& w, const std::vector<StepOutcome>& log);

}  // namespace enavs
