#include "enavs/qoe.hpp"

#include <cmath>

#include "enavs/errors.hpp"

namespace enavs {

void QoeWeights::validate() const {
    if (alpha1 < 0 || alpha2 < 0 || alpha3 < 0)
        throw ConfigError("qoe weights must be >= 0");
}

nlohmann::json QoeWeights::to_json() const {
    return nlohmann::json::array({alpha1, alpha2, alpha3});
}

QoeWeights QoeWeights::from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("qoe weights must be a [alpha1, alpha2, alpha3] array");
    QoeWeights w{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    w.validate();
    return w;
}

nlohmann::json QoeBreakdown::to_json() const {
    return nlohmann::json{{"avg_psnr_db", avg_psnr_db},
                          {"avg_variation_mbps", avg_variation_mbps},
                          {"avg_rebuffer_s", avg_rebuffer_s},
                          {"weighted_total", weighted_total}};
}

double chunk_reward(const QoeWeights& w, const StepOutcome& out) {
    const double variation =
        out.chunk == 0 ? 0.0 : std::abs(out.bitrate_mbps - out.prev_bitrate_mbps);
    return w.alpha1 * out.psnr_db - w.alpha2 * variation - w.alpha3 * out.rebuffer_s;
}

QoeBreakdown episode_qoe(const QoeWeights& w, const std::vector<StepOutcome>& log) {
    if (log.empty()) throw DomainError("episode_qoe: empty episode log");
    const double n = static_cast<double>(log.size());
    QoeBreakdown b;
    for (const auto& s : log) {
        b.avg_psnr_db += s.psnr_db;
        b.avg_rebuffer_s += s.rebuffer_s;
    }
    b.avg_psnr_db /= n;
    b.avg_rebuffer_s /= n;
    if (log.size() > 1) {
        for (size_t i = 1; i < log.size(); ++i)
            b.avg_variation_mbps += std::abs(log[i].bitrate_mbps - log[i - 1].bitrate_mbps);
        b.avg_variation_mbps /= (n - 1.0);
    }
    b.weighted_total = w.alpha1 * b.avg_psnr_db - w.alpha2 * b.avg_variation_mbps -
                       w.alpha3 * b.avg_rebuffer_s;
    return b;
}

}  // namespace enavs
