#include "enavs/quality_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "enavs/errors.hpp"
#include "enavs/rng.hpp"

namespace enavs {

void RateQualityModel::validate() const {
    if (!(beta1_db > 0.0)) throw ConfigError("rate-quality model requires beta1 > 0");
    if (gain_at_min_db < 0.0) throw ConfigError("enhancement gain must be >= 0");
    if (noise_sigma_db < 0.0) throw ConfigError("noise sigma must be >= 0");
    if (!(r_min_mbps < r_max_mbps)) throw ConfigError("ladder range requires r_min < r_max");
}

void ComputeProfile::validate() const {
    if (!(scale_factor > 0.0)) throw ConfigError("compute profile scale factor must be > 0");
    if (frames_per_chunk < 1) throw ConfigError("frames_per_chunk must be >= 1");
    if (!(reference_fps > 0.0)) throw ConfigError("reference_fps must be > 0");
}

void MpdManifest::validate() const {
    if (num_chunks < 1) throw ConfigError("manifest needs at least one chunk");
    if (ladder_mbps.empty()) throw ConfigError("manifest ladder is empty");
    if (!std::is_sorted(ladder_mbps.begin(), ladder_mbps.end()))
        throw ConfigError("manifest ladder must be sorted ascending");
    if (!(chunk_duration_s > 0.0)) throw ConfigError("chunk duration must be > 0");
    if (static_cast<int>(psnr_db.size()) != num_chunks)
        throw ConfigError("psnr map must have one row per chunk");
    const int actions = action_count();
    for (int i = 0; i < num_chunks; ++i) {
        const auto& row = psnr_db[i];
        if (static_cast<int>(row.size()) != actions)
            throw ConfigError("psnr row " + std::to_string(i) + " has wrong width");
        for (size_t b = 0; b + 1 < ladder_mbps.size(); ++b) {
            // nondecreasing in bitrate at fixed enhance flag
            if (row[2 * b] > row[2 * (b + 1)] + 1e-12 ||
                row[2 * b + 1] > row[2 * (b + 1) + 1] + 1e-12)
                throw ConfigError("psnr map not monotone in bitrate at chunk " +
                                  std::to_string(i));
        }
        for (size_t b = 0; b < ladder_mbps.size(); ++b) {
            if (row[2 * b + 1] + 1e-12 < row[2 * b])
                throw ConfigError("enhancement reduces psnr at chunk " + std::to_string(i));
        }
    }
}

nlohmann::json MpdManifest::to_json() const {
    return nlohmann::json{{"num_chunks", num_chunks},
                          {"chunk_duration_s", chunk_duration_s},
                          {"ladder_mbps", ladder_mbps},
                          {"psnr", psnr_db}};
}

MpdManifest MpdManifest::from_json(const nlohmann::json& j) {
    MpdManifest m;
    m.num_chunks = j.at("num_chunks").get<int>();
    m.chunk_duration_s = j.at("chunk_duration_s").get<double>();
    m.ladder_mbps = j.at("ladder_mbps").get<std::vector<double>>();
    m.psnr_db = j.at("psnr").get<std::vector<std::vector<double>>>();
    m.validate();
    return m;
}

RateQualityModel fit_rate_quality(const std::vector<std::pair<double, double>>& points) {
    std::set<double> rates;
    for (const auto& [r, _] : points) rates.insert(r);
    if (rates.size() < 2)
        throw CalibrationError("rate-quality fit needs >= 2 points with distinct bitrates");

    // least squares on x = ln(R)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& [r, db] : points) {
        if (!(r > 0.0)) throw CalibrationError("bitrates must be positive");
        const double x = std::log(r);
        sx += x;
        sy += db;
        sxx += x * x;
        sxy += x * db;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12)
        throw CalibrationError("degenerate fit: bitrates too close together");

    RateQualityModel m;
    m.beta1_db = (n * sxy - sx * sy) / denom;
    m.beta0_db = (sy - m.beta1_db * sx) / n;
    m.r_min_mbps = *rates.begin();
    m.r_max_mbps = *rates.rbegin();
    return m;
}

namespace {
void check_in_ladder_range(const RateQualityModel& model, double bitrate_mbps) {
    if (bitrate_mbps < model.r_min_mbps - 1e-9 || bitrate_mbps > model.r_max_mbps + 1e-9)
        throw DomainError("bitrate " + std::to_string(bitrate_mbps) +
                          " Mbps outside ladder range [" + std::to_string(model.r_min_mbps) +
                          ", " + std::to_string(model.r_max_mbps) + "]");
}
}  // namespace

double base_psnr(const RateQualityModel& model, double bitrate_mbps, double chunk_jitter_db) {
    check_in_ladder_range(model, bitrate_mbps);
    return model.beta0_db + model.beta1_db * std::log(bitrate_mbps) + chunk_jitter_db;
}

double enhancement_gain(const RateQualityModel& model, double bitrate_mbps) {
    check_in_ladder_range(model, bitrate_mbps);
    return model.gain_at_min_db * (model.r_max_mbps - bitrate_mbps) /
           (model.r_max_mbps - model.r_min_mbps);
}

double enhancement_time(const ComputeProfile& profile) {
    profile.validate();
    return profile.scale_factor * profile.frames_per_chunk / profile.reference_fps;
}

MpdManifest generate_mpd(const RateQualityModel& model, int num_chunks,
                         const std::vector<double>& ladder_mbps,
                         double chunk_duration_s, uint64_t seed) {
    if (ladder_mbps.empty()) throw ConfigError("generate_mpd: empty bitrate ladder");
    if (num_chunks < 1) throw ConfigError("generate_mpd: num_chunks must be >= 1");
    if (!std::is_sorted(ladder_mbps.begin(), ladder_mbps.end()))
        throw ConfigError("generate_mpd: ladder must be sorted ascending");
    model.validate();

    MpdManifest m;
    m.num_chunks = num_chunks;
    m.chunk_duration_s = chunk_duration_s;
    m.ladder_mbps = ladder_mbps;
    m.psnr_db.resize(num_chunks);

    Rng rng(seed);
    const int actions = m.action_count();
    for (int i = 0; i < num_chunks; ++i) {
        // Jitter is a scalar shift of the whole row, so row-internal
        // monotonicity depends only on the model. Redraw on the (pathological)
        // chance a row violates the invariants, then give up with a config
        // error rather than emit a broken manifest.
        for (int attempt = 0;; ++attempt) {
            const double jitter = model.noise_sigma_db > 0.0
                                      ? rng.normal(0.0, model.noise_sigma_db)
                                      : 0.0;
            std::vector<double> row(actions);
            for (size_t b = 0; b < ladder_mbps.size(); ++b) {
                const double base = base_psnr(model, ladder_mbps[b], jitter);
                row[2 * b] = base;
                row[2 * b + 1] = base + enhancement_gain(model, ladder_mbps[b]);
            }
            bool ok = true;
            for (size_t b = 0; ok && b + 1 < ladder_mbps.size(); ++b)
                ok = row[2 * b] <= row[2 * (b + 1)] && row[2 * b + 1] <= row[2 * (b + 1) + 1];
            if (ok) {
                m.psnr_db[i] = std::move(row);
                break;
            }
            if (attempt >= 100)
                throw ConfigError("rate-quality model is not monotone on this ladder");
        }
    }
    m.validate();
    return m;
}

}  // namespace enavs
