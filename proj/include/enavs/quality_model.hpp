#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "enavs/action.hpp"

namespace enavs {

// Logarithmic rate-quality curve dB = beta0 + beta1*ln(R) plus an
// enhancement gain that decays linearly from gain_at_min_db at r_min to 0
// at r_max. Stands in for encoder/DNN measurements.
struct RateQualityModel {
    double beta0_db = 0.0;
    double beta1_db = 0.0;        // per log-Mbps, must be > 0
    double gain_at_min_db = 0.0;  // enhancement gain at the lowest ladder rate
    double noise_sigma_db = 0.0;  // per-chunk quality jitter std-dev
    double r_min_mbps = 0.0;
    double r_max_mbps = 0.0;

    void validate() const;  // throws ConfigError when invariants fail
};

// Client hardware class: a multiplier on the reference per-frame
// enhancement speed.
struct ComputeProfile {
    std::string name;
    double scale_factor = 1.0;
    int frames_per_chunk = 25;
    double reference_fps = 98.9;

    void validate() const;
};

// Per-chunk, per-action PSNR map plus the ladder, as carried by the
// manifest the client downloads up front.
struct MpdManifest {
    int num_chunks = 0;
    double chunk_duration_s = 1.0;
    std::vector<double> ladder_mbps;              // ascending
    std::vector<std::vector<double>> psnr_db;     // [chunk][action_index]

    int action_count() const { return static_cast<int>(ladder_mbps.size()) * 2; }
    double psnr(int chunk, Action a) const { return psnr_db[chunk][action_index(a)]; }
    const std::vector<double>& psnr_row(int chunk) const { return psnr_db[chunk]; }

    void validate() const;

    nlohmann::json to_json() const;
    static MpdManifest from_json(const nlohmann::json& j);
};

// Least-squares fit of dB = beta0 + beta1*ln(Mbps). Needs >= 2 points with
// distinct bitrates; exact for two points. r_min/r_max are set to the input
// range; gain and sigma are left for the caller.
RateQualityModel fit_rate_quality(const std::vector<std::pair<double, double>>& points);

// beta0 + beta1*ln(bitrate) + chunk_jitter. Bitrate must lie in
// [r_min, r_max].
double base_psnr(const RateQualityModel& model, double bitrate_mbps, double chunk_jitter_db);

// gain_at_min * (r_max - bitrate) / (r_max - r_min), zero at the top rate.
double enhancement_gain(const RateQualityModel& model, double bitrate_mbps);

// Seconds to process one chunk on this profile:
// scale_factor * frames_per_chunk / reference_fps.
double enhancement_time(const ComputeProfile& profile);

// Builds the manifest: psnr(i, (R, p)) = base_psnr(R, jitter_i) +
// p * enhancement_gain(R), jitter_i ~ N(0, sigma) drawn once per chunk.
// Pure function of its arguments (seed included).
MpdManifest generate_mpd(const RateQualityModel& model, int num_chunks,
                         const std::vector<double>& ladder_mbps,
                         double chunk_duration_s, uint64_t seed);

}  // namespace enavs
