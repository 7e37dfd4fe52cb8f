#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "enavs/quality_model.hpp"
#include "enavs/trace.hpp"

namespace enavs {

// Rate-quality model calibrated to the reference measurements: 35.68 dB at
// 2 Mbps, 37.76 dB at 3 Mbps, 37.20 dB at 2 Mbps after enhancement, over the
// [2,4] Mbps ladder range.
RateQualityModel default_quality_model(double noise_sigma_db = 0.8);

// The four client compute tiers (enhancement-time scale factors).
std::vector<ComputeProfile> default_profiles();
const ComputeProfile& profile_by_name(const std::vector<ComputeProfile>& profiles,
                                      const std::string& name);

// Synthetic 1 Hz bandwidth trace: log-space AR(1) texture over a two-level
// regime process with dwell times of seconds to tens of seconds, giving
// sustained dips and recoveries. Level is arbitrary; corpus generation
// re-scales it anyway.
BandwidthTrace synth_trace(double duration_s, uint64_t seed);

struct CorpusConfig {
    int num_traces = 40;
    int num_videos = 40;
    double trace_duration_s = 320.0;
    std::vector<double> ladder_mbps = {2.0, 2.5, 3.0, 3.5, 4.0};
    double chunk_duration_s = 1.3;
    int min_chunks = 80;
    int max_chunks = 200;
    double noise_sigma_db = 0.8;
    // Scaled traces target a time-weighted mean drawn uniformly from here.
    double target_mean_lo_mbps = 2.2;
    double target_mean_hi_mbps = 3.4;
    uint64_t seed = 7;

    void validate() const;
    nlohmann::json to_json() const;
    static CorpusConfig from_json(const nlohmann::json& j);
};

struct CorpusSplit {
    std::vector<std::shared_ptr<const MpdManifest>> videos;
    std::vector<std::shared_ptr<const BandwidthTrace>> traces;
    std::vector<std::string> video_names;
    std::vector<std::string> trace_names;
};

struct Corpus {
    CorpusSplit train;
    CorpusSplit test;
    std::vector<double> ladder_mbps;
    double chunk_duration_s = 1.0;

    const CorpusSplit& split(const std::string& name) const;
};

// Writes traces/{train,test}/*.csv, videos/{train,test}/*.json, and
// corpus_manifest.json under out_dir. Fully determined by the config.
// Train traces are mean-scaled; test traces are max-scaled, with the max
// target chosen so the resulting mean still lands in the configured range.
void generate_corpus(const CorpusConfig& cfg, const std::string& out_dir);

Corpus load_corpus(const std::string& dir);

}  // namespace enavs
