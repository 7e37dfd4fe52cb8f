#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "enavs/corpus.hpp"
#include "enavs/policy.hpp"
#include "enavs/qoe.hpp"

namespace enavs {

// Fixed evaluation protocol: for each of `seeds` evaluation seeds the test
// videos are paired with a seeded shuffle of the traces and each pair is
// played once under the chosen compute profile. Stochastic policies get a
// fresh per-episode seed, so reports are reproducible for any worker count.
struct EvalProtocol {
    std::string split = "test";
    std::string profile = "high";
    QoeWeights weights;
    int seeds = 20;
    uint64_t base_seed = 100;
    int db_cap = 5;
    int pb_cap = 5;
    int k1 = 8;
    int k2 = 8;
    ObsNorm norm;
    int workers = 1;

    void validate() const;
};

struct EpisodeRecord {
    int seed_index = 0;
    int episode_index = 0;
    std::string video;
    std::string trace;
    int num_chunks = 0;
    QoeBreakdown qoe;
    double startup_s = 0.0;
    double enhanced_fraction = 0.0;

    nlohmann::json to_json() const;
    static EpisodeRecord from_json(const nlohmann::json& j);
};

struct EvalReport {
    std::string policy;
    std::string split;
    std::string profile;
    QoeWeights weights;
    int seeds = 0;
    uint64_t base_seed = 0;
    std::string config_hash;  // filled by the command layer

    std::vector<EpisodeRecord> episodes;   // ordered by (seed, episode)
    std::vector<double> per_seed_mean_qoe;
    std::vector<double> per_seed_mean_psnr;
    double mean_qoe = 0.0;
    double std_qoe = 0.0;  // sample std over seed means
    double mean_psnr_db = 0.0;
    double mean_variation_mbps = 0.0;
    double mean_rebuffer_s = 0.0;
    double mean_enhanced_fraction = 0.0;
    std::vector<double> psnr_cdf;  // every delivered chunk PSNR, ascending

    nlohmann::json to_json() const;
    static EvalReport from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static EvalReport load(const std::string& path);
};

// Builds a policy for one episode; the seed only matters for stochastic
// policies.
using PolicyFactory = std::function<std::unique_ptr<Policy>(uint64_t episode_seed)>;

EvalReport evaluate_policy(const Corpus& corpus, const EvalProtocol& proto,
                           const std::string& policy_name, const PolicyFactory& make);

// Pairwise comparison of reports taken under identical conditions
// (split/profile/weights/seed protocol); throws ConfigError otherwise.
struct Comparison {
    std::vector<std::string> policies;
    std::vector<double> mean_qoe;
    std::vector<double> std_qoe;
    std::vector<double> mean_psnr_db;
    std::vector<double> mean_variation_mbps;
    std::vector<double> mean_rebuffer_s;
    // improvement_pct[i][j]: percentage QoE improvement of policy i over j
    std::vector<std::vector<double>> improvement_pct;

    nlohmann::json to_json() const;
};

Comparison compare_reports(const std::vector<EvalReport>& reports);

}  // namespace enavs
