#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "enavs/corpus.hpp"
#include "enavs/qoe.hpp"
#include "enavs/trainer.hpp"

namespace enavs {

// FNV-1a over a string; used to stamp outputs with the effective config.
uint64_t fnv1a64(const std::string& s);
std::string hash_hex(uint64_t h);

// One JSON config file with a section per concern; every field has a
// default so an empty object is a valid config. CLI flags override fields
// after loading.
struct AppConfig {
    std::string corpus_dir = "corpus";
    CorpusConfig corpus;

    int db_cap = 5;
    int pb_cap = 5;
    int k1 = 8;
    int k2 = 8;

    QoeWeights weights;

    TrainConfig train;
    std::string checkpoint_path = "checkpoint.json";
    std::string curve_path = "curve.csv";

    std::string eval_policy = "bdash";
    std::string eval_checkpoint;
    std::string eval_split = "test";
    std::string eval_profile = "high";
    int eval_seeds = 20;
    uint64_t eval_base_seed = 100;
    int eval_workers = 1;
    std::string report_path = "report.json";

    std::string oracle_video;    // empty: first test video
    std::string oracle_trace;    // empty: first test trace
    std::string oracle_profile = "high";
    int oracle_horizon = 5;
    uint64_t oracle_budget = 1000000;
    std::string oracle_out = "oracle.json";

    nlohmann::json to_json() const;
    static AppConfig from_json(const nlohmann::json& j);
    static AppConfig load(const std::string& path);

    // Hash of the canonical serialized form; stamped on all outputs.
    std::string hash() const;
};

}  // namespace enavs
