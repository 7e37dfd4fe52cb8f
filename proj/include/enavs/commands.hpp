#pragma once

#include <string>
#include <vector>

#include "enavs/config.hpp"
#include "enavs/evaluate.hpp"
#include "enavs/oracle.hpp"

namespace enavs {

// Writes the corpus under cfg.corpus_dir and returns the manifest path.
std::string cmd_generate(const AppConfig& cfg);

struct TrainOutputs {
    std::string checkpoint_path;
    std::string curve_path;
    int episodes = 0;
    double final_window_mean_qoe = 0.0;  // mean episode QoE over the last 100 episodes
};

// Trains on the train split across all compute profiles; writes checkpoint
// JSON and curve CSV.
TrainOutputs cmd_train(const AppConfig& cfg);

// Evaluates a named baseline or a checkpoint on a corpus split; writes and
// returns the report.
EvalReport cmd_evaluate(const AppConfig& cfg);

// Loads reports, checks they are comparable, returns the table.
Comparison cmd_compare(const std::vector<std::string>& report_paths);

// Exhaustive search on a small instance taken from the corpus (or explicit
// video/trace paths); writes the best sequence as JSON.
OracleResult cmd_oracle(const AppConfig& cfg);

}  // namespace enavs
