#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "enavs/action.hpp"
#include "enavs/quality_model.hpp"
#include "enavs/rng.hpp"
#include "enavs/trace.hpp"

namespace enavs {

// Feature scaling constants for the observation vector; fixed in config so
// checkpoints stay comparable.
struct ObsNorm {
    // Scales are chosen so coordinates the policy must discriminate on
    // (buffer levels, recent throughput, enhancement speed) span a few units
    // of range, while near-constant coordinates (the PSNR table) stay small.
    // Skewing it the other way makes every pair of states look alike to a
    // freshly initialised network and slows policy separation badly.
    double buffer_div = 0.25;  // applied to occupancy/capacity ratios
    double throughput_div_mbps = 5.0;
    double time_div_s = 10.0;
    double enhance_time_div_s = 1.0;
    double psnr_div_db = 400.0;
};

struct SimConfig {
    std::shared_ptr<const MpdManifest> mpd;
    std::shared_ptr<const BandwidthTrace> trace;
    ComputeProfile profile;
    int db_cap = 5;  // download buffer capacity, chunks
    int pb_cap = 5;  // playback buffer capacity, chunks
    int k1 = 8;      // throughput history length
    int k2 = 8;      // enhancement-time history length
    bool enhance_time_jitter = false;  // +/-10% multiplicative, off by default
    uint64_t jitter_seed = 0;
    ObsNorm norm;

    void validate() const;
};

struct StepTimings {
    double t_d = 0.0;    // download request time
    double tau_d = 0.0;  // download duration
    double t_e = 0.0;    // enhancement-module entry time
    double tau_e = 0.0;  // processing duration (0 when not enhanced)
    double t_p = 0.0;    // playback start time
};

struct StepOutcome {
    int chunk = 0;  // 0-based
    Action action;
    double psnr_db = 0.0;
    double rebuffer_s = 0.0;       // 0 for the first chunk by convention
    double bitrate_mbps = 0.0;
    double prev_bitrate_mbps = 0.0;  // 0 before the first chunk
    bool done = false;
    StepTimings timings;
    int db_at_decision = 0;  // buffer occupancies at this chunk's request time
    int pb_at_decision = 0;
};

using Observation = std::vector<double>;

// Raw (unnormalized) view of the state at the next decision instant; shared
// by the observation encoder and the baseline policies.
struct DecisionContext {
    int chunk = 0;  // 0-based index of the chunk about to be requested
    int num_chunks = 0;
    double chunk_duration_s = 1.0;
    int db_occupancy = 0;
    int pb_occupancy = 0;
    int db_cap = 0;
    int pb_cap = 0;
    double download_percent = 0.0;   // fraction of chunks already requested
    double elapsed_enhance_s = 0.0;  // time the in-flight chunk has spent in the enhancer
    double remaining_play_s = 0.0;   // time left on the chunk being played
    std::vector<double> recent_throughput_mbps;  // newest first, up to k1
    std::vector<double> recent_enhance_s;        // newest first, enhanced chunks only, up to k2
    double prev_bitrate_mbps = 0.0;
    const std::vector<double>* ladder_mbps = nullptr;
    const std::vector<double>* psnr_row = nullptr;  // manifest row for this chunk
};

// Event-timeline engine for the download -> enhance -> playback pipeline.
// Single-owner; advance only through step(). Independent episodes can run
// concurrently with no shared state.
class Pipeline {
public:
    explicit Pipeline(SimConfig cfg);

    void reset();

    bool done() const { return next_ == cfg_.mpd->num_chunks; }
    int next_chunk() const { return next_; }
    int num_actions() const { return cfg_.mpd->action_count(); }
    int obs_dim() const;

    // Valid while not done.
    double next_decision_time() const { return next_decision_time_; }
    DecisionContext decision_context() const;
    Observation observe() const;

    StepOutcome step(Action a);

    // Literal evaluation of the buffer-occupancy formulas at the decision
    // instant of chunk i (0-based, i <= next_chunk()); reference oracle for
    // the engine's incremental counters.
    std::pair<int, int> occupancy_by_formula(int i) const;

    int db_occupancy() const;
    int pb_occupancy() const;

    double startup_delay_s() const;  // playback start of the first chunk
    int enhanced_count() const { return enhanced_count_; }

    const std::vector<StepOutcome>& log() const { return log_; }
    const SimConfig& config() const { return cfg_; }

    // per-decision timing arrays (0-based chunk index), for invariant checks
    const std::vector<double>& request_times() const { return t_d_; }
    const std::vector<double>& download_durations() const { return tau_d_; }
    const std::vector<double>& enhance_entry_times() const { return t_e_; }
    const std::vector<double>& enhance_durations() const { return tau_e_; }
    const std::vector<double>& play_start_times() const { return t_p_; }

private:
    SimConfig cfg_;
    std::vector<double> t_d_, tau_d_, t_e_, tau_e_, t_p_, tau_r_;
    std::vector<double> realized_mbps_;  // size / tau_d per chunk
    std::vector<double> enhance_hist_;   // tau_e of enhanced chunks, in decision order
    std::vector<int> chosen_action_;     // action_index per chunk
    int next_ = 0;
    int enhanced_count_ = 0;
    double next_decision_time_ = 0.0;
    // monotone event cursors at the next decision time
    int entered_before_ = 0;    // #{j : t_e[j] < next_decision_time_}
    int processed_before_ = 0;  // #{j : t_e[j] + tau_e[j] < next_decision_time_}
    int played_before_ = 0;     // #{j : t_p[j] < next_decision_time_}
    Rng jitter_rng_;
    std::vector<StepOutcome> log_;

    void advance_cursors();
    double elapsed_enhance() const;
    double remaining_play() const;
};

// One row per chunk:
// i,bitrate_mbps,enhance,t_d,tau_d,t_e,tau_e,t_p,tau_r,psnr_db,db,pb
// (i is 1-based in the export).
void write_episode_csv(std::ostream& out, const std::vector<StepOutcome>& log);

}  // namespace enavs
