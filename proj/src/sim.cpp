#include "enavs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "enavs/errors.hpp"

namespace enavs {

void SimConfig::validate() const {
    if (!mpd) throw ConfigError("sim config: missing manifest");
    if (!trace) throw ConfigError("sim config: missing bandwidth trace");
    mpd->validate();
    profile.validate();
    if (db_cap < 1 || pb_cap < 1) throw ConfigError("sim config: buffer caps must be >= 1");
    if (k1 < 0 || k2 < 0) throw ConfigError("sim config: history lengths must be >= 0");
}

Pipeline::Pipeline(SimConfig cfg) : cfg_(std::move(cfg)), jitter_rng_(0) {
    cfg_.validate();
    reset();
}

void Pipeline::reset() {
    const int n = cfg_.mpd->num_chunks;
    t_d_.clear();
    tau_d_.clear();
    t_e_.clear();
    tau_e_.clear();
    t_p_.clear();
    tau_r_.clear();
    realized_mbps_.clear();
    enhance_hist_.clear();
    chosen_action_.clear();
    log_.clear();
    t_d_.reserve(n);
    tau_d_.reserve(n);
    t_e_.reserve(n);
    tau_e_.reserve(n);
    t_p_.reserve(n);
    next_ = 0;
    enhanced_count_ = 0;
    next_decision_time_ = 0.0;  // first request goes out immediately
    entered_before_ = processed_before_ = played_before_ = 0;
    jitter_rng_ = Rng(cfg_.jitter_seed);
}

int Pipeline::obs_dim() const { return 5 + cfg_.k1 + cfg_.k2 + 1 + num_actions(); }

void Pipeline::advance_cursors() {
    const double t = next_decision_time_;
    while (entered_before_ < next_ && t_e_[entered_before_] < t) ++entered_before_;
    while (processed_before_ < next_ &&
           t_e_[processed_before_] + tau_e_[processed_before_] < t)
        ++processed_before_;
    while (played_before_ < next_ && t_p_[played_before_] < t) ++played_before_;
}

int Pipeline::db_occupancy() const {
    // downloaded but not yet handed to the enhancement module
    return next_ - entered_before_;
}

int Pipeline::pb_occupancy() const {
    // entered the module, minus the one still inside, minus those played
    return std::max(0, entered_before_ - 1 - played_before_);
}

double Pipeline::elapsed_enhance() const {
    // idle when everything that entered the module has finished
    if (processed_before_ == entered_before_) return 0.0;
    return next_decision_time_ - t_e_[processed_before_];
}

double Pipeline::remaining_play() const {
    if (played_before_ == 0) return 0.0;
    const double since_start = next_decision_time_ - t_p_[played_before_ - 1];
    return std::max(cfg_.mpd->chunk_duration_s - since_start, 0.0);
}

DecisionContext Pipeline::decision_context() const {
    if (done()) throw DomainError("decision_context: episode finished");
    DecisionContext ctx;
    ctx.chunk = next_;
    ctx.num_chunks = cfg_.mpd->num_chunks;
    ctx.chunk_duration_s = cfg_.mpd->chunk_duration_s;
    ctx.db_occupancy = db_occupancy();
    ctx.pb_occupancy = pb_occupancy();
    ctx.db_cap = cfg_.db_cap;
    ctx.pb_cap = cfg_.pb_cap;
    ctx.download_percent = static_cast<double>(next_) / cfg_.mpd->num_chunks;
    ctx.elapsed_enhance_s = elapsed_enhance();
    ctx.remaining_play_s = remaining_play();
    ctx.recent_throughput_mbps.reserve(cfg_.k1);
    for (int j = next_ - 1; j >= 0 && static_cast<int>(ctx.recent_throughput_mbps.size()) < cfg_.k1; --j)
        ctx.recent_throughput_mbps.push_back(realized_mbps_[j]);
    ctx.recent_enhance_s.reserve(cfg_.k2);
    for (int j = static_cast<int>(enhance_hist_.size()) - 1;
         j >= 0 && static_cast<int>(ctx.recent_enhance_s.size()) < cfg_.k2; --j)
        ctx.recent_enhance_s.push_back(enhance_hist_[j]);
    ctx.prev_bitrate_mbps =
        next_ > 0 ? cfg_.mpd->ladder_mbps[chosen_action_[next_ - 1] / 2] : 0.0;
    ctx.ladder_mbps = &cfg_.mpd->ladder_mbps;
    ctx.psnr_row = &cfg_.mpd->psnr_row(next_);
    return ctx;
}

Observation Pipeline::observe() const {
    const DecisionContext ctx = decision_context();
    const ObsNorm& nm = cfg_.norm;
    Observation obs;
    obs.reserve(obs_dim());
    obs.push_back(static_cast<double>(ctx.db_occupancy) / ctx.db_cap / nm.buffer_div);
    obs.push_back(static_cast<double>(ctx.pb_occupancy) / ctx.pb_cap / nm.buffer_div);
    obs.push_back(ctx.download_percent);
    obs.push_back(ctx.elapsed_enhance_s / nm.enhance_time_div_s);
    obs.push_back(ctx.remaining_play_s / nm.time_div_s);
    for (int k = 0; k < cfg_.k1; ++k)
        obs.push_back(k < static_cast<int>(ctx.recent_throughput_mbps.size())
                          ? ctx.recent_throughput_mbps[k] / nm.throughput_div_mbps
                          : 0.0);
    // Before any chunk has been enhanced, the history slots report the
    // device's nominal per-chunk enhancement time (the client benchmarks its
    // own hardware), so compute speed is visible from the first decision.
    const double nominal_tau_e = enhancement_time(cfg_.profile);
    for (int k = 0; k < cfg_.k2; ++k)
        obs.push_back((k < static_cast<int>(ctx.recent_enhance_s.size())
                           ? ctx.recent_enhance_s[k]
                           : nominal_tau_e) /
                      nm.enhance_time_div_s);
    obs.push_back(ctx.prev_bitrate_mbps / cfg_.mpd->ladder_mbps.back());
    for (double p : *ctx.psnr_row) obs.push_back(p / nm.psnr_div_db);
    return obs;
}

StepOutcome Pipeline::step(Action a) {
    if (done()) throw DomainError("step: episode finished");
    if (a.bitrate_index < 0 ||
        a.bitrate_index >= static_cast<int>(cfg_.mpd->ladder_mbps.size()))
        throw DomainError("step: bitrate index out of range");

    const int i = next_;
    const double T = cfg_.mpd->chunk_duration_s;
    const double bitrate = cfg_.mpd->ladder_mbps[a.bitrate_index];

    // request time was fixed at the end of the previous step
    const double t_d = next_decision_time_;
    const double tau_d = cfg_.trace->download_time_s(t_d, bitrate * T);
    const double done_dl = t_d + tau_d;

    // module entry: after the previous chunk leaves the module, after this
    // chunk is fully downloaded, and only once the playback buffer has room
    double t_e = done_dl;
    if (i > 0) t_e = std::max(t_e, t_e_[i - 1] + tau_e_[i - 1]);
    if (i - cfg_.pb_cap >= 0) t_e = std::max(t_e, t_p_[i - cfg_.pb_cap]);

    double tau_e = 0.0;
    if (a.enhance) {
        tau_e = enhancement_time(cfg_.profile);
        if (cfg_.enhance_time_jitter) tau_e *= jitter_rng_.uniform(0.9, 1.1);
    }

    double t_p = t_e + tau_e;
    if (i > 0) t_p = std::max(t_p, t_p_[i - 1] + T);
    const double tau_r = i > 0 ? t_p - (t_p_[i - 1] + T) : 0.0;

    StepOutcome out;
    out.chunk = i;
    out.action = a;
    out.psnr_db = cfg_.mpd->psnr(i, a);
    out.rebuffer_s = tau_r;
    out.bitrate_mbps = bitrate;
    out.prev_bitrate_mbps = i > 0 ? cfg_.mpd->ladder_mbps[chosen_action_[i - 1] / 2] : 0.0;
    out.timings = {t_d, tau_d, t_e, tau_e, t_p};
    out.db_at_decision = db_occupancy();
    out.pb_at_decision = pb_occupancy();

    t_d_.push_back(t_d);
    tau_d_.push_back(tau_d);
    t_e_.push_back(t_e);
    tau_e_.push_back(tau_e);
    t_p_.push_back(t_p);
    tau_r_.push_back(tau_r);
    realized_mbps_.push_back(bitrate * T / tau_d);
    chosen_action_.push_back(action_index(a));
    if (a.enhance) {
        enhance_hist_.push_back(tau_e);
        ++enhanced_count_;
    }

    ++next_;
    out.done = done();
    if (!out.done) {
        // next request: previous download finished, and the chunk
        // (next - db_cap) must have freed its download-buffer slot
        double t_next = done_dl;
        if (next_ - cfg_.db_cap >= 0) t_next = std::max(t_next, t_e_[next_ - cfg_.db_cap]);
        next_decision_time_ = t_next;
        advance_cursors();
    }
    log_.push_back(out);
    return out;
}

std::pair<int, int> Pipeline::occupancy_by_formula(int i) const {
    if (i < 0 || i > next_ || (i == next_ && done()))
        throw DomainError("occupancy_by_formula: no decision instant for that chunk");
    const double t = (i == next_) ? next_decision_time_ : t_d_[i];
    // argmax over {j : t_e[j] < t} as a 1-based index, 0 when empty
    int last_entered = 0;
    int last_played = 0;
    for (int j = 0; j < i; ++j) {
        if (t_e_[j] < t) last_entered = j + 1;
        if (t_p_[j] < t) last_played = j + 1;
    }
    const int db = i - last_entered;
    const int pb = std::max(0, last_entered - 1 - last_played);
    return {db, pb};
}

double Pipeline::startup_delay_s() const {
    if (t_p_.empty()) throw DomainError("startup delay: no chunk played yet");
    return t_p_[0];
}

void write_episode_csv(std::ostream& out, const std::vector<StepOutcome>& log) {
    out << "i,bitrate_mbps,enhance,t_d,tau_d,t_e,tau_e,t_p,tau_r,psnr_db,db,pb\n";
    out.precision(12);
    for (const auto& s : log) {
        out << (s.chunk + 1) << ',' << s.bitrate_mbps << ',' << (s.action.enhance ? 1 : 0)
            << ',' << s.timings.t_d << ',' << s.timings.tau_d << ',' << s.timings.t_e << ','
            << s.timings.tau_e << ',' << s.timings.t_p << ',' << s.rebuffer_s << ','
            << s.psnr_db << ',' << s.db_at_decision << ',' << s.pb_at_decision << '\n';
    }
}

}  // namespace enavs
