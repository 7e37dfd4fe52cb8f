#include "enavs/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "enavs/errors.hpp"
#include "enavs/rng.hpp"

namespace enavs {

void EvalProtocol::validate() const {
    if (split != "train" && split != "test")
        throw ConfigError("evaluate: split must be train or test");
    weights.validate();
    if (seeds <= 0) throw ConfigError("evaluate: seeds must be > 0");
    if (db_cap < 1 || pb_cap < 1) throw ConfigError("evaluate: buffer caps must be >= 1");
    if (k1 < 0 || k2 < 0) throw ConfigError("evaluate: history lengths must be >= 0");
    if (workers <= 0) throw ConfigError("evaluate: workers must be > 0");
}

nlohmann::json EpisodeRecord::to_json() const {
    return {{"seed", seed_index},
            {"episode", episode_index},
            {"video", video},
            {"trace", trace},
            {"num_chunks", num_chunks},
            {"qoe", qoe.to_json()},
            {"startup_s", startup_s},
            {"enhanced_fraction", enhanced_fraction}};
}

EpisodeRecord EpisodeRecord::from_json(const nlohmann::json& j) {
    EpisodeRecord r;
    r.seed_index = j.at("seed").get<int>();
    r.episode_index = j.at("episode").get<int>();
    r.video = j.at("video").get<std::string>();
    r.trace = j.at("trace").get<std::string>();
    r.num_chunks = j.at("num_chunks").get<int>();
    const nlohmann::json& q = j.at("qoe");
    r.qoe.avg_psnr_db = q.at("avg_psnr_db").get<double>();
    r.qoe.avg_variation_mbps = q.at("avg_variation_mbps").get<double>();
    r.qoe.avg_rebuffer_s = q.at("avg_rebuffer_s").get<double>();
    r.qoe.weighted_total = q.at("weighted_total").get<double>();
    r.startup_s = j.at("startup_s").get<double>();
    r.enhanced_fraction = j.at("enhanced_fraction").get<double>();
    return r;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json eps = nlohmann::json::array();
    for (const EpisodeRecord& e : episodes) eps.push_back(e.to_json());
    return {{"format_version", 1},
            {"policy", policy},
            {"split", split},
            {"profile", profile},
            {"weights", weights.to_json()},
            {"seeds", seeds},
            {"base_seed", base_seed},
            {"config_hash", config_hash},
            {"episodes", eps},
            {"per_seed_mean_qoe", per_seed_mean_qoe},
            {"per_seed_mean_psnr", per_seed_mean_psnr},
            {"mean_qoe", mean_qoe},
            {"std_qoe", std_qoe},
            {"mean_psnr_db", mean_psnr_db},
            {"mean_variation_mbps", mean_variation_mbps},
            {"mean_rebuffer_s", mean_rebuffer_s},
            {"mean_enhanced_fraction", mean_enhanced_fraction},
            {"psnr_cdf", psnr_cdf}};
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != 1)
        throw ParseError("report: unsupported format_version");
    EvalReport r;
    r.policy = j.at("policy").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.profile = j.at("profile").get<std::string>();
    r.weights = QoeWeights::from_json(j.at("weights"));
    r.seeds = j.at("seeds").get<int>();
    r.base_seed = j.at("base_seed").get<uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& e : j.at("episodes")) r.episodes.push_back(EpisodeRecord::from_json(e));
    r.per_seed_mean_qoe = j.at("per_seed_mean_qoe").get<std::vector<double>>();
    r.per_seed_mean_psnr = j.at("per_seed_mean_psnr").get<std::vector<double>>();
    r.mean_qoe = j.at("mean_qoe").get<double>();
    r.std_qoe = j.at("std_qoe").get<double>();
    r.mean_psnr_db = j.at("mean_psnr_db").get<double>();
    r.mean_variation_mbps = j.at("mean_variation_mbps").get<double>();
    r.mean_rebuffer_s = j.at("mean_rebuffer_s").get<double>();
    r.mean_enhanced_fraction = j.at("mean_enhanced_fraction").get<double>();
    r.psnr_cdf = j.at("psnr_cdf").get<std::vector<double>>();
    return r;
}

void EvalReport::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << to_json().dump(2) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

EvalReport EvalReport::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

struct EpisodeTask {
    int seed_index = 0;
    int episode_index = 0;
    int video_id = 0;
    int trace_id = 0;
    uint64_t policy_seed = 0;
};

struct EpisodeResult {
    EpisodeRecord record;
    std::vector<double> chunk_psnrs;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

EvalReport evaluate_policy(const Corpus& corpus, const EvalProtocol& proto,
                           const std::string& policy_name, const PolicyFactory& make) {
    proto.validate();
    const CorpusSplit& pool = corpus.split(proto.split);
    const ComputeProfile profile = profile_by_name(default_profiles(), proto.profile);

    // One task per (seed, video); the trace pairing reshuffles per seed.
    std::vector<EpisodeTask> tasks;
    const int n_videos = static_cast<int>(pool.videos.size());
    const int n_traces = static_cast<int>(pool.traces.size());
    for (int s = 0; s < proto.seeds; ++s) {
        Rng pair_rng(derive_seed(proto.base_seed, static_cast<uint64_t>(s)));
        std::vector<int> perm(n_traces);
        for (int i = 0; i < n_traces; ++i) perm[i] = i;
        for (int i = n_traces - 1; i > 0; --i)
            std::swap(perm[i], perm[pair_rng.uniform_index(static_cast<size_t>(i) + 1)]);
        for (int e = 0; e < n_videos; ++e) {
            EpisodeTask t;
            t.seed_index = s;
            t.episode_index = e;
            t.video_id = e;
            t.trace_id = perm[e % n_traces];
            t.policy_seed = derive_seed(proto.base_seed,
                                        1'000'000 + static_cast<uint64_t>(s) * 100'000 +
                                            static_cast<uint64_t>(e));
            tasks.push_back(t);
        }
    }

    std::vector<EpisodeResult> results(tasks.size());
    auto run_task = [&](size_t ti) {
        const EpisodeTask& t = tasks[ti];
        SimConfig sc;
        sc.mpd = pool.videos[t.video_id];
        sc.trace = pool.traces[t.trace_id];
        sc.profile = profile;
        sc.db_cap = proto.db_cap;
        sc.pb_cap = proto.pb_cap;
        sc.k1 = proto.k1;
        sc.k2 = proto.k2;
        sc.norm = proto.norm;
        Pipeline pipe(sc);
        std::unique_ptr<Policy> policy = make(t.policy_seed);
        const std::vector<StepOutcome> log = rollout_policy(pipe, *policy);

        EpisodeResult res;
        res.record.seed_index = t.seed_index;
        res.record.episode_index = t.episode_index;
        res.record.video = pool.video_names[t.video_id];
        res.record.trace = pool.trace_names[t.trace_id];
        res.record.num_chunks = static_cast<int>(log.size());
        res.record.qoe = episode_qoe(proto.weights, log);
        res.record.startup_s = pipe.startup_delay_s();
        res.record.enhanced_fraction =
            log.empty() ? 0.0
                        : static_cast<double>(pipe.enhanced_count()) /
                              static_cast<double>(log.size());
        res.chunk_psnrs.reserve(log.size());
        for (const StepOutcome& o : log) res.chunk_psnrs.push_back(o.psnr_db);
        results[ti] = std::move(res);
    };

    if (proto.workers == 1) {
        for (size_t ti = 0; ti < tasks.size(); ++ti) run_task(ti);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errs(proto.workers);
        std::vector<std::thread> pool_threads;
        for (int w = 0; w < proto.workers; ++w) {
            pool_threads.emplace_back([&, w] {
                try {
                    while (true) {
                        const size_t ti = next.fetch_add(1);
                        if (ti >= tasks.size()) return;
                        run_task(ti);
                    }
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool_threads) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    EvalReport rep;
    rep.policy = policy_name;
    rep.split = proto.split;
    rep.profile = proto.profile;
    rep.weights = proto.weights;
    rep.seeds = proto.seeds;
    rep.base_seed = proto.base_seed;

    std::vector<std::vector<double>> seed_qoe(proto.seeds), seed_psnr(proto.seeds);
    double var_sum = 0.0, reb_sum = 0.0, enh_sum = 0.0;
    for (const EpisodeResult& r : results) {
        rep.episodes.push_back(r.record);
        seed_qoe[r.record.seed_index].push_back(r.record.qoe.weighted_total);
        seed_psnr[r.record.seed_index].push_back(r.record.qoe.avg_psnr_db);
        var_sum += r.record.qoe.avg_variation_mbps;
        reb_sum += r.record.qoe.avg_rebuffer_s;
        enh_sum += r.record.enhanced_fraction;
        for (double p : r.chunk_psnrs) rep.psnr_cdf.push_back(p);
    }
    for (int s = 0; s < proto.seeds; ++s) {
        rep.per_seed_mean_qoe.push_back(mean_of(seed_qoe[s]));
        rep.per_seed_mean_psnr.push_back(mean_of(seed_psnr[s]));
    }
    rep.mean_qoe = mean_of(rep.per_seed_mean_qoe);
    rep.std_qoe = sample_std(rep.per_seed_mean_qoe);
    rep.mean_psnr_db = mean_of(rep.per_seed_mean_psnr);
    const double n_eps = static_cast<double>(results.size());
    rep.mean_variation_mbps = n_eps ? var_sum / n_eps : 0.0;
    rep.mean_rebuffer_s = n_eps ? reb_sum / n_eps : 0.0;
    rep.mean_enhanced_fraction = n_eps ? enh_sum / n_eps : 0.0;
    std::sort(rep.psnr_cdf.begin(), rep.psnr_cdf.end());
    return rep;
}

nlohmann::json Comparison::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 0; i < policies.size(); ++i)
        rows.push_back({{"policy", policies[i]},
                        {"mean_qoe", mean_qoe[i]},
                        {"std_qoe", std_qoe[i]},
                        {"mean_psnr_db", mean_psnr_db[i]},
                        {"mean_variation_mbps", mean_variation_mbps[i]},
                        {"mean_rebuffer_s", mean_rebuffer_s[i]}});
    nlohmann::json impr = nlohmann::json::array();
    for (size_t i = 0; i < policies.size(); ++i)
        for (size_t j = 0; j < policies.size(); ++j)
            if (i != j)
                impr.push_back({{"policy", policies[i]},
                                {"over", policies[j]},
                                {"qoe_improvement_pct", improvement_pct[i][j]}});
    return {{"format_version", 1}, {"table", rows}, {"improvements", impr}};
}

Comparison compare_reports(const std::vector<EvalReport>& reports) {
    if (reports.size() < 2) throw ConfigError("compare: need at least 2 reports");
    const EvalReport& ref = reports.front();
    for (const EvalReport& r : reports) {
        const bool same_weights = r.weights.alpha1 == ref.weights.alpha1 &&
                                  r.weights.alpha2 == ref.weights.alpha2 &&
                                  r.weights.alpha3 == ref.weights.alpha3;
        if (!same_weights || r.profile != ref.profile || r.split != ref.split ||
            r.seeds != ref.seeds || r.base_seed != ref.base_seed)
            throw ConfigError("compare: reports were produced under different conditions "
                              "(weights/profile/split/seed protocol must match)");
    }
    Comparison c;
    for (const EvalReport& r : reports) {
        c.policies.push_back(r.policy);
        c.mean_qoe.push_back(r.mean_qoe);
        c.std_qoe.push_back(r.std_qoe);
        c.mean_psnr_db.push_back(r.mean_psnr_db);
        c.mean_variation_mbps.push_back(r.mean_variation_mbps);
        c.mean_rebuffer_s.push_back(r.mean_rebuffer_s);
    }
    const size_t n = reports.size();
    c.improvement_pct.assign(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (c.mean_qoe[j] == 0.0)
                throw DomainError("compare: zero baseline mean QoE");
            c.improvement_pct[i][j] =
                (c.mean_qoe[i] - c.mean_qoe[j]) / std::fabs(c.mean_qoe[j]) * 100.0;
        }
    return c;
}

}  // namespace enavs
