#include "enavs/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "enavs/errors.hpp"
#include "enavs/rng.hpp"

namespace fs = std::filesystem;

namespace enavs {

RateQualityModel default_quality_model(double noise_sigma_db) {
    RateQualityModel m = fit_rate_quality({{2.0, 35.68}, {3.0, 37.76}});
    m.gain_at_min_db = 37.20 - 35.68;
    m.noise_sigma_db = noise_sigma_db;
    m.r_min_mbps = 2.0;
    m.r_max_mbps = 4.0;
    m.validate();
    return m;
}

std::vector<ComputeProfile> default_profiles() {
    ComputeProfile base;
    std::vector<ComputeProfile> out(4, base);
    out[0].name = "ultra-high";
    out[0].scale_factor = 4.5;
    out[1].name = "high";
    out[1].scale_factor = 5.0;
    out[2].name = "medium";
    out[2].scale_factor = 6.0;
    out[3].name = "low";
    out[3].scale_factor = 6.8;
    return out;
}

const ComputeProfile& profile_by_name(const std::vector<ComputeProfile>& profiles,
                                      const std::string& name) {
    for (const ComputeProfile& p : profiles)
        if (p.name == name) return p;
    std::string known;
    for (const ComputeProfile& p : profiles) known += (known.empty() ? "" : ", ") + p.name;
    throw ConfigError("unknown compute profile '" + name + "' (known: " + known + ")");
}

BandwidthTrace synth_trace(double duration_s, uint64_t seed) {
    if (duration_s < 2.0) throw ConfigError("synth_trace: duration must be >= 2 s");
    Rng rng(seed);
    const double rho = 0.85;   // within-regime AR(1) persistence in log space
    const double sigma = 0.10; // per-second log noise
    // Most traces spend long stretches on a high level interrupted by short
    // deep drops a factor ~2.2-2.6 down (cellular-like outages); a fifth are
    // effectively single-level. Absolute level is arbitrary; corpus
    // generation re-scales it anyway.
    const double spread = rng.uniform() < 0.2 ? rng.uniform(0.05, 0.30)
                                              : rng.uniform(0.80, 0.95);
    bool high = rng.uniform() < 0.5;
    auto draw_dwell = [&rng](bool is_high) {
        return is_high ? rng.uniform_int(45, 90) : rng.uniform_int(5, 12);
    };
    int dwell = draw_dwell(high);
    double mu = high ? spread : 0.0;
    double x = mu;
    std::vector<TraceSample> samples;
    const int n = static_cast<int>(duration_s);
    samples.reserve(n);
    for (int t = 0; t < n; ++t) {
        if (--dwell <= 0) {
            high = !high;
            dwell = draw_dwell(high);
            mu = high ? spread : 0.0;
        }
        x = mu + rho * (x - mu) + sigma * rng.normal();
        const double mbps = std::clamp(std::exp(x), 0.1, 60.0);
        samples.push_back({static_cast<double>(t), mbps});
    }
    return BandwidthTrace::from_samples(samples, duration_s);
}

void CorpusConfig::validate() const {
    if (num_traces < 2) throw ConfigError("corpus: need at least 2 traces to split");
    if (num_videos < 2) throw ConfigError("corpus: need at least 2 videos to split");
    if (trace_duration_s < 2.0) throw ConfigError("corpus: trace_duration_s must be >= 2");
    if (ladder_mbps.size() < 1) throw ConfigError("corpus: empty ladder");
    if (!std::is_sorted(ladder_mbps.begin(), ladder_mbps.end()))
        throw ConfigError("corpus: ladder must be sorted ascending");
    for (double r : ladder_mbps)
        if (r <= 0) throw ConfigError("corpus: ladder rates must be positive");
    if (chunk_duration_s <= 0.0) throw ConfigError("corpus: chunk_duration_s must be > 0");
    if (min_chunks < 1 || max_chunks < min_chunks)
        throw ConfigError("corpus: need 1 <= min_chunks <= max_chunks");
    if (noise_sigma_db < 0.0) throw ConfigError("corpus: noise_sigma_db must be >= 0");
    if (target_mean_lo_mbps <= 0.0 || target_mean_hi_mbps < target_mean_lo_mbps)
        throw ConfigError("corpus: need 0 < target_mean_lo <= target_mean_hi");
}

nlohmann::json CorpusConfig::to_json() const {
    return {{"num_traces", num_traces},
            {"num_videos", num_videos},
            {"trace_duration_s", trace_duration_s},
            {"ladder_mbps", ladder_mbps},
            {"chunk_duration_s", chunk_duration_s},
            {"min_chunks", min_chunks},
            {"max_chunks", max_chunks},
            {"noise_sigma_db", noise_sigma_db},
            {"target_mean_lo_mbps", target_mean_lo_mbps},
            {"target_mean_hi_mbps", target_mean_hi_mbps},
            {"seed", seed}};
}

CorpusConfig CorpusConfig::from_json(const nlohmann::json& j) {
    CorpusConfig c;
    if (j.contains("num_traces")) c.num_traces = j.at("num_traces").get<int>();
    if (j.contains("num_videos")) c.num_videos = j.at("num_videos").get<int>();
    if (j.contains("trace_duration_s")) c.trace_duration_s = j.at("trace_duration_s").get<double>();
    if (j.contains("ladder_mbps")) c.ladder_mbps = j.at("ladder_mbps").get<std::vector<double>>();
    if (j.contains("chunk_duration_s")) c.chunk_duration_s = j.at("chunk_duration_s").get<double>();
    if (j.contains("min_chunks")) c.min_chunks = j.at("min_chunks").get<int>();
    if (j.contains("max_chunks")) c.max_chunks = j.at("max_chunks").get<int>();
    if (j.contains("noise_sigma_db")) c.noise_sigma_db = j.at("noise_sigma_db").get<double>();
    if (j.contains("target_mean_lo_mbps"))
        c.target_mean_lo_mbps = j.at("target_mean_lo_mbps").get<double>();
    if (j.contains("target_mean_hi_mbps"))
        c.target_mean_hi_mbps = j.at("target_mean_hi_mbps").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    return c;
}

const CorpusSplit& Corpus::split(const std::string& name) const {
    if (name == "train") return train;
    if (name == "test") return test;
    throw ConfigError("unknown split '" + name + "' (expected train or test)");
}

namespace {

std::vector<int> seeded_shuffle(int n, Rng& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(idx[i], idx[rng.uniform_index(static_cast<size_t>(i) + 1)]);
    return idx;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f << text;
    if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace

void generate_corpus(const CorpusConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    const fs::path root(out_dir);
    fs::create_directories(root / "traces" / "train");
    fs::create_directories(root / "traces" / "test");
    fs::create_directories(root / "videos" / "train");
    fs::create_directories(root / "videos" / "test");

    const RateQualityModel model = default_quality_model(cfg.noise_sigma_db);

    nlohmann::json traces_j = nlohmann::json::array();
    nlohmann::json videos_j = nlohmann::json::array();

    Rng split_rng(derive_seed(cfg.seed, 1));
    const std::vector<int> trace_order = seeded_shuffle(cfg.num_traces, split_rng);
    const std::vector<int> video_order = seeded_shuffle(cfg.num_videos, split_rng);
    const int n_train_traces = cfg.num_traces / 2;
    const int n_train_videos = cfg.num_videos / 2;

    char name[64];
    for (int k = 0; k < cfg.num_traces; ++k) {
        const int raw_id = trace_order[k];
        const bool is_train = k < n_train_traces;
        const uint64_t tseed = derive_seed(cfg.seed, 1000 + static_cast<uint64_t>(raw_id));
        const BandwidthTrace raw = synth_trace(cfg.trace_duration_s, tseed);

        Rng target_rng(derive_seed(cfg.seed, 3000 + static_cast<uint64_t>(raw_id)));
        const double mean_target =
            target_rng.uniform(cfg.target_mean_lo_mbps, cfg.target_mean_hi_mbps);

        BandwidthTrace scaled;
        std::string method;
        double target = 0.0;
        if (is_train) {
            method = "mean";
            target = mean_target;
            scaled = raw.scaled_to_mean(target);
        } else {
            // Max-scaling with the max target chosen so the time-weighted
            // mean equals mean_target (keeps test means in the same band).
            method = "max";
            target = mean_target * raw.max_mbps() / raw.time_weighted_mean_mbps();
            scaled = raw.scaled_to_max(target);
        }

        std::snprintf(name, sizeof name, "trace_%03d.csv", raw_id);
        const std::string rel =
            std::string("traces/") + (is_train ? "train/" : "test/") + name;
        write_text(root / rel, scaled.to_csv());
        traces_j.push_back({{"path", rel},
                            {"split", is_train ? "train" : "test"},
                            {"scale_method", method},
                            {"target_mbps", target},
                            {"seed", tseed}});
    }

    for (int k = 0; k < cfg.num_videos; ++k) {
        const int raw_id = video_order[k];
        const bool is_train = k < n_train_videos;
        const uint64_t vseed = derive_seed(cfg.seed, 2000 + static_cast<uint64_t>(raw_id));
        Rng len_rng(derive_seed(cfg.seed, 4000 + static_cast<uint64_t>(raw_id)));
        const int n_chunks = len_rng.uniform_int(cfg.min_chunks, cfg.max_chunks);
        const MpdManifest mpd =
            generate_mpd(model, n_chunks, cfg.ladder_mbps, cfg.chunk_duration_s, vseed);

        std::snprintf(name, sizeof name, "video_%03d.json", raw_id);
        const std::string rel =
            std::string("videos/") + (is_train ? "train/" : "test/") + name;
        write_text(root / rel, mpd.to_json().dump(2) + "\n");
        videos_j.push_back({{"path", rel},
                            {"split", is_train ? "train" : "test"},
                            {"num_chunks", n_chunks},
                            {"seed", vseed}});
    }

    nlohmann::json manifest = {{"format_version", 1},
                               {"config", cfg.to_json()},
                               {"traces", traces_j},
                               {"videos", videos_j}};
    write_text(root / "corpus_manifest.json", manifest.dump(2) + "\n");
}

Corpus load_corpus(const std::string& dir) {
    const fs::path root(dir);
    const fs::path manifest_path = root / "corpus_manifest.json";
    std::ifstream f(manifest_path);
    if (!f) throw IoError("cannot open corpus manifest: " + manifest_path.string());
    nlohmann::json manifest;
    try {
        f >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(manifest_path.string() + ": " + e.what());
    }

    Corpus corpus;
    try {
        if (manifest.at("format_version").get<int>() != 1)
            throw ParseError("corpus manifest: unsupported format_version");
        const CorpusConfig cfg = CorpusConfig::from_json(manifest.at("config"));
        corpus.ladder_mbps = cfg.ladder_mbps;
        corpus.chunk_duration_s = cfg.chunk_duration_s;

        for (const auto& t : manifest.at("traces")) {
            const std::string rel = t.at("path").get<std::string>();
            CorpusSplit& s = t.at("split").get<std::string>() == "train" ? corpus.train
                                                                         : corpus.test;
            s.traces.push_back(std::make_shared<BandwidthTrace>(
                BandwidthTrace::load_csv_file((root / rel).string())));
            s.trace_names.push_back(fs::path(rel).stem().string());
        }
        for (const auto& v : manifest.at("videos")) {
            const std::string rel = v.at("path").get<std::string>();
            CorpusSplit& s = v.at("split").get<std::string>() == "train" ? corpus.train
                                                                         : corpus.test;
            std::ifstream vf(root / rel);
            if (!vf) throw IoError("cannot open video manifest: " + (root / rel).string());
            nlohmann::json vj;
            vf >> vj;
            s.videos.push_back(std::make_shared<MpdManifest>(MpdManifest::from_json(vj)));
            s.video_names.push_back(fs::path(rel).stem().string());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(manifest_path.string() + ": " + e.what());
    }

    for (const CorpusSplit* s : {&corpus.train, &corpus.test}) {
        if (s->videos.empty() || s->traces.empty())
            throw ParseError("corpus: a split has no videos or no traces");
        for (const auto& v : s->videos)
            if (v->ladder_mbps != corpus.ladder_mbps)
                throw ParseError("corpus: video ladder differs from corpus ladder");
    }
    return corpus;
}

}  // namespace enavs
