#include "enavs/commands.hpp"

#include <filesystem>
#include <fstream>
#include <memory>

#include "enavs/agent.hpp"
#include "enavs/env.hpp"
#include "enavs/errors.hpp"

namespace fs = std::filesystem;

namespace enavs {

std::string cmd_generate(const AppConfig& cfg) {
    generate_corpus(cfg.corpus, cfg.corpus_dir);
    // Stamp the manifest with the config hash for provenance.
    const fs::path manifest_path = fs::path(cfg.corpus_dir) / "corpus_manifest.json";
    std::ifstream in(manifest_path);
    nlohmann::json manifest;
    in >> manifest;
    in.close();
    manifest["config_hash"] = cfg.hash();
    std::ofstream out(manifest_path);
    if (!out) throw IoError("cannot rewrite manifest: " + manifest_path.string());
    out << manifest.dump(2) << '\n';
    return manifest_path.string();
}

TrainOutputs cmd_train(const AppConfig& cfg) {
    const Corpus corpus = load_corpus(cfg.corpus_dir);

    StreamingEnvConfig ec;
    ec.videos = corpus.train.videos;
    ec.traces = corpus.train.traces;
    ec.profiles = default_profiles();
    ec.weights = cfg.weights;
    ec.db_cap = cfg.db_cap;
    ec.pb_cap = cfg.pb_cap;
    ec.k1 = cfg.k1;
    ec.k2 = cfg.k2;
    const EnvFactory factory = [ec]() { return std::make_unique<StreamingEnv>(ec); };

    const TrainResult result = train(cfg.train, factory);

    nlohmann::json ckpt = result.params.to_json();
    ckpt["config_hash"] = cfg.hash();
    std::ofstream cf(cfg.checkpoint_path);
    if (!cf) throw IoError("cannot open for writing: " + cfg.checkpoint_path);
    cf << ckpt.dump(2) << '\n';
    if (!cf) throw IoError("write failed: " + cfg.checkpoint_path);

    std::ofstream curve(cfg.curve_path);
    if (!curve) throw IoError("cannot open for writing: " + cfg.curve_path);
    write_curve_csv(curve, result.curve);

    TrainOutputs out;
    out.checkpoint_path = cfg.checkpoint_path;
    out.curve_path = cfg.curve_path;
    out.episodes = static_cast<int>(result.curve.size());
    const size_t window = std::min<size_t>(100, result.curve.size());
    double qoe_sum = 0.0;
    for (size_t i = result.curve.size() - window; i < result.curve.size(); ++i)
        qoe_sum += result.curve[i].score;
    out.final_window_mean_qoe = window ? qoe_sum / static_cast<double>(window) : 0.0;
    return out;
}

EvalReport cmd_evaluate(const AppConfig& cfg) {
    const Corpus corpus = load_corpus(cfg.corpus_dir);

    EvalProtocol proto;
    proto.split = cfg.eval_split;
    proto.profile = cfg.eval_profile;
    proto.weights = cfg.weights;
    proto.seeds = cfg.eval_seeds;
    proto.base_seed = cfg.eval_base_seed;
    proto.db_cap = cfg.db_cap;
    proto.pb_cap = cfg.pb_cap;
    proto.k1 = cfg.k1;
    proto.k2 = cfg.k2;
    proto.workers = cfg.eval_workers;

    std::string name = cfg.eval_policy;
    PolicyFactory factory;
    if (name == "agent" || !cfg.eval_checkpoint.empty()) {
        if (cfg.eval_checkpoint.empty())
            throw ConfigError("evaluate: policy 'agent' needs evaluate.checkpoint");
        auto params = std::make_shared<AgentParams>(AgentParams::load(cfg.eval_checkpoint));
        name = params->allow_enhance ? "enavs" : "no-enhance";
        factory = [params](uint64_t) { return std::make_unique<AgentPolicy>(*params); };
    } else if (name == "bdash") {
        factory = [](uint64_t) { return std::make_unique<BDashPolicy>(); };
    } else if (name == "greedy") {
        factory = [](uint64_t) { return std::make_unique<GreedyPolicy>(); };
    } else if (name == "random") {
        factory = [](uint64_t seed) { return std::make_unique<RandomPolicy>(seed); };
    } else {
        throw ConfigError("evaluate: unknown policy '" + name +
                          "' (expected bdash, greedy, random, or agent with a checkpoint)");
    }

    EvalReport report = evaluate_policy(corpus, proto, name, factory);
    report.config_hash = cfg.hash();
    report.save(cfg.report_path);
    return report;
}

Comparison cmd_compare(const std::vector<std::string>& report_paths) {
    std::vector<EvalReport> reports;
    for (const std::string& p : report_paths) reports.push_back(EvalReport::load(p));
    return compare_reports(reports);
}

OracleResult cmd_oracle(const AppConfig& cfg) {
    std::shared_ptr<const MpdManifest> mpd;
    std::shared_ptr<const BandwidthTrace> trace;
    if (cfg.oracle_video.empty() || cfg.oracle_trace.empty()) {
        const Corpus corpus = load_corpus(cfg.corpus_dir);
        mpd = corpus.test.videos.front();
        trace = corpus.test.traces.front();
    }
    if (!cfg.oracle_video.empty()) {
        std::ifstream f(cfg.oracle_video);
        if (!f) throw IoError("cannot open video manifest: " + cfg.oracle_video);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(cfg.oracle_video + ": " + e.what());
        }
        mpd = std::make_shared<MpdManifest>(MpdManifest::from_json(j));
    }
    if (!cfg.oracle_trace.empty())
        trace = std::make_shared<BandwidthTrace>(BandwidthTrace::load_csv_file(cfg.oracle_trace));

    if (cfg.oracle_horizon < 1) throw ConfigError("oracle: horizon must be >= 1");
    if (cfg.oracle_horizon > mpd->num_chunks)
        throw ConfigError("oracle: horizon exceeds the video's chunk count");

    // Truncate the manifest to the requested horizon.
    auto sliced = std::make_shared<MpdManifest>(*mpd);
    sliced->num_chunks = cfg.oracle_horizon;
    sliced->psnr_db.resize(cfg.oracle_horizon);

    SimConfig sc;
    sc.mpd = sliced;
    sc.trace = trace;
    sc.profile = profile_by_name(default_profiles(), cfg.oracle_profile);
    sc.db_cap = cfg.db_cap;
    sc.pb_cap = cfg.pb_cap;
    sc.k1 = cfg.k1;
    sc.k2 = cfg.k2;

    const OracleResult result = exhaustive_best(sc, cfg.weights, cfg.oracle_budget);

    nlohmann::json seq = nlohmann::json::array();
    for (const Action& a : result.best_sequence)
        seq.push_back({{"bitrate_index", a.bitrate_index}, {"enhance", a.enhance}});
    const nlohmann::json out = {{"format_version", 1},
                                {"config_hash", cfg.hash()},
                                {"best_qoe", result.best_qoe},
                                {"best_sequence", seq},
                                {"breakdown", result.breakdown.to_json()},
                                {"evaluated_sequences", result.evaluated}};
    std::ofstream f(cfg.oracle_out);
    if (!f) throw IoError("cannot open for writing: " + cfg.oracle_out);
    f << out.dump(2) << '\n';
    return result;
}

}  // namespace enavs
