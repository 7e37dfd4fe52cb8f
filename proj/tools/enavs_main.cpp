#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enavs/commands.hpp"
#include "enavs/errors.hpp"

namespace {

enavs::AppConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return enavs::AppConfig::load(path);
}

void print_error(const std::string& type, const std::string& message) {
    const nlohmann::json err = {{"error", type}, {"message", message}};
    std::cerr << err.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-driven simulator and trainer for enhancement-enabled "
                 "adaptive video streaming"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON config file (defaults apply if omitted)");

    auto* gen = app.add_subcommand("generate", "Generate the synthetic trace/video corpus");
    std::string gen_dir, gen_seed;
    gen->add_option("--corpus-dir", gen_dir, "Output directory (overrides config)");
    gen->add_option("--seed", gen_seed, "Corpus seed (overrides config)");

    auto* trn = app.add_subcommand("train", "Train the actor-critic agent on the train split");
    std::string trn_dir, trn_ckpt, trn_curve;
    int trn_episodes = -1, trn_workers = -1;
    std::string trn_seed;
    bool trn_no_enhance = false, trn_async = false;
    trn->add_option("--corpus-dir", trn_dir, "Corpus directory");
    trn->add_option("--episodes", trn_episodes, "Training episodes");
    trn->add_option("--workers", trn_workers, "Parallel rollout workers");
    trn->add_option("--seed", trn_seed, "Training seed");
    trn->add_option("--checkpoint", trn_ckpt, "Checkpoint output path");
    trn->add_option("--curve", trn_curve, "Learning-curve CSV output path");
    trn->add_flag("--no-enhance", trn_no_enhance,
                  "Mask enhancement actions (bitrate-only agent)");
    trn->add_flag("--async", trn_async, "Asynchronous updates (not reproducible)");

    auto* evl = app.add_subcommand("evaluate", "Evaluate a policy on a corpus split");
    std::string evl_dir, evl_policy, evl_ckpt, evl_split, evl_profile, evl_out;
    int evl_seeds = -1, evl_workers = -1;
    evl->add_option("--corpus-dir", evl_dir, "Corpus directory");
    evl->add_option("--policy", evl_policy, "bdash | greedy | random | agent");
    evl->add_option("--checkpoint", evl_ckpt, "Checkpoint path (for --policy agent)");
    evl->add_option("--split", evl_split, "train | test");
    evl->add_option("--profile", evl_profile, "ultra-high | high | medium | low");
    evl->add_option("--seeds", evl_seeds, "Number of evaluation seeds");
    evl->add_option("--workers", evl_workers, "Parallel episode workers");
    evl->add_option("--out", evl_out, "Report output path");

    auto* cmp = app.add_subcommand("compare", "Compare evaluation reports");
    std::vector<std::string> cmp_reports;
    cmp->add_option("reports", cmp_reports, "Report JSON files")->required()->expected(-2);

    auto* orc = app.add_subcommand("oracle", "Exhaustive best action sequence on a small instance");
    std::string orc_dir, orc_video, orc_trace, orc_profile, orc_out;
    int orc_horizon = -1;
    uint64_t orc_budget = 0;
    orc->add_option("--corpus-dir", orc_dir, "Corpus directory (instance source)");
    orc->add_option("--video", orc_video, "Video manifest JSON (overrides corpus pick)");
    orc->add_option("--trace", orc_trace, "Trace CSV (overrides corpus pick)");
    orc->add_option("--profile", orc_profile, "Compute profile");
    orc->add_option("--horizon", orc_horizon, "Number of chunks to search over");
    orc->add_option("--budget", orc_budget, "Max sequences to enumerate");
    orc->add_option("--out", orc_out, "Result output path");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        enavs::AppConfig cfg = load_config(config_path);

        if (gen->parsed()) {
            if (!gen_dir.empty()) cfg.corpus_dir = gen_dir;
            if (!gen_seed.empty()) cfg.corpus.seed = std::stoull(gen_seed);
            const std::string manifest = enavs::cmd_generate(cfg);
            std::cout << "corpus written: " << manifest << std::endl;
        } else if (trn->parsed()) {
            if (!trn_dir.empty()) cfg.corpus_dir = trn_dir;
            if (trn_episodes >= 0) cfg.train.episodes = trn_episodes;
            if (trn_workers > 0) cfg.train.workers = trn_workers;
            if (!trn_seed.empty()) cfg.train.seed = std::stoull(trn_seed);
            if (!trn_ckpt.empty()) cfg.checkpoint_path = trn_ckpt;
            if (!trn_curve.empty()) cfg.curve_path = trn_curve;
            if (trn_no_enhance) cfg.train.allow_enhance = false;
            if (trn_async) cfg.train.async_updates = true;
            const enavs::TrainOutputs out = enavs::cmd_train(cfg);
            std::cout << "checkpoint: " << out.checkpoint_path << "\ncurve: " << out.curve_path
                      << "\nepisodes: " << out.episodes
                      << "\nfinal 100-episode mean QoE: " << out.final_window_mean_qoe
                      << std::endl;
        } else if (evl->parsed()) {
            if (!evl_dir.empty()) cfg.corpus_dir = evl_dir;
            if (!evl_policy.empty()) cfg.eval_policy = evl_policy;
            if (!evl_ckpt.empty()) cfg.eval_checkpoint = evl_ckpt;
            if (!evl_split.empty()) cfg.eval_split = evl_split;
            if (!evl_profile.empty()) cfg.eval_profile = evl_profile;
            if (evl_seeds > 0) cfg.eval_seeds = evl_seeds;
            if (evl_workers > 0) cfg.eval_workers = evl_workers;
            if (!evl_out.empty()) cfg.report_path = evl_out;
            const enavs::EvalReport report = enavs::cmd_evaluate(cfg);
            std::cout << "report: " << cfg.report_path << "\npolicy: " << report.policy
                      << "\nmean QoE: " << report.mean_qoe << " +/- " << report.std_qoe
                      << " (over " << report.seeds << " seeds)" << std::endl;
        } else if (cmp->parsed()) {
            const enavs::Comparison c = enavs::cmd_compare(cmp_reports);
            std::cout << c.to_json().dump(2) << std::endl;
        } else if (orc->parsed()) {
            if (!orc_dir.empty()) cfg.corpus_dir = orc_dir;
            if (!orc_video.empty()) cfg.oracle_video = orc_video;
            if (!orc_trace.empty()) cfg.oracle_trace = orc_trace;
            if (!orc_profile.empty()) cfg.oracle_profile = orc_profile;
            if (orc_horizon > 0) cfg.oracle_horizon = orc_horizon;
            if (orc_budget > 0) cfg.oracle_budget = orc_budget;
            if (!orc_out.empty()) cfg.oracle_out = orc_out;
            const enavs::OracleResult r = enavs::cmd_oracle(cfg);
            std::cout << "best QoE: " << r.best_qoe << " over " << r.evaluated
                      << " sequences; written to " << cfg.oracle_out << std::endl;
        }
        return 0;
    } catch (const enavs::Error& e) {
        print_error(e.type, e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
