#include "enavs/config.hpp"

#include <fstream>

#include "enavs/errors.hpp"

namespace enavs {

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

nlohmann::json AppConfig::to_json() const {
    nlohmann::json train_j = {{"hidden", train.hidden},
                              {"gamma", train.gamma},
                              {"entropy_weight", train.entropy_weight},
                              {"actor_lr", train.actor_lr},
                              {"critic_lr", train.critic_lr},
                              {"episodes", train.episodes},
                              {"workers", train.workers},
                              {"seed", train.seed},
                              {"allow_enhance", train.allow_enhance},
                              {"divergence_bound", train.divergence_bound},
                              {"divergence_patience", train.divergence_patience},
                              {"async_updates", train.async_updates},
                              {"checkpoint", checkpoint_path},
                              {"curve", curve_path}};
    nlohmann::json eval_j = {{"policy", eval_policy},
                             {"checkpoint", eval_checkpoint},
                             {"split", eval_split},
                             {"profile", eval_profile},
                             {"seeds", eval_seeds},
                             {"base_seed", eval_base_seed},
                             {"workers", eval_workers},
                             {"out", report_path}};
    nlohmann::json oracle_j = {{"video", oracle_video},
                               {"trace", oracle_trace},
                               {"profile", oracle_profile},
                               {"horizon", oracle_horizon},
                               {"budget", oracle_budget},
                               {"out", oracle_out}};
    return {{"format_version", 1},
            {"corpus_dir", corpus_dir},
            {"corpus", corpus.to_json()},
            {"sim", {{"db_cap", db_cap}, {"pb_cap", pb_cap}, {"k1", k1}, {"k2", k2}}},
            {"qoe", {{"weights", weights.to_json()}}},
            {"train", train_j},
            {"evaluate", eval_j},
            {"oracle", oracle_j}};
}

AppConfig AppConfig::from_json(const nlohmann::json& j) {
    AppConfig c;
    if (j.contains("format_version") && j.at("format_version").get<int>() != 1)
        throw ParseError("config: unsupported format_version");
    if (j.contains("corpus_dir")) c.corpus_dir = j.at("corpus_dir").get<std::string>();
    if (j.contains("corpus")) c.corpus = CorpusConfig::from_json(j.at("corpus"));
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        if (s.contains("db_cap")) c.db_cap = s.at("db_cap").get<int>();
        if (s.contains("pb_cap")) c.pb_cap = s.at("pb_cap").get<int>();
        if (s.contains("k1")) c.k1 = s.at("k1").get<int>();
        if (s.contains("k2")) c.k2 = s.at("k2").get<int>();
    }
    if (j.contains("qoe") && j.at("qoe").contains("weights"))
        c.weights = QoeWeights::from_json(j.at("qoe").at("weights"));
    if (j.contains("train")) {
        const auto& t = j.at("train");
        if (t.contains("hidden")) c.train.hidden = t.at("hidden").get<std::vector<int>>();
        if (t.contains("gamma")) c.train.gamma = t.at("gamma").get<double>();
        if (t.contains("entropy_weight"))
            c.train.entropy_weight = t.at("entropy_weight").get<double>();
        if (t.contains("actor_lr")) c.train.actor_lr = t.at("actor_lr").get<double>();
        if (t.contains("critic_lr")) c.train.critic_lr = t.at("critic_lr").get<double>();
        if (t.contains("episodes")) c.train.episodes = t.at("episodes").get<int>();
        if (t.contains("workers")) c.train.workers = t.at("workers").get<int>();
        if (t.contains("seed")) c.train.seed = t.at("seed").get<uint64_t>();
        if (t.contains("allow_enhance"))
            c.train.allow_enhance = t.at("allow_enhance").get<bool>();
        if (t.contains("divergence_bound"))
            c.train.divergence_bound = t.at("divergence_bound").get<double>();
        if (t.contains("divergence_patience"))
            c.train.divergence_patience = t.at("divergence_patience").get<int>();
        if (t.contains("async_updates"))
            c.train.async_updates = t.at("async_updates").get<bool>();
        if (t.contains("checkpoint")) c.checkpoint_path = t.at("checkpoint").get<std::string>();
        if (t.contains("curve")) c.curve_path = t.at("curve").get<std::string>();
    }
    if (j.contains("evaluate")) {
        const auto& e = j.at("evaluate");
        if (e.contains("policy")) c.eval_policy = e.at("policy").get<std::string>();
        if (e.contains("checkpoint")) c.eval_checkpoint = e.at("checkpoint").get<std::string>();
        if (e.contains("split")) c.eval_split = e.at("split").get<std::string>();
        if (e.contains("profile")) c.eval_profile = e.at("profile").get<std::string>();
        if (e.contains("seeds")) c.eval_seeds = e.at("seeds").get<int>();
        if (e.contains("base_seed")) c.eval_base_seed = e.at("base_seed").get<uint64_t>();
        if (e.contains("workers")) c.eval_workers = e.at("workers").get<int>();
        if (e.contains("out")) c.report_path = e.at("out").get<std::string>();
    }
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        if (o.contains("video")) c.oracle_video = o.at("video").get<std::string>();
        if (o.contains("trace")) c.oracle_trace = o.at("trace").get<std::string>();
        if (o.contains("profile")) c.oracle_profile = o.at("profile").get<std::string>();
        if (o.contains("horizon")) c.oracle_horizon = o.at("horizon").get<int>();
        if (o.contains("budget")) c.oracle_budget = o.at("budget").get<uint64_t>();
        if (o.contains("out")) c.oracle_out = o.at("out").get<std::string>();
    }
    return c;
}

AppConfig AppConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        f >> j;
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string AppConfig::hash() const { return hash_hex(fnv1a64(to_json().dump())); }

}  // namespace enavs
