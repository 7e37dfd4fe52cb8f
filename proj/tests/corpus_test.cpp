#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "enavs/corpus.hpp"
#include "enavs/errors.hpp"

namespace fs = std::filesystem;
using namespace enavs;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("enavs_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CorpusConfig tiny_config() {
    CorpusConfig cfg;
    cfg.num_traces = 6;
    cfg.num_videos = 6;
    cfg.trace_duration_s = 40.0;
    cfg.min_chunks = 4;
    cfg.max_chunks = 8;
    cfg.seed = 99;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("default model reproduces the calibration anchors") {
    const RateQualityModel m = default_quality_model(0.0);
    CHECK(base_psnr(m, 2.0, 0.0) == doctest::Approx(35.68).epsilon(1e-9));
    CHECK(base_psnr(m, 3.0, 0.0) == doctest::Approx(37.76).epsilon(1e-9));
    CHECK(base_psnr(m, 2.0, 0.0) + enhancement_gain(m, 2.0) ==
          doctest::Approx(37.20).epsilon(1e-9));
}

TEST_CASE("the four compute tiers are ordered by enhancement cost") {
    const auto profiles = default_profiles();
    REQUIRE(profiles.size() == 4);
    CHECK(profiles[0].name == "ultra-high");
    CHECK(profiles[3].name == "low");
    for (size_t i = 1; i < profiles.size(); ++i)
        CHECK(profiles[i].scale_factor > profiles[i - 1].scale_factor);
    CHECK(profile_by_name(profiles, "medium").scale_factor == 6.0);
    CHECK_THROWS_AS(profile_by_name(profiles, "turbo"), ConfigError);
    CHECK_THROWS_WITH_AS(profile_by_name(profiles, "turbo"),
                         doctest::Contains("ultra-high"), ConfigError);
}

TEST_CASE("synthetic traces are seeded, bounded, and 1 Hz") {
    const BandwidthTrace a = synth_trace(120.0, 5);
    const BandwidthTrace b = synth_trace(120.0, 5);
    const BandwidthTrace c = synth_trace(120.0, 6);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_csv() != c.to_csv());
    CHECK(a.total_duration_s() == doctest::Approx(120.0));
    for (double t = 0.25; t < 120.0; t += 1.0) {
        const double mbps = a.throughput_at(t);
        CHECK(mbps >= 0.1);
        CHECK(mbps <= 60.0);
    }
    CHECK_THROWS_AS(synth_trace(1.0, 5), ConfigError);
}

TEST_CASE("corpus config round-trips and validates") {
    CorpusConfig cfg = tiny_config();
    const CorpusConfig back = CorpusConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(CorpusConfig::from_json(nlohmann::json::object()).num_traces == 40);  // defaults

    cfg.num_traces = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_config();
    cfg.ladder_mbps = {3.0, 2.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_config();
    cfg.min_chunks = 9;  // above max_chunks
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("generate and load round-trip a full corpus") {
    TempDir dir("corpus_roundtrip");
    const CorpusConfig cfg = tiny_config();
    generate_corpus(cfg, dir.path.string());

    const Corpus corpus = load_corpus(dir.path.string());
    CHECK(corpus.train.traces.size() == 3);
    CHECK(corpus.test.traces.size() == 3);
    CHECK(corpus.train.videos.size() == 3);
    CHECK(corpus.test.videos.size() == 3);
    CHECK(corpus.ladder_mbps == cfg.ladder_mbps);
    CHECK(&corpus.split("train") == &corpus.train);
    CHECK(&corpus.split("test") == &corpus.test);
    CHECK_THROWS_AS(corpus.split("validation"), ConfigError);

    for (const auto& v : corpus.train.videos) {
        CHECK(v->num_chunks >= cfg.min_chunks);
        CHECK(v->num_chunks <= cfg.max_chunks);
        CHECK(v->ladder_mbps == cfg.ladder_mbps);
    }
    // names track the files on disk
    for (const std::string& n : corpus.test.trace_names)
        CHECK(n.rfind("trace_", 0) == 0);
}

TEST_CASE("scaled trace means land inside the configured band") {
    TempDir dir("corpus_means");
    const CorpusConfig cfg = tiny_config();
    generate_corpus(cfg, dir.path.string());
    const Corpus corpus = load_corpus(dir.path.string());

    for (const CorpusSplit* s : {&corpus.train, &corpus.test}) {
        for (const auto& t : s->traces) {
            const double mean = t->time_weighted_mean_mbps();
            // CSV serialization rounds the samples, hence the slack
            CHECK(mean >= cfg.target_mean_lo_mbps - 1e-6);
            CHECK(mean <= cfg.target_mean_hi_mbps + 1e-6);
        }
    }
}

TEST_CASE("the manifest records split, scaling, and seeds") {
    TempDir dir("corpus_manifest");
    generate_corpus(tiny_config(), dir.path.string());
    const nlohmann::json manifest =
        nlohmann::json::parse(slurp(dir.path / "corpus_manifest.json"));
    CHECK(manifest.at("format_version") == 1);
    CHECK(manifest.at("traces").size() == 6);
    CHECK(manifest.at("videos").size() == 6);
    int train_count = 0;
    for (const auto& t : manifest.at("traces")) {
        const bool is_train = t.at("split") == "train";
        train_count += is_train;
        CHECK(t.at("scale_method") == (is_train ? "mean" : "max"));
        CHECK(t.at("target_mbps").get<double>() > 0.0);
        CHECK(fs::exists(dir.path / t.at("path").get<std::string>()));
    }
    CHECK(train_count == 3);
    for (const auto& v : manifest.at("videos"))
        CHECK(fs::exists(dir.path / v.at("path").get<std::string>()));
}

TEST_CASE("generation is deterministic in every produced byte") {
    TempDir a("corpus_det_a"), b("corpus_det_b");
    generate_corpus(tiny_config(), a.path.string());
    generate_corpus(tiny_config(), b.path.string());

    std::vector<fs::path> rels;
    for (const auto& e : fs::recursive_directory_iterator(a.path))
        if (e.is_regular_file()) rels.push_back(fs::relative(e.path(), a.path));
    CHECK(rels.size() == 13);  // 6 traces + 6 videos + manifest
    for (const fs::path& rel : rels) CHECK(slurp(a.path / rel) == slurp(b.path / rel));

    CorpusConfig other = tiny_config();
    other.seed = 100;
    TempDir c("corpus_det_c");
    generate_corpus(other, c.path.string());
    CHECK(slurp(a.path / "corpus_manifest.json") != slurp(c.path / "corpus_manifest.json"));
}

TEST_CASE("loading rejects a broken corpus directory") {
    TempDir dir("corpus_broken");
    CHECK_THROWS_AS(load_corpus(dir.path.string()), IoError);

    generate_corpus(tiny_config(), dir.path.string());
    // corrupt the manifest
    std::ofstream f(dir.path / "corpus_manifest.json");
    f << "{ not json";
    f.close();
    CHECK_THROWS_AS(load_corpus(dir.path.string()), ParseError);
}
