#include <doctest.h>

#include <cmath>

#include "enavs/corpus.hpp"
#include "enavs/errors.hpp"
#include "enavs/quality_model.hpp"

using namespace enavs;

TEST_CASE("two-point fit solves the log-linear system exactly") {
    const RateQualityModel m = fit_rate_quality({{2.0, 35.68}, {3.0, 37.76}});
    CHECK(m.beta1_db == doctest::Approx(5.129911201742972).epsilon(1e-12));
    CHECK(m.beta0_db == doctest::Approx(32.124216513988976).epsilon(1e-12));
    CHECK(m.r_min_mbps == 2.0);
    CHECK(m.r_max_mbps == 3.0);

    CHECK(base_psnr(m, 2.0, 0.0) == doctest::Approx(35.68).epsilon(1e-12));
    CHECK(base_psnr(m, 3.0, 0.0) == doctest::Approx(37.76).epsilon(1e-12));
    CHECK(base_psnr(m, 2.5, 0.0) == doctest::Approx(36.82470660348347).epsilon(1e-12));
}

TEST_CASE("fit with ln-friendly points") {
    const RateQualityModel m = fit_rate_quality({{1.0, 30.0}, {std::exp(1.0), 31.0}});
    CHECK(m.beta0_db == doctest::Approx(30.0));
    CHECK(m.beta1_db == doctest::Approx(1.0));
}

TEST_CASE("fit requires two distinct bitrates") {
    CHECK_THROWS_AS(fit_rate_quality({{2.0, 35.0}, {2.0, 36.0}}), CalibrationError);
    CHECK_THROWS_AS(fit_rate_quality({{2.0, 35.0}}), CalibrationError);
}

TEST_CASE("least squares through three collinear points is exact") {
    // dB = 30 + 2 ln R at R = 1, e, e^2
    const RateQualityModel m = fit_rate_quality(
        {{1.0, 30.0}, {std::exp(1.0), 32.0}, {std::exp(2.0), 34.0}});
    CHECK(m.beta0_db == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(m.beta1_db == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("base_psnr rejects bitrates outside the fitted range") {
    const RateQualityModel m = default_quality_model(0.0);
    CHECK_THROWS_AS(base_psnr(m, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(base_psnr(m, 5.0, 0.0), DomainError);
}

TEST_CASE("enhancement gain decays linearly to zero at the top rate") {
    const RateQualityModel m = default_quality_model(0.0);  // gain 1.52 over [2,4]
    CHECK(enhancement_gain(m, 2.0) == doctest::Approx(1.52).epsilon(1e-12));
    CHECK(enhancement_gain(m, 3.0) == doctest::Approx(0.76).epsilon(1e-12));
    CHECK(enhancement_gain(m, 4.0) == doctest::Approx(0.0));
}

TEST_CASE("enhancement time scales the per-chunk reference speed") {
    ComputeProfile p;  // 25 frames at 98.9 fps reference
    p.scale_factor = 6.0;
    CHECK(enhancement_time(p) == doctest::Approx(1.5166835187057632).epsilon(1e-12));
    p.scale_factor = 4.5;
    CHECK(enhancement_time(p) == doctest::Approx(1.1375126390293224).epsilon(1e-12));
}

TEST_CASE("jitter-free manifest rows follow the calibrated curve") {
    const RateQualityModel m = default_quality_model(0.0);
    const MpdManifest mpd = generate_mpd(m, 3, {2.0, 4.0}, 1.0, 99);
    for (int i = 0; i < 3; ++i) {
        CHECK(mpd.psnr(i, {0, false}) == doctest::Approx(35.68).epsilon(1e-12));
        CHECK(mpd.psnr(i, {0, true}) == doctest::Approx(37.20).epsilon(1e-12));
        CHECK(mpd.psnr(i, {1, false}) ==
              doctest::Approx(39.23578348601102).epsilon(1e-12));
        // gain is 0 at the top rate, so both actions coincide
        CHECK(mpd.psnr(i, {1, true}) == mpd.psnr(i, {1, false}));
    }
    CHECK(mpd.action_count() == 4);
    mpd.validate();
}

TEST_CASE("manifest generation is deterministic in the seed") {
    const RateQualityModel m = default_quality_model(1.0);
    const MpdManifest a = generate_mpd(m, 10, {2.0, 2.5, 3.0, 3.5, 4.0}, 1.0, 7);
    const MpdManifest b = generate_mpd(m, 10, {2.0, 2.5, 3.0, 3.5, 4.0}, 1.0, 7);
    const MpdManifest c = generate_mpd(m, 10, {2.0, 2.5, 3.0, 3.5, 4.0}, 1.0, 8);
    CHECK(a.psnr_db == b.psnr_db);
    CHECK(a.psnr_db != c.psnr_db);
}

TEST_CASE("generated manifests keep their invariants under heavy jitter") {
    const RateQualityModel m = default_quality_model(2.5);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const MpdManifest mpd = generate_mpd(m, 30, {2.0, 2.5, 3.0, 3.5, 4.0}, 1.0, seed);
        mpd.validate();  // monotone in bitrate, enhancement never hurts
    }
}

TEST_CASE("manifest JSON round-trip") {
    const RateQualityModel m = default_quality_model(0.8);
    const MpdManifest a = generate_mpd(m, 5, {2.0, 3.0, 4.0}, 1.0, 3);
    const MpdManifest b = MpdManifest::from_json(a.to_json());
    CHECK(a.num_chunks == b.num_chunks);
    CHECK(a.chunk_duration_s == b.chunk_duration_s);
    CHECK(a.ladder_mbps == b.ladder_mbps);
    CHECK(a.psnr_db == b.psnr_db);
}

TEST_CASE("model validation rejects broken parameters") {
    RateQualityModel m = default_quality_model(0.0);
    m.beta1_db = -1.0;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = default_quality_model(0.0);
    m.r_min_mbps = 5.0;  // above r_max
    CHECK_THROWS_AS(m.validate(), ConfigError);
    ComputeProfile p;
    p.scale_factor = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
