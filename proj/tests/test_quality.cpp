// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "corpusforge/quality.hpp"
#include "oracles.hpp"

namespace {

using namespace corpusforge;

TEST(Snr, TracksTrueSnrOnToneMixtures) {
    for (int snr = 0; snr <= 40; snr += 5)
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
            EXPECT_NEAR(quality::estimate_snr(oracle::tone_in_noise(snr, seed)), snr, 1.5)
                << "snr " << snr << " seed " << seed;
}

TEST(Snr, ScaleInvariant) {
    for (double scale : {0.01, 0.1, 10.0}) {
        const double a = quality::estimate_snr(oracle::tone_in_noise(20, 9));
        const double b = quality::estimate_snr(oracle::tone_in_noise(20, 9, scale));
        EXPECT_NEAR(a, b, 0.1) << scale;
    }
}

TEST(Snr, UndefinedCases) {
    audio::AudioBuffer silent{std::vector<float>(16000, 0.0f), 16000, 1};
    EXPECT_THROW(quality::estimate_snr(silent), quality::MetricError);
    audio::AudioBuffer shortclip{std::vector<float>(4000, 0.1f), 16000, 1};
    EXPECT_THROW(quality::estimate_snr(shortclip), quality::MetricError);
}

TEST(Snr, ClampsToRange) {
    // Tone bursts over digital silence: noise floor is zero.
    auto b = oracle::tone_in_noise(30, 1);
    for (std::size_t i = 0; i < b.samples.size(); ++i)
        if ((i / 16000) % 2 == 1) b.samples[i] = 0;
    const double v = quality::estimate_snr(b);
    EXPECT_LE(v, 60.0);
    EXPECT_GE(v, 40.0);
}

TEST(Silence, RatioOfQuietFrames) {
    audio::AudioBuffer b{std::vector<float>(32000, 0.0f), 16000, 1};
    for (std::size_t i = 0; i < 16000; ++i) b.samples[i] = (i % 2) ? 0.3f : -0.3f;
    const double r = quality::silence_ratio(b);
    EXPECT_NEAR(r, 0.5, 0.02);

    audio::AudioBuffer loud{std::vector<float>(16000, 0.2f), 16000, 1};
    EXPECT_DOUBLE_EQ(quality::silence_ratio(loud), 0.0);
}

TEST(Silence, AppendingSilenceNeverLowersRatio) {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto b = oracle::tone_in_noise(15, static_cast<std::uint64_t>(trial), 1.0, 2.0);
        double prev = quality::silence_ratio(b);
        for (int k = 1; k <= 4; ++k) {
            b = audio::pad_silence(b, 1.0);
            const double now = quality::silence_ratio(b);
            EXPECT_GE(now, prev);
            prev = now;
        }
    }
}

TEST(Gate, ReportsEveryFailedCriterion) {
    quality::QualityGateConfig cfg;
    const auto good = quality::quality_gate(oracle::tone_in_noise(25, 2, 1.0, 8.0), cfg);
    EXPECT_TRUE(good.passed);
    EXPECT_TRUE(good.reasons.empty());

    const auto noisy_long = quality::quality_gate(oracle::tone_in_noise(3, 2, 1.0, 12.0), cfg);
    EXPECT_FALSE(noisy_long.passed);
    EXPECT_NE(std::find(noisy_long.reasons.begin(), noisy_long.reasons.end(), "snr_below_min"),
              noisy_long.reasons.end());
    EXPECT_NE(std::find(noisy_long.reasons.begin(), noisy_long.reasons.end(), "too_long"),
              noisy_long.reasons.end());

    audio::AudioBuffer silent{std::vector<float>(16000 * 5, 0.0f), 16000, 1};
    const auto s = quality::quality_gate(silent, cfg);
    EXPECT_FALSE(s.passed);
    EXPECT_FALSE(s.snr_db.has_value());
    EXPECT_NE(std::find(s.reasons.begin(), s.reasons.end(), "snr_unmeasurable"), s.reasons.end());

    const auto tiny = quality::quality_gate(oracle::tone_in_noise(25, 2, 1.0, 2.0), cfg);
    EXPECT_NE(std::find(tiny.reasons.begin(), tiny.reasons.end(), "too_short"), tiny.reasons.end());
}

TEST(Gate, DefaultsFollowSegmentation) {
    segmenter::SegmentationParams p;
    const auto cfg = quality::QualityGateConfig::from(p);
    EXPECT_DOUBLE_EQ(cfg.min_duration, 4.0);
    EXPECT_DOUBLE_EQ(cfg.max_duration, 10.25);
    quality::QualityGateConfig bad;
    bad.max_silence_ratio = 2;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

}  // namespace
