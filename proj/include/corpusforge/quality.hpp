// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpusforge/audio.hpp"
#include "corpusforge/segmenter.hpp"

namespace corpusforge::quality {

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SnrOptions {
    double noise_percentile = 0.30;
    // Frames above noise_percentile energy times this factor count as speech.
    double threshold_factor = 1.5;
    double min_db = -10.0;
    double max_db = 60.0;
};

// Blind two-class SNR: frames are split at a multiple of the 30th-percentile
// frame energy, the noise class mean is taken as the noise floor and
// subtracted from the speech class mean. Throws MetricError("SNR undefined")
// for digital silence or when every frame falls on one side.
double estimate_snr(const audio::AudioBuffer& buf, const SnrOptions& opt = {});

// Fraction of frames below 1e-5 x the loudest frame (absolute floor 1e-10).
double silence_ratio(const audio::AudioBuffer& buf);

struct QualityGateConfig {
    double min_snr_db = 12.0;
    double max_silence_ratio = 0.4;
    double min_duration = 4.0;   // D - 2T
    double max_duration = 10.25; // D + T + pad

    static QualityGateConfig from(const segmenter::SegmentationParams& p);
    void validate() const;
};

struct QualityReport {
    std::optional<double> snr_db;         // absent when unmeasurable
    std::optional<double> silence_ratio;
    double duration = 0;
    bool passed = false;
    std::vector<std::string> reasons;     // every failed criterion
};

// Reasons: snr_below_min, snr_unmeasurable, silence_above_max,
// silence_unmeasurable, too_short, too_long.
QualityReport quality_gate(const audio::AudioBuffer& buf, const QualityGateConfig& cfg);

}  // namespace corpusforge::quality
