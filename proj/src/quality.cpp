// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/quality.hpp"

#include <algorithm>
#include <cmath>

namespace corpusforge::quality {

double estimate_snr(const audio::AudioBuffer& buf, const SnrOptions& opt) {
    if (buf.duration_seconds() < 0.5) throw MetricError("SNR undefined: clip shorter than 0.5 s");
    const auto mono = audio::downmix(buf);
    const auto fe = audio::frame_energies(mono);
    const auto& e = fe.energies;

    std::vector<double> ordered = e;
    const auto k = static_cast<std::size_t>(opt.noise_percentile * static_cast<double>(ordered.size() - 1));
    std::nth_element(ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(k), ordered.end());
    const double threshold = ordered[k] * opt.threshold_factor;

    double speech = 0, noise = 0;
    std::size_t n_speech = 0, n_noise = 0;
    for (double v : e) {
        if (v > threshold) {
            speech += v;
            ++n_speech;
        } else {
            noise += v;
            ++n_noise;
        }
    }
    if (n_speech == 0 || n_noise == 0 || speech <= 0)
        throw MetricError("SNR undefined: frames do not separate into speech and noise");
    speech /= static_cast<double>(n_speech);
    noise /= static_cast<double>(n_noise);
    if (noise <= 0) return opt.max_db;
    const double snr = 10.0 * std::log10((speech - noise) / noise);
    return std::clamp(snr, opt.min_db, opt.max_db);
}

double silence_ratio(const audio::AudioBuffer& buf) {
    const auto fe = audio::frame_energies(audio::downmix(buf));
    const auto& e = fe.energies;
    const double peak = *std::max_element(e.begin(), e.end());
    const double floor = std::max(1e-5 * peak, 1e-10);
    const auto quiet = std::count_if(e.begin(), e.end(), [&](double v) { return v < floor; });
    return static_cast<double>(quiet) / static_cast<double>(e.size());
}

QualityGateConfig QualityGateConfig::from(const segmenter::SegmentationParams& p) {
    QualityGateConfig cfg;
    cfg.min_duration = p.min_duration();
    cfg.max_duration = p.hard_limit() + p.pad;
    return cfg;
}

void QualityGateConfig::validate() const {
    if (!(min_duration < max_duration))
        throw std::invalid_argument("quality gate: min_duration must be < max_duration");
    if (!(max_silence_ratio >= 0 && max_silence_ratio <= 1))
        throw std::invalid_argument("quality gate: max_silence_ratio must be in [0, 1]");
}

QualityReport quality_gate(const audio::AudioBuffer& buf, const QualityGateConfig& cfg) {
    cfg.validate();
    QualityReport r;
    r.duration = buf.duration_seconds();
    try {
        r.snr_db = estimate_snr(buf);
        if (*r.snr_db < cfg.min_snr_db) r.reasons.emplace_back("snr_below_min");
    } catch (const std::exception&) {
        r.reasons.emplace_back("snr_unmeasurable");
    }
    try {
        r.silence_ratio = silence_ratio(buf);
        if (*r.silence_ratio > cfg.max_silence_ratio) r.reasons.emplace_back("silence_above_max");
    } catch (const std::exception&) {
        r.reasons.emplace_back("silence_unmeasurable");
    }
    if (r.duration < cfg.min_duration) r.reasons.emplace_back("too_short");
    if (r.duration > cfg.max_duration) r.reasons.emplace_back("too_long");
    r.passed = r.reasons.empty();
    return r;
}

}  // namespace corpusforge::quality
