// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <numeric>

#include "corpusforge/audio.hpp"

namespace corpusforge::audio {

namespace {

constexpr int kTaps = 64;
constexpr int kHalf = kTaps / 2;
constexpr double kBeta = 8.0;

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double kaiser(double x) {
    // x in [-1, 1]
    const double r = 1.0 - x * x;
    if (r <= 0) return 0.0;
    return std::cyl_bessel_i(0.0, kBeta * std::sqrt(r)) / std::cyl_bessel_i(0.0, kBeta);
}

// One row of kTaps coefficients per phase. Row p, tap t weights input sample
// (base - kHalf + 1 + t) for an output that sits p/up samples past `base`.
std::vector<float> design_kernel(long up, long down) {
    const double cutoff = std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
    std::vector<float> table(static_cast<std::size_t>(up) * kTaps);
    for (long p = 0; p < up; ++p) {
        const double frac = static_cast<double>(p) / static_cast<double>(up);
        double row[kTaps];
        double sum = 0;
        for (int t = 0; t < kTaps; ++t) {
            const double d = static_cast<double>(kHalf - 1 - t) + frac;
            row[t] = cutoff * sinc(cutoff * d) * kaiser(d / kHalf);
            sum += row[t];
        }
        for (int t = 0; t < kTaps; ++t)
            table[static_cast<std::size_t>(p) * kTaps + t] = static_cast<float>(row[t] / sum);
    }
    return table;
}

}  // namespace

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
    if (target_rate <= 0) throw std::invalid_argument("resample: target_rate must be > 0");
    if (buf.sample_rate <= 0) throw std::invalid_argument("resample: invalid source rate");
    if (buf.channels != 1) throw std::invalid_argument("resample: buffer must be mono");
    if (target_rate == buf.sample_rate) return buf;

    const long g = std::gcd(static_cast<long>(target_rate), static_cast<long>(buf.sample_rate));
    const long up = target_rate / g;
    const long down = buf.sample_rate / g;
    const auto kernel = design_kernel(up, down);

    const auto& x = buf.samples;
    const long n = static_cast<long>(x.size());
    const long out_len = static_cast<long>((static_cast<long long>(n) * up + down - 1) / down);

    AudioBuffer out;
    out.sample_rate = target_rate;
    out.channels = 1;
    out.samples.resize(static_cast<std::size_t>(out_len));
    for (long k = 0; k < out_len; ++k) {
        const long long num = static_cast<long long>(k) * down;
        const long base = static_cast<long>(num / up);
        const long phase = static_cast<long>(num % up);
        const float* h = kernel.data() + static_cast<std::size_t>(phase) * kTaps;
        const long first = base - kHalf + 1;
        double acc = 0;
        if (first >= 0 && first + kTaps <= n) {
            const float* xp = x.data() + first;
            for (int t = 0; t < kTaps; ++t) acc += static_cast<double>(h[t]) * xp[t];
        } else {
            for (int t = 0; t < kTaps; ++t) {
                const long i = first + t;
                if (i >= 0 && i < n) acc += static_cast<double>(h[t]) * x[static_cast<std::size_t>(i)];
            }
        }
        out.samples[static_cast<std::size_t>(k)] = static_cast<float>(acc);
    }
    return out;
}

}  // namespace corpusforge::audio
