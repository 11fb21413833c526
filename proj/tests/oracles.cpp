// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

using corpusforge::transcript::Transcript;
using corpusforge::transcript::Word;

namespace {

bool has_punct(const std::string& text, const std::string& set) {
    std::size_t end = text.find_last_not_of(" \t\r\n");
    return end != std::string::npos && set.find(text[end]) != std::string::npos;
}

}  // namespace

std::vector<RefSegment> segment(const Transcript& t, const RefParams& p) {
    const auto& w = t.words;
    const double lo = p.D - p.T;
    const double window_hi = std::min(p.D + 1, p.D + p.T);
    const double hard = p.D + p.T;
    const double keep = p.D - 2 * p.T;

    std::vector<RefSegment> out;
    std::size_t i = 0;
    while (i < w.size()) {
        const double t0 = w[i].start;
        bool reached = false;
        long punct_at = -1;
        long fit = -1;  // last word keeping the segment within D + T
        bool exhausted = true;
        for (std::size_t k = i; k < w.size(); ++k) {
            const double d = w[k].end - t0;
            if (d > hard) {
                exhausted = false;
                break;
            }
            fit = static_cast<long>(k);
            if (d >= lo) reached = true;
            if (reached && d <= window_hi && has_punct(w[k].text, p.punctuation)) {
                punct_at = static_cast<long>(k);
                break;
            }
        }
        if (punct_at >= 0) {
            out.push_back({i, static_cast<std::size_t>(punct_at), true, false});
            i = static_cast<std::size_t>(punct_at) + 1;
            continue;
        }
        if (fit < 0) {  // the first word alone is too long
            ++i;
            continue;
        }
        const auto last = static_cast<std::size_t>(fit);
        const double d = w[last].end - t0;
        if (!reached && exhausted) {
            // Ran out of words: the final partial segment.
            if (d >= keep) {
                const bool pt = has_punct(w[last].text, p.punctuation);
                out.push_back({i, last, pt, !pt});
            }
            break;
        }
        if (d >= keep) out.push_back({i, last, false, true});
        i = last + 1;
    }

    const double cap = t.utterance_duration / p.D - 10.0;
    if (p.cap && cap > 0) {
        for (std::size_t k = out.size(); k-- > 0 && static_cast<double>(out.size()) > cap;)
            if (!out[k].punct) out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return out;
}

std::set<std::size_t> pause_boundaries(const Transcript& t, double threshold) {
    std::set<std::size_t> b;
    for (std::size_t i = 0; i + 1 < t.words.size(); ++i)
        if (t.words[i + 1].start - t.words[i].end > threshold) b.insert(i);
    return b;
}

Transcript random_transcript(std::uint64_t seed, std::size_t max_words) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> count(0, max_words);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const char* marks = ".!?,;:-";
    Transcript t;
    const std::size_t n = count(rng);
    double now = u(rng) * 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        Word w;
        w.text = "w" + std::to_string(i);
        const double r = u(rng);
        if (r < 0.18) w.text += marks[static_cast<std::size_t>(u(rng) * 7) % 7];
        double len = 0.05 + u(rng) * 0.9;
        if (u(rng) < 0.01) len = 9.0 + u(rng) * 4.0;  // occasionally longer than D + T
        double gap = u(rng) < 0.85 ? u(rng) * 0.3 : u(rng) * 3.0;
        // Round to milliseconds like ASR output.
        w.start = std::round(now * 1000) / 1000;
        w.end = std::round((now + len) * 1000) / 1000;
        now = w.end + gap;
        t.words.push_back(std::move(w));
    }
    t.utterance_duration = std::round((now + u(rng) * 5.0) * 1000) / 1000;
    if (u(rng) < 0.3) t.utterance_duration += 200.0 * u(rng);  // leave room for the cap rule
    return t;
}

Transcript uniform_transcript(std::size_t n, double slot, std::size_t punct_at) {
    Transcript t;
    for (std::size_t i = 0; i < n; ++i) {
        Word w;
        w.text = "word" + std::to_string(i + 1) + (i + 1 == punct_at ? "." : "");
        w.start = static_cast<double>(i) * slot;
        w.end = static_cast<double>(i + 1) * slot;
        t.words.push_back(std::move(w));
    }
    t.utterance_duration = static_cast<double>(n) * slot;
    return t;
}

corpusforge::audio::AudioBuffer tone_in_noise(double snr_db, std::uint64_t seed, double scale,
                                              double seconds) {
    constexpr int rate = 16000;
    const double sigma = 0.01;
    const double amp = std::sqrt(2.0 * sigma * sigma * std::pow(10.0, snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    corpusforge::audio::AudioBuffer buf;
    buf.sample_rate = rate;
    buf.channels = 1;
    const auto n = static_cast<std::size_t>(seconds * rate);
    buf.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        const bool on = static_cast<long>(std::floor(t)) % 2 == 0;
        const double s = on ? amp * std::sin(2 * std::numbers::pi * 440.0 * t) : 0.0;
        buf.samples[i] = static_cast<float>(scale * (s + noise(rng)));
    }
    return buf;
}

corpusforge::audio::AudioBuffer sine(double freq, int rate, double seconds, double amplitude) {
    corpusforge::audio::AudioBuffer buf;
    buf.sample_rate = rate;
    buf.channels = 1;
    const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
    buf.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        buf.samples[i] = static_cast<float>(amplitude * std::sin(2 * std::numbers::pi * freq * i / rate));
    return buf;
}

std::vector<double> dft_magnitude(const std::vector<float>& x, std::size_t n) {
    std::vector<double> mag(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double re = 0, im = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = -2 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
            re += x[i] * std::cos(phase);
            im += x[i] * std::sin(phase);
        }
        mag[k] = std::hypot(re, im);
    }
    return mag;
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace oracle
