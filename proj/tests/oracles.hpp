// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used to check the library. They are
// written for clarity, not speed, and share no code with src/.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "corpusforge/audio.hpp"
#include "corpusforge/transcript.hpp"

namespace oracle {

struct RefSegment {
    std::size_t first = 0;  // inclusive word indices
    std::size_t last = 0;
    bool punct = false;
    bool padded = false;

    bool operator==(const RefSegment&) const = default;
};

struct RefParams {
    double D = 8, T = 2;
    std::string punctuation = ".!?,;";  // ASCII only
    bool cap = true;                     // apply the (U/D) - 10 cap rule
};

// Transcript-driven segmentation from the written rules, one linear scan per
// segment.
std::vector<RefSegment> segment(const corpusforge::transcript::Transcript& t, const RefParams& p);

// Indices i where a boundary falls after word i (gap strictly above threshold).
std::set<std::size_t> pause_boundaries(const corpusforge::transcript::Transcript& t, double threshold);

// Random transcript: up to `max_words` words with non-decreasing times,
// random durations, gaps and trailing punctuation (including characters
// outside the default set).
corpusforge::transcript::Transcript random_transcript(std::uint64_t seed, std::size_t max_words = 200);

// `n` back-to-back words of `slot` seconds starting at 0; `punct_at` (1-based)
// gets a trailing period, 0 for none.
corpusforge::transcript::Transcript uniform_transcript(std::size_t n, double slot, std::size_t punct_at);

// Tone bursts (1 s on / 1 s off) over white noise; the tone's power while on
// is `snr_db` above the noise power. 16 kHz mono, `seconds` long.
corpusforge::audio::AudioBuffer tone_in_noise(double snr_db, std::uint64_t seed, double scale = 1.0,
                                              double seconds = 8.0);

corpusforge::audio::AudioBuffer sine(double freq, int rate, double seconds, double amplitude = 0.5);

// Magnitude spectrum |X[k]| for k in [0, n/2] of the first n samples, by
// direct summation.
std::vector<double> dft_magnitude(const std::vector<float>& x, std::size_t n);

std::size_t argmax(const std::vector<double>& v);

}  // namespace oracle
