// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

// Stand-in TTS engine for tests and demos. Produces a deterministic
// speech-like signal whose length follows the speaking-rate estimate.

#include <cmath>
#include <iostream>
#include <numbers>
#include <random>

#include <CLI11.hpp>

#include "corpusforge/digest.hpp"
#include "corpusforge/synthesis.hpp"
#include "corpusforge/wav.hpp"

namespace {

using corpusforge::audio::AudioBuffer;

AudioBuffer tone(const std::string& text, const std::string& voice, int rate) {
    const auto seed = std::stoull(corpusforge::sha256_hex(voice + "\n" + text).substr(0, 15), nullptr, 16);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.003);
    const double f0 = 100.0 + static_cast<double>(seed % 120);
    const double seconds = corpusforge::synthesis::expected_duration(text);

    AudioBuffer buf;
    buf.sample_rate = rate;
    buf.channels = 1;
    buf.samples.resize(static_cast<std::size_t>(std::llround(seconds * rate)));
    for (std::size_t i = 0; i < buf.samples.size(); ++i) {
        const double t = static_cast<double>(i) / rate;
        // Syllable-rate envelope, roughly four bursts per second.
        const double env = std::max(0.0, std::sin(2 * std::numbers::pi * 2.0 * t));
        double v = 0;
        for (int h = 1; h <= 4; ++h) v += std::sin(2 * std::numbers::pi * f0 * h * t) / h;
        buf.samples[i] = static_cast<float>(0.2 * env * v + noise(rng));
    }
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpusforge stub synthesis engine"};
    std::string text, output, reference, voice = "stub", mode = "tone";
    int rate = 16000;
    app.add_option("--text", text, "Text to speak")->required();
    app.add_option("--output", output, "Output WAV path")->required();
    app.add_option("--reference", reference, "Reference audio (copy mode)");
    app.add_option("--voice", voice, "Voice label, varies pitch");
    app.add_option("--rate", rate, "Output sample rate");
    app.add_option("--mode", mode, "tone | copy | silent | fail")
        ->check(CLI::IsMember({"tone", "copy", "silent", "fail"}));
    CLI11_PARSE(app, argc, argv);

    try {
        if (mode == "fail") {
            std::cerr << "stub engine: failing on request\n";
            return 3;
        }
        AudioBuffer out;
        if (mode == "copy") {
            if (reference.empty()) throw std::runtime_error("copy mode needs --reference");
            out = corpusforge::audio::read_wav(reference);
        } else {
            out = tone(text, voice, rate);
            if (mode == "silent") std::fill(out.samples.begin(), out.samples.end(), 0.0f);
        }
        corpusforge::audio::write_wav(output, out);
    } catch (const std::exception& e) {
        std::cerr << "stub engine: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
