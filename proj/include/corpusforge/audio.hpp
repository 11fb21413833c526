// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace corpusforge::audio {

inline constexpr int kTargetRate = 16000;

// Interleaved floating-point PCM, nominally in [-1, 1].
struct AudioBuffer {
    std::vector<float> samples;
    int sample_rate = kTargetRate;
    int channels = 1;

    std::size_t frames() const { return channels > 0 ? samples.size() / channels : 0; }
    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
    }
    bool operator==(const AudioBuffer&) const = default;
};

struct FrameEnergies {
    double frame_length = 0.025;  // seconds
    double hop = 0.010;           // seconds
    std::vector<double> energies; // mean square per frame
};

// Mean of channels.
AudioBuffer downmix(const AudioBuffer& buf);

// Downmix to mono, then resample to 16 kHz.
AudioBuffer normalize(const AudioBuffer& buf);

// Windowed-sinc polyphase resampler (64 taps, Kaiser beta 8). Mono only.
// Same-rate input is returned unchanged.
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

// Drops everything before round(start_time * rate).
AudioBuffer trim_from(const AudioBuffer& buf, double start_time);

// Appends round(tail * rate) frames of zeros.
AudioBuffer pad_silence(const AudioBuffer& buf, double tail);

// Frames [round(start * rate), round(end * rate)).
AudioBuffer slice(const AudioBuffer& buf, double start, double end);

// Frame count is floor((n - frame) / hop) + 1 in samples. Mono only; throws
// std::invalid_argument when the buffer is shorter than one frame.
FrameEnergies frame_energies(const AudioBuffer& buf, double frame_length = 0.025,
                             double hop = 0.010);

}  // namespace corpusforge::audio
