// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "corpusforge/audio.hpp"

namespace corpusforge::audio {

class WavError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SampleFormat { pcm16, float32 };

// RIFF/WAVE with PCM 16-bit or IEEE float 32-bit payload (plain or
// WAVE_FORMAT_EXTENSIBLE). Channels are kept interleaved.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);

// Samples outside [-1, 1] are clipped for pcm16.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf,
                                     SampleFormat format = SampleFormat::pcm16);

AudioBuffer read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioBuffer& buf,
               SampleFormat format = SampleFormat::pcm16);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace corpusforge::audio
