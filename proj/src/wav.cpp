// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

namespace corpusforge::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
    std::uint16_t code = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw WavError("not a RIFF/WAVE file");

    std::optional<Format> fmt;
    std::span<const std::uint8_t> data;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* hdr = bytes.data() + pos;
        std::string id(reinterpret_cast<const char*>(hdr), 4);
        std::size_t size = u32(hdr + 4);
        std::size_t body = pos + 8;
        if (id == "fmt ") {
            if (size < 16 || body + size > bytes.size())
                throw WavError("truncated fmt chunk");
            const std::uint8_t* p = bytes.data() + body;
            Format f{u16(p), u16(p + 2), u32(p + 4), u16(p + 14)};
            if (f.code == kFormatExtensible) {
                if (size < 40) throw WavError("truncated fmt chunk (extensible)");
                // The sub-format GUID starts with the plain format code.
                f.code = u16(p + 24);
            }
            fmt = f;
        } else if (id == "data") {
            if (!fmt) throw WavError("data chunk before fmt chunk");
            // Streaming writers leave the size as 0 or 0xFFFFFFFF; clamp to
            // what is actually present.
            std::size_t avail = bytes.size() - std::min(body, bytes.size());
            data = bytes.subspan(std::min(body, bytes.size()), std::min(size, avail));
            have_data = true;
            break;
        }
        pos = body + size + (size & 1);
    }
    if (!fmt) throw WavError("missing fmt chunk");
    if (!have_data) throw WavError("missing data chunk");
    if (fmt->channels == 0) throw WavError("fmt chunk: zero channels");
    if (fmt->rate == 0) throw WavError("fmt chunk: zero sample rate");

    AudioBuffer out;
    out.sample_rate = static_cast<int>(fmt->rate);
    out.channels = fmt->channels;
    if (fmt->code == kFormatPcm && fmt->bits == 16) {
        std::size_t n = data.size() / 2;
        n -= n % fmt->channels;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.samples[i] = static_cast<float>(static_cast<std::int16_t>(u16(&data[2 * i]))) / 32768.0f;
    } else if (fmt->code == kFormatFloat && fmt->bits == 32) {
        std::size_t n = data.size() / 4;
        n -= n % fmt->channels;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.samples[i] = std::bit_cast<float>(u32(&data[4 * i]));
    } else {
        throw WavError("fmt chunk: unsupported codec " + std::to_string(fmt->code) + " with " +
                       std::to_string(fmt->bits) + " bits per sample");
    }
    return out;
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf, SampleFormat format) {
    if (buf.channels <= 0 || buf.sample_rate <= 0)
        throw std::invalid_argument("encode_wav: invalid channel count or rate");
    const std::uint16_t bits = format == SampleFormat::pcm16 ? 16 : 32;
    const std::uint16_t block = static_cast<std::uint16_t>(buf.channels * bits / 8);
    const std::uint32_t data_size = static_cast<std::uint32_t>(buf.samples.size() * (bits / 8));

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    put_tag(out, "RIFF");
    put32(out, 36 + data_size);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, format == SampleFormat::pcm16 ? kFormatPcm : kFormatFloat);
    put16(out, static_cast<std::uint16_t>(buf.channels));
    put32(out, static_cast<std::uint32_t>(buf.sample_rate));
    put32(out, static_cast<std::uint32_t>(buf.sample_rate) * block);
    put16(out, block);
    put16(out, bits);
    put_tag(out, "data");
    put32(out, data_size);
    if (format == SampleFormat::pcm16) {
        for (float s : buf.samples) {
            float c = std::clamp(s, -1.0f, 1.0f);
            long q = std::lround(c * 32768.0f);
            q = std::clamp(q, -32768L, 32767L);
            put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        }
    } else {
        for (float s : buf.samples) put32(out, std::bit_cast<std::uint32_t>(s));
    }
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

AudioBuffer read_wav(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    try {
        return decode_wav(bytes);
    } catch (const WavError& e) {
        throw WavError(path.string() + ": " + e.what());
    }
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf, SampleFormat format) {
    auto bytes = encode_wav(buf, format);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::ios_base::failure("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace corpusforge::audio
