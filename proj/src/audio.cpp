// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corpusforge::audio {

namespace {

std::size_t to_frames(double seconds, int rate) {
    return static_cast<std::size_t>(std::llround(seconds * rate));
}

void require_mono(const AudioBuffer& buf, const char* op) {
    if (buf.channels != 1) throw std::invalid_argument(std::string(op) + ": buffer must be mono");
}

}  // namespace

AudioBuffer downmix(const AudioBuffer& buf) {
    if (buf.channels == 1) return buf;
    if (buf.channels <= 0) throw std::invalid_argument("downmix: invalid channel count");
    AudioBuffer out;
    out.sample_rate = buf.sample_rate;
    out.channels = 1;
    const std::size_t n = buf.frames();
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        for (int c = 0; c < buf.channels; ++c) sum += buf.samples[i * buf.channels + c];
        out.samples[i] = static_cast<float>(sum / buf.channels);
    }
    return out;
}

AudioBuffer normalize(const AudioBuffer& buf) { return resample(downmix(buf), kTargetRate); }

AudioBuffer trim_from(const AudioBuffer& buf, double start_time) {
    if (!(start_time >= 0) || start_time > buf.duration_seconds())
        throw std::invalid_argument("trim_from: start_time outside [0, duration]");
    const std::size_t first = std::min(to_frames(start_time, buf.sample_rate), buf.frames());
    AudioBuffer out;
    out.sample_rate = buf.sample_rate;
    out.channels = buf.channels;
    out.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(first * buf.channels),
                       buf.samples.end());
    return out;
}

AudioBuffer pad_silence(const AudioBuffer& buf, double tail) {
    if (!(tail >= 0)) throw std::invalid_argument("pad_silence: tail must be >= 0");
    AudioBuffer out = buf;
    out.samples.resize(buf.samples.size() + to_frames(tail, buf.sample_rate) * buf.channels, 0.0f);
    return out;
}

AudioBuffer slice(const AudioBuffer& buf, double start, double end) {
    if (!(start >= 0) || !(end >= start))
        throw std::invalid_argument("slice: need 0 <= start <= end");
    const std::size_t first = to_frames(start, buf.sample_rate);
    const std::size_t last = to_frames(end, buf.sample_rate);
    if (last > buf.frames()) throw std::invalid_argument("slice: end beyond buffer");
    AudioBuffer out;
    out.sample_rate = buf.sample_rate;
    out.channels = buf.channels;
    out.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(first * buf.channels),
                       buf.samples.begin() + static_cast<std::ptrdiff_t>(last * buf.channels));
    return out;
}

FrameEnergies frame_energies(const AudioBuffer& buf, double frame_length, double hop) {
    require_mono(buf, "frame_energies");
    if (!(frame_length > 0) || !(hop > 0))
        throw std::invalid_argument("frame_energies: frame_length and hop must be > 0");
    const std::size_t flen = to_frames(frame_length, buf.sample_rate);
    const std::size_t step = to_frames(hop, buf.sample_rate);
    if (flen == 0 || step == 0)
        throw std::invalid_argument("frame_energies: frame shorter than one sample");
    const std::size_t n = buf.samples.size();
    if (n < flen) throw std::invalid_argument("frame_energies: buffer shorter than one frame");

    FrameEnergies fe;
    fe.frame_length = frame_length;
    fe.hop = hop;
    const std::size_t count = (n - flen) / step + 1;
    fe.energies.resize(count);
    for (std::size_t f = 0; f < count; ++f) {
        double acc = 0;
        const float* p = buf.samples.data() + f * step;
        for (std::size_t i = 0; i < flen; ++i) acc += static_cast<double>(p[i]) * p[i];
        fe.energies[f] = acc / static_cast<double>(flen);
    }
    return fe;
}

}  // namespace corpusforge::audio
