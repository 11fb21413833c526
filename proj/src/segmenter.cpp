// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "corpusforge/util.hpp"

namespace corpusforge::segmenter {

using transcript::Transcript;
using transcript::Word;

void SegmentationParams::validate() const {
    if (!(threshold > 0) || !(threshold < target_duration))
        throw std::invalid_argument("segmentation: need 0 < T < D");
    if (!(pad >= 0)) throw std::invalid_argument("segmentation: pad must be >= 0");
    if (!(pause_threshold > 0))
        throw std::invalid_argument("segmentation: pause_threshold must be > 0");
    if (!(fixed_interval > 0))
        throw std::invalid_argument("segmentation: fixed_interval must be > 0");
}

double SegmentationParams::search_ceiling() const {
    return std::min(target_duration + 1.0, hard_limit());
}

bool ends_with_punctuation(const Word& w, const SegmentationParams& p) {
    auto cp = last_code_point(w.text);
    return cp && p.punctuation.find(*cp) != std::u32string::npos;
}

namespace {

Segment make_segment(const std::vector<Word>& words, std::size_t first, std::size_t last,
                     bool ends_at_punctuation, bool padded) {
    Segment s;
    s.first_word = first;
    s.words.assign(words.begin() + static_cast<std::ptrdiff_t>(first),
                   words.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    s.start = s.words.front().start;
    s.end = s.words.back().end;
    for (const auto& w : s.words) {
        if (!s.text.empty()) s.text.push_back(' ');
        s.text += w.text;
    }
    s.ends_at_punctuation = ends_at_punctuation;
    s.padded = padded;
    return s;
}

}  // namespace

std::vector<Segment> segment_by_transcript(const Transcript& t, const SegmentationParams& p) {
    p.validate();
    const auto& w = t.words;
    const std::size_t n = w.size();
    const double floor = p.search_floor();
    const double ceiling = p.search_ceiling();
    const double limit = p.hard_limit();
    const double shortest = p.min_duration();

    std::vector<Segment> out;
    std::size_t s = 0;
    while (s < n) {
        auto dur = [&](std::size_t j) { return w[j].end - w[s].start; };

        std::size_t reach = s;
        while (reach < n && dur(reach) < floor) ++reach;
        if (reach == n) {
            // Words ran out before the segment reached D - T.
            if (dur(n - 1) >= shortest) {
                const bool punct = ends_with_punctuation(w[n - 1], p);
                out.push_back(make_segment(w, s, n - 1, punct, !punct));
            }
            break;
        }

        std::optional<std::size_t> cut;
        for (std::size_t j = reach; j < n && dur(j) <= ceiling; ++j) {
            if (dur(j) >= floor && ends_with_punctuation(w[j], p)) {
                cut = j;
                break;
            }
        }
        if (cut) {
            out.push_back(make_segment(w, s, *cut, true, false));
            s = *cut + 1;
            continue;
        }

        if (dur(s) > limit) {
            // A single word longer than D + T cannot form a segment.
            ++s;
            continue;
        }
        std::size_t e = s;
        while (e + 1 < n && dur(e + 1) <= limit) ++e;
        // A long pause right after the floor can leave the run short.
        if (dur(e) >= shortest) out.push_back(make_segment(w, s, e, false, true));
        s = e + 1;
    }

    const double cap = t.utterance_duration / p.target_duration - 10.0;
    if (cap > 0) {
        while (static_cast<double>(out.size()) > cap) {
            auto victim = std::find_if(out.rbegin(), out.rend(),
                                       [](const Segment& seg) { return !seg.ends_at_punctuation; });
            if (victim == out.rend()) break;
            out.erase(std::next(victim).base());
        }
    }
    return out;
}

std::vector<Segment> segment_by_pause(const Transcript& t, const SegmentationParams& p) {
    p.validate();
    const auto& w = t.words;
    std::vector<Segment> out;
    std::size_t first = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool boundary = i + 1 == w.size() || w[i + 1].start - w[i].end > p.pause_threshold;
        if (boundary) {
            out.push_back(make_segment(w, first, i, ends_with_punctuation(w[i], p), false));
            first = i + 1;
        }
    }
    return out;
}

std::vector<Segment> segment_fixed(const Transcript& t, const SegmentationParams& p) {
    p.validate();
    const auto& w = t.words;
    std::vector<Segment> out;
    std::size_t first = 0;
    while (first < w.size()) {
        const auto window = static_cast<long long>(std::floor(w[first].start / p.fixed_interval));
        std::size_t last = first;
        while (last + 1 < w.size() &&
               static_cast<long long>(std::floor(w[last + 1].start / p.fixed_interval)) == window)
            ++last;
        out.push_back(make_segment(w, first, last, ends_with_punctuation(w[last], p), false));
        first = last + 1;
    }
    return out;
}

audio::AudioBuffer extract_segment_audio(const audio::AudioBuffer& buf, const Segment& s,
                                         const SegmentationParams& p) {
    const double half_sample = 0.5 / buf.sample_rate;
    if (s.start < 0 || s.end < s.start || s.end > buf.duration_seconds() + half_sample)
        throw std::invalid_argument("extract_segment_audio: segment outside buffer");
    auto clip = audio::slice(buf, s.start, s.end);
    return s.padded ? audio::pad_silence(clip, p.pad) : clip;
}

}  // namespace corpusforge::segmenter
