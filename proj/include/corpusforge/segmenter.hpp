// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "corpusforge/audio.hpp"
#include "corpusforge/transcript.hpp"

namespace corpusforge::segmenter {

struct SegmentationParams {
    double target_duration = 8.0;     // D
    double threshold = 2.0;           // T
    std::u32string punctuation = U".!?,;";
    double pad = 0.25;                // silence appended to padded segments
    double pause_threshold = 0.5;     // gap that splits pause-based segments
    double fixed_interval = 6.0;      // window length for fixed segmentation

    // Throws std::invalid_argument unless 0 < T < D, pad >= 0, and the
    // pause/fixed lengths are positive.
    void validate() const;

    // Punctuation search starts once a segment reaches this duration (D - T).
    double search_floor() const { return target_duration - threshold; }
    // Punctuation is accepted up to D + 1, never past the hard limit.
    double search_ceiling() const;
    // Unpunctuated segments extend up to D + T.
    double hard_limit() const { return target_duration + threshold; }
    // Trailing words shorter than D - 2T are dropped.
    double min_duration() const { return target_duration - 2 * threshold; }
};

struct Segment {
    std::size_t first_word = 0;  // index into the source transcript
    std::vector<transcript::Word> words;
    double start = 0;
    double end = 0;
    std::string text;
    bool ends_at_punctuation = false;
    bool padded = false;

    double duration() const { return end - start; }
};

bool ends_with_punctuation(const transcript::Word& w, const SegmentationParams& p);

// Sentence-bounded segmentation driven by word timestamps and punctuation.
std::vector<Segment> segment_by_transcript(const transcript::Transcript& t,
                                           const SegmentationParams& p);

// Splits wherever the gap between consecutive words exceeds pause_threshold.
std::vector<Segment> segment_by_pause(const transcript::Transcript& t,
                                      const SegmentationParams& p);

// Groups words into [k*n, (k+1)*n) windows by start time; empty windows are
// omitted.
std::vector<Segment> segment_fixed(const transcript::Transcript& t, const SegmentationParams& p);

// Audio for [s.start, s.end], plus p.pad seconds of silence when s.padded.
audio::AudioBuffer extract_segment_audio(const audio::AudioBuffer& buf, const Segment& s,
                                         const SegmentationParams& p);

}  // namespace corpusforge::segmenter
