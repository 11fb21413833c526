// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corpusforge::transcript {

class TranscriptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ASR timestamps jitter; consecutive words may overlap by this much.
inline constexpr double kJitterTolerance = 0.010;

// Punctuation stays attached to the token, e.g. "sentence.".
struct Word {
    std::string text;
    double start = 0;
    double end = 0;
    std::optional<std::string> speaker;

    bool operator==(const Word&) const = default;
};

struct Transcript {
    std::vector<Word> words;
    double utterance_duration = 0;

    bool operator==(const Transcript&) const = default;
};

struct DiarizationInterval {
    std::string speaker;
    double start = 0;
    double end = 0;
};

struct Diarization {
    std::vector<DiarizationInterval> intervals;
    std::optional<std::string> target;  // label of the target speaker, if the provider knows it
};

// Interchange document:
//   {"utterance_duration": U, "words": [{"text", "start", "end", "speaker"?}, ...]}
// Throws TranscriptError whose message starts with the offending field path.
Transcript parse_transcript(std::string_view document);
std::string to_json(const Transcript& t);

//   {"intervals": [{"speaker", "start", "end"}, ...], "target"?: label}
Diarization parse_diarization(std::string_view document);
std::string to_json(const Diarization& d);

struct FilterResult {
    Transcript transcript;
    std::optional<std::string> warning;
};

// Keeps words whose [start, end] lies inside a single interval labelled
// `target`. Word order and utterance_duration are preserved.
FilterResult filter_target_speaker(const Transcript& t,
                                   std::span<const DiarizationInterval> intervals,
                                   const std::string& target);

// Fraction of words whose final character is in `punctuation`; 0 for an
// empty transcript.
double punctuation_density(const Transcript& t, std::u32string_view punctuation);

}  // namespace corpusforge::transcript
