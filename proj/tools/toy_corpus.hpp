// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace corpusforge::toy {

// A small synthetic corpus: each utterance holds `sentences` sentences of
// `words_per_sentence` tone-burst "words" (0.3 s voiced, 0.2 s gap), then a
// few words from an interviewer and a short unpunctuated tail. With the
// default segmentation every sentence becomes exactly one clip.
struct ToyOptions {
    int speakers = 10;
    int utterances_per_speaker = 5;
    int sentences = 3;
    int words_per_sentence = 14;
    int engines = 10;
    int source_rate = 44100;
    int channels = 2;
    double lead_seconds = 2.0;  // material before start_time
    std::uint64_t seed = 7;
    bool bad_rows = true;       // append rows the source rules reject
    std::filesystem::path stub_engine;  // executable used for every engine
};

struct ToyCorpus {
    std::filesystem::path config;
    std::size_t expected_bonafide = 0;  // one clip per sentence
    std::size_t engines = 0;
};

// Writes sources, transcripts, diarization and config.json under `dir`.
// The config's work_dir is `dir`/work.
ToyCorpus write_toy_corpus(const std::filesystem::path& dir, const ToyOptions& opt);

}  // namespace corpusforge::toy
