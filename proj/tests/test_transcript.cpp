// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "corpusforge/transcript.hpp"
#include "oracles.hpp"

namespace {

using namespace corpusforge::transcript;

std::string error_of(const std::string& doc) {
    try {
        parse_transcript(doc);
    } catch (const TranscriptError& e) {
        return e.what();
    }
    return "";
}

TEST(Transcript, ParsesAndRoundTrips) {
    const auto t = parse_transcript(R"({"utterance_duration": 3.5, "words": [
        {"text": " Hello,", "start": 0.1, "end": 0.5},
        {"text": "world.", "start": 0.6, "end": 1.0, "speaker": "A"}]})");
    ASSERT_EQ(t.words.size(), 2u);
    EXPECT_EQ(t.words[0].text, "Hello,");
    EXPECT_EQ(t.words[1].speaker, "A");
    EXPECT_EQ(parse_transcript(to_json(t)), t);
}

TEST(Transcript, ErrorsNameTheField) {
    EXPECT_EQ(error_of(R"({"utterance_duration": 2, "words": [{"text": "a", "start": 1.0, "end": 0.5}]})"),
              "$.words[0].end: word 0 ends before it starts");
    EXPECT_EQ(error_of(R"({"words": []})").rfind("$.utterance_duration", 0), 0u);
    EXPECT_EQ(error_of(R"({"utterance_duration": 2, "words": [{"start": 0, "end": 1}]})")
                  .rfind("$.words[0].text", 0),
              0u);
    EXPECT_EQ(error_of(R"({"utterance_duration": 0.5, "words": [{"text": "a", "start": 0, "end": 1}]})"),
              "$.utterance_duration: shorter than the last word's end");
    EXPECT_EQ(error_of("not json").rfind("$: invalid JSON", 0), 0u);
}

TEST(Transcript, ToleratesJitterButNotOverlap) {
    EXPECT_NO_THROW(parse_transcript(R"({"utterance_duration": 2, "words": [
        {"text": "a", "start": 0, "end": 1.005}, {"text": "b", "start": 1.0, "end": 1.5}]})"));
    EXPECT_FALSE(error_of(R"({"utterance_duration": 2, "words": [
        {"text": "a", "start": 0, "end": 1.2}, {"text": "b", "start": 1.0, "end": 1.5}]})")
                     .empty());
    EXPECT_FALSE(error_of(R"({"utterance_duration": 2, "words": [
        {"text": "a", "start": 1.0, "end": 1.2}, {"text": "b", "start": 0.5, "end": 0.9}]})")
                     .empty());
}

TEST(Diarization, Parses) {
    const auto d = parse_diarization(
        R"({"target": "A", "intervals": [{"speaker": "A", "start": 0, "end": 2}]})");
    EXPECT_EQ(d.target, "A");
    ASSERT_EQ(d.intervals.size(), 1u);
    EXPECT_THROW(parse_diarization(R"({"intervals": [{"speaker": "A", "start": 2, "end": 1}]})"),
                 TranscriptError);
}

TEST(Filter, KeepsOnlyContainedTargetWords) {
    Transcript t;
    t.words = {{"a", 0.0, 0.4, {}}, {"b", 0.5, 0.9, {}}, {"c", 1.0, 1.6, {}}, {"d", 2.0, 2.4, {}}};
    t.utterance_duration = 3;
    std::vector<DiarizationInterval> iv = {{"A", 0.0, 1.0}, {"B", 1.0, 2.0}, {"A", 1.9, 3.0}};
    const auto r = filter_target_speaker(t, iv, "A");
    ASSERT_EQ(r.transcript.words.size(), 3u);
    EXPECT_EQ(r.transcript.words[0].text, "a");
    EXPECT_EQ(r.transcript.words[2].text, "d");
    EXPECT_DOUBLE_EQ(r.transcript.utterance_duration, 3);
    EXPECT_FALSE(r.warning);

    const auto none = filter_target_speaker(t, iv, "C");
    EXPECT_TRUE(none.transcript.words.empty());
    EXPECT_TRUE(none.warning);
}

TEST(Filter, MatchesBruteForceContainment) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = oracle::random_transcript(static_cast<std::uint64_t>(trial) + 1000, 80);
        std::vector<DiarizationInterval> iv;
        double now = 0;
        const double end = t.words.empty() ? 10 : t.words.back().end + 1;
        while (now < end) {
            const double len = 0.2 + u(rng) * 6;
            iv.push_back({u(rng) < 0.6 ? "A" : "B", now, now + len});
            now += len * (u(rng) < 0.2 ? 0.7 : 1.0);  // occasional overlap
        }
        std::shuffle(iv.begin(), iv.end(), rng);
        const auto got = filter_target_speaker(t, iv, "A").transcript;

        std::vector<Word> want;
        for (const auto& w : t.words)
            for (const auto& i : iv)
                if (i.speaker == "A" && i.start <= w.start && w.end <= i.end) {
                    want.push_back(w);
                    break;
                }
        EXPECT_EQ(got.words, want) << "trial " << trial;
    }
}

TEST(Transcript, PunctuationDensity) {
    auto t = oracle::uniform_transcript(4, 0.5, 2);
    EXPECT_DOUBLE_EQ(punctuation_density(t, U".!?,;"), 0.25);
    EXPECT_DOUBLE_EQ(punctuation_density(Transcript{}, U"."), 0.0);
}

}  // namespace
