// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "corpusforge/evaluation.hpp"

namespace {

using namespace corpusforge;
using namespace corpusforge::evaluation;
using manifest::DatasetEntry;
using manifest::Label;
using json = nlohmann::json;

DatasetEntry entry(const std::string& id, const std::string& spk, Label l, double dur) {
    DatasetEntry e{id, spk, l, {}, "text.", dur, id + ".wav", {}, {}};
    if (l == Label::synthetic) e.method = "tts";
    return e;
}

TEST(Stats, CountsPerSpeaker) {
    std::vector<DatasetEntry> ds = {entry("a", "s1", Label::bonafide, 1800),
                                    entry("b", "s1", Label::synthetic, 900),
                                    entry("c", "s2", Label::bonafide, 900)};
    const auto s = compute_stats(ds);
    EXPECT_EQ(s.speaker_count, 2u);
    EXPECT_EQ(s.bonafide_count, 2u);
    EXPECT_EQ(s.synthetic_count, 1u);
    EXPECT_DOUBLE_EQ(s.total_duration_hours, 1.0);
    EXPECT_EQ(s.per_speaker.at("s1").synthetic_count, 1u);
    const auto doc = json::parse(to_json(s));
    EXPECT_EQ(doc["per_speaker"]["s2"]["bonafide"], 1);
}

TEST(Naturalness, MeansAndRowRejects) {
    std::vector<DatasetRef> sets = {{"real", {entry("a", "s", Label::bonafide, 1)}},
                                    {"fake", {entry("b", "s", Label::synthetic, 1),
                                              entry("c", "s", Label::synthetic, 1)}}};
    std::istringstream in("clip_id,score\na,4.5\nb,3\nc,4\nzzz,3\nc,6\nb,abc\n");
    const auto r = ingest_naturalness(in, sets);
    EXPECT_DOUBLE_EQ(r.mean.at("real"), 4.5);
    EXPECT_DOUBLE_EQ(r.mean.at("fake"), 3.5);
    EXPECT_EQ(r.count.at("fake"), 2u);
    ASSERT_EQ(r.rejects.size(), 3u);
    EXPECT_EQ(r.rejects[0].row, 5u);
    EXPECT_EQ(r.rejects[1].reason, "score out of range [1, 5]");

    std::istringstream bad("clip,score\n");
    EXPECT_THROW(ingest_naturalness(bad, sets), ConfigError);

    std::istringstream rounding("clip_id,score\nb,3.333\nc,3.334\n");
    EXPECT_EQ(json::parse(to_json(ingest_naturalness(rounding, sets)))["naturalness"]["fake"]["mean"], 3.33);
}

// Sessions with `fake_n` fake trials of which `fake_missed` were judged real.
std::vector<TrialSession> fixture(const std::string& dataset, int fake_n, int fake_missed, int real_n,
                                  int real_missed) {
    std::vector<TrialSession> out;
    for (int i = 0; i < std::max(fake_n, real_n); ++i) {
        TrialSession s{"s" + std::to_string(i), "p" + std::to_string(i % 7), {}};
        if (i < fake_n)
            s.trials.push_back({"f", dataset, "x", Truth::fake, i < fake_missed ? Truth::real : Truth::fake, {}});
        if (i < real_n)
            s.trials.push_back({"r", dataset, "y", Truth::real, i < real_missed ? Truth::fake : Truth::real, {}});
        out.push_back(std::move(s));
    }
    return out;
}

TEST(MissRate, HandComputedFixtures) {
    const auto r = compute_miss_rates(fixture("D", 34, 21, 10, 3));
    const auto& d = r.per_dataset.at("D");
    EXPECT_EQ(d.fake_answered, 34u);
    EXPECT_EQ(d.fake_missed, 21u);
    const auto doc = json::parse(to_json(r));
    EXPECT_EQ(doc["datasets"]["D"]["fake_miss_rate"].get<double>(), 61.8);
    EXPECT_EQ(doc["datasets"]["D"]["real_miss_rate"].get<double>(), 30.0);
    EXPECT_EQ(doc["n_participants"], 7);

    const auto third = json::parse(to_json(compute_miss_rates(fixture("D", 3, 1, 0, 0))));
    EXPECT_EQ(third["datasets"]["D"]["fake_miss_rate"].get<double>(), 33.3);
    EXPECT_TRUE(third["datasets"]["D"]["real_miss_rate"].is_null());
}

TEST(MissRate, UnansweredTrialsNeverChangeRates) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto sessions = fixture("D", 1 + static_cast<int>(rng() % 40), 0, static_cast<int>(rng() % 20), 0);
        for (auto& s : sessions)
            for (auto& t : s.trials) t.response = (rng() % 2) ? Truth::real : Truth::fake;
        const std::string before = to_json(compute_miss_rates(sessions));
        for (auto& s : sessions)
            for (int k = static_cast<int>(rng() % 4); k > 0; --k)
                s.trials.push_back({"u", "D", "z", (rng() % 2) ? Truth::real : Truth::fake, {}, {}});
        EXPECT_EQ(to_json(compute_miss_rates(sessions)), before);
    }
}

TEST(MissRate, NoAnswersMeansAbsentNotZero) {
    std::vector<TrialSession> s = {{"s", "p", {{"t", "D", "c", Truth::fake, {}, {}}}}};
    const auto r = compute_miss_rates(s);
    EXPECT_FALSE(r.per_dataset.at("D").fake_miss_rate);
}

TEST(Sessions, TwoTrialsPerDatasetShuffled) {
    std::vector<DatasetRef> sets;
    for (int d = 0; d < 7; ++d) {
        DatasetRef ref{"d" + std::to_string(d), {}};
        for (int i = 0; i < 5; ++i) {
            ref.entries.push_back(entry("b" + std::to_string(i), "s", Label::bonafide, 1));
            auto f = entry("f" + std::to_string(i), "s", Label::synthetic, 1);
            f.source_clip_id = "b" + std::to_string(i);
            ref.entries.push_back(f);
        }
        sets.push_back(ref);
    }
    std::mt19937_64 rng(1);
    const auto s = new_session("p", sets, rng);
    ASSERT_EQ(s.trials.size(), 14u);
    std::map<std::string, std::pair<int, int>> per;
    for (const auto& t : s.trials) (t.truth == Truth::real ? per[t.dataset_id].first : per[t.dataset_id].second)++;
    for (const auto& [d, c] : per) EXPECT_EQ(c, std::make_pair(1, 1)) << d;
    EXPECT_EQ(s.trials[0].trial_id, s.session_id + "-1");

    std::mt19937_64 again(1);
    EXPECT_EQ(new_session("p", sets, again), s);

    auto copy = s;
    EXPECT_EQ(record_response(copy, copy.trials[0].trial_id, Truth::real, "t").response, Truth::real);
    EXPECT_THROW(record_response(copy, copy.trials[0].trial_id, Truth::fake, "t"), Conflict);
    EXPECT_THROW(record_response(copy, "nope", Truth::fake, "t"), NotFound);

    sets[0].entries.erase(sets[0].entries.begin());
    std::erase_if(sets[0].entries, [](const auto& e) { return e.label == Label::synthetic; });
    EXPECT_THROW(new_session("p", sets, rng), ConfigError);
}

}  // namespace
