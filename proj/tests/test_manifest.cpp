// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "corpusforge/csv.hpp"
#include "corpusforge/manifest.hpp"

namespace {

using namespace corpusforge;
using namespace corpusforge::manifest;

TEST(Csv, QuotedMultilineAndCrlf) {
    std::istringstream in("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"line\nbreak\"\r\n\"say \"\"hi\"\"\",\n");
    csv::Reader r(in);
    auto h = r.next();
    ASSERT_TRUE(h);
    EXPECT_EQ(h->fields, (std::vector<std::string>{"a", "b"}));
    auto rec = r.next();
    ASSERT_TRUE(rec);
    EXPECT_EQ(rec->fields, (std::vector<std::string>{"x,1", "line\nbreak"}));
    EXPECT_EQ(rec->line, 2u);
    rec = r.next();
    ASSERT_TRUE(rec);
    EXPECT_EQ(rec->fields, (std::vector<std::string>{"say \"hi\"", ""}));
    EXPECT_EQ(rec->line, 4u);
    EXPECT_FALSE(r.next());
}

TEST(Csv, MalformedRecordDoesNotStopReader) {
    std::istringstream in("a,b\n\"open,1\nc,d\n");
    csv::Reader r(in);
    r.next();
    auto bad = r.next();
    ASSERT_TRUE(bad);
    EXPECT_TRUE(bad->error);
}

TEST(Csv, EscapeRoundTrip) {
    std::vector<std::string> row = {"plain", "with,comma", "quote\"d", "multi\nline", ""};
    std::ostringstream out;
    csv::write_row(out, row);
    std::istringstream in(out.str());
    csv::Reader r(in);
    EXPECT_EQ(r.next()->fields, row);
}

const char* kHeader = "speaker_id,media_ref,start_time,content_type,publication_date\n";

TEST(SourceManifest, RejectsPerRowAndKeepsGoing) {
    std::istringstream in(std::string(kHeader) +
                          "alice,a.wav,1.5,speech,2020-01-01\n"
                          "alice,b.wav,0,interview,2017-12-31\n"
                          "bob,c.wav,-1,speech,2020-01-01\n"
                          "alice,d.wav,x,speech,2020-01-01\n"
                          "alice,e.wav,0,podcast,2020-01-01\n"
                          "carol,f.wav,0,speech,2020-01-01\n"
                          "alice,g.wav,0,speech,2020-02-30\n"
                          "alice,h.wav,0\n"
                          ",i.wav,0,speech,2020-01-01\n"
                          "alice,j.wav,0,statement,2024-12-31\n");
    SourceRules rules;
    rules.roster = {"alice", "bob"};
    const auto m = parse_source_manifest(in, rules);
    ASSERT_EQ(m.records.size(), 2u);
    EXPECT_EQ(m.records[0].media_ref, "a.wav");
    EXPECT_DOUBLE_EQ(m.records[0].start_time, 1.5);
    EXPECT_EQ(m.records[1].content_type, ContentType::statement);

    std::vector<std::pair<std::size_t, std::string>> rejects;
    for (const auto& r : m.rejects) rejects.emplace_back(r.row, r.reason);
    const std::vector<std::pair<std::size_t, std::string>> want = {
        {3, "date out of range"},         {4, "negative start_time"},
        {5, "invalid start_time"},        {6, "unknown content_type"},
        {7, "speaker not in roster"},     {8, "invalid publication_date"},
        {9, "expected 5 fields, got 3"},  {10, "empty speaker_id"}};
    EXPECT_EQ(rejects, want);
}

TEST(SourceManifest, MalformedHeaderIsFatal) {
    std::istringstream missing("speaker_id,media_ref\nx,y\n");
    EXPECT_THROW(parse_source_manifest(missing), ManifestError);
    std::istringstream empty("");
    EXPECT_THROW(parse_source_manifest(empty), ManifestError);
}

TEST(SourceManifest, KeepsExtraColumns) {
    std::istringstream in("speaker_id,media_ref,start_time,content_type,publication_date,utterance_id\n"
                          "alice,a.wav,0,speech,2020-01-01,alice_x\n");
    const auto m = parse_source_manifest(in);
    ASSERT_EQ(m.records.size(), 1u);
    EXPECT_EQ(m.records[0].extra.at("utterance_id"), "alice_x");
    EXPECT_FALSE(m.records[0].min_resolution_ok);
}

std::vector<DatasetEntry> sample_dataset() {
    DatasetEntry a{"a1", "alice", Label::bonafide, {}, "Hi, \"there\".", 6.5, "bonafide/alice/a1.wav", {}, {}};
    a.extra["snr_db"] = "31.5";
    DatasetEntry s{"a1__tts", "alice", Label::synthetic, "tts", "Hi, \"there\".", 6.2,
                   "synthetic/tts/alice/a1__tts.wav", "a1", {}};
    DatasetEntry b{"b1", "bob", Label::bonafide, {}, "Multi\nline", 7.25, "bonafide/bob/b1.wav", {}, {}};
    return {b, s, a};
}

TEST(DatasetManifest, RoundTripsSorted) {
    const auto entries = sample_dataset();
    std::ostringstream out;
    EXPECT_EQ(write_dataset_manifest(entries, out), 3u);
    std::istringstream in(out.str());
    const auto back = read_dataset_manifest(in);
    EXPECT_EQ(back, sorted(entries));
    EXPECT_EQ(back[0].clip_id, "a1");
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "clip_id,speaker_id,label,method,transcript_text,duration,file_path,source_clip_id,snr_db");
}

TEST(DatasetManifest, ValidationCatchesBrokenLinks) {
    auto e = sample_dataset();
    e[1].source_clip_id = "nope";
    EXPECT_THROW(validate_dataset(e), ManifestError);
    e = sample_dataset();
    e[1].method.reset();
    EXPECT_THROW(validate_dataset(e), ManifestError);
    e = sample_dataset();
    e.push_back(e[0]);
    EXPECT_THROW(validate_dataset(e), ManifestError);
    e = sample_dataset();
    e[0].duration = 0;
    EXPECT_THROW(validate_dataset(e), ManifestError);
}

}  // namespace
