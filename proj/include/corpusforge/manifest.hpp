// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corpusforge::manifest {

class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ContentType { speech, interview, statement, other };

std::optional<ContentType> parse_content_type(std::string_view s);
std::string to_string(ContentType t);

std::optional<std::chrono::year_month_day> parse_date(std::string_view s);
std::string to_string(std::chrono::year_month_day d);

// One row of the curated source manifest.
struct SourceRecord {
    std::string speaker_id;
    std::string media_ref;          // URL or local file path
    double start_time = 0;          // seconds where the target speaker begins
    ContentType content_type = ContentType::other;
    std::chrono::year_month_day publication_date{};
    bool min_resolution_ok = false; // curator-recorded, never verified here
    std::size_t row = 0;            // physical line number, header is line 1
    std::map<std::string, std::string> extra;  // columns outside the fixed header
};

struct SourceRules {
    std::set<std::string> roster;  // empty accepts any non-empty speaker_id
    std::chrono::year_month_day earliest{std::chrono::year{2018}, std::chrono::month{1},
                                         std::chrono::day{1}};
    std::chrono::year_month_day latest{std::chrono::year{2024}, std::chrono::month{12},
                                       std::chrono::day{31}};
};

struct Reject {
    std::size_t row = 0;
    std::string reason;
};

struct SourceManifest {
    std::vector<SourceRecord> records;
    std::vector<Reject> rejects;
};

// Required columns: speaker_id,media_ref,start_time,content_type,publication_date.
// `min_resolution_ok` is optional; any other column lands in `extra`.
// Throws ManifestError on a malformed header; bad rows go to `rejects`.
SourceManifest parse_source_manifest(std::istream& in, const SourceRules& rules = {});

enum class Label { bonafide, synthetic };

std::optional<Label> parse_label(std::string_view s);
std::string to_string(Label l);

struct DatasetEntry {
    std::string clip_id;
    std::string speaker_id;
    Label label = Label::bonafide;
    std::optional<std::string> method;  // engine id, present iff synthetic
    std::string transcript_text;
    double duration = 0;
    std::string file_path;
    std::optional<std::string> source_clip_id;
    // Extra columns, preserved on round-trip. Empty values are not stored.
    std::map<std::string, std::string> extra;

    bool operator==(const DatasetEntry&) const = default;
};

inline constexpr const char* kDatasetHeader[] = {
    "clip_id",         "speaker_id", "label",     "method",
    "transcript_text", "duration",   "file_path", "source_clip_id"};

// Throws ManifestError naming the first violated invariant.
void validate_dataset(std::span<const DatasetEntry> entries);

// Ordered by (speaker_id, clip_id).
std::vector<DatasetEntry> sorted(std::vector<DatasetEntry> entries);

std::size_t write_dataset_manifest(std::span<const DatasetEntry> entries, std::ostream& out);
std::size_t write_dataset_manifest(std::span<const DatasetEntry> entries,
                                   const std::filesystem::path& path);

std::vector<DatasetEntry> read_dataset_manifest(std::istream& in);
std::vector<DatasetEntry> read_dataset_manifest(const std::filesystem::path& path);

}  // namespace corpusforge::manifest
