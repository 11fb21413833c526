// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <tuple>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "corpusforge/csv.hpp"
#include "corpusforge/util.hpp"

namespace corpusforge::manifest {

using namespace std::chrono;

std::optional<ContentType> parse_content_type(std::string_view s) {
    s = trim(s);
    if (s == "speech") return ContentType::speech;
    if (s == "interview") return ContentType::interview;
    if (s == "statement") return ContentType::statement;
    if (s == "other") return ContentType::other;
    return std::nullopt;
}

std::string to_string(ContentType t) {
    switch (t) {
        case ContentType::speech: return "speech";
        case ContentType::interview: return "interview";
        case ContentType::statement: return "statement";
        case ContentType::other: return "other";
    }
    return "other";
}

std::optional<year_month_day> parse_date(std::string_view s) {
    s = trim(s);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
        if (ec != std::errc() || p != s.data() + pos + len) return std::nullopt;
        return v;
    };
    auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
    if (!y || !m || !d) return std::nullopt;
    year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)},
                       day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return ymd;
}

std::string to_string(year_month_day d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

namespace {

std::optional<bool> parse_flag(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
    return std::nullopt;
}

// Column name -> index, rejecting duplicates.
std::unordered_map<std::string, std::size_t> index_header(const csv::Record& header) {
    if (header.error) throw ManifestError("malformed header: " + *header.error);
    std::unordered_map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        std::string name(trim(header.fields[i]));
        if (name.empty()) throw ManifestError("malformed header: empty column name");
        if (!idx.emplace(name, i).second)
            throw ManifestError("malformed header: duplicate column '" + name + "'");
    }
    return idx;
}

void require_columns(const std::unordered_map<std::string, std::size_t>& idx,
                     std::span<const char* const> names) {
    for (const char* n : names)
        if (!idx.contains(n))
            throw ManifestError(std::string("malformed header: missing column '") + n + "'");
}

constexpr const char* kSourceColumns[] = {"speaker_id", "media_ref", "start_time",
                                          "content_type", "publication_date"};

}  // namespace

SourceManifest parse_source_manifest(std::istream& in, const SourceRules& rules) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ManifestError("malformed header: empty input");
    auto idx = index_header(*header);
    require_columns(idx, kSourceColumns);
    const std::size_t width = header->fields.size();

    SourceManifest out;
    while (auto rec = reader.next()) {
        auto reject = [&](std::string reason) {
            out.rejects.push_back({rec->line, std::move(reason)});
        };
        if (rec->error) {
            reject(*rec->error);
            continue;
        }
        if (rec->fields.size() != width) {
            reject("expected " + std::to_string(width) + " fields, got " +
                   std::to_string(rec->fields.size()));
            continue;
        }
        auto col = [&](const char* name) { return std::string(trim(rec->fields[idx.at(name)])); };

        SourceRecord r;
        r.row = rec->line;
        r.speaker_id = col("speaker_id");
        r.media_ref = col("media_ref");
        if (r.speaker_id.empty()) {
            reject("empty speaker_id");
            continue;
        }
        if (!rules.roster.empty() && !rules.roster.contains(r.speaker_id)) {
            reject("speaker not in roster");
            continue;
        }
        if (r.media_ref.empty()) {
            reject("empty media_ref");
            continue;
        }
        auto start = parse_double(col("start_time"));
        if (!start) {
            reject("invalid start_time");
            continue;
        }
        if (*start < 0) {
            reject("negative start_time");
            continue;
        }
        r.start_time = *start;
        auto type = parse_content_type(col("content_type"));
        if (!type) {
            reject("unknown content_type");
            continue;
        }
        r.content_type = *type;
        auto date = parse_date(col("publication_date"));
        if (!date) {
            reject("invalid publication_date");
            continue;
        }
        if (*date < rules.earliest || *date > rules.latest) {
            reject("date out of range");
            continue;
        }
        r.publication_date = *date;
        if (auto it = idx.find("min_resolution_ok"); it != idx.end()) {
            auto flag = parse_flag(rec->fields[it->second]);
            if (!flag) {
                reject("invalid min_resolution_ok");
                continue;
            }
            r.min_resolution_ok = *flag;
        }
        for (const auto& [name, i] : idx) {
            if (std::find(std::begin(kSourceColumns), std::end(kSourceColumns), name) !=
                    std::end(kSourceColumns) ||
                name == "min_resolution_ok")
                continue;
            r.extra.emplace(name, rec->fields[i]);
        }
        out.records.push_back(std::move(r));
    }
    return out;
}

std::optional<Label> parse_label(std::string_view s) {
    s = trim(s);
    if (s == "bonafide") return Label::bonafide;
    if (s == "synthetic") return Label::synthetic;
    return std::nullopt;
}

std::string to_string(Label l) { return l == Label::bonafide ? "bonafide" : "synthetic"; }

void validate_dataset(std::span<const DatasetEntry> entries) {
    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> bonafide;
    for (const auto& e : entries) {
        if (e.clip_id.empty()) throw ManifestError("entry with empty clip_id");
        if (!ids.insert(e.clip_id).second)
            throw ManifestError("duplicate clip_id '" + e.clip_id + "'");
        if (e.label == Label::bonafide) bonafide.insert(e.clip_id);
    }
    for (const auto& e : entries) {
        const std::string where = "clip '" + e.clip_id + "': ";
        if (e.speaker_id.empty()) throw ManifestError(where + "empty speaker_id");
        if (!(e.duration > 0)) throw ManifestError(where + "duration must be > 0");
        const bool synthetic = e.label == Label::synthetic;
        if (synthetic && (!e.method || e.method->empty()))
            throw ManifestError(where + "synthetic entry without method");
        if (!synthetic && e.method)
            throw ManifestError(where + "bonafide entry with method");
        if (synthetic) {
            if (!e.source_clip_id || !bonafide.contains(*e.source_clip_id))
                throw ManifestError(where + "source_clip_id does not name a bonafide entry");
        } else if (e.source_clip_id) {
            throw ManifestError(where + "bonafide entry with source_clip_id");
        }
    }
}

std::vector<DatasetEntry> sorted(std::vector<DatasetEntry> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::tie(a.speaker_id, a.clip_id) < std::tie(b.speaker_id, b.clip_id);
    });
    return entries;
}

std::size_t write_dataset_manifest(std::span<const DatasetEntry> entries, std::ostream& out) {
    validate_dataset(entries);
    std::set<std::string> extra_cols;
    for (const auto& e : entries)
        for (const auto& [k, v] : e.extra) extra_cols.insert(k);
    for (const char* c : kDatasetHeader)
        if (extra_cols.contains(c))
            throw ManifestError(std::string("extra column shadows '") + c + "'");

    std::vector<std::string> row(std::begin(kDatasetHeader), std::end(kDatasetHeader));
    row.insert(row.end(), extra_cols.begin(), extra_cols.end());
    csv::write_row(out, row);

    std::vector<const DatasetEntry*> order;
    for (const auto& e : entries) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        return std::tie(a->speaker_id, a->clip_id) < std::tie(b->speaker_id, b->clip_id);
    });
    for (const auto* e : order) {
        row = {e->clip_id,
               e->speaker_id,
               to_string(e->label),
               e->method.value_or(""),
               e->transcript_text,
               format_double(e->duration),
               e->file_path,
               e->source_clip_id.value_or("")};
        for (const auto& c : extra_cols) {
            auto it = e->extra.find(c);
            row.push_back(it == e->extra.end() ? std::string() : it->second);
        }
        csv::write_row(out, row);
    }
    return order.size();
}

std::size_t write_dataset_manifest(std::span<const DatasetEntry> entries,
                                   const std::filesystem::path& path) {
    validate_dataset(entries);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    std::size_t n = 0;
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot write " + tmp.string());
        n = write_dataset_manifest(entries, out);
        out.flush();
        if (!out) throw std::ios_base::failure("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
    return n;
}

std::vector<DatasetEntry> read_dataset_manifest(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ManifestError("malformed header: empty input");
    auto idx = index_header(*header);
    require_columns(idx, kDatasetHeader);
    const std::size_t width = header->fields.size();

    std::vector<DatasetEntry> out;
    while (auto rec = reader.next()) {
        const std::string where = "row " + std::to_string(rec->line) + ": ";
        if (rec->error) throw ManifestError(where + *rec->error);
        if (rec->fields.size() != width)
            throw ManifestError(where + "expected " + std::to_string(width) + " fields");
        auto col = [&](const char* name) -> const std::string& {
            return rec->fields[idx.at(name)];
        };
        DatasetEntry e;
        e.clip_id = col("clip_id");
        e.speaker_id = col("speaker_id");
        auto label = parse_label(col("label"));
        if (!label) throw ManifestError(where + "unknown label '" + col("label") + "'");
        e.label = *label;
        if (!col("method").empty()) e.method = col("method");
        e.transcript_text = col("transcript_text");
        auto dur = parse_double(col("duration"));
        if (!dur) throw ManifestError(where + "invalid duration");
        e.duration = *dur;
        e.file_path = col("file_path");
        if (!col("source_clip_id").empty()) e.source_clip_id = col("source_clip_id");
        for (const auto& [name, i] : idx) {
            if (std::find(std::begin(kDatasetHeader), std::end(kDatasetHeader), name) !=
                std::end(kDatasetHeader))
                continue;
            if (!rec->fields[i].empty()) e.extra.emplace(name, rec->fields[i]);
        }
        out.push_back(std::move(e));
    }
    validate_dataset(out);
    return out;
}

std::vector<DatasetEntry> read_dataset_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read " + path.string());
    return read_dataset_manifest(in);
}

}  // namespace corpusforge::manifest
