// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpusforge/manifest.hpp"

namespace corpusforge::evaluation {

struct SpeakerStats {
    std::size_t bonafide_count = 0;
    std::size_t synthetic_count = 0;
    double duration_seconds = 0;

    bool operator==(const SpeakerStats&) const = default;
};

struct DatasetStats {
    std::size_t speaker_count = 0;
    std::size_t bonafide_count = 0;
    std::size_t synthetic_count = 0;
    double total_duration_hours = 0;
    std::map<std::string, SpeakerStats> per_speaker;

    bool operator==(const DatasetStats&) const = default;
};

DatasetStats compute_stats(std::span<const manifest::DatasetEntry> entries);
std::string to_json(const DatasetStats& s);

struct DatasetRef {
    std::string dataset_id;
    std::vector<manifest::DatasetEntry> entries;
};

struct NaturalnessReport {
    std::map<std::string, double> mean;        // per dataset
    std::map<std::string, std::size_t> count;
    std::vector<manifest::Reject> rejects;     // row numbers, header on line 1
};

// Reads `clip_id,score` rows (optional `dataset_id` column). A clip resolves
// to the named dataset or, without that column, the first dataset holding it.
// Unresolvable clips and scores outside [1, 5] are rejected per row.
NaturalnessReport ingest_naturalness(std::istream& scores, std::span<const DatasetRef> datasets);
std::string to_json(const NaturalnessReport& r);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class Conflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Truth { real, fake };

std::string to_string(Truth t);
std::optional<Truth> parse_truth(std::string_view s);

struct Trial {
    std::string trial_id;
    std::string dataset_id;
    std::string clip_id;
    Truth truth = Truth::real;
    std::optional<Truth> response;
    std::optional<std::string> responded_at;  // ISO-8601 UTC

    bool operator==(const Trial&) const = default;
};

struct TrialSession {
    std::string session_id;
    std::string participant_id;
    std::vector<Trial> trials;

    bool complete() const;
    bool operator==(const TrialSession&) const = default;
};

// Two trials per dataset, one bonafide and one synthetic clip, each drawn
// uniformly from its cell; trial order is shuffled. Throws ConfigError when
// a dataset lacks either label.
TrialSession new_session(const std::string& participant_id, std::span<const DatasetRef> datasets,
                         std::mt19937_64& rng);

// Throws NotFound for an unknown trial, Conflict if it was already answered.
const Trial& record_response(TrialSession& session, const std::string& trial_id, Truth response,
                             const std::string& timestamp);

struct DatasetMissRate {
    std::size_t fake_answered = 0;
    std::size_t fake_missed = 0;   // fake judged real
    std::size_t real_answered = 0;
    std::size_t real_missed = 0;   // real judged fake
    std::optional<double> fake_miss_rate;  // percent, absent with no answers
    std::optional<double> real_miss_rate;
};

struct MissRateReport {
    std::map<std::string, DatasetMissRate> per_dataset;
    std::size_t n_participants = 0;
};

// Unanswered trials are ignored.
MissRateReport compute_miss_rates(std::span<const TrialSession> sessions);
// Rates rounded to one decimal.
std::string to_json(const MissRateReport& r);

}  // namespace corpusforge::evaluation
