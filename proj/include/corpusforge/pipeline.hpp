// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpusforge/config.hpp"

namespace corpusforge::pipeline {

// Fatal stage error, e.g. a missing upstream artifact.
class StageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Stage { acquire, diarize_filter, segment, gate, jobs, assemble, stats, verify, serve };

std::optional<Stage> parse_stage(std::string_view s);
std::string to_string(Stage s);

// Batch stages in run order; `serve` is not among them.
inline constexpr Stage kBatchStages[] = {Stage::acquire, Stage::diarize_filter, Stage::segment,
                                         Stage::gate,    Stage::jobs,           Stage::assemble,
                                         Stage::stats};

struct Issue {
    std::string item;  // utterance, clip or job id
    std::string reason;
};

// Written to <work>/reports/<stage>.json. Wall-clock timings go to a sibling
// <stage>.timings.json so the report itself is reproducible byte for byte.
struct StageReport {
    Stage stage = Stage::acquire;
    std::size_t new_outputs = 0;
    std::size_t reused = 0;
    std::vector<Issue> failures;  // processing errors; the run went on
    std::vector<Issue> rejects;   // inputs filtered out by a rule
    std::map<std::string, std::size_t> counts;
    std::map<std::string, std::size_t> per_item;  // e.g. segments per utterance
    double seconds = 0;

    bool ok() const;  // false only for verify with problems
    std::string to_json() const;
};

// Paths inside the work directory.
struct Layout {
    std::filesystem::path root;

    std::filesystem::path stage_dir(Stage s) const { return root / to_string(s); }
    std::filesystem::path state(Stage s) const { return root / "state" / (to_string(s) + ".json"); }
    std::filesystem::path report(Stage s) const { return root / "reports" / (to_string(s) + ".json"); }
    std::filesystem::path timings(Stage s) const {
        return root / "reports" / (to_string(s) + ".timings.json");
    }
    std::filesystem::path segments_manifest() const { return root / "manifests" / "segments.csv"; }
    std::filesystem::path bonafide_manifest() const { return root / "manifests" / "bonafide.csv"; }
    std::filesystem::path quality_table() const { return root / "reports" / "quality.csv"; }
    std::filesystem::path jobs_file() const { return root / "jobs" / "jobs.json"; }
    std::filesystem::path dataset_dir() const { return root / "dataset"; }
    std::filesystem::path dataset_manifest() const { return dataset_dir() / "manifest.csv"; }
};

// Runs one stage and writes its report. Stages skip work whose
// content-addressed output already exists, so reruns are cheap no-ops.
// `serve` blocks until the process is interrupted.
StageReport run_stage(Stage stage, const PipelineConfig& cfg);

// acquire through stats, in order.
std::vector<StageReport> run_all(const PipelineConfig& cfg);

}  // namespace corpusforge::pipeline
