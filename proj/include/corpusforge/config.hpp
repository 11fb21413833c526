// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpusforge/manifest.hpp"
#include "corpusforge/quality.hpp"
#include "corpusforge/segmenter.hpp"
#include "corpusforge/synthesis.hpp"

namespace corpusforge::pipeline {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Strategy { transcript, pause, fixed };

struct ServeDataset {
    std::string dataset_id;
    std::filesystem::path manifest;  // audio paths resolve against its directory
};

struct ServeConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::vector<ServeDataset> datasets;  // empty: the pipeline's own dataset
    std::optional<std::filesystem::path> log;
};

struct PipelineConfig {
    std::filesystem::path work_dir;
    std::filesystem::path sources;          // source manifest CSV
    std::filesystem::path transcripts_dir;  // <utterance_id>.json
    std::optional<std::filesystem::path> diarization_dir;
    std::string downloader;
    manifest::SourceRules rules;

    Strategy strategy = Strategy::transcript;
    segmenter::SegmentationParams segmentation;
    quality::QualityGateConfig gate;

    std::vector<synthesis::EngineSpec> engines;
    int parallelism = 1;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> naturalness_scores;
    ServeConfig serve;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Process environment.
std::optional<std::string> getenv_lookup(const std::string& name);

// Parses a JSON config. Relative paths resolve against the file's directory.
// CORPUSFORGE_WORK_DIR, CORPUSFORGE_SEED, CORPUSFORGE_PARALLELISM,
// CORPUSFORGE_DOWNLOADER and CORPUSFORGE_SERVE_PORT override the file.
// Throws ConfigError for malformed or inconsistent settings.
PipelineConfig load_config(const std::filesystem::path& path,
                           const EnvLookup& env = getenv_lookup);
PipelineConfig parse_config(std::string_view document, const std::filesystem::path& base_dir,
                            const EnvLookup& env = getenv_lookup);

// Checks that referenced inputs exist and numeric settings are in range.
void validate(const PipelineConfig& cfg);

}  // namespace corpusforge::pipeline
