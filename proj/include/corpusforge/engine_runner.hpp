// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "corpusforge/synthesis.hpp"

namespace corpusforge::synthesis {

struct RunOptions {
    std::filesystem::path output_root;  // job.output_path is relative to this
    std::filesystem::path log_dir;      // per-job engine logs and reference lists
    // Maps a reference clip id to its audio file and transcript text.
    std::function<std::filesystem::path(const std::string&)> clip_audio;
    std::function<std::string(const std::string&)> clip_text;
    int parallelism = 1;
};

struct RunOutcome {
    std::string job_id;
    bool reused = false;   // output already present, engine not invoked
    int exit_code = 0;
    bool output_present = false;
};

// Runs each job's engine command, at most `parallelism` at a time. Each job
// writes only its own output path; a failed job leaves no output behind.
// Outcomes are returned in job order.
std::vector<RunOutcome> run_jobs(std::span<const SynthesisJob> jobs,
                                 std::span<const EngineSpec> engines, const RunOptions& opt);

}  // namespace corpusforge::synthesis
