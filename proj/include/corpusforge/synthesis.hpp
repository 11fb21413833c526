// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpusforge/audio.hpp"
#include "corpusforge/manifest.hpp"

namespace corpusforge::synthesis {

class SynthesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Regime { speaker_specific, few_shot, zero_shot };

std::optional<Regime> parse_regime(std::string_view s);
std::string to_string(Regime r);

inline constexpr double kSpeakerSpecificMinSeconds = 24 * 3600.0;
inline constexpr double kFewShotMinSeconds = 1 * 3600.0;
inline constexpr double kFewShotMaxSeconds = 3 * 3600.0;
inline constexpr double kZeroShotMinReference = 6.0;
inline constexpr double kZeroShotMaxReference = 10.0;
inline constexpr double kWordsPerMinute = 150.0;

// External TTS engine. The command template is expanded per job with
// shell-quoted values for {text}, {output_path}, {reference_audio},
// {reference_text}, {reference_list}, {job_id} and {speaker_id}.
struct EngineSpec {
    std::string engine_id;
    Regime regime = Regime::zero_shot;
    std::string command_template;
};

// Throws SynthesisError on duplicate ids or a template missing a placeholder
// its regime needs ({text} and {output_path} always; {reference_audio} for
// zero-shot).
void validate_engines(std::span<const EngineSpec> engines);

// Per-clip attributes used to pick reference material.
struct ClipTraits {
    double snr_db = 0;
    bool ends_at_punctuation = false;
};
using TraitMap = std::map<std::string, ClipTraits>;

struct SynthesisJob {
    std::string job_id;
    std::string engine_id;
    std::string speaker_id;
    std::string source_clip_id;
    std::string text;
    std::vector<std::string> reference_clip_ids;
    std::string output_path;  // relative to the synthesis output root

    bool operator==(const SynthesisJob&) const = default;
};

struct EngineSkip {
    std::string engine_id;
    std::string speaker_id;
    std::string reason;
};

struct JobPlan {
    std::vector<SynthesisJob> jobs;
    std::vector<EngineSkip> skips;
};

// Highest-SNR clips until at least one hour, never past three. Empty when the
// speaker has under an hour of material.
std::vector<std::string> select_few_shot(std::span<const manifest::DatasetEntry> bonafide,
                                         const TraitMap& traits);

// Highest-SNR sentence-complete clip lasting 6-10 s.
std::optional<std::string> select_zero_shot(std::span<const manifest::DatasetEntry> bonafide,
                                            const TraitMap& traits);

// One job per (bonafide clip x engine) for engines whose regime has enough
// data; the others are reported in `skips`. Throws std::invalid_argument for
// an empty engine list or entries that are not bonafide clips of `speaker_id`.
JobPlan build_jobs(std::span<const manifest::DatasetEntry> bonafide,
                   std::span<const EngineSpec> engines, const std::string& speaker_id,
                   const TraitMap& traits = {});

enum class Status { ok, engine_failed, rejected };

std::string to_string(Status s);
std::optional<Status> parse_status(std::string_view s);

struct SynthesisResult {
    std::string job_id;
    Status status = Status::ok;
    double duration = 0;
    std::vector<std::string> reject_reasons;
};

// Speaking-rate estimate for `text` at 150 words per minute.
double expected_duration(std::string_view text);

// Checks 16 kHz after normalization, duration within [0.3x, 3x] of the
// speaking-rate estimate, and silence ratio below 0.9.
SynthesisResult validate_result(const SynthesisJob& job, const audio::AudioBuffer& audio);

// As above, reading the engine output; unreadable output is engine_failed.
SynthesisResult validate_output(const SynthesisJob& job, const std::filesystem::path& path);

// Bonafide entries plus one synthetic entry per ok result. Throws
// SynthesisError when a job points at a clip that is not in `bonafide`.
std::vector<manifest::DatasetEntry> assemble_dataset(
    std::span<const manifest::DatasetEntry> bonafide,
    std::span<const std::pair<SynthesisJob, SynthesisResult>> results);

// Job manifest: {"jobs": [{job_id, engine_id, speaker_id, source_clip_id,
// text, reference_clip_ids, output_path}, ...]}.
std::string jobs_to_json(std::span<const SynthesisJob> jobs);
std::vector<SynthesisJob> jobs_from_json(std::string_view document);

}  // namespace corpusforge::synthesis
