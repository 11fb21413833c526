// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/synthesis.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "corpusforge/process.hpp"
#include "corpusforge/quality.hpp"
#include "corpusforge/wav.hpp"

namespace corpusforge::synthesis {

using manifest::DatasetEntry;
using manifest::Label;
using json = nlohmann::json;

std::optional<Regime> parse_regime(std::string_view s) {
    if (s == "speaker_specific") return Regime::speaker_specific;
    if (s == "few_shot") return Regime::few_shot;
    if (s == "zero_shot") return Regime::zero_shot;
    return std::nullopt;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::speaker_specific: return "speaker_specific";
        case Regime::few_shot: return "few_shot";
        case Regime::zero_shot: return "zero_shot";
    }
    return "zero_shot";
}

void validate_engines(std::span<const EngineSpec> engines) {
    std::set<std::string> ids;
    for (const auto& e : engines) {
        if (e.engine_id.empty()) throw SynthesisError("engine with empty engine_id");
        if (!ids.insert(e.engine_id).second)
            throw SynthesisError("duplicate engine_id '" + e.engine_id + "'");
        const auto names = placeholders(e.command_template);
        auto need = [&](const char* p) {
            if (std::find(names.begin(), names.end(), p) == names.end())
                throw SynthesisError("engine '" + e.engine_id + "': command template lacks {" +
                                     p + "}");
        };
        need("text");
        need("output_path");
        if (e.regime == Regime::zero_shot) need("reference_audio");
    }
}

namespace {

double snr_of(const TraitMap& traits, const std::string& clip) {
    auto it = traits.find(clip);
    return it == traits.end() ? -std::numeric_limits<double>::infinity() : it->second.snr_db;
}

// Best SNR first, clip_id breaking ties.
std::vector<const DatasetEntry*> by_snr(std::span<const DatasetEntry> entries,
                                        const TraitMap& traits) {
    std::vector<const DatasetEntry*> order;
    for (const auto& e : entries) order.push_back(&e);
    std::sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
        const double sa = snr_of(traits, a->clip_id), sb = snr_of(traits, b->clip_id);
        if (sa != sb) return sa > sb;
        return a->clip_id < b->clip_id;
    });
    return order;
}

std::string hours(double seconds) {
    std::ostringstream os;
    os << seconds / 3600.0;
    return os.str();
}

}  // namespace

std::vector<std::string> select_few_shot(std::span<const DatasetEntry> bonafide,
                                         const TraitMap& traits) {
    std::vector<std::string> picked;
    double total = 0;
    for (const auto* e : by_snr(bonafide, traits)) {
        if (total >= kFewShotMinSeconds) break;
        if (total + e->duration > kFewShotMaxSeconds) continue;
        picked.push_back(e->clip_id);
        total += e->duration;
    }
    if (total < kFewShotMinSeconds) return {};
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::optional<std::string> select_zero_shot(std::span<const DatasetEntry> bonafide,
                                            const TraitMap& traits) {
    for (const auto* e : by_snr(bonafide, traits)) {
        auto it = traits.find(e->clip_id);
        const bool punct = it != traits.end() && it->second.ends_at_punctuation;
        if (punct && e->duration >= kZeroShotMinReference && e->duration <= kZeroShotMaxReference)
            return e->clip_id;
    }
    return std::nullopt;
}

JobPlan build_jobs(std::span<const DatasetEntry> bonafide, std::span<const EngineSpec> engines,
                   const std::string& speaker_id, const TraitMap& traits) {
    if (engines.empty()) throw std::invalid_argument("build_jobs: empty engine list");
    validate_engines(engines);
    for (const auto& e : bonafide)
        if (e.label != Label::bonafide || e.speaker_id != speaker_id)
            throw std::invalid_argument("build_jobs: '" + e.clip_id +
                                        "' is not a bonafide clip of " + speaker_id);

    std::vector<DatasetEntry> clips(bonafide.begin(), bonafide.end());
    std::sort(clips.begin(), clips.end(),
              [](const auto& a, const auto& b) { return a.clip_id < b.clip_id; });
    std::vector<EngineSpec> order(engines.begin(), engines.end());
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.engine_id < b.engine_id; });

    double total = 0;
    for (const auto& c : clips) total += c.duration;

    JobPlan plan;
    for (const auto& engine : order) {
        std::vector<std::string> refs;
        switch (engine.regime) {
            case Regime::speaker_specific:
                if (total < kSpeakerSpecificMinSeconds) {
                    plan.skips.push_back({engine.engine_id, speaker_id,
                                          "insufficient data: need ≥ 24h, have " + hours(total) + "h"});
                    continue;
                }
                for (const auto& c : clips) refs.push_back(c.clip_id);
                break;
            case Regime::few_shot:
                refs = select_few_shot(clips, traits);
                if (refs.empty()) {
                    plan.skips.push_back({engine.engine_id, speaker_id,
                                          "insufficient data: need ≥ 1h, have " + hours(total) + "h"});
                    continue;
                }
                break;
            case Regime::zero_shot: {
                auto ref = select_zero_shot(clips, traits);
                if (!ref) {
                    plan.skips.push_back({engine.engine_id, speaker_id,
                                          "no sentence-complete 6-10 s reference clip"});
                    continue;
                }
                refs.push_back(*ref);
                break;
            }
        }
        for (const auto& c : clips) {
            SynthesisJob job;
            job.job_id = c.clip_id + "__" + engine.engine_id;
            job.engine_id = engine.engine_id;
            job.speaker_id = speaker_id;
            job.source_clip_id = c.clip_id;
            job.text = c.transcript_text;
            job.reference_clip_ids = refs;
            job.output_path = engine.engine_id + "/" + c.clip_id + ".wav";
            plan.jobs.push_back(std::move(job));
        }
    }
    return plan;
}

std::string to_string(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::engine_failed: return "engine_failed";
        case Status::rejected: return "rejected";
    }
    return "rejected";
}

std::optional<Status> parse_status(std::string_view s) {
    if (s == "ok") return Status::ok;
    if (s == "engine_failed") return Status::engine_failed;
    if (s == "rejected") return Status::rejected;
    return std::nullopt;
}

double expected_duration(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::size_t words = 0;
    for (std::string tok; in >> tok;) ++words;
    return static_cast<double>(words) / kWordsPerMinute * 60.0;
}

SynthesisResult validate_result(const SynthesisJob& job, const audio::AudioBuffer& raw) {
    SynthesisResult r;
    r.job_id = job.job_id;
    const auto norm = audio::normalize(raw);
    r.duration = norm.duration_seconds();
    if (norm.sample_rate != audio::kTargetRate) r.reject_reasons.emplace_back("sample_rate_mismatch");

    const double expected = expected_duration(job.text);
    if (r.duration < 0.3 * expected || r.duration > 3.0 * expected || expected == 0)
        r.reject_reasons.emplace_back("duration_implausible");

    bool silent = true;
    try {
        silent = quality::silence_ratio(norm) >= 0.9;
    } catch (const std::invalid_argument&) {
        // shorter than one analysis frame
    }
    if (silent) r.reject_reasons.emplace_back("silent_output");

    r.status = r.reject_reasons.empty() ? Status::ok : Status::rejected;
    return r;
}

SynthesisResult validate_output(const SynthesisJob& job, const std::filesystem::path& path) {
    audio::AudioBuffer buf;
    try {
        buf = audio::read_wav(path);
    } catch (const std::exception& e) {
        SynthesisResult r;
        r.job_id = job.job_id;
        r.status = Status::engine_failed;
        r.reject_reasons.emplace_back(std::string("unreadable output: ") + e.what());
        return r;
    }
    return validate_result(job, buf);
}

std::vector<DatasetEntry> assemble_dataset(
    std::span<const DatasetEntry> bonafide,
    std::span<const std::pair<SynthesisJob, SynthesisResult>> results) {
    std::unordered_map<std::string, const DatasetEntry*> source;
    for (const auto& e : bonafide) source.emplace(e.clip_id, &e);

    std::vector<DatasetEntry> out(bonafide.begin(), bonafide.end());
    for (const auto& [job, result] : results) {
        if (result.job_id != job.job_id)
            throw SynthesisError("result '" + result.job_id + "' paired with job '" + job.job_id + "'");
        auto it = source.find(job.source_clip_id);
        if (it == source.end())
            throw SynthesisError("job '" + job.job_id + "' references unknown clip '" +
                                 job.source_clip_id + "'");
        if (result.status != Status::ok) continue;
        DatasetEntry e;
        e.clip_id = job.job_id;
        e.speaker_id = it->second->speaker_id;
        e.label = Label::synthetic;
        e.method = job.engine_id;
        e.transcript_text = it->second->transcript_text;
        e.duration = result.duration;
        e.file_path = job.output_path;
        e.source_clip_id = job.source_clip_id;
        out.push_back(std::move(e));
    }
    out = manifest::sorted(std::move(out));
    manifest::validate_dataset(out);
    return out;
}

std::string jobs_to_json(std::span<const SynthesisJob> jobs) {
    json arr = json::array();
    for (const auto& j : jobs)
        arr.push_back({{"job_id", j.job_id},
                       {"engine_id", j.engine_id},
                       {"speaker_id", j.speaker_id},
                       {"source_clip_id", j.source_clip_id},
                       {"text", j.text},
                       {"reference_clip_ids", j.reference_clip_ids},
                       {"output_path", j.output_path}});
    return json{{"jobs", std::move(arr)}}.dump(2) + "\n";
}

std::vector<SynthesisJob> jobs_from_json(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SynthesisError(std::string("job manifest: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("jobs") || !doc["jobs"].is_array())
        throw SynthesisError("job manifest: expected {\"jobs\": [...]}");
    std::vector<SynthesisJob> jobs;
    for (const auto& j : doc["jobs"]) {
        try {
            SynthesisJob job;
            job.job_id = j.at("job_id").get<std::string>();
            job.engine_id = j.at("engine_id").get<std::string>();
            job.speaker_id = j.at("speaker_id").get<std::string>();
            job.source_clip_id = j.at("source_clip_id").get<std::string>();
            job.text = j.at("text").get<std::string>();
            job.reference_clip_ids = j.at("reference_clip_ids").get<std::vector<std::string>>();
            job.output_path = j.at("output_path").get<std::string>();
            jobs.push_back(std::move(job));
        } catch (const json::exception& e) {
            throw SynthesisError(std::string("job manifest entry: ") + e.what());
        }
    }
    return jobs;
}

}  // namespace corpusforge::synthesis
