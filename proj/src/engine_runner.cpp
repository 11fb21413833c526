// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/engine_runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include "corpusforge/process.hpp"

namespace corpusforge::synthesis {

namespace fs = std::filesystem;

namespace {

std::string safe_name(std::string s) {
    for (char& c : s)
        if (c == '/' || c == '\\') c = '_';
    return s;
}

RunOutcome run_one(const SynthesisJob& job, const EngineSpec& engine, const RunOptions& opt) {
    RunOutcome out;
    out.job_id = job.job_id;
    const fs::path target = opt.output_root / job.output_path;
    if (fs::exists(target)) {
        out.reused = true;
        out.output_present = true;
        return out;
    }
    fs::create_directories(target.parent_path());
    fs::create_directories(opt.log_dir);

    // Engines write beside the target and the file is renamed on success, so
    // an interrupted run never leaves a partial output that would be reused.
    fs::path partial = target;
    partial.replace_extension(".part" + target.extension().string());
    fs::remove(partial);

    std::map<std::string, std::string> vars{{"text", job.text},
                                            {"output_path", partial.string()},
                                            {"job_id", job.job_id},
                                            {"speaker_id", job.speaker_id},
                                            {"reference_audio", ""},
                                            {"reference_text", ""},
                                            {"reference_list", ""}};
    if (!job.reference_clip_ids.empty()) {
        const auto& first = job.reference_clip_ids.front();
        if (opt.clip_audio) vars["reference_audio"] = opt.clip_audio(first).string();
        if (opt.clip_text) vars["reference_text"] = opt.clip_text(first);
        // "path|text" per line, the usual TTS file-list layout.
        const fs::path list = opt.log_dir / (safe_name(job.job_id) + ".refs.txt");
        std::ofstream refs(list, std::ios::trunc);
        for (const auto& id : job.reference_clip_ids)
            refs << (opt.clip_audio ? opt.clip_audio(id).string() : id) << '|'
                 << (opt.clip_text ? opt.clip_text(id) : std::string()) << '\n';
        vars["reference_list"] = list.string();
    }

    const auto cmd = expand_command(engine.command_template, vars);
    out.exit_code = run_command(cmd, opt.log_dir / (safe_name(job.job_id) + ".log"));
    if (out.exit_code == 0 && fs::exists(partial)) fs::rename(partial, target);
    fs::remove(partial);
    out.output_present = fs::exists(target);
    return out;
}

}  // namespace

std::vector<RunOutcome> run_jobs(std::span<const SynthesisJob> jobs,
                                 std::span<const EngineSpec> engines, const RunOptions& opt) {
    std::map<std::string, const EngineSpec*> by_id;
    for (const auto& e : engines) by_id.emplace(e.engine_id, &e);
    for (const auto& j : jobs)
        if (!by_id.contains(j.engine_id))
            throw SynthesisError("job '" + j.job_id + "' names unknown engine '" + j.engine_id + "'");

    std::vector<RunOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            try {
                outcomes[i] = run_one(jobs[i], *by_id.at(jobs[i].engine_id), opt);
            } catch (const std::exception&) {
                outcomes[i] = {jobs[i].job_id, false, -1, false};
            }
    };
    const int n = std::max(1, std::min<int>(opt.parallelism, static_cast<int>(jobs.size())));
    {
        std::vector<std::jthread> pool;
        for (int i = 1; i < n; ++i) pool.emplace_back(worker);
        worker();
    }
    return outcomes;
}

}  // namespace corpusforge::synthesis
