// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "corpusforge/evaluation.hpp"
#include "corpusforge/pipeline.hpp"

namespace pl = corpusforge::pipeline;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kConfig = 2;

void summarize(const pl::StageReport& r) {
    std::cout << pl::to_string(r.stage) << ": " << r.new_outputs << " new outputs, " << r.reused
              << " reused, " << r.failures.size() << " failures, " << r.rejects.size() << " rejects";
    for (const auto& [k, v] : r.counts) std::cout << ", " << k << "=" << v;
    std::cout << "\n";
    for (const auto& f : r.failures) std::cerr << "  failure " << f.item << ": " << f.reason << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpusforge: speech-corpus curation pipeline"};
    app.require_subcommand(1);
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;

    std::vector<std::pair<CLI::App*, std::optional<pl::Stage>>> commands;
    auto add = [&](const std::string& name, std::optional<pl::Stage> stage, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "Pipeline config (JSON)")->required();
        sub->add_option("--seed", seed, "Override the RNG seed");
        sub->add_option("--jobs", jobs, "Per-clip parallelism")->check(CLI::PositiveNumber);
        commands.emplace_back(sub, stage);
    };
    add("acquire", pl::Stage::acquire, "Fetch, normalize and trim source media");
    add("diarize-filter", pl::Stage::diarize_filter, "Keep target-speaker words");
    add("segment", pl::Stage::segment, "Cut utterances into clips");
    add("gate", pl::Stage::gate, "Apply SNR, silence and duration gates");
    add("jobs", pl::Stage::jobs, "Plan and run synthesis jobs");
    add("assemble", pl::Stage::assemble, "Validate outputs and build the dataset");
    add("stats", pl::Stage::stats, "Write dataset statistics");
    add("verify", pl::Stage::verify, "Check manifest and files agree");
    add("serve", pl::Stage::serve, "Run the listening-test service");
    add("run", std::nullopt, "Run every batch stage, then verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        auto cfg = pl::load_config(config);
        if (seed) cfg.seed = *seed;
        if (jobs) cfg.parallelism = *jobs;
        pl::validate(cfg);

        std::vector<pl::Stage> stages;
        for (const auto& [sub, stage] : commands) {
            if (!sub->parsed()) continue;
            if (stage) {
                stages.push_back(*stage);
            } else {
                stages.assign(std::begin(pl::kBatchStages), std::end(pl::kBatchStages));
                stages.push_back(pl::Stage::verify);
            }
        }
        for (auto stage : stages) {
            const auto report = pl::run_stage(stage, cfg);
            summarize(report);
            if (!report.ok()) return kFatal;
        }
    } catch (const pl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const corpusforge::evaluation::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return kFatal;
    }
    return kOk;
}
