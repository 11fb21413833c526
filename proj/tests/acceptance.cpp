// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include "corpusforge/evaluation.hpp"
#include "corpusforge/pipeline.hpp"
#include "corpusforge/quality.hpp"
#include "corpusforge/segmenter.hpp"
#include "oracles.hpp"
#include "toy_corpus.hpp"

namespace {

using namespace corpusforge;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kCorpus = 1000;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%02d] %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::vector<oracle::RefSegment> as_ref(const std::vector<segmenter::Segment>& segs) {
    std::vector<oracle::RefSegment> out;
    for (const auto& s : segs)
        out.push_back({s.first_word, s.first_word + s.words.size() - 1, s.ends_at_punctuation, s.padded});
    return out;
}

Outcome segmentation_oracle() {
    const auto t0 = Clock::now();
    std::size_t mismatches = 0, segments = 0;
    for (std::uint64_t seed = 1; seed <= kCorpus; ++seed) {
        const auto t = oracle::random_transcript(seed);
        const auto got = as_ref(segmenter::segment_by_transcript(t, {}));
        segments += got.size();
        if (got != oracle::segment(t, {})) ++mismatches;
    }
    const double secs = since(t0);
    return {mismatches == 0 && secs < 10.0,
            fmt("%.0f mismatches over 1000 transcripts (%.0f segments), %.3f s", static_cast<double>(mismatches),
                static_cast<double>(segments), secs)};
}

Outcome segmentation_invariants() {
    const segmenter::SegmentationParams p;
    std::size_t violations = 0, capped = 0;
    for (std::uint64_t seed = 1; seed <= kCorpus; ++seed) {
        const auto t = oracle::random_transcript(seed);
        const auto segs = segmenter::segment_by_transcript(t, p);
        std::size_t next = 0;
        for (const auto& s : segs) {
            if (s.duration() > p.hard_limit() + 1e-9) ++violations;
            if (s.duration() < p.min_duration() - 1e-9) ++violations;
            if (s.first_word < next) ++violations;
            for (std::size_t k = 0; k < s.words.size(); ++k)
                if (!(s.words[k] == t.words[s.first_word + k])) ++violations;
            next = s.first_word + s.words.size();
            if (s.ends_at_punctuation && !segmenter::ends_with_punctuation(s.words.back(), p)) ++violations;
        }
        // The cap may only remove segments that do not end at punctuation.
        oracle::RefParams uncapped;
        uncapped.cap = false;
        const auto all = oracle::segment(t, uncapped);
        const auto kept = as_ref(segs);
        if (kept.size() < all.size()) ++capped;
        for (const auto& s : all)
            if (s.punct && std::find(kept.begin(), kept.end(), s) == kept.end()) ++violations;
    }
    return {violations == 0, fmt("%.0f violations over 1000 transcripts (cap active in %.0f)",
                                 static_cast<double>(violations), static_cast<double>(capped))};
}

Outcome hand_traced() {
    const auto t = oracle::uniform_transcript(20, 0.5, 14);
    const auto segs = segmenter::segment_by_transcript(t, {});
    const bool ok = segs.size() == 1 && segs[0].words.size() == 14 && segs[0].end == 7.0 &&
                    segs[0].ends_at_punctuation;
    return {ok, fmt("%.0f segment(s); first has %.0f words ending at %.2f s", static_cast<double>(segs.size()),
                    segs.empty() ? 0.0 : static_cast<double>(segs[0].words.size()),
                    segs.empty() ? 0.0 : segs[0].end)};
}

Outcome fixed_interval() {
    transcript::Transcript t;
    for (int i = 0; i < 3600; ++i) t.words.push_back({"w", i * 0.5, i * 0.5 + 0.45, {}});
    t.utterance_duration = 1800;
    const auto t0 = Clock::now();
    const auto segs = segmenter::segment_fixed(t, {});
    const double secs = since(t0);
    return {segs.size() == 300 && secs < 1.0,
            fmt("%.0f segments for U=1800 s, n=6 s in %.4f s", static_cast<double>(segs.size()), secs)};
}

Outcome pause_segmentation() {
    std::size_t mismatches = 0;
    for (std::uint64_t seed = 1; seed <= kCorpus; ++seed) {
        const auto t = oracle::random_transcript(seed);
        std::set<std::size_t> got;
        for (const auto& s : segmenter::segment_by_pause(t, {}))
            if (s.first_word + s.words.size() < t.words.size()) got.insert(s.first_word + s.words.size() - 1);
        if (got != oracle::pause_boundaries(t, 0.5)) ++mismatches;
    }
    return {mismatches == 0, fmt("%.0f boundary-set mismatches over 1000 transcripts", static_cast<double>(mismatches))};
}

Outcome snr_estimator() {
    double worst = 0, worst_scale = 0;
    for (int snr = 0; snr <= 40; snr += 5)
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const double est = quality::estimate_snr(oracle::tone_in_noise(snr, seed));
            worst = std::max(worst, std::abs(est - snr));
            for (double scale : {0.01, 0.1, 10.0}) {
                const double scaled = quality::estimate_snr(oracle::tone_in_noise(snr, seed, scale));
                worst_scale = std::max(worst_scale, std::abs(scaled - est));
            }
        }
    return {worst <= 1.5 && worst_scale <= 0.1,
            fmt("max error %.3f dB over 0-40 dB x 3 seeds; max scale drift %.4f dB", worst, worst_scale)};
}

Outcome resampler() {
    const auto in = oracle::sine(1000, 48000, 1.0);
    const auto out = audio::resample(in, 16000);
    const std::size_t n = 8192;
    std::vector<float> window(out.samples.begin() + 4000, out.samples.begin() + 4000 + n);
    const auto bin = oracle::argmax(oracle::dft_magnitude(window, n));
    const double expected = 1000.0 * n / 16000.0;
    const double drift = std::abs(out.duration_seconds() - in.duration_seconds());
    const auto noise = oracle::tone_in_noise(10, 2);
    const bool identity = audio::resample(noise, 16000) == noise;
    const bool ok = std::abs(static_cast<double>(bin) - expected) <= 1.0 && drift <= 1.0 / 16000 && identity;
    return {ok, fmt("peak bin %.0f (expected %.0f), duration drift %.2e s", static_cast<double>(bin), expected, drift) +
                    (identity ? ", identity bit-exact" : ", identity NOT bit-exact")};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct ToyRun {
    fs::path dir;
    toy::ToyCorpus corpus;
    pipeline::PipelineConfig cfg;
};

ToyRun& toy_run() {
    static ToyRun run = [] {
        ToyRun r;
        r.dir = fs::temp_directory_path() / ("corpusforge_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(r.dir);
        toy::ToyOptions opt;
        opt.stub_engine = CORPUSFORGE_STUB_ENGINE;
        r.corpus = toy::write_toy_corpus(r.dir, opt);
        r.cfg = pipeline::load_config(r.corpus.config, [](const std::string&) { return std::nullopt; });
        pipeline::validate(r.cfg);
        return r;
    }();
    return run;
}

Outcome end_to_end() {
    auto& run = toy_run();
    const auto t0 = Clock::now();
    const auto reports = pipeline::run_all(run.cfg);
    const double secs = since(t0);
    const auto& stats = reports.back();
    const std::size_t bona = stats.counts.at("bonafide"), synth = stats.counts.at("synthetic");
    const std::size_t k = 3;
    const bool verified = pipeline::run_stage(pipeline::Stage::verify, run.cfg).ok();
    const bool ok = bona == 50 * k && synth == 10 * bona && secs < 120.0 && verified;
    return {ok, fmt("bonafide %.0f (50 x %.0f), synthetic %.0f", static_cast<double>(bona), static_cast<double>(k),
                    static_cast<double>(synth)) +
                    fmt(", full run %.1f s", secs) + (verified ? ", verify clean" : ", verify FAILED")};
}

Outcome miss_rates() {
    using namespace evaluation;
    std::vector<TrialSession> sessions;
    for (int i = 0; i < 34; ++i)
        sessions.push_back({"s" + std::to_string(i), "p" + std::to_string(i),
                            {{"t", "D", "c", Truth::fake, i < 21 ? Truth::real : Truth::fake, {}}}});
    const auto r = compute_miss_rates(sessions);
    const std::string doc = to_json(r);
    const bool exact = r.per_dataset.at("D").fake_miss_rate && doc.find("\"fake_miss_rate\": 61.8") != std::string::npos;

    std::mt19937_64 rng(17);
    std::size_t changed = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<TrialSession> s;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 30); ++i) {
            TrialSession ts{"s" + std::to_string(i), "p" + std::to_string(rng() % 10), {}};
            for (int k = 0; k < 14; ++k)
                ts.trials.push_back({"t" + std::to_string(k), "d" + std::to_string(k % 7), "c",
                                     (rng() % 2) ? Truth::real : Truth::fake,
                                     (rng() % 2) ? Truth::real : Truth::fake, {}});
            s.push_back(std::move(ts));
        }
        const std::string before = to_json(compute_miss_rates(s));
        for (auto& ts : s)
            for (int k = static_cast<int>(rng() % 5); k > 0; --k)
                ts.trials.push_back({"u", "d" + std::to_string(rng() % 7), "c", (rng() % 2) ? Truth::real : Truth::fake, {}, {}});
        if (to_json(compute_miss_rates(s)) != before) ++changed;
    }
    return {exact && changed == 0,
            std::string(exact ? "21/34 -> 61.8%" : "21/34 did not give 61.8%") +
                fmt("; unanswered trials changed the report in %.0f of 500 trials", static_cast<double>(changed))};
}

Outcome determinism() {
    auto& run = toy_run();
    auto second = run.cfg;
    second.work_dir = run.dir / "work_again";
    pipeline::run_all(second);
    pipeline::run_stage(pipeline::Stage::verify, second);

    std::size_t compared = 0, differing = 0;
    std::string first_diff;
    auto compare_tree = [&](const fs::path& rel, bool audio_only) {
        for (const auto& f : fs::recursive_directory_iterator(run.cfg.work_dir / rel)) {
            if (!f.is_regular_file()) continue;
            const auto name = f.path().filename().string();
            if (name.ends_with(".timings.json")) continue;
            if (audio_only && !name.ends_with(".wav")) continue;
            const auto other = second.work_dir / fs::relative(f.path(), run.cfg.work_dir);
            ++compared;
            if (!fs::exists(other) || slurp(f.path()) != slurp(other)) {
                if (differing++ == 0) first_diff = fs::relative(f.path(), run.cfg.work_dir).string();
            }
        }
    };
    compare_tree("manifests", false);
    compare_tree("reports", false);
    compare_tree("jobs", false);
    compare_tree("dataset", false);
    const bool ok = compared > 1600 && differing == 0;
    return {ok, fmt("%.0f files compared (manifests, reports, jobs, dataset audio), %.0f differ",
                    static_cast<double>(compared), static_cast<double>(differing)) +
                    (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

}  // namespace

int main() {
    report(1, "segmentation oracle equivalence", segmentation_oracle);
    report(2, "segmentation invariants", segmentation_invariants);
    report(3, "hand-traced 20-word fixture", hand_traced);
    report(4, "fixed-interval segmentation", fixed_interval);
    report(5, "pause segmentation", pause_segmentation);
    report(6, "SNR estimator", snr_estimator);
    report(7, "resampler", resampler);
    report(8, "end-to-end ratio", end_to_end);
    report(9, "miss-rate arithmetic", miss_rates);
    report(10, "determinism", determinism);
    std::error_code ec;
    fs::remove_all(toy_run().dir, ec);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
