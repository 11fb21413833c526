// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "toy_corpus.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include <json.hpp>

#include "corpusforge/process.hpp"
#include "corpusforge/wav.hpp"

namespace corpusforge::toy {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVocabulary[] = {
    "river",  "lantern", "copper", "meadow", "signal",  "harbor", "violet", "engine",
    "marble", "thunder", "garden", "silver", "pocket",  "winter", "candle", "anchor",
    "orchard", "planet", "velvet", "bridge", "compass", "falcon", "timber", "canyon"};

constexpr double kSlot = 0.5;
constexpr double kVoiced = 0.3;
constexpr double kSentenceGap = 0.3;
constexpr int kGuestWords = 6;
constexpr int kTailWords = 3;

struct Placed {
    std::string text;
    double start, end;
    std::string speaker;
};

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Harmonic tone bursts over a steady noise floor, sampled at 16 kHz-agnostic
// time so every source rate carries the same content.
audio::AudioBuffer render(const std::vector<Placed>& words, double total, double lead,
                          double f0_target, double f0_guest, int rate, int channels,
                          std::uint64_t seed) {
    const auto frames = static_cast<std::size_t>(std::llround((total + lead) * rate));
    audio::AudioBuffer buf;
    buf.sample_rate = rate;
    buf.channels = channels;
    buf.samples.assign(frames * channels, 0.0f);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.004);
    std::vector<double> mono(frames);
    for (auto& v : mono) v = noise(rng);
    for (const auto& w : words) {
        const double f0 = w.speaker == "target" ? f0_target : f0_guest;
        const auto a = static_cast<std::size_t>(std::llround((w.start + lead) * rate));
        const auto b = std::min(frames, static_cast<std::size_t>(std::llround((w.end + lead) * rate)));
        for (std::size_t i = a; i < b; ++i) {
            const double t = static_cast<double>(i - a) / rate;
            const double env = std::sin(std::numbers::pi * t / (w.end - w.start));
            double v = 0;
            for (int h = 1; h <= 3; ++h) v += std::sin(2 * std::numbers::pi * f0 * h * t) / h;
            mono[i] += 0.25 * env * v;
        }
    }
    for (std::size_t i = 0; i < frames; ++i)
        for (int c = 0; c < channels; ++c)
            buf.samples[i * channels + c] = static_cast<float>(mono[i] * (c == 0 ? 1.0 : 0.9));
    return buf;
}

}  // namespace

ToyCorpus write_toy_corpus(const fs::path& dir, const ToyOptions& opt) {
    fs::create_directories(dir);
    std::ofstream sources(dir / "sources.csv", std::ios::binary | std::ios::trunc);
    sources << "speaker_id,media_ref,start_time,content_type,publication_date,min_resolution_ok,"
               "utterance_id\n";
    json roster = json::array();
    std::mt19937_64 pick(opt.seed);

    ToyCorpus out;
    for (int s = 0; s < opt.speakers; ++s) {
        char sid[16];
        std::snprintf(sid, sizeof sid, "spk%02d", s + 1);
        roster.push_back(sid);
        const double f0 = 110.0 + 12.0 * s;
        for (int u = 0; u < opt.utterances_per_speaker; ++u) {
            char uid[32];
            std::snprintf(uid, sizeof uid, "%s_u%02d", sid, u + 1);

            std::vector<Placed> words;
            double t = 0.2;
            for (int k = 0; k < opt.sentences; ++k) {
                for (int w = 0; w < opt.words_per_sentence; ++w) {
                    std::string text = kVocabulary[pick() % std::size(kVocabulary)];
                    if (w == opt.words_per_sentence - 1) text += ".";
                    words.push_back({text, t, t + kVoiced, "target"});
                    t += kSlot;
                }
                t += kSentenceGap - (kSlot - kVoiced);
                ++out.expected_bonafide;
            }
            for (int w = 0; w < kGuestWords; ++w, t += kSlot)
                words.push_back({kVocabulary[pick() % std::size(kVocabulary)], t, t + kVoiced, "guest"});
            t += kSentenceGap - (kSlot - kVoiced);
            for (int w = 0; w < kTailWords; ++w, t += kSlot)
                words.push_back({kVocabulary[pick() % std::size(kVocabulary)], t, t + kVoiced, "target"});
            const double total = t + 0.5;

            json jw = json::array();
            for (const auto& w : words) jw.push_back({{"text", w.text}, {"start", w.start}, {"end", w.end}});
            write_file(dir / "transcripts" / (std::string(uid) + ".json"),
                       json{{"utterance_duration", total}, {"words", jw}}.dump(2) + "\n");

            json intervals = json::array();
            for (std::size_t i = 0; i < words.size();) {
                std::size_t j = i;
                while (j + 1 < words.size() && words[j + 1].speaker == words[i].speaker) ++j;
                intervals.push_back({{"speaker", words[i].speaker == "target" ? "A" : "B"},
                                     {"start", words[i].start - 0.05},
                                     {"end", words[j].end + 0.05}});
                i = j + 1;
            }
            write_file(dir / "diarization" / (std::string(uid) + ".json"),
                       json{{"target", "A"}, {"intervals", intervals}}.dump(2) + "\n");

            const fs::path media = dir / "media" / (std::string(uid) + ".wav");
            fs::create_directories(media.parent_path());
            audio::write_wav(media, render(words, total, opt.lead_seconds, f0, 180.0 + 7.0 * u,
                                           opt.source_rate, opt.channels,
                                           opt.seed * 1000003 + static_cast<std::uint64_t>(s * 100 + u)));
            sources << sid << ",media/" << uid << ".wav," << opt.lead_seconds << ",interview,"
                    << 2019 + (s + u) % 5 << "-0" << 1 + u << "-15,true," << uid << "\n";
        }
    }
    if (opt.bad_rows) {
        sources << "spk01,media/missing.wav,0,speech,2016-05-01,true,spk01_old\n";
        sources << "stranger,media/missing.wav,0,speech,2020-05-01,true,stranger_u01\n";
    }
    sources.close();

    json engines = json::array();
    for (int e = 0; e < opt.engines; ++e) {
        char eid[16];
        std::snprintf(eid, sizeof eid, "tts%02d", e + 1);
        engines.push_back({{"engine_id", eid},
                           {"regime", "zero_shot"},
                           {"command", shell_quote(opt.stub_engine.string()) +
                                           " --text {text} --output {output_path} --reference "
                                           "{reference_audio} --voice " + eid}});
    }
    json cfg = {{"work_dir", "work"},
                {"sources", "sources.csv"},
                {"transcripts_dir", "transcripts"},
                {"diarization_dir", "diarization"},
                {"roster", roster},
                {"date_range", {{"from", "2018-01-01"}, {"to", "2024-12-31"}}},
                {"segmentation", {{"strategy", "transcript"}, {"target_duration", 8}, {"threshold", 2}}},
                {"engines", engines},
                {"parallelism", 4},
                {"seed", opt.seed}};
    write_file(dir / "config.json", cfg.dump(2) + "\n");
    out.config = dir / "config.json";
    out.engines = static_cast<std::size_t>(opt.engines);
    return out;
}

}  // namespace corpusforge::toy
