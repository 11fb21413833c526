// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "corpusforge/csv.hpp"
#include "corpusforge/digest.hpp"
#include "corpusforge/engine_runner.hpp"
#include "corpusforge/evaluation.hpp"
#include "corpusforge/fetch.hpp"
#include "corpusforge/http_service.hpp"
#include "corpusforge/listening.hpp"
#include "corpusforge/transcript.hpp"
#include "corpusforge/util.hpp"
#include "corpusforge/wav.hpp"

namespace corpusforge::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;
using manifest::DatasetEntry;
using manifest::Label;

std::optional<Stage> parse_stage(std::string_view s) {
    for (Stage st : {Stage::acquire, Stage::diarize_filter, Stage::segment, Stage::gate, Stage::jobs,
                     Stage::assemble, Stage::stats, Stage::verify, Stage::serve})
        if (to_string(st) == s) return st;
    return std::nullopt;
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::acquire: return "acquire";
        case Stage::diarize_filter: return "diarize-filter";
        case Stage::segment: return "segment";
        case Stage::gate: return "gate";
        case Stage::jobs: return "jobs";
        case Stage::assemble: return "assemble";
        case Stage::stats: return "stats";
        case Stage::verify: return "verify";
        case Stage::serve: return "serve";
    }
    return "acquire";
}

bool StageReport::ok() const { return stage != Stage::verify || failures.empty(); }

std::string StageReport::to_json() const {
    auto issues = [](const std::vector<Issue>& v) {
        json arr = json::array();
        for (const auto& i : v) arr.push_back({{"item", i.item}, {"reason", i.reason}});
        return arr;
    };
    json doc = {{"stage", to_string(stage)},
                {"new_outputs", new_outputs},
                {"reused", reused},
                {"failures", issues(failures)},
                {"rejects", issues(rejects)},
                {"counts", counts}};
    if (!per_item.empty()) doc["per_item"] = per_item;
    return doc.dump(2) + "\n";
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw std::ios_base::failure("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Leaves an identical file untouched; true when something was written.
bool update_text(const fs::path& path, const std::string& text) {
    if (fs::exists(path) && read_text(path) == text) return false;
    write_text(path, text);
    return true;
}

void require(const fs::path& path) {
    if (!fs::exists(path)) throw StageError("missing upstream artifact: " + path.string());
}

json read_state(const Layout& l, Stage s) {
    require(l.state(s));
    json doc = json::parse(read_text(l.state(s)), nullptr, false);
    if (doc.is_discarded()) throw StageError("corrupt state file: " + l.state(s).string());
    return doc;
}

std::vector<DatasetEntry> read_manifest(const fs::path& path) {
    require(path);
    return manifest::read_dataset_manifest(path);
}

std::string rel(const fs::path& p, const fs::path& root) {
    return p.lexically_relative(root).generic_string();
}

std::string short_digest(Digest& d) { return d.hex().substr(0, 12); }

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
// is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
        worker();
    }
    if (error) std::rethrow_exception(error);
}

// Removes entries of `dir` whose names are not in `keep`.
void prune(const fs::path& dir, const std::set<std::string>& keep) {
    if (!fs::is_directory(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir))
        if (!keep.contains(entry.path().filename().string())) fs::remove_all(entry.path());
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Utterance {
    std::string utterance_id;
    std::string speaker_id;
    std::string audio;       // relative to the work dir
    std::string transcript;  // relative to the work dir, after filtering
};

json utterances_json(const std::vector<Utterance>& v) {
    json arr = json::array();
    for (const auto& u : v) {
        json o = {{"utterance_id", u.utterance_id}, {"speaker_id", u.speaker_id}, {"audio", u.audio}};
        if (!u.transcript.empty()) o["transcript"] = u.transcript;
        arr.push_back(std::move(o));
    }
    return json{{"utterances", std::move(arr)}};
}

std::vector<Utterance> utterances_from(const json& doc) {
    std::vector<Utterance> out;
    for (const auto& o : doc.at("utterances"))
        out.push_back({o.at("utterance_id").get<std::string>(), o.at("speaker_id").get<std::string>(),
                       o.at("audio").get<std::string>(), o.value("transcript", std::string())});
    return out;
}

// ---------------------------------------------------------------- acquire

StageReport acquire(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    require(cfg.sources);
    std::ifstream in(cfg.sources, std::ios::binary);
    manifest::SourceManifest src;
    try {
        src = manifest::parse_source_manifest(in, cfg.rules);
    } catch (const manifest::ManifestError& e) {
        throw StageError(cfg.sources.string() + ": " + e.what());
    }
    for (const auto& rj : src.rejects) r.rejects.push_back({"row " + std::to_string(rj.row), rj.reason});

    // Utterance ids come from an optional column, else speaker_NNN.
    std::vector<const manifest::SourceRecord*> records;
    std::vector<std::string> ids;
    std::map<std::string, int> ordinal;
    std::set<std::string> seen;
    for (const auto& rec : src.records) {
        std::string id;
        if (auto it = rec.extra.find("utterance_id"); it != rec.extra.end() && !it->second.empty()) {
            id = it->second;
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "_%03d", ++ordinal[rec.speaker_id]);
            id = rec.speaker_id + buf;
        }
        if (!seen.insert(id).second) {
            r.rejects.push_back({"row " + std::to_string(rec.row), "duplicate utterance_id '" + id + "'"});
            continue;
        }
        records.push_back(&rec);
        ids.push_back(id);
    }

    audio::MediaFetcher fetcher{cfg.downloader, cfg.sources.parent_path(), l.root / "scratch"};
    const fs::path dir = l.stage_dir(Stage::acquire);
    std::vector<std::optional<Utterance>> done(records.size());
    std::vector<std::optional<std::string>> errors(records.size());
    std::vector<char> reused(records.size(), 0);

    parallel_for(records.size(), cfg.parallelism, [&](std::size_t i) {
        const auto& rec = *records[i];
        try {
            const fs::path local = fetcher.materialize(rec.media_ref);
            Digest d;
            d.field("acquire/1").file(local).field(format_double(rec.start_time));
            const fs::path out = dir / (ids[i] + "-" + short_digest(d)) / "audio.wav";
            if (fs::exists(out)) {
                reused[i] = 1;
            } else {
                auto buf = audio::normalize(audio::trim_from(audio::read_wav(local), rec.start_time));
                fs::create_directories(out.parent_path());
                audio::write_wav(out, buf);
            }
            done[i] = Utterance{ids[i], rec.speaker_id, rel(out, l.root), {}};
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    std::vector<Utterance> utts;
    std::set<std::string> keep;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (errors[i]) {
            r.failures.push_back({ids[i], *errors[i]});
            continue;
        }
        (reused[i] ? r.reused : r.new_outputs)++;
        keep.insert(fs::path(done[i]->audio).parent_path().filename().string());
        utts.push_back(*done[i]);
    }
    std::sort(utts.begin(), utts.end(),
              [](const auto& a, const auto& b) { return a.utterance_id < b.utterance_id; });
    prune(dir, keep);
    write_text(l.state(Stage::acquire), utterances_json(utts).dump(2) + "\n");
    r.counts = {{"source_rows", src.records.size() + src.rejects.size()},
                {"rejected_rows", r.rejects.size()},
                {"utterances", utts.size()}};
    return r;
}

// --------------------------------------------------------- diarize-filter

StageReport diarize_filter(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    const auto input = utterances_from(read_state(l, Stage::acquire));
    const fs::path dir = l.stage_dir(Stage::diarize_filter);

    struct Out {
        std::optional<Utterance> utt;
        std::optional<std::string> error, warning;
        bool reused = false;
        std::size_t words_in = 0, words_kept = 0;
    };
    std::vector<Out> outs(input.size());

    parallel_for(input.size(), cfg.parallelism, [&](std::size_t i) {
        const auto& u = input[i];
        auto& o = outs[i];
        try {
            const fs::path tpath = cfg.transcripts_dir / (u.utterance_id + ".json");
            if (!fs::exists(tpath)) throw StageError("missing transcript " + tpath.string());
            const auto t = transcript::parse_transcript(read_text(tpath));
            o.words_in = t.words.size();

            std::optional<transcript::Diarization> dia;
            Digest d;
            d.field("diarize-filter/1").field(u.audio).file(tpath);
            if (cfg.diarization_dir) {
                const fs::path dpath = *cfg.diarization_dir / (u.utterance_id + ".json");
                if (!fs::exists(dpath)) throw StageError("missing diarization " + dpath.string());
                dia = transcript::parse_diarization(read_text(dpath));
                d.file(dpath);
            }
            const std::string target = dia && dia->target ? *dia->target : u.speaker_id;
            d.field(target);

            const fs::path out = dir / (u.utterance_id + "-" + short_digest(d)) / "transcript.json";
            transcript::Transcript kept;
            if (fs::exists(out)) {
                o.reused = true;
                kept = transcript::parse_transcript(read_text(out));
            } else {
                if (dia) {
                    auto f = transcript::filter_target_speaker(t, dia->intervals, target);
                    kept = std::move(f.transcript);
                    o.warning = f.warning;
                } else {
                    kept = t;
                }
                write_text(out, transcript::to_json(kept));
            }
            if (dia && kept.words.empty() && !o.warning) o.warning = "no words attributed to '" + target + "'";
            o.words_kept = kept.words.size();
            o.utt = Utterance{u.utterance_id, u.speaker_id, u.audio, rel(out, l.root)};
        } catch (const std::exception& e) {
            o.error = e.what();
        }
    });

    std::vector<Utterance> utts;
    std::set<std::string> keep;
    std::size_t in_words = 0, kept_words = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        auto& o = outs[i];
        if (o.error) {
            r.failures.push_back({input[i].utterance_id, *o.error});
            continue;
        }
        if (o.warning) r.rejects.push_back({input[i].utterance_id, *o.warning});
        (o.reused ? r.reused : r.new_outputs)++;
        in_words += o.words_in;
        kept_words += o.words_kept;
        keep.insert(fs::path(o.utt->transcript).parent_path().filename().string());
        utts.push_back(*o.utt);
    }
    prune(dir, keep);
    write_text(l.state(Stage::diarize_filter), utterances_json(utts).dump(2) + "\n");
    r.counts = {{"utterances", utts.size()}, {"words_in", in_words}, {"words_kept", kept_words}};
    return r;
}

// ---------------------------------------------------------------- segment

std::string params_key(const PipelineConfig& cfg) {
    const auto& p = cfg.segmentation;
    std::string key = std::to_string(static_cast<int>(cfg.strategy));
    for (double v : {p.target_duration, p.threshold, p.pad, p.pause_threshold, p.fixed_interval})
        key += "|" + format_double(v);
    for (char32_t c : p.punctuation) key += "|" + std::to_string(static_cast<std::uint32_t>(c));
    return key;
}

StageReport segment(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    const auto input = utterances_from(read_state(l, Stage::diarize_filter));
    const fs::path dir = l.stage_dir(Stage::segment);
    const auto& p = cfg.segmentation;

    struct Out {
        std::vector<DatasetEntry> entries;
        std::optional<std::string> error;
        std::string dir_name;
        std::size_t new_clips = 0, reused_clips = 0;
    };
    std::vector<Out> outs(input.size());

    parallel_for(input.size(), cfg.parallelism, [&](std::size_t i) {
        const auto& u = input[i];
        auto& o = outs[i];
        try {
            require(l.root / u.audio);
            require(l.root / u.transcript);
            Digest d;
            d.field("segment/1").field(u.audio).field(u.transcript).field(params_key(cfg));
            o.dir_name = u.utterance_id + "-" + short_digest(d);
            const fs::path out = dir / o.dir_name;
            const fs::path index = out / "segments.json";

            json segs;
            if (fs::exists(index)) {
                segs = json::parse(read_text(index));
                o.reused_clips = segs.size();
            } else {
                const auto t = transcript::parse_transcript(read_text(l.root / u.transcript));
                const auto buf = audio::read_wav(l.root / u.audio);
                std::vector<segmenter::Segment> found;
                switch (cfg.strategy) {
                    case Strategy::transcript: found = segmenter::segment_by_transcript(t, p); break;
                    case Strategy::pause: found = segmenter::segment_by_pause(t, p); break;
                    case Strategy::fixed: found = segmenter::segment_fixed(t, p); break;
                }
                segs = json::array();
                fs::create_directories(out);
                for (std::size_t k = 0; k < found.size(); ++k) {
                    const auto& s = found[k];
                    char num[24];
                    std::snprintf(num, sizeof num, "_%03zu", k + 1);
                    const std::string clip = u.utterance_id + num;
                    auto clip_audio = segmenter::extract_segment_audio(buf, s, p);
                    audio::write_wav(out / (clip + ".wav"), clip_audio);
                    segs.push_back({{"clip_id", clip},
                                    {"text", s.text},
                                    {"start", s.start},
                                    {"end", s.end},
                                    {"duration", clip_audio.duration_seconds()},
                                    {"ends_at_punctuation", s.ends_at_punctuation},
                                    {"padded", s.padded}});
                }
                write_text(index, segs.dump(2) + "\n");
                o.new_clips = segs.size();
            }
            for (const auto& s : segs) {
                DatasetEntry e;
                e.clip_id = s.at("clip_id").get<std::string>();
                e.speaker_id = u.speaker_id;
                e.label = Label::bonafide;
                e.transcript_text = s.at("text").get<std::string>();
                e.duration = s.at("duration").get<double>();
                e.file_path = rel(out / (e.clip_id + ".wav"), l.root);
                e.extra = {{"utterance_id", u.utterance_id},
                           {"start", format_double(s.at("start").get<double>())},
                           {"end", format_double(s.at("end").get<double>())},
                           {"ends_at_punctuation", bool_text(s.at("ends_at_punctuation").get<bool>())},
                           {"padded", bool_text(s.at("padded").get<bool>())}};
                o.entries.push_back(std::move(e));
            }
        } catch (const std::exception& e) {
            o.error = e.what();
        }
    });

    std::vector<DatasetEntry> all;
    std::set<std::string> keep;
    for (std::size_t i = 0; i < input.size(); ++i) {
        auto& o = outs[i];
        if (o.error) {
            r.failures.push_back({input[i].utterance_id, *o.error});
            continue;
        }
        keep.insert(o.dir_name);
        r.new_outputs += o.new_clips;
        r.reused += o.reused_clips;
        r.per_item[input[i].utterance_id] = o.entries.size();
        for (auto& e : o.entries) all.push_back(std::move(e));
    }
    prune(dir, keep);
    all = manifest::sorted(std::move(all));
    manifest::write_dataset_manifest(all, l.segments_manifest());
    r.counts = {{"utterances", input.size() - r.failures.size()}, {"segments", all.size()}};
    return r;
}

// ------------------------------------------------------------------- gate

StageReport gate(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    auto clips = read_manifest(l.segments_manifest());

    Digest d;
    d.field("gate/1").file(l.segments_manifest());
    for (double v : {cfg.gate.min_snr_db, cfg.gate.max_silence_ratio, cfg.gate.min_duration,
                     cfg.gate.max_duration})
        d.field(format_double(v));
    const fs::path cache = l.stage_dir(Stage::gate) / (short_digest(d) + ".json");

    std::vector<quality::QualityReport> reports(clips.size());
    bool cached = false;
    if (fs::exists(cache)) {
        json doc = json::parse(read_text(cache), nullptr, false);
        if (!doc.is_discarded() && doc.is_array() && doc.size() == clips.size()) {
            for (std::size_t i = 0; i < clips.size(); ++i) {
                const auto& q = doc[i];
                auto& rep = reports[i];
                if (!q.at("snr_db").is_null()) rep.snr_db = q.at("snr_db").get<double>();
                if (!q.at("silence_ratio").is_null()) rep.silence_ratio = q.at("silence_ratio").get<double>();
                rep.duration = q.at("duration").get<double>();
                rep.passed = q.at("passed").get<bool>();
                rep.reasons = q.at("reasons").get<std::vector<std::string>>();
            }
            cached = true;
        }
    }
    if (cached) {
        r.reused = clips.size();
    } else {
        std::vector<std::optional<std::string>> errors(clips.size());
        parallel_for(clips.size(), cfg.parallelism, [&](std::size_t i) {
            try {
                reports[i] = quality::quality_gate(audio::read_wav(l.root / clips[i].file_path), cfg.gate);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                reports[i].reasons = {"unreadable"};
            }
        });
        for (std::size_t i = 0; i < clips.size(); ++i)
            if (errors[i]) r.failures.push_back({clips[i].clip_id, *errors[i]});
        if (r.failures.empty()) {
            json doc = json::array();
            for (const auto& q : reports)
                doc.push_back({{"snr_db", q.snr_db ? json(*q.snr_db) : json()},
                               {"silence_ratio", q.silence_ratio ? json(*q.silence_ratio) : json()},
                               {"duration", q.duration},
                               {"passed", q.passed},
                               {"reasons", q.reasons}});
            prune(l.stage_dir(Stage::gate), {});
            write_text(cache, doc.dump() + "\n");
        }
        r.new_outputs = clips.size() - r.failures.size();
    }

    std::ostringstream table;
    csv::write_row(table, std::vector<std::string>{"clip_id", "duration", "snr_db", "silence_ratio", "passed", "reasons"});
    std::vector<DatasetEntry> passed;
    for (std::size_t i = 0; i < clips.size(); ++i) {
        const auto& q = reports[i];
        std::string reasons;
        for (const auto& why : q.reasons) reasons += (reasons.empty() ? "" : ";") + why;
        csv::write_row(table, std::vector<std::string>{clips[i].clip_id, format_double(q.duration),
                               q.snr_db ? format_double(*q.snr_db) : "",
                               q.silence_ratio ? format_double(*q.silence_ratio) : "",
                               bool_text(q.passed), reasons});
        if (!q.passed) {
            if (q.reasons != std::vector<std::string>{"unreadable"})
                r.rejects.push_back({clips[i].clip_id, reasons});
            continue;
        }
        DatasetEntry e = clips[i];
        e.extra["snr_db"] = format_double(*q.snr_db);
        e.extra["silence_ratio"] = format_double(*q.silence_ratio);
        passed.push_back(std::move(e));
    }
    write_text(l.quality_table(), table.str());
    manifest::write_dataset_manifest(passed, l.bonafide_manifest());
    r.counts = {{"clips", clips.size()}, {"passed", passed.size()}, {"rejected", r.rejects.size()}};
    return r;
}

// ------------------------------------------------------------------- jobs

synthesis::TraitMap traits_of(std::span<const DatasetEntry> entries) {
    synthesis::TraitMap traits;
    for (const auto& e : entries) {
        synthesis::ClipTraits t;
        if (auto it = e.extra.find("snr_db"); it != e.extra.end())
            t.snr_db = parse_double(it->second).value_or(0.0);
        if (auto it = e.extra.find("ends_at_punctuation"); it != e.extra.end())
            t.ends_at_punctuation = it->second == "true";
        traits[e.clip_id] = t;
    }
    return traits;
}

StageReport jobs(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    if (cfg.engines.empty()) throw ConfigError("no engines configured");
    const auto bonafide = read_manifest(l.bonafide_manifest());
    const auto traits = traits_of(bonafide);

    std::map<std::string, std::vector<DatasetEntry>> by_speaker;
    for (const auto& e : bonafide) by_speaker[e.speaker_id].push_back(e);

    std::vector<synthesis::SynthesisJob> all;
    for (const auto& [speaker, clips] : by_speaker) {
        auto plan = synthesis::build_jobs(clips, cfg.engines, speaker, traits);
        for (auto& s : plan.skips) r.rejects.push_back({s.engine_id + "/" + s.speaker_id, s.reason});
        for (auto& j : plan.jobs) all.push_back(std::move(j));
    }
    const std::string jobs_doc = synthesis::jobs_to_json(all);
    write_text(l.jobs_file(), jobs_doc);

    Digest d;
    d.field("jobs/1").field(jobs_doc).file(l.bonafide_manifest());
    for (const auto& e : cfg.engines)
        d.field(e.engine_id).field(synthesis::to_string(e.regime)).field(e.command_template);
    const std::string plan_id = short_digest(d);
    const fs::path root = l.root / "synthesis" / plan_id;
    prune(l.root / "synthesis", {plan_id});

    std::map<std::string, const DatasetEntry*> by_clip;
    for (const auto& e : bonafide) by_clip[e.clip_id] = &e;
    synthesis::RunOptions opt;
    opt.output_root = root / "out";
    opt.log_dir = root / "logs";
    opt.parallelism = cfg.parallelism;
    opt.clip_audio = [&](const std::string& id) { return l.root / by_clip.at(id)->file_path; };
    opt.clip_text = [&](const std::string& id) { return by_clip.at(id)->transcript_text; };
    const auto outcomes = synthesis::run_jobs(all, cfg.engines, opt);

    std::map<std::string, std::size_t> per_engine;
    for (const auto& o : outcomes) {
        if (o.reused) {
            ++r.reused;
        } else if (o.exit_code == 0 && o.output_present) {
            ++r.new_outputs;
        } else {
            r.failures.push_back({o.job_id, o.exit_code != 0
                                                ? "engine exited with status " + std::to_string(o.exit_code)
                                                : "engine produced no output"});
        }
    }
    for (const auto& j : all) ++per_engine[j.engine_id];
    write_text(l.state(Stage::jobs), json{{"output_root", rel(opt.output_root, l.root)}}.dump(2) + "\n");
    r.counts = {{"jobs", all.size()}, {"skipped_engine_speakers", r.rejects.size()},
                {"speakers", by_speaker.size()}};
    r.per_item = per_engine;
    return r;
}

// --------------------------------------------------------------- assemble

StageReport assemble(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    const auto bonafide = read_manifest(l.bonafide_manifest());
    require(l.jobs_file());
    const auto all = synthesis::jobs_from_json(read_text(l.jobs_file()));
    const fs::path output_root = l.root / read_state(l, Stage::jobs).at("output_root").get<std::string>();

    std::vector<std::pair<synthesis::SynthesisJob, synthesis::SynthesisResult>> results(all.size());
    parallel_for(all.size(), cfg.parallelism, [&](std::size_t i) {
        results[i] = {all[i], synthesis::validate_output(all[i], output_root / all[i].output_path)};
    });
    std::size_t failed = 0, rejected = 0;
    for (const auto& [job, res] : results) {
        std::string reasons;
        for (const auto& why : res.reject_reasons) reasons += (reasons.empty() ? "" : ";") + why;
        if (res.status == synthesis::Status::engine_failed) {
            ++failed;
            r.failures.push_back({job.job_id, reasons});
        } else if (res.status == synthesis::Status::rejected) {
            ++rejected;
            r.rejects.push_back({job.job_id, reasons});
        }
    }

    std::vector<DatasetEntry> entries;
    try {
        entries = synthesis::assemble_dataset(bonafide, results);
    } catch (const std::exception& e) {
        throw StageError(std::string("assemble: ") + e.what());
    }

    // Copy every clip into the dataset tree, skipping files already in place.
    const fs::path out = l.dataset_dir();
    std::vector<fs::path> sources(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& e = entries[i];
        if (e.label == Label::bonafide) {
            sources[i] = l.root / e.file_path;
            e.file_path = "bonafide/" + e.speaker_id + "/" + e.clip_id + ".wav";
        } else {
            sources[i] = output_root / e.file_path;
            e.file_path = "synthetic/" + *e.method + "/" + e.speaker_id + "/" + e.clip_id + ".wav";
        }
    }
    std::vector<char> copied(entries.size(), 0);
    parallel_for(entries.size(), cfg.parallelism, [&](std::size_t i) {
        const fs::path dst = out / entries[i].file_path;
        if (fs::exists(dst) && fs::file_size(dst) == fs::file_size(sources[i]) &&
            audio::read_file_bytes(dst) == audio::read_file_bytes(sources[i]))
            return;
        fs::create_directories(dst.parent_path());
        fs::path tmp = dst;
        tmp += ".tmp";
        fs::copy_file(sources[i], tmp, fs::copy_options::overwrite_existing);
        fs::rename(tmp, dst);
        copied[i] = 1;
    });
    for (char c : copied) (c ? r.new_outputs : r.reused)++;

    std::set<fs::path> expected{l.dataset_manifest()};
    for (const auto& e : entries) expected.insert((out / e.file_path).lexically_normal());
    std::size_t orphans = 0;
    std::vector<fs::path> dirs;
    for (auto it = fs::recursive_directory_iterator(out); it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_directory()) dirs.push_back(it->path());
        else if (!expected.contains(it->path().lexically_normal())) {
            fs::remove(it->path());
            ++orphans;
        }
    }
    std::sort(dirs.rbegin(), dirs.rend());
    for (const auto& dpath : dirs)
        if (fs::is_empty(dpath)) fs::remove(dpath);

    manifest::write_dataset_manifest(entries, l.dataset_manifest());
    const auto stats = evaluation::compute_stats(entries);
    r.counts = {{"bonafide", stats.bonafide_count}, {"synthetic", stats.synthetic_count},
                {"rejected", rejected}, {"engine_failed", failed}, {"orphans_removed", orphans}};
    return r;
}

// ------------------------------------------------------------------ stats

StageReport stats(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    const auto entries = read_manifest(l.dataset_manifest());
    const auto s = evaluation::compute_stats(entries);
    (update_text(l.root / "reports" / "dataset_stats.json", evaluation::to_json(s)) ? r.new_outputs
                                                                                      : r.reused)++;
    if (cfg.naturalness_scores) {
        require(*cfg.naturalness_scores);
        std::ifstream in(*cfg.naturalness_scores, std::ios::binary);
        evaluation::DatasetRef ref{"corpusforge", entries};
        auto n = evaluation::ingest_naturalness(in, std::span(&ref, 1));
        for (const auto& rj : n.rejects) r.rejects.push_back({"row " + std::to_string(rj.row), rj.reason});
        (update_text(l.root / "reports" / "naturalness.json", evaluation::to_json(n)) ? r.new_outputs
                                                                                      : r.reused)++;
    }
    r.counts = {{"speakers", s.speaker_count}, {"bonafide", s.bonafide_count},
                {"synthetic", s.synthetic_count}};
    return r;
}

// ----------------------------------------------------------------- verify

StageReport verify(const PipelineConfig&, const Layout& l) {
    StageReport r;
    const auto entries = read_manifest(l.dataset_manifest());
    const fs::path out = l.dataset_dir();
    std::set<fs::path> listed{l.dataset_manifest().lexically_normal()};
    for (const auto& e : entries) {
        const fs::path p = (out / e.file_path).lexically_normal();
        listed.insert(p);
        if (!fs::is_regular_file(p)) r.failures.push_back({e.clip_id, "missing file " + e.file_path});
    }
    std::size_t files = 0;
    for (const auto& f : fs::recursive_directory_iterator(out)) {
        if (!f.is_regular_file()) continue;
        ++files;
        if (!listed.contains(f.path().lexically_normal()))
            r.failures.push_back({rel(f.path(), out), "orphan file not in manifest"});
    }
    std::sort(r.failures.begin(), r.failures.end(),
              [](const Issue& a, const Issue& b) { return a.item < b.item; });
    r.counts = {{"entries", entries.size()}, {"files", files > 0 ? files - 1 : 0}};
    return r;
}

// ------------------------------------------------------------------ serve

std::atomic<evaluation::HttpService*> g_server{nullptr};

extern "C" void on_signal(int) {
    if (auto* s = g_server.load()) s->stop();
}

StageReport serve(const PipelineConfig& cfg, const Layout& l) {
    StageReport r;
    std::vector<ServeDataset> sets = cfg.serve.datasets;
    if (sets.empty()) sets.push_back({"corpusforge", l.dataset_manifest()});
    std::vector<evaluation::ServedDataset> served;
    for (const auto& s : sets)
        served.push_back({{s.dataset_id, read_manifest(s.manifest)}, s.manifest.parent_path()});
    const fs::path log = cfg.serve.log.value_or(l.root / "listening" / "responses.log");

    evaluation::ListeningService service(std::move(served), log, cfg.seed);
    evaluation::HttpService http(service);
    const int port = http.bind(cfg.serve.host, cfg.serve.port);
    if (port < 0) throw StageError("cannot bind " + cfg.serve.host + ":" + std::to_string(cfg.serve.port));
    std::cerr << "listening on http://" << cfg.serve.host << ":" << port << "\n";
    g_server = &http;
    auto prev_int = std::signal(SIGINT, on_signal);
    auto prev_term = std::signal(SIGTERM, on_signal);
    http.serve();
    std::signal(SIGINT, prev_int);
    std::signal(SIGTERM, prev_term);
    g_server = nullptr;
    r.counts = {{"datasets", sets.size()}, {"sessions", service.session_count()}};
    return r;
}

}  // namespace

StageReport run_stage(Stage stage, const PipelineConfig& cfg) {
    const Layout l{cfg.work_dir};
    fs::create_directories(l.root);
    const auto t0 = std::chrono::steady_clock::now();
    StageReport r;
    switch (stage) {
        case Stage::acquire: r = acquire(cfg, l); break;
        case Stage::diarize_filter: r = diarize_filter(cfg, l); break;
        case Stage::segment: r = segment(cfg, l); break;
        case Stage::gate: r = gate(cfg, l); break;
        case Stage::jobs: r = jobs(cfg, l); break;
        case Stage::assemble: r = assemble(cfg, l); break;
        case Stage::stats: r = stats(cfg, l); break;
        case Stage::verify: r = verify(cfg, l); break;
        case Stage::serve: r = serve(cfg, l); break;
    }
    r.stage = stage;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (stage != Stage::serve) {
        write_text(l.report(stage), r.to_json());
        write_text(l.timings(stage), json{{"stage", to_string(stage)}, {"seconds", r.seconds}}.dump(2) + "\n");
    }
    return r;
}

std::vector<StageReport> run_all(const PipelineConfig& cfg) {
    std::vector<StageReport> out;
    for (Stage s : kBatchStages) out.push_back(run_stage(s, cfg));
    return out;
}

}  // namespace corpusforge::pipeline
