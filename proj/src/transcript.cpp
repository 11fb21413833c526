// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/transcript.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "corpusforge/util.hpp"

namespace corpusforge::transcript {

using json = nlohmann::json;

namespace {

json parse_document(std::string_view document) {
    try {
        return json::parse(document);
    } catch (const json::parse_error& e) {
        throw TranscriptError(std::string("$: invalid JSON: ") + e.what());
    }
}

double number_at(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw TranscriptError(path + "." + key + ": missing");
    if (!it->is_number()) throw TranscriptError(path + "." + key + ": expected number");
    double v = it->get<double>();
    if (!std::isfinite(v)) throw TranscriptError(path + "." + key + ": not finite");
    return v;
}

std::string string_at(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw TranscriptError(path + "." + key + ": missing");
    if (!it->is_string()) throw TranscriptError(path + "." + key + ": expected string");
    return it->get<std::string>();
}

const json& array_at(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw TranscriptError(std::string("$.") + key + ": missing");
    if (!it->is_array()) throw TranscriptError(std::string("$.") + key + ": expected array");
    return *it;
}

}  // namespace

Transcript parse_transcript(std::string_view document) {
    const json doc = parse_document(document);
    if (!doc.is_object()) throw TranscriptError("$: expected object");

    Transcript t;
    t.utterance_duration = number_at(doc, "utterance_duration", "$");
    if (t.utterance_duration < 0) throw TranscriptError("$.utterance_duration: negative");

    const json& words = array_at(doc, "words");
    t.words.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string path = "$.words[" + std::to_string(i) + "]";
        const json& w = words[i];
        if (!w.is_object()) throw TranscriptError(path + ": expected object");
        Word word;
        word.text = std::string(trim(string_at(w, "text", path)));
        if (word.text.empty()) throw TranscriptError(path + ".text: empty");
        word.start = number_at(w, "start", path);
        word.end = number_at(w, "end", path);
        if (word.start < 0) throw TranscriptError(path + ".start: negative");
        if (!(word.end > word.start))
            throw TranscriptError(path + ".end: word " + std::to_string(i) + " ends before it starts");
        if (auto sp = w.find("speaker"); sp != w.end() && !sp->is_null()) {
            if (!sp->is_string()) throw TranscriptError(path + ".speaker: expected string");
            word.speaker = sp->get<std::string>();
        }
        if (!t.words.empty()) {
            const Word& prev = t.words.back();
            const std::string prev_path = "$.words[" + std::to_string(i - 1) + "]";
            if (word.start < prev.start)
                throw TranscriptError(path + ".start: earlier than " + prev_path + ".start");
            if (prev.end > word.start + kJitterTolerance)
                throw TranscriptError(prev_path + ".end: overlaps " + path + ".start");
        }
        t.words.push_back(std::move(word));
    }
    if (!t.words.empty() && t.utterance_duration < t.words.back().end)
        throw TranscriptError("$.utterance_duration: shorter than the last word's end");
    return t;
}

std::string to_json(const Transcript& t) {
    json words = json::array();
    for (const auto& w : t.words) {
        json o = {{"text", w.text}, {"start", w.start}, {"end", w.end}};
        if (w.speaker) o["speaker"] = *w.speaker;
        words.push_back(std::move(o));
    }
    json doc = {{"utterance_duration", t.utterance_duration}, {"words", std::move(words)}};
    return doc.dump(2) + "\n";
}

Diarization parse_diarization(std::string_view document) {
    const json doc = parse_document(document);
    if (!doc.is_object()) throw TranscriptError("$: expected object");
    Diarization d;
    const json& intervals = array_at(doc, "intervals");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const std::string path = "$.intervals[" + std::to_string(i) + "]";
        const json& iv = intervals[i];
        if (!iv.is_object()) throw TranscriptError(path + ": expected object");
        DiarizationInterval di;
        di.speaker = string_at(iv, "speaker", path);
        di.start = number_at(iv, "start", path);
        di.end = number_at(iv, "end", path);
        if (!(di.start < di.end)) throw TranscriptError(path + ".end: not after start");
        d.intervals.push_back(std::move(di));
    }
    if (auto tg = doc.find("target"); tg != doc.end() && !tg->is_null()) {
        if (!tg->is_string()) throw TranscriptError("$.target: expected string");
        d.target = tg->get<std::string>();
    }
    return d;
}

std::string to_json(const Diarization& d) {
    json intervals = json::array();
    for (const auto& iv : d.intervals)
        intervals.push_back({{"speaker", iv.speaker}, {"start", iv.start}, {"end", iv.end}});
    json doc = {{"intervals", std::move(intervals)}};
    if (d.target) doc["target"] = *d.target;
    return doc.dump(2) + "\n";
}

FilterResult filter_target_speaker(const Transcript& t,
                                   std::span<const DiarizationInterval> intervals,
                                   const std::string& target) {
    std::vector<std::pair<double, double>> own;
    for (const auto& iv : intervals)
        if (iv.speaker == target) own.emplace_back(iv.start, iv.end);

    FilterResult out;
    out.transcript.utterance_duration = t.utterance_duration;
    if (own.empty()) {
        out.warning = "no diarization intervals for target speaker '" + target + "'";
        return out;
    }
    std::sort(own.begin(), own.end());
    // reach[i] = furthest end among intervals 0..i, so a word is contained in
    // some interval iff the reach of those starting at or before it covers it.
    std::vector<double> reach(own.size());
    double best = own.front().second;
    for (std::size_t i = 0; i < own.size(); ++i) reach[i] = best = std::max(best, own[i].second);

    for (const auto& w : t.words) {
        auto it = std::upper_bound(own.begin(), own.end(), w.start,
                                   [](double s, const auto& iv) { return s < iv.first; });
        if (it == own.begin()) continue;
        const std::size_t idx = static_cast<std::size_t>(it - own.begin()) - 1;
        if (reach[idx] >= w.end) out.transcript.words.push_back(w);
    }
    return out;
}

double punctuation_density(const Transcript& t, std::u32string_view punctuation) {
    if (t.words.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& w : t.words) {
        auto cp = last_code_point(w.text);
        if (cp && punctuation.find(*cp) != std::u32string_view::npos) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(t.words.size());
}

}  // namespace corpusforge::transcript
