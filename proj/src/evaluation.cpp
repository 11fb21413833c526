// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "corpusforge/csv.hpp"
#include "corpusforge/util.hpp"

namespace corpusforge::evaluation {

using json = nlohmann::json;
using manifest::DatasetEntry;
using manifest::Label;

DatasetStats compute_stats(std::span<const DatasetEntry> entries) {
    DatasetStats s;
    double seconds = 0;
    for (const auto& e : entries) {
        auto& sp = s.per_speaker[e.speaker_id];
        if (e.label == Label::bonafide) {
            ++s.bonafide_count;
            ++sp.bonafide_count;
        } else {
            ++s.synthetic_count;
            ++sp.synthetic_count;
        }
        sp.duration_seconds += e.duration;
        seconds += e.duration;
    }
    s.speaker_count = s.per_speaker.size();
    s.total_duration_hours = seconds / 3600.0;
    return s;
}

namespace {

json stats_json(const DatasetStats& s) {
    json speakers = json::object();
    for (const auto& [id, sp] : s.per_speaker)
        speakers[id] = {{"bonafide", sp.bonafide_count},
                        {"synthetic", sp.synthetic_count},
                        {"duration_hours", sp.duration_seconds / 3600.0}};
    return {{"speaker_count", s.speaker_count},
            {"bonafide_count", s.bonafide_count},
            {"synthetic_count", s.synthetic_count},
            {"total_duration_hours", s.total_duration_hours},
            {"per_speaker", std::move(speakers)}};
}

double rounded(double v, int decimals) { return *parse_double(format_fixed(v, decimals)); }

}  // namespace

std::string to_json(const DatasetStats& s) { return stats_json(s).dump(2) + "\n"; }

NaturalnessReport ingest_naturalness(std::istream& scores, std::span<const DatasetRef> datasets) {
    csv::Reader reader(scores);
    auto header = reader.next();
    if (!header || header->error) throw ConfigError("naturalness scores: malformed header");
    std::optional<std::size_t> clip_col, score_col, dataset_col;
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
        auto name = trim(header->fields[i]);
        if (name == "clip_id") clip_col = i;
        if (name == "score") score_col = i;
        if (name == "dataset_id") dataset_col = i;
    }
    if (!clip_col || !score_col)
        throw ConfigError("naturalness scores: header needs clip_id and score");

    std::unordered_map<std::string, std::set<std::string>> clips;  // dataset -> clip ids
    for (const auto& d : datasets)
        for (const auto& e : d.entries) clips[d.dataset_id].insert(e.clip_id);

    NaturalnessReport r;
    std::map<std::string, double> sum;
    while (auto rec = reader.next()) {
        auto reject = [&](std::string why) { r.rejects.push_back({rec->line, std::move(why)}); };
        if (rec->error) {
            reject(*rec->error);
            continue;
        }
        const std::size_t need = std::max({*clip_col, *score_col, dataset_col.value_or(0)}) + 1;
        if (rec->fields.size() < need) {
            reject("too few fields");
            continue;
        }
        const std::string clip(trim(rec->fields[*clip_col]));
        std::optional<std::string> dataset;
        if (dataset_col) {
            std::string want(trim(rec->fields[*dataset_col]));
            if (clips[want].contains(clip)) dataset = want;
        } else {
            for (const auto& d : datasets)
                if (clips[d.dataset_id].contains(clip)) {
                    dataset = d.dataset_id;
                    break;
                }
        }
        if (!dataset) {
            reject("unknown clip_id '" + clip + "'");
            continue;
        }
        auto score = parse_double(rec->fields[*score_col]);
        if (!score) {
            reject("invalid score");
            continue;
        }
        if (*score < 1.0 || *score > 5.0) {
            reject("score out of range [1, 5]");
            continue;
        }
        sum[*dataset] += *score;
        ++r.count[*dataset];
    }
    for (const auto& [d, total] : sum) r.mean[d] = total / static_cast<double>(r.count[d]);
    return r;
}

std::string to_json(const NaturalnessReport& r) {
    json means = json::object();
    for (const auto& [d, m] : r.mean) means[d] = {{"mean", rounded(m, 2)}, {"count", r.count.at(d)}};
    json rejects = json::array();
    for (const auto& rj : r.rejects) rejects.push_back({{"row", rj.row}, {"reason", rj.reason}});
    return json{{"naturalness", std::move(means)}, {"rejects", std::move(rejects)}}.dump(2) + "\n";
}

std::string to_string(Truth t) { return t == Truth::real ? "real" : "fake"; }

std::optional<Truth> parse_truth(std::string_view s) {
    if (s == "real") return Truth::real;
    if (s == "fake") return Truth::fake;
    return std::nullopt;
}

bool TrialSession::complete() const {
    return std::all_of(trials.begin(), trials.end(), [](const Trial& t) { return t.response.has_value(); });
}

TrialSession new_session(const std::string& participant_id, std::span<const DatasetRef> datasets,
                         std::mt19937_64& rng) {
    if (datasets.empty()) throw ConfigError("listening test needs at least one dataset");
    TrialSession s;
    s.participant_id = participant_id;
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
        s.session_id = buf;
    }
    for (const auto& d : datasets) {
        for (Truth truth : {Truth::real, Truth::fake}) {
            const Label want = truth == Truth::real ? Label::bonafide : Label::synthetic;
            std::vector<const DatasetEntry*> cell;
            for (const auto& e : d.entries)
                if (e.label == want) cell.push_back(&e);
            if (cell.empty())
                throw ConfigError("dataset '" + d.dataset_id + "' has no " +
                                  manifest::to_string(want) + " clips");
            std::uniform_int_distribution<std::size_t> pick(0, cell.size() - 1);
            Trial t;
            t.dataset_id = d.dataset_id;
            t.clip_id = cell[pick(rng)]->clip_id;
            t.truth = truth;
            s.trials.push_back(std::move(t));
        }
    }
    std::shuffle(s.trials.begin(), s.trials.end(), rng);
    for (std::size_t i = 0; i < s.trials.size(); ++i)
        s.trials[i].trial_id = s.session_id + "-" + std::to_string(i + 1);
    return s;
}

const Trial& record_response(TrialSession& session, const std::string& trial_id, Truth response,
                             const std::string& timestamp) {
    auto it = std::find_if(session.trials.begin(), session.trials.end(),
                           [&](const Trial& t) { return t.trial_id == trial_id; });
    if (it == session.trials.end())
        throw NotFound("trial '" + trial_id + "' not in session '" + session.session_id + "'");
    if (it->response) throw Conflict("trial '" + trial_id + "' already answered");
    it->response = response;
    it->responded_at = timestamp;
    return *it;
}

MissRateReport compute_miss_rates(std::span<const TrialSession> sessions) {
    MissRateReport r;
    std::set<std::string> participants;
    for (const auto& s : sessions) {
        participants.insert(s.participant_id);
        for (const auto& t : s.trials) {
            auto& d = r.per_dataset[t.dataset_id];
            if (!t.response) continue;
            if (t.truth == Truth::fake) {
                ++d.fake_answered;
                if (*t.response == Truth::real) ++d.fake_missed;
            } else {
                ++d.real_answered;
                if (*t.response == Truth::fake) ++d.real_missed;
            }
        }
    }
    for (auto& [id, d] : r.per_dataset) {
        if (d.fake_answered)
            d.fake_miss_rate = 100.0 * static_cast<double>(d.fake_missed) / static_cast<double>(d.fake_answered);
        if (d.real_answered)
            d.real_miss_rate = 100.0 * static_cast<double>(d.real_missed) / static_cast<double>(d.real_answered);
    }
    r.n_participants = participants.size();
    return r;
}

std::string to_json(const MissRateReport& r) {
    json per = json::object();
    for (const auto& [id, d] : r.per_dataset) {
        per[id] = {{"fake_miss_rate", d.fake_miss_rate ? json(rounded(*d.fake_miss_rate, 1)) : json()},
                   {"real_miss_rate", d.real_miss_rate ? json(rounded(*d.real_miss_rate, 1)) : json()},
                   {"fake_answered", d.fake_answered},
                   {"fake_missed", d.fake_missed},
                   {"real_answered", d.real_answered},
                   {"real_missed", d.real_missed}};
    }
    return json{{"datasets", std::move(per)}, {"n_participants", r.n_participants}}.dump(2) + "\n";
}

}  // namespace corpusforge::evaluation
