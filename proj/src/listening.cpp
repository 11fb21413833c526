// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/listening.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "corpusforge/digest.hpp"

namespace corpusforge::evaluation {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string ListeningService::public_clip_id(const std::string& dataset_id,
                                             const std::string& clip_id) {
    return Digest().field(dataset_id).field(clip_id).hex().substr(0, 20);
}

ListeningService::ListeningService(std::vector<ServedDataset> datasets, fs::path log_path,
                                   std::uint64_t seed, Clock clock)
    : datasets_(std::move(datasets)),
      log_path_(std::move(log_path)),
      seed_(seed),
      clock_(clock ? std::move(clock) : Clock(utc_now_iso8601)) {
    for (const auto& d : datasets_) {
        refs_.push_back(d.ref);
        for (const auto& e : d.ref.entries)
            audio_[public_clip_id(d.ref.dataset_id, e.clip_id)] = d.audio_root / e.file_path;
    }
    // Fail early on datasets a session could not be drawn from.
    std::mt19937_64 probe(seed);
    (void)new_session("", refs_, probe);

    if (!log_path_.parent_path().empty()) fs::create_directories(log_path_.parent_path());
    replay();
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(sessions_.size())};
    rng_.seed(seq);
    // Terminate a torn final line so the next event starts on its own line.
    bool torn = false;
    if (std::ifstream tail(log_path_, std::ios::binary | std::ios::ate); tail && tail.tellg() > 0) {
        tail.seekg(-1, std::ios::end);
        torn = tail.get() != '\n';
    }
    log_.open(log_path_, std::ios::app);
    if (!log_) throw std::ios_base::failure("cannot open response log " + log_path_.string());
    if (torn) log_ << '\n';
}

void ListeningService::replay() {
    std::ifstream in(log_path_);
    if (!in) return;
    for (std::string line; std::getline(in, line);) {
        json ev = json::parse(line, nullptr, false);
        if (ev.is_discarded() || !ev.is_object()) continue;  // torn final write
        try {
            const auto kind = ev.at("event").get<std::string>();
            if (kind == "session") {
                TrialSession s;
                s.session_id = ev.at("session_id").get<std::string>();
                s.participant_id = ev.at("participant_id").get<std::string>();
                for (const auto& t : ev.at("trials")) {
                    Trial tr;
                    tr.trial_id = t.at("trial_id").get<std::string>();
                    tr.dataset_id = t.at("dataset_id").get<std::string>();
                    tr.clip_id = t.at("clip_id").get<std::string>();
                    tr.truth = parse_truth(t.at("truth").get<std::string>()).value();
                    s.trials.push_back(std::move(tr));
                }
                sessions_.emplace(s.session_id, std::move(s));
            } else if (kind == "response") {
                auto it = sessions_.find(ev.at("session_id").get<std::string>());
                auto resp = parse_truth(ev.at("response").get<std::string>());
                if (it == sessions_.end() || !resp) continue;
                try {
                    record_response(it->second, ev.at("trial_id").get<std::string>(), *resp,
                                    ev.at("at").get<std::string>());
                } catch (const std::runtime_error&) {
                }
            }
        } catch (const std::exception&) {
            continue;
        }
    }
}

void ListeningService::append(const std::string& line) {
    log_ << line << '\n';
    log_.flush();
    if (!log_) throw std::ios_base::failure("response log write failed");
}

TrialSession ListeningService::create_session(const std::string& participant_id) {
    std::lock_guard lock(mu_);
    TrialSession s = new_session(participant_id, refs_, rng_);
    while (sessions_.contains(s.session_id)) s = new_session(participant_id, refs_, rng_);

    json trials = json::array();
    for (const auto& t : s.trials)
        trials.push_back({{"trial_id", t.trial_id},
                          {"dataset_id", t.dataset_id},
                          {"clip_id", t.clip_id},
                          {"truth", to_string(t.truth)}});
    append(json{{"event", "session"},
                {"session_id", s.session_id},
                {"participant_id", s.participant_id},
                {"trials", std::move(trials)}}
               .dump());
    sessions_.emplace(s.session_id, s);
    return s;
}

std::optional<TrialSession> ListeningService::session(const std::string& session_id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
}

Trial ListeningService::respond(const std::string& session_id, const std::string& trial_id,
                                Truth response) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw NotFound("session '" + session_id + "' not found");
    // Validate against a copy so a failed log write leaves state untouched.
    TrialSession updated = it->second;
    const std::string at = clock_();
    Trial t = record_response(updated, trial_id, response, at);
    append(json{{"event", "response"},
                {"session_id", session_id},
                {"trial_id", trial_id},
                {"response", to_string(response)},
                {"at", at}}
               .dump());
    it->second = std::move(updated);
    return t;
}

MissRateReport ListeningService::miss_rates() const {
    std::vector<TrialSession> snapshot;
    {
        std::lock_guard lock(mu_);
        for (const auto& [id, s] : sessions_) snapshot.push_back(s);
    }
    return compute_miss_rates(snapshot);
}

std::map<std::string, DatasetStats> ListeningService::stats() const {
    std::map<std::string, DatasetStats> out;
    for (const auto& d : refs_) out[d.dataset_id] = compute_stats(d.entries);
    return out;
}

std::optional<fs::path> ListeningService::audio_path(const std::string& public_id) const {
    auto it = audio_.find(public_id);
    if (it == audio_.end()) return std::nullopt;
    return it->second;
}

std::size_t ListeningService::session_count() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

}  // namespace corpusforge::evaluation
