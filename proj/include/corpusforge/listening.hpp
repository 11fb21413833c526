// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "corpusforge/evaluation.hpp"

namespace corpusforge::evaluation {

struct ServedDataset {
    DatasetRef ref;
    std::filesystem::path audio_root;  // entry.file_path is relative to this
};

// Listening-test state. Sessions and responses are persisted as an
// append-only JSON-lines log that is replayed on construction. All public
// members are safe to call concurrently.
class ListeningService {
public:
    using Clock = std::function<std::string()>;

    ListeningService(std::vector<ServedDataset> datasets, std::filesystem::path log_path,
                     std::uint64_t seed, Clock clock = {});

    TrialSession create_session(const std::string& participant_id);
    std::optional<TrialSession> session(const std::string& session_id) const;
    Trial respond(const std::string& session_id, const std::string& trial_id, Truth response);

    MissRateReport miss_rates() const;
    std::map<std::string, DatasetStats> stats() const;

    // Opaque per-clip id used in audio URLs, so names never hint at labels.
    static std::string public_clip_id(const std::string& dataset_id, const std::string& clip_id);
    std::optional<std::filesystem::path> audio_path(const std::string& public_id) const;

    std::size_t session_count() const;

private:
    void replay();
    void append(const std::string& line);

    std::vector<ServedDataset> datasets_;
    std::vector<DatasetRef> refs_;
    std::map<std::string, std::filesystem::path> audio_;  // public id -> file
    std::filesystem::path log_path_;
    std::uint64_t seed_;
    Clock clock_;

    mutable std::mutex mu_;
    std::map<std::string, TrialSession> sessions_;
    std::mt19937_64 rng_;
    std::ofstream log_;
};

std::string utc_now_iso8601();

}  // namespace corpusforge::evaluation
