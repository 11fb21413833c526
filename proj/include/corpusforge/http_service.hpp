// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "corpusforge/listening.hpp"

namespace corpusforge::evaluation {

// HTTP front of the listening test:
//   POST /sessions                          -> session view (no truth labels)
//   GET  /sessions/:id                      -> session view; labels once complete
//   POST /sessions/:id/trials/:trial_id     {"response": "real"|"fake"}
//   GET  /audio/:clip                       -> WAV bytes (opaque clip id)
//   GET  /reports/missrates                 -> MissRateReport
//   GET  /reports/stats                     -> DatasetStats per dataset
class HttpService {
public:
    explicit HttpService(ListeningService& service);
    ~HttpService();

    // Returns the bound port, or -1.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    bool serve();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Public session payload; exposed for tests that check what leaves the server.
std::string session_view_json(const TrialSession& s);

}  // namespace corpusforge::evaluation
