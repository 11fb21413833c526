// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/http_service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "corpusforge/wav.hpp"

namespace corpusforge::evaluation {

using json = nlohmann::json;

namespace {

json trial_view(const Trial& t, std::size_t position, std::size_t total, bool reveal) {
    json v = {{"trial_id", t.trial_id},
              {"audio_url", "/audio/" + ListeningService::public_clip_id(t.dataset_id, t.clip_id)},
              {"position", position},
              {"total", total},
              {"answered", t.response.has_value()}};
    if (reveal) {
        v["truth"] = to_string(t.truth);
        v["response"] = to_string(*t.response);
        v["correct"] = *t.response == t.truth;
        v["dataset_id"] = t.dataset_id;
    }
    return v;
}

json session_view(const TrialSession& s) {
    const bool done = s.complete();
    json trials = json::array();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < s.trials.size(); ++i) {
        trials.push_back(trial_view(s.trials[i], i + 1, s.trials.size(), done));
        if (done && *s.trials[i].response == s.trials[i].truth) ++correct;
    }
    json v = {{"session_id", s.session_id},
              {"participant_id", s.participant_id},
              {"complete", done},
              {"trials", std::move(trials)}};
    if (done) v["accuracy"] = s.trials.empty() ? 0.0 : static_cast<double>(correct) / s.trials.size();
    return v;
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void error(httplib::Response& res, int status, const std::string& message) {
    reply(res, status, json{{"error", message}});
}

}  // namespace

std::string session_view_json(const TrialSession& s) { return session_view(s).dump(); }

struct HttpService::Impl {
    ListeningService& service;
    httplib::Server server;

    explicit Impl(ListeningService& svc) : service(svc) {
        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            std::string participant;
            if (!req.body.empty()) {
                json body = json::parse(req.body, nullptr, false);
                if (body.is_discarded() || !body.is_object())
                    return error(res, 400, "body must be a JSON object");
                if (auto it = body.find("participant_id"); it != body.end() && it->is_string())
                    participant = it->get<std::string>();
            }
            if (participant.empty())
                participant = "anon-" + std::to_string(service.session_count() + 1);
            try {
                reply(res, 201, session_view(service.create_session(participant)));
            } catch (const std::exception& e) {
                error(res, 500, e.what());
            }
        });

        server.Get("/sessions/:id", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = service.session(req.path_params.at("id"));
            if (!s) return error(res, 404, "session not found");
            reply(res, 200, session_view(*s));
        });

        server.Post("/sessions/:id/trials/:trial",
                    [this](const httplib::Request& req, httplib::Response& res) {
            json body = json::parse(req.body, nullptr, false);
            std::optional<Truth> response;
            if (!body.is_discarded() && body.is_object())
                if (auto it = body.find("response"); it != body.end() && it->is_string())
                    response = parse_truth(it->get<std::string>());
            if (!response) return error(res, 400, "expected {\"response\": \"real\"|\"fake\"}");
            const auto& id = req.path_params.at("id");
            try {
                Trial t = service.respond(id, req.path_params.at("trial"), *response);
                auto s = service.session(id);
                std::size_t pos = 0, total = s->trials.size();
                for (std::size_t i = 0; i < total; ++i)
                    if (s->trials[i].trial_id == t.trial_id) pos = i + 1;
                json v = trial_view(t, pos, total, s->complete());
                v["complete"] = s->complete();
                reply(res, 200, v);
            } catch (const NotFound& e) {
                error(res, 404, e.what());
            } catch (const Conflict& e) {
                error(res, 409, e.what());
            } catch (const std::exception& e) {
                error(res, 500, e.what());
            }
        });

        server.Get("/audio/:clip", [this](const httplib::Request& req, httplib::Response& res) {
            auto path = service.audio_path(req.path_params.at("clip"));
            if (!path) return error(res, 404, "clip not found");
            try {
                auto bytes = audio::read_file_bytes(*path);
                res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
            } catch (const std::exception&) {
                error(res, 404, "clip audio unavailable");
            }
        });

        server.Get("/reports/missrates", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(to_json(service.miss_rates()), "application/json");
        });

        server.Get("/reports/stats", [this](const httplib::Request&, httplib::Response& res) {
            json out = json::object();
            for (const auto& [id, st] : service.stats()) out[id] = json::parse(to_json(st));
            reply(res, 200, json{{"datasets", std::move(out)}});
        });
    }
};

HttpService::HttpService(ListeningService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpService::serve() { return impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

}  // namespace corpusforge::evaluation
