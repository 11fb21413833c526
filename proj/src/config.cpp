// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corpusforge/util.hpp"

namespace corpusforge::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::optional<std::string> getenv_lookup(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

namespace {

std::u32string decode_utf8(const std::string& s) {
    std::u32string out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i + 1;
        while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
        if (auto cp = last_code_point(s.substr(i, j - i))) out.push_back(*cp);
        i = j;
    }
    return out;
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": missing or wrong type");
    }
}

template <class T>
void maybe(const json& obj, const char* key, const std::string& where, T& out) {
    if (obj.contains(key)) out = get<T>(obj, key, where);
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal();
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError(what + ": not an unsigned integer: '" + s + "'");
    return v;
}

std::chrono::year_month_day date_of(const json& obj, const char* key, const std::string& where) {
    auto text = get<std::string>(obj, key, where);
    auto d = manifest::parse_date(text);
    if (!d) throw ConfigError(where + "." + key + ": invalid date '" + text + "'");
    return *d;
}

}  // namespace

PipelineConfig parse_config(std::string_view document, const fs::path& base_dir, const EnvLookup& env) {
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw ConfigError("config: not a JSON object");

    PipelineConfig cfg;
    cfg.work_dir = resolve(base_dir, doc.value("work_dir", std::string("work")));
    cfg.sources = resolve(base_dir, get<std::string>(doc, "sources", "$"));
    cfg.transcripts_dir = resolve(base_dir, get<std::string>(doc, "transcripts_dir", "$"));
    if (doc.contains("diarization_dir"))
        cfg.diarization_dir = resolve(base_dir, get<std::string>(doc, "diarization_dir", "$"));
    maybe(doc, "downloader", "$", cfg.downloader);

    if (doc.contains("roster"))
        for (const auto& s : get<std::vector<std::string>>(doc, "roster", "$")) cfg.rules.roster.insert(s);
    if (doc.contains("date_range")) {
        const auto& r = doc["date_range"];
        if (r.contains("from")) cfg.rules.earliest = date_of(r, "from", "$.date_range");
        if (r.contains("to")) cfg.rules.latest = date_of(r, "to", "$.date_range");
    }

    if (doc.contains("segmentation")) {
        const auto& s = doc["segmentation"];
        const std::string where = "$.segmentation";
        auto strategy = s.value("strategy", std::string("transcript"));
        if (strategy == "transcript") cfg.strategy = Strategy::transcript;
        else if (strategy == "pause") cfg.strategy = Strategy::pause;
        else if (strategy == "fixed") cfg.strategy = Strategy::fixed;
        else throw ConfigError(where + ".strategy: unknown '" + strategy + "'");
        auto& p = cfg.segmentation;
        maybe(s, "target_duration", where, p.target_duration);
        maybe(s, "threshold", where, p.threshold);
        maybe(s, "pad", where, p.pad);
        maybe(s, "pause_threshold", where, p.pause_threshold);
        maybe(s, "fixed_interval", where, p.fixed_interval);
        if (s.contains("punctuation")) p.punctuation = decode_utf8(get<std::string>(s, "punctuation", where));
    }
    try {
        cfg.segmentation.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("$.segmentation: ") + e.what());
    }

    cfg.gate = quality::QualityGateConfig::from(cfg.segmentation);
    if (doc.contains("quality")) {
        const auto& q = doc["quality"];
        maybe(q, "min_snr_db", "$.quality", cfg.gate.min_snr_db);
        maybe(q, "max_silence_ratio", "$.quality", cfg.gate.max_silence_ratio);
        maybe(q, "min_duration", "$.quality", cfg.gate.min_duration);
        maybe(q, "max_duration", "$.quality", cfg.gate.max_duration);
    }

    if (doc.contains("engines")) {
        if (!doc["engines"].is_array()) throw ConfigError("$.engines: expected an array");
        std::size_t i = 0;
        for (const auto& e : doc["engines"]) {
            const std::string where = "$.engines[" + std::to_string(i++) + "]";
            synthesis::EngineSpec spec;
            spec.engine_id = get<std::string>(e, "engine_id", where);
            auto regime = get<std::string>(e, "regime", where);
            auto r = synthesis::parse_regime(regime);
            if (!r) throw ConfigError(where + ".regime: unknown '" + regime + "'");
            spec.regime = *r;
            spec.command_template = get<std::string>(e, "command", where);
            cfg.engines.push_back(std::move(spec));
        }
    }
    try {
        synthesis::validate_engines(cfg.engines);
    } catch (const synthesis::SynthesisError& e) {
        throw ConfigError(std::string("$.engines: ") + e.what());
    }

    maybe(doc, "parallelism", "$", cfg.parallelism);
    maybe(doc, "seed", "$", cfg.seed);
    if (doc.contains("naturalness_scores"))
        cfg.naturalness_scores = resolve(base_dir, get<std::string>(doc, "naturalness_scores", "$"));

    if (doc.contains("serve")) {
        const auto& s = doc["serve"];
        maybe(s, "host", "$.serve", cfg.serve.host);
        maybe(s, "port", "$.serve", cfg.serve.port);
        if (s.contains("log")) cfg.serve.log = resolve(base_dir, get<std::string>(s, "log", "$.serve"));
        if (s.contains("datasets"))
            for (const auto& d : s["datasets"])
                cfg.serve.datasets.push_back({get<std::string>(d, "dataset_id", "$.serve.datasets[]"),
                                              resolve(base_dir, get<std::string>(d, "manifest", "$.serve.datasets[]"))});
    }

    if (auto v = env("CORPUSFORGE_WORK_DIR")) cfg.work_dir = resolve(fs::current_path(), *v);
    if (auto v = env("CORPUSFORGE_SEED")) cfg.seed = parse_u64(*v, "CORPUSFORGE_SEED");
    if (auto v = env("CORPUSFORGE_PARALLELISM"))
        cfg.parallelism = static_cast<int>(parse_u64(*v, "CORPUSFORGE_PARALLELISM"));
    if (auto v = env("CORPUSFORGE_DOWNLOADER")) cfg.downloader = *v;
    if (auto v = env("CORPUSFORGE_SERVE_PORT"))
        cfg.serve.port = static_cast<int>(parse_u64(*v, "CORPUSFORGE_SERVE_PORT"));
    return cfg;
}

PipelineConfig load_config(const fs::path& path, const EnvLookup& env) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), fs::absolute(path).parent_path(), env);
}

void validate(const PipelineConfig& cfg) {
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (!fs::is_regular_file(cfg.sources)) throw ConfigError("sources not found: " + cfg.sources.string());
    if (!fs::is_directory(cfg.transcripts_dir))
        throw ConfigError("transcripts_dir not found: " + cfg.transcripts_dir.string());
    if (cfg.diarization_dir && !fs::is_directory(*cfg.diarization_dir))
        throw ConfigError("diarization_dir not found: " + cfg.diarization_dir->string());
    if (cfg.naturalness_scores && !fs::is_regular_file(*cfg.naturalness_scores))
        throw ConfigError("naturalness_scores not found: " + cfg.naturalness_scores->string());
    if (cfg.serve.port < 0 || cfg.serve.port > 65535) throw ConfigError("serve.port out of range");
    try {
        cfg.gate.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("quality: ") + e.what());
    }
}

}  // namespace corpusforge::pipeline
