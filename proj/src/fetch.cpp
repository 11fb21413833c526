// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/fetch.hpp"

#include "corpusforge/digest.hpp"
#include "corpusforge/process.hpp"

namespace corpusforge::audio {

namespace fs = std::filesystem;

bool is_remote(std::string_view media_ref) {
    auto pos = media_ref.find("://");
    if (pos == std::string_view::npos || pos == 0) return false;
    return media_ref.substr(0, pos) != "file";
}

fs::path MediaFetcher::materialize(const std::string& media_ref) const {
    if (!is_remote(media_ref)) {
        std::string_view ref = media_ref;
        if (ref.starts_with("file://")) ref.remove_prefix(7);
        fs::path p(ref);
        if (p.is_relative()) p = base_dir / p;
        if (!fs::exists(p)) throw FetchError("media not found: " + p.string());
        return p;
    }
    if (downloader.empty())
        throw FetchError("remote media_ref but no downloader configured: " + media_ref);
    fs::create_directories(scratch_dir);
    const fs::path out = scratch_dir / (sha256_hex(media_ref).substr(0, 16) + ".wav");
    if (fs::exists(out)) return out;

    const fs::path partial = fs::path(out).concat(".part");
    const auto cmd = expand_command(downloader, {{"url", media_ref}, {"output", partial.string()}});
    const int rc = run_command(cmd, fs::path(out).concat(".log"));
    if (rc != 0 || !fs::exists(partial))
        throw FetchError("downloader failed (exit " + std::to_string(rc) + ") for " + media_ref);
    fs::rename(partial, out);
    return out;
}

}  // namespace corpusforge::audio
