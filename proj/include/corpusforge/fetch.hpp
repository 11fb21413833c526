// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace corpusforge::audio {

class FetchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// True for `scheme://...` references other than file://.
bool is_remote(std::string_view media_ref);

struct MediaFetcher {
    // External downloader, e.g. "yt-dlp -x --audio-format wav -o {output} {url}".
    // Must leave a WAV file at {output}. Empty disables remote refs.
    std::string downloader;
    std::filesystem::path base_dir;     // relative local refs resolve here
    std::filesystem::path scratch_dir;  // downloads land here, keyed by URL digest

    // Path of a local WAV for `media_ref`, downloading it first if remote.
    std::filesystem::path materialize(const std::string& media_ref) const;
};

}  // namespace corpusforge::audio
