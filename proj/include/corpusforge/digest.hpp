// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace corpusforge {

// Incremental SHA-256, used to key content-addressed stage outputs.
class Digest {
public:
    Digest();
    ~Digest();
    Digest(Digest&&) noexcept;
    Digest& operator=(Digest&&) noexcept;

    Digest& update(std::span<const std::uint8_t> bytes);
    Digest& update(std::string_view text);
    // Length-prefixed, so ("ab","c") and ("a","bc") hash differently.
    Digest& field(std::string_view text);
    Digest& file(const std::filesystem::path& path);

    std::string hex();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(std::string_view text);

}  // namespace corpusforge
