// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corpusforge {

std::string shell_quote(std::string_view s);

// Replaces each `{name}` whose name is in `vars` with the shell-quoted value.
// Unknown placeholders are left untouched.
std::string expand_command(std::string_view tmpl, const std::map<std::string, std::string>& vars);

// Names of all `{name}` placeholders in a template, in order of appearance.
std::vector<std::string> placeholders(std::string_view tmpl);

// Runs `command` through /bin/sh. stdout and stderr go to `log` when given,
// otherwise to /dev/null. Returns the exit status, or -1 if the process
// could not be started or was killed by a signal.
int run_command(const std::string& command,
                const std::optional<std::filesystem::path>& log = std::nullopt);

}  // namespace corpusforge
