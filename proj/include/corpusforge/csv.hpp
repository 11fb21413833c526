// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace corpusforge::csv {

// One logical record. A quoted field may span several physical lines, so
// `line` is where the record starts.
struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;
    std::optional<std::string> error;  // set when quoting is malformed
};

// RFC 4180 reader. Accepts LF or CRLF line ends and a leading UTF-8 BOM.
// A malformed record is returned with `error` set and the reader resumes at
// the next physical line.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::optional<Record> next();

private:
    std::istream& in_;
    std::size_t line_ = 0;
    bool first_ = true;
};

std::string escape(const std::string& field);
void write_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace corpusforge::csv
