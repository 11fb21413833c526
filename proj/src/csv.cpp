// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/csv.hpp"

namespace corpusforge::csv {

namespace {

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::optional<Record> Reader::next() {
    std::string line;
    // Skip fully blank lines between records.
    do {
        if (!read_line(in_, line)) return std::nullopt;
        ++line_;
        if (first_) {
            first_ = false;
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        }
    } while (line.empty());

    Record rec;
    rec.line = line_;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    std::size_t i = 0;
    for (;;) {
        if (i == line.size()) {
            if (quoted) {
                // Embedded newline inside a quoted field.
                std::string more;
                if (!read_line(in_, more)) {
                    rec.error = "unterminated quoted field";
                    rec.fields.push_back(std::move(field));
                    return rec;
                }
                ++line_;
                field.push_back('\n');
                line = std::move(more);
                i = 0;
                continue;
            }
            rec.fields.push_back(std::move(field));
            return rec;
        }
        char c = line[i++];
        if (quoted) {
            if (c == '"') {
                if (i < line.size() && line[i] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                    after_quote = true;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == ',') {
            rec.fields.push_back(std::move(field));
            field.clear();
            after_quote = false;
        } else if (c == '"' && field.empty() && !after_quote) {
            quoted = true;
        } else if (after_quote || c == '"') {
            rec.error = "unexpected character after quoted field";
            rec.fields.push_back(std::move(field));
            return rec;
        } else {
            field.push_back(c);
        }
    }
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace corpusforge::csv
