#pragma once

#include "dfx_ahp/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dfx_ahp::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
    std::vector<std::size_t> lines;  // 1-based source line of each row
};

// RFC 4180: comma separated, double-quoted fields, "" escapes a quote,
// quoted fields may span lines. CRLF and LF both end a record.
inline Table parse(std::string_view text, const std::string& source = "<csv>") {
    Table table;
    Row row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1, row_line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) {
            if (table.header.empty()) {
                table.header = std::move(row);
            } else {
                table.rows.push_back(std::move(row));
                table.lines.push_back(row_line);
            }
        }
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started) {
                    throw Error(ErrorCode::SchemaViolation, source + ":" + std::to_string(line) + ": stray quote",
                                {{"line", line}});
                }
                quoted = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r': break;
            case '\n':
                end_row();
                ++line;
                row_line = line;
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) throw Error(ErrorCode::SchemaViolation, source + ": unterminated quoted field", {{"line", line}});
    if (!field.empty() || !row.empty()) end_row();
    return table;
}

inline std::vector<std::string> split_list(std::string_view text, char sep = ';') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(sep, start);
        if (end == std::string_view::npos) end = text.size();
        auto item = text.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += quote(row[i]);
    }
    return out;
}

}  // namespace dfx_ahp::csv
