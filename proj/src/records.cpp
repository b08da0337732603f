// Copyright 2026 The nandwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nandwalk/records.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nandwalk {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, nlohmann::json header,
                     std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
    out_ << "# " << header.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    }
    out_ << "\n";
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: cell count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
    }
    out_ << "\n";
}

nlohmann::json make_record_header(const std::string& command, std::uint64_t seed) {
    nlohmann::json h;
    h["schema_version"] = kSchemaVersion;
    h["command"] = command;
    h["seed"] = seed;
    h["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    return h;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.substr(1);
            if (table.header.is_null() && !body.empty()) {
                table.header = nlohmann::json::parse(body, nullptr, false);
                if (table.header.is_discarded()) table.header = nullptr;
            }
            continue;
        }
        if (!have_columns) {
            table.columns = split_csv_line(line);
            have_columns = true;
        } else {
            table.rows.push_back(split_csv_line(line));
        }
    }
    return table;
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    std::size_t idx = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            idx = i;
            break;
        }
    }
    if (idx == columns.size()) throw std::invalid_argument("no such column: " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (idx >= row.size()) throw std::invalid_argument("short row in column " + name);
        out.push_back(std::stod(row[idx]));
    }
    return out;
}

}  // namespace nandwalk
