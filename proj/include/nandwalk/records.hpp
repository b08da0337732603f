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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace nandwalk {

inline constexpr int kSchemaVersion = 1;

/// Lossless, locale-independent double formatting ("%.17g") so identical
/// runs produce byte-identical bodies.
std::string format_double(double v);

/// Result table with a '#'-prefixed JSON metadata line on top. The body is
/// fully determined by the rows; timestamps live only in the header.
class CsvWriter {
  public:
    CsvWriter(std::ostream& out, nlohmann::json header, std::vector<std::string> columns);
    void write_row(const std::vector<std::string>& cells);

  private:
    std::ostream& out_;
    std::size_t columns_;
};

nlohmann::json make_record_header(const std::string& command, std::uint64_t seed);

struct CsvTable {
    nlohmann::json header;  // null when the file has no '#' line
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace nandwalk
