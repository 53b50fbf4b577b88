// Copyright 2026 The uniferg Authors
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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace uniferg {

using Json = nlohmann::ordered_json;

/// A result table with scalar summary fields. `extra` is carried only by the
/// JSON form (exact counts, word lists, polygons).
struct Report {
    std::string kind;
    Json summary = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
    Json extra = Json::object();
};

/// What every output file records about the run that produced it.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
};

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

/// Scalars as CSV text: doubles with 17 significant digits, strings quoted
/// only when they contain a comma, quote or newline.
std::string csv_cell(const Json& value);

/// "# key=value" lines (tool, version, config_hash, seed, kind, then the
/// summary), a header line and the rows.
void write_csv(std::ostream& out, const Report& report, const Provenance& prov);
/// One object with the same metadata, "summary", "columns", "rows" and the
/// members of `extra`.
void write_json(std::ostream& out, const Report& report, const Provenance& prov);

}  // namespace uniferg
