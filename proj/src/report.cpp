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

#include "uniferg/report.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "uniferg/version.hpp"

namespace uniferg {

std::string fnv1a_hex(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return fmt::format("{:016x}", h);
}

std::string csv_cell(const Json& value)
{
    switch (value.type()) {
    case Json::value_t::null:
        return "";
    case Json::value_t::boolean:
        return value.get<bool>() ? "true" : "false";
    case Json::value_t::number_integer:
        return fmt::format("{}", value.get<std::int64_t>());
    case Json::value_t::number_unsigned:
        return fmt::format("{}", value.get<std::uint64_t>());
    case Json::value_t::number_float: {
        const double x = value.get<double>();
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        return fmt::format("{:.17g}", x);
    }
    case Json::value_t::string: {
        const auto& s = value.get_ref<const std::string&>();
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"')
                q += '"';
            q += c;
        }
        return q + '"';
    }
    default:
        return csv_cell(Json(value.dump()));
    }
}

void write_csv(std::ostream& out, const Report& report, const Provenance& prov)
{
    out << "# tool=uniferg\n# version=" << version << "\n# config_hash=" << prov.config_hash
        << "\n# seed=" << prov.seed << "\n# kind=" << report.kind << '\n';
    for (const auto& [key, value] : report.summary.items())
        out << "# " << key << '=' << csv_cell(value) << '\n';
    for (std::size_t i = 0; i < report.columns.size(); ++i)
        out << (i ? "," : "") << report.columns[i];
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Report& report, const Provenance& prov)
{
    Json j;
    j["tool"] = "uniferg";
    j["version"] = version;
    j["config_hash"] = prov.config_hash;
    j["seed"] = prov.seed;
    j["kind"] = report.kind;
    j["summary"] = report.summary;
    j["columns"] = report.columns;
    Json rows = Json::array();
    for (const auto& r : report.rows)
        rows.push_back(r);
    j["rows"] = std::move(rows);
    for (const auto& [key, value] : report.extra.items())
        j[key] = value;
    out << j.dump(2) << '\n';
}

}  // namespace uniferg
