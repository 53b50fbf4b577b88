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
#include <map>
#include <string>
#include <vector>

namespace uniferg::cli {

/// Exit statuses.
enum Status : int { ok = 0, validation = 2, budget = 3, invariant = 4 };

/// Resolved key=value settings of one subcommand. Defaults come from the
/// subcommand's table, then the --config file, then --set flags.
class Config {
public:
    Config(std::string command, std::map<std::string, std::string> defaults);

    /// Lines "key = value"; '#' starts a comment. Unknown keys are rejected.
    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value, const std::string& origin);

    const std::string& command() const noexcept { return command_; }
    const std::string& get(const std::string& key) const;
    bool has_value(const std::string& key) const { return !get(key).empty(); }
    /// "command=...\nkey=value\n..." over every key, sorted; hashes to config_hash.
    std::string canonical() const;

private:
    std::string command_;
    std::map<std::string, std::string> values_;
};

struct SelfCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The invariant battery behind `selftest`. Each check catches its own
/// exceptions and reports them as failures.
std::vector<SelfCheck> run_selftest(std::uint64_t seed, std::size_t trials);

/// Subcommand names with their default tables.
const std::map<std::string, std::map<std::string, std::string>>& command_table();

/// Parses args (without the program name), runs the subcommand and writes the
/// report to --out or `out`. Failures print one line "error: <kind>: <reason>"
/// to `err` and return the matching status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uniferg::cli
