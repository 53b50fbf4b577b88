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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int status = uniferg::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string field(const std::string& csv, const std::string& key)
{
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# " + key + "=", 0) == 0)
            return line.substr(key.size() + 3);
    return {};
}

std::vector<std::vector<std::string>> rows(const std::string& csv)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("uniferg_test_" + name);
}

}  // namespace

TEST_CASE("gen writes the standard word")
{
    const auto r = run({"gen", "--set", "generator=golden:10", "--set", "depth=4"});
    CHECK(r.status == 0);
    CHECK(r.out == "10110\n");
    CHECK(run({"gen", "--set", "generator=fibonacci", "--set", "length=8"}).out == "01001010\n");
    const auto j = nlohmann::json::parse(run({"gen", "--format", "json", "--set", "depth=4"}).out);
    CHECK(j["word"] == "10110");
}

TEST_CASE("counter reproduces the separation")
{
    const auto r = run({"counter"});
    REQUIRE(r.status == 0);
    CHECK(std::stod(field(r.out, "gap_statistic")) >= 0.5);
    CHECK(rows(r.out).size() == 10);
    const auto j = nlohmann::json::parse(run({"counter", "--format", "json"}).out);
    CHECK(j["exact"][9]["len_sn"] == "42083634584154409");
    CHECK(j["summary"]["cross_checked_pairs"] == 60);
}

TEST_CASE("lyap at E = 3 with zero potential")
{
    const double expected = std::acosh(1.5);
    const auto r = run({"lyap", "--set", "E=3"});
    REQUIRE(r.status == 0);
    const auto table = rows(r.out);
    REQUIRE(table.size() == 1);
    CHECK(std::abs(std::stod(table[0][1]) - expected) < 1e-6);
    CHECK(std::abs(std::stod(table[0][1]) - 0.9624236501) < 1e-6);
}

TEST_CASE("every output carries provenance")
{
    for (const auto& cmd : {"rep", "lang", "freq", "means", "counter", "lyap", "ids", "voronoi"}) {
        std::vector<std::string> args{cmd, "--seed", "7"};
        if (std::string(cmd) == "ids")
            args.insert(args.end(), {"--set", "sizes=40", "--set", "offsets=2", "--set", "lambda=0"});
        if (std::string(cmd) == "rep")
            args.insert(args.end(), {"--set", "n=1:8"});
        const auto csv = run(args);
        REQUIRE(csv.status == 0);
        CHECK(field(csv.out, "version") == "0.1.0");
        CHECK(field(csv.out, "seed") == "7");
        CHECK(field(csv.out, "config_hash").size() == 16);
        args.insert(args.end(), {"--format", "json"});
        const auto j = nlohmann::json::parse(run(args).out);
        CHECK(j["seed"] == 7);
        CHECK(j["version"] == "0.1.0");
        CHECK(j["config_hash"] == field(csv.out, "config_hash"));
    }
}

TEST_CASE("identical configuration gives identical bytes")
{
    const std::vector<std::vector<std::string>> cases{
        {"voronoi", "--seed", "3", "--set", "lattice_side=8"},
        {"ids", "--set", "sizes=60,120", "--set", "offsets=4", "--set", "lambda=-2:3:11"},
        {"means", "--set", "function=lognorm:1.1", "--set", "potential=0,1", "--set", "n=1:12"},
        {"selftest", "--seed", "5", "--set", "trials=20"},
    };
    for (const auto& c : cases) {
        auto a = run(c);
        auto one = c, two = c;
        two.insert(two.end(), {"--threads", "3"});
        CHECK(a.out == run(one).out);
        CHECK(a.out == run(two).out);  // the thread count is not part of the result
        CHECK(a.status == 0);
    }
    const auto path = temp_file("det.csv");
    run({"rep", "--set", "n=1:10", "--out", path.string()});
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == run({"rep", "--set", "n=1:10"}).out);
    std::filesystem::remove(path);
}

TEST_CASE("configuration precedence")
{
    const auto path = temp_file("cfg.txt");
    {
        std::ofstream cfg(path);
        cfg << "# comment\n generator = fast:6 \nn = 1:4\nseed=11\n";
    }
    const auto file = run({"rep", "--config", path.string()});
    REQUIRE(file.status == 0);
    CHECK(rows(file.out).size() == 4);
    CHECK(field(file.out, "seed") == "11");
    CHECK(field(file.out, "generator") == "\"sturmian:2,4,8,16,32,64\"");  // quoted: contains commas
    const auto flags = run({"rep", "--config", path.string(), "--set", "n=2", "--seed", "12"});
    CHECK(rows(flags.out).size() == 1);
    CHECK(field(flags.out, "seed") == "12");
    CHECK(field(flags.out, "config_hash") != field(file.out, "config_hash"));
    {
        std::ofstream cfg(path);
        cfg << "colour = red\n";
    }
    const auto bad = run({"rep", "--config", path.string()});
    CHECK(bad.status == 2);
    std::filesystem::remove(path);
}

TEST_CASE("exit codes and one-line reasons")
{
    auto single_line = [](const Result& r) {
        return r.err.size() > 7 && r.err.rfind("error: ", 0) == 0 && r.err.find('\n') == r.err.size() - 1;
    };
    const auto unknown = run({"frobnicate"});
    CHECK(unknown.status == 2);
    CHECK(single_line(unknown));
    const auto bad_key = run({"rep", "--set", "bogus=1"});
    CHECK(bad_key.status == 2);
    CHECK(single_line(bad_key));
    const auto bad_number = run({"counter", "--set", "n_max=ten"});
    CHECK(bad_number.status == 2);
    const auto budget = run({"counter", "--set", "generator=fast:12", "--set", "n_max=12"});
    CHECK(budget.status == 3);
    CHECK(single_line(budget));
    CHECK(budget.err.find("reduce n_max to at most 10") != std::string::npos);
    CHECK(run({"counter", "--set", "generator=fibonacci"}).status == 2);
    CHECK(run({"lyap", "--set", "potential=0"}).status == 2);
    CHECK(run({"rep", "--cutoff", "1"}).status == 2);
    CHECK(run({"rep", "--format", "xml"}).status == 2);
    CHECK(run({"gen", "--set", "generator=golden:3", "--set", "depth=9"}).status == 2);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("voronoi cutoff override is a negative control")
{
    const auto full = run({"voronoi", "--set", "lattice_side=10", "--seed", "2"});
    CHECK(field(full.out, "locality_holds") == "true");
    const double r1 = std::stod(field(full.out, "r1"));
    const auto small = run({"voronoi", "--set", "lattice_side=10", "--seed", "2", "--cutoff", std::to_string(r1 / 2)});
    CHECK(field(small.out, "locality_holds") == "false");

    const auto pts = temp_file("pts.csv");
    {
        std::ofstream f(pts);
        f << "x,y\n";
        for (int i = 0; i <= 8; ++i)
            for (int j = 0; j <= 8; ++j)
                f << i << ',' << j << '\n';
    }
    const auto lat = run({"voronoi", "--set", "points=" + pts.string(), "--format", "json"});
    REQUIRE(lat.status == 0);
    const auto j = nlohmann::json::parse(lat.out);
    CHECK(j["summary"]["r0"] == 0.5);
    CHECK(j["cells"].size() == 81);
    CHECK(j["cells"][40]["vertices"].size() == 4);
    std::filesystem::remove(pts);
}

TEST_CASE("selftest passes")
{
    const auto r = run({"selftest", "--set", "trials=50"});
    CHECK(r.status == 0);
    CHECK(field(r.out, "failed") == "0");
    for (const auto& c : uniferg::cli::run_selftest(1, 20))
        CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
}
