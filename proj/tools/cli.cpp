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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <new>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "uniferg/counterexample.hpp"
#include "uniferg/errors.hpp"
#include "uniferg/ergodic.hpp"
#include "uniferg/geometry.hpp"
#include "uniferg/parallel.hpp"
#include "uniferg/report.hpp"
#include "uniferg/repetitivity.hpp"
#include "uniferg/spectral.hpp"
#include "uniferg/version.hpp"
#include "uniferg/words.hpp"

namespace uniferg::cli {

namespace {

std::string trim(std::string s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

const std::map<std::string, std::map<std::string, std::string>>& command_table()
{
    static const std::map<std::string, std::map<std::string, std::string>> table{
        {"gen", {{"generator", "golden:60"}, {"depth", ""}, {"length", "1000"}}},
        {"lang", {{"generator", "golden:60"}, {"n", "1:16"}, {"safety", "4"}}},
        {"rep", {{"generator", "golden:60"}, {"n", "1:64"}}},
        {"freq", {{"generator", "golden:60"}, {"word", "0"}, {"L", "4,16,64,256,1024"}, {"length", "100000"}}},
        {"means",
         {{"generator", "golden:60"},
          {"function", "letter:0"},
          {"potential", ""},
          {"n", "1:32"},
          {"safety", "4"},
          {"allow_non_lr", "false"}}},
        {"counter", {{"generator", "fast:10"}, {"n_max", "10"}, {"cross_check", "true"}}},
        {"lyap", {{"generator", "golden:60"}, {"potential", ""}, {"E", "3"}, {"n_max", ""}}},
        {"ids",
         {{"generator", "golden:60"},
          {"potential", "0,1"},
          {"lambda", "-2.5:3.5:121"},
          {"sizes", "200,1000"},
          {"offsets", "20"}}},
        {"voronoi",
         {{"points", ""},
          {"domain", ""},
          {"lattice_side", "12"},
          {"rho", "0.3"},
          {"trials", "100"},
          {"cutoff", ""}}},
        {"selftest", {{"trials", "200"}}},
    };
    return table;
}

Config::Config(std::string command, std::map<std::string, std::string> defaults)
    : command_(std::move(command)), values_(std::move(defaults))
{
    values_.emplace("seed", "0");
}

void Config::load_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError(fmt::format("cannot open config file {}", path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError(fmt::format("{}:{}: expected key = value", path, lineno));
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), fmt::format("{}:{}", path, lineno));
    }
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin)
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw PreconditionError(fmt::format("{}: unknown key \"{}\" for {}", origin, key, command_));
    it->second = value;
}

const std::string& Config::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw PreconditionError(fmt::format("no key \"{}\" for {}", key, command_));
    return it->second;
}

std::string Config::canonical() const
{
    std::string s = "command=" + command_ + "\n";
    for (const auto& [k, v] : values_)
        s += k + "=" + v + "\n";
    return s;
}

namespace {

struct Context {
    const Config& cfg;
    std::uint64_t seed;
    unsigned threads;
};

std::uint64_t to_uint(const std::string& key, const std::string& text)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw PreconditionError(fmt::format("{}: \"{}\" is not a nonnegative integer", key, text));
    return v;
}

double to_real(const std::string& key, const std::string& text)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw PreconditionError(fmt::format("{}: \"{}\" is not a number", key, text));
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        parts.push_back(trim(item));
    return parts;
}

std::uint64_t uint_key(const Config& c, const std::string& key) { return to_uint(key, c.get(key)); }
double real_key(const Config& c, const std::string& key) { return to_real(key, c.get(key)); }

bool flag_key(const Config& c, const std::string& key)
{
    const auto& v = c.get(key);
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw PreconditionError(fmt::format("{}: expected true or false, got \"{}\"", key, v));
}

/// "1,4,9" and inclusive ranges "a:b", mixed.
std::vector<std::size_t> size_list(const Config& c, const std::string& key)
{
    std::vector<std::size_t> out;
    for (const auto& item : split(c.get(key), ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(to_uint(key, item));
            continue;
        }
        const auto a = to_uint(key, item.substr(0, colon)), b = to_uint(key, item.substr(colon + 1));
        if (a > b || b - a > 1'000'000)
            throw PreconditionError(fmt::format("{}: bad range \"{}\"", key, item));
        for (auto n = a; n <= b; ++n)
            out.push_back(n);
    }
    if (out.empty())
        throw PreconditionError(fmt::format("{}: empty list", key));
    return out;
}

/// "lo:hi:count" (evenly spaced, inclusive) or a comma list.
std::vector<double> real_list(const Config& c, const std::string& key)
{
    const auto& text = c.get(key);
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw PreconditionError(fmt::format("{}: expected lo:hi:count", key));
        const double lo = to_real(key, parts[0]), hi = to_real(key, parts[1]);
        const auto count = to_uint(key, parts[2]);
        if (count == 0 || count > 10'000'000)
            throw PreconditionError(fmt::format("{}: bad point count", key));
        for (std::uint64_t i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        return out;
    }
    for (const auto& item : split(text, ','))
        out.push_back(to_real(key, item));
    if (out.empty())
        throw PreconditionError(fmt::format("{}: empty list", key));
    return out;
}

std::string rational_text(const Rational& r)
{
    return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

PotentialMap potential_key(const Config& c, const Generator& gen)
{
    if (!c.has_value("potential"))
        return PotentialMap::zero(alphabet_size(gen));
    auto pot = PotentialMap::parse(c.get("potential"));
    if (pot.alphabet_size() < alphabet_size(gen))
        throw PreconditionError(fmt::format("potential covers {} letters, generator uses {}", pot.alphabet_size(),
                                            alphabet_size(gen)));
    return pot;
}

const SturmianSpec& sturmian_only(const Generator& gen, const std::string& what)
{
    const auto* spec = std::get_if<SturmianSpec>(&gen);
    if (!spec)
        throw PreconditionError(what + " needs a Sturmian generator");
    return *spec;
}

struct Output {
    Report report;
    std::optional<Word> word;  ///< gen in csv format writes a plain word file
    int status = ok;
};

Output cmd_gen(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    Word w;
    if (ctx.cfg.has_value("depth")) {
        const auto d = uint_key(ctx.cfg, "depth");
        if (const auto* spec = std::get_if<SturmianSpec>(&gen))
            w = sturmian_words(*spec, d)[static_cast<int>(d)];
        else {
            const auto& sub = std::get<SubstitutionGenerator>(gen);
            w = substitution_iterate(sub.rule, Letter{sub.seed, std::nullopt}, d);
        }
    } else {
        w = generator_prefix(gen, uint_key(ctx.cfg, "length"));
    }
    Output o;
    o.report.kind = "gen";
    o.report.summary["generator"] = describe(gen);
    o.report.summary["length"] = w.size();
    o.report.extra["word"] = w.to_digits();
    o.word = std::move(w);
    return o;
}

Output cmd_lang(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    const double safety = real_key(ctx.cfg, "safety");
    Output o;
    auto& r = o.report;
    r.kind = "lang";
    r.summary["generator"] = describe(gen);
    r.columns = {"n", "complexity", "saturated", "source_length"};
    Json members = Json::object();
    for (auto n : size_list(ctx.cfg, "n")) {
        const auto s = language_sample(gen, n, safety);
        r.rows.push_back({n, s.members.size(), s.saturated, s.source_prefix_length});
        Json list = Json::array();
        for (const auto& m : s.members)
            list.push_back(m.to_digits());
        members[std::to_string(n)] = std::move(list);
    }
    r.extra["members"] = std::move(members);
    return o;
}

Output cmd_rep(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    RepetitivityOptions opts;
    opts.threads = ctx.threads;
    const auto rep = lr_constant_estimate(gen, size_list(ctx.cfg, "n"), opts);
    Output o;
    auto& r = o.report;
    r.kind = "rep";
    r.summary["generator"] = describe(gen);
    r.summary["lr_certified"] = is_lr_certified(gen);
    r.summary["max_ratio"] = rep.max_ratio;
    r.summary["window_source_length"] = rep.window_source_length;
    r.columns = {"n", "R", "ratio"};
    for (const auto& e : rep.entries)
        r.rows.push_back({e.n, e.R, e.ratio});
    return o;
}

Output cmd_freq(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    const auto v = Word::from_digits(ctx.cfg.get("word"));
    const auto length = uint_key(ctx.cfg, "length");
    const auto Ls = size_list(ctx.cfg, "L");
    if (*std::max_element(Ls.begin(), Ls.end()) > length)
        throw PreconditionError("every L must be at most length");
    const auto w = generator_prefix(gen, length);
    Output o;
    auto& r = o.report;
    r.kind = "freq";
    r.summary["generator"] = describe(gen);
    r.summary["word"] = v.to_digits();
    r.summary["source_length"] = w.size();
    r.columns = {"L", "max", "min", "gap"};
    for (auto L : Ls) {
        const auto f = frequency_spread(w, v, L);
        r.rows.push_back({f.L, f.max_freq, f.min_freq, f.gap});
    }
    return o;
}

SubadditiveFn function_key(const Config& c, const Generator& gen)
{
    const auto& text = c.get("function");
    const auto colon = text.find(':');
    const auto kind = text.substr(0, colon);
    const auto arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    if (kind == "letter")
        return letter_count(static_cast<Symbol>(to_uint("function", arg)));
    if (kind == "length")
        return word_length();
    if (kind == "weighted") {
        std::vector<double> w;
        for (const auto& item : split(arg, ','))
            w.push_back(to_real("function", item));
        return weighted_letter_count(std::move(w));
    }
    if (kind == "lognorm")
        return log_norm_function(to_real("function", arg), potential_key(c, gen));
    if (kind == "neg_g") {
        const auto& spec = sturmian_only(gen, "neg_g");
        return negative_g(GConfig(spec, spec.depth()));
    }
    throw PreconditionError(fmt::format("function: unknown \"{}\" (letter:<a>, length, weighted:<w,..>, "
                                        "lognorm:<E>, neg_g)",
                                        text));
}

Output cmd_means(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    const auto F = function_key(ctx.cfg, gen);
    ConvergenceOptions opts;
    opts.allow_non_lr = flag_key(ctx.cfg, "allow_non_lr");
    opts.safety_factor = real_key(ctx.cfg, "safety");
    opts.threads = ctx.threads;
    const auto m = uniform_convergence_report(F, gen, size_list(ctx.cfg, "n"), opts);
    Output o;
    auto& r = o.report;
    r.kind = "means";
    r.summary["generator"] = m.generator;
    r.summary["function"] = m.function;
    r.summary["limit_estimate"] = m.limit_estimate;
    r.summary["fekete_limit"] = m.fbar;
    r.summary["fekete_argmin_n"] = m.fbar_n;
    r.columns = {"n", "Fplus", "Fminus", "gap", "argmax", "argmin"};
    for (const auto& e : m.entries)
        r.rows.push_back({e.n, e.fplus, e.fminus, e.gap, e.argmax.to_digits(), e.argmin.to_digits()});
    return o;
}

Output cmd_counter(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    const auto& spec = sturmian_only(gen, "counter");
    DemoOptions opts;
    opts.cross_check = flag_key(ctx.cfg, "cross_check");
    const auto rep = separation_demo(spec, uint_key(ctx.cfg, "n_max"), opts);
    Output o;
    auto& r = o.report;
    r.kind = "counter";
    r.summary["spec"] = spec.to_string();
    r.summary["n_max"] = rep.n_max;
    r.summary["gap_statistic"] = rep.gap_statistic ? Json(*rep.gap_statistic) : Json();
    r.summary["gap_exact"] = rep.gap_exact ? Json(rational_text(*rep.gap_exact)) : Json();
    r.summary["gbar_estimate"] = rep.gbar_estimate;
    r.summary["coefficient_sum"] = rep.coefficient_sum;
    r.summary["cross_checked_pairs"] = rep.cross_checked_pairs;
    std::string tail;
    for (auto n : rep.tail)
        tail += (tail.empty() ? "" : " ") + std::to_string(n);
    r.summary["tail"] = tail;
    r.columns = {"n", "ratio_sn", "ratio_concat"};
    Json exact = Json::array();
    for (const auto& row : rep.rows) {
        r.rows.push_back({row.n, to_double(row.ratio_sn), to_double(row.ratio_concat)});
        exact.push_back({{"n", row.n},
                         {"g_sn", row.g_sn.str()},
                         {"g_concat", row.g_concat.str()},
                         {"len_sn", row.len_sn.str()},
                         {"len_concat", row.len_concat.str()},
                         {"ratio_sn", rational_text(row.ratio_sn)},
                         {"ratio_concat", rational_text(row.ratio_concat)},
                         {"lower_bound_holds", row.lower_bound_holds},
                         {"upper_bound_holds", row.upper_bound_holds ? Json(*row.upper_bound_holds) : Json()},
                         {"equality_holds", row.equality_holds}});
    }
    r.extra["exact"] = std::move(exact);
    return o;
}

Output cmd_lyap(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    const auto pot = potential_key(ctx.cfg, gen);
    const auto energies = real_list(ctx.cfg, "E");
    // A constant potential only needs prefix lengths, so a much longer range is cheap.
    const std::size_t n_max = ctx.cfg.has_value("n_max") ? uint_key(ctx.cfg, "n_max")
                              : pot.is_constant()          ? std::size_t{1} << 20
                                                           : std::size_t{4096};
    std::vector<LyapunovResult> res(energies.size());
    parallel_for(energies.size(), ctx.threads,
                 [&](std::size_t i) { res[i] = lyapunov(energies[i], gen, pot, n_max); });
    Output o;
    auto& r = o.report;
    r.kind = "lyap";
    r.summary["generator"] = describe(gen);
    r.summary["potential"] = pot.to_string();
    r.columns = {"E", "gamma", "n_max", "gap_at_n_max"};
    Json detail = Json::array();
    for (const auto& x : res) {
        r.rows.push_back({x.E, x.gamma, x.n_max, x.gap_at_n_max});
        detail.push_back({{"E", x.E}, {"argmin_n", x.argmin_n}, {"constant_potential", x.constant_potential}});
    }
    r.extra["detail"] = std::move(detail);
    return o;
}

Output cmd_ids(const Context& ctx)
{
    const auto gen = parse_generator(ctx.cfg.get("generator"));
    const auto pot = potential_key(ctx.cfg, gen);
    const auto rep = ids(gen, pot, real_list(ctx.cfg, "lambda"), size_list(ctx.cfg, "sizes"),
                         uint_key(ctx.cfg, "offsets"), ctx.threads);
    Output o;
    auto& r = o.report;
    r.kind = "ids";
    r.summary["generator"] = describe(gen);
    r.summary["potential"] = pot.to_string();
    r.summary["prefix_length"] = rep.prefix_length;
    for (std::size_t s = 0; s < rep.sizes.size(); ++s)
        r.summary[fmt::format("spread_{}", rep.sizes[s])] = rep.spread[s];
    r.columns = {"size", "offset", "lambda", "k"};
    for (std::size_t s = 0; s < rep.sizes.size(); ++s)
        for (std::size_t j = 0; j < rep.offsets[s].size(); ++j)
            for (std::size_t l = 0; l < rep.grid.size(); ++l)
                r.rows.push_back({rep.sizes[s], rep.offsets[s][j], rep.grid[l], rep.k[s][j][l]});
    return o;
}

Output cmd_voronoi(const Context& ctx)
{
    const auto& c = ctx.cfg;
    std::optional<Box> domain;
    if (c.has_value("domain")) {
        const auto parts = split(c.get("domain"), ',');
        if (parts.size() != 4)
            throw PreconditionError("domain: expected x0,x1,y0,y1");
        domain = Box({{to_real("domain", parts[0]), to_real("domain", parts[1])},
                      {to_real("domain", parts[2]), to_real("domain", parts[3])}});
    }
    const auto ps = [&] {
        if (!c.has_value("points"))
            return perturbed_lattice(uint_key(c, "lattice_side"), real_key(c, "rho"), ctx.seed);
        std::ifstream in(c.get("points"));
        if (!in)
            throw PreconditionError(fmt::format("cannot open point file {}", c.get("points")));
        return read_point_set(in, domain);
    }();
    const auto tiling = voronoi_tiling(ps, ctx.threads);
    LocalityOptions lopts;
    lopts.trials = uint_key(c, "trials");
    lopts.seed = ctx.seed;
    if (c.has_value("cutoff"))
        lopts.cutoff = real_key(c, "cutoff");
    const auto loc = locality_check(ps, lopts);

    Output o;
    auto& r = o.report;
    r.kind = "voronoi";
    r.summary["points"] = ps.size();
    r.summary["r0"] = tiling.params.r0;
    r.summary["r1"] = tiling.params.r1;
    r.summary["cutoff"] = loc.cutoff;
    r.summary["trials"] = loc.trials;
    r.summary["mismatches"] = loc.mismatches;
    r.summary["locality_holds"] = loc.holds();
    r.columns = {"site", "x", "y", "interior", "inner_radius", "outer_radius", "area", "vertices"};
    Json cells = Json::array();
    for (std::size_t i = 0; i < tiling.cells.size(); ++i) {
        const auto& cell = tiling.cells[i];
        std::string verts;
        Json vlist = Json::array();
        for (auto v : cell.vertices) {
            verts += fmt::format("{}{:.17g} {:.17g}", verts.empty() ? "" : ";", v.x, v.y);
            vlist.push_back({v.x, v.y});
        }
        const bool interior = tiling.interior[i];
        r.rows.push_back({i, cell.site.x, cell.site.y, interior, cell.inner_radius, cell.outer_radius, cell.area,
                          verts});
        cells.push_back({{"site", {cell.site.x, cell.site.y}},
                         {"index", i},
                         {"interior", interior},
                         {"vertices", std::move(vlist)},
                         {"inner_radius", cell.inner_radius},
                         {"outer_radius", cell.outer_radius}});
    }
    r.extra["cells"] = std::move(cells);
    return o;
}

Output cmd_selftest(const Context& ctx)
{
    Output o;
    auto& r = o.report;
    r.kind = "selftest";
    r.columns = {"check", "passed", "detail"};
    std::size_t failed = 0;
    for (const auto& c : run_selftest(ctx.seed, uint_key(ctx.cfg, "trials"))) {
        r.rows.push_back({c.name, c.passed, c.detail});
        failed += c.passed ? 0 : 1;
    }
    r.summary["checks"] = r.rows.size();
    r.summary["failed"] = failed;
    o.status = failed ? invariant : ok;
    return o;
}

int status_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::budget:
    case ErrorKind::unsaturated:
        return budget;
    case ErrorKind::invariant:
        return invariant;
    default:
        return validation;
    }
}

const char* kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::budget: return "budget";
    case ErrorKind::depth: return "depth";
    case ErrorKind::unsaturated: return "unsaturated";
    case ErrorKind::domain: return "domain";
    case ErrorKind::invariant: return "invariant";
    }
    return "error";
}

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Experiments on uniform subadditive ergodic theorems for linearly repetitive words.", "uniferg"};
    app.set_version_flag("--version", std::string(version));
    std::string command, config_path, out_path, format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> cutoff;
    unsigned threads = 1;
    std::vector<std::string> sets;
    std::vector<std::string> names;
    for (const auto& [name, _] : command_table())
        names.push_back(name);
    app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "key = value file");
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", sets, "key=value override (repeatable)")->allow_extra_args(false);
    app.add_option("--cutoff", cutoff, "voronoi: locality cutoff override");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        return validation;
    }

    try {
        Config cfg(command, command_table().at(command));
        if (!config_path.empty())
            cfg.load_file(config_path);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw PreconditionError(fmt::format("--set {}: expected key=value", s));
            cfg.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)), "--set");
        }
        if (seed)
            cfg.set("seed", std::to_string(*seed), "--seed");
        if (cutoff) {
            if (command != "voronoi")
                throw PreconditionError("--cutoff applies to voronoi only");
            cfg.set("cutoff", *cutoff, "--cutoff");
        }
        const Context ctx{cfg, uint_key(cfg, "seed"), threads};

        static const std::map<std::string, std::function<Output(const Context&)>> dispatch{
            {"gen", cmd_gen},         {"lang", cmd_lang},         {"rep", cmd_rep},     {"freq", cmd_freq},
            {"means", cmd_means},     {"counter", cmd_counter},   {"lyap", cmd_lyap},   {"ids", cmd_ids},
            {"voronoi", cmd_voronoi}, {"selftest", cmd_selftest},
        };
        const Output o = dispatch.at(command)(ctx);
        const Provenance prov{fnv1a_hex(cfg.canonical()), ctx.seed};

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path, std::ios::binary | std::ios::trunc);
            if (!file)
                throw PreconditionError(fmt::format("cannot write {}", out_path));
        }
        std::ostream& sink = out_path.empty() ? out : file;
        if (format == "json")
            write_json(sink, o.report, prov);
        else if (o.word)
            write_word(sink, *o.word);
        else
            write_csv(sink, o.report, prov);
        sink.flush();
        if (!sink)
            throw PreconditionError("write failed");
        if (o.status != ok)
            err << "error: invariant: selftest reported failing checks\n";
        return o.status;
    } catch (const Error& e) {
        err << "error: " << kind_name(e.kind()) << ": " << one_line(e.what()) << '\n';
        return status_for(e.kind());
    } catch (const std::bad_alloc&) {
        err << "error: budget: out of memory\n";
        return budget;
    } catch (const std::exception& e) {
        err << "error: precondition: " << one_line(e.what()) << '\n';
        return validation;
    }
}

}  // namespace uniferg::cli
