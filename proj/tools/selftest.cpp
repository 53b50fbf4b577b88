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

#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "cli.hpp"
#include "uniferg/counterexample.hpp"
#include "uniferg/ergodic.hpp"
#include "uniferg/geometry.hpp"
#include "uniferg/repetitivity.hpp"
#include "uniferg/spectral.hpp"
#include "uniferg/words.hpp"

namespace uniferg::cli {

namespace {

using Body = std::function<std::string(std::mt19937_64&, std::size_t)>;

SturmianSpec random_spec(std::mt19937_64& rng, std::size_t depth, unsigned max_a)
{
    std::vector<std::uint64_t> a(depth);
    for (auto& x : a)
        x = 1 + rng() % max_a;
    return SturmianSpec(a);
}

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Failure{what};
}

std::string prefix_property(std::mt19937_64& rng, std::size_t trials)
{
    for (std::size_t t = 0; t < trials; ++t) {
        const auto spec = random_spec(rng, 8, 5);
        const auto s = sturmian_words(spec, 8);
        for (int n = 2; n <= 8; ++n) {
            if (n == 2 && spec.coefficient(1) == 1)
                continue;  // s_0 = 0 is not a prefix of s_1 = 1 here
            require(s[n].is_prefix_of(s[n - 1] + s[n]), fmt::format("spec {} n={}", spec.to_string(), n));
        }
    }
    return fmt::format("{} specs", trials);
}

std::string block_counts(std::mt19937_64& rng, std::size_t trials)
{
    const std::size_t specs = std::max<std::size_t>(1, trials / 10);
    for (std::size_t t = 0; t < specs; ++t) {
        const auto spec = random_spec(rng, 7, 4);
        const auto s = sturmian_words(spec, 7);
        for (std::size_t k = 1; k <= 7; ++k) {
            const auto v = s[int(k) - 1] + s[int(k)];
            for (std::size_t m = 1; m <= 7; ++m) {
                require(block_count(spec, k, m) == occurrences(v, s[int(m)]).count,
                        fmt::format("spec {} k={} m={}", spec.to_string(), k, m));
                require(block_count_concat(spec, k, m) == occurrences(v, s[int(m) - 1] + s[int(m)]).count,
                        fmt::format("concat spec {} k={} m={}", spec.to_string(), k, m));
            }
        }
    }
    return fmt::format("{} specs", specs);
}

std::string counterexample(std::mt19937_64&, std::size_t)
{
    const auto r = separation_demo(SturmianSpec::powers_of_two(10), 10);
    require(r.gap_statistic && *r.gap_statistic >= 0.5, "gap statistic below 1/2");
    for (const auto& row : r.rows)
        require(row.lower_bound_holds && row.upper_bound_holds.value_or(true), fmt::format("bounds at n={}", row.n));
    return fmt::format("gap {:.6f}, {} junction pairs", *r.gap_statistic, r.cross_checked_pairs);
}

std::string audits(std::mt19937_64& rng, std::size_t trials)
{
    const Generator golden = SturmianSpec::golden(40);
    const GConfig cfg(SturmianSpec::golden(40), 40);
    for (const auto& F : {letter_count(0), word_length(), negated(letter_count(1)), negative_g(cfg),
                          log_norm_function(0.7, PotentialMap({0.0, 1.0}))}) {
        const auto a = subadditivity_audit(F, golden, trials, rng(), 200);
        require(a.passed(), fmt::format("{}: {} violations", F.name, a.violations));
    }
    return fmt::format("5 functions x {} trials", trials);
}

std::string superadditive(std::mt19937_64& rng, std::size_t trials)
{
    require(superadditivity_check(GConfig(SturmianSpec::golden(20), 20), trials, rng(), 400), "golden");
    require(superadditivity_check(GConfig(SturmianSpec::powers_of_two(5), 5), trials, rng(), 400), "fast");
    return fmt::format("{} splits per spec", trials);
}

std::string transfer(std::mt19937_64& rng, std::size_t trials)
{
    const auto w = generator_prefix(SturmianSpec::golden(40), 5000);
    const PotentialMap pot({0.0, 1.3});
    std::uniform_real_distribution<double> energy(-3.5, 3.5);
    for (std::size_t t = 0; t < trials; ++t) {
        const double E = energy(rng);
        const auto st = cocycle_product(E, w, pot);
        require(std::abs(st.log_abs_det()) <= 1e-9, fmt::format("log|det| = {} at E={}", st.log_abs_det(), E));
        require(st.log_norm() >= -1e-12, fmt::format("norm below 1 at E={}", E));
    }
    return fmt::format("{} energies on 5000 letters", trials);
}

std::string sturm(std::mt19937_64& rng, std::size_t trials)
{
    const auto w = generator_prefix(SturmianSpec::golden(40), 400);
    const PotentialMap pot({0.0, 1.0});
    const auto op = TridiagonalOperator::schrodinger(w, pot);
    const auto local = to_tridiagonal(local_operator(w, schrodinger_rule(pot), 2));
    require(local.diagonal == op.diagonal && local.off_diagonal == op.off_diagonal, "local rule != schrodinger");
    require(eigen_count(op, -3.5) == 0 && eigen_count(op, 4.5) == op.size(), "count outside the spectrum bound");
    std::uniform_real_distribution<double> lam(-3.0, 4.0);
    for (std::size_t t = 0; t < trials; ++t) {
        const double a = lam(rng), b = lam(rng);
        require(eigen_count(op, std::min(a, b)) <= eigen_count(op, std::max(a, b)), "count not monotone");
    }
    return fmt::format("{} lambda pairs", trials);
}

std::string repetitivity(std::mt19937_64&, std::size_t)
{
    const auto w = generator_prefix(SturmianSpec::golden(40), 20000);
    for (std::size_t n = 1; n <= 32; ++n) {
        const auto R = repetitivity_function(w, n);
        require(R >= n + complexity(w, n) - 1, fmt::format("R({}) below n + p(n) - 1", n));
    }
    return "n = 1..32";
}

std::string locality(std::mt19937_64& rng, std::size_t trials)
{
    const auto ps = perturbed_lattice(10, 0.3, rng());
    LocalityOptions opts;
    opts.trials = trials;
    opts.seed = rng();
    const auto r = locality_check(ps, opts);
    require(r.holds(), fmt::format("{} of {} cells differ", r.mismatches, r.trials));
    opts.cutoff = r.params.r1 / 2;
    require(!locality_check(ps, opts).holds(), "negative control passed");
    return fmt::format("{} sites, cutoff {:.6f}", trials, r.cutoff);
}

}  // namespace

std::vector<SelfCheck> run_selftest(std::uint64_t seed, std::size_t trials)
{
    const std::vector<std::pair<std::string, Body>> battery{
        {"sturmian_prefix_property", prefix_property},
        {"block_count_vs_scan", block_counts},
        {"counterexample_bounds", counterexample},
        {"subadditivity_audits", audits},
        {"g_superadditive", superadditive},
        {"transfer_determinant", transfer},
        {"sturm_count", sturm},
        {"lr_lower_bound", repetitivity},
        {"voronoi_locality", locality},
    };
    std::vector<SelfCheck> out;
    for (std::size_t i = 0; i < battery.size(); ++i) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (i + 1));
        SelfCheck c{battery[i].first, false, ""};
        try {
            c.detail = battery[i].second(rng, trials);
            c.passed = true;
        } catch (const Failure& f) {
            c.detail = f.what;
        } catch (const std::exception& e) {
            c.detail = e.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace uniferg::cli
