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

#include "uniferg/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "uniferg/parallel.hpp"

namespace uniferg {

SubadditiveFn letter_count(Symbol letter)
{
    SubadditiveFn F;
    F.name = fmt::format("count_{}", letter);
    F.value = [letter](const Word& w) {
        return static_cast<double>(std::count(w.view().begin(), w.view().end(), static_cast<char>(letter)));
    };
    F.bound = 1.0;
    F.additive = true;
    return F;
}

SubadditiveFn weighted_letter_count(std::vector<double> weights)
{
    SubadditiveFn F;
    F.name = "weighted_count";
    double bound = 0.0;
    for (double x : weights)
        bound = std::max(bound, std::abs(x));
    F.value = [weights = std::move(weights)](const Word& w) {
        double sum = 0.0;
        for (auto s : w.symbols())
            sum += weights.at(s);
        return sum;
    };
    F.bound = bound;
    F.additive = true;
    return F;
}

SubadditiveFn word_length()
{
    SubadditiveFn F;
    F.name = "length";
    F.value = [](const Word& w) { return static_cast<double>(w.size()); };
    F.bound = 1.0;
    F.additive = true;
    return F;
}

SubadditiveFn negated(const SubadditiveFn& F)
{
    if (!F.additive)
        throw PreconditionError(fmt::format("negating the non-additive function {} breaks subadditivity", F.name));
    SubadditiveFn G = F;
    G.name = "neg_" + F.name;
    G.value = [v = F.value](const Word& w) { return -v(w); };
    return G;
}

SubadditiveFn no_rate_example(std::function<double(double)> f, const std::vector<std::size_t>& grid,
                              std::string name)
{
    auto sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double x = static_cast<double>(sorted[i]);
        if (!(f(x) >= 0.0))
            throw PreconditionError(fmt::format("f({}) = {} is negative", x, f(x)));
        if (i > 0 && f(x) > f(static_cast<double>(sorted[i - 1])))
            throw PreconditionError(fmt::format("f increases between {} and {}", sorted[i - 1], sorted[i]));
    }
    SubadditiveFn F;
    F.name = std::move(name);
    F.bound = f(1.0);
    F.value = [f = std::move(f)](const Word& w) {
        if (w.empty())
            return 0.0;
        const double n = static_cast<double>(w.size());
        return n * f(n);
    };
    return F;
}

namespace {

std::vector<std::size_t> positions_of(std::string_view needle, std::string_view hay)
{
    return find_all(needle, hay);
}

}  // namespace

SubadditiveFn lift_window_function(WindowFunction raw, Word source, WindowTraits traits, std::string name)
{
    SubadditiveFn F;
    F.name = std::move(name);
    F.defect = traits.defect;
    F.min_scale = traits.min_scale;
    F.bound = traits.bound;
    F.value = [raw = std::move(raw), source = std::move(source)](const Word& w) {
        if (w.empty())
            return 0.0;
        const auto pos = positions_of(w.view(), source.view());
        if (pos.empty())
            throw DomainError(fmt::format("word {} is not a factor of the source", w.to_digits()));
        double best = -std::numeric_limits<double>::infinity();
        for (auto p : pos)
            best = std::max(best, raw(p, w.size()));
        return best;
    };
    return F;
}

bool asymptotic_invariance_check(const WindowFunction& raw, std::function<double(std::size_t)> e_w,
                                 const Word& source, const std::vector<std::size_t>& n_list, double tol)
{
    for (auto n : n_list) {
        if (n == 0 || n > source.size())
            continue;
        for (const auto& w : subwords(source, n)) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (auto p : positions_of(w.view(), source.view())) {
                const double x = raw(p, n);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            if (hi - lo > e_w(n) * static_cast<double>(n) + tol)
                return false;
        }
    }
    return true;
}

MeansEntry means(const SubadditiveFn& F, const LanguageSample& sample, unsigned threads)
{
    if (!sample.saturated)
        throw UnsaturatedError(fmt::format("language sample at n = {} is not saturated", sample.n));
    if (sample.n < F.min_scale)
        throw PreconditionError(fmt::format("n = {} is below the minimal scale {} of {}", sample.n, F.min_scale, F.name));
    if (sample.members.empty() || sample.n == 0)
        throw PreconditionError("means need a nonempty sample of positive length");
    std::vector<double> values(sample.members.size());
    parallel_for(values.size(), threads, [&](std::size_t i) { values[i] = F.value(sample.members[i]); });

    // Members are sorted, so strict comparisons keep the lexicographically least witness.
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[imax])
            imax = i;
        if (values[i] < values[imin])
            imin = i;
    }
    const double n = static_cast<double>(sample.n);
    MeansEntry e;
    e.n = sample.n;
    e.fplus = values[imax] / n;
    e.fminus = values[imin] / n;
    e.gap = e.fplus - e.fminus;
    e.argmax = sample.members[imax];
    e.argmin = sample.members[imin];
    return e;
}

std::vector<std::size_t> default_grid(std::size_t r_F, std::size_t n_max)
{
    r_F = std::max<std::size_t>(r_F, 1);
    std::vector<std::size_t> grid;
    if (n_max < r_F)
        return grid;
    if (n_max <= 256) {
        for (std::size_t n = r_F; n <= n_max; ++n)
            grid.push_back(n);
        return grid;
    }
    grid.push_back(r_F);
    for (std::size_t p = 1; p <= n_max; p *= 2)
        if (p > r_F)
            grid.push_back(p);
    if (grid.back() != n_max)
        grid.push_back(n_max);
    return grid;
}

FeketeResult fekete_limit(const SubadditiveFn& F, const Generator& gen, std::size_t n_max,
                          std::optional<std::vector<std::size_t>> grid, unsigned threads)
{
    if (n_max < F.min_scale)
        throw PreconditionError(fmt::format("n_max = {} is below the minimal scale {}", n_max, F.min_scale));
    auto ns = grid ? *grid : default_grid(F.min_scale, n_max);
    std::erase_if(ns, [&](std::size_t n) { return n < std::max<std::size_t>(F.min_scale, 1) || n > n_max; });
    if (ns.empty())
        throw PreconditionError("fekete grid is empty");
    FeketeResult out;
    out.fbar = std::numeric_limits<double>::infinity();
    for (auto n : ns) {
        auto e = means(F, language_sample(gen, n), threads);
        const double candidate = e.fplus + F.defect(n);
        if (candidate < out.fbar) {
            out.fbar = candidate;
            out.argmin_n = n;
        }
        out.entries.push_back(std::move(e));
    }
    out.limit_estimate = out.fbar;
    return out;
}

MeansReport uniform_convergence_report(const SubadditiveFn& F, const Generator& gen,
                                       const std::vector<std::size_t>& n_list, ConvergenceOptions options)
{
    if (!options.allow_non_lr && !is_lr_certified(gen))
        throw PreconditionError(fmt::format("generator {} has no linear-repetitivity certificate", describe(gen)));
    if (n_list.empty())
        throw PreconditionError("n_list must be nonempty");
    MeansReport report;
    report.function = F.name;
    report.generator = describe(gen);
    report.fbar = std::numeric_limits<double>::infinity();
    auto ns = n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (auto n : ns) {
        auto e = means(F, language_sample(gen, n, options.safety_factor), options.threads);
        const double candidate = e.fplus + F.defect(n);
        if (candidate < report.fbar) {
            report.fbar = candidate;
            report.fbar_n = n;
        }
        report.entries.push_back(std::move(e));
    }
    report.limit_estimate = 0.5 * (report.entries.back().fplus + report.entries.back().fminus);
    return report;
}

AuditResult subadditivity_audit(const SubadditiveFn& F, const Word& source, std::size_t trials,
                                std::uint64_t seed, std::size_t max_length, double tol)
{
    const std::size_t r = std::max<std::size_t>(F.min_scale, 1);
    max_length = std::min(max_length, source.size());
    if (max_length < 2 * r)
        throw PreconditionError("source too short for a split with both parts at the minimal scale");
    std::mt19937_64 rng(seed);
    AuditResult out;
    out.worst_excess = -std::numeric_limits<double>::infinity();
    auto note = [&](double excess) {
        out.worst_excess = std::max(out.worst_excess, excess);
        if (excess > tol)
            ++out.violations;
    };
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = 2 * r + rng() % (max_length - 2 * r + 1);
        const std::size_t start = rng() % (source.size() - m + 1);
        const std::size_t k = r + rng() % (m - 2 * r + 1);
        const Word w = source.slice(start, m);
        const Word u = w.slice(0, k), v = w.slice(k, m - k);
        const double fw = F.value(w), fu = F.value(u), fv = F.value(v);
        const double c = F.defect(std::min(u.size(), v.size()));
        note(fw - (fu + fv + c * static_cast<double>(m)));
        note(std::abs(fw) - F.bound * static_cast<double>(m));
        ++out.trials;
    }
    return out;
}

AuditResult subadditivity_audit(const SubadditiveFn& F, const Generator& gen, std::size_t trials,
                                std::uint64_t seed, std::size_t max_length, double tol)
{
    const auto source = generator_prefix(gen, std::max<std::size_t>(4 * max_length, 1024));
    return subadditivity_audit(F, source, trials, seed, max_length, tol);
}

}  // namespace uniferg
