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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uniferg/words.hpp"

namespace uniferg {

/// A subadditive function on words: value(uv) <= value(u) + value(v) +
/// defect(min(|u|,|v|)) * (|u| + |v|) whenever both parts have length >= min_scale,
/// and |value(w)| <= bound * |w|.
struct SubadditiveFn {
    std::string name;
    std::function<double(const Word&)> value;
    std::function<double(std::size_t)> defect = [](std::size_t) { return 0.0; };
    std::size_t min_scale = 1;
    double bound = 0.0;
    bool additive = false;  ///< -value is subadditive as well
};

SubadditiveFn letter_count(Symbol letter);
SubadditiveFn weighted_letter_count(std::vector<double> weights);
SubadditiveFn word_length();
SubadditiveFn negated(const SubadditiveFn& F);

/// value(w) = |w| f(|w|) with f nonincreasing and nonnegative. Monotonicity is
/// checked on `grid`; a violation raises PreconditionError.
SubadditiveFn no_rate_example(std::function<double(double)> f, const std::vector<std::size_t>& grid,
                              std::string name = "no_rate");

/// Window function on a source word: raw(position, length).
using WindowFunction = std::function<double(std::size_t, std::size_t)>;

struct WindowTraits {
    std::function<double(std::size_t)> defect = [](std::size_t) { return 0.0; };  ///< c_w
    std::size_t min_scale = 1;
    double bound = 0.0;  ///< d_w
};

/// value(w) = sup of raw over the occurrences of w in source; throws
/// DomainError for words that do not occur. Subadditive with defect c_w.
SubadditiveFn lift_window_function(WindowFunction raw, Word source, WindowTraits traits = {},
                                   std::string name = "lifted");

/// Checks |raw(p,n) - raw(q,n)| <= e_w(n) * n + tol for all pairs of occurrences
/// p, q of each length-n factor of source, for every n in the list.
bool asymptotic_invariance_check(const WindowFunction& raw, std::function<double(std::size_t)> e_w,
                                 const Word& source, const std::vector<std::size_t>& n_list,
                                 double tol = 1e-9);

struct MeansEntry {
    std::size_t n = 0;
    double fplus = 0.0;
    double fminus = 0.0;
    double gap = 0.0;
    Word argmax;  ///< lexicographically least maximiser
    Word argmin;  ///< lexicographically least minimiser
};

struct MeansReport {
    std::string function;
    std::string generator;
    std::vector<MeansEntry> entries;
    double limit_estimate = 0.0;  ///< (F+ + F-)/2 at the largest tabulated n
    double fbar = 0.0;            ///< inf over tabulated n of F+(n) + c_F(n)
    std::size_t fbar_n = 0;
};

/// F+(n) and F-(n) over the members of a saturated sample. Throws
/// UnsaturatedError for unsaturated samples and PreconditionError if n < r_F.
MeansEntry means(const SubadditiveFn& F, const LanguageSample& sample, unsigned threads = 1);

struct FeketeResult {
    double limit_estimate = 0.0;  ///< equals fbar: certified upper bound for lim F+
    double fbar = 0.0;
    std::size_t argmin_n = 0;
    std::vector<MeansEntry> entries;
};

/// Default evaluation grid: every n in [r_F, n_max] when n_max <= 256, else the
/// powers of two in that range together with r_F and n_max.
std::vector<std::size_t> default_grid(std::size_t r_F, std::size_t n_max);

/// inf over the grid of F+(n) + c_F(n).
FeketeResult fekete_limit(const SubadditiveFn& F, const Generator& gen, std::size_t n_max,
                          std::optional<std::vector<std::size_t>> grid = std::nullopt,
                          unsigned threads = 1);

struct ConvergenceOptions {
    bool allow_non_lr = false;
    double safety_factor = 4.0;
    unsigned threads = 1;
};

/// Means table over n_list. Generators without an LR certificate are refused
/// unless allow_non_lr is set.
MeansReport uniform_convergence_report(const SubadditiveFn& F, const Generator& gen,
                                       const std::vector<std::size_t>& n_list,
                                       ConvergenceOptions options = {});

struct AuditResult {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst_excess = 0.0;  ///< max of lhs - rhs over all trials (<= tol when passing)
    bool passed() const noexcept { return violations == 0; }
};

/// Random factors of the generator prefix split at random points with both parts
/// of length >= r_F; checks both conditions of the subadditive definition.
AuditResult subadditivity_audit(const SubadditiveFn& F, const Word& source, std::size_t trials,
                                std::uint64_t seed, std::size_t max_length = 200, double tol = 1e-9);
AuditResult subadditivity_audit(const SubadditiveFn& F, const Generator& gen, std::size_t trials,
                                std::uint64_t seed, std::size_t max_length = 200, double tol = 1e-9);

}  // namespace uniferg
