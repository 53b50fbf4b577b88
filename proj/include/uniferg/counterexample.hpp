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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "uniferg/ergodic.hpp"
#include "uniferg/words.hpp"

namespace uniferg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Random access into s_{-1}..s_{n_max} without materialising them.
class StandardWordIndex {
public:
    /// Throws BudgetError when some |s_n| overflows 64 bits.
    StandardWordIndex(SturmianSpec spec, std::size_t n_max);

    const SturmianSpec& spec() const noexcept { return spec_; }
    std::size_t n_max() const noexcept { return n_max_; }
    std::uint64_t length(int n) const { return len_.at(static_cast<std::size_t>(n + 1)); }
    Symbol letter(int n, std::uint64_t pos) const;
    /// Letters [offset, offset + count) of s_n; the range must lie inside s_n.
    Word extract(int n, std::uint64_t offset, std::uint64_t count, MemoryBudget budget = {}) const;
    Word word(int n, MemoryBudget budget = {}) const { return extract(n, 0, length(n), budget); }
    /// Letter counts (#0, #1) of s_n.
    std::pair<std::uint64_t, std::uint64_t> letter_counts(int n) const;
    /// s_i[p, p+L) == s_j[q, q+L), decided exactly by splitting into standard
    /// blocks until both sides are the same block or single letters. Nothing is
    /// materialised. Throws BudgetError after max_steps distinct subproblems.
    bool equal_factors(int i, std::uint64_t p, int j, std::uint64_t q, std::uint64_t L,
                       std::size_t max_steps = std::size_t{1} << 22) const;

private:
    void append(int n, std::uint64_t offset, std::uint64_t count, std::string& out) const;

    SturmianSpec spec_;
    std::size_t n_max_;
    std::vector<std::uint64_t> len_;
};

/// The truncated sum G(w) = sum_{k=1..depth} #_{v_k}(w) |v_k|, v_k = s_{k-1} s_k.
/// s_n is a prefix of s_{n-1} s_n (n >= 1), by block comparison.
bool prefix_property_holds(const StandardWordIndex& index, int n);

/// s_n occurs in s_n s_n only at 0 and |s_n|. Words up to scan_limit letters
/// are scanned; longer ones are certified by coprime letter counts, since a
/// word occurring inside its square at another position is a proper power.
/// Returns false when neither route confirms the property.
bool two_occurrence_property_holds(const StandardWordIndex& index, int n,
                                   std::uint64_t scan_limit = std::uint64_t{1} << 22);

struct GConfig {
    SturmianSpec spec;
    std::size_t depth;

    GConfig(SturmianSpec s, std::size_t N);
};

/// Exact G(w) by scanning w for every v_k with |v_k| <= |w|. Throws DepthError
/// unless some k <= depth has |v_k| > |w|, which makes the truncation exact.
BigInt g_value(const Word& w, const GConfig& cfg);

/// #_{v_k}(s_m) from the block structure of standard words:
/// zero for m <= k, else q_k(m) - [m - k odd] with q_k(k) = 0, q_k(k+1) = 1,
/// q_k(m) = a_m q_k(m-1) + q_k(m-2).
BigInt block_count(const SturmianSpec& spec, std::size_t k, std::size_t m);
/// #_{v_k}(s_{m-1} s_m) = #_{v_k}(s_{m-1}) + #_{v_k}(s_m) + [m - k even], for m >= 1.
BigInt block_count_concat(const SturmianSpec& spec, std::size_t k, std::size_t m);

/// Occurrences of an explicit word v in s_m (and in s_{m-1} s_m) through
/// #_v(s_m) = a_m #_v(s_{m-1}) + #_v(s_{m-2}) + occurrences crossing the block
/// junctions, each read from a window of width at most 2|v| - 2. Windows in the
/// periodic run of head copies are identical and read once. Levels no longer
/// than direct_limit are scanned directly.
class JunctionCounter {
public:
    JunctionCounter(const StandardWordIndex& index, Word v, std::uint64_t direct_limit = 1u << 20,
                    MemoryBudget budget = {});
    BigInt in_standard(int m);
    BigInt in_concat(int m);  ///< in s_{m-1} s_m, m >= 0

private:
    std::uint64_t crossing(int n, std::uint64_t begin, std::uint64_t end) const;

    const StandardWordIndex& index_;
    Word v_;
    std::uint64_t direct_limit_;
    MemoryBudget budget_;
    std::map<int, BigInt> memo_;
};

/// G(s_m) and G(s_{m-1} s_m) from block counts. Exact for every m <= spec depth
/// whose lengths fit 64 bits.
BigInt g_standard(const SturmianSpec& spec, std::size_t m);
BigInt g_concat(const SturmianSpec& spec, std::size_t m);

struct CounterexampleRow {
    std::size_t n = 0;
    BigInt g_sn, g_concat;
    BigInt len_sn, len_concat;
    Rational ratio_sn, ratio_concat;
    bool lower_bound_holds = true;            ///< rows n >= 2
    std::optional<bool> upper_bound_holds;    ///< needs row n + 1
    bool equality_holds = false;              ///< the displayed identity, reported only
};

struct CounterexampleReport {
    SturmianSpec spec;
    std::size_t n_max = 0;
    std::vector<CounterexampleRow> rows;
    double gbar_estimate = 0.0;               ///< G(s_{n_max}) / |s_{n_max}|
    std::optional<double> gap_statistic;      ///< min tail ratio_concat - max tail ratio_sn
    std::optional<Rational> gap_exact;
    std::vector<std::size_t> tail;
    double coefficient_sum = 0.0;                  ///< sum_{n < n_max} 1 / (a_n a_{n+1})
    std::size_t cross_checked_pairs = 0;      ///< (k, m) pairs confirmed by the junction route
};

struct DemoOptions {
    MemoryBudget budget = {};
    bool cross_check = true;
};

/// Tabulates G(s_n)/|s_n| and G(s_{n-1}s_n)/|s_{n-1}s_n| for n = 1..n_max.
/// The tail is {n : 2n > n_max}; the gap statistic needs at least two tail rows.
/// Block counts are cross-checked against the junction recursion for every v_k
/// that fits the budget; a disagreement raises InvariantViolation.
CounterexampleReport separation_demo(const SturmianSpec& spec, std::size_t n_max, DemoOptions options = {});

/// Random factors of c_alpha split at random points: G(uv) >= G(u) + G(v).
bool superadditivity_check(const GConfig& cfg, std::size_t trials, std::uint64_t seed,
                           std::size_t max_length = 2000);

/// F = -G as a subadditive function (c_F = 0, d_F = sum_{k <= depth} |v_k|).
SubadditiveFn negative_g(const GConfig& cfg);

}  // namespace uniferg
