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

#include "uniferg/counterexample.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include <fmt/format.h>

namespace uniferg {

StandardWordIndex::StandardWordIndex(SturmianSpec spec, std::size_t n_max)
    : spec_(std::move(spec)), n_max_(n_max), len_(sturmian_lengths(spec_, n_max))
{
}

void StandardWordIndex::append(int n, std::uint64_t offset, std::uint64_t count, std::string& out) const
{
    while (count > 0) {
        if (n <= 0) {
            out.push_back(n == -1 ? 1 : 0);
            return;
        }
        // s_n = head^{reps} tail
        const int head = n - 1;
        const int tail = n == 1 ? -1 : n - 2;
        const std::uint64_t reps = n == 1 ? spec_.coefficient(1) - 1 : spec_.coefficient(static_cast<std::size_t>(n));
        const std::uint64_t hl = length(head);
        const std::uint64_t head_total = reps * hl;
        if (offset >= head_total) {
            n = tail;
            offset -= head_total;
            continue;
        }
        const std::uint64_t within = offset % hl;
        const std::uint64_t take = std::min(count, hl - within);
        append(head, within, take, out);
        offset += take;
        count -= take;
    }
}

Symbol StandardWordIndex::letter(int n, std::uint64_t pos) const
{
    if (pos >= length(n))
        throw PreconditionError(fmt::format("position {} outside s_{}", pos, n));
    std::string out;
    append(n, pos, 1, out);
    return static_cast<Symbol>(out.front());
}

Word StandardWordIndex::extract(int n, std::uint64_t offset, std::uint64_t count, MemoryBudget budget) const
{
    if (n < -1 || n > static_cast<int>(n_max_))
        throw PreconditionError(fmt::format("level {} outside -1..{}", n, n_max_));
    if (offset > length(n) || count > length(n) - offset)
        throw PreconditionError(fmt::format("range [{}, {}+{}) outside s_{}", offset, offset, count, n));
    if (count > budget.max_letters)
        throw BudgetError(fmt::format("extracting {} letters of s_{} exceeds budget {}", count, n, budget.max_letters));
    std::string out;
    out.reserve(count);
    append(n, offset, count, out);
    return Word(std::move(out));
}

std::pair<std::uint64_t, std::uint64_t> StandardWordIndex::letter_counts(int n) const
{
    if (n < -1 || n > static_cast<int>(n_max_))
        throw PreconditionError(fmt::format("level {} outside -1..{}", n, n_max_));
    std::pair<std::uint64_t, std::uint64_t> prev{0, 1}, cur{1, 0};  // s_{-1}, s_0
    if (n == -1)
        return prev;
    for (int m = 1; m <= n; ++m) {
        const std::uint64_t a = spec_.coefficient(static_cast<std::size_t>(m));
        // s_1 = s_0^{a_1 - 1} s_{-1}; s_m = s_{m-1}^{a_m} s_{m-2}
        const std::uint64_t reps = m == 1 ? a - 1 : a;
        const std::pair<std::uint64_t, std::uint64_t> next{reps * cur.first + prev.first,
                                                            reps * cur.second + prev.second};
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

class BlockComparer {
public:
    BlockComparer(const StandardWordIndex& index, std::size_t max_steps) : index_(index), max_steps_(max_steps) {}

    bool equal(int i, std::uint64_t p, int j, std::uint64_t q, std::uint64_t L)
    {
        if (L == 0)
            return true;
        narrow(i, p, L);
        narrow(j, q, L);
        if (i == j && p == q)
            return true;
        if (index_.length(i) == 1 && index_.length(j) == 1)
            return level_letter(i) == level_letter(j);
        auto key = std::make_tuple(i, p, j, q, L);
        if (std::tie(j, q) < std::tie(i, p))
            key = std::make_tuple(j, q, i, p, L);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        if (memo_.size() >= max_steps_)
            throw BudgetError(fmt::format("block comparison exceeded {} subproblems", max_steps_));
        const bool result = index_.length(i) >= index_.length(j) ? split(i, p, j, q, L) : split(j, q, i, p, L);
        memo_[key] = result;
        return result;
    }

private:
    static Symbol level_letter(int n) { return n == -1 ? 1 : 0; }

    void children(int n, int& head, int& tail, std::uint64_t& reps) const
    {
        head = n - 1;
        tail = n == 1 ? -1 : n - 2;
        const auto a = index_.spec().coefficient(static_cast<std::size_t>(n));
        reps = n == 1 ? a - 1 : a;
    }

    // Descends while [p, p+L) lies inside a single child block.
    void narrow(int& n, std::uint64_t& p, std::uint64_t L) const
    {
        while (n >= 1) {
            int head, tail;
            std::uint64_t reps;
            children(n, head, tail, reps);
            const std::uint64_t hl = index_.length(head), run = reps * hl;
            if (p >= run) {
                n = tail;
                p -= run;
            } else if (p % hl + L <= hl) {
                n = head;
                p %= hl;
            } else {
                return;
            }
        }
    }

    // Splits side (n, p) into its children and compares each piece against (m, q).
    bool split(int n, std::uint64_t p, int m, std::uint64_t q, std::uint64_t L)
    {
        int head, tail;
        std::uint64_t reps;
        children(n, head, tail, reps);
        const std::uint64_t hl = index_.length(head), run = reps * hl;
        while (L > 0) {
            std::uint64_t take;
            bool ok;
            if (p < run) {
                const std::uint64_t within = p % hl;
                take = std::min(L, hl - within);
                ok = equal(head, within, m, q, take);
            } else {
                take = L;
                ok = equal(tail, p - run, m, q, take);
            }
            if (!ok)
                return false;
            p += take;
            q += take;
            L -= take;
        }
        return true;
    }

    const StandardWordIndex& index_;
    std::size_t max_steps_;
    std::map<std::tuple<int, std::uint64_t, int, std::uint64_t, std::uint64_t>, bool> memo_;
};

}  // namespace

bool StandardWordIndex::equal_factors(int i, std::uint64_t p, int j, std::uint64_t q, std::uint64_t L,
                                      std::size_t max_steps) const
{
    for (auto [n, off] : {std::pair{i, p}, std::pair{j, q}}) {
        if (n < -1 || n > static_cast<int>(n_max_))
            throw PreconditionError(fmt::format("level {} outside -1..{}", n, n_max_));
        if (off > length(n) || L > length(n) - off)
            throw PreconditionError(fmt::format("range [{}, {}+{}) outside s_{}", off, off, L, n));
    }
    BlockComparer cmp(*this, max_steps);
    return cmp.equal(i, p, j, q, L);
}

bool prefix_property_holds(const StandardWordIndex& index, int n)
{
    if (n < 1 || n > static_cast<int>(index.n_max()))
        throw PreconditionError(fmt::format("prefix property needs 1 <= n <= {}", index.n_max()));
    const std::uint64_t head = index.length(n - 1), len = index.length(n);
    // prefix of length |s_n| of s_{n-1} s_n is s_{n-1} followed by s_n[0, |s_n| - |s_{n-1}|)
    if (head > len)
        return false;
    return index.equal_factors(n, 0, n - 1, 0, head) && index.equal_factors(n, head, n, 0, len - head);
}

bool two_occurrence_property_holds(const StandardWordIndex& index, int n, std::uint64_t scan_limit)
{
    const std::uint64_t len = index.length(n);
    if (len <= scan_limit) {
        const auto w = index.word(n);
        const auto hits = find_all(w.view(), (w + w).view());
        return hits == std::vector<std::size_t>{0, static_cast<std::size_t>(len)};
    }
    const auto [zeros, ones] = index.letter_counts(n);
    return std::gcd(zeros, ones) == 1;
}

GConfig::GConfig(SturmianSpec s, std::size_t N) : spec(std::move(s)), depth(N)
{
    if (depth == 0 || depth > spec.depth())
        throw PreconditionError(fmt::format("G depth {} must lie in 1..{}", depth, spec.depth()));
}

BigInt g_value(const Word& w, const GConfig& cfg)
{
    const StandardWordIndex index(cfg.spec, cfg.depth);
    BigInt g = 0;
    for (std::size_t k = 1; k <= cfg.depth; ++k) {
        const std::uint64_t vk = index.length(static_cast<int>(k) - 1) + index.length(static_cast<int>(k));
        if (vk > w.size())
            return g;
        const auto v = index.extract(static_cast<int>(k) - 1, 0, index.length(static_cast<int>(k) - 1)) +
                       index.word(static_cast<int>(k));
        g += BigInt(count_occurrences(v.view(), w.view())) * vk;
    }
    throw DepthError(fmt::format("G truncated at depth {} is not exact for a word of length {}", cfg.depth, w.size()));
}

BigInt block_count(const SturmianSpec& spec, std::size_t k, std::size_t m)
{
    if (k == 0)
        throw PreconditionError("v_k is defined for k >= 1");
    if (m <= k)
        return 0;
    BigInt q_prev = 0, q = 1;  // q_k(k), q_k(k+1)
    for (std::size_t j = k + 2; j <= m; ++j) {
        BigInt next = BigInt(spec.coefficient(j)) * q + q_prev;
        q_prev = std::move(q);
        q = std::move(next);
    }
    return (m - k) % 2 == 1 ? q - 1 : q;
}

BigInt block_count_concat(const SturmianSpec& spec, std::size_t k, std::size_t m)
{
    if (m == 0)
        throw PreconditionError("s_{m-1} s_m needs m >= 1");
    const BigInt left = m >= 1 ? block_count(spec, k, m - 1) : BigInt(0);
    const bool junction = m >= k && (m - k) % 2 == 0;
    return left + block_count(spec, k, m) + (junction ? 1 : 0);
}

namespace {

BigInt vk_length(const std::vector<std::uint64_t>& len, std::size_t k)
{
    return BigInt(len[k]) + BigInt(len[k + 1]);  // |s_{k-1}| + |s_k|
}

}  // namespace

BigInt g_standard(const SturmianSpec& spec, std::size_t m)
{
    const auto len = sturmian_lengths(spec, m);
    BigInt g = 0;
    for (std::size_t k = 1; k < m; ++k)
        g += block_count(spec, k, m) * vk_length(len, k);
    return g;
}

BigInt g_concat(const SturmianSpec& spec, std::size_t m)
{
    const auto len = sturmian_lengths(spec, m);
    BigInt g = 0;
    for (std::size_t k = 1; k <= m; ++k)
        g += block_count_concat(spec, k, m) * vk_length(len, k);
    return g;
}

JunctionCounter::JunctionCounter(const StandardWordIndex& index, Word v, std::uint64_t direct_limit,
                                 MemoryBudget budget)
    : index_(index), v_(std::move(v)), direct_limit_(direct_limit), budget_(budget)
{
    if (v_.empty())
        throw PreconditionError("occurrences of the empty word are undefined");
    if (2 * v_.size() > budget_.max_letters)
        throw BudgetError(fmt::format("junction windows for a word of length {} exceed budget {}", v_.size(),
                                      budget_.max_letters));
}

std::uint64_t JunctionCounter::crossing(int n, std::uint64_t begin, std::uint64_t end) const
{
    // Occurrences in s_n that start in [begin, end) and end after `end`. Any such
    // occurrence starts at or after end - (|v| - 1), so one window holds them all.
    const std::uint64_t w = v_.size() - 1;
    const std::uint64_t lo = std::max(begin, end >= w ? end - w : 0);
    const std::uint64_t hi = std::min(index_.length(n), end + w);
    const auto window = index_.extract(n, lo, hi - lo, budget_);
    std::uint64_t count = 0;
    for (auto p : find_all(v_.view(), window.view()))
        count += lo + p < end;
    return count;
}

BigInt JunctionCounter::in_standard(int m)
{
    if (auto it = memo_.find(m); it != memo_.end())
        return it->second;
    BigInt result;
    const std::uint64_t L = index_.length(m);
    if (L <= direct_limit_ || m <= 0) {
        result = count_occurrences(v_.view(), index_.word(m, budget_).view());
    } else {
        // s_m = head^{reps} tail; every occurrence lies inside one block or starts in a
        // head copy and runs past its end.
        const int head = m - 1;
        const int tail = m == 1 ? -1 : m - 2;
        const std::uint64_t reps =
            m == 1 ? index_.spec().coefficient(1) - 1 : index_.spec().coefficient(static_cast<std::size_t>(m));
        const std::uint64_t hl = index_.length(head);
        const std::uint64_t w = v_.size() - 1;
        result = BigInt(reps) * in_standard(head) + in_standard(tail);
        // Copy i (0-based) spans [i hl, (i+1) hl). Its crossing window starts
        // max(0, hl - w) letters into the copy, so while the window ends inside
        // the periodic run (i+1) hl + w <= reps hl every copy reads the same letters.
        const std::uint64_t run = reps * hl;
        const std::uint64_t same = run >= w ? (run - w) / hl : 0;
        if (same > 0)
            result += BigInt(same) * crossing(m, 0, hl);
        for (std::uint64_t i = same; i < reps; ++i)
            result += crossing(m, i * hl, (i + 1) * hl);
    }
    memo_.emplace(m, result);
    return result;
}

BigInt JunctionCounter::in_concat(int m)
{
    if (m < 0)
        throw PreconditionError("s_{m-1} s_m needs m >= 0");
    const std::uint64_t w = v_.size() - 1;
    const std::uint64_t left = index_.length(m - 1);
    if (left + index_.length(m) <= direct_limit_) {
        const auto whole = index_.word(m - 1, budget_) + index_.word(m, budget_);
        return count_occurrences(v_.view(), whole.view());
    }
    // Occurrences crossing the junction start in the last w letters of s_{m-1}.
    const std::uint64_t take = std::min(w, left);
    const auto window = index_.extract(m - 1, left - take, take, budget_) +
                        index_.extract(m, 0, std::min(w, index_.length(m)), budget_);
    std::uint64_t cross = 0;
    for (auto p : find_all(v_.view(), window.view()))
        cross += p < take;
    return in_standard(m - 1) + in_standard(m) + cross;
}

CounterexampleReport separation_demo(const SturmianSpec& spec, std::size_t n_max, DemoOptions options)
{
    if (n_max == 0)
        throw PreconditionError("n_max must be at least 1");
    if (n_max > spec.depth())
        throw DepthError(fmt::format("n_max {} exceeds spec depth {}", n_max, spec.depth()));
    std::vector<std::uint64_t> len;
    try {
        len = sturmian_lengths(spec, n_max);
    } catch (const BudgetError& e) {
        std::size_t fits = 0;
        while (fits < n_max) {
            try {
                (void)sturmian_lengths(spec, fits + 1);
                ++fits;
            } catch (const BudgetError&) {
                break;
            }
        }
        throw BudgetError(fmt::format("{}; reduce n_max to at most {}", e.what(), fits));
    }
    auto L = [&](int n) { return len[static_cast<std::size_t>(n + 1)]; };

    CounterexampleReport report{spec, n_max, {}, 0.0, std::nullopt, std::nullopt, {}, 0.0, 0};
    for (std::size_t n = 1; n < n_max; ++n)
        report.coefficient_sum += 1.0 / (static_cast<double>(spec.coefficient(n)) * static_cast<double>(spec.coefficient(n + 1)));

    // Block counts for every (k, m) in range, cross-checked against the junction route.
    const StandardWordIndex index(spec, n_max);
    std::vector<BigInt> g_sn(n_max + 1, 0), g_cat(n_max + 1, 0);
    for (std::size_t k = 1; k <= n_max; ++k) {
        const BigInt vk = BigInt(L(static_cast<int>(k) - 1)) + L(static_cast<int>(k));
        std::optional<JunctionCounter> junction;
        if (options.cross_check && 2 * (L(static_cast<int>(k) - 1) + L(static_cast<int>(k))) <= options.budget.max_letters)
            junction.emplace(index,
                             index.word(static_cast<int>(k) - 1, options.budget) +
                                 index.word(static_cast<int>(k), options.budget),
                             std::uint64_t{1} << 16, options.budget);
        for (std::size_t m = 1; m <= n_max; ++m) {
            const auto in_sn = block_count(spec, k, m);
            const auto in_cat = block_count_concat(spec, k, m);
            if (junction) {
                const auto a = junction->in_standard(static_cast<int>(m));
                const auto b = junction->in_concat(static_cast<int>(m));
                if (a != in_sn || b != in_cat)
                    throw InvariantViolation(fmt::format(
                        "occurrence routes disagree for v_{} in level {}: block {}/{} vs junction {}/{}", k, m,
                        in_sn.str(), in_cat.str(), a.str(), b.str()));
                ++report.cross_checked_pairs;
            }
            g_sn[m] += in_sn * vk;
            g_cat[m] += in_cat * vk;
        }
    }

    BigInt vk_prefix_sum = 0;  // sum_{i=1}^{n-1} |v_i|
    for (std::size_t n = 1; n <= n_max; ++n) {
        const int ni = static_cast<int>(n);
        CounterexampleRow row;
        row.n = n;
        row.g_sn = g_sn[n];
        row.g_concat = g_cat[n];
        row.len_sn = L(ni);
        row.len_concat = BigInt(L(ni - 1)) + L(ni);
        row.ratio_sn = Rational(row.g_sn, row.len_sn);
        row.ratio_concat = Rational(row.g_concat, row.len_concat);
        const BigInt g_prev = n >= 2 ? g_sn[n - 1] : BigInt(0);  // G(s_0) = 0
        if (n >= 2)
            row.lower_bound_holds = row.ratio_concat >= Rational(row.g_sn, row.len_concat) + 1;
        row.equality_holds = row.g_concat == g_prev + row.g_sn + row.len_concat;
        if (n + 1 <= n_max) {
            const BigInt a = spec.coefficient(n + 1);
            const Rational lhs(g_sn[n + 1], BigInt(L(ni + 1)));
            const Rational rhs(a * g_sn[n] + g_prev + a * vk_prefix_sum, a * BigInt(L(ni)));
            row.upper_bound_holds = lhs <= rhs;
        }
        vk_prefix_sum += BigInt(L(ni - 1)) + L(ni);
        report.rows.push_back(std::move(row));
    }
    report.gbar_estimate = static_cast<double>(report.rows.back().ratio_sn);

    for (std::size_t n = 1; n <= n_max; ++n)
        if (2 * n > n_max)
            report.tail.push_back(n);
    if (report.tail.size() >= 2) {
        Rational lo = report.rows[report.tail.front() - 1].ratio_concat;
        Rational hi = report.rows[report.tail.front() - 1].ratio_sn;
        for (auto n : report.tail) {
            lo = std::min(lo, report.rows[n - 1].ratio_concat);
            hi = std::max(hi, report.rows[n - 1].ratio_sn);
        }
        report.gap_exact = lo - hi;
        report.gap_statistic = static_cast<double>(*report.gap_exact);
    }
    return report;
}

bool superadditivity_check(const GConfig& cfg, std::size_t trials, std::uint64_t seed, std::size_t max_length)
{
    const StandardWordIndex index(cfg.spec, cfg.depth);
    // Longest word whose G is provably exact at this depth.
    std::uint64_t exact_limit = 0;
    for (std::size_t k = 1; k <= cfg.depth; ++k)
        exact_limit = std::max(exact_limit, index.length(static_cast<int>(k) - 1) + index.length(static_cast<int>(k)) - 1);
    const std::uint64_t source_len = std::min<std::uint64_t>(index.length(static_cast<int>(cfg.depth)), 1u << 18);
    const auto source = index.extract(static_cast<int>(cfg.depth), 0, source_len);
    const std::size_t longest = static_cast<std::size_t>(std::min<std::uint64_t>({max_length, exact_limit, source_len}));
    if (longest == 0)
        return true;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = 1 + rng() % longest;
        const std::size_t start = rng() % (source.size() - m + 1);
        const std::size_t k = rng() % (m + 1);
        const auto w = source.slice(start, m);
        if (g_value(w, cfg) < g_value(w.slice(0, k), cfg) + g_value(w.slice(k, m - k), cfg))
            return false;
    }
    return true;
}

SubadditiveFn negative_g(const GConfig& cfg)
{
    const auto len = sturmian_lengths(cfg.spec, cfg.depth);
    double bound = 0.0;
    for (std::size_t k = 1; k <= cfg.depth; ++k)
        bound += static_cast<double>(len[k]) + static_cast<double>(len[k + 1]);
    SubadditiveFn F;
    F.name = "neg_G";
    F.bound = bound;
    F.value = [cfg](const Word& w) { return -static_cast<double>(g_value(w, cfg)); };
    return F;
}

}  // namespace uniferg
