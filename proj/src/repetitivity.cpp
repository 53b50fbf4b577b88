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

#include "uniferg/repetitivity.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>

#include "uniferg/parallel.hpp"

namespace uniferg {

namespace {

// Dense id of the length-n factor starting at each position. Short factors are
// packed exactly into a 64-bit key; longer ones are hashed as byte strings.
std::vector<std::uint32_t> factor_ids(const Word& w, std::size_t n, std::size_t& distinct)
{
    const std::size_t count = w.size() - n + 1;
    std::vector<std::uint32_t> ids(count);
    Symbol top = 0;
    for (auto s : w.symbols())
        top = std::max(top, s);
    const unsigned bits = std::max(1u, static_cast<unsigned>(std::bit_width(static_cast<unsigned>(top))));

    if (n * bits <= 64) {
        std::unordered_map<std::uint64_t, std::uint32_t> table;
        const std::uint64_t mask = n * bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (n * bits)) - 1;
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < n; ++i)
            key = (key << bits) | w[i];
        for (std::size_t p = 0;; ++p) {
            auto [it, fresh] = table.try_emplace(key, static_cast<std::uint32_t>(table.size()));
            ids[p] = it->second;
            if (p + 1 == count)
                break;
            key = ((key << bits) | w[p + n]) & mask;
        }
        distinct = table.size();
        return ids;
    }
    std::unordered_map<std::string_view, std::uint32_t> table;
    const auto v = w.view();
    for (std::size_t p = 0; p < count; ++p) {
        auto [it, fresh] = table.try_emplace(v.substr(p, n), static_cast<std::uint32_t>(table.size()));
        ids[p] = it->second;
    }
    distinct = table.size();
    return ids;
}

}  // namespace

std::size_t repetitivity_function(const Word& w, std::size_t n)
{
    if (n == 0)
        throw PreconditionError("repetitivity needs n >= 1");
    if (n > w.size())
        throw UnsaturatedError(fmt::format("word of length {} has no factor of length {}", w.size(), n));
    std::size_t distinct = 0;
    const auto ids = factor_ids(w, n, distinct);
    // Window [s, s+L) contains the occurrence at q iff s <= q and q + n <= s + L.
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> last(distinct, none);
    std::size_t R = n;
    for (std::size_t q = 0; q < ids.size(); ++q) {
        auto& prev = last[ids[q]];
        const std::size_t need = prev == none ? q + n : q - prev - 1 + n;
        R = std::max(R, need);
        prev = q;
    }
    for (auto q : last)
        R = std::max(R, w.size() - q);
    if (2 * R > w.size())
        throw UnsaturatedError(
            fmt::format("R({}) = {} is not witnessed twice in a prefix of length {}", n, R, w.size()));
    return R;
}

RepetitivityReport lr_constant_estimate(const Generator& gen, std::vector<std::size_t> n_list,
                                        RepetitivityOptions options)
{
    if (n_list.empty())
        throw PreconditionError("n_list must be nonempty");
    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
    if (n_list.front() == 0)
        throw PreconditionError("repetitivity needs n >= 1");

    std::size_t length = options.initial_length;
    if (length == 0)
        length = std::max<std::size_t>(4096, 32 * n_list.back());

    // nullopt marks an entry that the current prefix cannot witness.
    auto evaluate = [&](const Word& w) {
        std::vector<std::size_t> R(n_list.size(), 0);
        std::vector<bool> ok(n_list.size(), true);
        parallel_for(n_list.size(), options.threads, [&](std::size_t i) {
            try {
                R[i] = repetitivity_function(w, n_list[i]);
            } catch (const UnsaturatedError&) {
                ok[i] = false;
            }
        });
        const bool all = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
        return std::make_pair(all, R);
    };

    auto current = evaluate(generator_prefix(gen, length, options.budget));
    for (std::size_t d = 0; d < options.doubling_cap; ++d) {
        auto next = evaluate(generator_prefix(gen, 2 * length, options.budget));
        if (current.first && next.first && current.second == next.second) {
            RepetitivityReport report;
            report.window_source_length = length;
            for (std::size_t i = 0; i < n_list.size(); ++i) {
                const double ratio = static_cast<double>(current.second[i]) / static_cast<double>(n_list[i]);
                report.entries.push_back({n_list[i], current.second[i], ratio});
                report.max_ratio = std::max(report.max_ratio, ratio);
            }
            return report;
        }
        length *= 2;
        current = std::move(next);
    }
    throw UnsaturatedError(fmt::format("repetitivity entries did not stabilise up to prefix length {}", length));
}

FrequencySpread frequency_spread(const Word& w, const Word& v, std::size_t L)
{
    if (v.empty())
        throw PreconditionError("frequency of the empty word is undefined");
    if (L < v.size())
        throw PreconditionError(fmt::format("window length {} shorter than |v| = {}", L, v.size()));
    if (L > w.size())
        throw PreconditionError(fmt::format("word of length {} has no window of length {}", w.size(), L));
    // hits[p + 1] - hits[s] = occurrences starting in [s, p]
    std::vector<std::size_t> hits(w.size() + 1, 0);
    const auto hay = w.view();
    const auto needle = v.view();
    for (std::size_t p = 0; p < w.size(); ++p)
        hits[p + 1] = hits[p] + (hay.compare(p, needle.size(), needle) == 0 ? 1 : 0);
    std::size_t lo = static_cast<std::size_t>(-1), hi = 0;
    const std::size_t span = L - v.size() + 1;
    for (std::size_t s = 0; s + L <= w.size(); ++s) {
        const auto c = hits[s + span] - hits[s];
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    FrequencySpread out;
    out.v = v;
    out.L = L;
    out.max_freq = static_cast<double>(hi) / static_cast<double>(L);
    out.min_freq = static_cast<double>(lo) / static_cast<double>(L);
    out.gap = out.max_freq - out.min_freq;
    return out;
}

}  // namespace uniferg
