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
#include <vector>

#include "uniferg/words.hpp"

namespace uniferg {

struct RepetitivityEntry {
    std::size_t n = 0;
    std::size_t R = 0;
    double ratio = 0.0;  ///< R / n
};

struct RepetitivityReport {
    std::vector<RepetitivityEntry> entries;  ///< sorted by n
    double max_ratio = 0.0;
    std::size_t window_source_length = 0;
};

struct FrequencySpread {
    Word v;
    std::size_t L = 0;
    double max_freq = 0.0;
    double min_freq = 0.0;
    double gap = 0.0;
};

/// Least L such that every length-L window of w contains every length-n factor
/// of w. Requires n >= 1. A value with 2R > |w| is not witnessed by two
/// disjoint windows and raises UnsaturatedError.
std::size_t repetitivity_function(const Word& w, std::size_t n);

struct RepetitivityOptions {
    std::size_t initial_length = 0;  ///< 0: max(4096, 32 * max n)
    std::size_t doubling_cap = 8;
    unsigned threads = 1;
    MemoryBudget budget = {};
};

/// R(n) and R(n)/n for every n in n_list, on a generator prefix that is doubled
/// until all entries agree between L and 2L.
RepetitivityReport lr_constant_estimate(const Generator& gen, std::vector<std::size_t> n_list,
                                        RepetitivityOptions options = {});

/// Extremes of #_v(u)/L over all length-L windows u of w (step 1).
FrequencySpread frequency_spread(const Word& w, const Word& v, std::size_t L);

}  // namespace uniferg
