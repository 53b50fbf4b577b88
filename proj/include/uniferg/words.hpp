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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uniferg/errors.hpp"

namespace uniferg {

using Symbol = std::uint8_t;

/// A letter of a decorated alphabet. The decoration is carried for callers
/// that attach a real value to a tile (the potential in spectral code).
struct Letter {
    Symbol symbol = 0;
    std::optional<double> decoration;
};

/// Finite word over a small alphabet, stored as one byte per letter.
class Word {
public:
    Word() = default;
    explicit Word(std::string symbols) : data_(std::move(symbols)) {}
    Word(std::initializer_list<Symbol> symbols);

    /// Parses ASCII digits ("0110"); every digit becomes one symbol.
    static Word from_digits(std::string_view digits);
    std::string to_digits() const;

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    Symbol operator[](std::size_t i) const noexcept { return static_cast<Symbol>(data_[i]); }

    /// Raw symbol bytes, suitable for substring search and hashing.
    std::string_view view() const noexcept { return data_; }
    std::span<const Symbol> symbols() const noexcept
    {
        return {reinterpret_cast<const Symbol*>(data_.data()), data_.size()};
    }

    Word slice(std::size_t pos, std::size_t len) const { return Word(data_.substr(pos, len)); }
    Word power(std::size_t k) const;
    bool is_prefix_of(const Word& other) const noexcept { return other.view().starts_with(view()); }

    Word& operator+=(const Word& other)
    {
        data_ += other.data_;
        return *this;
    }
    friend Word operator+(Word lhs, const Word& rhs) { return lhs += rhs; }

    friend bool operator==(const Word&, const Word&) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept
    {
        return a.data_.compare(b.data_) <=> 0;
    }

private:
    std::string data_;
};

/// Continued-fraction coefficients a_1..a_N driving the standard-word recursion.
class SturmianSpec {
public:
    explicit SturmianSpec(std::vector<std::uint64_t> coefficients);

    /// Comma-separated positive integers, e.g. "1,1,2,3".
    static SturmianSpec parse(std::string_view text);
    /// a_n = 1 for n = 1..depth (the Fibonacci / golden-mean word).
    static SturmianSpec golden(std::size_t depth);
    /// a_n = 2^n for n = 1..depth.
    static SturmianSpec powers_of_two(std::size_t depth);

    std::size_t depth() const noexcept { return coefficients_.size(); }
    /// One-based: coefficient(1) is a_1.
    std::uint64_t coefficient(std::size_t n) const { return coefficients_.at(n - 1); }
    std::span<const std::uint64_t> coefficients() const noexcept { return coefficients_; }
    std::string to_string() const;

    friend bool operator==(const SturmianSpec&, const SturmianSpec&) = default;

private:
    std::vector<std::uint64_t> coefficients_;
};

/// The words s_{-1}, s_0, ..., s_{n_max}.
class StandardWords {
public:
    explicit StandardWords(std::vector<Word> words) : words_(std::move(words)) {}
    const Word& operator[](int n) const { return words_.at(static_cast<std::size_t>(n + 1)); }
    int max_index() const noexcept { return static_cast<int>(words_.size()) - 2; }

private:
    std::vector<Word> words_;
};

/// Lengths |s_n| for n = -1..n_max (index n+1). Throws BudgetError on 64-bit overflow.
std::vector<std::uint64_t> sturmian_lengths(const SturmianSpec& spec, std::size_t n_max);

/// s_{-1} = 1, s_0 = 0, s_1 = s_0^{a_1-1} s_{-1}, s_n = s_{n-1}^{a_n} s_{n-2}.
/// The total number of letters must fit the budget; otherwise BudgetError names the first offending n.
StandardWords sturmian_words(const SturmianSpec& spec, std::size_t n_max, MemoryBudget budget = {});

/// First L letters of the characteristic word c_alpha = lim s_n.
Word sturmian_prefix(const SturmianSpec& spec, std::size_t length, MemoryBudget budget = {});

class SubstitutionRule {
public:
    /// images[i] is the image of letter i; every image must be nonempty.
    explicit SubstitutionRule(std::vector<Word> images);

    /// "01,0" (image of letter i is the i-th field) or "0:01,1:0".
    static SubstitutionRule parse(std::string_view text);
    static SubstitutionRule fibonacci();

    std::size_t alphabet_size() const noexcept { return images_.size(); }
    const Word& image(Symbol s) const { return images_.at(s); }
    Word apply(const Word& w, MemoryBudget budget = {}) const;
    /// counts[i][j] = number of occurrences of letter i in the image of letter j.
    std::vector<std::vector<std::uint64_t>> letter_count_matrix() const;
    std::string to_string() const;

private:
    std::vector<Word> images_;
};

Word substitution_iterate(const SubstitutionRule& rule, Letter seed, std::size_t k,
                          MemoryBudget budget = {});

/// True iff some power M^p, p <= alphabet_size^2, of the letter-count matrix is entrywise positive.
bool is_primitive(const SubstitutionRule& rule);

/// A substitution together with the letter whose fixed point is iterated.
struct SubstitutionGenerator {
    SubstitutionRule rule;
    Symbol seed = 0;
};

using Generator = std::variant<SturmianSpec, SubstitutionGenerator>;

/// First `length` letters of the one-sided sequence the generator defines.
/// Substitutions must satisfy rule(seed) = seed... with |rule(seed)| >= 2.
Word generator_prefix(const Generator& gen, std::size_t length, MemoryBudget budget = {});
std::size_t alphabet_size(const Generator& gen);
std::string describe(const Generator& gen);
/// Inverse of describe, plus the shorthands "golden:<depth>", "fast:<depth>"
/// (a_n = 2^n) and "fibonacci" (0 -> 01, 1 -> 0 from seed 0).
Generator parse_generator(const std::string& text);

/// Bounded coefficients (max a_n <= coefficient_bound) or a primitive substitution.
bool is_lr_certified(const Generator& gen, std::uint64_t coefficient_bound = 64);

/// Distinct factors of length n. Empty when n > |w|.
std::set<Word> subwords(const Word& w, std::size_t n);

struct Occurrences {
    std::size_t count = 0;
    std::vector<std::size_t> positions;
};

/// Overlapping occurrences of v in w. Throws PreconditionError for empty v.
Occurrences occurrences(const Word& v, const Word& w);
std::size_t count_occurrences(std::string_view v, std::string_view w);

/// Start positions of v in w in increasing order (Knuth-Morris-Pratt, linear time),
/// stopping after `limit` hits.
std::vector<std::size_t> find_all(std::string_view v, std::string_view w,
                                  std::size_t limit = static_cast<std::size_t>(-1));

/// p(n) = number of distinct length-n factors of w.
std::size_t complexity(const Word& w, std::size_t n);

struct LanguageSample {
    std::size_t n = 0;
    std::vector<Word> members;  ///< sorted, distinct
    std::size_t source_prefix_length = 0;
    bool saturated = false;
};

struct SamplingOptions {
    std::size_t doubling_cap = 8;
    MemoryBudget budget = {};
};

/// Length-n factors of a prefix of length ceil(safety_factor * n), doubling the
/// prefix until one doubling adds no member. A sample that never stabilises, or
/// whose generator runs out of depth, is returned with saturated = false.
LanguageSample language_sample(const Generator& gen, std::size_t n, double safety_factor = 4.0,
                               SamplingOptions options = {});

/// Word file format: one line of ASCII digits terminated by '\n'.
Word read_word(std::istream& in);
void write_word(std::ostream& out, const Word& w);

}  // namespace uniferg

template <>
struct std::hash<uniferg::Word> {
    std::size_t operator()(const uniferg::Word& w) const noexcept
    {
        return std::hash<std::string_view>{}(w.view());
    }
};
