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

#include "uniferg/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace uniferg {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, bool& overflow)
{
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        overflow = true;
        return 0;
    }
    return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, bool& overflow)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        overflow = true;
        return 0;
    }
    return a * b;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

void check_budget(std::size_t letters, MemoryBudget budget, const std::string& what)
{
    if (letters > budget.max_letters)
        throw BudgetError(fmt::format("{} needs {} letters, budget is {}", what, letters,
                                      budget.max_letters));
}

// Appends the first `want` letters of s_n. `len[n + 1]` holds |s_n| for the
// levels that were computed; longer levels never need to be materialised.
void append_standard_prefix(const SturmianSpec& spec, const std::vector<std::uint64_t>& len, int n,
                            std::uint64_t want, std::string& out)
{
    if (want == 0)
        return;
    if (n == -1) {
        out.push_back(1);
        return;
    }
    if (n == 0) {
        out.push_back(0);
        return;
    }
    const auto a = spec.coefficient(static_cast<std::size_t>(n));
    // s_1 = s_0^{a_1 - 1} s_{-1}, s_n = s_{n-1}^{a_n} s_{n-2}
    const std::uint64_t reps = n == 1 ? a - 1 : a;
    const int head = n - 1;
    const int tail = n == 1 ? -1 : n - 2;
    const std::uint64_t head_len = len[static_cast<std::size_t>(head + 1)];
    for (std::uint64_t r = 0; r < reps && want > 0; ++r) {
        const auto take = std::min(want, head_len);
        append_standard_prefix(spec, len, head, take, out);
        want -= take;
    }
    if (want > 0)
        append_standard_prefix(spec, len, tail, want, out);
}

}  // namespace

Word::Word(std::initializer_list<Symbol> symbols)
{
    data_.reserve(symbols.size());
    for (auto s : symbols)
        data_.push_back(static_cast<char>(s));
}

Word Word::from_digits(std::string_view digits)
{
    std::string data;
    data.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9')
            throw PreconditionError(fmt::format("invalid letter '{}' in word", c));
        data.push_back(static_cast<char>(c - '0'));
    }
    return Word(std::move(data));
}

std::string Word::to_digits() const
{
    std::string out(data_);
    for (auto& c : out)
        c = static_cast<char>('0' + c);
    return out;
}

Word Word::power(std::size_t k) const
{
    std::string out;
    out.reserve(data_.size() * k);
    for (std::size_t i = 0; i < k; ++i)
        out += data_;
    return Word(std::move(out));
}

SturmianSpec::SturmianSpec(std::vector<std::uint64_t> coefficients)
    : coefficients_(std::move(coefficients))
{
    if (coefficients_.empty())
        throw PreconditionError("sturmian spec needs at least one coefficient");
    for (std::size_t i = 0; i < coefficients_.size(); ++i)
        if (coefficients_[i] == 0)
            throw PreconditionError(fmt::format("coefficient a_{} must be positive", i + 1));
}

SturmianSpec SturmianSpec::parse(std::string_view text)
{
    std::vector<std::uint64_t> coeffs;
    for (auto field : split(text, ',')) {
        field = trim(field);
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
            throw PreconditionError(fmt::format("bad coefficient '{}' in sturmian spec", field));
        coeffs.push_back(value);
    }
    return SturmianSpec(std::move(coeffs));
}

SturmianSpec SturmianSpec::golden(std::size_t depth)
{
    return SturmianSpec(std::vector<std::uint64_t>(depth, 1));
}

SturmianSpec SturmianSpec::powers_of_two(std::size_t depth)
{
    if (depth > 63)
        throw PreconditionError("2^n coefficients overflow beyond n = 63");
    std::vector<std::uint64_t> coeffs(depth);
    for (std::size_t n = 1; n <= depth; ++n)
        coeffs[n - 1] = std::uint64_t{1} << n;
    return SturmianSpec(std::move(coeffs));
}

std::string SturmianSpec::to_string() const { return fmt::format("{}", fmt::join(coefficients_, ",")); }

std::vector<std::uint64_t> sturmian_lengths(const SturmianSpec& spec, std::size_t n_max)
{
    if (n_max > spec.depth())
        throw DepthError(fmt::format("n_max {} exceeds spec depth {}", n_max, spec.depth()));
    std::vector<std::uint64_t> len{1, 1};
    for (std::size_t n = 1; n <= n_max; ++n) {
        bool overflow = false;
        const auto a = spec.coefficient(n);
        std::uint64_t value;
        if (n == 1)
            value = a;  // (a_1 - 1)|s_0| + |s_{-1}|
        else
            value = checked_add(checked_mul(a, len[n], overflow), len[n - 1], overflow);
        if (overflow)
            throw BudgetError(fmt::format("|s_{}| overflows 64-bit length", n));
        len.push_back(value);
    }
    return len;
}

StandardWords sturmian_words(const SturmianSpec& spec, std::size_t n_max, MemoryBudget budget)
{
    const auto len = sturmian_lengths(spec, n_max);
    std::size_t total = 2;
    for (std::size_t n = 1; n <= n_max; ++n) {
        total += len[n + 1];
        if (len[n + 1] > budget.max_letters || total > budget.max_letters)
            throw BudgetError(fmt::format("s_{} has {} letters; words up to it exceed budget {}", n,
                                          len[n + 1], budget.max_letters));
    }
    std::vector<Word> words{Word{1}, Word{0}};
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto a = spec.coefficient(n);
        if (n == 1)
            words.push_back(words[1].power(a - 1) + words[0]);
        else
            words.push_back(words[n].power(a) + words[n - 1]);
    }
    return StandardWords(std::move(words));
}

Word sturmian_prefix(const SturmianSpec& spec, std::size_t length, MemoryBudget budget)
{
    if (length == 0)
        return {};
    check_budget(length, budget, "sturmian prefix");
    std::vector<std::uint64_t> len{1, 1};
    int level = -1;
    for (std::size_t n = 1; n <= spec.depth(); ++n) {
        const auto a = spec.coefficient(n);
        bool overflow = false;
        std::uint64_t value = n == 1 ? a : checked_add(checked_mul(a, len[n], overflow), len[n - 1], overflow);
        if (overflow)
            value = std::numeric_limits<std::uint64_t>::max();  // only compared against `length`
        len.push_back(value);
        if (value >= length) {
            level = static_cast<int>(n);
            break;
        }
    }
    if (level < 0)
        throw DepthError(fmt::format("spec of depth {} yields only {} letters, {} requested",
                                     spec.depth(), len.back(), length));
    std::string out;
    out.reserve(length);
    append_standard_prefix(spec, len, level, length, out);
    return Word(std::move(out));
}

SubstitutionRule::SubstitutionRule(std::vector<Word> images) : images_(std::move(images))
{
    if (images_.empty())
        throw PreconditionError("substitution needs a nonempty alphabet");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i].empty())
            throw PreconditionError(fmt::format("image of letter {} is empty", i));
        for (auto s : images_[i].symbols())
            if (s >= images_.size())
                throw PreconditionError(
                    fmt::format("image of letter {} uses letter {} outside the alphabet", i, s));
    }
}

SubstitutionRule SubstitutionRule::parse(std::string_view text)
{
    auto fields = split(text, ',');
    std::vector<Word> images(fields.size());
    std::vector<bool> seen(fields.size(), false);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        auto field = trim(fields[i]);
        std::size_t letter = i;
        if (auto colon = field.find(':'); colon != std::string_view::npos) {
            auto key = trim(field.substr(0, colon));
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), letter);
            if (key.empty() || ec != std::errc{} || ptr != key.data() + key.size())
                throw PreconditionError(fmt::format("bad letter '{}' in substitution", key));
            field = trim(field.substr(colon + 1));
        }
        if (letter >= fields.size() || seen[letter])
            throw PreconditionError(fmt::format("substitution letter {} is out of range or repeated", letter));
        seen[letter] = true;
        images[letter] = Word::from_digits(field);
    }
    return SubstitutionRule(std::move(images));
}

SubstitutionRule SubstitutionRule::fibonacci() { return SubstitutionRule({Word{0, 1}, Word{0}}); }

Word SubstitutionRule::apply(const Word& w, MemoryBudget budget) const
{
    std::size_t total = 0;
    for (auto s : w.symbols())
        total += image(s).size();
    check_budget(total, budget, "substitution image");
    std::string out;
    out.reserve(total);
    for (auto s : w.symbols())
        out += image(s).view();
    return Word(std::move(out));
}

std::vector<std::vector<std::uint64_t>> SubstitutionRule::letter_count_matrix() const
{
    const auto k = alphabet_size();
    std::vector<std::vector<std::uint64_t>> m(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t j = 0; j < k; ++j)
        for (auto s : images_[j].symbols())
            ++m[s][j];
    return m;
}

std::string SubstitutionRule::to_string() const
{
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < images_.size(); ++i)
        parts.push_back(fmt::format("{}:{}", i, images_[i].to_digits()));
    return fmt::format("{}", fmt::join(parts, ","));
}

Word substitution_iterate(const SubstitutionRule& rule, Letter seed, std::size_t k, MemoryBudget budget)
{
    if (seed.symbol >= rule.alphabet_size())
        throw PreconditionError(fmt::format("seed letter {} outside the alphabet", seed.symbol));
    Word w{seed.symbol};
    for (std::size_t i = 0; i < k; ++i)
        w = rule.apply(w, budget);
    return w;
}

bool is_primitive(const SubstitutionRule& rule)
{
    const auto k = rule.alphabet_size();
    const auto counts = rule.letter_count_matrix();
    using Pattern = std::vector<std::vector<bool>>;
    Pattern base(k, std::vector<bool>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            base[i][j] = counts[i][j] > 0;
    auto positive = [](const Pattern& p) {
        return std::all_of(p.begin(), p.end(),
                           [](const auto& row) { return std::all_of(row.begin(), row.end(), [](bool b) { return b; }); });
    };
    Pattern power = base;
    for (std::size_t p = 1; p <= k * k; ++p) {
        if (positive(power))
            return true;
        Pattern next(k, std::vector<bool>(k, false));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t l = 0; l < k; ++l)
                if (power[i][l])
                    for (std::size_t j = 0; j < k; ++j)
                        if (base[l][j])
                            next[i][j] = true;
        power = std::move(next);
    }
    return false;
}

Word generator_prefix(const Generator& gen, std::size_t length, MemoryBudget budget)
{
    if (const auto* spec = std::get_if<SturmianSpec>(&gen))
        return sturmian_prefix(*spec, length, budget);
    const auto& sub = std::get<SubstitutionGenerator>(gen);
    const auto& img = sub.rule.image(sub.seed);
    if (img.size() < 2 || img[0] != sub.seed)
        throw PreconditionError(fmt::format(
            "substitution image of seed {} must start with the seed and have length >= 2", sub.seed));
    check_budget(length, budget, "substitution prefix");
    // Each pass only needs the first `length` letters of the previous iterate.
    std::string cur(1, static_cast<char>(sub.seed));
    while (cur.size() < length) {
        std::string next;
        next.reserve(std::min(length, cur.size() * 2 + img.size()));
        for (char c : cur) {
            next += sub.rule.image(static_cast<Symbol>(c)).view();
            if (next.size() >= length)
                break;
        }
        cur = std::move(next);
    }
    cur.resize(length);
    return Word(std::move(cur));
}

std::size_t alphabet_size(const Generator& gen)
{
    if (std::holds_alternative<SturmianSpec>(gen))
        return 2;
    return std::get<SubstitutionGenerator>(gen).rule.alphabet_size();
}

std::string describe(const Generator& gen)
{
    if (const auto* spec = std::get_if<SturmianSpec>(&gen))
        return "sturmian:" + spec->to_string();
    const auto& sub = std::get<SubstitutionGenerator>(gen);
    return fmt::format("substitution:{};seed={}", sub.rule.to_string(), sub.seed);
}

Generator parse_generator(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto depth = [&] {
        std::size_t d = 0;
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), d);
        if (ec != std::errc() || ptr != body.data() + body.size() || d == 0)
            throw PreconditionError(fmt::format("generator \"{}\": expected a positive depth", text));
        return d;
    };
    if (kind == "sturmian")
        return SturmianSpec::parse(body);
    if (kind == "golden")
        return SturmianSpec::golden(depth());
    if (kind == "fast")
        return SturmianSpec::powers_of_two(depth());
    if (kind == "fibonacci" && colon == std::string::npos)
        return SubstitutionGenerator{SubstitutionRule::fibonacci(), 0};
    if (kind == "substitution") {
        const auto semi = body.find(";seed=");
        SubstitutionGenerator g{SubstitutionRule::parse(body.substr(0, semi)), 0};
        if (semi != std::string::npos) {
            const auto seed = body.substr(semi + 6);
            if (seed.size() != 1 || seed[0] < '0' || seed[0] > '9')
                throw PreconditionError(fmt::format("generator \"{}\": seed must be one digit", text));
            g.seed = static_cast<Symbol>(seed[0] - '0');
        }
        if (g.seed >= g.rule.alphabet_size())
            throw PreconditionError(fmt::format("generator \"{}\": seed outside the alphabet", text));
        return g;
    }
    throw PreconditionError(fmt::format("unknown generator \"{}\"", text));
}

bool is_lr_certified(const Generator& gen, std::uint64_t coefficient_bound)
{
    if (const auto* spec = std::get_if<SturmianSpec>(&gen)) {
        const auto c = spec->coefficients();
        return *std::max_element(c.begin(), c.end()) <= coefficient_bound;
    }
    return is_primitive(std::get<SubstitutionGenerator>(gen).rule);
}

std::set<Word> subwords(const Word& w, std::size_t n)
{
    std::set<Word> out;
    if (n > w.size())
        return out;
    std::set<std::string_view> views;
    const auto v = w.view();
    for (std::size_t p = 0; p + n <= v.size(); ++p)
        views.insert(v.substr(p, n));
    for (auto s : views)
        out.emplace_hint(out.end(), std::string(s));
    return out;
}

std::vector<std::size_t> find_all(std::string_view v, std::string_view w, std::size_t limit)
{
    std::vector<std::size_t> out;
    if (v.empty() || v.size() > w.size())
        return out;
    std::vector<std::size_t> fail(v.size(), 0);
    for (std::size_t i = 1, k = 0; i < v.size(); ++i) {
        while (k > 0 && v[i] != v[k])
            k = fail[k - 1];
        if (v[i] == v[k])
            ++k;
        fail[i] = k;
    }
    for (std::size_t i = 0, k = 0; i < w.size(); ++i) {
        while (k > 0 && w[i] != v[k])
            k = fail[k - 1];
        if (w[i] == v[k])
            ++k;
        if (k == v.size()) {
            out.push_back(i + 1 - v.size());
            if (out.size() >= limit)
                break;
            k = fail[k - 1];
        }
    }
    return out;
}

Occurrences occurrences(const Word& v, const Word& w)
{
    if (v.empty())
        throw PreconditionError("occurrences of the empty word are undefined");
    Occurrences out;
    out.positions = find_all(v.view(), w.view());
    out.count = out.positions.size();
    return out;
}

std::size_t count_occurrences(std::string_view v, std::string_view w)
{
    if (v.empty())
        throw PreconditionError("occurrences of the empty word are undefined");
    return find_all(v, w).size();
}

std::size_t complexity(const Word& w, std::size_t n)
{
    if (n > w.size())
        return 0;
    std::set<std::string_view> views;
    const auto v = w.view();
    for (std::size_t p = 0; p + n <= v.size(); ++p)
        views.insert(v.substr(p, n));
    return views.size();
}

LanguageSample language_sample(const Generator& gen, std::size_t n, double safety_factor,
                               SamplingOptions options)
{
    if (!(safety_factor >= 2.0))
        throw PreconditionError("safety factor must be at least 2");
    LanguageSample sample;
    sample.n = n;
    auto length = static_cast<std::size_t>(std::ceil(safety_factor * static_cast<double>(std::max<std::size_t>(n, 1))));

    auto members_of = [&](std::size_t len) {
        auto set = subwords(generator_prefix(gen, len, options.budget), n);
        return std::vector<Word>(set.begin(), set.end());
    };

    std::vector<Word> current;
    try {
        current = members_of(length);
    } catch (const DepthError&) {
        return sample;  // generator cannot even supply the initial prefix
    }
    sample.members = current;
    sample.source_prefix_length = length;
    for (std::size_t d = 0; d < options.doubling_cap; ++d) {
        std::vector<Word> larger;
        try {
            larger = members_of(length * 2);
        } catch (const DepthError&) {
            return sample;
        } catch (const BudgetError&) {
            return sample;
        }
        if (larger == current) {
            sample.saturated = true;
            return sample;
        }
        length *= 2;
        current = std::move(larger);
        sample.members = current;
        sample.source_prefix_length = length;
    }
    return sample;
}

Word read_word(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw PreconditionError("word file is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return Word::from_digits(line);
}

void write_word(std::ostream& out, const Word& w) { out << w.to_digits() << '\n'; }

}  // namespace uniferg
