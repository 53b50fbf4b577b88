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

#include "uniferg/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "uniferg/parallel.hpp"

namespace uniferg {

namespace {

constexpr double kHigh = 0x1p64;
constexpr double kLow = 0x1p-64;

double conj_s(double x) { return x; }
std::complex<double> conj_s(std::complex<double> x) { return std::conj(x); }

double ldexp_s(double x, long e)
{
    if (e < -4000)
        return 0.0;
    return std::ldexp(x, static_cast<int>(std::min<long>(e, 4000)));
}

std::complex<double> ldexp_s(std::complex<double> x, long e) { return {ldexp_s(x.real(), e), ldexp_s(x.imag(), e)}; }

template <class S>
detail::Scaled<S> add(detail::Scaled<S> a, detail::Scaled<S> b)
{
    if (a.m == S(0))
        return b;
    if (b.m == S(0))
        return a;
    if (a.e < b.e)
        std::swap(a, b);
    return {a.m + ldexp_s(b.m, b.e - a.e), a.e};
}

template <class T>
double sigma_max_sq(double f2, double abs_det)
{
    const double disc = f2 * f2 - 4.0 * abs_det * abs_det;
    return 0.5 * (f2 + std::sqrt(std::max(0.0, disc)));
}

template <class T>
double spectral_norm_impl(const Mat2<T>& m)
{
    const double f2 = std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d);
    return std::sqrt(sigma_max_sq<T>(f2, std::abs(m.det())));
}

}  // namespace

RealMat2 transfer_matrix(double E, double a) { return {E - a, -1.0, 1.0, 0.0}; }

ComplexMat2 transfer_matrix(std::complex<double> E, double a) { return {E - a, -1.0, 1.0, 0.0}; }

double frobenius_norm(const RealMat2& m) { return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d); }

double frobenius_norm(const ComplexMat2& m)
{
    return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

double spectral_norm(const RealMat2& m) { return spectral_norm_impl(m); }
double spectral_norm(const ComplexMat2& m) { return spectral_norm_impl(m); }

template <class Scalar>
void BasicTransferState<Scalar>::normalize(Entry& x)
{
    const double mag = std::abs(x.m);
    if (mag == 0.0) {
        x.e = 0;
        return;
    }
    if (mag > kHigh || mag < kLow) {
        int k = 0;
        (void)std::frexp(mag, &k);
        x.m = ldexp_s(x.m, -k);
        x.e += k;
        ++renorms_;
    }
}

template <class Scalar>
void BasicTransferState<Scalar>::push_left(const Matrix& m)
{
    const Matrix M = m * q_;
    const Scalar x = M.a, y = M.c;
    const double r = std::hypot(std::abs(x), std::abs(y));
    // G = [[conj x, conj y], [-y, x]] / r zeroes the first column of M; M = G^H (G M).
    const Scalar g12 = (conj_s(x) * M.b + conj_s(y) * M.d) / r;
    const Scalar g22 = (-y * M.b + x * M.d) / r;
    q_ = {x / r, -conj_s(y) / r, y / r, conj_s(x) / r};

    // New R = [[r, g12], [0, g22]] * R.
    Entry n11{r11_.m * r, r11_.e};
    Entry n12 = add(Entry{r12_.m * r, r12_.e}, Entry{r22_.m * g12, r22_.e});
    Entry n22{r22_.m * g22, r22_.e};
    normalize(n11);
    normalize(n12);
    normalize(n22);
    r11_ = n11;
    r12_ = n12;
    r22_ = n22;
}

template <class Scalar>
void BasicTransferState<Scalar>::scaled_r(Scalar& r11, Scalar& r12, Scalar& r22, long& top) const
{
    top = std::max(r11_.e, r22_.e);
    if (r12_.m != Scalar(0))
        top = std::max(top, r12_.e);
    r11 = ldexp_s(r11_.m, r11_.e - top);
    r12 = ldexp_s(r12_.m, r12_.e - top);
    r22 = ldexp_s(r22_.m, r22_.e - top);
}

template <class Scalar>
double BasicTransferState<Scalar>::log_norm() const
{
    Scalar r11, r12, r22;
    long top = 0;
    scaled_r(r11, r12, r22, top);
    const double f2 = std::norm(r11) + std::norm(r12) + std::norm(r22);
    const double s2 = sigma_max_sq<Scalar>(f2, std::abs(r11) * std::abs(r22));
    return 0.5 * std::log(s2) + static_cast<double>(top) * std::numbers::ln2;
}

template <class Scalar>
double BasicTransferState<Scalar>::log_abs_det() const
{
    return std::log(std::abs(r11_.m)) + std::log(std::abs(r22_.m)) +
           static_cast<double>(r11_.e + r22_.e) * std::numbers::ln2;
}

template <class Scalar>
Scalar BasicTransferState<Scalar>::det_phase() const
{
    const Scalar d = r11_.m * r22_.m * q_.det();
    return d / std::abs(d);
}

template <class Scalar>
typename BasicTransferState<Scalar>::Matrix BasicTransferState<Scalar>::matrix() const
{
    Scalar r11, r12, r22;
    long top = 0;
    scaled_r(r11, r12, r22, top);
    const double f2 = std::norm(r11) + std::norm(r12) + std::norm(r22);
    const double s = std::sqrt(sigma_max_sq<Scalar>(f2, std::abs(r11) * std::abs(r22)));
    const Matrix R{r11 / s, r12 / s, Scalar(0), r22 / s};
    return q_ * R;
}

template class BasicTransferState<double>;
template class BasicTransferState<std::complex<double>>;

PotentialMap::PotentialMap(std::vector<double> values) : values_(std::move(values))
{
    if (values_.empty())
        throw PreconditionError("potential map needs at least one letter");
    for (double v : values_)
        if (!std::isfinite(v))
            throw PreconditionError("potential values must be finite");
}

PotentialMap PotentialMap::parse(const std::string& text)
{
    std::vector<std::pair<std::size_t, double>> pairs;
    std::size_t start = 0, index = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos)
            end = text.size();
        std::string_view field(text.data() + start, end - start);
        std::size_t letter = index;
        if (auto colon = field.find(':'); colon != std::string_view::npos) {
            auto key = field.substr(0, colon);
            auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), letter);
            if (ec != std::errc{} || p != key.data() + key.size())
                throw PreconditionError(fmt::format("bad letter '{}' in potential", key));
            field = field.substr(colon + 1);
        }
        double value = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || p != field.data() + field.size())
            throw PreconditionError(fmt::format("bad value '{}' in potential", field));
        pairs.emplace_back(letter, value);
        ++index;
        start = end + 1;
    }
    std::vector<double> values(pairs.size(), std::numeric_limits<double>::quiet_NaN());
    for (auto [letter, value] : pairs) {
        if (letter >= values.size() || !std::isnan(values[letter]))
            throw PreconditionError(fmt::format("potential letter {} out of range or repeated", letter));
        values[letter] = value;
    }
    return PotentialMap(std::move(values));
}

double PotentialMap::operator()(Symbol s) const
{
    if (s >= values_.size())
        throw PreconditionError(fmt::format("potential has no value for letter {}", s));
    return values_[s];
}

bool PotentialMap::is_constant() const
{
    return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

double PotentialMap::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

std::string PotentialMap::to_string() const
{
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < values_.size(); ++i)
        parts.push_back(fmt::format("{}:{}", i, values_[i]));
    return fmt::format("{}", fmt::join(parts, ","));
}

namespace {

template <class E, class State>
State product(E energy, const Word& w, const PotentialMap& pot)
{
    // One matrix per distinct letter, then M(w) = T(w_n) ... T(w_1).
    std::vector<typename State::Matrix> table;
    for (std::size_t s = 0; s < pot.alphabet_size(); ++s)
        table.push_back(transfer_matrix(energy, pot(static_cast<Symbol>(s))));
    State state;
    for (auto s : w.symbols()) {
        if (s >= table.size())
            throw PreconditionError(fmt::format("potential has no value for letter {}", s));
        state.push_left(table[s]);
    }
    return state;
}

}  // namespace

TransferState cocycle_product(double E, const Word& w, const PotentialMap& pot)
{
    return product<double, TransferState>(E, w, pot);
}

ComplexTransferState cocycle_product(std::complex<double> E, const Word& w, const PotentialMap& pot)
{
    return product<std::complex<double>, ComplexTransferState>(E, w, pot);
}

double log_norm(double E, const Word& w, const PotentialMap& pot) { return cocycle_product(E, w, pot).log_norm(); }

double log_norm(std::complex<double> E, const Word& w, const PotentialMap& pot)
{
    return cocycle_product(E, w, pot).log_norm();
}

SubadditiveFn log_norm_function(double E, const PotentialMap& pot)
{
    SubadditiveFn F;
    F.name = fmt::format("log_norm(E={})", E);
    double bound = 0.0;
    for (std::size_t s = 0; s < pot.alphabet_size(); ++s)
        bound = std::max(bound, std::log(spectral_norm(transfer_matrix(E, pot(static_cast<Symbol>(s))))));
    F.bound = bound;
    F.value = [E, pot](const Word& w) { return log_norm(E, w, pot); };
    return F;
}

LyapunovResult lyapunov(double E, const Generator& gen, const PotentialMap& pot, std::size_t n_max,
                        std::optional<std::vector<std::size_t>> grid, unsigned threads)
{
    if (n_max == 0)
        throw PreconditionError("n_max must be positive");
    const auto k = alphabet_size(gen);
    if (pot.alphabet_size() < k)
        throw PreconditionError(fmt::format("potential covers {} letters, generator uses {}", pot.alphabet_size(), k));
    LyapunovResult out;
    out.E = E;
    out.n_max = n_max;
    bool constant = true;
    for (std::size_t s = 1; s < k; ++s)
        constant = constant && pot(static_cast<Symbol>(s)) == pot(0);
    out.constant_potential = constant;

    if (!constant) {
        auto f = fekete_limit(log_norm_function(E, pot), gen, n_max, std::move(grid), threads);
        out.gamma = f.fbar;
        out.argmin_n = f.argmin_n;
        out.entries = std::move(f.entries);
        out.gap_at_n_max = out.entries.back().gap;
        return out;
    }

    auto ns = grid ? *grid : default_grid(1, n_max);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::erase_if(ns, [&](std::size_t n) { return n == 0 || n > n_max; });
    if (ns.empty())
        throw PreconditionError("lyapunov grid is empty");
    // Every length-n word has the same product, so one pass over a prefix gives all entries.
    const auto w = generator_prefix(gen, ns.back());
    const auto T = transfer_matrix(E, pot(0));
    TransferState state;
    out.gamma = std::numeric_limits<double>::infinity();
    std::size_t next = 0;
    for (std::size_t i = 1; i <= w.size() && next < ns.size(); ++i) {
        state.push_left(T);
        if (i != ns[next])
            continue;
        MeansEntry e;
        e.n = i;
        e.fplus = e.fminus = state.log_norm() / static_cast<double>(i);
        e.argmax = e.argmin = w.slice(0, i);
        if (e.fplus < out.gamma) {
            out.gamma = e.fplus;
            out.argmin_n = i;
        }
        out.entries.push_back(std::move(e));
        ++next;
    }
    out.gap_at_n_max = 0.0;
    return out;
}

TridiagonalOperator::TridiagonalOperator(std::vector<double> diag, std::vector<double> off)
    : diagonal(std::move(diag)), off_diagonal(std::move(off))
{
    if (diagonal.empty())
        throw PreconditionError("operator needs at least one site");
    if (off_diagonal.size() + 1 != diagonal.size())
        throw PreconditionError("off-diagonal must have size() - 1 entries");
}

TridiagonalOperator TridiagonalOperator::schrodinger(const Word& w, const PotentialMap& pot)
{
    std::vector<double> diag;
    diag.reserve(w.size());
    for (auto s : w.symbols())
        diag.push_back(pot(s));
    return TridiagonalOperator(std::move(diag), std::vector<double>(w.empty() ? 0 : w.size() - 1, 1.0));
}

BandedSymmetricMatrix::BandedSymmetricMatrix(std::size_t size, std::size_t bandwidth)
    : size_(size), band_(bandwidth), data_(size * bandwidth, 0.0)
{
}

double BandedSymmetricMatrix::operator()(std::size_t i, std::size_t j) const
{
    if (i > j)
        std::swap(i, j);
    if (j >= size_ || j - i >= band_)
        return 0.0;
    return data_[i * band_ + (j - i)];
}

void BandedSymmetricMatrix::set(std::size_t i, std::size_t j, double value)
{
    if (i > j)
        std::swap(i, j);
    if (j >= size_ || j - i >= band_)
        throw PreconditionError(fmt::format("entry ({}, {}) outside the band", i, j));
    data_[i * band_ + (j - i)] = value;
}

BandedSymmetricMatrix local_operator(const Word& w, const LocalRule& rule, long R)
{
    if (R <= 0)
        throw PreconditionError(fmt::format("range R = {} must be positive", R));
    const auto r = static_cast<std::size_t>(R);
    const std::size_t n = w.size();
    BandedSymmetricMatrix m(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n && j - i < r; ++j) {
            const std::size_t lo = i >= r - 1 ? i - (r - 1) : 0;
            const std::size_t hi = std::min(n - 1, j + r - 1);
            m.set(i, j, rule(w.slice(lo, hi - lo + 1), i - lo, j - lo));
        }
    return m;
}

LocalRule schrodinger_rule(const PotentialMap& pot)
{
    return [pot](const Word& pattern, std::size_t i, std::size_t j) {
        if (i == j)
            return pot(pattern[i]);
        return j == i + 1 ? 1.0 : 0.0;
    };
}

TridiagonalOperator to_tridiagonal(const BandedSymmetricMatrix& m)
{
    if (m.bandwidth() > 2)
        throw PreconditionError(fmt::format("bandwidth {} is not tridiagonal", m.bandwidth()));
    std::vector<double> diag(m.size()), off(m.size() == 0 ? 0 : m.size() - 1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        diag[i] = m(i, i);
        if (i + 1 < m.size())
            off[i] = m(i, i + 1);
    }
    return TridiagonalOperator(std::move(diag), std::move(off));
}

double tie_epsilon(const TridiagonalOperator& op)
{
    double d = 0.0, e = 0.0;
    for (double x : op.diagonal)
        d = std::max(d, std::abs(x));
    for (double x : op.off_diagonal)
        e = std::max(e, std::abs(x));
    return std::max(1e-12 * (2.0 * e + d), 1e-300);
}

std::size_t eigen_count(const TridiagonalOperator& op, double lambda)
{
    if (std::isnan(lambda))
        throw PreconditionError("lambda is NaN");
    const double eps = tie_epsilon(op);
    const auto& d = op.diagonal;
    const auto& e = op.off_diagonal;
    double mu = lambda + eps;
    // A zero pivot means mu is itself an eigenvalue of a leading block; move on by eps.
    for (int attempt = 0; attempt < 64; ++attempt, mu += eps) {
        std::size_t count = 0;
        double q = d[0] - mu;
        bool breakdown = false;
        for (std::size_t k = 0;; ++k) {
            if (q == 0.0) {
                breakdown = true;
                break;
            }
            if (q < 0.0)
                ++count;
            if (k + 1 == d.size())
                break;
            q = d[k + 1] - mu - e[k] * e[k] / q;
        }
        if (!breakdown)
            return count;
    }
    throw InvariantViolation("sturm count did not escape a zero pivot");
}

double free_ids(double lambda)
{
    const double x = std::clamp(lambda / 2.0, -1.0, 1.0);
    return std::clamp(1.0 - std::acos(x) / std::numbers::pi, 0.0, 1.0);
}

IDSReport ids(const Generator& gen, const PotentialMap& pot, const std::vector<double>& grid,
              const std::vector<std::size_t>& sizes, std::size_t offsets_per_size, unsigned threads)
{
    if (sizes.empty() || grid.empty())
        throw PreconditionError("ids needs sizes and an energy grid");
    if (offsets_per_size == 0)
        throw PreconditionError("ids needs at least one offset per size");
    for (auto n : sizes)
        if (n == 0)
            throw PreconditionError("window sizes must be positive");
    IDSReport report;
    report.grid = grid;
    report.sizes = sizes;
    report.prefix_length = 100 * *std::max_element(sizes.begin(), sizes.end());
    Word prefix;
    try {
        prefix = generator_prefix(gen, report.prefix_length);
    } catch (const DepthError& err) {
        throw DepthError(fmt::format("ids needs a generator prefix of length {}: {}", report.prefix_length, err.what()));
    }

    const std::size_t m = offsets_per_size;
    report.offsets.resize(sizes.size());
    report.k.resize(sizes.size());
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        const std::size_t room = report.prefix_length - sizes[s];
        for (std::size_t j = 0; j < m; ++j)
            report.offsets[s].push_back(m == 1 ? 0 : j * room / (m - 1));
        report.k[s].assign(m, std::vector<double>(grid.size()));
    }
    parallel_for(sizes.size() * m, threads, [&](std::size_t task) {
        const std::size_t s = task / m, j = task % m;
        const auto op = TridiagonalOperator::schrodinger(prefix.slice(report.offsets[s][j], sizes[s]), pot);
        for (std::size_t l = 0; l < grid.size(); ++l)
            report.k[s][j][l] = static_cast<double>(eigen_count(op, grid[l])) / static_cast<double>(sizes[s]);
    });
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        double spread = 0.0;
        for (std::size_t l = 0; l < grid.size(); ++l) {
            double lo = 1.0, hi = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                lo = std::min(lo, report.k[s][j][l]);
                hi = std::max(hi, report.k[s][j][l]);
            }
            spread = std::max(spread, hi - lo);
        }
        report.spread.push_back(spread);
    }
    return report;
}

}  // namespace uniferg
