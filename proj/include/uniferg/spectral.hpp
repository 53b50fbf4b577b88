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

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uniferg/ergodic.hpp"
#include "uniferg/words.hpp"

namespace uniferg {

template <class T>
struct Mat2 {
    T a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
    T det() const { return a * d - b * c; }
    friend Mat2 operator*(const Mat2& x, const Mat2& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator*(T s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

using RealMat2 = Mat2<double>;
using ComplexMat2 = Mat2<std::complex<double>>;

/// T(E, a) = [[E - a, -1], [1, 0]].
RealMat2 transfer_matrix(double E, double a);
ComplexMat2 transfer_matrix(std::complex<double> E, double a);

double frobenius_norm(const RealMat2& m);
double frobenius_norm(const ComplexMat2& m);
/// Largest singular value, closed form for 2x2.
double spectral_norm(const RealMat2& m);
double spectral_norm(const ComplexMat2& m);

namespace detail {

/// m * 2^e with a separately stored binary exponent.
template <class Scalar>
struct Scaled {
    Scalar m = Scalar(0);
    long e = 0;
};

}  // namespace detail

/// Product T_n ... T_1 held as Q * R with Q unitary and R upper triangular. The
/// entries of R carry their own binary exponents and are renormalised when a
/// mantissa leaves [2^-64, 2^64], so neither overflow nor the cancellation of a
/// nearly singular normalised matrix affects the norm or the determinant.
template <class Scalar>
class BasicTransferState {
public:
    using Matrix = Mat2<Scalar>;

    BasicTransferState() = default;

    /// this <- m * this (left multiplication, so letters are applied in reading order).
    void push_left(const Matrix& m);

    /// ln of the spectral norm of the true product.
    double log_norm() const;
    /// ln |det| of the true product (0 for unimodular factors).
    double log_abs_det() const;
    /// det / |det| of the true product.
    Scalar det_phase() const;
    /// The true product divided by its spectral norm.
    Matrix matrix() const;
    /// ln of the factor removed by matrix(); equals log_norm().
    double log_scale() const { return log_norm(); }
    std::size_t renormalizations() const noexcept { return renorms_; }

private:
    using Entry = detail::Scaled<Scalar>;
    void normalize(Entry& x);
    /// Entries of R scaled by 2^-top, where top is the largest exponent.
    void scaled_r(Scalar& r11, Scalar& r12, Scalar& r22, long& top) const;

    Matrix q_ = Matrix::identity();
    Entry r11_{Scalar(1), 0}, r12_{Scalar(0), 0}, r22_{Scalar(1), 0};
    std::size_t renorms_ = 0;
};

using TransferState = BasicTransferState<double>;
using ComplexTransferState = BasicTransferState<std::complex<double>>;

/// Real value attached to each letter.
class PotentialMap {
public:
    explicit PotentialMap(std::vector<double> values);
    static PotentialMap zero(std::size_t alphabet = 2) { return PotentialMap(std::vector<double>(alphabet, 0.0)); }
    /// "0:0,1:1.5" or "0,1.5".
    static PotentialMap parse(const std::string& text);

    double operator()(Symbol s) const;
    std::size_t alphabet_size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    bool is_constant() const;
    double max_abs() const;
    std::string to_string() const;

private:
    std::vector<double> values_;
};

TransferState cocycle_product(double E, const Word& w, const PotentialMap& pot);
ComplexTransferState cocycle_product(std::complex<double> E, const Word& w, const PotentialMap& pot);

double log_norm(double E, const Word& w, const PotentialMap& pot);
double log_norm(std::complex<double> E, const Word& w, const PotentialMap& pot);

/// F(w) = ln ||M(E)(w)||: subadditive with c_F = 0, d_F = max_a ln ||T(E, a)||.
SubadditiveFn log_norm_function(double E, const PotentialMap& pot);

struct LyapunovResult {
    double E = 0.0;
    double gamma = 0.0;  ///< inf over the grid of F+(n)
    std::size_t n_max = 0;
    std::size_t argmin_n = 0;
    double gap_at_n_max = 0.0;
    bool constant_potential = false;  ///< every word of length n has the same product
    std::vector<MeansEntry> entries;
};

/// Fekete limit of ln ||M(E)|| over the generator language. When the potential
/// takes one value on the whole alphabet all words of length n give the same
/// matrix, and the generator prefix of length n stands in for the language.
LyapunovResult lyapunov(double E, const Generator& gen, const PotentialMap& pot, std::size_t n_max,
                        std::optional<std::vector<std::size_t>> grid = std::nullopt, unsigned threads = 1);

struct TridiagonalOperator {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;  ///< size() - 1 entries

    TridiagonalOperator(std::vector<double> diag, std::vector<double> off);
    /// Diagonal pot(w_i), off-diagonal 1.
    static TridiagonalOperator schrodinger(const Word& w, const PotentialMap& pot);
    std::size_t size() const noexcept { return diagonal.size(); }
};

/// Symmetric matrix with entries only for |i - j| < bandwidth.
class BandedSymmetricMatrix {
public:
    BandedSymmetricMatrix(std::size_t size, std::size_t bandwidth);
    std::size_t size() const noexcept { return size_; }
    std::size_t bandwidth() const noexcept { return band_; }
    double operator()(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double value);

private:
    std::size_t size_, band_;
    std::vector<double> data_;  // row i holds entries (i, i + k), k < band
};

/// Entry rule: value for the pair at pattern indices (i, j), i <= j, where the
/// pattern is the window of w covering [i - R + 1, j + R - 1], cut at the word edges.
using LocalRule = std::function<double(const Word& pattern, std::size_t i, std::size_t j)>;

/// Finite-range, pattern-determined operator on positions 0..|w|-1. Entries with
/// |i - j| >= R vanish. Throws PreconditionError for R <= 0.
BandedSymmetricMatrix local_operator(const Word& w, const LocalRule& rule, long R);

/// The nearest-neighbour rule: pot on the diagonal, 1 next to it.
LocalRule schrodinger_rule(const PotentialMap& pot);

/// Requires bandwidth <= 2.
TridiagonalOperator to_tridiagonal(const BandedSymmetricMatrix& m);

/// Tie tolerance used by eigen_count: 1e-12 * (2 max|off| + max|diag|), at least 1e-300.
double tie_epsilon(const TridiagonalOperator& op);

/// #{eigenvalues <= lambda} by Sturm sequence sign counts at lambda + tie_epsilon.
std::size_t eigen_count(const TridiagonalOperator& op, double lambda);

struct IDSReport {
    std::vector<double> grid;
    std::vector<std::size_t> sizes;
    std::vector<std::vector<std::size_t>> offsets;         ///< [size][offset]
    std::vector<std::vector<std::vector<double>>> k;       ///< [size][offset][lambda]
    std::vector<double> spread;                            ///< [size]
    std::size_t prefix_length = 0;
};

/// Box restrictions of the Schrodinger operator to windows of each size at
/// evenly spaced offsets in a prefix of length 100 * max(size).
IDSReport ids(const Generator& gen, const PotentialMap& pot, const std::vector<double>& grid,
              const std::vector<std::size_t>& sizes, std::size_t offsets_per_size, unsigned threads = 1);

/// 1 - arccos(lambda / 2) / pi, clamped to [0, 1].
double free_ids(double lambda);

}  // namespace uniferg
