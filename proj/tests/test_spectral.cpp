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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "uniferg/spectral.hpp"

using namespace uniferg;

namespace {

using LMat = std::array<long double, 4>;

// Direct extended-precision product T(w_n) ... T(w_1); valid while entries stay below ~e^11000.
LMat naive_product(double E, const Word& w, const PotentialMap& pot)
{
    LMat m{1, 0, 0, 1};
    for (auto s : w.symbols()) {
        const long double t = static_cast<long double>(E) - pot(s);
        m = {t * m[0] - m[2], t * m[1] - m[3], m[0], m[1]};
    }
    return m;
}

long double naive_log_norm(const LMat& m)
{
    const long double f2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
    const long double det = m[0] * m[3] - m[1] * m[2];
    const long double disc = std::max<long double>(0, f2 * f2 - 4 * det * det);
    return 0.5L * std::log(0.5L * (f2 + std::sqrt(disc)));
}

Word random_word(std::mt19937_64& rng, std::size_t n, unsigned k = 2)
{
    std::string s(n, '\0');
    for (auto& c : s)
        c = static_cast<char>(rng() % k);
    return Word(std::move(s));
}

const PotentialMap fib_pot({0.0, 1.0});
const double golden_mu = (3.0 + std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("transfer matrices")
{
    CHECK(transfer_matrix(0, 0) == RealMat2{0, -1, 1, 0});
    CHECK(transfer_matrix(2.5, 2.5) == RealMat2{0, -1, 1, 0});
    CHECK(transfer_matrix(3, 1) == RealMat2{2, -1, 1, 0});
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const double E = static_cast<double>(rng() % 1000) / 100.0 - 5.0;
        CHECK(transfer_matrix(E, 0.37).det() == 1.0);
    }
    CHECK(spectral_norm(RealMat2{0, -1, 1, 0}) == doctest::Approx(1.0));
    CHECK(spectral_norm(RealMat2{3, 0, 0, 0.5}) == doctest::Approx(3.0));
}

TEST_CASE("empty and single-letter products")
{
    auto st = cocycle_product(1.3, Word{}, fib_pot);
    CHECK(st.log_norm() == 0.0);
    CHECK(st.matrix() == RealMat2::identity());
    CHECK(log_norm(0.0, Word{0}, PotentialMap::zero()) == doctest::Approx(0.0));
}

TEST_CASE("products agree with a direct extended-precision product")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const double E = static_cast<double>(rng() % 800) / 100.0 - 4.0;
        const auto w = random_word(rng, 1 + rng() % 1500);
        const auto st = cocycle_product(E, w, fib_pot);
        const auto ref = naive_product(E, w, fib_pot);
        const long double ln = naive_log_norm(ref);
        CHECK(st.log_norm() == doctest::Approx(static_cast<double>(ln)).epsilon(1e-10).scale(1.0));
        if (w.size() < 40) {
            const auto m = st.matrix();
            const long double s = std::exp(ln);
            CHECK(m.a == doctest::Approx(static_cast<double>(ref[0] / s)).epsilon(1e-9).scale(1.0));
            CHECK(m.b == doctest::Approx(static_cast<double>(ref[1] / s)).epsilon(1e-9).scale(1.0));
            CHECK(m.c == doctest::Approx(static_cast<double>(ref[2] / s)).epsilon(1e-9).scale(1.0));
            CHECK(m.d == doctest::Approx(static_cast<double>(ref[3] / s)).epsilon(1e-9).scale(1.0));
        }
        CHECK(st.log_norm() >= -1e-12);
        CHECK(spectral_norm(st.matrix()) == doctest::Approx(1.0));
    }
}

TEST_CASE("constant word at E = 3 grows like the top eigenvalue")
{
    const auto w = Word{0}.power(1000);
    const double ln = log_norm(3.0, w, PotentialMap::zero());
    CHECK(ln == doctest::Approx(static_cast<double>(naive_log_norm(naive_product(3.0, w, PotentialMap::zero())))));
    CHECK(std::abs(ln - 1000 * std::log(golden_mu)) < 0.5);
}

TEST_CASE("determinant stays one on long words")
{
    std::mt19937_64 rng(3);
    for (std::size_t n : {10u, 1000u, 30000u, 100000u}) {
        const auto w = random_word(rng, n);
        for (double E : {-2.2, 0.0, 0.5, 3.0}) {
            const auto st = cocycle_product(E, w, fib_pot);
            CHECK(std::abs(st.log_abs_det()) < 1e-9);
            CHECK(st.det_phase() == doctest::Approx(1.0));
            if (n >= 30000 && E == 3.0)
                CHECK(st.renormalizations() > 0);
        }
    }
}

TEST_CASE("antimultiplicativity on random splits")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
        const double E = static_cast<double>(rng() % 700) / 100.0 - 3.5;
        const auto w = random_word(rng, 2 + rng() % 3000);
        const std::size_t k = rng() % (w.size() + 1);
        const auto u = w.slice(0, k), v = w.slice(k, w.size() - k);
        const auto sw = cocycle_product(E, w, fib_pot), su = cocycle_product(E, u, fib_pot),
                   sv = cocycle_product(E, v, fib_pot);
        const double scale = std::exp(su.log_scale() + sv.log_scale() - sw.log_scale());
        const auto diff = scale * (sv.matrix() * su.matrix()) - sw.matrix();
        CHECK(frobenius_norm(diff) <= 1e-8);
        CHECK(sw.log_norm() <= su.log_norm() + sv.log_norm() + 1e-9);
    }
}

TEST_CASE("complex energies")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::complex<double> E(static_cast<double>(rng() % 400) / 100.0 - 2.0,
                                     static_cast<double>(rng() % 100) / 100.0);
        const auto w = random_word(rng, 1 + rng() % 60);
        ComplexMat2 ref = ComplexMat2::identity();
        for (auto s : w.symbols())
            ref = transfer_matrix(E, fib_pot(s)) * ref;
        const auto st = cocycle_product(E, w, fib_pot);
        CHECK(st.log_norm() == doctest::Approx(std::log(spectral_norm(ref))).epsilon(1e-10).scale(1.0));
        CHECK(std::abs(st.log_abs_det()) < 1e-9);
        CHECK(std::abs(st.det_phase() - 1.0) < 1e-9);
        const auto m = st.matrix();
        const double s = spectral_norm(ref);
        CHECK(std::abs(m.a - ref.a / s) < 1e-9);
        CHECK(std::abs(m.d - ref.d / s) < 1e-9);
    }
    // Real energies give the real answer.
    const auto w = random_word(rng, 500);
    CHECK(log_norm(std::complex<double>(0.7, 0.0), w, fib_pot) == doctest::Approx(log_norm(0.7, w, fib_pot)));
}

TEST_CASE("log norm is a bounded subadditive function")
{
    const auto F = log_norm_function(1.0, fib_pot);
    CHECK(F.bound == doctest::Approx(std::log(spectral_norm(transfer_matrix(1.0, 0.0)))));
    auto audit = subadditivity_audit(F, Generator{SturmianSpec::golden(40)}, 1000, 17);
    CHECK(audit.passed());
    CHECK(audit.trials == 1000);
}

TEST_CASE("lyapunov exponents with zero potential")
{
    const Generator fib = SturmianSpec::golden(60);
    auto g3 = lyapunov(3.0, fib, PotentialMap::zero(), std::size_t{1} << 20);
    CHECK(g3.constant_potential);
    CHECK(std::abs(g3.gamma - std::log(golden_mu)) < 1e-6);
    CHECK(g3.gamma >= std::log(golden_mu));
    CHECK(g3.argmin_n == std::size_t{1} << 20);
    auto g0 = lyapunov(0.0, fib, PotentialMap::zero(), 512);
    CHECK(std::abs(g0.gamma) < 5e-3);
    // The constant-potential shortcut agrees with exhaustive means.
    auto direct = fekete_limit(log_norm_function(3.0, PotentialMap::zero()), fib, 64);
    auto shortcut = lyapunov(3.0, fib, PotentialMap::zero(), 64);
    CHECK(shortcut.gamma == doctest::Approx(direct.fbar).epsilon(1e-12));
}

TEST_CASE("lyapunov gap shrinks for the fibonacci potential")
{
    const Generator fib = SturmianSpec::golden(60);
    auto r = lyapunov(0.5, fib, fib_pot, 256, std::vector<std::size_t>{16, 64, 256});
    CHECK_FALSE(r.constant_potential);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[2].gap < r.entries[0].gap);
    CHECK(r.gap_at_n_max == r.entries[2].gap);
    CHECK_THROWS_AS(lyapunov(0.5, fib, PotentialMap({0.0}), 16), PreconditionError);
}

TEST_CASE("sturm counts match a dense eigensolve")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        std::vector<double> d(n), e(n - 1);
        for (auto& x : d)
            x = U(rng);
        for (auto& x : e)
            x = U(rng);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
        for (std::size_t i = 0; i < n; ++i)
            A(static_cast<long>(i), static_cast<long>(i)) = d[i];
        for (std::size_t i = 0; i + 1 < n; ++i)
            A(static_cast<long>(i), static_cast<long>(i + 1)) = A(static_cast<long>(i + 1), static_cast<long>(i)) = e[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
        const auto ev = solver.eigenvalues();
        const TridiagonalOperator op(d, e);
        for (int s = 0; s < 20; ++s) {
            const double lambda = U(rng) * 3.0;
            bool near = false;
            std::size_t expected = 0;
            for (long i = 0; i < ev.size(); ++i) {
                near = near || std::abs(ev(i) - lambda) <= 1e-6;
                expected += ev(i) <= lambda;
            }
            if (near)
                continue;
            CHECK(eigen_count(op, lambda) == expected);
            ++compared;
        }
    }
    CHECK(compared > 3000);
}

TEST_CASE("sturm count examples")
{
    const TridiagonalOperator path({0, 0, 0}, {1, 1});
    CHECK(eigen_count(path, 0.0) == 2);
    CHECK(eigen_count(path, -std::sqrt(2.0)) == 1);
    CHECK(eigen_count(path, -1.5) == 0);
    CHECK(eigen_count(path, 1.4) == 2);
    CHECK(eigen_count(path, 2.1) == 3);
    const auto op = TridiagonalOperator::schrodinger(sturmian_prefix(SturmianSpec::golden(30), 300), fib_pot);
    CHECK(eigen_count(op, -2.0 - 1.0 - 1e-9) == 0);
    CHECK(eigen_count(op, 2.0 + 1.0 + 1e-9) == 300);
    CHECK(tie_epsilon(op) == doctest::Approx(3e-12));
    CHECK_THROWS_AS(TridiagonalOperator({}, {}), PreconditionError);
}

TEST_CASE("local operators")
{
    const auto w = sturmian_prefix(SturmianSpec::golden(30), 200);
    const auto m = local_operator(w, schrodinger_rule(fib_pot), 2);
    const auto tri = to_tridiagonal(m);
    const auto ref = TridiagonalOperator::schrodinger(w, fib_pot);
    CHECK(tri.diagonal == ref.diagonal);
    CHECK(tri.off_diagonal == ref.off_diagonal);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            CHECK(m(i, j) == m(j, i));

    const auto diag = local_operator(w, [](const Word&, std::size_t, std::size_t) { return 2.5; }, 1);
    CHECK(diag.bandwidth() == 1);
    CHECK(diag(3, 3) == 2.5);
    CHECK(diag(3, 4) == 0.0);
    CHECK_THROWS_AS(local_operator(w, schrodinger_rule(fib_pot), 0), PreconditionError);
    CHECK_THROWS_AS(local_operator(w, schrodinger_rule(fib_pot), -3), PreconditionError);
    CHECK_THROWS_AS(to_tridiagonal(local_operator(w, schrodinger_rule(fib_pot), 3)), PreconditionError);
}

TEST_CASE("equal windows give equal operator rows")
{
    // A pattern-sensitive rule of range 3: entries depend on the whole window.
    const LocalRule rule = [](const Word& p, std::size_t i, std::size_t j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k)
            sum += (k + 1.0) * p[k];
        return sum * 0.01 + (i == j ? 1.0 : 0.5) + 0.1 * static_cast<double>(i);
    };
    const long R = 3;
    const auto w = sturmian_prefix(SturmianSpec::golden(30), 400);
    const auto m = local_operator(w, rule, R);
    const std::size_t reach = 2 * (R - 1);
    std::size_t pairs = 0;
    for (std::size_t x = reach; x + reach < w.size(); ++x)
        for (std::size_t y = x + 1; y + reach < w.size(); ++y) {
            if (w.slice(x - reach, 2 * reach + 1) != w.slice(y - reach, 2 * reach + 1))
                continue;
            ++pairs;
            for (long k = -(R - 1); k <= R - 1; ++k)
                CHECK(m(x, x + k) == m(y, y + k));
        }
    CHECK(pairs > 100);
}

TEST_CASE("free integrated density of states")
{
    const std::size_t n = 2000;
    const Generator fib = SturmianSpec::golden(60);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i)
        grid.push_back(-2.5 + 5.0 * i / 400.0);
    auto r = ids(fib, PotentialMap::zero(), grid, {n}, 1);
    double worst = 0.0;
    for (std::size_t l = 0; l < grid.size(); ++l) {
        worst = std::max(worst, std::abs(r.k[0][0][l] - free_ids(grid[l])));
        if (l > 0)
            CHECK(r.k[0][0][l] >= r.k[0][0][l - 1]);
    }
    CHECK(worst < 5e-3);
    CHECK(r.k[0][0].front() == 0.0);
    CHECK(r.k[0][0].back() == 1.0);
    CHECK(r.spread[0] == 0.0);

    auto zero = ids(fib, PotentialMap::zero(), {0.0}, {n}, 1);
    CHECK(std::abs(zero.k[0][0][0] - 0.5) <= 1.0 / n);
    // Closed form: 2 cos(k pi / (n + 1)) are the eigenvalues of the free path.
    const auto op = TridiagonalOperator::schrodinger(Word{0}.power(50), PotentialMap::zero());
    for (double lambda : {-1.9, -0.3, 0.77, 1.999}) {
        std::size_t expected = 0;
        for (int k = 1; k <= 50; ++k)
            expected += 2.0 * std::cos(k * std::numbers::pi / 51.0) <= lambda;
        CHECK(eigen_count(op, lambda) == expected);
    }
}

TEST_CASE("ids offsets, ranges and uniformity")
{
    const Generator fib = SturmianSpec::golden(60);
    std::vector<double> grid;
    for (int i = 0; i <= 120; ++i)
        grid.push_back(-2.5 + 6.0 * i / 120.0);
    auto r = ids(fib, fib_pot, grid, {200, 1000}, 20, 2);
    CHECK(r.prefix_length == 100000);
    REQUIRE(r.offsets[1].size() == 20);
    CHECK(r.offsets[1].front() == 0);
    CHECK(r.offsets[1].back() == 100000 - 1000);
    for (const auto& per_size : r.k)
        for (const auto& row : per_size)
            for (std::size_t l = 0; l < row.size(); ++l) {
                CHECK(row[l] >= 0.0);
                CHECK(row[l] <= 1.0);
                if (l > 0)
                    CHECK(row[l] >= row[l - 1]);
            }
    CHECK(r.spread[1] < r.spread[0]);
    auto single = ids(fib, fib_pot, grid, {200, 1000}, 20, 1);
    CHECK(single.k == r.k);
    CHECK_THROWS_AS(ids(SturmianSpec::golden(10), fib_pot, grid, {200}, 3), DepthError);
}
