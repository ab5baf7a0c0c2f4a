#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "epsens/adjugate.hpp"
#include "epsens/charpoly.hpp"
#include "epsens/models.hpp"
#include "epsens/oracle.hpp"
#include "epsens/spectral.hpp"

using namespace epsens;
using epsens::testing::random_matrix;

TEST_CASE("minors of the identity and of triangular blocks") {
    const Matrix i3 = Matrix::identity(3);
    CHECK(minor(i3, 0, 0) == Complex(1.0));
    CHECK(minor(i3, 0, 1) == Complex{});
    CHECK_THROWS_AS(minor(Matrix::identity(1), 0, 0), DimensionError);

    for (std::size_t n = 2; n <= 6; ++n) {
        const Matrix t = epsens::testing::random_nilpotent(n, 50 + n);
        Complex prod{1.0};
        for (std::size_t k = 0; k + 1 < n; ++k) prod *= t(k, k + 1);
        CHECK(std::abs(minor(t, n - 1, 0) - prod) < 1e-13 * std::abs(prod));
    }
}

TEST_CASE("adjugate of the identity and 1 x 1 input") {
    CHECK(max_abs_diff(cofactor_adjugate(Matrix::identity(2)), Matrix::identity(2)) == 0.0);
    CHECK(cofactor_adjugate(Matrix{{5.0}}) == Matrix{{1.0}});
}

TEST_CASE("four-state golden adjugates") {
    const FourStateModel f = example_4x4_data();
    const Matrix adj0 = cofactor_adjugate(-1.0 * f.h);
    const Vector row0{0.0, 49.0, -28.0, -11.0};
    for (std::size_t l = 0; l < 4; ++l) {
        CHECK(std::abs(adj0(0, l) - row0[l]) < 1e-10);
        CHECK(std::abs(f.adj_zero_row0[l] - row0[l]) < 1e-12);
    }
    for (std::size_t k = 1; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) CHECK(std::abs(adj0(k, l)) < 1e-10);

    const Matrix adj7 = cofactor_adjugate(7.0 * Matrix::identity(4) - f.h);
    const Vector col3{108.0, 168.0, 294.0, 0.0};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(adj7(k, 3) - col3[k]) < 1e-10);
        CHECK(std::abs(f.adj_omega_col3[k] - col3[k]) < 1e-12);
        for (std::size_t l = 0; l < 3; ++l) CHECK(std::abs(adj7(k, l)) < 1e-10);
    }

    // the same numbers from exact cofactor expansion
    const auto o0 = oracle::oracle_adjugate(-1.0 * f.h);
    const auto o7 = oracle::oracle_adjugate(7.0 * Matrix::identity(4) - f.h);
    for (std::size_t l = 0; l < 4; ++l) CHECK(o0(0, l).to_complex() == row0[l]);
    for (std::size_t k = 0; k < 4; ++k) CHECK(o7(k, 3).to_complex() == col3[k]);
}

TEST_CASE("bilinear adjugate element") {
    const Vector e1{1.0, 0.0, 0.0};
    CHECK(std::abs(adjugate_element(e1, e1, Matrix::identity(3)) - 1.0) < 1e-15);

    // four-state model at 0 with unit vectors e1 and e4: a1 (b1 c1 - b2 Omega)
    const FourStateModel f = example_4x4_data();
    const Vector u1{1.0, 0.0, 0.0, 0.0}, u4{0.0, 0.0, 0.0, 1.0};
    CHECK(std::abs(adjugate_element(u1, u4, -1.0 * f.h) - (-11.0)) < 1e-10);

    // with the EP eigenvector pairs the magnitudes take the closed forms
    const double a0 = std::abs(adjugate_element(f.r_at_zero, f.l_at_zero, -1.0 * f.h));
    CHECK(a0 == doctest::Approx(7.0 * std::sqrt(49.0 + 16.0 + 121.0 / 49.0)).epsilon(1e-10));
    CHECK(f.denominator_zero == doctest::Approx(7.0 * std::sqrt(49.0 + 16.0 + 121.0 / 49.0)).epsilon(1e-14));
    const double a7 = std::abs(adjugate_element(f.r_at_omega, f.l_at_omega, 7.0 * Matrix::identity(4) - f.h));
    CHECK(a7 == doctest::Approx(42.0 * std::sqrt(49.0 + 16.0 + 324.0 / 49.0)).epsilon(1e-10));
    CHECK(f.denominator_omega == doctest::Approx(42.0 * std::sqrt(49.0 + 16.0 + 324.0 / 49.0)).epsilon(1e-14));

    Rng rng(3);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix x = random_matrix(5, 60 + s);
        Vector v(5), w(5);
        for (auto& z : v) z = rng.complex_normal();
        for (auto& z : w) z = rng.complex_normal();
        const Vector vh = normalized(v), wh = normalized(w);
        const Complex ref = dot(vh, matvec(cofactor_adjugate(x), wh));
        CHECK(std::abs(adjugate_element(v, w, x) - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
    }
    CHECK_THROWS_AS(adjugate_element(Vector(3), e1, Matrix::identity(3)), NumericalError);
}

TEST_CASE("X adj X = det X I") {
    for (std::uint64_t s = 0; s < 14; ++s) {
        const std::size_t m = 2 + s % 7;
        const Matrix x = random_matrix(m, 70 + s);
        const Matrix adj = cofactor_adjugate(x);
        const Complex d = determinant(x);
        const Matrix expect = d * Matrix::identity(m);
        CHECK(max_abs_diff(x * adj, expect) <= 1e-10 * std::max(std::abs(d), max_abs(x) * max_abs(adj)));
        CHECK(max_abs_diff(adj * x, expect) <= 1e-10 * std::max(std::abs(d), max_abs(x) * max_abs(adj)));
    }
    // singular input: the columns of adj are null vectors
    Matrix s = random_matrix(4, 91);
    for (std::size_t k = 0; k < 4; ++k) s(k, 3) = s(k, 0) + 2.0 * s(k, 1);
    const Matrix adj = cofactor_adjugate(s);
    CHECK(max_abs(adj) > 1e-3);
    CHECK(max_abs(s * adj) < 1e-12 * max_abs(adj) * max_abs(s));
}

TEST_CASE("cofactor and adjugate-polynomial routes agree") {
    for (std::size_t m = 2; m <= 12; ++m) {
        const Matrix x = random_matrix(m, 400 + m);
        const AdjugateResult both = adjugate(x, AdjugateMethod::both);
        CHECK(both.cross_check_residual < 1e-8);
        const Matrix fl = adjugate(x, AdjugateMethod::faddeev).adj;
        CHECK(max_abs_diff(fl, both.adj) <= 1e-8 * max_abs(both.adj));
    }
}

TEST_CASE("cofactor adjugate matches exact expansion") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        const Matrix x = random_matrix(3 + s, 480 + s);
        const Matrix ref = oracle::oracle_adjugate(x).to_matrix();
        CHECK(max_abs_diff(cofactor_adjugate(x), ref) <= 1e-12 * max_abs(ref));
    }
    for (std::uint64_t s = 0; s < 6; ++s) {
        const Matrix x = epsens::testing::random_integer_matrix(4 + s % 3, 520 + s);
        const Matrix ref = oracle::oracle_adjugate(x).to_matrix();
        CHECK(max_abs_diff(cofactor_adjugate(x), ref) <= 1e-9 * max_abs(ref));
    }
}

TEST_CASE("adjugate at a simple eigenvalue is the eigenvector dyad") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t m = 2 + s % 7;
        const Matrix h = epsens::testing::random_diagonalizable(m, 600 + s);
        const Eigensystem sys = eigensystem(h);
        for (std::size_t i = 0; i < m; ++i) {
            const Eigenpair& p = sys.pairs[i];
            Complex dp{1.0};
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) dp *= p.value - sys.pairs[j].value;
            const Matrix adj = cofactor_adjugate(p.value * Matrix::identity(m) - h);
            const Complex overlap = dot(p.left, p.right);
            double worst = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) {
                    const Complex lhs = adj(k, l) * overlap;
                    const Complex rhs = p.right[k] * std::conj(p.left[l]) * dp;
                    worst = std::max(worst, std::abs(lhs - rhs));
                    scale = std::max(scale, std::abs(rhs));
                }
            CHECK(worst <= 1e-8 * scale);
        }
    }
}
