#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "epsens/linalg.hpp"
#include "epsens/models.hpp"
#include "epsens/oracle.hpp"
#include "epsens/spectral.hpp"

using namespace epsens;
using epsens::testing::matched_distance;
using epsens::testing::random_matrix;

namespace {

double angle(const Vector& a, const Vector& b) {
    // distance after phase alignment; acos of the overlap bottoms out near 1e-8
    const Vector x = normalized(Vector(a.begin(), a.end()));
    const Vector y = normalized(Vector(b.begin(), b.end()));
    const Complex z = dot(y, x);
    const Complex phase = std::abs(z) == 0.0 ? Complex(1.0) : z / std::abs(z);
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d += std::norm(x[k] - phase * y[k]);
    return std::sqrt(d);
}

Matrix hermitian(std::size_t m, std::uint64_t seed) {
    const Matrix a = random_matrix(m, seed);
    return a + a.adjoint();
}

}  // namespace

TEST_CASE("eigenvalues of simple matrices") {
    const auto d = eigenvalues(Matrix{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}});
    CHECK(matched_distance(d, {1.0, 2.0, 3.0}) < 1e-14);
    const auto j = eigenvalues(Matrix{{0.0, 1.0}, {1e-6, 0.0}});
    CHECK(matched_distance(j, {1e-3, -1e-3}) < 1e-15);
}

TEST_CASE("eigenvalues agree with the oracle") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix h = random_matrix(8, 30 + s);
        std::vector<Complex> ref;
        for (const auto& w : oracle::oracle_eigen(h).values) ref.push_back(w.to_complex());
        CHECK(matched_distance(eigenvalues(h), ref) < 1e-8);
    }
}

TEST_CASE("eigenvector from the adjugate") {
    const Matrix j{{0.0, 1.0}, {0.0, 0.0}};
    const Vector r = eigvec_from_adjugate(j, 0.0, Side::right);
    CHECK(std::abs(r[0] - 1.0) < 1e-15);
    CHECK(std::abs(r[1]) < 1e-15);
    const Vector l = eigvec_from_adjugate(j, 0.0, Side::left);
    CHECK(std::abs(l[0]) < 1e-15);
    CHECK(std::abs(l[1] - 1.0) < 1e-15);
}

TEST_CASE("adjugate columns and rows of a bidiagonal block") {
    // adj(wI - T) for T with superdiagonal s: last column w^k prod_{l>=k} s_l,
    // first row w^(n-1-k) prod_{l<k} s_l
    const std::size_t n = 4;
    Matrix t(n);
    const Vector sup{2.0, Complex(0.0, 1.0), 0.5};
    for (std::size_t k = 0; k + 1 < n; ++k) t(k, k + 1) = sup[k];
    const Complex w{0.05, 0.02};
    const Vector r = eigvec_from_adjugate(t, w, Side::right, n - 1);
    const Vector l = eigvec_from_adjugate(t, w, Side::left, 0);
    Vector r_expect(n), l_expect(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex pr{1.0}, pl{1.0};
        for (std::size_t q = k; q + 1 < n; ++q) pr *= sup[q];
        for (std::size_t q = 0; q < k; ++q) pl *= sup[q];
        r_expect[k] = ipow(w, static_cast<int>(k)) * pr;
        l_expect[k] = std::conj(ipow(w, static_cast<int>(n - 1 - k)) * pl);
    }
    CHECK(angle(r, r_expect) < 1e-12);
    CHECK(angle(l, l_expect) < 1e-12);
}

TEST_CASE("adjugate and inverse-iteration eigenvectors agree") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix h = epsens::testing::random_diagonalizable(6, 40 + s);
        for (Complex w : eigenvalues(h)) {
            CHECK(angle(eigvec_from_adjugate(h, w, Side::right), eigvec_inverse_iteration(h, w, Side::right)) < 1e-8);
            CHECK(angle(eigvec_from_adjugate(h, w, Side::left), eigvec_inverse_iteration(h, w, Side::left)) < 1e-8);
        }
    }
    const Matrix j{{0.0, 1.0}, {1e-6, 0.0}};
    for (Complex w : eigenvalues(j))
        CHECK(angle(eigvec_from_adjugate(j, w, Side::right), eigvec_inverse_iteration(j, w, Side::right)) < 1e-8);
}

TEST_CASE("inverse iteration on small examples") {
    const Vector v = eigvec_inverse_iteration(Matrix{{1.0, 0.0}, {0.0, 2.0}}, 2.0, Side::right);
    CHECK(std::abs(v[0]) < 1e-12);
    CHECK(std::abs(v[1] - 1.0) < 1e-12);
    // left vector of an upper triangular matrix at its top diagonal entry
    const Matrix t{{3.0, 1.0, 2.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 2.0}};
    const Vector l = eigvec_inverse_iteration(t, 3.0, Side::left);
    const Vector r = eigvec_inverse_iteration(t, 3.0, Side::right);
    CHECK(std::abs(r[0] - 1.0) < 1e-12);
    CHECK(std::abs(dot(l, matvec(t, r)) - 3.0 * dot(l, r)) < 1e-12);
    // hand solve: L^H = (1, 1/2, 5/2) up to scale
    CHECK(angle(l, Vector{1.0, 0.5, 2.5}) < 1e-10);
}

TEST_CASE("rigidity of Hermitian and Jordan matrices") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Eigensystem sys = eigensystem(hermitian(5, 70 + s));
        for (const auto& p : sys.pairs) {
            CHECK(std::abs(p.rigidity) == doctest::Approx(1.0).epsilon(1e-12));
            REQUIRE(p.rigidity_exact);
            CHECK(std::abs(*p.rigidity_exact) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    const double eps = 1e-6;
    const Eigensystem j = eigensystem(Matrix{{0.0, 1.0}, {eps, 0.0}});
    for (const auto& p : j.pairs) {
        CHECK(std::abs(p.rigidity) == doctest::Approx(2.0 * std::sqrt(eps) / (1.0 + eps)).epsilon(1e-10));
        CHECK(std::abs(p.rigidity) == doctest::Approx(1.999998e-3).epsilon(1e-7));
    }
    // self-orthogonal pair at an exact EP
    const Vector r{1.0, 0.0}, l{0.0, 1.0};
    CHECK(rigidity_direct(l, r) == Complex{});
}

TEST_CASE("exact and direct rigidity agree on diagonalizable matrices") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Matrix h = epsens::testing::random_diagonalizable(5, 100 + s);
        const Eigensystem sys = eigensystem(h);
        for (const auto& p : sys.pairs) {
            const Complex exact = rigidity_exact(h, p.value, p.right, p.left);
            CHECK(std::abs(exact - p.rigidity) <= 1e-9 * std::abs(p.rigidity));
            CHECK(p.route_disagreement <= 1e-9);
        }
    }
}

TEST_CASE("eigensystem of diag(1, 2, 3)") {
    const Eigensystem sys = eigensystem(Matrix{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}});
    REQUIRE(sys.pairs.size() == 3);
    for (const auto& p : sys.pairs) {
        CHECK(std::abs(p.rigidity) == doctest::Approx(1.0));
        CHECK(p.petermann == doctest::Approx(1.0));
        CHECK(p.kind == PairKind::simple);
    }
}

TEST_CASE("four-state model at its exceptional points") {
    const Eigensystem sys = eigensystem(example_4x4_data().h);
    REQUIRE(sys.pairs.size() == 4);
    for (const auto& p : sys.pairs) {
        CHECK(p.kind == PairKind::defective);
        CHECK(p.multiplicity == 2);
        CHECK(std::abs(p.rigidity) < 1e-12);
        CHECK(std::isinf(p.petermann));
    }
}

TEST_CASE("semisimple repeated eigenvalue") {
    const Eigensystem sys = eigensystem(Matrix::identity(3));
    for (const auto& p : sys.pairs) {
        CHECK(p.kind == PairKind::semisimple);
        CHECK(std::abs(p.rigidity) == doctest::Approx(1.0));
    }
}

TEST_CASE("biorthogonality and residuals on random matrices") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Eigensystem sys = eigensystem(random_matrix(8, 140 + s));
        CHECK(sys.max_biorthogonality_defect() < 1e-8);
        CHECK(sys.max_residual() < 1e-12);
    }
}

TEST_CASE("rigidity bounds and unitary invariance") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix h = random_matrix(6, 160 + s);
        const Matrix u = hessenberg(random_matrix(6, 180 + s)).q;
        const Eigensystem a = eigensystem(h);
        const Eigensystem b = eigensystem(u * h * u.adjoint());
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(std::abs(a.pairs[i].rigidity) <= 1.0 + 1e-14);
            CHECK(a.pairs[i].petermann >= 1.0 - 1e-12);
        }
        for (const auto& p : a.pairs) {
            // pair up by eigenvalue
            double best = 1e300;
            double r = 0.0;
            for (const auto& q : b.pairs)
                if (std::abs(q.value - p.value) < best) best = std::abs(q.value - p.value), r = std::abs(q.rigidity);
            CHECK(std::abs(r - std::abs(p.rigidity)) <= 1e-9 * std::abs(p.rigidity));
        }
    }
}

TEST_CASE("three-state example tends to its closed-form rigidity") {
    const Complex a = 2.0, b = 1.0, c = 3.0, d = 4.0;
    const NearEPModel model = example_3x3(a, b, c, d);
    double prev = 1e300;
    for (double eps : {1e-4, 1e-6, 1e-8}) {
        const Eigensystem sys = eigensystem(model.at(eps));
        double worst = 0.0;
        for (const auto& p : sys.pairs) {
            if (std::abs(p.value) > 0.5) continue;
            const double pred = std::abs(2.0 * p.value / a) * std::abs(d) / std::sqrt(std::norm(c) + std::norm(d));
            REQUIRE(p.rigidity_exact);
            worst = std::max(worst, std::abs(std::abs(*p.rigidity_exact) / pred - 1.0));
        }
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 1e-3);
}
