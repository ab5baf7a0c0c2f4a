#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "epsens/charpoly.hpp"
#include "epsens/models.hpp"
#include "epsens/oracle.hpp"
#include "epsens/spectral.hpp"

using namespace epsens;
using epsens::testing::random_matrix;

namespace {

double coeff_rel_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num = std::max(num, std::abs(a[k] - b[k]));
        den = std::max(den, std::abs(b[k]));
    }
    return num / den;
}

// det(w I - h) in double-double for w at the roots of unity times r, then
// the coefficients by a discrete Fourier transform.
std::vector<Complex> oracle_coeffs(const Matrix& h) {
    const std::size_t m = h.dim();
    const std::size_t n = m + 1;
    std::vector<Complex> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex w = std::polar(1.0, 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n));
        values[j] = oracle::oracle_det(w * Matrix::identity(m) - h).to_complex();
    }
    std::vector<Complex> c(n);  // c[k] multiplies w^k
    for (std::size_t k = 0; k < n; ++k) {
        Complex s{};
        for (std::size_t j = 0; j < n; ++j)
            s += values[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(j * k) / static_cast<double>(n));
        c[k] = s / static_cast<double>(n);
    }
    return {c.rbegin(), c.rend()};
}

}  // namespace

TEST_CASE("charpoly of a Jordan block") {
    const Matrix h{{0.0, 1.0}, {0.0, 0.0}};
    const CharPoly cp = faddeev_leverrier(h);
    REQUIRE(cp.coeffs.size() == 3);
    CHECK(cp.coeffs[0] == Complex(1.0));
    CHECK(cp.coeffs[1] == Complex{});
    CHECK(cp.coeffs[2] == Complex{});
    // adj(wI - H) = w B_1 + B_0 with B_1 = I and B_0 = H
    REQUIRE(cp.adj_poly.size() == 2);
    CHECK(max_abs_diff(cp.adj_poly[0], h) == 0.0);
    CHECK(max_abs_diff(cp.adj_poly[1], Matrix::identity(2)) == 0.0);
}

TEST_CASE("charpoly of diag(1, 2)") {
    const CharPoly cp = faddeev_leverrier(Matrix{{1.0, 0.0}, {0.0, 2.0}});
    CHECK(cp.coeffs == std::vector<Complex>{1.0, -3.0, 2.0});
    CHECK(std::abs(eval_p(cp, 1.0)) == 0.0);
    CHECK(eval_p_prime(cp, 1.0) == Complex(-1.0));
    CHECK(eval_p(faddeev_leverrier(Matrix(3)), 2.0) == Complex(8.0));
}

TEST_CASE("coefficients agree with double-double determinants") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix h = random_matrix(5, 900 + s);
        CHECK(coeff_rel_diff(faddeev_leverrier(h).coeffs, oracle_coeffs(h)) < 1e-10);
    }
}

TEST_CASE("Newton identities from traces") {
    const auto zero = newton_coeffs_from_traces(std::vector<Complex>(4, 0.0));
    CHECK(zero[0] == Complex(1.0));
    for (std::size_t k = 1; k < zero.size(); ++k) CHECK(zero[k] == Complex{});

    const auto c = newton_coeffs_from_traces(std::vector<Complex>{3.0, 5.0});
    CHECK(std::abs(c[1] - (-3.0)) < 1e-15);
    CHECK(std::abs(c[2] - 2.0) < 1e-15);

    const Matrix h = random_matrix(4, 17);
    CHECK(coeff_rel_diff(newton_coeffs_from_traces(power_traces(h)), faddeev_leverrier(h).coeffs) < 1e-12);
}

TEST_CASE("p(w) matches the double-double determinant") {
    Rng rng(5);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix h = random_matrix(2 + s % 6, 1000 + s);
        const Complex w = rng.complex_normal();
        const Complex ref = oracle::oracle_det(w * Matrix::identity(h.dim()) - h).to_complex();
        CHECK(std::abs(eval_p(faddeev_leverrier(h), w) - ref) <= 1e-10 * std::abs(ref));
    }
}

TEST_CASE("p' against a central difference") {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> c(6);
        c[0] = 1.0;
        for (std::size_t k = 1; k < c.size(); ++k) c[k] = rng.complex_normal();
        const Complex w = rng.complex_normal();
        const double h = 1e-7;
        const Complex fd = (eval_p(c, w + h) - eval_p(c, w - h)) / (2.0 * h);
        const Complex dp = eval_p_prime(c, w);
        CHECK(std::abs(fd - dp) < 1e-6 * std::abs(dp));
        const PolyValue pv = eval_with_derivative(c, w);
        CHECK(std::abs(pv.p - eval_p(c, w)) <= 1e-14 * pv.magnitude_bound);
        CHECK(std::abs(pv.dp - dp) <= 1e-13 * std::abs(dp));
    }
    // p = w^2 at w_i
    const std::vector<Complex> sq{1.0, 0.0, 0.0};
    CHECK(eval_p_prime(sq, Complex(0.3, 0.1)) == Complex(0.6, 0.2));
}

TEST_CASE("asymptotic p'") {
    const Complex d{1e-3, 2e-3};
    CHECK(std::abs(asymptotic_p_prime(d, 0.0, 2, {}) - 2.0 * d) < 1e-18);
    // order-2 cluster at 0 with two spectators at Omega = 7
    const std::vector<Complex> sp{7.0, 7.0};
    CHECK(std::abs(asymptotic_p_prime(d, 0.0, 2, sp) - d * 2.0 * 49.0) < 1e-15);
}

TEST_CASE("p' approaches its asymptotic form") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const NearEPModel model = random_near_ep(6, 3, seed);
        const std::vector<Complex> all = eigenvalues(model.h_at_ep);
        std::vector<Complex> spect;
        for (Complex w : all)
            if (std::abs(w - model.omega_ep) > 1e-3) spect.push_back(w);
        REQUIRE(spect.size() == 3);
        double prev = 1e300;
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const std::vector<Complex> vals = eigenvalues(model.at(eps));
            double worst = 0.0;
            for (Complex w : vals) {
                if (std::abs(w - model.omega_ep) > 0.1) continue;
                Complex dp{1.0};
                for (Complex z : vals)
                    if (z != w) dp *= w - z;
                worst = std::max(worst, std::abs(dp / asymptotic_p_prime(w, model.omega_ep, 3, spect) - 1.0));
            }
            CHECK(worst < prev);
            prev = worst;
        }
        CHECK(prev < 1e-2);
    }
}

TEST_CASE("Cayley-Hamilton") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const std::size_t m = 2 + s % 7;
        const Matrix h = random_matrix(m, 1100 + s);
        const CharPoly cp = faddeev_leverrier(h);
        Matrix acc(m);
        for (Complex a : cp.coeffs) acc = h * acc + a * Matrix::identity(m);
        CHECK(max_abs(acc) <= 1e-10 * std::pow(std::max(1.0, two_norm(h)), static_cast<double>(m)));
    }
}

TEST_CASE("adjugate polynomial identity") {
    Rng rng(12);
    for (std::uint64_t s = 0; s < 6; ++s) {
        const std::size_t m = 3 + s % 4;
        const Matrix h = random_matrix(m, 1200 + s);
        const CharPoly cp = faddeev_leverrier(h);
        for (int k = 0; k < 5; ++k) {
            const Complex w = rng.complex_normal();
            const Matrix lhs = (w * Matrix::identity(m) - h) * cp.adjugate_at(w);
            const Matrix rhs = eval_p(cp, w) * Matrix::identity(m);
            CHECK(max_abs_diff(lhs, rhs) <= 1e-10 * max_abs(rhs));
        }
    }
}

TEST_CASE("nilpotent input leaves only the leading coefficient") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix n = epsens::testing::random_nilpotent(5, 1300 + s);
        const CharPoly cp = faddeev_leverrier(n);
        for (std::size_t k = 1; k < cp.coeffs.size(); ++k) CHECK(std::abs(cp.coeffs[k]) < 1e-12);
    }
}

TEST_CASE("product rule on the eigenvalue circle") {
    for (std::size_t n : {2, 3, 4}) {
        const NearEPModel model = random_near_ep(n, n, 40 + n);
        double prev = 1e300;
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const std::vector<Complex> vals = eigenvalues(model.at(eps));
            double worst = 0.0;
            for (Complex w : vals) {
                Complex dp{1.0};
                for (Complex z : vals)
                    if (z != w) dp *= w - z;
                const Complex pred = static_cast<double>(n) * ipow(w - model.omega_ep, static_cast<int>(n) - 1);
                worst = std::max(worst, std::abs(dp / pred - 1.0));
            }
            CHECK(worst <= prev);
            prev = worst;
        }
        CHECK(prev < 1e-2);
    }
}
