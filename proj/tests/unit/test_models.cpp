#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "epsens/adjugate.hpp"
#include "epsens/models.hpp"

using namespace epsens;

TEST_CASE("Rng is deterministic") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        CHECK(x != c.normal());
    }
    Rng u(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform(-2.0, 3.0);
        CHECK(x >= -2.0);
        CHECK(x < 3.0);
    }
}

TEST_CASE("Jordan block model") {
    const NearEPModel m = jordan_block(3, Complex(1.0, 2.0));
    CHECK(m.order == 3);
    CHECK(m.truncated);
    CHECK(m.h_at_ep == Matrix{{Complex(1.0, 2.0), 1.0, 0.0}, {0.0, Complex(1.0, 2.0), 1.0}, {0.0, 0.0, Complex(1.0, 2.0)}});
    CHECK(m.h_prime == Matrix::unit(3, 2, 0));
    CHECK(m.at(0.5)(2, 0) == Complex(0.5));
}

TEST_CASE("three-state model") {
    const NearEPModel m = example_3x3(1.0, 2.0, 3.0, 4.0);
    CHECK(m.order == 2);
    CHECK_FALSE(m.truncated);
    CHECK(m.h_at_ep == Matrix{{0.0, 1.0, 2.0}, {0.0, 0.0, 3.0}, {0.0, 0.0, 4.0}});
    CHECK(m.h_prime == Matrix::unit(3, 1, 0));
    CHECK_THROWS_AS(example_3x3(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(example_3x3(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("four-state reference data is consistent") {
    const FourStateModel f = example_4x4_data();
    const Matrix& h = f.h;
    auto residual_right = [&](const Vector& r, Complex w) {
        Vector hr = matvec(h, r);
        double e = 0.0;
        for (std::size_t k = 0; k < 4; ++k) e = std::max(e, std::abs(hr[k] - w * r[k]));
        return e;
    };
    auto residual_left = [&](const Vector& l, Complex w) {
        Vector hl = adjoint_matvec(h, l);
        double e = 0.0;
        for (std::size_t k = 0; k < 4; ++k) e = std::max(e, std::abs(hl[k] - std::conj(w) * l[k]));
        return e;
    };
    CHECK(residual_right(f.r_at_zero, 0.0) < 1e-13);
    CHECK(residual_left(f.l_at_zero, 0.0) < 1e-13);
    CHECK(residual_right(f.r_at_omega, f.p.omega) < 1e-13);
    CHECK(residual_left(f.l_at_omega, f.p.omega) < 1e-13);
    CHECK(std::abs(dot(f.l_at_zero, f.r_at_zero)) < 1e-13);
    CHECK(std::abs(dot(f.l_at_omega, f.r_at_omega)) < 1e-13);
    CHECK(std::abs(adjugate_element(f.r_at_zero, f.l_at_zero, -1.0 * h)) ==
          doctest::Approx(f.denominator_zero));
    CHECK(std::abs(adjugate_element(f.r_at_omega, f.l_at_omega, f.p.omega * Matrix::identity(4) - h)) ==
          doctest::Approx(f.denominator_omega));
    FourStateParams bad;
    bad.a1 = 0.0;
    CHECK_THROWS_AS(example_4x4_data(bad), std::invalid_argument);
}

TEST_CASE("random near-EP models") {
    const NearEPModel a = random_near_ep(6, 3, 5);
    const NearEPModel b = random_near_ep(6, 3, 5);
    CHECK(a.h_at_ep == b.h_at_ep);
    CHECK(a.h_prime == b.h_prime);
    CHECK(a.omega_ep == b.omega_ep);
    CHECK_FALSE(random_near_ep(6, 3, 6).h_at_ep == a.h_at_ep);

    CHECK(a.order == 3);
    CHECK_FALSE(a.truncated);
    CHECK(random_near_ep(3, 3, 5).truncated);
    CHECK(two_norm(a.h_prime) == doctest::Approx(1.0).epsilon(1e-10));

    std::size_t at_ep = 0;
    for (std::size_t k = 0; k < 6; ++k) {
        for (std::size_t j = 0; j < k; ++j) CHECK(a.h_at_ep(k, j) == Complex{});
        if (a.h_at_ep(k, k) == a.omega_ep) ++at_ep;
    }
    CHECK(at_ep == 3);
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(a.h_at_ep(k, k + 1)) >= 0.5);

    CHECK_THROWS_AS(random_near_ep(4, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(random_near_ep(3, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(random_near_ep(4, 2, 0, 0.0), std::invalid_argument);
}
