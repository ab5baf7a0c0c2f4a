#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "epsens/models.hpp"
#include "epsens/oracle.hpp"

using namespace epsens;
using namespace epsens::oracle;

namespace {

double wide_abs(const WideScalar& z) { return static_cast<double>(abs(z)); }

}  // namespace

TEST_CASE("oracle determinants") {
    CHECK(oracle_det(Matrix::identity(4)) == WideScalar(1.0));
    CHECK(oracle_det(jordan_block(4).h_at_ep) == WideScalar(0.0));
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Matrix x = epsens::testing::random_integer_matrix(5 + s % 4, s);
        const WideScalar d = oracle_det(x);
        CHECK(d == WideScalar(static_cast<double>(epsens::testing::bareiss_det(x))));
    }
    CHECK_THROWS_AS(oracle_det(Matrix(kCofactorCap + 1)), DimensionError);
}

TEST_CASE("oracle adjugate") {
    const WideMatrix id = oracle_adjugate(Matrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == WideScalar(i == j ? 1.0 : 0.0));
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix x = epsens::testing::random_integer_matrix(5, 100 + s);
        const WideMatrix prod = WideMatrix(x) * oracle_adjugate(x);
        const WideScalar d = oracle_det(x);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) CHECK(prod(i, j) == (i == j ? d : WideScalar(0.0)));
    }
    CHECK_THROWS_AS(oracle_adjugate(Matrix(kCofactorCap + 1)), DimensionError);
}

TEST_CASE("oracle eigenvalues of a diagonal matrix") {
    const WideEigen e = oracle_eigen(Matrix{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}});
    REQUIRE(e.values.size() == 3);
    std::vector<double> re;
    for (const auto& w : e.values) {
        CHECK(wide_abs(w - WideScalar(std::round(static_cast<double>(w.re)))) < 1e-28);
        re.push_back(static_cast<double>(w.re));
    }
    std::sort(re.begin(), re.end());
    CHECK(re == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("oracle resolves a perturbed Jordan block to double-double accuracy") {
    const double eps = 1e-6;
    const WideEigen e = oracle_eigen(Matrix{{0.0, 1.0}, {eps, 0.0}});
    REQUIRE(e.values.size() == 2);
    for (const auto& w : e.values) {
        const WideScalar sq = w * w;
        CHECK(wide_abs(sq - WideScalar(eps)) < 1e-20 * eps);
        CHECK(std::abs(static_cast<double>(w.im)) < 1e-25);
    }
    CHECK(wide_abs(e.values[0] + e.values[1]) < 1e-25);
}

TEST_CASE("oracle eigensystem residuals") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        const WideEigen e = oracle_eigen(epsens::testing::random_matrix(8, 500 + s));
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(e.right_residual[i] < 1e-20);
            CHECK(e.left_residual[i] < 1e-20);
        }
    }
    CHECK_THROWS_AS(oracle_eigen(Matrix(kEigenCap + 1)), DimensionError);
}

TEST_CASE("null vector of a rank-deficient matrix") {
    WideMatrix a(3);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    DD sigma;
    const WideVector v = null_vector(a, 80, &sigma);
    CHECK(static_cast<double>(sigma) < 1e-30);
    CHECK(wide_abs(v[2]) == doctest::Approx(1.0));
}
