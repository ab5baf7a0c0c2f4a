#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support/fixtures.hpp"
#include "epsens/schur.hpp"
#include "epsens/spectral.hpp"

using namespace epsens;
using epsens::testing::matched_distance;
using epsens::testing::random_matrix;

namespace {

double lower_part(const Matrix& t) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(t(i, j)));
    return worst;
}

double reconstruction_error(const Matrix& h, const SchurForm& s) {
    return max_abs_diff(s.q * s.t * s.q.adjoint(), h) / frobenius_norm(h);
}

double unitarity_error(const Matrix& q) {
    return max_abs_diff(q.adjoint() * q, Matrix::identity(q.dim()));
}

std::vector<Complex> diagonal(const Matrix& t) {
    std::vector<Complex> d;
    for (std::size_t i = 0; i < t.dim(); ++i) d.push_back(t(i, i));
    return d;
}

}  // namespace

TEST_CASE("triangular input is already in Schur form") {
    const Matrix t{{1.0, 2.0, 3.0}, {0.0, 4.0, 5.0}, {0.0, 0.0, 6.0}};
    const SchurForm s = schur(t);
    CHECK(lower_part(s.t) < 1e-14);
    CHECK(reconstruction_error(t, s) < 1e-14);
    CHECK(matched_distance(diagonal(s.t), {1.0, 4.0, 6.0}) < 1e-13);
}

TEST_CASE("Hermitian input gives a diagonal Schur factor") {
    const Matrix a = random_matrix(5, 11);
    const Matrix h = a + a.adjoint();
    const SchurForm s = schur(h);
    double off = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            if (i != j) off = std::max(off, std::abs(s.t(i, j)));
    CHECK(off < 1e-12 * frobenius_norm(h));
    for (Complex d : diagonal(s.t)) CHECK(std::abs(d.imag()) < 1e-12 * frobenius_norm(h));
}

TEST_CASE("Schur diagonal matches the eigenvalues") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix h = random_matrix(6, 20 + seed);
        const SchurForm s = schur(h);
        CHECK(lower_part(s.t) < 1e-13 * frobenius_norm(h));
        CHECK(reconstruction_error(h, s) < 1e-13);
        CHECK(unitarity_error(s.q) < 1e-13);
        CHECK(matched_distance(diagonal(s.t), eigenvalues(h)) < 1e-10);
    }
}

TEST_CASE("adjacent swaps keep the factorization") {
    const Matrix h = random_matrix(5, 3);
    SchurForm s = schur(h);
    const auto before = diagonal(s.t);
    swap_adjacent(s, 1);
    CHECK(std::abs(s.t(1, 1) - before[2]) < 1e-12);
    CHECK(std::abs(s.t(2, 2) - before[1]) < 1e-12);
    CHECK(lower_part(s.t) < 1e-12);
    CHECK(reconstruction_error(h, s) < 1e-13);
    CHECK(unitarity_error(s.q) < 1e-13);
}

TEST_CASE("selected eigenvalues move to the front in order") {
    const Matrix h = random_matrix(7, 5);
    SchurForm s = schur(h);
    const auto before = diagonal(s.t);
    auto pick = [](Complex w) { return w.real() > 0.0; };
    std::vector<Complex> chosen;
    for (Complex w : before)
        if (pick(w)) chosen.push_back(w);
    move_to_front(s, pick);
    for (std::size_t k = 0; k < chosen.size(); ++k) CHECK(std::abs(s.t(k, k) - chosen[k]) < 1e-12);
    CHECK(lower_part(s.t) < 1e-12);
    CHECK(reconstruction_error(h, s) < 1e-13);
    for (std::size_t j = 0; j < s.ordering.size(); ++j) CHECK(std::abs(before[s.ordering[j]] - s.t(j, j)) < 1e-12);
}

TEST_CASE("cluster-first form of a near-EP matrix") {
    const NearEPModel model = random_near_ep(6, 3, 9);
    const Matrix h = model.at(1e-6);
    const SchurForm s = schur_with_cluster_first(h, model.omega_ep, 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(s.t(k, k) - model.omega_ep) < 1e-1);
    for (std::size_t k = 3; k < 6; ++k) CHECK(std::abs(s.t(k, k) - model.omega_ep) > 1e-1);
    CHECK(reconstruction_error(h, s) < 1e-13);
}
