#pragma once

// Shared test matrices and reference helpers.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "epsens/linalg.hpp"
#include "epsens/models.hpp"

namespace epsens::testing {

/// Dense complex Gaussian matrix.
Matrix random_matrix(std::size_t m, std::uint64_t seed);

/// Integer entries in [-range, range] on the real axis.
Matrix random_integer_matrix(std::size_t m, std::uint64_t seed, int range = 9);

/// V diag(w) V^-1 with well separated random w and a random V.
Matrix random_diagonalizable(std::size_t m, std::uint64_t seed);

/// Upper triangular with zero diagonal and random nonzero superdiagonal
/// (plus random entries above it).
Matrix random_nilpotent(std::size_t n, std::uint64_t seed);

/// Fraction-free (Bareiss) determinant of a real integer matrix, exact.
long long bareiss_det(const Matrix& x);

/// Pairing of a to b by repeatedly taking the globally closest remaining
/// pair; returns max |a_i - b_match(i)|.
double matched_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

double rel_diff(double a, double b);

struct CorpusEntry {
    std::string name;
    Matrix h;
};

/// Matrices shared by the oracle-equivalence checks.
std::vector<CorpusEntry> shared_corpus();

}  // namespace epsens::testing
