#pragma once

// Complex Schur decomposition h = q t q^H with unitary reordering of the
// diagonal of t.

#include <cstddef>
#include <functional>
#include <vector>

#include "epsens/linalg.hpp"

namespace epsens {

struct SchurForm {
    Matrix q;  // unitary
    Matrix t;  // upper triangular
    /// ordering[j] is the position diagonal entry j occupied before any
    /// reordering.
    std::vector<std::size_t> ordering;
};

struct SchurOptions {
    /// QR iterations allowed per eigenvalue before giving up.
    int iterations_per_eigenvalue = 60;
};

/// Hessenberg reduction followed by single-shift (Wilkinson) QR iteration
/// with deflation. Throws NonConvergence reporting how many eigenvalues were
/// still undeflated.
SchurForm schur(const Matrix& h, const SchurOptions& opts = {});

/// Swap the diagonal entries k and k+1 of t by a Givens rotation, updating q.
void swap_adjacent(SchurForm& s, std::size_t k);

/// Move the selected diagonal entries to the leading block, preserving their
/// relative order.
void move_to_front(SchurForm& s, const std::function<bool(Complex)>& selected);

/// Schur form of h whose leading n x n block carries the n diagonal entries
/// closest to `center`.
SchurForm schur_with_cluster_first(const Matrix& h, Complex center, std::size_t n);

}  // namespace epsens
