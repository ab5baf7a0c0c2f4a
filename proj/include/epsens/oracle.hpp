#pragma once

// Brute-force reference results in double-double precision: determinants and
// adjugates by cofactor expansion, eigenvalues by shifted QR with Newton
// polishing, eigenvectors as SVD null vectors. Shares only the Matrix
// container with the main path.

#include <cstddef>
#include <span>
#include <vector>

#include "epsens/double_double.hpp"
#include "epsens/linalg.hpp"

namespace epsens::oracle {

using wide::DD;
using wide::WideScalar;
using WideVector = std::vector<WideScalar>;

inline constexpr std::size_t kCofactorCap = 10;
inline constexpr std::size_t kEigenCap = 16;

class WideMatrix {
public:
    WideMatrix() = default;
    explicit WideMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
    explicit WideMatrix(const Matrix& x);

    std::size_t dim() const noexcept { return dim_; }
    WideScalar& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * dim_ + c]; }
    const WideScalar& operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * dim_ + c]; }

    /// Rounded to double.
    Matrix to_matrix() const;

private:
    std::size_t dim_ = 0;
    std::vector<WideScalar> a_;
};

WideMatrix operator*(const WideMatrix& a, const WideMatrix& b);
Vector to_vector(std::span<const WideScalar> v);

/// Laplace expansion along rows, memoized over column subsets. Throws
/// DimensionError above kCofactorCap.
WideScalar oracle_det(const Matrix& x);
WideScalar oracle_det(const WideMatrix& x);

/// adj_kl = (-1)^(k+l) det(x without row l, column k). Throws DimensionError
/// above kCofactorCap.
WideMatrix oracle_adjugate(const Matrix& x);

struct WideEigen {
    WideVector values;
    /// unit norm, largest component real positive
    std::vector<WideVector> right;
    /// stored as L, so the bra is L^H
    std::vector<WideVector> left;
    /// ||H R - w R|| / ||H||_F and the same for the left vectors
    std::vector<double> right_residual;
    std::vector<double> left_residual;
    int qr_iterations = 0;
};

struct EigenOptions {
    int iterations_per_eigenvalue = 200;
    int newton_steps = 6;
    int svd_sweeps = 80;
};

/// Throws DimensionError above kEigenCap and NonConvergence when QR or the
/// Jacobi SVD stalls.
WideEigen oracle_eigen(const Matrix& x, const EigenOptions& opts = {});

/// Right singular vector of a for its smallest singular value, by one-sided
/// Jacobi. Returns the singular value through `sigma_min` when non-null.
WideVector null_vector(const WideMatrix& a, int max_sweeps = 80, DD* sigma_min = nullptr);

}  // namespace epsens::oracle
