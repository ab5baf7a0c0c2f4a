#pragma once

// Eigenvalues, right/left eigenvectors and phase rigidity.
//
// Conventions: `right` solves H R = w R. `left` is the vector L with
// L^H H = w L^H. Both are returned with unit norm and their
// largest-magnitude component made real and positive. The phase rigidity is
// r = L^H R and the Petermann factor K = |r|^-2.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "epsens/linalg.hpp"

namespace epsens {

enum class Side { right, left };

/// Every adjugate pivot produced a (numerically) null vector; the eigenvalue
/// has geometric multiplicity > 1 or is not an eigenvalue at all.
class AllPivotsNull : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Both p'(w) and A vanish: the exact rigidity formula is 0/0.
class DegenerateDenominator : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A failure while assembling one eigenpair; index() is its position in the
/// sorted eigenvalue list.
class EigenpairError : public NumericalError {
public:
    EigenpairError(std::size_t index, const std::string& what)
        : NumericalError("eigenpair " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

struct EigenvalueOptions {
    int max_iterations = 500;
    /// Extra Newton steps w <- w - 1/tr((w I - H)^-1) computed through LU.
    /// This is Newton on p with p'/p evaluated from the matrix, which avoids
    /// the digits lost in the polynomial coefficients.
    int resolvent_polish_steps = 4;
};

/// Roots of the characteristic polynomial (Faddeev-LeVerrier coefficients,
/// Aberth-Ehrlich iteration, Newton polish), listed with multiplicity and
/// sorted lexicographically by (real, imag).
std::vector<Complex> eigenvalues(const Matrix& h, const EigenvalueOptions& opts = {});

/// Make the largest-magnitude component real positive. Zero vectors pass
/// through unchanged.
void fix_phase(Vector& v);

/// Eigenvector from a column (right) or row (left) of adj(w I - H).
/// With no pivot the column/row of largest norm is used. Throws
/// AllPivotsNull when that norm is below `null_threshold` times the natural
/// scale of the adjugate.
Vector eigvec_from_adjugate(const Matrix& h, Complex w, Side side, std::optional<std::size_t> pivot = std::nullopt,
                            double null_threshold = 1e-11);

/// Same, from an already computed adj(w I - H).
Vector eigvec_from_adjugate_matrix(const Matrix& adj, Side side, std::optional<std::size_t> pivot = std::nullopt,
                                   double scale = 1.0, double null_threshold = 1e-11);

/// Shifted inverse iteration from a fixed start vector.
Vector eigvec_inverse_iteration(const Matrix& h, Complex w, Side side, int max_iterations = 60);

/// r = L^H R with both vectors scaled to unit length.
Complex rigidity_direct(std::span<const Complex> left, std::span<const Complex> right);

/// r = p'(w) / A_{R L}(w I - H). Throws DegenerateDenominator when both the
/// numerator and the denominator are below threshold.
Complex rigidity_exact(const Matrix& h, Complex w, std::span<const Complex> right, std::span<const Complex> left);

/// Same, with p'(w) and adj(w I - H) supplied. Both count as vanishing
/// below 1e-13 ||adj||_F.
Complex rigidity_exact_from(Complex p_prime, const Matrix& adj, std::span<const Complex> right,
                            std::span<const Complex> left);

enum class VectorRoute { adjugate, inverse_iteration };

enum class PairKind {
    simple,      // isolated eigenvalue
    defective,   // member of a numerically exact EP (single eigenvector pair)
    semisimple,  // repeated eigenvalue with geometric multiplicity > 1
};

struct Eigenpair {
    Complex value;
    Vector right;
    Vector left;
    /// r from L^H R.
    Complex rigidity;
    /// r from p'(w) / A; empty when the formula is 0/0.
    std::optional<Complex> rigidity_exact;
    /// |exact - direct| / |direct|, when both exist.
    double route_disagreement = 0.0;
    double petermann = 1.0;
    PairKind kind = PairKind::simple;
    /// Size of the coincident group this pair belongs to (1 for simple).
    std::size_t multiplicity = 1;
    VectorRoute route = VectorRoute::adjugate;
    double right_residual = 0.0;  // ||H R - w R|| / ||H||
    double left_residual = 0.0;   // ||L^H H - w L^H|| / ||H||
};

struct Eigensystem {
    Matrix matrix;
    std::vector<Eigenpair> pairs;

    double max_residual() const;
    double max_route_disagreement() const;
    /// max |L_i^H R_j| over i != j among simple pairs
    double max_biorthogonality_defect() const;
};

struct EigensystemOptions {
    EigenvalueOptions eigen;
    /// Relative residual below which a tight group of roots is treated as a
    /// single numerically exact eigenvalue.
    double coincidence_residual = 1e-12;
};

/// Full analysis: eigenvalues, both eigenvectors (adjugate route, inverse
/// iteration as fallback), rigidity via both routes, Petermann factors.
/// Coincident roots are detected and reported as defective (r = 0, K = inf)
/// or semisimple groups. Errors carry the eigenvalue index.
Eigensystem eigensystem(const Matrix& h, const EigensystemOptions& opts = {});

/// Scale used for relative thresholds: max(||H||_F, tiny).
double matrix_scale(const Matrix& h);

}  // namespace epsens
