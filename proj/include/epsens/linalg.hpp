#pragma once

// Dense complex linear algebra used by every other part of epsens.
//
// Indices are zero-based throughout: entry (k, l) is row k, column l.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epsens {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Shape mismatch or an index outside the matrix.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical algorithm on valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Square, row-major, complex matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::vector<Complex> row_major);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t dim);
    static Matrix unit(std::size_t dim, std::size_t row, std::size_t col);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * dim_ + c]; }

    std::span<const Complex> data() const noexcept { return a_; }
    std::span<Complex> data() noexcept { return a_; }

    Vector column(std::size_t c) const;
    Vector row(std::size_t r) const;

    /// Conjugate transpose.
    Matrix adjoint() const;

    /// Copy with row `row` and column `col` struck out.
    Matrix without(std::size_t row, std::size_t col) const;

    /// Leading n x n block.
    Matrix leading_block(std::size_t n) const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex s) noexcept;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Complex s, Matrix a);

/// Throws DimensionError when the dimensions differ.
Matrix matmul(const Matrix& a, const Matrix& b);
inline Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Vector matvec(const Matrix& a, std::span<const Complex> x);
/// a^H x
Vector adjoint_matvec(const Matrix& a, std::span<const Complex> x);

/// Conjugate-linear in the first argument: returns a^H b.
Complex dot(std::span<const Complex> a, std::span<const Complex> b);
double norm2(std::span<const Complex> x);
Vector normalized(Vector x);
Vector axpy(Complex alpha, std::span<const Complex> x, std::span<const Complex> y);

/// z^k by repeated squaring (std::pow goes through exp/log).
inline Complex ipow(Complex z, int k) {
    Complex r = 1.0;
    for (; k > 0; k >>= 1, z *= z)
        if (k & 1) r *= z;
    return r;
}

Complex trace(const Matrix& a);
double frobenius_norm(const Matrix& a);
/// Largest absolute row sum.
double inf_norm(const Matrix& a);
double max_abs(const Matrix& a);
/// max |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

struct PowerIterationOptions {
    double tolerance = 1e-13;
    int max_iterations = 10000;
};

/// Largest singular value, by power iteration on x^H x. The iteration stops
/// when the Rayleigh quotient changes by less than `tolerance` relative.
/// Throws NonConvergence after `max_iterations`.
double two_norm(const Matrix& x, const PowerIterationOptions& opts = {});

/// LU factorization with partial pivoting, PA = LU. Construction never
/// fails; zero pivots are kept and reported.
class LuDecomposition {
public:
    explicit LuDecomposition(const Matrix& a);

    std::size_t dim() const noexcept { return lu_.dim(); }
    Complex determinant() const;

    /// min |pivot| divided by the largest row norm of the input.
    double min_pivot_ratio() const noexcept { return min_pivot_ratio_; }
    bool singular(double threshold) const noexcept { return min_pivot_ratio_ < threshold; }

    /// Solve a x = b. Zero pivots give non-finite output; callers check
    /// singular() first.
    Vector solve(std::span<const Complex> b) const;
    /// Solve a^H x = b.
    Vector solve_adjoint(std::span<const Complex> b) const;
    Matrix inverse() const;

    /// Replace pivots smaller than `floor` (absolute) by `floor` with the
    /// original phase. Used by shifted inverse iteration.
    void regularize_pivots(double floor);

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    double min_pivot_ratio_ = 0.0;
};

Complex determinant(const Matrix& a);

struct LuOptions {
    /// A pivot is treated as zero below this multiple of the largest row norm.
    double pivot_threshold = 1e-14;
};

struct SolveResult {
    Vector x;
    /// ||a x - b||_2
    double residual = 0.0;
};

/// Partial-pivoted LU solve. Throws SingularMatrix below the pivot threshold.
SolveResult solve(const Matrix& a, std::span<const Complex> b, const LuOptions& opts = {});

struct HessenbergForm {
    Matrix q;     // unitary
    Matrix hess;  // upper Hessenberg, q^H a q
};

/// Householder reduction to upper Hessenberg form.
HessenbergForm hessenberg(const Matrix& a);

/// Complex Givens rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
    double c = 1.0;
    Complex s{};

    static Givens zeroing(Complex a, Complex b);
};

}  // namespace epsens
