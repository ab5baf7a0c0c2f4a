#include "epsens/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace epsens {

Matrix::Matrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

Matrix::Matrix(std::size_t dim, std::vector<Complex> row_major) : dim_(dim), a_(std::move(row_major)) {
    if (a_.size() != dim * dim) {
        throw DimensionError("Matrix: expected " + std::to_string(dim * dim) + " entries, got " +
                             std::to_string(a_.size()));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    a_.reserve(dim_ * dim_);
    for (const auto& r : rows) {
        if (r.size() != dim_) throw DimensionError("Matrix: rows must form a square grid");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::unit(std::size_t dim, std::size_t row, std::size_t col) {
    if (row >= dim || col >= dim) throw DimensionError("Matrix::unit: index out of range");
    Matrix m(dim);
    m(row, col) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t c) const {
    Vector v(dim_);
    for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
    return v;
}

Vector Matrix::row(std::size_t r) const {
    return Vector(a_.begin() + static_cast<std::ptrdiff_t>(r * dim_),
                  a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim_));
}

Matrix Matrix::adjoint() const {
    Matrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

Matrix Matrix::without(std::size_t row, std::size_t col) const {
    if (dim_ < 2) throw DimensionError("Matrix::without: needs dim >= 2");
    if (row >= dim_ || col >= dim_) throw DimensionError("Matrix::without: index out of range");
    Matrix m(dim_ - 1);
    for (std::size_t r = 0, rr = 0; r < dim_; ++r) {
        if (r == row) continue;
        for (std::size_t c = 0, cc = 0; c < dim_; ++c) {
            if (c == col) continue;
            m(rr, cc++) = (*this)(r, c);
        }
        ++rr;
    }
    return m;
}

Matrix Matrix::leading_block(std::size_t n) const {
    if (n > dim_) throw DimensionError("Matrix::leading_block: block larger than matrix");
    Matrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = (*this)(r, c);
    return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (other.dim_ != dim_) throw DimensionError("Matrix +=: dimension mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (other.dim_ != dim_) throw DimensionError("Matrix -=: dimension mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= other.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(Complex s) noexcept {
    for (auto& x : a_) x *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Complex s, Matrix a) { return a *= s; }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("matmul: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    }
    const std::size_t m = a.dim();
    Matrix c(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < m; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector matvec(const Matrix& a, std::span<const Complex> x) {
    if (x.size() != a.dim()) throw DimensionError("matvec: dimension mismatch");
    Vector y(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Complex s{};
        for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector adjoint_matvec(const Matrix& a, std::span<const Complex> x) {
    if (x.size() != a.dim()) throw DimensionError("adjoint_matvec: dimension mismatch");
    Vector y(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) y[j] += std::conj(a(i, j)) * x[i];
    return y;
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
    Complex s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(std::span<const Complex> x) {
    // scaled to stay clear of overflow for large minors
    double scale = 0.0;
    for (const auto& v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v / scale);
    return scale * std::sqrt(s);
}

Vector normalized(Vector x) {
    const double n = norm2(x);
    if (n == 0.0) throw NumericalError("normalized: zero vector");
    for (auto& v : x) v /= n;
    return x;
}

Vector axpy(Complex alpha, std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw DimensionError("axpy: dimension mismatch");
    Vector out(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
    return out;
}

Complex trace(const Matrix& a) {
    Complex t{};
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double inf_norm(const Matrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.dim(); ++j) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double max_abs(const Matrix& a) {
    double best = 0.0;
    for (const auto& v : a.data()) best = std::max(best, std::abs(v));
    return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("max_abs_diff: dimension mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
    return best;
}

double two_norm(const Matrix& x, const PowerIterationOptions& opts) {
    const std::size_t m = x.dim();
    if (m == 0 || max_abs(x) == 0.0) return 0.0;

    // Fixed, irregular start vector; generic enough not to be orthogonal to
    // the dominant right singular vector of any matrix met in practice.
    Vector v(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = static_cast<double>(j + 1);
        v[j] = Complex(1.0 + 0.5 * std::cos(1.7 * t), 0.3 * std::sin(2.3 * t));
    }
    v = normalized(std::move(v));

    double lambda = -1.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const Vector w = matvec(x, v);
        const double nw = norm2(w);
        const double next = nw * nw;
        Vector u = adjoint_matvec(x, w);
        const double nu = norm2(u);
        if (nu == 0.0) {
            // start vector fell into the null space; rotate it
            for (std::size_t j = 0; j < m; ++j) v[j] = Complex(std::sin(3.1 * static_cast<double>(j) + 0.7), 1.0);
            v = normalized(std::move(v));
            continue;
        }
        for (auto& c : u) c /= nu;
        v = std::move(u);
        if (it > 0 && std::abs(next - lambda) <= opts.tolerance * next) {
            // one more application gives the converged Rayleigh quotient
            const double final_norm = norm2(matvec(x, v));
            return std::max(final_norm, std::sqrt(next));
        }
        lambda = next;
    }
    throw NonConvergence("two_norm: power iteration did not converge in " + std::to_string(opts.max_iterations) +
                         " iterations");
}

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a), perm_(a.dim()) {
    const std::size_t m = a.dim();
    for (std::size_t i = 0; i < m; ++i) perm_[i] = i;

    double max_row = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += std::abs(a(i, j));
        max_row = std::max(max_row, s);
    }

    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < m; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (p != k) {
            for (std::size_t j = 0; j < m; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
            sign_ = -sign_;
        }
        min_pivot = std::min(min_pivot, best);
        if (best == 0.0) continue;
        const Complex pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < m; ++i) {
            const Complex f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            if (f == Complex{}) continue;
            for (std::size_t j = k + 1; j < m; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
    if (m == 0) min_pivot = 0.0;
    min_pivot_ratio_ = max_row > 0.0 ? min_pivot / max_row : 0.0;
}

Complex LuDecomposition::determinant() const {
    Complex d = static_cast<double>(sign_);
    for (std::size_t i = 0; i < lu_.dim(); ++i) d *= lu_(i, i);
    return d;
}

Vector LuDecomposition::solve(std::span<const Complex> b) const {
    const std::size_t m = lu_.dim();
    if (b.size() != m) throw DimensionError("LuDecomposition::solve: dimension mismatch");
    Vector x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = m; i-- > 0;) {
        for (std::size_t j = i + 1; j < m; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

Vector LuDecomposition::solve_adjoint(std::span<const Complex> b) const {
    // a^H = (P^T L U)^H = U^H L^H P
    const std::size_t m = lu_.dim();
    if (b.size() != m) throw DimensionError("LuDecomposition::solve_adjoint: dimension mismatch");
    Vector y(b.begin(), b.end());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) y[i] -= std::conj(lu_(j, i)) * y[j];
        y[i] /= std::conj(lu_(i, i));
    }
    for (std::size_t i = m; i-- > 0;)
        for (std::size_t j = i + 1; j < m; ++j) y[i] -= std::conj(lu_(j, i)) * y[j];
    Vector x(m);
    for (std::size_t i = 0; i < m; ++i) x[perm_[i]] = y[i];
    return x;
}

Matrix LuDecomposition::inverse() const {
    const std::size_t m = lu_.dim();
    Matrix inv(m);
    Vector e(m);
    for (std::size_t c = 0; c < m; ++c) {
        std::fill(e.begin(), e.end(), Complex{});
        e[c] = 1.0;
        const Vector col = solve(e);
        for (std::size_t r = 0; r < m; ++r) inv(r, c) = col[r];
    }
    return inv;
}

void LuDecomposition::regularize_pivots(double floor) {
    for (std::size_t i = 0; i < lu_.dim(); ++i) {
        const Complex p = lu_(i, i);
        if (std::abs(p) < floor) lu_(i, i) = p == Complex{} ? Complex(floor) : floor * p / std::abs(p);
    }
}

Complex determinant(const Matrix& a) {
    if (a.dim() == 0) return 1.0;
    return LuDecomposition(a).determinant();
}

SolveResult solve(const Matrix& a, std::span<const Complex> b, const LuOptions& opts) {
    if (b.size() != a.dim()) throw DimensionError("solve: right-hand side has wrong dimension");
    const LuDecomposition lu(a);
    if (lu.singular(opts.pivot_threshold)) {
        throw SingularMatrix("solve: pivot ratio " + std::to_string(lu.min_pivot_ratio()) + " below threshold " +
                             std::to_string(opts.pivot_threshold));
    }
    SolveResult out;
    out.x = lu.solve(b);
    Vector r = matvec(a, out.x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    out.residual = norm2(r);
    return out;
}

HessenbergForm hessenberg(const Matrix& a) {
    const std::size_t m = a.dim();
    Matrix h = a;
    Matrix q = Matrix::identity(m);
    Vector v;
    for (std::size_t k = 0; k + 2 < m; ++k) {
        double tail = 0.0;
        for (std::size_t i = k + 2; i < m; ++i) tail = std::max(tail, std::abs(h(i, k)));
        if (tail == 0.0) continue;

        v.assign(m - k - 1, Complex{});
        for (std::size_t i = k + 1; i < m; ++i) v[i - k - 1] = h(i, k);
        const double alpha_norm = norm2(v);
        const Complex x0 = v[0];
        const Complex phase = x0 == Complex{} ? Complex(1.0) : x0 / std::abs(x0);
        v[0] += phase * alpha_norm;
        const double vn = norm2(v);
        for (auto& c : v) c /= vn;

        // h <- (I - 2 v v^H) h (I - 2 v v^H), acting on rows/cols k+1..m-1
        for (std::size_t j = 0; j < m; ++j) {
            Complex s{};
            for (std::size_t i = k + 1; i < m; ++i) s += std::conj(v[i - k - 1]) * h(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < m; ++i) h(i, j) -= v[i - k - 1] * s;
        }
        for (std::size_t i = 0; i < m; ++i) {
            Complex s{};
            for (std::size_t j = k + 1; j < m; ++j) s += h(i, j) * v[j - k - 1];
            s *= 2.0;
            for (std::size_t j = k + 1; j < m; ++j) h(i, j) -= s * std::conj(v[j - k - 1]);
        }
        for (std::size_t i = 0; i < m; ++i) {
            Complex s{};
            for (std::size_t j = k + 1; j < m; ++j) s += q(i, j) * v[j - k - 1];
            s *= 2.0;
            for (std::size_t j = k + 1; j < m; ++j) q(i, j) -= s * std::conj(v[j - k - 1]);
        }
        for (std::size_t i = k + 2; i < m; ++i) h(i, k) = Complex{};
    }
    return {std::move(q), std::move(h)};
}

Givens Givens::zeroing(Complex a, Complex b) {
    if (b == Complex{}) return {1.0, Complex{}};
    if (a == Complex{}) return {0.0, std::conj(b) / std::abs(b)};
    const double aa = std::abs(a);
    const double r = std::hypot(aa, std::abs(b));
    return {aa / r, (a / aa) * std::conj(b) / r};
}

}  // namespace epsens
