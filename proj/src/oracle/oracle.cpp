#include "epsens/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace epsens::oracle {

namespace {

using wide::abs;
using wide::conj;
using wide::norm;
using wide::sqrt;

// |re| + |im|, cheap and within sqrt(2) of the modulus
double mag1(const WideScalar& z) { return std::abs(z.re.hi) + std::abs(z.im.hi); }

WideScalar scale(const WideScalar& z, const DD& s) { return {z.re * s, z.im * s}; }

DD vec_norm(const WideVector& v) {
    DD s;
    for (const auto& z : v) s += norm(z);
    return sqrt(s);
}

DD frobenius(const WideMatrix& a) {
    DD s;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) s += norm(a(i, j));
    return sqrt(s);
}

void normalize_with_phase(WideVector& v) {
    const DD n = vec_norm(v);
    if (n.hi == 0.0) return;
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (norm(v[i]) > norm(v[big])) big = i;
    const WideScalar phase = conj(v[big]) / WideScalar(abs(v[big]));
    for (auto& z : v) z = scale(z * phase, DD(1.0) / n);
    v[big].im = DD();
}

struct WideGivens {
    DD c{1.0};
    WideScalar s;

    // G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0]
    static WideGivens zeroing(const WideScalar& a, const WideScalar& b) {
        const DD nb = abs(b);
        if (nb.hi == 0.0) return {};
        const DD na = abs(a);
        if (na.hi == 0.0) return {DD(), WideScalar(1.0)};
        const DD r = sqrt(na * na + nb * nb);
        const WideScalar unit_a = a / WideScalar(na);
        return {na / r, scale(unit_a * conj(b), DD(1.0) / r)};
    }
};

void householder_hessenberg(WideMatrix& h) {
    const std::size_t m = h.dim();
    for (std::size_t k = 0; k + 2 < m; ++k) {
        DD alpha2;
        for (std::size_t i = k + 1; i < m; ++i) alpha2 += norm(h(i, k));
        const DD alpha = sqrt(alpha2);
        if (alpha.hi == 0.0) continue;
        const WideScalar x0 = h(k + 1, k);
        const DD ax0 = abs(x0);
        const WideScalar phase = ax0.hi == 0.0 ? WideScalar(1.0) : x0 / WideScalar(ax0);
        WideVector v(m);
        v[k + 1] = x0 + scale(phase, alpha);
        for (std::size_t i = k + 2; i < m; ++i) v[i] = h(i, k);
        DD vn2;
        for (std::size_t i = k + 1; i < m; ++i) vn2 += norm(v[i]);
        if (vn2.hi == 0.0) continue;
        const DD tau = DD(2.0) / vn2;
        // h <- (I - tau v v^H) h (I - tau v v^H)
        for (std::size_t j = 0; j < m; ++j) {
            WideScalar s;
            for (std::size_t i = k + 1; i < m; ++i) s += conj(v[i]) * h(i, j);
            s = scale(s, tau);
            for (std::size_t i = k + 1; i < m; ++i) h(i, j) -= v[i] * s;
        }
        for (std::size_t i = 0; i < m; ++i) {
            WideScalar s;
            for (std::size_t j = k + 1; j < m; ++j) s += h(i, j) * v[j];
            s = scale(s, tau);
            for (std::size_t j = k + 1; j < m; ++j) h(i, j) -= s * conj(v[j]);
        }
        for (std::size_t i = k + 2; i < m; ++i) h(i, k) = WideScalar();
    }
}

WideScalar wilkinson_shift(const WideScalar& a, const WideScalar& b, const WideScalar& c, const WideScalar& d) {
    const WideScalar delta = scale(a - d, DD(0.5));
    const WideScalar bc = b * c;
    WideScalar disc = sqrt(delta * delta + bc);
    if ((conj(delta) * disc).re.hi < 0.0) disc = -disc;
    const WideScalar den = delta + disc;
    if (mag1(den) == 0.0) return d;
    return d - bc / den;
}

// Eigenvalues of an upper Hessenberg matrix by explicitly shifted single-step
// QR, window by window.
WideVector hessenberg_qr(WideMatrix h, int per_eigenvalue, int& iterations) {
    const std::size_t m = h.dim();
    WideVector values(m);
    const double fro = static_cast<double>(frobenius(h));
    const double floor = wide::kEpsilon * (fro > 0.0 ? fro : 1.0);
    std::vector<WideGivens> rot(m);
    iterations = 0;

    std::size_t hi = m;
    int stalled = 0;
    while (hi > 0) {
        const std::size_t top = hi - 1;
        std::size_t lo = top;
        while (lo > 0) {
            const double sub = mag1(h(lo, lo - 1));
            if (sub <= wide::kEpsilon * (mag1(h(lo, lo)) + mag1(h(lo - 1, lo - 1))) || sub <= floor) {
                h(lo, lo - 1) = WideScalar();
                break;
            }
            --lo;
        }
        if (lo == top) {
            values[top] = h(top, top);
            --hi;
            stalled = 0;
            continue;
        }
        if (stalled >= per_eigenvalue) throw NonConvergence("oracle_eigen: QR did not converge for eigenvalue " +
                                                             std::to_string(top));
        ++stalled;
        ++iterations;

        WideScalar mu;
        if (stalled % 11 == 0)
            mu = h(top, top) + WideScalar(DD(1.5) * abs(h(top, top - 1)));
        else
            mu = wilkinson_shift(h(top - 1, top - 1), h(top - 1, top), h(top, top - 1), h(top, top));

        for (std::size_t k = lo; k <= top; ++k) h(k, k) -= mu;
        for (std::size_t k = lo; k < top; ++k) {
            const WideGivens g = WideGivens::zeroing(h(k, k), h(k + 1, k));
            rot[k] = g;
            for (std::size_t j = k; j <= top; ++j) {
                const WideScalar x = h(k, j);
                const WideScalar y = h(k + 1, j);
                h(k, j) = scale(x, g.c) + g.s * y;
                h(k + 1, j) = scale(y, g.c) - conj(g.s) * x;
            }
        }
        for (std::size_t k = lo; k < top; ++k) {
            const WideGivens& g = rot[k];
            const std::size_t last = std::min(k + 2, top);
            for (std::size_t i = lo; i <= last; ++i) {
                const WideScalar x = h(i, k);
                const WideScalar y = h(i, k + 1);
                h(i, k) = scale(x, g.c) + y * conj(g.s);
                h(i, k + 1) = scale(y, g.c) - x * g.s;
            }
        }
        for (std::size_t k = lo; k <= top; ++k) h(k, k) += mu;
    }
    return values;
}

// tr((wI - a)^{-1}) by partial-pivoted LU; false when a pivot vanishes.
bool resolvent_trace(const WideMatrix& a, const WideScalar& w, WideScalar& out) {
    const std::size_t m = a.dim();
    WideMatrix lu(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) lu(i, j) = (i == j ? w : WideScalar()) - a(i, j);
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < m; ++i)
            if (mag1(lu(i, k)) > mag1(lu(p, k))) p = i;
        if (mag1(lu(p, k)) == 0.0) return false;
        if (p != k) {
            for (std::size_t j = 0; j < m; ++j) std::swap(lu(p, j), lu(k, j));
            std::swap(perm[p], perm[k]);
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            lu(i, k) /= lu(k, k);
            for (std::size_t j = k + 1; j < m; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
        }
    }
    WideScalar tr;
    WideVector x(m);
    for (std::size_t c = 0; c < m; ++c) {
        // solve for column c of the inverse; only its entry c is needed
        for (std::size_t i = 0; i < m; ++i) x[i] = perm[i] == c ? WideScalar(1.0) : WideScalar();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
        for (std::size_t i = m; i-- > 0;) {
            for (std::size_t j = i + 1; j < m; ++j) x[i] -= lu(i, j) * x[j];
            x[i] /= lu(i, i);
        }
        tr += x[c];
    }
    out = tr;
    return true;
}

void newton_polish(const WideMatrix& a, WideVector& values, int steps) {
    const std::size_t m = values.size();
    const double tiny = wide::kEpsilon * static_cast<double>(frobenius(a));
    for (std::size_t i = 0; i < m; ++i) {
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) gap = std::min(gap, static_cast<double>(abs(values[i] - values[j])));
        double last = std::numeric_limits<double>::infinity();
        for (int s = 0; s < steps; ++s) {
            WideScalar tr;
            if (!resolvent_trace(a, values[i], tr) || mag1(tr) == 0.0) break;
            const WideScalar step = WideScalar(1.0) / tr;
            const double len = static_cast<double>(abs(step));
            if (len > 0.25 * gap || len >= last) break;
            values[i] -= step;
            last = len;
            if (len <= 4.0 * wide::kEpsilon * static_cast<double>(abs(values[i])) + tiny) break;
        }
    }
}

WideVector wide_matvec(const WideMatrix& a, const WideVector& x) {
    const std::size_t m = a.dim();
    WideVector y(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) y[i] += a(i, j) * x[j];
    return y;
}

WideMatrix adjoint(const WideMatrix& a) {
    WideMatrix b(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) b(j, i) = conj(a(i, j));
    return b;
}

double eigen_residual(const WideMatrix& a, const WideScalar& w, const WideVector& x, const DD& scale_norm) {
    WideVector y = wide_matvec(a, x);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] -= w * x[i];
    const DD den = scale_norm * vec_norm(x);
    return den.hi == 0.0 ? 0.0 : static_cast<double>(vec_norm(y) / den);
}

}  // namespace

WideMatrix::WideMatrix(const Matrix& x) : WideMatrix(x.dim()) {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) (*this)(i, j) = WideScalar(x(i, j));
}

Matrix WideMatrix::to_matrix() const {
    Matrix x(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) x(i, j) = (*this)(i, j).to_complex();
    return x;
}

WideMatrix operator*(const WideMatrix& a, const WideMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("oracle: product of mismatched matrices");
    const std::size_t m = a.dim();
    WideMatrix c(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = 0; j < m; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

Vector to_vector(std::span<const WideScalar> v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_complex();
    return out;
}

WideScalar oracle_det(const WideMatrix& x) {
    const std::size_t m = x.dim();
    if (m > kCofactorCap)
        throw DimensionError("oracle_det: dimension " + std::to_string(m) + " exceeds cap " +
                             std::to_string(kCofactorCap));
    if (m == 0) return WideScalar(1.0);
    // minors[S]: determinant of the last |S| rows restricted to the columns in S
    std::vector<WideScalar> minors(std::size_t{1} << m);
    minors[0] = WideScalar(1.0);
    for (std::size_t s = 1; s < minors.size(); ++s) {
        const std::size_t row = m - static_cast<std::size_t>(std::popcount(s));
        WideScalar acc;
        int sign = 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (!(s & (std::size_t{1} << j))) continue;
            const WideScalar term = x(row, j) * minors[s & ~(std::size_t{1} << j)];
            acc = sign > 0 ? acc + term : acc - term;
            sign = -sign;
        }
        minors[s] = acc;
    }
    return minors.back();
}

WideScalar oracle_det(const Matrix& x) { return oracle_det(WideMatrix(x)); }

WideMatrix oracle_adjugate(const Matrix& x) {
    const std::size_t m = x.dim();
    if (m > kCofactorCap)
        throw DimensionError("oracle_adjugate: dimension " + std::to_string(m) + " exceeds cap " +
                             std::to_string(kCofactorCap));
    WideMatrix adj(m);
    if (m == 1) {
        adj(0, 0) = WideScalar(1.0);
        return adj;
    }
    const WideMatrix wx(x);
    for (std::size_t row = 0; row < m; ++row)
        for (std::size_t col = 0; col < m; ++col) {
            WideMatrix sub(m - 1);
            for (std::size_t i = 0, si = 0; i < m; ++i) {
                if (i == row) continue;
                for (std::size_t j = 0, sj = 0; j < m; ++j) {
                    if (j == col) continue;
                    sub(si, sj++) = wx(i, j);
                }
                ++si;
            }
            const WideScalar d = oracle_det(sub);
            adj(col, row) = (row + col) % 2 == 0 ? d : -d;
        }
    return adj;
}

WideVector null_vector(const WideMatrix& a, int max_sweeps, DD* sigma_min) {
    const std::size_t m = a.dim();
    // columns of a and v stored contiguously for the rotations
    std::vector<WideVector> u(m, WideVector(m)), v(m, WideVector(m));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) u[j][i] = a(i, j);
        v[j][j] = WideScalar(1.0);
    }
    const double tol = wide::kEpsilon * static_cast<double>(m);
    // columns at the rounding floor of a are noise; rotating them never settles
    const double floor = tol * static_cast<double>(frobenius(a));
    const double floor2 = floor * floor;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) {
                DD alpha, beta;
                WideScalar gamma;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += norm(u[p][i]);
                    beta += norm(u[q][i]);
                    gamma += conj(u[p][i]) * u[q][i];
                }
                const DD g = abs(gamma);
                if (g.hi == 0.0 || alpha.hi <= floor2 || beta.hi <= floor2 ||
                    static_cast<double>(g) <= tol * std::sqrt(alpha.hi * beta.hi))
                    continue;
                converged = false;
                const DD zeta = (beta - alpha) / (DD(2.0) * g);
                const DD root = sqrt(DD(1.0) + zeta * zeta);
                const DD t = zeta.hi >= 0.0 ? DD(1.0) / (zeta + root) : DD(-1.0) / (root - zeta);
                const DD c = DD(1.0) / sqrt(DD(1.0) + t * t);
                const DD s = c * t;
                const WideScalar phase = conj(gamma) / WideScalar(g);  // e^{-i arg gamma}
                auto rotate = [&](WideVector& x, WideVector& y) {
                    for (std::size_t i = 0; i < m; ++i) {
                        const WideScalar yi = phase * y[i];
                        const WideScalar xi = x[i];
                        x[i] = scale(xi, c) - scale(yi, s);
                        y[i] = scale(xi, s) + scale(yi, c);
                    }
                };
                rotate(u[p], u[q]);
                rotate(v[p], v[q]);
            }
    }
    if (!converged) throw NonConvergence("oracle null_vector: Jacobi SVD did not converge");
    std::size_t best = 0;
    DD best_norm = vec_norm(u[0]);
    for (std::size_t j = 1; j < m; ++j) {
        const DD nj = vec_norm(u[j]);
        if (nj < best_norm) {
            best_norm = nj;
            best = j;
        }
    }
    if (sigma_min) *sigma_min = best_norm;
    WideVector out = v[best];
    normalize_with_phase(out);
    return out;
}

WideEigen oracle_eigen(const Matrix& x, const EigenOptions& opts) {
    const std::size_t m = x.dim();
    if (m > kEigenCap)
        throw DimensionError("oracle_eigen: dimension " + std::to_string(m) + " exceeds cap " +
                             std::to_string(kEigenCap));
    WideEigen e;
    if (m == 0) return e;
    const WideMatrix a(x);
    WideMatrix h = a;
    householder_hessenberg(h);
    e.values = hessenberg_qr(std::move(h), opts.iterations_per_eigenvalue, e.qr_iterations);
    newton_polish(a, e.values, opts.newton_steps);

    const DD fro = frobenius(a);
    const DD norm_a = fro.hi == 0.0 ? DD(1.0) : fro;
    const WideMatrix ah = adjoint(a);
    for (const WideScalar& w : e.values) {
        WideMatrix shifted(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) shifted(i, j) = (i == j ? w : WideScalar()) - a(i, j);
        WideVector r = null_vector(shifted, opts.svd_sweeps);
        WideVector l = null_vector(adjoint(shifted), opts.svd_sweeps);
        e.right_residual.push_back(eigen_residual(a, w, r, norm_a));
        e.left_residual.push_back(eigen_residual(ah, conj(w), l, norm_a));
        e.right.push_back(std::move(r));
        e.left.push_back(std::move(l));
    }
    return e;
}

}  // namespace epsens::oracle
