#include "epsens/adjugate.hpp"

#include <algorithm>
#include <cmath>

#include "epsens/charpoly.hpp"

namespace epsens {

Complex minor(const Matrix& x, std::size_t row, std::size_t col) {
    if (x.dim() < 2) throw DimensionError("minor: matrix must be at least 2 x 2");
    if (row >= x.dim() || col >= x.dim()) throw DimensionError("minor: index out of range");
    return determinant(x.without(row, col));
}

Matrix cofactor_adjugate(const Matrix& x) {
    const std::size_t m = x.dim();
    if (m == 0) throw DimensionError("adjugate: empty matrix");
    if (m == 1) return Matrix::identity(1);
    Matrix adj(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            const double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
            adj(k, l) = sign * minor(x, l, k);
        }
    }
    return adj;
}

namespace {

Matrix faddeev_adjugate(const Matrix& x) {
    // adj(0 I - (-x)) = B_0 of the adjugate polynomial of -x
    Matrix neg = x;
    neg *= -1.0;
    const CharPoly cp = faddeev_leverrier(neg);
    return cp.adj_poly.empty() ? Matrix::identity(1) : cp.adj_poly.front();
}

}  // namespace

AdjugateResult adjugate(const Matrix& x, AdjugateMethod method) {
    if (x.dim() == 0) throw DimensionError("adjugate: empty matrix");
    AdjugateResult out;
    out.method = method;
    switch (method) {
    case AdjugateMethod::cofactor:
        out.adj = cofactor_adjugate(x);
        break;
    case AdjugateMethod::faddeev:
        out.adj = faddeev_adjugate(x);
        break;
    case AdjugateMethod::both: {
        out.adj = cofactor_adjugate(x);
        const Matrix alt = faddeev_adjugate(x);
        const double scale = max_abs(out.adj);
        const double diff = max_abs_diff(out.adj, alt);
        out.cross_check_residual = scale > 0.0 ? diff / scale : diff;
        break;
    }
    }
    return out;
}

Complex adjugate_element_from(std::span<const Complex> v, std::span<const Complex> w, const Matrix& adj) {
    if (v.size() != adj.dim() || w.size() != adj.dim()) throw DimensionError("adjugate_element: dimension mismatch");
    const double nv = norm2(v);
    const double nw = norm2(w);
    if (nv == 0.0 || nw == 0.0) throw NumericalError("adjugate_element: zero vector");
    const Vector aw = matvec(adj, w);
    return dot(v, aw) / (nv * nw);
}

Complex adjugate_element(std::span<const Complex> v, std::span<const Complex> w, const Matrix& x) {
    if (norm2(v) == 0.0 || norm2(w) == 0.0) throw NumericalError("adjugate_element: zero vector");
    return adjugate_element_from(v, w, cofactor_adjugate(x));
}

}  // namespace epsens
