#include "epsens/charpoly.hpp"

#include <cmath>
#include <stdexcept>

namespace epsens {

Matrix CharPoly::adjugate_at(Complex w) const {
    if (adj_poly.empty()) return Matrix::identity(1);
    Matrix acc = adj_poly.back();
    for (std::size_t k = adj_poly.size() - 1; k-- > 0;) {
        acc *= w;
        acc += adj_poly[k];
    }
    return acc;
}

CharPoly faddeev_leverrier(const Matrix& h) {
    const std::size_t n = h.dim();
    CharPoly cp;
    cp.coeffs.assign(n + 1, Complex{});
    cp.coeffs[0] = 1.0;
    if (n == 0) return cp;

    cp.adj_poly.assign(n, Matrix(n));
    cp.adj_poly[n - 1] = Matrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const Matrix hb = matmul(h, cp.adj_poly[n - k]);
        const Complex ak = -trace(hb) / static_cast<double>(k);
        cp.coeffs[k] = ak;
        if (k < n) {
            Matrix next = hb;
            for (std::size_t i = 0; i < n; ++i) next(i, i) += ak;
            cp.adj_poly[n - k - 1] = std::move(next);
        }
    }
    return cp;
}

std::vector<Complex> power_traces(const Matrix& h) {
    const std::size_t n = h.dim();
    std::vector<Complex> t;
    t.reserve(n);
    Matrix pw = h;
    for (std::size_t k = 1; k <= n; ++k) {
        t.push_back(trace(pw));
        if (k < n) pw = matmul(pw, h);
    }
    return t;
}

std::vector<Complex> newton_coeffs_from_traces(std::span<const Complex> traces) {
    const std::size_t n = traces.size();
    std::vector<Complex> a(n + 1);
    a[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        // k a_k = -sum_{j=1}^{k} a_{k-j} t_j
        Complex s{};
        for (std::size_t j = 1; j <= k; ++j) s += a[k - j] * traces[j - 1];
        a[k] = -s / static_cast<double>(k);
    }
    return a;
}

Complex eval_p(std::span<const Complex> coeffs, Complex w) {
    if (coeffs.empty()) return {};
    Complex acc = coeffs[0];
    for (std::size_t j = 1; j < coeffs.size(); ++j) acc = acc * w + coeffs[j];
    return acc;
}

Complex eval_p_prime(std::span<const Complex> coeffs, Complex w) { return eval_with_derivative(coeffs, w).dp; }

PolyValue eval_with_derivative(std::span<const Complex> coeffs, Complex w) {
    PolyValue out;
    if (coeffs.empty()) return out;
    const double aw = std::abs(w);
    Complex p = coeffs[0];
    Complex dp{};
    double bound = std::abs(coeffs[0]);
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        dp = dp * w + p;
        p = p * w + coeffs[j];
        bound = bound * aw + std::abs(coeffs[j]);
    }
    out.p = p;
    out.dp = dp;
    out.magnitude_bound = bound;
    return out;
}

Complex asymptotic_p_prime(Complex w_i, Complex w_ep, int n, std::span<const Complex> spectators) {
    if (n < 2) throw std::invalid_argument("asymptotic_p_prime: EP order must be >= 2");
    Complex v = static_cast<double>(n) * ipow(w_i - w_ep, n - 1);
    for (const auto& wk : spectators) v *= (w_ep - wk);
    return v;
}

}  // namespace epsens
