#include "epsens/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace epsens {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// rows (k, k+1) <- G rows, columns [c0, c1)
void rotate_rows(Matrix& a, std::size_t k, const Givens& g, std::size_t c0, std::size_t c1) {
    for (std::size_t j = c0; j < c1; ++j) {
        const Complex x = a(k, j);
        const Complex y = a(k + 1, j);
        a(k, j) = g.c * x + g.s * y;
        a(k + 1, j) = -std::conj(g.s) * x + g.c * y;
    }
}

// columns (k, k+1) <- columns G^H, rows [r0, r1)
void rotate_cols(Matrix& a, std::size_t k, const Givens& g, std::size_t r0, std::size_t r1) {
    for (std::size_t i = r0; i < r1; ++i) {
        const Complex x = a(i, k);
        const Complex y = a(i, k + 1);
        a(i, k) = g.c * x + std::conj(g.s) * y;
        a(i, k + 1) = -g.s * x + g.c * y;
    }
}

Complex wilkinson_shift(const Matrix& t, std::size_t hi) {
    // eigenvalue of the trailing 2x2 block closest to its last diagonal entry
    const Complex a = t(hi - 1, hi - 1);
    const Complex b = t(hi - 1, hi);
    const Complex c = t(hi, hi - 1);
    const Complex d = t(hi, hi);
    const Complex tr = a + d;
    const Complex det = a * d - b * c;
    const Complex disc = std::sqrt(tr * tr / 4.0 - det);
    const Complex l1 = tr / 2.0 + disc;
    const Complex l2 = tr / 2.0 - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

SchurForm schur(const Matrix& h, const SchurOptions& opts) {
    const std::size_t m = h.dim();
    HessenbergForm hf = hessenberg(h);
    SchurForm s{std::move(hf.q), std::move(hf.hess), std::vector<std::size_t>(m)};
    std::iota(s.ordering.begin(), s.ordering.end(), 0);
    if (m < 2) return s;

    Matrix& t = s.t;
    std::vector<Givens> rots(m);
    std::size_t hi = m - 1;
    int iter = 0;
    int since_deflation = 0;
    const int cap = opts.iterations_per_eigenvalue * static_cast<int>(m);

    while (hi > 0) {
        // find the active window [lo, hi]
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(t(lo, lo - 1));
            const double diag = std::abs(t(lo, lo)) + std::abs(t(lo - 1, lo - 1));
            if (sub <= kUnitRoundoff * diag || sub < std::numeric_limits<double>::min()) {
                t(lo, lo - 1) = Complex{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++iter > cap) {
            throw NonConvergence("schur: QR iteration did not converge, " + std::to_string(hi + 1) +
                                 " eigenvalues undeflated");
        }
        ++since_deflation;

        Complex sigma = wilkinson_shift(t, hi);
        if (since_deflation % 11 == 0) {
            // exceptional shift to break cycles
            sigma = t(hi, hi) + 0.75 * std::abs(t(hi, hi - 1)) * Complex(1.0, 0.5);
        }

        for (std::size_t k = lo; k <= hi; ++k) t(k, k) -= sigma;
        for (std::size_t k = lo; k < hi; ++k) {
            rots[k] = Givens::zeroing(t(k, k), t(k + 1, k));
            rotate_rows(t, k, rots[k], k, m);
            t(k + 1, k) = Complex{};
        }
        for (std::size_t k = lo; k < hi; ++k) {
            rotate_cols(t, k, rots[k], 0, std::min(k + 2, hi) + 1);
            rotate_cols(s.q, k, rots[k], 0, m);
        }
        for (std::size_t k = lo; k <= hi; ++k) t(k, k) += sigma;
    }

    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) t(i, j) = Complex{};
    return s;
}

void swap_adjacent(SchurForm& s, std::size_t k) {
    Matrix& t = s.t;
    const std::size_t m = t.dim();
    if (k + 1 >= m) throw DimensionError("swap_adjacent: index out of range");
    const Complex t11 = t(k, k);
    const Complex t22 = t(k + 1, k + 1);
    const Givens g = Givens::zeroing(t(k, k + 1), t22 - t11);
    rotate_rows(t, k, g, k + 2, m);
    rotate_cols(t, k, g, 0, k);
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
    rotate_cols(s.q, k, g, 0, m);
    std::swap(s.ordering[k], s.ordering[k + 1]);
}

void move_to_front(SchurForm& s, const std::function<bool(Complex)>& selected) {
    const std::size_t m = s.t.dim();
    std::size_t slot = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!selected(s.t(j, j))) continue;
        for (std::size_t k = j; k > slot; --k) swap_adjacent(s, k - 1);
        ++slot;
    }
}

SchurForm schur_with_cluster_first(const Matrix& h, Complex center, std::size_t n) {
    SchurForm s = schur(h);
    const std::size_t m = h.dim();
    if (n > m) throw DimensionError("schur_with_cluster_first: cluster larger than matrix");
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(s.t(a, a) - center) < std::abs(s.t(b, b) - center);
    });
    std::vector<bool> chosen(m, false);
    for (std::size_t i = 0; i < n; ++i) chosen[idx[i]] = true;

    // select by position, since equal diagonal values can sit on both sides
    std::size_t slot = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!chosen[j]) continue;
        for (std::size_t k = j; k > slot; --k) swap_adjacent(s, k - 1);
        ++slot;
    }
    return s;
}

}  // namespace epsens
