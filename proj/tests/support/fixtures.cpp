#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epsens::testing {

__extension__ typedef __int128 Wide;

Matrix random_matrix(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(m);
    for (auto& z : x.data()) z = rng.complex_normal();
    return x;
}

Matrix random_integer_matrix(std::size_t m, std::uint64_t seed, int range) {
    Rng rng(seed);
    Matrix x(m);
    for (auto& z : x.data())
        z = static_cast<double>(static_cast<int>(rng.next() % static_cast<std::uint64_t>(2 * range + 1)) - range);
    return x;
}

Matrix random_diagonalizable(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Matrix v(m), d(m);
    for (auto& z : v.data()) z = rng.complex_normal();
    for (std::size_t k = 0; k < m; ++k) v(k, k) += 2.0;
    // eigenvalues on a jittered grid, at least ~0.5 apart
    for (std::size_t k = 0; k < m; ++k)
        d(k, k) = Complex(static_cast<double>(k) - 0.5 * static_cast<double>(m), rng.uniform(-0.2, 0.2)) +
                  0.2 * rng.complex_normal();
    const LuDecomposition lu(v);
    return v * d * lu.inverse();
}

Matrix random_nilpotent(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix t(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) t(i, j) = rng.complex_normal();
    for (std::size_t k = 0; k + 1 < n; ++k)
        t(k, k + 1) = std::polar(rng.uniform(0.5, 2.0), 6.283185307179586 * rng.uniform());
    return t;
}

long long bareiss_det(const Matrix& x) {
    const std::size_t m = x.dim();
    std::vector<std::vector<Wide>> a(m, std::vector<Wide>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double v = x(i, j).real();
            if (x(i, j).imag() != 0.0 || v != std::round(v)) throw std::invalid_argument("bareiss_det: integers only");
            a[i][j] = static_cast<Wide>(v);
        }
    Wide prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < m && a[p][k] == 0) ++p;
            if (p == m) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < m; ++i)
            for (std::size_t j = k + 1; j < m; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * static_cast<long long>(m == 0 ? 1 : a[m - 1][m - 1]);
}

double matched_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> ua(a.size(), false), ub(b.size(), false);
    double worst = 0.0;
    for (std::size_t round = 0; round < a.size(); ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (ua[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                if (!ub[j] && std::abs(a[i] - b[j]) < best) best = std::abs(a[i] - b[j]), bi = i, bj = j;
        }
        ua[bi] = ub[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::vector<CorpusEntry> shared_corpus() {
    std::vector<CorpusEntry> c;
    c.push_back({"identity4", Matrix::identity(4)});
    c.push_back({"diag123", Matrix{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}}});
    c.push_back({"hermitian3", Matrix{{2.0, {1.0, -1.0}, 0.5}, {{1.0, 1.0}, -1.0, {0.0, 2.0}}, {0.5, {0.0, -2.0}, 0.0}}});
    for (double eps : {1e-2, 1e-6}) c.push_back({"jordan2 eps " + std::to_string(eps), Matrix{{0.0, 1.0}, {eps, 0.0}}});
    c.push_back({"example3x3 eps 1e-6", example_3x3(1.0, 2.0, 3.0, 4.0).at(1e-6)});
    c.push_back({"example4x4 eps 1e-6", example_4x4().at(1e-6)});
    for (std::uint64_t s = 1; s <= 6; ++s) c.push_back({"random " + std::to_string(s), random_matrix(2 + s, 100 + s)});
    for (std::size_t n : {2, 3}) c.push_back({"near ep order " + std::to_string(n), random_near_ep(6, n, 11 + n).at(1e-6)});
    return c;
}

}  // namespace epsens::testing
