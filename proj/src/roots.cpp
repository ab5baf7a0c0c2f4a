#include "epsens/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "epsens/charpoly.hpp"

namespace epsens {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// Coefficients of p(z + c), highest power first (repeated synthetic division).
std::vector<Complex> taylor_shift(std::span<const Complex> a, Complex c) {
    std::vector<Complex> b(a.begin(), a.end());
    const std::size_t n = b.size() - 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j <= n - i; ++j) b[j] += c * b[j - 1];
    return b;
}

double nearest_other(std::span<const Complex> z, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k) best = std::min(best, std::abs(z[k] - z[j]));
    return best;
}

}  // namespace

std::vector<Complex> aberth_roots(std::span<const Complex> coeffs, const RootOptions& opts) {
    if (coeffs.empty() || coeffs[0] == Complex{}) throw std::invalid_argument("aberth_roots: leading coefficient is zero");

    std::vector<Complex> a(coeffs.begin(), coeffs.end());
    for (auto& c : a) c /= coeffs[0];

    // exact zero roots
    std::vector<Complex> roots;
    while (a.size() > 1 && a.back() == Complex{}) {
        roots.push_back(Complex{});
        a.pop_back();
    }
    const std::size_t n = a.size() - 1;
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-a[1]);
        return roots;
    }

    const Complex center = -a[1] / static_cast<double>(n);
    const std::vector<Complex> shifted = taylor_shift(a, center);
    double radius = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        radius = std::max(radius, std::pow(std::abs(shifted[j]), 1.0 / static_cast<double>(j)));
    if (radius == 0.0) {
        roots.insert(roots.end(), n, center);
        return roots;
    }

    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = center + radius * std::polar(1.0, theta);
    }

    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    for (int it = 0; it < opts.max_iterations && remaining > 0; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            const PolyValue pv = eval_with_derivative(a, z[k]);
            if (std::abs(pv.p) <= 8.0 * kUnitRoundoff * pv.magnitude_bound) {
                done[k] = true;
                --remaining;
                continue;
            }
            Complex s{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            Complex corr;
            if (pv.dp == Complex{}) {
                corr = Complex(radius * 1e-3, radius * 1e-3);
            } else {
                const Complex w = pv.p / pv.dp;
                corr = w / (1.0 - w * s);
            }
            z[k] -= corr;
            if (std::abs(corr) <= 2.0 * kUnitRoundoff * std::abs(z[k])) {
                done[k] = true;
                --remaining;
            }
        }
    }
    if (remaining > 0) {
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            std::ostringstream msg;
            msg.precision(17);
            msg << "aberth_roots: root estimate " << z[k] << " did not converge in " << opts.max_iterations
                << " iterations";
            throw NonConvergence(msg.str());
        }
    }

    // Newton polish, guarded so a step cannot jump into a neighbour's basin.
    for (std::size_t k = 0; k < n; ++k) {
        for (int step = 0; step < opts.newton_polish_steps; ++step) {
            const PolyValue pv = eval_with_derivative(a, z[k]);
            if (pv.dp == Complex{} || pv.p == Complex{}) break;
            const Complex corr = pv.p / pv.dp;
            if (std::abs(corr) > 0.25 * nearest_other(z, k)) break;
            const Complex trial = z[k] - corr;
            if (std::abs(eval_p(a, trial)) >= std::abs(pv.p)) break;
            z[k] = trial;
        }
    }

    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<Complex> derivative_coeffs(std::span<const Complex> coeffs, std::size_t d) {
    std::vector<Complex> a(coeffs.begin(), coeffs.end());
    for (std::size_t step = 0; step < d && a.size() > 1; ++step) {
        const std::size_t n = a.size() - 1;
        std::vector<Complex> b(n);
        for (std::size_t j = 0; j < n; ++j) b[j] = a[j] * static_cast<double>(n - j);
        a = std::move(b);
    }
    if (a.size() == 1 && d > 0 && coeffs.size() <= d) a[0] = 0.0;
    return a;
}

Complex refine_multiple_root(std::span<const Complex> coeffs, Complex z0, std::size_t k, int max_steps) {
    if (k < 1 || k >= coeffs.size()) throw std::invalid_argument("refine_multiple_root: bad multiplicity");
    const std::vector<Complex> f = derivative_coeffs(coeffs, k - 1);
    Complex z = z0;
    PolyValue pv = eval_with_derivative(f, z);
    for (int step = 0; step < max_steps; ++step) {
        if (pv.p == Complex{} || pv.dp == Complex{}) break;
        const Complex corr = pv.p / pv.dp;
        const PolyValue trial = eval_with_derivative(f, z - corr);
        if (std::abs(trial.p) >= std::abs(pv.p)) break;
        z -= corr;
        pv = trial;
        if (std::abs(corr) <= 2.0 * kUnitRoundoff * std::abs(z)) break;
    }
    return z;
}

}  // namespace epsens
