#include "epsens/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epsens {

Matrix NearEPModel::at(double eps) const {
    Matrix h = h_at_ep;
    Matrix d = h_prime;
    d *= eps;
    h += d;
    return h;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

NearEPModel jordan_block(std::size_t n, Complex omega_ep) {
    if (n < 2) throw std::invalid_argument("jordan_block: order must be at least 2");
    NearEPModel model;
    model.h_at_ep = Matrix(n);
    for (std::size_t k = 0; k < n; ++k) model.h_at_ep(k, k) = omega_ep;
    for (std::size_t k = 0; k + 1 < n; ++k) model.h_at_ep(k, k + 1) = 1.0;
    model.h_prime = Matrix::unit(n, n - 1, 0);
    model.omega_ep = omega_ep;
    model.order = n;
    model.truncated = true;
    return model;
}

NearEPModel example_3x3(Complex a, Complex b, Complex c, Complex d) {
    if (a == Complex{}) throw std::invalid_argument("example_3x3: a = 0 leaves no order-2 EP");
    if (d == Complex{}) throw std::invalid_argument("example_3x3: d = 0 makes the spectator degenerate with the EP");
    NearEPModel model;
    model.h_at_ep = Matrix{{0.0, a, b}, {0.0, 0.0, c}, {0.0, 0.0, d}};
    model.h_prime = Matrix::unit(3, 1, 0);
    model.omega_ep = 0.0;
    model.order = 2;
    model.truncated = false;
    return model;
}

FourStateModel example_4x4_data(const FourStateParams& p) {
    if (p.a1 == Complex{} || p.c1 == Complex{} || p.omega == Complex{})
        throw std::invalid_argument("example_4x4: a1, c1 and Omega must be nonzero");
    const Complex om = p.omega;
    FourStateModel f;
    f.p = p;
    f.h = Matrix{{0.0, p.a1, p.a2, p.a3}, {0.0, 0.0, p.b1, p.b2}, {0.0, 0.0, om, p.c1}, {0.0, 0.0, 0.0, om}};

    const Complex t0 = (p.b1 * p.c1 - p.b2 * om) / om;
    const Complex t1 = (p.a1 * p.b1 + p.a2 * om) / om;
    f.r_at_zero = {1.0, 0.0, 0.0, 0.0};
    // bra (0, Omega, -b1, t0)
    f.l_at_zero = {0.0, std::conj(om), -std::conj(p.b1), std::conj(t0)};
    f.r_at_omega = {t1, p.b1, om, 0.0};
    f.l_at_omega = {0.0, 0.0, 0.0, 1.0};

    f.adj_zero_row0 = {0.0, p.a1 * om * om, -p.a1 * p.b1 * om, p.a1 * (p.b1 * p.c1 - p.b2 * om)};
    f.adj_omega_col3 = {(p.a1 * p.b1 + p.a2 * om) * p.c1, om * p.b1 * p.c1, om * om * p.c1, 0.0};

    const double ao = std::abs(om);
    f.denominator_zero =
        std::abs(p.a1 * om) * std::sqrt(ao * ao + std::norm(p.b1) + std::norm(p.b1 * p.c1 - p.b2 * om) / (ao * ao));
    f.denominator_omega =
        std::abs(p.c1 * om) * std::sqrt(ao * ao + std::norm(p.b1) + std::norm(p.a1 * p.b1 + p.a2 * om) / (ao * ao));
    return f;
}

NearEPModel example_4x4(const FourStateParams& p) {
    NearEPModel model;
    model.h_at_ep = example_4x4_data(p).h;
    model.h_prime = Matrix::unit(4, 3, 0);
    model.omega_ep = 0.0;
    model.order = 2;
    model.truncated = false;
    return model;
}

NearEPModel random_near_ep(std::size_t m, std::size_t n, std::uint64_t seed, double spread) {
    if (n < 2 || n > m) throw std::invalid_argument("random_near_ep: need 2 <= n <= m");
    if (!(spread > 0.0)) throw std::invalid_argument("random_near_ep: spread must be positive");
    Rng rng(seed);
    NearEPModel model;
    model.order = n;
    model.truncated = n == m;
    model.omega_ep = rng.complex_normal();

    Matrix h(m);
    for (std::size_t k = 0; k < n; ++k) h(k, k) = model.omega_ep;
    for (std::size_t k = 0; k + 1 < n; ++k)
        h(k, k + 1) = std::polar(rng.uniform(0.5, 1.5), 2.0 * std::numbers::pi * rng.uniform());

    Matrix nil = h.leading_block(n);
    for (std::size_t k = 0; k < n; ++k) nil(k, k) = 0.0;
    const double radius = spread * two_norm(nil);

    const std::size_t spectators = m - n;
    const double phase0 = 2.0 * std::numbers::pi * rng.uniform();
    for (std::size_t k = 0; k < spectators; ++k) {
        const double jitter = 0.25 * (rng.uniform() - 0.5);
        const double theta = phase0 + 2.0 * std::numbers::pi * (static_cast<double>(k) + jitter) /
                                          static_cast<double>(spectators);
        h(n + k, n + k) = model.omega_ep + radius * (1.0 + 0.5 * rng.uniform()) * std::polar(1.0, theta);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = std::max(i + 1, n); j < m; ++j) h(i, j) = 0.5 * rng.complex_normal();
    model.h_at_ep = std::move(h);

    Matrix hp(m);
    for (auto& x : hp.data()) x = rng.complex_normal();
    hp *= 1.0 / two_norm(hp);
    model.h_prime = std::move(hp);
    return model;
}

}  // namespace epsens
