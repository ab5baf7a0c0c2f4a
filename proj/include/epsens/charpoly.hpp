#pragma once

// Characteristic polynomial p(w) = det(w I - H) and the adjugate polynomial
// adj(w I - H) = sum_k w^k B_k.

#include <span>
#include <vector>

#include "epsens/linalg.hpp"

namespace epsens {

/// Monic characteristic polynomial of an n x n matrix.
///
/// coeffs holds a_0..a_n with a_0 = 1 and p(w) = sum_k w^k a_{n-k}, i.e. the
/// highest power first. adj_poly holds B_0..B_{n-1}.
struct CharPoly {
    std::vector<Complex> coeffs;
    std::vector<Matrix> adj_poly;

    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    /// adj(w I - H) by Horner evaluation over the B_k.
    Matrix adjugate_at(Complex w) const;
};

/// Faddeev-LeVerrier recursion. Only divides by the integers 1..n, so it is
/// exact in exact arithmetic; in double precision it loses digits as the
/// dimension grows (noticeably beyond n ~ 20).
CharPoly faddeev_leverrier(const Matrix& h);

/// tr H^k for k = 1..n.
std::vector<Complex> power_traces(const Matrix& h);

/// Newton's identities: from t_k = tr H^k (k = 1..n) to the monic
/// coefficients a_0..a_n.
std::vector<Complex> newton_coeffs_from_traces(std::span<const Complex> traces);

/// Horner evaluation of p(w).
Complex eval_p(std::span<const Complex> coeffs, Complex w);
inline Complex eval_p(const CharPoly& cp, Complex w) { return eval_p(cp.coeffs, w); }

/// Horner evaluation of p'(w).
Complex eval_p_prime(std::span<const Complex> coeffs, Complex w);
inline Complex eval_p_prime(const CharPoly& cp, Complex w) { return eval_p_prime(cp.coeffs, w); }

/// Simultaneous Horner evaluation of p and p'. Also returns the running
/// bound sum_k |a_{n-k}| |w|^k used for backward-error tests.
struct PolyValue {
    Complex p;
    Complex dp;
    double magnitude_bound = 0.0;
};
PolyValue eval_with_derivative(std::span<const Complex> coeffs, Complex w);

/// Leading-order p'(w_i) near an order-n EP at w_ep:
///   n (w_i - w_ep)^(n-1) * prod_k (w_ep - w_k)
/// over the spectator eigenvalues w_k (with multiplicity).
Complex asymptotic_p_prime(Complex w_i, Complex w_ep, int n, std::span<const Complex> spectators);

}  // namespace epsens
