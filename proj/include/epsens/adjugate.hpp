#pragma once

// Minors, adjugate matrices and the normalized bilinear adjugate element
//
//   A_{vw}(X) = sum_{kl} (-1)^{k+l} conj(v_k) p_{lk}(X) w_l = v^H adj(X) w
//
// with v and w scaled to unit length.

#include <cstddef>

#include "epsens/linalg.hpp"

namespace epsens {

/// Determinant of x with row `row` and column `col` removed (zero-based).
/// Throws DimensionError for 1 x 1 input.
Complex minor(const Matrix& x, std::size_t row, std::size_t col);

enum class AdjugateMethod { cofactor, faddeev, both };

struct AdjugateResult {
    Matrix adj;
    AdjugateMethod method = AdjugateMethod::cofactor;
    /// max |cofactor - faddeev| / max |cofactor|; zero unless method == both.
    double cross_check_residual = 0.0;
};

/// adj(x)_{kl} = (-1)^{k+l} p_{lk}(x), so that x adj(x) = adj(x) x = det(x) I.
///
/// `cofactor` takes one LU per entry (O(m^5)); it stays accurate when x is
/// singular, which is the regime the rest of the library cares about.
/// `faddeev` reads adj(x) off the adjugate polynomial of -x at w = 0.
/// A 1 x 1 input yields [1].
AdjugateResult adjugate(const Matrix& x, AdjugateMethod method = AdjugateMethod::cofactor);

/// Shorthand for adjugate(x).adj with the cofactor method.
Matrix cofactor_adjugate(const Matrix& x);

/// A_{vw}(x). Throws NumericalError when v or w is the zero vector.
Complex adjugate_element(std::span<const Complex> v, std::span<const Complex> w, const Matrix& x);

/// Same quantity from a precomputed adjugate.
Complex adjugate_element_from(std::span<const Complex> v, std::span<const Complex> w, const Matrix& adj);

}  // namespace epsens
