#pragma once

#include <span>
#include <vector>

#include "epsens/linalg.hpp"

namespace epsens {

struct RootOptions {
    int max_iterations = 500;
    /// Newton steps on (p, p') applied to each root after convergence.
    int newton_polish_steps = 3;
};

/// All roots of the monic polynomial with coefficients a_0..a_n (highest
/// power first) by Aberth-Ehrlich simultaneous iteration, followed by Newton
/// polishing. Multiple roots are listed with multiplicity. Throws
/// NonConvergence naming the first unconverged estimate.
std::vector<Complex> aberth_roots(std::span<const Complex> coeffs, const RootOptions& opts = {});

/// Coefficients of the d-th derivative, highest power first.
std::vector<Complex> derivative_coeffs(std::span<const Complex> coeffs, std::size_t d);

/// Location of a k-fold root near z0. Individual roots of a k-fold root are
/// only determined to about u^(1/k), but the root is a simple zero of
/// p^(k-1), so Newton on p^(k-1) pins it down to working precision.
Complex refine_multiple_root(std::span<const Complex> coeffs, Complex z0, std::size_t k, int max_steps = 8);

}  // namespace epsens
