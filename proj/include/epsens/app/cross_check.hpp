#pragma once

// Comparison of a main-path eigensystem against the double-double oracle.

#include <cstddef>
#include <vector>

#include "epsens/spectral.hpp"

namespace epsens::app {

struct CrossCheck {
    /// oracle index matched to each main-path pair (nearest unused value)
    std::vector<std::size_t> match;
    double max_value_error = 0.0;      // |w_main - w_oracle|
    double max_rigidity_error = 0.0;   // ||r_main| - |r_oracle||
    double max_vector_error = 0.0;     // 1 - |<v_main|v_oracle>| over right and left vectors
    double max_oracle_residual = 0.0;
};

/// Throws DimensionError above the oracle's size cap.
CrossCheck oracle_cross_check(const Eigensystem& sys);

}  // namespace epsens::app
