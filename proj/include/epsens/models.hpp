#pragma once

// Generators for near-EP matrix families H(eps) = H_EP + eps H'.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "epsens/linalg.hpp"

namespace epsens {

struct NearEPModel {
    Matrix h_at_ep;
    Matrix h_prime;  // unit two-norm
    Complex omega_ep;
    std::size_t order = 0;
    bool truncated = false;  // no spectator states

    /// h_at_ep + eps * h_prime
    Matrix at(double eps) const;
};

/// n x n Jordan block at omega_ep (ones on the superdiagonal), perturbed by
/// the lower-left matrix unit.
NearEPModel jordan_block(std::size_t n, Complex omega_ep = {});

/// [[0, a, b], [0, 0, c], [0, 0, d]]: order-2 EP at 0 plus a spectator at d.
/// Perturbed by the (1, 0) matrix unit. Requires a != 0 and d != 0.
NearEPModel example_3x3(Complex a, Complex b, Complex c, Complex d);

struct FourStateParams {
    Complex a1{1.0}, a2{2.0}, a3{3.0}, b1{4.0}, b2{5.0}, c1{6.0}, omega{7.0};
};

/// Reference data attached to the four-state model: two order-2 EPs, at 0
/// and at Omega, with their eigenvector pairs and adjugate elements.
struct FourStateModel {
    Matrix h;
    FourStateParams p;
    // Eigenvector pairs as written (not normalized). Left vectors are stored
    // as L, i.e. the bra row is L^H.
    Vector r_at_zero, l_at_zero;
    Vector r_at_omega, l_at_omega;
    /// first row of adj(-H)
    Vector adj_zero_row0;
    /// last column of adj(Omega I - H)
    Vector adj_omega_col3;
    /// |A_{R L}| at each EP in closed form
    double denominator_zero = 0.0;
    double denominator_omega = 0.0;
};

/// [[0, a1, a2, a3], [0, 0, b1, b2], [0, 0, Omega, c1], [0, 0, 0, Omega]].
/// Requires a1, c1, Omega != 0.
FourStateModel example_4x4_data(const FourStateParams& p = {});

/// The four-state matrix as a near-EP model for the EP at 0 (order 2, not
/// truncated), perturbed by the (3, 0) matrix unit.
NearEPModel example_4x4(const FourStateParams& p = {});

/// Seeded upper-triangular model: an order-n Jordan-type block at a random
/// omega_ep (superdiagonal magnitudes in [0.5, 1.5], random phases), random
/// couplings to m - n spectators placed on a ring of radius about
/// spread * ||N|| around omega_ep, and a dense random unit-norm H'.
NearEPModel random_near_ep(std::size_t m, std::size_t n, std::uint64_t seed, double spread = 1.0);

/// Deterministic normal and uniform draws on top of std::mt19937_64.
/// Written out by hand so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    double normal();                     // N(0, 1)
    Complex complex_normal();            // re, im ~ N(0, 1/2)
    std::uint64_t next();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace epsens
