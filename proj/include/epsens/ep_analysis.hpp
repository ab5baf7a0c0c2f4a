#pragma once

// Analysis of quasi-degenerate eigenvalue clusters near an exceptional point
// (EP): clustering, EP eigenvector pair, the characteristic number xi,
// asymptotic rigidity predictions, equipartition and first-order secular
// shifts.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "epsens/linalg.hpp"
#include "epsens/schur.hpp"
#include "epsens/spectral.hpp"

namespace epsens {

/// The candidate EP eigenvalue has a left/right pair that is not
/// self-orthogonal, so it is not defective.
class NotDefective : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Quantities that must agree identically did not.
class IdentityFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The first-order secular term vanishes: the perturbation does not lift
/// the EP at first order.
class VanishingTrace : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct ValueCluster {
    std::vector<std::size_t> indices;  // ascending
    Complex center;                    // arithmetic mean
    std::size_t size() const noexcept { return indices.size(); }
};

/// Single-linkage clustering on |w_i - w_j| <= tol. Returns every cluster,
/// singletons included, ordered by smallest index.
std::vector<ValueCluster> cluster_eigenvalues(std::span<const Complex> values, double tol);

/// max(1e-6, 10 * (eps / scale)^(1/n_guess)) * scale.
double default_cluster_tolerance(double eps, std::size_t n_guess, double scale);

/// Clusters of size >= 2, trying n_guess = 2, 3, ... with the tolerance
/// tolerance_for_order(n_guess) and accepting the first guess whose largest
/// cluster has exactly n_guess members. Falls back to n_guess = 2.
struct ClusterSearch {
    std::vector<ValueCluster> clusters;  // size >= 2 only
    double tolerance = 0.0;
};
ClusterSearch find_clusters(std::span<const Complex> values,
                            const std::function<double(std::size_t)>& tolerance_for_order);

struct EPVectors {
    Vector right;
    Vector left;
    /// |<L_EP|R_EP>|
    double self_overlap = 0.0;
};

/// Unit right/left eigenvectors of h_ep at w_ep from the adjugate. Throws
/// NotDefective if |<L|R>| exceeds `tol`; pass std::nullopt to skip the test.
EPVectors ep_vectors(const Matrix& h_ep, Complex w_ep, std::optional<double> tol = 1e-8);

/// xi = ||N^(n-1)||_2 where N is the strictly upper part of the leading n x n
/// block of the triangular t. Also forms |prod N_{k,k+1}| and the minor of N
/// without its last row and first column; throws IdentityFailure unless all
/// three agree to `tol` relative.
double xi(const Matrix& t, std::size_t n, double tol = 1e-10);

struct XiTriple {
    double power_norm = 0.0;        // ||N^(n-1)||_2
    double superdiagonal = 0.0;     // |prod N_{k,k+1}|
    double corner_minor = 0.0;      // |p_{n1}(N)|
    double max_relative_spread() const;
};
XiTriple xi_triple(const Matrix& t, std::size_t n);

/// n |w_i - w_ep|^(n-1) / xi.
double asymptotic_rigidity_truncated(Complex w_i, Complex w_ep, std::size_t n, double xi);

/// Orthonormal basis with r_ep first and l_ep last, completed by Gram-Schmidt
/// over canonical vectors. With no order given, the candidates are taken
/// greedily (largest remaining component first); otherwise in the given
/// order. Columns of the result are the basis vectors.
Matrix ep_basis(std::span<const Complex> r_ep, std::span<const Complex> l_ep,
                std::optional<std::vector<std::size_t>> completion_order = std::nullopt);

/// |A_{R_EP L_EP}(w_ep I - h_ep)| as the minor of the transformed matrix with
/// the l_ep row and r_ep column struck out.
double ep_minor_denominator(const Matrix& h_ep, Complex w_ep, std::span<const Complex> r_ep,
                            std::span<const Complex> l_ep,
                            std::optional<std::vector<std::size_t>> completion_order = std::nullopt);

/// |p'(w_i)| / |A_{R_EP L_EP}(w_ep I - h_ep)|. Without p_prime, p' is the
/// derivative of the characteristic polynomial of h_ep at w_i.
double asymptotic_rigidity_general(const Matrix& h_ep, Complex w_ep, std::span<const Complex> r_ep,
                                   std::span<const Complex> l_ep, Complex w_i,
                                   std::optional<Complex> p_prime = std::nullopt);

struct EquipartitionReport {
    /// R'_k conj(L'_k) for the n cluster directions of the Schur basis
    std::vector<Complex> products;
    /// <L|R> / n
    Complex target;
    double max_deviation = 0.0;
};

/// Per-direction overlap products in the Schur basis of h_at_ep with the n
/// eigenvalues nearest w_ep leading.
EquipartitionReport equipartition_check(const SchurForm& basis, std::size_t n, std::span<const Complex> right,
                                        std::span<const Complex> left);
EquipartitionReport equipartition_check(const Matrix& h_at_ep, Complex w_ep, std::size_t n,
                                        std::span<const Complex> right, std::span<const Complex> left);

/// <L_i|R_i> / (n <L_EP|R_i>) with unit vectors. Throws NumericalError when
/// <L_EP|R_i> vanishes (the matrix sits exactly at the EP).
Complex overlap_relation_check(std::span<const Complex> l_ep, std::span<const Complex> right,
                               std::span<const Complex> left, std::size_t n);

/// w_ep + delta * zeta over the n-th roots of unity zeta, with
///   delta^n = eps tr[h_prime adj(w_ep I - h_ep)] / prod_k (w_ep - w_k).
/// Throws VanishingTrace when the trace is negligible against
/// ||h_prime|| ||adj||.
std::vector<Complex> secular_shift(const Matrix& h_ep, const Matrix& h_prime, double eps, Complex w_ep,
                                   std::size_t n, std::span<const Complex> spectators);

struct EPCluster {
    std::vector<std::size_t> indices;  // into the eigensystem pairs
    std::size_t order = 0;
    Complex center;                    // w_ep estimate
    Vector r_ep;
    Vector l_ep;
    double self_overlap = 0.0;
    double xi = 0.0;
    double minor_denominator = 0.0;
    std::vector<Complex> spectators;
    /// true when an exact EP matrix was supplied
    bool exact_ep_matrix = false;
};

struct StateReport {
    std::size_t index = 0;
    Complex value;
    double rigidity = 0.0;                    // |L^H R|
    std::optional<double> rigidity_exact;     // |p'/A|
    double truncated = 0.0;                   // truncated asymptote
    double general = 0.0;                     // general asymptote
    std::optional<double> ratio_truncated;    // rigidity / truncated
    std::optional<double> ratio_general;      // rigidity / general
    /// prod_{j != i}(w_i - w_j) / [n (w_i - w_ep)^(n-1) prod_k (w_ep - w_k)]
    std::optional<Complex> product_rule;
    std::optional<EquipartitionReport> equipartition;
    /// only for clusters without spectators
    std::optional<Complex> overlap_relation;
};

struct ClusterReport {
    EPCluster cluster;
    std::vector<StateReport> states;
    /// first-order predicted eigenvalues, when the perturbation is known
    std::optional<std::vector<Complex>> secular;
    /// max over states of the distance to the nearest secular prediction
    std::optional<double> secular_error;
};

struct EPReport {
    Eigensystem system;
    std::vector<ClusterReport> clusters;
    double cluster_tolerance = 0.0;
    bool auto_mode = true;
};

struct ReportOptions {
    /// overrides the default cluster tolerance
    std::optional<double> cluster_tolerance;
    double self_orthogonality_tol = 1e-8;
    EigensystemOptions eigensystem;
};

/// Analysis of one cluster of an already computed eigensystem. With h_at_ep,
/// w_ep is the mean of the n eigenvalues of h_at_ep nearest the cluster
/// center and h - h_at_ep is the perturbation. Without it (auto mode) the
/// perturbed matrix stands in for the EP matrix, the cluster center for w_ep,
/// self-orthogonality is recorded rather than enforced and equipartition is
/// not evaluated.
ClusterReport analyze_cluster(const Eigensystem& sys, const std::vector<std::size_t>& indices,
                              const std::optional<Matrix>& h_at_ep, const ReportOptions& opts = {});

/// Eigensystem of h plus a ClusterReport for every cluster of size >= 2.
EPReport ep_report(const Matrix& h, const std::optional<Matrix>& h_at_ep, const ReportOptions& opts = {});

}  // namespace epsens
