#include "epsens/ep_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "epsens/adjugate.hpp"
#include "epsens/charpoly.hpp"
#include "epsens/roots.hpp"

namespace epsens {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

Complex mean_of(std::span<const Complex> values, const std::vector<std::size_t>& idx) {
    Complex s{};
    for (std::size_t i : idx) s += values[i];
    return s / static_cast<double>(idx.size());
}

// Gram-Schmidt of v against the basis, applied twice.
Vector orthogonalize(const std::vector<Vector>& basis, Vector v) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v = axpy(-dot(b, v), b, v);
    return v;
}

}  // namespace

std::vector<ValueCluster> cluster_eigenvalues(std::span<const Complex> values, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("cluster_eigenvalues: tolerance must be positive");
    const std::size_t m = values.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (std::abs(values[i] - values[j]) <= tol) parent[find_root(parent, j)] = find_root(parent, i);

    std::vector<ValueCluster> out;
    std::vector<std::size_t> slot(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t root = find_root(parent, i);
        if (slot[root] == m) {
            slot[root] = out.size();
            out.emplace_back();
        }
        out[slot[root]].indices.push_back(i);
    }
    for (auto& c : out) c.center = mean_of(values, c.indices);
    return out;
}

double default_cluster_tolerance(double eps, std::size_t n_guess, double scale) {
    const double rel = std::max(eps, 0.0) / scale;
    return std::max(1e-6, 10.0 * std::pow(rel, 1.0 / static_cast<double>(n_guess))) * scale;
}

ClusterSearch find_clusters(std::span<const Complex> values,
                            const std::function<double(std::size_t)>& tolerance_for_order) {
    auto nontrivial = [](std::vector<ValueCluster> all) {
        std::erase_if(all, [](const ValueCluster& c) { return c.size() < 2; });
        return all;
    };
    const std::size_t m = values.size();
    for (std::size_t n = 2; n <= m; ++n) {
        const double tol = tolerance_for_order(n);
        auto found = nontrivial(cluster_eigenvalues(values, tol));
        std::size_t largest = 0;
        for (const auto& c : found) largest = std::max(largest, c.size());
        if (largest == n) return {std::move(found), tol};
    }
    if (m < 2) return {{}, tolerance_for_order(2)};
    const double tol = tolerance_for_order(2);
    return {nontrivial(cluster_eigenvalues(values, tol)), tol};
}

EPVectors ep_vectors(const Matrix& h_ep, Complex w_ep, std::optional<double> tol) {
    EPVectors v;
    v.right = eigvec_from_adjugate(h_ep, w_ep, Side::right);
    v.left = eigvec_from_adjugate(h_ep, w_ep, Side::left);
    v.self_overlap = std::abs(dot(v.left, v.right));
    if (tol && v.self_overlap > *tol) {
        std::ostringstream msg;
        msg << "ep_vectors: |<L|R>| = " << v.self_overlap << " exceeds " << *tol << " at w = " << w_ep;
        throw NotDefective(msg.str());
    }
    return v;
}

double XiTriple::max_relative_spread() const {
    const double hi = std::max({power_norm, superdiagonal, corner_minor});
    const double lo = std::min({power_norm, superdiagonal, corner_minor});
    return hi == 0.0 ? 0.0 : (hi - lo) / hi;
}

XiTriple xi_triple(const Matrix& t, std::size_t n) {
    if (n < 2 || n > t.dim()) throw DimensionError("xi: block order must satisfy 2 <= n <= dim");
    Matrix nil(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) nil(i, j) = t(i, j);

    XiTriple x;
    Matrix power = nil;
    for (std::size_t k = 2; k < n; ++k) power = power * nil;
    x.power_norm = two_norm(power);
    Complex prod{1.0, 0.0};
    for (std::size_t k = 0; k + 1 < n; ++k) prod *= nil(k, k + 1);
    x.superdiagonal = std::abs(prod);
    x.corner_minor = std::abs(minor(nil, n - 1, 0));
    return x;
}

double xi(const Matrix& t, std::size_t n, double tol) {
    const XiTriple x = xi_triple(t, n);
    if (x.max_relative_spread() > tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "xi: ||N^(n-1)|| = " << x.power_norm << ", |prod N_k,k+1| = " << x.superdiagonal
            << ", |p_n1(N)| = " << x.corner_minor << " disagree";
        throw IdentityFailure(msg.str());
    }
    return x.power_norm;
}

double asymptotic_rigidity_truncated(Complex w_i, Complex w_ep, std::size_t n, double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("asymptotic_rigidity_truncated: xi must be positive");
    return static_cast<double>(n) * std::pow(std::abs(w_i - w_ep), static_cast<double>(n - 1)) / xi;
}

Matrix ep_basis(std::span<const Complex> r_ep, std::span<const Complex> l_ep,
                std::optional<std::vector<std::size_t>> completion_order) {
    const std::size_t m = r_ep.size();
    if (l_ep.size() != m || m < 2) throw DimensionError("ep_basis: vector sizes");
    std::vector<Vector> basis;
    basis.push_back(normalized(Vector(r_ep.begin(), r_ep.end())));
    const Vector last = normalized(orthogonalize(basis, Vector(l_ep.begin(), l_ep.end())));
    basis.push_back(last);

    auto unit = [m](std::size_t j) {
        Vector e(m);
        e[j] = 1.0;
        return e;
    };
    std::vector<bool> used(m, false);
    if (completion_order) {
        for (std::size_t j : *completion_order) {
            if (basis.size() == m) break;
            if (j >= m || used[j]) continue;
            used[j] = true;
            Vector v = orthogonalize(basis, unit(j));
            const double nv = norm2(v);
            if (nv > 1e-8) basis.push_back(normalized(std::move(v)));
        }
    }
    while (basis.size() < m) {
        // greedy: the canonical vector with the largest remaining component
        std::size_t best = m;
        double best_norm = -1.0;
        Vector best_v;
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j]) continue;
            Vector v = orthogonalize(basis, unit(j));
            const double nv = norm2(v);
            if (nv > best_norm) {
                best_norm = nv;
                best = j;
                best_v = std::move(v);
            }
        }
        if (best == m || best_norm <= 1e-8) throw NumericalError("ep_basis: completion failed");
        used[best] = true;
        basis.push_back(normalized(std::move(best_v)));
    }

    Matrix u(m);
    auto put = [&](std::size_t col, const Vector& v) {
        for (std::size_t i = 0; i < m; ++i) u(i, col) = v[i];
    };
    put(0, basis[0]);
    put(m - 1, basis[1]);
    for (std::size_t k = 2; k < m; ++k) put(k - 1, basis[k]);
    return u;
}

double ep_minor_denominator(const Matrix& h_ep, Complex w_ep, std::span<const Complex> r_ep,
                            std::span<const Complex> l_ep, std::optional<std::vector<std::size_t>> completion_order) {
    const std::size_t m = h_ep.dim();
    const Matrix u = ep_basis(r_ep, l_ep, std::move(completion_order));
    const Matrix shifted = w_ep * Matrix::identity(m) - h_ep;
    const Matrix b = u.adjoint() * shifted * u;
    if (m == 2) return std::abs(b(0, 1));
    return std::abs(minor(b, m - 1, 0));
}

double asymptotic_rigidity_general(const Matrix& h_ep, Complex w_ep, std::span<const Complex> r_ep,
                                   std::span<const Complex> l_ep, Complex w_i, std::optional<Complex> p_prime) {
    const Complex dp = p_prime ? *p_prime : eval_p_prime(faddeev_leverrier(h_ep), w_i);
    const double den = ep_minor_denominator(h_ep, w_ep, r_ep, l_ep);
    if (den == 0.0) throw NumericalError("asymptotic_rigidity_general: vanishing minor denominator");
    return std::abs(dp) / den;
}

EquipartitionReport equipartition_check(const SchurForm& basis, std::size_t n, std::span<const Complex> right,
                                        std::span<const Complex> left) {
    const std::size_t m = basis.q.dim();
    if (right.size() != m || left.size() != m || n < 1 || n > m)
        throw DimensionError("equipartition_check: cluster or vector size mismatch");
    const Vector r = adjoint_matvec(basis.q, normalized(Vector(right.begin(), right.end())));
    const Vector l = adjoint_matvec(basis.q, normalized(Vector(left.begin(), left.end())));
    EquipartitionReport rep;
    rep.target = dot(l, r) / static_cast<double>(n);
    const double scale = std::abs(rep.target);
    for (std::size_t k = 0; k < n; ++k) {
        rep.products.push_back(r[k] * std::conj(l[k]));
        const double dev = scale == 0.0 ? std::numeric_limits<double>::infinity()
                                        : std::abs(rep.products.back() - rep.target) / scale;
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

EquipartitionReport equipartition_check(const Matrix& h_at_ep, Complex w_ep, std::size_t n,
                                        std::span<const Complex> right, std::span<const Complex> left) {
    return equipartition_check(schur_with_cluster_first(h_at_ep, w_ep, n), n, right, left);
}

Complex overlap_relation_check(std::span<const Complex> l_ep, std::span<const Complex> right,
                               std::span<const Complex> left, std::size_t n) {
    const Vector r = normalized(Vector(right.begin(), right.end()));
    const Vector l = normalized(Vector(left.begin(), left.end()));
    const Vector le = normalized(Vector(l_ep.begin(), l_ep.end()));
    const Complex den = static_cast<double>(n) * dot(le, r);
    if (den == Complex{}) throw NumericalError("overlap_relation_check: <L_EP|R_i> vanishes");
    return dot(l, r) / den;
}

std::vector<Complex> secular_shift(const Matrix& h_ep, const Matrix& h_prime, double eps, Complex w_ep,
                                   std::size_t n, std::span<const Complex> spectators) {
    if (n < 1) throw std::invalid_argument("secular_shift: order must be positive");
    const std::size_t m = h_ep.dim();
    const Matrix adj = cofactor_adjugate(w_ep * Matrix::identity(m) - h_ep);
    const Complex tr = trace(h_prime * adj);
    const double ref = frobenius_norm(h_prime) * frobenius_norm(adj);
    if (std::abs(tr) <= 1e-12 * ref || ref == 0.0) {
        std::ostringstream msg;
        msg << "secular_shift: tr[H' adj(w_ep I - H)] = " << tr << " vanishes at first order";
        throw VanishingTrace(msg.str());
    }
    Complex den{1.0, 0.0};
    for (Complex wk : spectators) den *= w_ep - wk;
    if (den == Complex{}) throw NumericalError("secular_shift: spectator coincides with the EP");

    const Complex delta_n = eps * tr / den;
    const double nn = static_cast<double>(n);
    const Complex delta = std::polar(std::pow(std::abs(delta_n), 1.0 / nn), std::arg(delta_n) / nn);
    std::vector<Complex> out;
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(w_ep + delta * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / nn));
    return out;
}

ClusterReport analyze_cluster(const Eigensystem& sys, const std::vector<std::size_t>& indices,
                              const std::optional<Matrix>& h_at_ep, const ReportOptions& opts) {
    const Matrix& h = sys.matrix;
    const std::size_t m = h.dim();
    const std::size_t n = indices.size();
    if (n < 2) throw std::invalid_argument("analyze_cluster: a cluster needs at least two eigenvalues");

    std::vector<Complex> values;
    for (const auto& p : sys.pairs) values.push_back(p.value);
    for (std::size_t i : indices)
        if (i >= values.size()) throw DimensionError("analyze_cluster: index out of range");
    const Complex center = mean_of(values, indices);

    ClusterReport rep;
    EPCluster& c = rep.cluster;
    c.indices = indices;
    c.order = n;
    c.exact_ep_matrix = h_at_ep.has_value();

    const Matrix& h_ep = h_at_ep ? *h_at_ep : h;
    if (h_ep.dim() != m) throw DimensionError("analyze_cluster: EP matrix dimension mismatch");
    if (h_at_ep) {
        std::vector<Complex> ep_values = eigenvalues(*h_at_ep);
        std::stable_sort(ep_values.begin(), ep_values.end(), [&](Complex a, Complex b) {
            return std::abs(a - center) < std::abs(b - center);
        });
        Complex s{};
        for (std::size_t k = 0; k < n; ++k) s += ep_values[k];
        c.center = refine_multiple_root(faddeev_leverrier(*h_at_ep).coeffs, s / static_cast<double>(n), n);
        c.spectators.assign(ep_values.begin() + static_cast<std::ptrdiff_t>(n), ep_values.end());
    } else {
        c.center = center;
        for (std::size_t k = 0; k < m; ++k)
            if (std::find(indices.begin(), indices.end(), k) == indices.end()) c.spectators.push_back(values[k]);
    }

    const EPVectors ev =
        ep_vectors(h_ep, c.center, h_at_ep ? std::optional<double>(opts.self_orthogonality_tol) : std::nullopt);
    c.r_ep = ev.right;
    c.l_ep = ev.left;
    c.self_overlap = ev.self_overlap;

    const SchurForm sf = schur_with_cluster_first(h_ep, c.center, n);
    c.xi = xi(sf.t, n);
    c.minor_denominator = ep_minor_denominator(h_ep, c.center, c.r_ep, c.l_ep);

    for (std::size_t i : indices) {
        const Eigenpair& pair = sys.pairs[i];
        StateReport st;
        st.index = i;
        st.value = pair.value;
        st.rigidity = std::abs(pair.rigidity);
        if (pair.rigidity_exact) st.rigidity_exact = std::abs(*pair.rigidity_exact);

        Complex dp{1.0, 0.0};
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) dp *= pair.value - values[j];

        st.truncated = c.xi > 0.0 ? asymptotic_rigidity_truncated(pair.value, c.center, n, c.xi) : 0.0;
        st.general = c.minor_denominator > 0.0 ? std::abs(dp) / c.minor_denominator : 0.0;
        if (st.truncated > 0.0) st.ratio_truncated = st.rigidity / st.truncated;
        if (st.general > 0.0) st.ratio_general = st.rigidity / st.general;

        if (pair.value != c.center) {
            const Complex asym = asymptotic_p_prime(pair.value, c.center, static_cast<int>(n), c.spectators);
            if (asym != Complex{}) st.product_rule = dp / asym;
        }
        if (h_at_ep && pair.kind == PairKind::simple) st.equipartition = equipartition_check(sf, n, pair.right, pair.left);
        if (c.spectators.empty() && pair.kind == PairKind::simple && dot(c.l_ep, pair.right) != Complex{})
            st.overlap_relation = overlap_relation_check(c.l_ep, pair.right, pair.left, n);
        rep.states.push_back(std::move(st));
    }

    if (h_at_ep) {
        const Matrix h_prime = h - *h_at_ep;
        if (max_abs(h_prime) > 0.0) {
            try {
                auto predicted = secular_shift(h_ep, h_prime, 1.0, c.center, n, c.spectators);
                double err = 0.0;
                for (std::size_t i : indices) {
                    double best = std::numeric_limits<double>::infinity();
                    for (Complex p : predicted) best = std::min(best, std::abs(values[i] - p));
                    err = std::max(err, best);
                }
                rep.secular = std::move(predicted);
                rep.secular_error = err;
            } catch (const VanishingTrace&) {
            }
        }
    }
    return rep;
}

EPReport ep_report(const Matrix& h, const std::optional<Matrix>& h_at_ep, const ReportOptions& opts) {
    EPReport rep{eigensystem(h, opts.eigensystem), {}, 0.0, !h_at_ep.has_value()};
    const std::size_t m = h.dim();
    const double scale = matrix_scale(h);

    // candidate states: all of them when the EP matrix is known, otherwise
    // those with a clearly reduced rigidity
    std::vector<std::size_t> candidates;
    double min_rigidity = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Eigenpair& p = rep.system.pairs[i];
        const double r = std::abs(p.rigidity);
        if (h_at_ep || p.kind == PairKind::defective || r < 0.5) {
            candidates.push_back(i);
            if (p.kind != PairKind::defective) min_rigidity = std::min(min_rigidity, r);
        }
    }
    std::vector<Complex> values;
    for (std::size_t i : candidates) values.push_back(rep.system.pairs[i].value);

    std::function<double(std::size_t)> tol_for;
    if (opts.cluster_tolerance) {
        const double t = *opts.cluster_tolerance;
        tol_for = [t](std::size_t) { return t; };
    } else if (h_at_ep) {
        const double eps = two_norm(h - *h_at_ep);
        // never wide enough to join two distinct eigenvalues of the EP matrix
        const std::vector<Complex> ep_values = eigenvalues(*h_at_ep);
        double cap = std::numeric_limits<double>::infinity();
        const auto groups = cluster_eigenvalues(ep_values, 1e-3 * scale);
        for (std::size_t a = 0; a < groups.size(); ++a)
            for (std::size_t b = a + 1; b < groups.size(); ++b)
                cap = std::min(cap, 0.5 * std::abs(groups[a].center - groups[b].center));
        tol_for = [eps, scale, cap](std::size_t n) { return std::min(cap, default_cluster_tolerance(eps, n, scale)); };
    } else {
        // near an order-n EP |r| ~ eps^((n-1)/n), which gives an eps estimate
        tol_for = [min_rigidity, scale](std::size_t n) {
            const double nn = static_cast<double>(n);
            const double eps = std::pow(min_rigidity, nn / (nn - 1.0)) * scale;
            return default_cluster_tolerance(eps, n, scale);
        };
    }
    ClusterSearch search = find_clusters(values, tol_for);
    rep.cluster_tolerance = search.tolerance;
    for (const auto& vc : search.clusters) {
        std::vector<std::size_t> idx;
        for (std::size_t k : vc.indices) idx.push_back(candidates[k]);
        rep.clusters.push_back(analyze_cluster(rep.system, idx, h_at_ep, opts));
    }
    return rep;
}

}  // namespace epsens
