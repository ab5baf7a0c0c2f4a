#include "epsens/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "epsens/adjugate.hpp"
#include "epsens/charpoly.hpp"
#include "epsens/roots.hpp"

namespace epsens {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

double nearest_other(std::span<const Complex> z, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k) best = std::min(best, std::abs(z[k] - z[j]));
    return best;
}

Matrix shifted(const Matrix& h, Complex w) {
    // w I - h
    Matrix x = h;
    x *= -1.0;
    for (std::size_t i = 0; i < x.dim(); ++i) x(i, i) += w;
    return x;
}

void resolvent_polish(const Matrix& h, std::vector<Complex>& z, int steps, double scale) {
    for (std::size_t k = 0; k < z.size(); ++k) {
        for (int step = 0; step < steps; ++step) {
            const LuDecomposition lu(shifted(h, z[k]));
            if (lu.min_pivot_ratio() == 0.0) break;  // exact eigenvalue in floating point
            const Complex tr = trace(lu.inverse());
            if (tr == Complex{} || !std::isfinite(std::abs(tr))) break;
            const Complex corr = 1.0 / tr;
            if (std::abs(corr) > 0.25 * nearest_other(z, k)) break;
            z[k] -= corr;
            if (std::abs(corr) <= 4.0 * kUnitRoundoff * std::max(std::abs(z[k]), scale)) break;
        }
    }
}

double relative_residual(const Matrix& h, Complex w, std::span<const Complex> v, Side side, double scale) {
    Vector r = side == Side::right ? matvec(h, v) : adjoint_matvec(h, v);
    const Complex ww = side == Side::right ? w : std::conj(w);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= ww * v[i];
    return norm2(r) / (scale * norm2(v));
}

Vector start_vector(std::size_t m) {
    Vector v(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = static_cast<double>(j + 1);
        v[j] = Complex(0.6 + std::cos(2.9 * t), 0.4 * std::sin(1.3 * t + 0.5));
    }
    return normalized(std::move(v));
}

}  // namespace

double matrix_scale(const Matrix& h) {
    const double s = frobenius_norm(h);
    return s > 0.0 ? s : 1.0;
}

std::vector<Complex> eigenvalues(const Matrix& h, const EigenvalueOptions& opts) {
    const std::size_t m = h.dim();
    if (m == 0) return {};
    if (m == 1) return {h(0, 0)};

    const CharPoly cp = faddeev_leverrier(h);
    RootOptions ro;
    ro.max_iterations = opts.max_iterations;
    std::vector<Complex> z = aberth_roots(cp.coeffs, ro);
    resolvent_polish(h, z, opts.resolvent_polish_steps, matrix_scale(h));
    std::sort(z.begin(), z.end(), lex_less);
    return z;
}

void fix_phase(Vector& v) {
    std::size_t best = 0;
    double mag = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > mag * (1.0 + 1e-12)) {
            mag = a;
            best = i;
        }
    }
    if (mag == 0.0) return;
    const Complex phase = std::conj(v[best]) / mag;
    for (auto& c : v) c *= phase;
    v[best] = Complex(std::abs(v[best]), 0.0);
}

Vector eigvec_from_adjugate_matrix(const Matrix& adj, Side side, std::optional<std::size_t> pivot, double scale,
                                   double null_threshold) {
    const std::size_t m = adj.dim();
    auto pick = [&](std::size_t idx) {
        return side == Side::right ? adj.column(idx) : adj.row(idx);
    };
    std::size_t chosen = 0;
    if (pivot) {
        if (*pivot >= m) throw DimensionError("eigvec_from_adjugate: pivot out of range");
        chosen = *pivot;
    } else {
        double best = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double n = norm2(pick(i));
            if (n > best) {
                best = n;
                chosen = i;
            }
        }
    }
    Vector v = pick(chosen);
    const double n = norm2(v);
    if (!(n > null_threshold * scale)) {
        throw AllPivotsNull(pivot ? "eigvec_from_adjugate: pivot " + std::to_string(chosen) + " yields a null vector"
                                  : "eigvec_from_adjugate: every pivot yields a null vector");
    }
    if (side == Side::left)
        for (auto& c : v) c = std::conj(c);
    for (auto& c : v) c /= n;
    fix_phase(v);
    return v;
}

Vector eigvec_from_adjugate(const Matrix& h, Complex w, Side side, std::optional<std::size_t> pivot,
                            double null_threshold) {
    const Matrix x = shifted(h, w);
    const double sx = std::max(frobenius_norm(x), std::numeric_limits<double>::min());
    const double adj_scale = std::pow(sx, static_cast<double>(h.dim()) - 1.0);
    return eigvec_from_adjugate_matrix(cofactor_adjugate(x), side, pivot, adj_scale, null_threshold);
}

Vector eigvec_inverse_iteration(const Matrix& h, Complex w, Side side, int max_iterations) {
    const std::size_t m = h.dim();
    const double scale = matrix_scale(h);
    const Complex sigma = w + 1e-10 * scale * std::polar(1.0, 0.785398);
    LuDecomposition lu(shifted(h, sigma));
    lu.regularize_pivots(kUnitRoundoff * scale);

    Vector x = start_vector(m);
    double diff = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iterations; ++it) {
        Vector y = side == Side::right ? lu.solve(x) : lu.solve_adjoint(x);
        const double ny = norm2(y);
        if (!(ny > 0.0) || !std::isfinite(ny)) throw NumericalError("eigvec_inverse_iteration: breakdown");
        for (auto& c : y) c /= ny;
        const Complex overlap = dot(x, y);
        const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
        diff = 0.0;
        for (std::size_t i = 0; i < m; ++i) diff += std::norm(y[i] * std::conj(phase) - x[i]);
        diff = std::sqrt(diff);
        x = std::move(y);
        if (diff <= 1e-13) break;
    }
    if (diff > 1e-8) {
        std::ostringstream msg;
        msg << "eigvec_inverse_iteration: no convergence at w = " << w << " (last change " << diff << ")";
        throw NonConvergence(msg.str());
    }
    fix_phase(x);
    return x;
}

Complex rigidity_direct(std::span<const Complex> left, std::span<const Complex> right) {
    const double nl = norm2(left);
    const double nr = norm2(right);
    if (nl == 0.0 || nr == 0.0) throw NumericalError("rigidity_direct: zero vector");
    return dot(left, right) / (nl * nr);
}

Complex rigidity_exact_from(Complex p_prime, const Matrix& adj, std::span<const Complex> right,
                            std::span<const Complex> left) {
    const Complex a = adjugate_element_from(right, left, adj);
    // relative to the adjugate itself: ||H||^(m-1) overstates it badly for
    // non-normal H. p' = tr adj, so both sides share that scale.
    const double thr = 1e-13 * frobenius_norm(adj);
    if (std::abs(a) <= thr && std::abs(p_prime) <= thr) {
        throw DegenerateDenominator("rigidity_exact: p'(w) and A both vanish");
    }
    return p_prime / a;
}

Complex rigidity_exact(const Matrix& h, Complex w, std::span<const Complex> right, std::span<const Complex> left) {
    const CharPoly cp = faddeev_leverrier(h);
    return rigidity_exact_from(eval_p_prime(cp, w), cofactor_adjugate(shifted(h, w)), right, left);
}

double Eigensystem::max_residual() const {
    double r = 0.0;
    for (const auto& p : pairs) r = std::max({r, p.right_residual, p.left_residual});
    return r;
}

double Eigensystem::max_route_disagreement() const {
    double r = 0.0;
    for (const auto& p : pairs)
        if (p.kind == PairKind::simple && p.rigidity_exact) r = std::max(r, p.route_disagreement);
    return r;
}

double Eigensystem::max_biorthogonality_defect() const {
    double r = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].kind != PairKind::simple) continue;
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            if (i == j || pairs[j].kind != PairKind::simple) continue;
            r = std::max(r, std::abs(dot(pairs[i].left, pairs[j].right)));
        }
    }
    return r;
}

namespace {

struct Group {
    std::vector<std::size_t> members;
    PairKind kind = PairKind::simple;
    Complex center;
};

std::vector<std::vector<std::size_t>> single_linkage(std::span<const Complex> z, const std::vector<bool>& skip,
                                                     double tol) {
    const std::size_t n = z.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (skip[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j)
            if (!skip[j] && std::abs(z[i] - z[j]) <= tol) parent[find(i)] = find(j);
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::ptrdiff_t> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (skip[i]) continue;
        const std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::ptrdiff_t>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return groups;
}

}  // namespace

Eigensystem eigensystem(const Matrix& h, const EigensystemOptions& opts) {
    Eigensystem es;
    es.matrix = h;
    const std::size_t m = h.dim();
    if (m == 0) return es;

    const double scale = matrix_scale(h);
    const double adj_scale = std::pow(scale, static_cast<double>(m) - 1.0);
    const std::vector<Complex> values = eigenvalues(h, opts.eigen);
    const CharPoly cp = faddeev_leverrier(h);

    // Coincident roots: a tight group whose center c makes c I - H singular
    // to working precision is one numerically exact eigenvalue. Its
    // individual roots only carry the u^(1/k) scatter of a k-fold root.
    std::vector<bool> assigned(m, false);
    std::vector<Group> groups;
    for (const double rel : {1e-7, 1e-5, 1e-3, 1e-2}) {
        for (auto& members : single_linkage(values, assigned, rel * scale)) {
            if (members.size() < 2) continue;
            Complex c{};
            for (auto i : members) c += values[i];
            c /= static_cast<double>(members.size());
            c = refine_multiple_root(cp.coeffs, c, members.size());
            // an ill-conditioned H can put distinct eigenvalues inside the
            // wider radii; the center then is no eigenvalue at all
            if (!LuDecomposition(shifted(h, c)).singular(1e-10)) continue;
            const Matrix adj = cofactor_adjugate(shifted(h, c));
            Group g{members, PairKind::simple, c};
            if (max_abs(adj) <= 1e-11 * adj_scale) {
                g.kind = PairKind::semisimple;
            } else {
                const Vector r = eigvec_from_adjugate_matrix(adj, Side::right, std::nullopt, adj_scale, 0.0);
                if (relative_residual(h, c, r, Side::right, scale) <= opts.coincidence_residual)
                    g.kind = PairKind::defective;
            }
            if (g.kind != PairKind::simple) {
                for (auto i : members) assigned[i] = true;
                groups.push_back(std::move(g));
            }
        }
    }

    es.pairs.resize(m);
    std::vector<bool> filled(m, false);
    for (const auto& g : groups) {
        Eigenpair proto;
        proto.value = g.center;
        proto.kind = g.kind;
        proto.multiplicity = g.members.size();
        try {
            if (g.kind == PairKind::defective) {
                const Matrix adj = cofactor_adjugate(shifted(h, g.center));
                proto.right = eigvec_from_adjugate_matrix(adj, Side::right, std::nullopt, adj_scale, 0.0);
                proto.left = eigvec_from_adjugate_matrix(adj, Side::left, std::nullopt, adj_scale, 0.0);
                proto.rigidity = 0.0;
                proto.rigidity_exact = Complex(0.0);
                proto.petermann = std::numeric_limits<double>::infinity();
            } else {
                proto.route = VectorRoute::inverse_iteration;
                proto.right = eigvec_inverse_iteration(h, g.center, Side::right);
                proto.left = eigvec_inverse_iteration(h, g.center, Side::left);
                proto.rigidity = rigidity_direct(proto.left, proto.right);
                proto.petermann = 1.0 / std::norm(proto.rigidity);
            }
        } catch (const NumericalError& e) {
            throw EigenpairError(g.members.front(), e.what());
        }
        proto.right_residual = relative_residual(h, proto.value, proto.right, Side::right, scale);
        proto.left_residual = relative_residual(h, proto.value, proto.left, Side::left, scale);
        for (auto i : g.members) {
            es.pairs[i] = proto;
            filled[i] = true;
        }
    }

    for (std::size_t i = 0; i < m; ++i) {
        if (filled[i]) continue;
        Eigenpair& p = es.pairs[i];
        p.value = values[i];
        try {
            const Matrix adj = cofactor_adjugate(shifted(h, p.value));
            try {
                p.right = eigvec_from_adjugate_matrix(adj, Side::right, std::nullopt, adj_scale);
                p.left = eigvec_from_adjugate_matrix(adj, Side::left, std::nullopt, adj_scale);
            } catch (const AllPivotsNull&) {
                p.route = VectorRoute::inverse_iteration;
                p.right = eigvec_inverse_iteration(h, p.value, Side::right);
                p.left = eigvec_inverse_iteration(h, p.value, Side::left);
            }
            p.rigidity = rigidity_direct(p.left, p.right);
            try {
                // p' at a root as the product of differences: Horner on the
                // coefficients cancels badly inside a tight cluster
                Complex dp{1.0, 0.0};
                for (std::size_t j = 0; j < m; ++j)
                    if (j != i) dp *= p.value - values[j];
                p.rigidity_exact = rigidity_exact_from(dp, adj, p.right, p.left);
            } catch (const DegenerateDenominator&) {
                p.rigidity_exact.reset();
            }
        } catch (const NumericalError& e) {
            throw EigenpairError(i, e.what());
        }
        if (p.rigidity_exact) {
            const double denom = std::max(std::abs(p.rigidity), std::numeric_limits<double>::min());
            p.route_disagreement = std::abs(*p.rigidity_exact - p.rigidity) / denom;
        }
        p.petermann = 1.0 / std::norm(p.rigidity);
        p.right_residual = relative_residual(h, p.value, p.right, Side::right, scale);
        p.left_residual = relative_residual(h, p.value, p.left, Side::left, scale);
    }

    std::stable_sort(es.pairs.begin(), es.pairs.end(),
                     [](const Eigenpair& a, const Eigenpair& b) { return lex_less(a.value, b.value); });
    return es;
}

}  // namespace epsens
