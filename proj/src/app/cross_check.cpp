#include "epsens/app/cross_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epsens/oracle.hpp"

namespace epsens::app {

CrossCheck oracle_cross_check(const Eigensystem& sys) {
    const oracle::WideEigen ref = oracle::oracle_eigen(sys.matrix);
    const std::size_t m = sys.pairs.size();
    CrossCheck cc;
    std::vector<bool> used(ref.values.size(), false);
    for (std::size_t i = 0; i < m; ++i) {
        const Eigenpair& p = sys.pairs[i];
        std::size_t best = ref.values.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ref.values.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(p.value - ref.values[j].to_complex());
            if (d < best_d) best_d = d, best = j;
        }
        if (best == ref.values.size()) break;
        used[best] = true;
        cc.match.push_back(best);
        cc.max_value_error = std::max(cc.max_value_error, best_d);
        cc.max_oracle_residual =
            std::max({cc.max_oracle_residual, ref.right_residual[best], ref.left_residual[best]});
        if (p.kind != PairKind::simple) continue;

        const Vector r = oracle::to_vector(ref.right[best]);
        const Vector l = oracle::to_vector(ref.left[best]);
        const double r_oracle = std::abs(dot(l, r));
        cc.max_rigidity_error = std::max(cc.max_rigidity_error, std::abs(std::abs(p.rigidity) - r_oracle));
        const double right_err = 1.0 - std::abs(dot(r, p.right)) / norm2(p.right);
        const double left_err = 1.0 - std::abs(dot(l, p.left)) / norm2(p.left);
        cc.max_vector_error = std::max({cc.max_vector_error, right_err, left_err});
    }
    return cc;
}

}  // namespace epsens::app
