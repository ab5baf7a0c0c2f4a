#pragma once

// Epsilon sweeps over a near-EP model: one record per (eps, eigenvalue).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epsens/ep_analysis.hpp"
#include "epsens/models.hpp"

namespace epsens::app {

struct SweepRecord {
    double eps = 0.0;
    std::size_t index = 0;
    Complex omega;
    double r_direct = 0.0;                   // |L^H R|
    std::optional<double> r_exact;           // |p'/A|
    std::optional<double> r_trunc;           // n |w - w_ep|^(n-1) / xi, truncated models only
    std::optional<double> r_general;         // |p'| / |A_{R_EP L_EP}|
    std::optional<double> ratio_trunc;
    std::optional<double> ratio_general;
    std::optional<double> route_disagreement;
    std::optional<double> equipartition_dev;
    double petermann = 1.0;
};

struct SweepOptions {
    std::vector<double> eps;
    ReportOptions report;
    /// 0 picks std::thread::hardware_concurrency()
    unsigned threads = 0;
};

/// Evaluates every eps concurrently; records come back in the order of
/// opts.eps, each group ordered by eigenvalue index. The first failure in eps
/// order is rethrown.
std::vector<SweepRecord> run_sweep(const NearEPModel& model, const SweepOptions& opts);

/// Records for a single eps from an already computed report.
std::vector<SweepRecord> records_from(double eps, const EPReport& report, bool truncated);

/// `points` values from lo to hi, evenly spaced in log10. lo and hi must be
/// positive; points >= 2.
std::vector<double> log_range(double lo, double hi, std::size_t points);

/// First line "# epsens-sweep v1", then a header naming every column:
/// eps,index,omega_re,omega_im,r_direct,r_exact,r_trunc,r_general,
/// ratio_trunc,ratio_general,route_disagreement,equipartition_dev,petermann.
/// Missing values are empty fields; numbers use %.17g.
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);

inline constexpr const char* kSweepCsvVersion = "# epsens-sweep v1";

/// Log-log SVG of |r_i| and both predictions against eps.
std::string sweep_svg(const std::vector<SweepRecord>& records);

}  // namespace epsens::app
