#include "epsens/app/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "epsens/app/svg.hpp"

namespace epsens::app {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

}  // namespace

std::vector<SweepRecord> records_from(double eps, const EPReport& report, bool truncated) {
    std::vector<SweepRecord> out;
    const auto& pairs = report.system.pairs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Eigenpair& p = pairs[i];
        SweepRecord rec;
        rec.eps = eps;
        rec.index = i;
        rec.omega = p.value;
        rec.r_direct = std::abs(p.rigidity);
        if (p.rigidity_exact) {
            rec.r_exact = std::abs(*p.rigidity_exact);
            rec.route_disagreement = p.route_disagreement;
        }
        rec.petermann = p.petermann;
        out.push_back(rec);
    }
    for (const auto& cl : report.clusters)
        for (const auto& st : cl.states) {
            SweepRecord& rec = out[st.index];
            if (truncated && st.truncated > 0.0) {
                rec.r_trunc = st.truncated;
                rec.ratio_trunc = st.ratio_truncated;
            }
            if (st.general > 0.0) {
                rec.r_general = st.general;
                rec.ratio_general = st.ratio_general;
            }
            if (st.equipartition) rec.equipartition_dev = st.equipartition->max_deviation;
        }
    return out;
}

std::vector<SweepRecord> run_sweep(const NearEPModel& model, const SweepOptions& opts) {
    const std::size_t count = opts.eps.size();
    std::vector<std::vector<SweepRecord>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                const double eps = opts.eps[k];
                const EPReport rep = ep_report(model.at(eps), model.h_at_ep, opts.report);
                slots[k] = records_from(eps, rep, model.truncated);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    std::vector<SweepRecord> out;
    for (std::size_t k = 0; k < count; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        out.insert(out.end(), slots[k].begin(), slots[k].end());
    }
    return out;
}

std::vector<double> log_range(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("log_range: bounds must be positive");
    if (points < 2) throw std::invalid_argument("log_range: need at least two points");
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    std::vector<double> out(points);
    for (std::size_t k = 0; k < points; ++k)
        out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << kSweepCsvVersion << '\n'
        << "eps,index,omega_re,omega_im,r_direct,r_exact,r_trunc,r_general,ratio_trunc,ratio_general,"
           "route_disagreement,equipartition_dev,petermann\n";
    for (const auto& r : records) {
        out << num(r.eps) << ',' << r.index << ',' << num(r.omega.real()) << ',' << num(r.omega.imag()) << ','
            << num(r.r_direct) << ',' << opt(r.r_exact) << ',' << opt(r.r_trunc) << ',' << opt(r.r_general) << ','
            << opt(r.ratio_trunc) << ',' << opt(r.ratio_general) << ',' << opt(r.route_disagreement) << ','
            << opt(r.equipartition_dev) << ',' << num(r.petermann) << '\n';
    }
}

std::string sweep_svg(const std::vector<SweepRecord>& records) {
    LogLogPlot plot{"phase rigidity against eps", "eps", "|r|", {}};
    std::size_t states = 0;
    for (const auto& r : records) states = std::max(states, r.index + 1);
    for (std::size_t i = 0; i < states; ++i) {
        Series measured{"|r_" + std::to_string(i) + "|", {}, false};
        Series trunc{"truncated " + std::to_string(i), {}, true};
        Series general{"general " + std::to_string(i), {}, true};
        for (const auto& r : records) {
            if (r.index != i) continue;
            measured.points.emplace_back(r.eps, r.r_direct);
            if (r.r_trunc) trunc.points.emplace_back(r.eps, *r.r_trunc);
            if (r.r_general) general.points.emplace_back(r.eps, *r.r_general);
        }
        plot.series.push_back(std::move(measured));
        if (!trunc.points.empty()) plot.series.push_back(std::move(trunc));
        if (!general.points.empty()) plot.series.push_back(std::move(general));
    }
    return render_svg(plot);
}

}  // namespace epsens::app
