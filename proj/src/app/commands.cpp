#include "epsens/app/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epsens/app/cross_check.hpp"
#include "epsens/app/matrix_file.hpp"
#include "epsens/app/sweep.hpp"
#include "epsens/ep_analysis.hpp"
#include "epsens/models.hpp"

namespace epsens::app {

namespace {

using Json = nlohmann::ordered_json;

/// Input error raised by the command layer itself (bad flags, unknown family).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalFlags {
    std::optional<double> tol_cluster;
    double tol_identity = 1e-8;
    bool oracle = false;
    std::string format = "table";
    std::uint64_t seed = 0;
};

std::string g(double x, int digits = 10) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string cplx(Complex z, int digits = 10) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.*g%+.*gi", digits, z.real(), digits, z.imag());
    return buf;
}

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

template <class T>
Json opt_json(const std::optional<T>& x) {
    return x ? Json(*x) : Json(nullptr);
}

const char* kind_name(PairKind k) {
    switch (k) {
        case PairKind::simple: return "simple";
        case PairKind::defective: return "defective";
        case PairKind::semisimple: return "semisimple";
    }
    return "?";
}

Complex parse_complex(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw UsageError("cannot parse number '" + s + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw UsageError("cannot parse complex number '" + s + "' (use re,im)");
    }
    std::string rest;
    if (in >> rest) throw UsageError("trailing characters in '" + s + "'");
    if (!std::isfinite(re) || !std::isfinite(im)) throw UsageError("non-finite number '" + s + "'");
    return {re, im};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

// Checks shared by analyze and sweep; returns a message for the first failure.
std::optional<std::string> identity_failure(const Eigensystem& sys, double tol) {
    for (std::size_t i = 0; i < sys.pairs.size(); ++i) {
        const Eigenpair& p = sys.pairs[i];
        if (p.rigidity_exact && p.route_disagreement > tol)
            return "rigidity_exact: eigenvalue " + std::to_string(i) + " disagrees with the direct route by " +
                   g(p.route_disagreement, 3) + " relative (tolerance " + g(tol, 3) + ")";
    }
    return std::nullopt;
}

std::optional<std::string> oracle_failure(const Eigensystem& sys, double tol, CrossCheck& cc) {
    cc = oracle_cross_check(sys);
    const double scale = matrix_scale(sys.matrix);
    if (cc.max_value_error > tol * scale)
        return "oracle_eigen: eigenvalues differ from the oracle by " + g(cc.max_value_error, 3);
    if (cc.max_rigidity_error > tol)
        return "oracle_eigen: rigidities differ from the oracle by " + g(cc.max_rigidity_error, 3);
    return std::nullopt;
}

void print_table(std::ostream& out, const EPReport& rep, const std::optional<CrossCheck>& cc) {
    char line[256];
    out << "eigenvalues (" << rep.system.pairs.size() << ")\n";
    std::snprintf(line, sizeof line, "%5s  %-40s %-12s %-12s %-12s %-11s %s\n", "index", "omega", "|r| direct",
                  "|r| exact", "petermann", "kind", "disagreement");
    out << line;
    for (std::size_t i = 0; i < rep.system.pairs.size(); ++i) {
        const Eigenpair& p = rep.system.pairs[i];
        std::snprintf(line, sizeof line, "%5zu  %-40s %-12s %-12s %-12s %-11s %s\n", i, cplx(p.value, 15).c_str(),
                      g(std::abs(p.rigidity), 6).c_str(),
                      p.rigidity_exact ? g(std::abs(*p.rigidity_exact), 6).c_str() : "-",
                      g(p.petermann, 6).c_str(), kind_name(p.kind),
                      p.rigidity_exact ? g(p.route_disagreement, 3).c_str() : "-");
        out << line;
    }
    out << "\nmode: " << (rep.auto_mode ? "auto (EP matrix estimated from input)" : "EP matrix supplied")
        << ", cluster tolerance " << g(rep.cluster_tolerance, 4) << "\n";
    out << "EP clusters: " << rep.clusters.size() << "\n";
    for (std::size_t k = 0; k < rep.clusters.size(); ++k) {
        const ClusterReport& cr = rep.clusters[k];
        const EPCluster& c = cr.cluster;
        out << "\ncluster " << k << ": order " << c.order << ", omega_ep " << cplx(c.center, 15) << "\n"
            << "  xi " << g(c.xi) << ", |A_RL| " << g(c.minor_denominator) << ", |<L_EP|R_EP>| "
            << g(c.self_overlap, 3) << ", spectators " << c.spectators.size() << "\n";
        std::snprintf(line, sizeof line, "  %5s  %-12s %-12s %-12s %-12s %-12s %s\n", "index", "|r|", "truncated",
                      "general", "ratio gen", "prod rule", "equipartition");
        out << line;
        for (const StateReport& st : cr.states) {
            std::snprintf(line, sizeof line, "  %5zu  %-12s %-12s %-12s %-12s %-12s %s\n", st.index,
                          g(st.rigidity, 6).c_str(), g(st.truncated, 6).c_str(), g(st.general, 6).c_str(),
                          st.ratio_general ? g(*st.ratio_general, 6).c_str() : "-",
                          st.product_rule ? g(std::abs(*st.product_rule), 6).c_str() : "-",
                          st.equipartition ? g(st.equipartition->max_deviation, 3).c_str() : "-");
            out << line;
        }
        if (cr.secular_error) out << "  secular shift: max prediction error " << g(*cr.secular_error, 3) << "\n";
    }
    if (cc)
        out << "\noracle: max |dw| " << g(cc->max_value_error, 3) << ", max |d|r|| " << g(cc->max_rigidity_error, 3)
            << ", max vector defect " << g(cc->max_vector_error, 3) << ", oracle residual "
            << g(cc->max_oracle_residual, 3) << "\n";
}

Json report_json(const EPReport& rep, const std::optional<CrossCheck>& cc) {
    Json doc;
    Json pairs = Json::array();
    for (const Eigenpair& p : rep.system.pairs) {
        Json j;
        j["omega"] = cjson(p.value);
        j["rigidity"] = cjson(p.rigidity);
        j["rigidity_exact"] = p.rigidity_exact ? cjson(*p.rigidity_exact) : Json(nullptr);
        j["abs_rigidity"] = std::abs(p.rigidity);
        j["route_disagreement"] = p.route_disagreement;
        j["petermann"] = std::isfinite(p.petermann) ? Json(p.petermann) : Json("inf");
        j["kind"] = kind_name(p.kind);
        j["multiplicity"] = p.multiplicity;
        j["right_residual"] = p.right_residual;
        j["left_residual"] = p.left_residual;
        pairs.push_back(std::move(j));
    }
    doc["eigenpairs"] = std::move(pairs);
    doc["auto_mode"] = rep.auto_mode;
    doc["cluster_tolerance"] = rep.cluster_tolerance;
    Json clusters = Json::array();
    for (const ClusterReport& cr : rep.clusters) {
        const EPCluster& c = cr.cluster;
        Json j;
        j["indices"] = c.indices;
        j["order"] = c.order;
        j["omega_ep"] = cjson(c.center);
        j["xi"] = c.xi;
        j["minor_denominator"] = c.minor_denominator;
        j["self_overlap"] = c.self_overlap;
        Json spect = Json::array();
        for (Complex s : c.spectators) spect.push_back(cjson(s));
        j["spectators"] = std::move(spect);
        Json states = Json::array();
        for (const StateReport& st : cr.states) {
            Json s;
            s["index"] = st.index;
            s["rigidity"] = st.rigidity;
            s["rigidity_exact"] = opt_json(st.rigidity_exact);
            s["truncated"] = st.truncated;
            s["general"] = st.general;
            s["ratio_truncated"] = opt_json(st.ratio_truncated);
            s["ratio_general"] = opt_json(st.ratio_general);
            s["product_rule"] = st.product_rule ? cjson(*st.product_rule) : Json(nullptr);
            s["equipartition_deviation"] =
                st.equipartition ? Json(st.equipartition->max_deviation) : Json(nullptr);
            s["overlap_relation"] = st.overlap_relation ? cjson(*st.overlap_relation) : Json(nullptr);
            states.push_back(std::move(s));
        }
        j["states"] = std::move(states);
        if (cr.secular) {
            Json sec = Json::array();
            for (Complex w : *cr.secular) sec.push_back(cjson(w));
            j["secular"] = std::move(sec);
            j["secular_error"] = opt_json(cr.secular_error);
        }
        clusters.push_back(std::move(j));
    }
    doc["clusters"] = std::move(clusters);
    if (cc) {
        Json o;
        o["max_value_error"] = cc->max_value_error;
        o["max_rigidity_error"] = cc->max_rigidity_error;
        o["max_vector_error"] = cc->max_vector_error;
        o["max_oracle_residual"] = cc->max_oracle_residual;
        doc["oracle"] = std::move(o);
    }
    return doc;
}

ReportOptions report_options(const GlobalFlags& flags) {
    ReportOptions opts;
    opts.cluster_tolerance = flags.tol_cluster;
    return opts;
}

int cmd_analyze(const std::string& path, std::optional<double> eps, const GlobalFlags& flags, std::ostream& out,
                std::ostream& err) {
    const MatrixFile file = read_matrix_file(path);
    Matrix h = file.entries;
    std::optional<Matrix> h_at_ep;
    bool truncated = false;
    if (file.model) {
        const NearEPModel model = to_model(file);
        h = model.at(eps.value_or(0.0));
        h_at_ep = model.h_at_ep;
        truncated = model.truncated;
    } else if (eps) {
        throw UsageError("--eps needs a file with a model block");
    }

    const EPReport rep = ep_report(h, h_at_ep, report_options(flags));
    std::optional<std::string> failure = identity_failure(rep.system, flags.tol_identity);
    std::optional<CrossCheck> cc;
    if (flags.oracle) {
        CrossCheck c;
        auto f = oracle_failure(rep.system, flags.tol_identity, c);
        if (!failure) failure = f;
        cc = c;
    }

    if (flags.format == "json")
        out << report_json(rep, cc).dump(2) << "\n";
    else if (flags.format == "csv")
        write_csv(out, records_from(eps.value_or(0.0), rep, truncated));
    else
        print_table(out, rep, cc);

    if (failure) {
        err << "error: " << *failure << "\n";
        return kNumericalError;
    }
    return kSuccess;
}

int cmd_sweep(const std::string& path, std::vector<double> eps, const std::vector<double>& range,
              const std::string& svg_path, const std::string& out_path, unsigned threads, const GlobalFlags& flags,
              std::ostream& out, std::ostream& err) {
    const MatrixFile file = read_matrix_file(path);
    if (!file.model) throw ParseError("sweep: " + path + " has no model block");
    const NearEPModel model = to_model(file);
    if (!range.empty()) {
        if (range.size() != 3 || range[2] < 2 || range[2] != std::floor(range[2]))
            throw UsageError("--range expects LO HI POINTS");
        const auto more = log_range(range[0], range[1], static_cast<std::size_t>(range[2]));
        eps.insert(eps.end(), more.begin(), more.end());
    }
    if (eps.empty()) eps = log_range(1e-2, 1e-8, 7);
    for (double e : eps)
        if (!(e >= 0.0) || !std::isfinite(e)) throw UsageError("eps values must be finite and non-negative");

    SweepOptions opts{eps, report_options(flags), threads};
    const std::vector<SweepRecord> records = run_sweep(model, opts);

    std::optional<std::string> failure;
    for (const auto& r : records)
        if (r.route_disagreement && *r.route_disagreement > flags.tol_identity) {
            failure = "rigidity_exact: eps " + g(r.eps, 3) + ", eigenvalue " + std::to_string(r.index) +
                      " disagrees with the direct route by " + g(*r.route_disagreement, 3);
            break;
        }
    if (flags.oracle && !failure)
        for (double e : eps) {
            CrossCheck cc;
            if (auto f = oracle_failure(eigensystem(model.at(e)), flags.tol_identity, cc)) {
                failure = "eps " + g(e, 3) + ": " + *f;
                break;
            }
        }

    std::ostringstream body;
    if (flags.format == "json") {
        Json arr = Json::array();
        for (const auto& r : records) {
            Json j;
            j["eps"] = r.eps;
            j["index"] = r.index;
            j["omega"] = cjson(r.omega);
            j["r_direct"] = r.r_direct;
            j["r_exact"] = opt_json(r.r_exact);
            j["r_trunc"] = opt_json(r.r_trunc);
            j["r_general"] = opt_json(r.r_general);
            j["ratio_trunc"] = opt_json(r.ratio_trunc);
            j["ratio_general"] = opt_json(r.ratio_general);
            j["route_disagreement"] = opt_json(r.route_disagreement);
            j["equipartition_dev"] = opt_json(r.equipartition_dev);
            j["petermann"] = std::isfinite(r.petermann) ? Json(r.petermann) : Json("inf");
            arr.push_back(std::move(j));
        }
        body << arr.dump(2) << "\n";
    } else {
        // table and csv both stream the versioned CSV
        write_csv(body, records);
    }
    if (out_path.empty() || out_path == "-")
        out << body.str();
    else
        write_text(out_path, body.str());
    if (!svg_path.empty()) write_text(svg_path, sweep_svg(records));

    if (failure) {
        err << "error: " << *failure << "\n";
        return kNumericalError;
    }
    return kSuccess;
}

int cmd_generate(const std::string& family, const std::vector<std::string>& params, std::size_t n, std::size_t m,
                 double spread, const std::string& out_path, const GlobalFlags& flags, std::ostream& out) {
    std::map<std::string, Complex> p;
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
        p[kv.substr(0, eq)] = parse_complex(kv.substr(eq + 1));
    }
    auto take = [&p](const std::string& key, Complex def) {
        auto it = p.find(key);
        if (it == p.end()) return def;
        Complex v = it->second;
        p.erase(it);
        return v;
    };

    NearEPModel model;
    try {
        if (family == "jordan") {
            model = jordan_block(n, take("omega", 0.0));
        } else if (family == "example3x3") {
            model = example_3x3(take("a", 1.0), take("b", 1.0), take("c", 1.0), take("d", 1.0));
        } else if (family == "example4x4") {
            FourStateParams fp;
            fp.a1 = take("a1", fp.a1);
            fp.a2 = take("a2", fp.a2);
            fp.a3 = take("a3", fp.a3);
            fp.b1 = take("b1", fp.b1);
            fp.b2 = take("b2", fp.b2);
            fp.c1 = take("c1", fp.c1);
            fp.omega = take("omega", fp.omega);
            model = example_4x4(fp);
        } else if (family == "random") {
            model = random_near_ep(m, n, flags.seed, spread);
        } else {
            throw UsageError("unknown family '" + family + "' (jordan, example3x3, example4x4, random)");
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!p.empty()) throw UsageError("unknown parameter '" + p.begin()->first + "' for family " + family);

    const std::string text = serialize_matrix_file(to_matrix_file(model, family));
    if (out_path.empty() || out_path == "-")
        out << text;
    else
        write_text(out_path, text);
    return kSuccess;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenvalue condition numbers and exceptional-point analysis of non-Hermitian matrices", "epsens"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--tol-cluster", flags.tol_cluster, "Absolute eigenvalue clustering tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-identity", flags.tol_identity,
                   "Tolerance for identity checks (route agreement, oracle comparison)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--oracle", flags.oracle, "Cross-check against the double-double oracle");
    app.add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", flags.seed, "Seed for random families")->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "Eigensystem, rigidities and EP clusters of a matrix file");
    std::string analyze_path;
    std::optional<double> analyze_eps;
    analyze->add_option("file", analyze_path, "Matrix file (JSON)")->required();
    analyze->add_option("--eps", analyze_eps, "Analyze H_EP + eps H' (needs a model block)");

    auto* sweep = app.add_subcommand("sweep", "Rigidity and predictions over a range of eps");
    std::string sweep_path, svg_path, sweep_out;
    std::vector<double> sweep_eps, sweep_range;
    unsigned threads = 0;
    sweep->add_option("file", sweep_path, "Model file (JSON with a model block)")->required();
    sweep->add_option("--eps", sweep_eps, "Comma-separated eps values")->delimiter(',');
    sweep->add_option("--range", sweep_range, "LO HI POINTS, log-spaced")->expected(3);
    sweep->add_option("--svg", svg_path, "Write a log-log plot here");
    sweep->add_option("-o,--out", sweep_out, "Output file (default stdout)");
    sweep->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

    auto* generate = app.add_subcommand("generate", "Write a model file");
    std::string family, gen_out;
    std::vector<std::string> params;
    std::size_t gen_n = 2, gen_m = 0;
    double spread = 1.0;
    generate->add_option("family", family, "jordan, example3x3, example4x4 or random")->required();
    generate->add_option("--param", params, "key=value, complex values as re,im");
    generate->add_option("-n,--order", gen_n, "EP order (jordan, random)")->capture_default_str();
    generate->add_option("-m,--dim", gen_m, "Dimension (random; default order + 2)");
    generate->add_option("--spread", spread, "Spectator ring radius relative to ||N|| (random)")
        ->capture_default_str();
    generate->add_option("-o,--out", gen_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_path, analyze_eps, flags, out, err);
        if (*sweep)
            return cmd_sweep(sweep_path, sweep_eps, sweep_range, svg_path, sweep_out, threads, flags, out, err);
        if (*generate)
            return cmd_generate(family, params, gen_n, gen_m ? gen_m : gen_n + 2, spread, gen_out, flags, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kInputError;
}

}  // namespace epsens::app
