#include "helm/bivariate.hpp"
#include "helm/case_io.hpp"
#include "helm/json_io.hpp"
#include "helm/oracle.hpp"
#include "helm/solve.hpp"
#include "helm/stahl.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace helm;

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInconclusive = 3;

struct RunOptions {
    std::string variant = "auto";
    int degree = 100;
    int precision_bits = 0;
    double tol = 1e-6;
    std::string out;
    std::string format = "json";
    bool no_q_limits = false;
};

// Largest germ order supported at a given precision.
int supported_degree(int bits) {
    if (bits >= 3328) return 1000;
    if (bits >= 512) return 200 + (bits - 512) * 800 / (3328 - 512);
    if (bits >= 256) return 100;
    return 50;
}

int resolve_bits(const RunOptions& o) {
    if (o.precision_bits > 0) return o.precision_bits;
    if (const char* env = std::getenv("HELM_PRECISION_BITS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return default_precision_bits(o.degree);
}

SolveConfig make_config(const Network& net, const RunOptions& o) {
    SolveConfig cfg;
    cfg.variant = o.variant == "auto" ? (net.has_kind(BusKind::PV) ? Variant::PV_A : Variant::PQ) : parse_variant(o.variant);
    cfg.max_degree = o.degree;
    cfg.mantissa_bits = resolve_bits(o);
    cfg.tol = o.tol;
    cfg.enforce_q_limits = !o.no_q_limits;
    if (cfg.mantissa_bits < 128) throw std::invalid_argument("precision must be at least 128 bits");
    if (cfg.max_degree < 1) throw std::invalid_argument("degree must be at least 1");
    if (cfg.max_degree > supported_degree(cfg.mantissa_bits))
        throw std::invalid_argument("degree " + std::to_string(cfg.max_degree) + " needs more than " +
                                    std::to_string(cfg.mantissa_bits) + " bits of precision");
    return cfg;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

int exit_code(const Solution& sol) {
    switch (sol.status) {
    case SolveStatus::Converged: return kExitFeasible;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::NotConverged: return kExitInconclusive;
    }
    return kExitError;
}

void add_run_options(CLI::App* app, RunOptions& o) {
    app->add_option("--variant", o.variant, "pq | pv-a | pv-b | pv-reflect | auto")
        ->check(CLI::IsMember({"auto", "pq", "pv-a", "pv-b", "pv-reflect"}));
    app->add_option("--degree", o.degree, "germ order N; diagonal approximants up to N/2");
    app->add_option("--precision-bits", o.precision_bits, "mantissa bits (default by degree or HELM_PRECISION_BITS)");
    app->add_option("--tol", o.tol, "mismatch tolerance");
    app->add_option("--out", o.out, "output file (default stdout)");
    app->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--no-q-limits", o.no_q_limits, "ignore generator reactive limits");
}

std::string solution_csv(const Network& net, const Solution& sol) {
    std::ostringstream os;
    os << std::setprecision(17) << "id,kind,v_re,v_im,q\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        os << net.buses()[i].id << ',' << to_string(net.buses()[i].kind) << ',' << sol.v[i].real() << ','
           << sol.v[i].imag() << ',';
        if (auto it = sol.q.find(i); it != sol.q.end()) os << it->second;
        os << '\n';
    }
    return os.str();
}

int cmd_solve(const std::string& path, const RunOptions& o) {
    Network net = load_case_file(path);
    Solution sol = solve(net, make_config(net, o));
    write_output(o.out, o.format == "csv" ? solution_csv(net, sol) : to_json(net, sol).dump(2));
    return exit_code(sol);
}

int cmd_scan(const std::string& path, const RunOptions& o, double from, double to, int steps) {
    if (!(from > 0) || !(to > 0) || steps < 1) throw std::invalid_argument("lambda range must be positive");
    Network net = load_case_file(path);
    std::ostringstream os;
    os << std::setprecision(12) << "lambda,feasible,proximity,vmin,status,error\n";
    for (int k = 0; k < steps; ++k) {
        double lambda = steps == 1 ? from : from + (to - from) * k / (steps - 1);
        os << lambda << ',';
        try {
            Network scaled = scale_loading(net, lambda);
            Solution sol = solve(scaled, make_config(scaled, o));
            double vmin = 1e300;
            for (const auto& v : sol.v) vmin = std::min(vmin, std::abs(v));
            os << (sol.feasible ? 1 : 0) << ',';
            if (sol.proximity.value)
                os << *sol.proximity.value;
            else
                os << "beyond horizon";
            os << ',' << vmin << ',' << to_string(sol.status) << ",\n";
        } catch (const std::exception& e) {
            std::string msg = e.what();
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << "0,,,error," << msg << '\n';
        }
    }
    write_output(o.out, os.str());
    return 0;
}

int cmd_stahl(const std::string& path, const RunOptions& o, int bus_id, const std::string& summary_path) {
    Network net = load_case_file(path);
    SolveConfig cfg = make_config(net, o);
    SeriesSet set = develop_germ(net, PrecisionConfig{cfg.mantissa_bits, cfg.max_degree}, cfg.variant);
    std::size_t idx = 0;
    if (bus_id == 0) {
        branch_point_diagnostics(set, &idx);
    } else {
        idx = net.index_of(bus_id);
    }
    PrecisionScope scope(set.mantissa_bits);
    const PowerSeries& c = set.v[idx];
    const int m = static_cast<int>(c.order() / 2);
    const int window = std::max<int>(8, static_cast<int>(c.order() / 5));
    FabryEstimate f = fabry_estimate(c, window);
    ZeroPoleSet zp = zeros_poles(pade_auto(c, m, m), hint_from(f));
    StahlExport ex = stahl_export(zp, f);
    write_output(o.out, ex.csv);
    if (!summary_path.empty())
        write_output(summary_path, ex.summary_json);
    else
        std::cerr << ex.summary_json << '\n';
    return 0;
}

int cmd_critical(const std::string& path, const RunOptions& o) {
    int bits = o.precision_bits > 0 ? o.precision_bits : 256;
    PrecisionScope scope(bits);
    BivariatePoly f = parse_bivariate(read_text_file(path));
    CriticalPointsResult cp = critical_points(f);
    write_output(o.out, to_json(cp).dump(2));
    return cp.converged ? 0 : kExitError;
}

int cmd_compare(const std::string& path, const RunOptions& o) {
    Network net = load_case_file(path);
    AdmittanceMatrix y(net);
    nlohmann::json j;
    std::optional<Solution> sol;
    auto t0 = std::chrono::steady_clock::now();
    try {
        sol = solve(net, make_config(net, o));
        j["helm"] = to_json(net, *sol);
    } catch (const std::exception& e) {
        j["helm"] = {{"error", e.what()}};
    }
    auto t1 = std::chrono::steady_clock::now();
    NRConfig nc;
    nc.enforce_q_limits = !o.no_q_limits;
    NRResult nr = newton_raphson(net, y, nc);
    auto t2 = std::chrono::steady_clock::now();
    j["nr"] = to_json(net, nr);
    j["timing_s"] = {{"helm", std::chrono::duration<double>(t1 - t0).count()},
                     {"nr", std::chrono::duration<double>(t2 - t1).count()}};
    if (sol && sol->feasible && nr.converged()) {
        double diff = 0.0;
        for (std::size_t i = 0; i < net.size(); ++i) diff = std::max(diff, std::abs(sol->v[i] - nr.v[i]));
        j["agreement"] = diff;
    } else {
        j["agreement"] = nullptr;
    }
    write_output(o.out, j.dump(2));
    return 0;
}

int cmd_series(const std::string& path, const RunOptions& o) {
    Network net = load_case_file(path);
    SolveConfig cfg = make_config(net, o);
    SeriesSet set = develop_germ(net, PrecisionConfig{cfg.mantissa_bits, cfg.max_degree}, cfg.variant);
    write_output(o.out, series_csv(net, set));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holomorphic embedding load flow"};
    app.require_subcommand(1);
    RunOptions opts;
    std::string path;

    auto* solve_cmd = app.add_subcommand("solve", "solve a case; exit 0 feasible, 2 infeasible, 3 inconclusive");
    solve_cmd->add_option("case", path, "case file")->required();
    add_run_options(solve_cmd, opts);

    double from = 1.0, to = 1.0;
    int steps = 1;
    auto* scan_cmd = app.add_subcommand("scan", "scale loading over a range of lambda");
    scan_cmd->add_option("case", path, "case file")->required();
    scan_cmd->add_option("--lambda-from", from)->required();
    scan_cmd->add_option("--lambda-to", to)->required();
    scan_cmd->add_option("--steps", steps)->required();
    add_run_options(scan_cmd, opts);

    int bus = 0;
    std::string summary;
    auto* stahl_cmd = app.add_subcommand("stahl", "zero-pole data of the diagonal approximant");
    stahl_cmd->add_option("case", path, "case file")->required();
    stahl_cmd->add_option("--bus", bus, "bus id (default: the bus with the closest singularity)");
    stahl_cmd->add_option("--summary", summary, "summary JSON path (default stderr)");
    add_run_options(stahl_cmd, opts);

    auto* crit_cmd = app.add_subcommand("critical", "z-critical points of a bivariate coefficient matrix");
    crit_cmd->add_option("matrix", path, "matrix file")->required();
    crit_cmd->add_option("--precision-bits", opts.precision_bits, "mantissa bits (default 256)");
    crit_cmd->add_option("--out", opts.out, "output file (default stdout)");

    auto* cmp_cmd = app.add_subcommand("compare", "HELM against Newton-Raphson from flat start");
    cmp_cmd->add_option("case", path, "case file")->required();
    add_run_options(cmp_cmd, opts);

    auto* series_cmd = app.add_subcommand("series", "dump the germ coefficients as CSV");
    series_cmd->add_option("case", path, "case file")->required();
    add_run_options(series_cmd, opts);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*solve_cmd) return cmd_solve(path, opts);
        if (*scan_cmd) return cmd_scan(path, opts, from, to, steps);
        if (*stahl_cmd) return cmd_stahl(path, opts, bus, summary);
        if (*crit_cmd) return cmd_critical(path, opts);
        if (*cmp_cmd) return cmd_compare(path, opts);
        if (*series_cmd) return cmd_series(path, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
