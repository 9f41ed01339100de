#pragma once

#include "helm/case_io.hpp"
#include "helm/network.hpp"
#include "helm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

namespace helm_test {

using helm::cd;

inline std::string data_path(const std::string& name) { return std::string(HELM_DATA_DIR) + "/" + name; }

inline helm::Network load(const std::string& name) { return helm::load_case_file(data_path(name)); }

/// Power-flow residuals computed straight from the line list, without the library's
/// admittance or mismatch code. PQ: |S - S_calc|; exponential loads: same with the
/// load realized at |V|; PV: max(||V|-M|, |P - P_calc|).
struct Residuals {
    std::vector<double> per_bus;
    std::vector<double> pv_magnitude;
    std::vector<double> pv_active;
    double max = 0.0;
};

inline Residuals independent_residuals(const helm::Network& net, const std::vector<cd>& v) {
    const std::size_t n = net.size();
    std::vector<cd> current(n, cd(0.0, 0.0));
    for (const auto& line : net.lines()) {
        std::size_t a = net.index_of(line.from), b = net.index_of(line.to);
        cd i_ab = (v[a] - v[b]) / line.z;
        current[a] += i_ab;
        current[b] -= i_ab;
    }
    Residuals r;
    r.per_bus.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& bus = net.buses()[i];
        cd s_calc = v[i] * std::conj(current[i]);
        double vm = std::abs(v[i]);
        switch (bus.kind) {
        case helm::BusKind::Slack:
            break;
        case helm::BusKind::PQ:
            r.per_bus[i] = std::abs(bus.s - s_calc);
            break;
        case helm::BusKind::ExpLoad: {
            cd load(0.0, 0.0);
            for (const auto& l : bus.loads)
                load += cd(l.s0.real() * std::pow(vm, double(l.mp) / l.np), l.s0.imag() * std::pow(vm, double(l.mq) / l.nq));
            r.per_bus[i] = std::abs(load - s_calc);
            break;
        }
        case helm::BusKind::PV: {
            double dm = std::abs(vm - bus.m_set), dp = std::abs(bus.p - s_calc.real());
            r.pv_magnitude.push_back(dm);
            r.pv_active.push_back(dp);
            r.per_bus[i] = std::max(dm, dp);
            break;
        }
        }
        r.max = std::max(r.max, r.per_bus[i]);
    }
    return r;
}

inline double max_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Loading factor at the fold of the branch that starts at the lightly loaded
/// solution, found by Newton-Raphson continuation with step halving. The
/// branch is tracked by warm starts; a jump larger than `jump` counts as a loss.
struct LambdaStar {
    double lambda = 0.0;
    double bracket = 0.0;
    std::vector<cd> v;
    /// (lambda, voltages) along the tracked branch.
    std::vector<std::pair<double, std::vector<cd>>> path;
};

inline LambdaStar lambda_star(const helm::Network& base, double resolution, double step0 = 0.1, double jump = 0.2) {
    LambdaStar out;
    double lam = 1e-3, step = step0;
    {
        helm::Network n = helm::scale_loading(base, lam);
        helm::NRConfig c;
        auto r = helm::newton_raphson(n, helm::AdmittanceMatrix(n), c);
        if (!r.converged()) return out;
        out.v = r.v;
        out.path.push_back({lam, r.v});
    }
    while (step > resolution) {
        helm::Network n = helm::scale_loading(base, lam + step);
        helm::NRConfig c;
        c.start = helm::NRStart::Given;
        c.v0 = out.v;
        c.max_iter = 50;
        auto r = helm::newton_raphson(n, helm::AdmittanceMatrix(n), c);
        if (r.converged() && max_diff(r.v, out.v) < jump) {
            lam += step;
            out.v = r.v;
            out.path.push_back({lam, r.v});
        } else {
            step /= 2;
        }
    }
    out.lambda = lam;
    out.bracket = 2 * step;
    return out;
}

/// Warm-started solution on the tracked branch at loading `lambda` (below the fold).
inline helm::NRResult branch_solution(const helm::Network& base, const LambdaStar& ls, double lambda) {
    std::vector<cd> start = ls.path.front().second;
    for (const auto& [l, v] : ls.path)
        if (l <= lambda) start = v;
    helm::Network n = helm::scale_loading(base, lambda);
    helm::NRConfig c;
    c.start = helm::NRStart::Given;
    c.v0 = start;
    c.max_iter = 50;
    return helm::newton_raphson(n, helm::AdmittanceMatrix(n), c);
}

/// Random connected network: a spanning tree plus optional chords, slack first.
struct RandomNetworkSpec {
    int buses = 4;
    bool cycle = false;
    double pv_fraction = 0.0;
    bool zero_injection = false;
    double v_ref = 1.0;
};

inline helm::Network random_network(std::mt19937& rng, const RandomNetworkSpec& spec) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<helm::Bus> buses;
    for (int i = 0; i < spec.buses; ++i) {
        helm::Bus b;
        b.id = i + 1;
        if (i == 0) {
            b.kind = helm::BusKind::Slack;
            b.v_ref = spec.v_ref;
        } else if (u(rng) < spec.pv_fraction) {
            b.kind = helm::BusKind::PV;
            b.p = spec.zero_injection ? 0.0 : 0.1 + 0.4 * u(rng);
            b.m_set = spec.zero_injection ? spec.v_ref : 0.98 + 0.06 * u(rng);
        } else {
            b.kind = helm::BusKind::PQ;
            b.s = spec.zero_injection ? cd(0.0, 0.0) : cd(-(0.1 + 0.5 * u(rng)), -(0.05 + 0.25 * u(rng)));
        }
        buses.push_back(b);
    }
    auto impedance = [&] { return cd(0.01 + 0.05 * u(rng), 0.05 + 0.25 * u(rng)); };
    std::vector<helm::Line> lines;
    for (int i = 1; i < spec.buses; ++i) {
        int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
        lines.push_back({parent + 1, i + 1, impedance()});
    }
    if (spec.cycle && spec.buses > 2) {
        // close a loop between two buses not already joined
        for (int tries = 0; tries < 50; ++tries) {
            int a = std::uniform_int_distribution<int>(1, spec.buses)(rng);
            int b = std::uniform_int_distribution<int>(1, spec.buses)(rng);
            if (a == b) continue;
            bool exists = std::any_of(lines.begin(), lines.end(), [&](const helm::Line& l) {
                return (l.from == a && l.to == b) || (l.from == b && l.to == a);
            });
            if (exists) continue;
            lines.push_back({a, b, impedance()});
            break;
        }
    }
    return helm::Network(buses, lines);
}

}  // namespace helm_test
