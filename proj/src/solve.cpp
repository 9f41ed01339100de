#include "helm/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace helm {

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NotConverged: return "not_converged";
    }
    return "?";
}

namespace {

cd evaluate_at_one(const PowerSeries& c, int degree, bool& near_pole) {
    // a tail at rounding-noise level has no usable Pade structure; its plain sum is exact to precision
    Real tail(0);
    for (std::size_t n = 1; n < c.size(); ++n) tail += abs(c[n]);
    Real scale = abs(c[0]);
    if (scale < 1) scale = 1;
    if (tail <= scale * boost::multiprecision::ldexp(Real(1), -current_precision_bits() / 2))
        return to_std(c.evaluate(Complex(1)));
    const int m = std::min<int>(degree, static_cast<int>(c.order() / 2));
    RationalApprox r;
    try {
        r = pade_auto(c, m, m);
    } catch (const PadeError&) {
        // degenerate table entry: this degree yields no value
        near_pole = true;
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
    Evaluation e = evaluate(r, Complex(1));
    near_pole = near_pole || e.near_pole;
    return to_std(e.value);
}

std::vector<int> degree_schedule(int start, int max_degree) {
    const int top = std::max(1, max_degree / 2);
    std::vector<int> out;
    for (int d = std::max(1, start); d < top; d *= 2) out.push_back(d);
    out.push_back(top);
    if (out.size() < 2 && top > 1) out.insert(out.begin(), top - 1);
    return out;
}

int fabry_window(std::size_t order) { return std::max<int>(8, static_cast<int>(order / 5)); }

Solution solve_once(const Network& net, const SolveConfig& cfg) {
    Solution sol;
    sol.variant = cfg.variant;
    PrecisionConfig pc{cfg.mantissa_bits, cfg.max_degree};
    SeriesSet set = develop_germ(net, pc, cfg.variant);
    AdmittanceMatrix y(net);

    ContinuationPoint last;
    bool converged = false;
    for (int d : degree_schedule(cfg.start_degree, cfg.max_degree)) {
        ContinuationPoint cp = continue_to_one(set, d);
        const bool usable = std::all_of(cp.v.begin(), cp.v.end(), [](cd x) { return std::isfinite(std::abs(x)); });
        if (!usable && !last.v.empty()) continue;
        std::vector<cd> mm = mismatch(net, y, cp.v);
        double mmax = max_abs(mm);
        if (converged) {
            // already accepted: keep higher degrees only while they improve the mismatch
            if (!usable || cp.near_pole || !(mmax < sol.mismatch_max)) break;
            last = cp;
            sol.mismatch = std::move(mm);
            sol.mismatch_max = mmax;
            continue;
        }
        bool agree = false;
        if (mmax < cfg.tol && !cp.near_pole && d > 1) {
            // degree stability: the neighbouring diagonal approximant must give the same voltages
            ContinuationPoint nb = continue_to_one(set, d - 1);
            double diff = 0.0;
            for (std::size_t i = 0; i < cp.v.size(); ++i) diff = std::max(diff, std::abs(cp.v[i] - nb.v[i]));
            agree = diff < cfg.tol && !nb.near_pole;
        }
        last = cp;
        sol.mismatch = std::move(mm);
        sol.mismatch_max = mmax;
        if (agree) converged = true;
    }
    sol.v = last.v;
    sol.degree_used = last.degree;
    sol.i_load = last.i_load;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.buses()[i].kind != BusKind::PV) continue;
        auto it = last.s.find(i);
        sol.q[i] = it != last.s.end() ? it->second.imag() : injection(y, last.v, i).imag();
    }
    if (cfg.diagnostics || !converged) {
        sol.diagnostics = branch_point_diagnostics(set);
        const auto& rep = sol.diagnostics;
        if (rep.confirmed)
            sol.branch_point = *rep.confirmed;
        else if (rep.fabry.finite)
            sol.branch_point = rep.fabry.z_b;
        sol.proximity = proximity_index(rep);
    }
    if (converged) {
        sol.status = SolveStatus::Converged;
        sol.feasible = true;
    } else if (sol.diagnostics.positive_real && *sol.diagnostics.positive_real <= 1.0 + kBranchMargin) {
        sol.status = SolveStatus::Infeasible;
    } else {
        sol.status = SolveStatus::NotConverged;
        sol.notes.push_back("approximants did not stabilize and no positive-real branch point lies within z <= 1");
    }
    return sol;
}

}  // namespace

ContinuationPoint continue_to_one(const SeriesSet& set, int degree) {
    PrecisionScope scope(set.mantissa_bits);
    ContinuationPoint cp;
    cp.degree = degree;
    cp.v.resize(set.v.size());
    for (std::size_t i = 0; i < set.v.size(); ++i) cp.v[i] = evaluate_at_one(set.v[i], degree, cp.near_pole);
    for (const auto& [i, s] : set.s) cp.s[i] = evaluate_at_one(s, degree, cp.near_pole);
    for (const auto& [i, x] : set.i_load) cp.i_load[i] = evaluate_at_one(x, degree, cp.near_pole);
    return cp;
}

BranchPointReport branch_point_diagnostics(const SeriesSet& set, std::size_t* bus_used) {
    PrecisionScope scope(set.mantissa_bits);
    std::optional<std::size_t> best;
    double best_mod = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.v.size(); ++i) {
        const PowerSeries& c = set.v[i];
        FabryEstimate f = fabry_estimate(c, fabry_window(c.order()));
        if (!f.finite) continue;
        if (!best || f.modulus < best_mod) {
            best = i;
            best_mod = f.modulus;
        }
    }
    if (!best) {
        BranchPointReport rep;
        rep.fabry.finite = false;
        rep.fabry.modulus = std::numeric_limits<double>::infinity();
        return rep;
    }
    if (bus_used) *bus_used = *best;
    const PowerSeries& c = set.v[*best];
    FabryEstimate f = fabry_estimate(c, fabry_window(c.order()));
    // highest usable diagonal entry, stepping down past degenerate ones
    ZeroPoleSet zp;
    for (int m = static_cast<int>(c.order() / 2); m >= 1; m = m * 3 / 4) {
        try {
            zp = zeros_poles(pade_auto(c, m, m), hint_from(f));
            break;
        } catch (const PadeError&) {
        }
    }
    return analyze_branch_points(c, zp, fabry_window(c.order()));
}

Proximity proximity_index(const BranchPointReport& rep) {
    Proximity p;
    if (rep.positive_real) p.value = *rep.positive_real - 1.0;
    return p;
}

Solution solve(const Network& net, const SolveConfig& cfg) {
    Network cur = net;
    std::vector<int> switched;
    for (std::size_t round = 0; round <= net.size(); ++round) {
        Solution sol = solve_once(cur, cfg);
        sol.switched_buses = switched;
        if (!sol.feasible || !cfg.enforce_q_limits) return sol;
        bool changed = false;
        for (const auto& [i, q] : sol.q) {
            const int id = cur.buses()[i].id;
            if (auto dir = q_limit_switch(cur, id, q)) {
                cur = convert_to_pq(cur, dir->bus_id, dir->s);
                switched.push_back(dir->bus_id);
                sol.notes.push_back("bus " + std::to_string(dir->bus_id) + " fixed at reactive limit");
                changed = true;
            }
        }
        if (!changed) return sol;
    }
    throw std::runtime_error("reactive-limit switching did not settle");
}

}  // namespace helm
