#include "helm/oracle.hpp"

#include "helm/mismatch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace helm {

std::string to_string(NRStatus s) {
    switch (s) {
    case NRStatus::Converged: return "converged";
    case NRStatus::MaxIterations: return "max_iterations";
    case NRStatus::SingularJacobian: return "singular_jacobian";
    case NRStatus::Diverged: return "diverged";
    }
    return "?";
}

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

double load_exponent_derivative(const Bus& b, double vm, bool reactive) {
    double s = 0.0;
    for (const auto& l : b.loads) {
        double e = reactive ? static_cast<double>(l.mq) / l.nq : static_cast<double>(l.mp) / l.np;
        double base = reactive ? l.s0.imag() : l.s0.real();
        if (e != 0.0) s += base * e * std::pow(vm, e - 1.0);
    }
    return s;
}

NRResult run_nr(const Network& net, const AdmittanceMatrix& ya, const NRConfig& cfg, std::vector<cd> v) {
    const std::size_t n = net.size();
    MatrixXcd Y(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) Y(i, k) = ya(i, k);

    std::vector<std::size_t> ang, mag;  // unknown angle buses, unknown magnitude buses
    for (std::size_t i = 0; i < n; ++i) {
        BusKind k = net.buses()[i].kind;
        if (k == BusKind::Slack) continue;
        ang.push_back(i);
        if (k == BusKind::PQ || k == BusKind::ExpLoad) mag.push_back(i);
    }
    const std::size_t na = ang.size(), nm = mag.size();

    auto spec = [&](std::size_t i, double vm) -> cd {
        const Bus& b = net.buses()[i];
        switch (b.kind) {
        case BusKind::PQ: return b.s;
        case BusKind::PV: return cd(b.p, 0.0);
        case BusKind::ExpLoad: return realized_load(b, vm);
        case BusKind::Slack: break;
        }
        return 0.0;
    };
    auto residual = [&](const VectorXcd& V, VectorXd& F) {
        VectorXcd I = Y * V;
        F.resize(static_cast<Eigen::Index>(na + nm));
        double worst = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
            std::size_t i = ang[a];
            cd s = V(i) * std::conj(I(i)) - spec(i, std::abs(V(i)));
            F(a) = s.real();
            worst = std::max(worst, std::abs(s.real()));
        }
        for (std::size_t m = 0; m < nm; ++m) {
            std::size_t i = mag[m];
            cd s = V(i) * std::conj(I(i)) - spec(i, std::abs(V(i)));
            F(na + m) = s.imag();
            worst = std::max(worst, std::abs(s.imag()));
        }
        return worst;
    };

    NRResult res;
    VectorXcd V(n);
    for (std::size_t i = 0; i < n; ++i) V(i) = v[i];
    VectorXd F;
    double worst = residual(V, F);
    res.trace.push_back(worst);
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (worst < cfg.tol) break;
        if (!std::isfinite(worst)) break;
        VectorXcd I = Y * V;
        VectorXcd Vn = V.array() / V.array().abs();
        // dS/dVa = j diag(V) conj(diag(I) - Y diag(V)); dS/dVm = diag(V) conj(Y diag(Vn)) + conj(diag(I)) diag(Vn)
        MatrixXcd dVa = MatrixXcd(Y * V.asDiagonal());
        dVa = -dVa;
        dVa.diagonal() += I;
        dVa = (cd(0, 1) * V).asDiagonal() * dVa.conjugate();
        MatrixXcd dVm = V.asDiagonal() * MatrixXcd(Y * Vn.asDiagonal()).conjugate();
        dVm.diagonal() += I.conjugate().cwiseProduct(Vn);
        MatrixXd J(static_cast<Eigen::Index>(na + nm), static_cast<Eigen::Index>(na + nm));
        for (std::size_t r = 0; r < na; ++r) {
            for (std::size_t c = 0; c < na; ++c) J(r, c) = dVa(ang[r], ang[c]).real();
            for (std::size_t c = 0; c < nm; ++c) J(r, na + c) = dVm(ang[r], mag[c]).real();
        }
        for (std::size_t r = 0; r < nm; ++r) {
            for (std::size_t c = 0; c < na; ++c) J(na + r, c) = dVa(mag[r], ang[c]).imag();
            for (std::size_t c = 0; c < nm; ++c) J(na + r, na + c) = dVm(mag[r], mag[c]).imag();
        }
        for (std::size_t m = 0; m < nm; ++m) {
            const std::size_t i = mag[m];
            const Bus& b = net.buses()[i];
            if (b.kind != BusKind::ExpLoad) continue;
            double vm = std::abs(V(i));
            std::size_t a = std::find(ang.begin(), ang.end(), i) - ang.begin();
            J(a, na + m) -= load_exponent_derivative(b, vm, false);
            J(na + m, na + m) -= load_exponent_derivative(b, vm, true);
        }
        Eigen::FullPivLU<MatrixXd> lu(J);
        lu.setThreshold(1e-13);
        if (!lu.isInvertible()) {
            res.status = NRStatus::SingularJacobian;
            res.iterations = it;
            break;
        }
        VectorXd dx = lu.solve(-F);
        for (std::size_t a = 0; a < na; ++a) {
            std::size_t i = ang[a];
            double vm = std::abs(V(i)), va = std::arg(V(i)) + dx(a);
            V(i) = std::polar(vm, va);
        }
        for (std::size_t m = 0; m < nm; ++m) {
            std::size_t i = mag[m];
            double vm = std::abs(V(i)) + dx(na + m), va = std::arg(V(i));
            V(i) = std::polar(vm, va);
        }
        worst = residual(V, F);
        res.trace.push_back(worst);
        res.iterations = it + 1;
    }
    res.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.v[i] = V(i);
    res.mismatch_max = worst;
    if (res.status != NRStatus::SingularJacobian) {
        if (!std::isfinite(worst))
            res.status = NRStatus::Diverged;
        else if (worst < cfg.tol)
            res.status = NRStatus::Converged;
        else
            res.status = NRStatus::MaxIterations;
    }
    return res;
}

}  // namespace

NRResult newton_raphson(const Network& net, const AdmittanceMatrix& y, const NRConfig& cfg) {
    if (cfg.max_iter < 1 || !(cfg.tol > 0)) throw std::invalid_argument("invalid Newton-Raphson configuration");
    std::vector<cd> v(net.size());
    if (cfg.start == NRStart::Given) {
        if (cfg.v0.size() != net.size()) throw std::invalid_argument("starting point has wrong size");
        v = cfg.v0;
    } else {
        const double vr = std::abs(net.slack().v_ref);
        for (std::size_t i = 0; i < net.size(); ++i) {
            const Bus& b = net.buses()[i];
            v[i] = b.kind == BusKind::PV ? cd(b.m_set, 0.0) : cd(vr, 0.0);
        }
    }
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Bus& b = net.buses()[i];
        if (b.kind == BusKind::Slack) v[i] = b.v_ref;
        if (b.kind == BusKind::PV) v[i] = std::polar(b.m_set, std::arg(v[i]));
    }
    NRResult res = run_nr(net, y, cfg, v);
    if (!cfg.enforce_q_limits || !res.converged()) return res;

    Network cur = net;
    std::vector<int> switched;
    for (std::size_t round = 0; round < net.size(); ++round) {
        bool changed = false;
        AdmittanceMatrix yc(cur);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const Bus b = cur.buses()[i];
            if (b.kind != BusKind::PV) continue;
            double q = injection(yc, res.v, i).imag();
            if (b.q_max && q > *b.q_max) {
                cur = convert_to_pq(cur, b.id, cd(b.p, *b.q_max));
            } else if (b.q_min && q < *b.q_min) {
                cur = convert_to_pq(cur, b.id, cd(b.p, *b.q_min));
            } else {
                continue;
            }
            switched.push_back(b.id);
            changed = true;
        }
        if (!changed) break;
        std::vector<double> trace = res.trace;
        res = run_nr(cur, AdmittanceMatrix(cur), cfg, res.v);
        res.trace.insert(res.trace.begin(), trace.begin(), trace.end());
        if (!res.converged()) break;
    }
    res.switched_buses = switched;
    return res;
}

TwoBusSolutions brute_force_two_bus(cd s, cd z_line, cd v_ref) {
    if (z_line == cd(0.0, 0.0)) throw std::invalid_argument("zero line impedance");
    TwoBusSolutions out;
    const double vr = std::abs(v_ref);
    const cd rot = vr > 0 ? v_ref / vr : cd(1.0, 0.0);
    // in the slack frame: s conj(z) = |V|^2 - V_r V
    const cd a = s * std::conj(z_line);
    const double im_v = -a.imag() / vr;
    const double disc = vr * vr - 4.0 * (im_v * im_v - a.real());
    out.discriminant = disc;
    if (disc < 0.0) return out;
    out.feasible = true;
    const double sq = std::sqrt(disc);
    for (int sign : {+1, -1}) {
        cd v(0.5 * (vr + sign * sq), im_v);
        if (std::abs(v) == 0.0) continue;
        out.roots.push_back({v * rot, sign > 0});
        if (disc == 0.0) break;
    }
    return out;
}

}  // namespace helm
