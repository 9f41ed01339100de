#include "helm/mismatch.hpp"

#include <cmath>

namespace helm {

cd realized_load(const Bus& bus, double vmag) {
    cd s(0.0, 0.0);
    for (const auto& l : bus.loads) {
        double a = static_cast<double>(l.mp) / l.np;
        double b = static_cast<double>(l.mq) / l.nq;
        s += cd(l.s0.real() * std::pow(vmag, a), l.s0.imag() * std::pow(vmag, b));
    }
    return s;
}

cd injection(const AdmittanceMatrix& y, const std::vector<cd>& v, std::size_t i) {
    cd acc = y(i, i) * v[i];
    for (std::size_t k : y.neighbors(i)) acc += y(i, k) * v[k];
    return v[i] * std::conj(acc);
}

std::vector<cd> mismatch(const Network& net, const AdmittanceMatrix& y, const std::vector<cd>& v) {
    std::vector<cd> r(net.size(), cd(0.0, 0.0));
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Bus& b = net.buses()[i];
        cd s = injection(y, v, i);
        switch (b.kind) {
        case BusKind::Slack: break;
        case BusKind::PQ: r[i] = std::conj(b.s) - std::conj(s); break;
        case BusKind::ExpLoad: r[i] = std::conj(realized_load(b, std::abs(v[i]))) - std::conj(s); break;
        case BusKind::PV: r[i] = cd(std::abs(v[i]) - b.m_set, b.p - s.real()); break;
        }
    }
    return r;
}

double max_abs(const std::vector<cd>& r) {
    double m = 0.0;
    for (const auto& x : r) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace helm
