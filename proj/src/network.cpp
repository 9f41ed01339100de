#include "helm/network.hpp"

#include <numeric>
#include <queue>

namespace helm {

Network::Network(std::vector<Bus> buses, std::vector<Line> lines)
    : buses_(std::move(buses)), lines_(std::move(lines)) {
    std::size_t slack_count = 0;
    for (std::size_t i = 0; i < buses_.size(); ++i) {
        const Bus& b = buses_[i];
        if (!index_.emplace(b.id, i).second)
            throw NetworkError(NetworkErrorKind::DuplicateBusId, "duplicate bus id " + std::to_string(b.id));
        switch (b.kind) {
        case BusKind::Slack:
            ++slack_count;
            slack_ = i;
            if (b.v_ref.imag() != 0.0 || b.v_ref.real() <= 0.0)
                throw NetworkError(NetworkErrorKind::InvalidField,
                                   "slack bus " + std::to_string(b.id) + ": v_ref must be real and positive");
            break;
        case BusKind::PV:
            if (!(b.m_set > 0.0))
                throw NetworkError(NetworkErrorKind::InvalidField,
                                   "pv bus " + std::to_string(b.id) + ": m_set must be positive");
            break;
        case BusKind::ExpLoad:
            for (const auto& l : b.loads) {
                if (l.np < 1 || l.nq < 1 || l.mp < 0 || l.mq < 0 || std::gcd(l.mp, l.np) != 1 ||
                    std::gcd(l.mq, l.nq) != 1)
                    throw NetworkError(NetworkErrorKind::InvalidField,
                                       "exp_load bus " + std::to_string(b.id) + ": exponents must be coprime with n >= 1");
            }
            break;
        case BusKind::PQ:
            break;
        }
        if (b.q_min && b.q_max && *b.q_min > *b.q_max)
            throw NetworkError(NetworkErrorKind::InvalidField,
                               "bus " + std::to_string(b.id) + ": q_min exceeds q_max");
    }
    if (slack_count == 0) throw NetworkError(NetworkErrorKind::NoSlack, "no slack bus");
    if (slack_count > 1) throw NetworkError(NetworkErrorKind::MultipleSlacks, "multiple slack buses");

    std::vector<std::vector<std::size_t>> adj(buses_.size());
    for (const Line& l : lines_) {
        if (l.from == l.to)
            throw NetworkError(NetworkErrorKind::SelfLoop, "line connects bus " + std::to_string(l.from) + " to itself");
        if (l.z == cd(0.0, 0.0))
            throw NetworkError(NetworkErrorKind::ZeroImpedance, "zero impedance on line " + std::to_string(l.from) +
                                                                    "-" + std::to_string(l.to));
        auto f = index_.find(l.from);
        auto t = index_.find(l.to);
        if (f == index_.end() || t == index_.end())
            throw NetworkError(NetworkErrorKind::UnknownBus, "line references unknown bus");
        adj[f->second].push_back(t->second);
        adj[t->second].push_back(f->second);
    }
    std::vector<bool> seen(buses_.size(), false);
    std::queue<std::size_t> q;
    q.push(slack_);
    seen[slack_] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (std::size_t v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                q.push(v);
            }
    }
    if (reached != buses_.size()) throw NetworkError(NetworkErrorKind::Disconnected, "disconnected network");
}

std::size_t Network::index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw NetworkError(NetworkErrorKind::UnknownBus, "unknown bus " + std::to_string(id));
    return it->second;
}

bool Network::has_kind(BusKind kind) const {
    for (const auto& b : buses_)
        if (b.kind == kind) return true;
    return false;
}

AdmittanceMatrix::AdmittanceMatrix(const Network& net)
    : n_(net.size()), y_(n_ * n_, cd(0.0, 0.0)), adj_(n_) {
    for (const Line& l : net.lines()) {
        std::size_t i = net.index_of(l.from);
        std::size_t k = net.index_of(l.to);
        cd y = 1.0 / l.z;
        y_[i * n_ + i] += y;
        y_[k * n_ + k] += y;
        y_[i * n_ + k] -= y;
        y_[k * n_ + i] -= y;
    }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k)
            if (k != i && y_[i * n_ + k] != cd(0.0, 0.0)) adj_[i].push_back(k);
}

AdmittanceMatrix build_admittance(const Network& net) { return AdmittanceMatrix(net); }

ComplexMatrix admittance_mp(const Network& net) {
    ComplexMatrix y(net.size(), net.size());
    for (const Line& l : net.lines()) {
        std::size_t i = net.index_of(l.from);
        std::size_t k = net.index_of(l.to);
        Complex g = Complex(1) / Complex(l.z);
        y(i, i) += g;
        y(k, k) += g;
        y(i, k) -= g;
        y(k, i) -= g;
    }
    return y;
}

Network scale_loading(const Network& net, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("loading factor must be positive");
    std::vector<Bus> buses = net.buses();
    for (Bus& b : buses) {
        b.s *= lambda;
        b.p *= lambda;
        for (auto& l : b.loads) l.s0 *= lambda;
    }
    return Network(std::move(buses), net.lines());
}

Network convert_to_pq(const Network& net, int id, cd s) {
    std::vector<Bus> buses = net.buses();
    Bus& b = buses[net.index_of(id)];
    b.kind = BusKind::PQ;
    b.s = s;
    return Network(std::move(buses), net.lines());
}

std::string to_string(BusKind kind) {
    switch (kind) {
    case BusKind::Slack: return "slack";
    case BusKind::PQ: return "pq";
    case BusKind::PV: return "pv";
    case BusKind::ExpLoad: return "exp_load";
    }
    return "?";
}

}  // namespace helm
