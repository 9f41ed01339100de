#pragma once

#include "helm/linalg.hpp"

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

using cd = std::complex<double>;

enum class BusKind { Slack, PQ, PV, ExpLoad };

/// Exponential load S(V) = s0 * |V|^(m/n), split into active and reactive parts.
struct LoadComponent {
    cd s0;
    int mp = 0;
    int np = 1;
    int mq = 0;
    int nq = 1;
};

struct Bus {
    int id = 0;
    BusKind kind = BusKind::PQ;
    cd s{0.0, 0.0};
    double p = 0.0;
    double m_set = 1.0;
    std::optional<double> q_min;
    std::optional<double> q_max;
    std::vector<LoadComponent> loads;
    cd v_ref{1.0, 0.0};
};

struct Line {
    int from = 0;
    int to = 0;
    cd z;
};

enum class NetworkErrorKind {
    DuplicateBusId,
    ZeroImpedance,
    NoSlack,
    MultipleSlacks,
    Disconnected,
    UnknownBus,
    SelfLoop,
    InvalidField,
    Malformed,
};

class NetworkError : public std::runtime_error {
public:
    NetworkError(NetworkErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    NetworkErrorKind kind() const { return kind_; }

private:
    NetworkErrorKind kind_;
};

/// Immutable validated network. Bus order is the order of appearance.
class Network {
public:
    Network(std::vector<Bus> buses, std::vector<Line> lines);

    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Line>& lines() const { return lines_; }
    std::size_t size() const { return buses_.size(); }
    std::size_t index_of(int id) const;
    std::size_t slack_index() const { return slack_; }
    const Bus& slack() const { return buses_[slack_]; }
    bool has_kind(BusKind kind) const;

private:
    std::vector<Bus> buses_;
    std::vector<Line> lines_;
    std::map<int, std::size_t> index_;
    std::size_t slack_ = 0;
};

/// Dense bus admittance matrix, indexed by bus position in the network.
class AdmittanceMatrix {
public:
    explicit AdmittanceMatrix(const Network& net);

    std::size_t size() const { return n_; }
    const cd& operator()(std::size_t i, std::size_t k) const { return y_[i * n_ + k]; }
    /// Indices k != i with nonzero Y_ik.
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_[i]; }

private:
    std::size_t n_;
    std::vector<cd> y_;
    std::vector<std::vector<std::size_t>> adj_;
};

AdmittanceMatrix build_admittance(const Network& net);

/// Admittance matrix assembled at the current working precision.
ComplexMatrix admittance_mp(const Network& net);

/// Multiplies PQ injections, PV active powers and exponential-load s0 by lambda.
Network scale_loading(const Network& net, double lambda);

/// Returns a copy where bus `id` is converted to a PQ bus with injection s.
Network convert_to_pq(const Network& net, int id, cd s);

std::string to_string(BusKind kind);

}  // namespace helm
