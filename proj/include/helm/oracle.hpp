#pragma once

#include "helm/network.hpp"

#include <string>
#include <vector>

namespace helm {

enum class NRStart { Flat, Given };
enum class NRStatus { Converged, MaxIterations, SingularJacobian, Diverged };

std::string to_string(NRStatus s);

struct NRConfig {
    int max_iter = 30;
    double tol = 1e-10;
    NRStart start = NRStart::Flat;
    /// Starting voltages for NRStart::Given (one per bus).
    std::vector<cd> v0;
    bool enforce_q_limits = false;
};

struct NRResult {
    NRStatus status = NRStatus::MaxIterations;
    std::vector<cd> v;
    int iterations = 0;
    /// Largest power residual after each iteration (index 0 is the start).
    std::vector<double> trace;
    double mismatch_max = 0.0;
    std::vector<int> switched_buses;
    bool converged() const { return status == NRStatus::Converged; }
};

/// Polar Newton-Raphson in double precision. PV buses keep |V| fixed; exponential
/// loads enter through their |V|-dependent power.
NRResult newton_raphson(const Network& net, const AdmittanceMatrix& y, const NRConfig& cfg);

struct TwoBusRoot {
    cd v;
    bool high_voltage = false;
};

struct TwoBusSolutions {
    bool feasible = false;
    double discriminant = 0.0;
    std::vector<TwoBusRoot> roots;
};

/// All solutions of slack (v_ref) -- line z_line -- bus with injection s.
TwoBusSolutions brute_force_two_bus(cd s, cd z_line, cd v_ref);

}  // namespace helm
