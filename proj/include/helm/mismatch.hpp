#pragma once

#include "helm/network.hpp"

#include <vector>

namespace helm {

/// Power drawn by the exponential loads of a bus at voltage magnitude |v|.
cd realized_load(const Bus& bus, double vmag);

/// Per-bus residual: conj(S_i) - conj(V_i) sum_k Y_ik V_k for PQ and
/// exponential-load buses (with the load realized at |V_i|); for PV buses
/// (|V_i| - M_i) + j (P_i - Re S_i). The slack entry is zero.
std::vector<cd> mismatch(const Network& net, const AdmittanceMatrix& y, const std::vector<cd>& v);

double max_abs(const std::vector<cd>& r);

/// Complex power injected at bus i: V_i conj(sum_k Y_ik V_k).
cd injection(const AdmittanceMatrix& y, const std::vector<cd>& v, std::size_t i);

}  // namespace helm
