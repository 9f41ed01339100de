#pragma once

#include "helm/germ.hpp"
#include "helm/mismatch.hpp"
#include "helm/singularity.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace helm {

enum class SolveStatus { Converged, Infeasible, NotConverged };

std::string to_string(SolveStatus s);

struct SolveConfig {
    Variant variant = Variant::PV_A;
    int max_degree = 100;
    int mantissa_bits = 512;
    double tol = 1e-6;
    bool enforce_q_limits = true;
    /// Smallest diagonal degree tried; doubled until max_degree / 2.
    int start_degree = 8;
    /// Compute branch-point diagnostics even when the solution converges.
    bool diagnostics = true;
};

/// Sentinel-free proximity: empty when no positive-real singularity was found.
struct Proximity {
    std::optional<double> value;
    bool beyond_horizon() const { return !value.has_value(); }
};

struct Solution {
    Variant variant = Variant::PQ;
    SolveStatus status = SolveStatus::NotConverged;
    bool feasible = false;
    std::vector<cd> v;
    std::map<std::size_t, double> q;
    std::map<std::size_t, cd> i_load;
    std::vector<cd> mismatch;
    double mismatch_max = 0.0;
    int degree_used = 0;
    std::optional<cd> branch_point;
    Proximity proximity;
    BranchPointReport diagnostics;
    /// Bus ids converted to PQ at a reactive limit, in order.
    std::vector<int> switched_buses;
    std::vector<std::string> notes;
};

/// Value at z = 1 of every bus series from the diagonal approximant of degree m.
struct ContinuationPoint {
    int degree = 0;
    std::vector<cd> v;
    std::map<std::size_t, cd> s;
    std::map<std::size_t, cd> i_load;
    bool near_pole = false;
};

ContinuationPoint continue_to_one(const SeriesSet& set, int degree);

/// Branch-point diagnostics of the germ; the series with the smallest ratio
/// radius among non-slack voltages is analyzed with PA[m/m], m = order / 2.
BranchPointReport branch_point_diagnostics(const SeriesSet& set, std::size_t* bus_used = nullptr);

Proximity proximity_index(const BranchPointReport& rep);

/// Positive-real branch point at or inside z = 1 + margin.
inline constexpr double kBranchMargin = 1e-3;

Solution solve(const Network& net, const SolveConfig& cfg);

}  // namespace helm
