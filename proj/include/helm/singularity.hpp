#pragma once

#include "helm/pade.hpp"
#include "helm/series.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace helm {

struct FabryEstimate {
    /// Extrapolated location of the closest singularity (modulus only when oscillating).
    std::complex<double> z_b;
    double modulus = 0.0;
    /// RMS relative deviation of the windowed ratios from their 1/n fit.
    double dispersion = 0.0;
    bool oscillating = false;
    /// False when the tail is identically zero (no finite singularity).
    bool finite = true;
};

/// Ratio estimate c_n / c_{n+1} over the last `window` coefficients, with the
/// 1/n term removed by a linear fit of c_{n+1}/c_n against 1/n.
FabryEstimate fabry_estimate(const PowerSeries& c, int window);

struct RadiusEstimate {
    double ratio = 0.0;
    double root = 0.0;
    /// Raw |c_n|^(-1/n) at the last nonzero coefficient.
    double root_raw = 0.0;
    bool infinite = false;
    bool entire_like = false;
};

RadiusEstimate radius_estimate(const PowerSeries& c);

/// Local maxima of a Gaussian kernel density of the given points.
std::vector<std::complex<double>> density_maxima(const std::vector<std::complex<double>>& pts, double bandwidth);

inline constexpr double kDensityBandwidth = 0.02;
inline constexpr double kConfirmRadius = 1e-2;

struct BranchPointReport {
    FabryEstimate fabry;
    std::optional<std::complex<double>> nearest_real_pole;
    std::vector<std::complex<double>> density_candidates;
    std::optional<std::complex<double>> confirmed;
    /// Modulus of the closest singularity on the positive real axis.
    std::optional<double> positive_real;
};

/// Combines the ratio estimate with the zero-pole set of a diagonal approximant.
BranchPointReport analyze_branch_points(const PowerSeries& c, const ZeroPoleSet& zp, int window);

/// Distance hint for doublet pairing derived from a ratio estimate.
SingularityHint hint_from(const FabryEstimate& f);

}  // namespace helm
