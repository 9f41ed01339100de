#pragma once

#include "helm/series.hpp"

#include <vector>

namespace helm {

struct RatePoint {
    int n = 0;
    double error = 0.0;
    /// error^(1/n)
    double rate = 0.0;
};

struct RateSummary {
    std::vector<RatePoint> points;
    /// exp of the slope of log(error) against n.
    double fitted_rate = 0.0;
    /// True when the sequence was cut at the precision floor.
    bool truncated = false;
};

/// Empirical geometric rate of |f(z) - [n/n](z)| for each n in `degrees`.
RateSummary convergence_rate(const PowerSeries& c, const Complex& z, const Complex& reference,
                             const std::vector<int>& degrees);

}  // namespace helm
