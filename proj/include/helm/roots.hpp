#pragma once

#include "helm/numeric.hpp"

#include <string>
#include <vector>

namespace helm {

struct RootResult {
    std::vector<Complex> roots;
    /// |p(r)| / (||p||_1 * max(1,|r|)^deg) per root.
    std::vector<double> residuals;
    bool converged = true;
    std::string diagnostic;
};

/// Backward-error residual of r as a root of p (ascending coefficients).
double root_residual(const std::vector<Complex>& p, const Complex& r);

/// All roots of p(x) = sum p_k x^k. Aberth-Ehrlich iteration in double,
/// refined at working precision and polished by Newton. Leading coefficients
/// that are exactly zero are dropped; `trim_rel` additionally drops leading
/// coefficients below trim_rel * max|p_k|.
RootResult polynomial_roots(const std::vector<Complex>& p, double tol = 0.0, double trim_rel = 0.0);

}  // namespace helm
