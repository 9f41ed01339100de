#pragma once

#include "helm/roots.hpp"

#include <string>
#include <vector>

namespace helm {

/// f(V, z) = sum_{i,k} a[i][k] V^i z^k.
class BivariatePoly {
public:
    BivariatePoly() = default;
    explicit BivariatePoly(std::vector<std::vector<Complex>> a);

    const std::vector<std::vector<Complex>>& coeffs() const { return a_; }
    /// Highest power of V with a nonzero row.
    int degree_v() const { return deg_v_; }
    /// Highest power of z with a nonzero entry.
    int degree_z() const { return deg_z_; }

    /// Coefficients in V (ascending) of f(., z).
    std::vector<Complex> in_v(const Complex& z) const;
    Complex evaluate(const Complex& v, const Complex& z) const;

private:
    std::vector<std::vector<Complex>> a_;
    int deg_v_ = -1;
    int deg_z_ = -1;
};

/// Reads {"rows": [[[re, im], ...], ...]}; entries may be numbers or decimal strings,
/// parsed at the current working precision.
BivariatePoly parse_bivariate(const std::string& json_text);

std::vector<Complex> derivative(const std::vector<Complex>& p);

/// Resultant of two univariate polynomials (ascending coefficients) via the Sylvester determinant.
Complex resultant(const std::vector<Complex>& p, const std::vector<Complex>& q);

struct CriticalPoint {
    Complex z;
    /// The common root of f(., z) and df/dV(., z).
    Complex v;
    /// Backward-error residual of z as a root of the discriminant polynomial.
    double residual = 0.0;
    /// |v_f - v_fV| / max(1, |v|) for the closest root pair.
    double pair_distance = 0.0;
    /// |df/dV| at v, relative to the 1-norm of the V-coefficients.
    double derivative_residual = 0.0;
};

struct CriticalPointsResult {
    std::vector<CriticalPoint> points;
    /// Discriminant roots with no common V-root (numerical artifacts).
    std::vector<Complex> rejected;
    int discriminant_degree = 0;
    int samples = 0;
    bool converged = true;
    std::string diagnostic;
};

/// z with f(V,z) = df/dV(V,z) = 0 for some V: roots of Res_V(f, f_V) / a_d,
/// interpolated from samples on |z| = 2 and filtered by a common-root check.
CriticalPointsResult critical_points(const BivariatePoly& f);

/// Roots in V of f(V, 1).
RootResult solutions_at_z1(const BivariatePoly& f);

}  // namespace helm
