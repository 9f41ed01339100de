#pragma once

#include "helm/roots.hpp"
#include "helm/series.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

/// num / den with den[0] = 1.
struct RationalApprox {
    std::vector<Complex> num;
    std::vector<Complex> den;
    int L = 0;
    int M = 0;
    /// Smallest pivot ratio of the denominator solve (1 when M = 0).
    double pivot_ratio = 1.0;

    /// Maclaurin coefficients of num/den through `order`.
    PowerSeries expand(std::size_t order) const;
};

class PadeError : public std::runtime_error {
public:
    PadeError(const std::string& what, double pivot_ratio) : std::runtime_error(what), pivot_ratio_(pivot_ratio) {}
    double pivot_ratio() const { return pivot_ratio_; }

private:
    double pivot_ratio_;
};

/// PA[L/M] from the Toeplitz system on orders L+1..L+M.
RationalApprox pade_lm(const PowerSeries& c, int L, int M);

/// pade_lm with fallback on degenerate table entries: (L+1,M), then (L,M+1);
/// throws PadeError if all three are singular. `note` receives any fallback taken.
RationalApprox pade_auto(const PowerSeries& c, int L, int M, std::string* note = nullptr);

/// c_0 + a_0 z / (1 + a_1 z / (1 + a_2 z / ...)).
struct CFraction {
    Complex head;
    std::vector<Complex> partial_numerators;
    /// True when the remaining series vanished: the fraction is exact.
    bool terminated = false;
    /// Set when a zero leading coefficient cut the expansion short.
    std::string diagnostic;
};

CFraction viskovatov(const PowerSeries& c, int depth);

/// A_k / B_k, k = 0, 1, ...: convergent k has numerator degree ceil(k/2) and
/// denominator degree floor(k/2); convergent 2M equals PA[M/M].
RationalApprox convergent(const CFraction& cf, int k);

struct Evaluation {
    Complex value;
    bool near_pole = false;
};

Evaluation evaluate(const RationalApprox& r, const Complex& z);

struct RootInfo {
    Complex z;
    double residual = 0.0;
    bool doublet = false;
};

/// Points where the germ is believed singular, or a circle |z| = R when only
/// the radius is known. Used to scale the doublet pairing radius.
struct SingularityHint {
    std::vector<std::complex<double>> points;
    std::optional<double> circle_radius;

    double distance(std::complex<double> z) const;
};

struct ZeroPoleSet {
    std::vector<RootInfo> zeros;
    std::vector<RootInfo> poles;
    /// (zero index, pole index) of each Froissart doublet.
    std::vector<std::pair<std::size_t, std::size_t>> doublets;
    bool converged = true;
    std::string diagnostic;
};

/// Relative pairing radius of a Froissart doublet.
inline constexpr double kDoubletRadius = 1e-3;

ZeroPoleSet zeros_poles(const RationalApprox& r, const SingularityHint& hint = {});

}  // namespace helm
