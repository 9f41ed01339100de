#pragma once

#include "helm/network.hpp"
#include "helm/series.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

enum class Variant { PQ, PV_A, PV_B, PV_REFLECT };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct PrecisionConfig {
    int mantissa_bits = 512;
    int max_degree = 100;
};

/// 512 bits up to degree 200, 3328 bits beyond.
int default_precision_bits(int max_degree);

class GermError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Germs at z = 0 of all bus unknowns; every map is keyed by bus index.
struct SeriesSet {
    Variant variant = Variant::PQ;
    int mantissa_bits = 0;
    std::vector<PowerSeries> v;
    std::vector<PowerSeries> d;
    std::map<std::size_t, PowerSeries> vbar;
    std::map<std::size_t, PowerSeries> dbar;
    std::map<std::size_t, PowerSeries> s;
    std::map<std::size_t, PowerSeries> i_load;
    /// max over PV buses and n >= 1 of |Re s_n| / max(1, |s_n|).
    double real_q_residual = 0.0;
    /// Smallest pivot ratio of the stage factorization.
    double stage_pivot_ratio = 0.0;
};

/// Tolerance 10^(-0.25 * bits * log10 2) for the reality of Q coefficients.
double real_q_tolerance(int mantissa_bits);

/// Load current I = kappa * V^(m/2n) * W^(1 - m/2n) developed order by order,
/// where W is the series with coefficients conj(d_k). For m = n = 1 the
/// quadratic recursion I^2 = kappa^2 V W is used directly.
class ExpLoadCurrent {
public:
    ExpLoadCurrent(Complex kappa, int m, int n, const Real& v_ref);

    /// Produces x_k for k = size(); needs c[0..k] and w[0..k].
    const Complex& next(const std::vector<Complex>& c, const std::vector<Complex>& w);
    std::size_t size() const { return x_.size(); }
    const std::vector<Complex>& coeffs() const { return x_; }

private:
    Complex kappa_;
    bool quadratic_;
    MillerPower vpow_;
    MillerPower wpow_;
    std::vector<Complex> x_;
};

/// Coefficient x_k of the current of one load component. c and d are the
/// voltage and reciprocal prefixes, x the current prefix x_0..x_{k-1}.
Complex exp_load_current_next(const std::vector<Complex>& c, const std::vector<Complex>& d,
                              const std::vector<Complex>& x, const Complex& kappa, int m, int n, std::size_t k);

/// Germ for PQ-only networks.
SeriesSet germ_pq(const Network& net, const PrecisionConfig& cfg);
/// PV buses through the auxiliary conjugate series with real-valued Q.
SeriesSet germ_pv_a(const Network& net, const PrecisionConfig& cfg);
/// PV buses through the simultaneous V / conjugate-V stage system.
SeriesSet germ_pv_b(const Network& net, const PrecisionConfig& cfg);
/// Reactive-power elimination by reflection; kept only to exhibit its failure.
SeriesSet germ_pv_reflection(const Network& net, const PrecisionConfig& cfg);
/// Networks with exponential loads, with PV buses handled by `pv_variant`.
SeriesSet germ_exp(const Network& net, const PrecisionConfig& cfg, Variant pv_variant = Variant::PV_A);

/// Dispatches on the variant; PQ and exponential-load buses are accepted by all variants.
SeriesSet develop_germ(const Network& net, const PrecisionConfig& cfg, Variant variant);

struct QLimitDirective {
    int bus_id;
    cd s;
};

/// Directive to rerun with a PV bus fixed at its violated reactive limit.
std::optional<QLimitDirective> q_limit_switch(const Network& net, int bus_id, double q_at_one);

}  // namespace helm
