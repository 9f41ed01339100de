#include "helm/convergence.hpp"

#include "helm/pade.hpp"

#include <cmath>

namespace helm {

RateSummary convergence_rate(const PowerSeries& c, const Complex& z, const Complex& reference,
                             const std::vector<int>& degrees) {
    RateSummary out;
    Real ref_abs = abs(reference);
    const Real floor_v =
        boost::multiprecision::ldexp(Real(1), -(current_precision_bits() * 7) / 8) * (ref_abs > 1 ? ref_abs : Real(1));
    for (int n : degrees) {
        if (n < 1 || static_cast<std::size_t>(2 * n) > c.order()) continue;
        RationalApprox r;
        try {
            r = pade_auto(c, n, n);
        } catch (const PadeError&) {
            continue;
        }
        Real err = abs(evaluate(r, z).value - reference);
        if (err <= floor_v) {
            out.truncated = true;
            break;
        }
        RatePoint p;
        p.n = n;
        p.error = to_double(err);
        p.rate = to_double(boost::multiprecision::exp(boost::multiprecision::log(err) / n));
        out.points.push_back(p);
    }
    if (out.points.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(out.points.size());
        for (const auto& p : out.points) {
            double x = p.n;
            double y = std::log(p.rate) * p.n;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.fitted_rate = std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
    } else if (!out.points.empty()) {
        out.fitted_rate = out.points.front().rate;
    }
    return out;
}

}  // namespace helm
