#include "helm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace helm {

namespace {

using dc = std::complex<double>;

// p(z)/p'(z) in double, evaluating the reversed polynomial when |z| > 1.
dc newton_ratio(const std::vector<dc>& a, dc z) {
    const std::size_t n = a.size() - 1;
    if (std::abs(z) <= 1.0) {
        dc p = a[n], dp = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + a[k];
        }
        return p / dp;
    }
    dc y = 1.0 / z;
    dc q = a[0], dq = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        dq = dq * y + q;
        q = q * y + a[k];
    }
    return z / (static_cast<double>(n) - y * dq / q);
}

// Starting points on circles given by the upper convex hull of (k, log|a_k|).
std::vector<dc> initial_guesses(const std::vector<dc>& a) {
    const std::size_t n = a.size() - 1;
    std::vector<std::size_t> hull;
    std::vector<double> lg(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        lg[k] = std::abs(a[k]) > 0 ? std::log(std::abs(a[k])) : -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= n; ++k) {
        if (!std::isfinite(lg[k])) continue;
        while (hull.size() >= 2) {
            std::size_t i = hull[hull.size() - 2], j = hull.back();
            double cross = (lg[j] - lg[i]) * static_cast<double>(k - i) - (lg[k] - lg[i]) * static_cast<double>(j - i);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(k);
    }
    std::vector<dc> z;
    z.reserve(n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        std::size_t i = hull[h], j = hull[h + 1];
        std::size_t cnt = j - i;
        double u = std::exp((lg[i] - lg[j]) / static_cast<double>(cnt));
        for (std::size_t t = 0; t < cnt; ++t) {
            double ang = two_pi * static_cast<double>(t) / static_cast<double>(cnt) +
                         two_pi * static_cast<double>(h) / static_cast<double>(n) + 0.7;
            z.push_back(std::polar(u, ang));
        }
    }
    return z;
}

std::vector<dc> aberth_double(const std::vector<dc>& a) {
    const std::size_t n = a.size() - 1;
    std::vector<dc> z = initial_guesses(a);
    std::vector<bool> done(n, false);
    const double eps = 4.0 * std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 500; ++it) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            dc ratio = newton_ratio(a, z[i]);
            if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) {
                done[i] = true;
                continue;
            }
            dc s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            dc w = ratio / (1.0 - ratio * s);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
            z[i] -= w;
            if (std::abs(w) <= eps * std::abs(z[i]))
                done[i] = true;
            else
                all = false;
        }
        if (all) break;
    }
    return z;
}

void horner_with_derivative(const std::vector<Complex>& a, const Complex& z, Complex& p, Complex& dp) {
    const std::size_t n = a.size() - 1;
    p = a[n];
    dp = Complex();
    for (std::size_t k = n; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[k];
    }
}

// Aberth iteration at the current precision; a root is done once |p(z)| is rounding noise.
void aberth_mp(const std::vector<Complex>& a, std::vector<Complex>& z, int bits) {
    const std::size_t n = a.size() - 1;
    std::vector<bool> done(n, false);
    std::vector<Real> abs_a(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) abs_a[k] = abs(a[k]);
    const Real noise = boost::multiprecision::ldexp(Real(4 * static_cast<long>(n + 1)), -bits);
    const Real eps = boost::multiprecision::ldexp(Real(1), -(bits - 8));
    for (int it = 0; it < 60; ++it) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            Complex pv, dpv;
            horner_with_derivative(a, z[i], pv, dpv);
            Real az0 = abs(z[i]);
            Real bound(0);
            for (std::size_t k = abs_a.size(); k-- > 0;) bound = bound * az0 + abs_a[k];
            if (abs(pv) <= noise * bound) {
                done[i] = true;
                continue;
            }
            Complex s;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s += Complex(1) / (z[i] - z[j]);
            Complex w;
            if (dpv.is_zero()) {
                w = -(Complex(1) / s);
            } else {
                Complex ratio = pv / dpv;
                w = ratio / (Complex(1) - ratio * s);
            }
            z[i] -= w;
            Real az = abs(z[i]);
            if (abs(w) <= eps * (az > 0 ? az : Real(1)))
                done[i] = true;
            else
                all = false;
        }
        if (all) break;
    }
}

}  // namespace

double root_residual(const std::vector<Complex>& p, const Complex& r) {
    Complex v;
    Real norm1(0);
    for (std::size_t k = p.size(); k-- > 0;) {
        v = v * r + p[k];
        norm1 += abs(p[k]);
    }
    if (norm1 == 0) return 0.0;
    Real ar = abs(r);
    Real scale = ar > 1 ? Real(boost::multiprecision::pow(ar, static_cast<int>(p.size() - 1))) : Real(1);
    return to_double(abs(v) / (norm1 * scale));
}

RootResult polynomial_roots(const std::vector<Complex>& p_in, double tol, double trim_rel) {
    RootResult out;
    std::vector<Complex> p = p_in;
    Real mx(0);
    for (const auto& c : p) {
        Real a = abs(c);
        if (a > mx) mx = a;
    }
    Real cut = mx * Real(trim_rel);
    while (!p.empty() && (p.back().is_zero() || abs(p.back()) <= cut)) p.pop_back();
    if (p.size() <= 1) return out;
    std::size_t zeros_at_origin = 0;
    while (zeros_at_origin < p.size() - 1 && p[zeros_at_origin].is_zero()) ++zeros_at_origin;
    for (std::size_t k = 0; k < zeros_at_origin; ++k) out.roots.emplace_back();
    std::vector<Complex> a(p.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin), p.end());
    const std::size_t n = a.size() - 1;
    const int bits = current_precision_bits();
    if (tol <= 0.0) tol = std::pow(2.0, -0.5 * bits);

    if (n > 0) {
        // normalized double copy, scaled by the largest modulus to stay in range
        Real amax(0);
        for (const auto& c : a) {
            Real v = abs(c);
            if (v > amax) amax = v;
        }
        std::vector<dc> ad(n + 1);
        for (std::size_t k = 0; k <= n; ++k) ad[k] = to_std(a[k] / amax);
        std::vector<dc> z0 = aberth_double(ad);
        std::vector<Complex> z(z0.begin(), z0.end());

        // Aberth refinement on a precision ladder ending at working precision
        std::vector<int> ladder;
        for (int b = 128; b < bits; b *= 2) ladder.push_back(b);
        ladder.push_back(bits);
        for (int b : ladder) {
            PrecisionScope scope(b);
            std::vector<Complex> ab(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) ab[k] = with_precision(a[k], b);
            for (auto& r : z) r = with_precision(r, b);
            aberth_mp(ab, z, b);
        }
        // Newton polish
        for (auto& r : z) {
            for (int k = 0; k < 2; ++k) {
                Complex pv, dpv;
                horner_with_derivative(a, r, pv, dpv);
                if (dpv.is_zero()) break;
                Complex nr = r - pv / dpv;
                if (root_residual(a, nr) <= root_residual(a, r))
                    r = std::move(nr);
                else
                    break;
            }
        }
        for (auto& r : z) out.roots.push_back(std::move(r));
    }
    for (const auto& r : out.roots) {
        double res = root_residual(p, r);
        out.residuals.push_back(res);
        if (!(res <= tol)) out.converged = false;
    }
    if (!out.converged) {
        double worst = *std::max_element(out.residuals.begin(), out.residuals.end());
        out.diagnostic = "root finder did not reach tolerance; worst residual " + std::to_string(worst);
    }
    return out;
}

}  // namespace helm
