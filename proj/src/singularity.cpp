#include "helm/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace helm {

namespace {

using dc = std::complex<double>;

struct LineFit {
    dc a;
    dc b;
    double rms = 0.0;
};

// Least squares y ~ a + b x with real abscissae.
LineFit fit_line(const std::vector<double>& x, const std::vector<dc>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sxx = 0;
    dc sy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sxx += x[i] * x[i];
        sy += y[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) {
        f.a = sy / n;
        f.b = 0;
    } else {
        f.b = (n * sxy - sx * sy) / det;
        f.a = (sy - f.b * sx) / n;
    }
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += std::norm(y[i] - f.a - f.b * x[i]);
    f.rms = std::sqrt(ss / n);
    return f;
}

// log|c_n| ~ a + b n + g log n over local maxima of |c_n|; returns exp(-b).
double envelope_radius(const std::vector<double>& logs, std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> idx;
    for (std::size_t n = lo; n <= hi; ++n) {
        if (!std::isfinite(logs[n])) continue;
        bool left = n == lo || !std::isfinite(logs[n - 1]) || logs[n] >= logs[n - 1];
        bool right = n == hi || !std::isfinite(logs[n + 1]) || logs[n] >= logs[n + 1];
        if (left && right) idx.push_back(n);
    }
    if (idx.size() < 3) {
        idx.clear();
        for (std::size_t n = lo; n <= hi; ++n)
            if (std::isfinite(logs[n])) idx.push_back(n);
    }
    if (idx.size() < 2) return std::numeric_limits<double>::infinity();
    // normal equations for [1, n, log n]
    double m[3][3] = {{0}}, r[3] = {0};
    const bool use_log = idx.size() >= 3;
    for (std::size_t n : idx) {
        double nn = static_cast<double>(n);
        double v[3] = {1.0, nn, use_log ? std::log(nn) : 0.0};
        for (int i = 0; i < 3; ++i) {
            r[i] += v[i] * logs[n];
            for (int j = 0; j < 3; ++j) m[i][j] += v[i] * v[j];
        }
    }
    const int dim = use_log ? 3 : 2;
    for (int i = 0; i < dim; ++i) {
        int p = i;
        for (int k = i + 1; k < dim; ++k)
            if (std::abs(m[k][i]) > std::abs(m[p][i])) p = k;
        std::swap(m[i], m[p]);
        std::swap(r[i], r[p]);
        if (std::abs(m[i][i]) < 1e-300) return std::numeric_limits<double>::infinity();
        for (int k = i + 1; k < dim; ++k) {
            double f = m[k][i] / m[i][i];
            for (int j = i; j < dim; ++j) m[k][j] -= f * m[i][j];
            r[k] -= f * r[i];
        }
    }
    double sol[3] = {0, 0, 0};
    for (int i = dim - 1; i >= 0; --i) {
        double acc = r[i];
        for (int j = i + 1; j < dim; ++j) acc -= m[i][j] * sol[j];
        sol[i] = acc / m[i][i];
    }
    return std::exp(-sol[1]);
}

std::vector<double> log_moduli(const PowerSeries& c, Real& max_abs) {
    std::vector<double> logs(c.size());
    max_abs = 0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        Real a = abs(c[n]);
        if (a > max_abs) max_abs = a;
    }
    const Real floor_v = max_abs * boost::multiprecision::ldexp(Real(1), -(current_precision_bits() * 7) / 8);
    for (std::size_t n = 0; n < c.size(); ++n) {
        Real a = abs(c[n]);
        logs[n] = (a == 0 || a <= floor_v) ? -std::numeric_limits<double>::infinity()
                                           : to_double(boost::multiprecision::log(a));
    }
    return logs;
}

}  // namespace

FabryEstimate fabry_estimate(const PowerSeries& c, int window) {
    FabryEstimate out;
    Real max_abs;
    std::vector<double> logs = log_moduli(c, max_abs);
    const std::size_t N = c.order();
    std::size_t last = N;
    while (last > 0 && !std::isfinite(logs[last])) --last;
    if (last == 0 || max_abs == 0) {
        out.finite = false;
        out.modulus = std::numeric_limits<double>::infinity();
        out.z_b = dc(out.modulus, 0.0);
        return out;
    }
    std::size_t w = static_cast<std::size_t>(std::max(window, 4));
    std::size_t lo = N > w ? N - w : 1;
    lo = std::max<std::size_t>(lo, 1);
    bool zeros = false;
    std::vector<double> x;
    std::vector<dc> y;
    for (std::size_t n = lo; n < N; ++n) {
        if (!std::isfinite(logs[n]) || !std::isfinite(logs[n + 1])) {
            zeros = true;
            continue;
        }
        // c_{n+1} / c_n computed at working precision, then rounded
        dc ratio = to_std(c[n + 1] / c[n]);
        x.push_back(1.0 / static_cast<double>(n + 1));
        y.push_back(ratio);
    }
    double dispersion = std::numeric_limits<double>::infinity();
    dc inv_zb = 0;
    if (x.size() >= 3) {
        LineFit f = fit_line(x, y);
        inv_zb = f.a;
        double mean_abs = 0;
        for (const auto& v : y) mean_abs += std::abs(v);
        mean_abs /= static_cast<double>(y.size());
        dispersion = mean_abs > 0 ? f.rms / mean_abs : std::numeric_limits<double>::infinity();
    }
    out.dispersion = dispersion;
    out.oscillating = zeros || !(dispersion < 1e-3) || std::abs(inv_zb) == 0.0;
    if (!out.oscillating) {
        out.z_b = 1.0 / inv_zb;
        out.modulus = std::abs(out.z_b);
        return out;
    }
    out.modulus = envelope_radius(logs, lo, N);
    out.z_b = dc(out.modulus, 0.0);
    return out;
}

RadiusEstimate radius_estimate(const PowerSeries& c) {
    RadiusEstimate out;
    Real max_abs;
    std::vector<double> logs = log_moduli(c, max_abs);
    const std::size_t N = c.order();
    std::size_t last = N;
    while (last > 0 && !std::isfinite(logs[last])) --last;
    if (last == 0) {
        out.infinite = true;
        out.ratio = out.root = out.root_raw = std::numeric_limits<double>::infinity();
        return out;
    }
    FabryEstimate f = fabry_estimate(c, std::max<int>(8, static_cast<int>(N / 4)));
    out.ratio = f.modulus;
    std::size_t lo = N / 2 > 0 ? N / 2 : 1;
    out.root = envelope_radius(logs, lo, N);
    out.root_raw = std::exp(-(logs[last] - (std::isfinite(logs[0]) ? logs[0] : 0.0)) / static_cast<double>(last));
    // raw successive ratios growing steadily with n: no finite singularity in sight
    auto raw = [&](std::size_t n) {
        while (n > 1 && (!std::isfinite(logs[n]) || !std::isfinite(logs[n - 1]))) --n;
        return std::exp(logs[n - 1] - logs[n]);
    };
    if (last >= 8) {
        double r2 = raw(last / 2), r3 = raw(3 * last / 4), r4 = raw(last);
        out.entire_like = r4 > 1.5 * r2 && r4 > r3 && r3 > r2;
    }
    return out;
}

std::vector<dc> density_maxima(const std::vector<dc>& pts, double h) {
    std::vector<dc> out;
    if (pts.empty()) return out;
    auto density = [&](dc z) {
        double s = 0;
        for (const auto& p : pts) s += std::exp(-std::norm(z - p) / (2 * h * h));
        return s;
    };
    std::vector<double> rho(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) rho[i] = density(pts[i]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool is_max = true;
        for (std::size_t j = 0; j < pts.size() && is_max; ++j) {
            if (j == i || std::abs(pts[j] - pts[i]) > 3 * h) continue;
            if (rho[j] > rho[i] || (rho[j] == rho[i] && j < i)) is_max = false;
        }
        if (!is_max) continue;
        // mean-shift ascent from the seed point
        dc z = pts[i];
        for (int it = 0; it < 100; ++it) {
            dc num = 0;
            double den = 0;
            for (const auto& p : pts) {
                double wgt = std::exp(-std::norm(z - p) / (2 * h * h));
                num += wgt * p;
                den += wgt;
            }
            dc next = num / den;
            bool stop = std::abs(next - z) < 1e-12 * std::max(1.0, std::abs(z));
            z = next;
            if (stop) break;
        }
        bool dup = false;
        for (const auto& q : out)
            if (std::abs(q - z) < 1e-6 * std::max(1.0, std::abs(z))) dup = true;
        if (!dup) out.push_back(z);
    }
    return out;
}

BranchPointReport analyze_branch_points(const PowerSeries& c, const ZeroPoleSet& zp, int window) {
    BranchPointReport rep;
    rep.fabry = fabry_estimate(c, window);
    std::vector<dc> poles;
    for (const auto& p : zp.poles)
        if (!p.doublet) poles.push_back(to_std(p.z));
    for (const auto& p : poles) {
        if (p.real() <= 0 || std::abs(p.imag()) >= 0.05 * std::abs(p)) continue;
        if (!rep.nearest_real_pole || std::abs(p) < std::abs(*rep.nearest_real_pole)) rep.nearest_real_pole = p;
    }
    rep.density_candidates = density_maxima(poles, kDensityBandwidth);
    if (rep.fabry.finite) {
        // an oscillating estimate only carries a modulus; compare on the circle
        for (const auto& cand : rep.density_candidates) {
            double dist = rep.fabry.oscillating ? std::abs(std::abs(cand) - rep.fabry.modulus)
                                                : std::abs(cand - rep.fabry.z_b);
            if (dist < kConfirmRadius && (!rep.confirmed || dist < std::abs(*rep.confirmed - rep.fabry.z_b)))
                rep.confirmed = cand;
        }
    }
    const dc zb = rep.fabry.z_b;
    if (rep.fabry.finite && !rep.fabry.oscillating && zb.real() > 0 && std::abs(zb.imag()) < 0.05 * std::abs(zb))
        rep.positive_real = std::abs(zb);
    else if (rep.nearest_real_pole)
        rep.positive_real = std::abs(*rep.nearest_real_pole);
    return rep;
}

SingularityHint hint_from(const FabryEstimate& f) {
    SingularityHint h;
    if (!f.finite) return h;
    if (f.oscillating) {
        h.circle_radius = f.modulus;
    } else {
        h.points.push_back(f.z_b);
        h.points.push_back(std::conj(f.z_b));
    }
    return h;
}

}  // namespace helm
