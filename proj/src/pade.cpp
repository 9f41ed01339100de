#include "helm/pade.hpp"

#include "helm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace helm {

PowerSeries RationalApprox::expand(std::size_t order) const {
    std::vector<Complex> out(order + 1);
    for (std::size_t n = 0; n <= order; ++n) {
        Complex acc = n < num.size() ? num[n] : Complex();
        for (std::size_t j = 1; j <= std::min(n, den.size() - 1); ++j) acc -= den[j] * out[n - j];
        out[n] = acc / den[0];
    }
    return PowerSeries(std::move(out));
}

namespace {

// Power-of-two exponent e such that c_n 2^(-e n) has no geometric trend over 0..K.
long balancing_exponent(const PowerSeries& c, int K) {
    if (K <= 0) return 0;
    long e0 = 0, ek = 0;
    const Complex& a = c[0];
    const Complex& b = c[static_cast<std::size_t>(K)];
    if (a.is_zero() || b.is_zero()) return 0;
    const auto log2abs = [](const Complex& z, long& exp_out) {
        Real m = boost::multiprecision::abs(z.real()) > boost::multiprecision::abs(z.imag())
                     ? boost::multiprecision::abs(z.real())
                     : boost::multiprecision::abs(z.imag());
        int e = 0;
        boost::multiprecision::frexp(m, &e);
        exp_out = e;
    };
    log2abs(a, e0);
    log2abs(b, ek);
    return static_cast<long>(std::floor(static_cast<double>(ek - e0) / K + 0.5));
}

}  // namespace

RationalApprox pade_lm(const PowerSeries& c_in, int L, int M) {
    if (L < 0 || M < 0) throw PadeError("negative Pade degree", 0.0);
    if (static_cast<std::size_t>(L + M) > c_in.order() || c_in.empty())
        throw PadeError("Pade degree exceeds series order", 0.0);
    // exact rescaling z -> 2^-e z keeps the Toeplitz entries of comparable size
    const long e = balancing_exponent(c_in, L + M);
    PowerSeries c = c_in;
    if (e != 0)
        for (std::size_t n = 1; n < c.size(); ++n) {
            const long shift = -e * static_cast<long>(n);
            c[n] = Complex(boost::multiprecision::ldexp(c[n].real(), shift),
                           boost::multiprecision::ldexp(c[n].imag(), shift));
        }
    RationalApprox r;
    r.L = L;
    r.M = M;
    r.den.assign(static_cast<std::size_t>(M) + 1, Complex());
    r.den[0] = Complex(1);
    if (M > 0) {
        const auto coeff = [&](int idx) { return idx >= 0 ? c[static_cast<std::size_t>(idx)] : Complex(); };
        ComplexMatrix t(static_cast<std::size_t>(M), static_cast<std::size_t>(M));
        ComplexVector rhs(static_cast<std::size_t>(M));
        for (int k = 1; k <= M; ++k) {
            for (int j = 1; j <= M; ++j) t(k - 1, j - 1) = coeff(L + k - j);
            rhs[k - 1] = -coeff(L + k);
        }
        try {
            LuFactorization lu(std::move(t));
            r.pivot_ratio = lu.pivot_ratio();
            ComplexVector b = lu.solve(rhs);
            for (int j = 1; j <= M; ++j) r.den[j] = std::move(b[j - 1]);
        } catch (const SingularMatrixError& e) {
            throw PadeError("singular Pade system for [" + std::to_string(L) + "/" + std::to_string(M) +
                                "], pivot ratio " + std::to_string(e.pivot_ratio()),
                            e.pivot_ratio());
        }
    }
    r.num.resize(static_cast<std::size_t>(L) + 1);
    for (int i = 0; i <= L; ++i) {
        Complex acc;
        for (int j = 0; j <= std::min(i, M); ++j) acc += r.den[j] * c[static_cast<std::size_t>(i - j)];
        r.num[i] = std::move(acc);
    }
    if (e != 0) {
        const auto unscale = [e](std::vector<Complex>& p) {
            for (std::size_t n = 1; n < p.size(); ++n) {
                const long shift = e * static_cast<long>(n);
                p[n] = Complex(boost::multiprecision::ldexp(p[n].real(), shift),
                               boost::multiprecision::ldexp(p[n].imag(), shift));
            }
        };
        unscale(r.num);
        unscale(r.den);
    }
    return r;
}

RationalApprox pade_auto(const PowerSeries& c, int L, int M, std::string* note) {
    const std::pair<int, int> tries[] = {{L, M}, {L + 1, M}, {L, M + 1}};
    std::string log;
    for (auto [l, m] : tries) {
        if (static_cast<std::size_t>(l + m) > c.order()) continue;
        try {
            RationalApprox r = pade_lm(c, l, m);
            if (note) *note = log;
            return r;
        } catch (const PadeError& e) {
            log += std::string(log.empty() ? "" : "; ") + e.what();
        }
    }
    throw PadeError("no usable Pade approximant: " + log, 0.0);
}

CFraction viskovatov(const PowerSeries& c, int depth) {
    if (c.empty()) throw PadeError("empty series", 0.0);
    if (depth < 0 || static_cast<std::size_t>(depth) > c.order()) throw PadeError("depth exceeds series order", 0.0);
    CFraction cf;
    cf.head = c[0];
    // g = (f - c_0) / z, then repeatedly g <- 1 / ((g / g_0 - 1) / z) style steps
    std::vector<Complex> g(c.coeffs().begin() + 1, c.coeffs().begin() + depth + 1);
    const Real floor_eps = boost::multiprecision::ldexp(Real(1), -(current_precision_bits() * 7) / 8);
    // magnitude of the expression g was split from; tails below floor_eps * ref are zero
    Real ref(0);
    for (const auto& v : c.coeffs()) {
        Real a = abs(v);
        if (a > ref) ref = a;
    }
    for (int k = 0; k < depth; ++k) {
        Real scale(0);
        for (const auto& v : g) {
            Real a = abs(v);
            if (a > scale) scale = a;
        }
        if (scale <= floor_eps * ref) {
            cf.terminated = true;
            return cf;
        }
        if (abs(g[0]) <= floor_eps * ref) {
            cf.diagnostic = "zero leading coefficient at step " + std::to_string(k) + " (non-normal table)";
            return cf;
        }
        Complex alpha = g[0];
        cf.partial_numerators.push_back(alpha);
        if (g.size() == 1) break;
        // h = 1 / (g / alpha); next g = (h - 1) / z
        std::vector<Complex> u(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) u[i] = g[i] / alpha;
        std::vector<Complex> h;
        h.reserve(u.size());
        for (std::size_t n = 0; n < u.size(); ++n) h.push_back(reciprocal_next(u, h, n));
        ref = 0;
        for (const auto& v : h) {
            Real a = abs(v);
            if (a > ref) ref = a;
        }
        g.assign(h.begin() + 1, h.end());
    }
    return cf;
}

RationalApprox convergent(const CFraction& cf, int k) {
    if (k < 0) throw PadeError("negative convergent index", 0.0);
    // A_{-1} = 1, A_0 = c_0, B_{-1} = 0, B_0 = 1, X_j = X_{j-1} + a_{j-1} z X_{j-2}
    std::vector<Complex> a_prev{Complex(1)}, a_cur{cf.head};
    std::vector<Complex> b_prev{Complex()}, b_cur{Complex(1)};
    const auto step = [](const std::vector<Complex>& cur, const std::vector<Complex>& prev, const Complex& alpha) {
        std::vector<Complex> out(std::max(cur.size(), prev.size() + 1));
        for (std::size_t i = 0; i < cur.size(); ++i) out[i] += cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) out[i + 1] += alpha * prev[i];
        return out;
    };
    for (int j = 1; j <= k; ++j) {
        if (static_cast<std::size_t>(j - 1) >= cf.partial_numerators.size()) break;
        const Complex& alpha = cf.partial_numerators[j - 1];
        auto a_next = step(a_cur, a_prev, alpha);
        auto b_next = step(b_cur, b_prev, alpha);
        a_prev = std::move(a_cur);
        a_cur = std::move(a_next);
        b_prev = std::move(b_cur);
        b_cur = std::move(b_next);
    }
    RationalApprox r;
    r.num = std::move(a_cur);
    r.den = std::move(b_cur);
    while (r.num.size() > 1 && r.num.back().is_zero()) r.num.pop_back();
    while (r.den.size() > 1 && r.den.back().is_zero()) r.den.pop_back();
    r.L = static_cast<int>(r.num.size()) - 1;
    r.M = static_cast<int>(r.den.size()) - 1;
    return r;
}

Evaluation evaluate(const RationalApprox& r, const Complex& z) {
    Complex n, d;
    Real dscale(0);
    Real az = abs(z);
    Real zp(1);
    for (std::size_t i = r.num.size(); i-- > 0;) n = n * z + r.num[i];
    for (std::size_t i = r.den.size(); i-- > 0;) d = d * z + r.den[i];
    for (const auto& b : r.den) {
        dscale += abs(b) * zp;
        zp *= az;
    }
    Evaluation e;
    Real threshold = boost::multiprecision::ldexp(Real(1), -current_precision_bits() / 2) * dscale;
    if (abs(d) <= threshold) {
        e.near_pole = true;
        if (d.is_zero()) return e;
    }
    e.value = n / d;
    return e;
}

double SingularityHint::distance(std::complex<double> z) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, std::abs(z - p));
    if (circle_radius) best = std::min(best, std::abs(std::abs(z) - *circle_radius));
    if (!std::isfinite(best)) best = std::max(1.0, std::abs(z));
    return best;
}

ZeroPoleSet zeros_poles(const RationalApprox& r, const SingularityHint& hint) {
    ZeroPoleSet out;
    RootResult zr = polynomial_roots(r.num);
    RootResult pr = polynomial_roots(r.den);
    for (std::size_t i = 0; i < zr.roots.size(); ++i) out.zeros.push_back({zr.roots[i], zr.residuals[i], false});
    for (std::size_t i = 0; i < pr.roots.size(); ++i) out.poles.push_back({pr.roots[i], pr.residuals[i], false});
    out.converged = zr.converged && pr.converged;
    if (!zr.converged) out.diagnostic += "zeros: " + zr.diagnostic;
    if (!pr.converged) out.diagnostic += std::string(out.diagnostic.empty() ? "" : "; ") + "poles: " + pr.diagnostic;

    struct Cand {
        double dist;
        std::size_t zi, pi;
    };
    std::vector<Cand> cands;
    for (std::size_t pi = 0; pi < out.poles.size(); ++pi) {
        auto p = to_std(out.poles[pi].z);
        double radius = kDoubletRadius * hint.distance(p);
        for (std::size_t zi = 0; zi < out.zeros.size(); ++zi) {
            double dist = std::abs(p - to_std(out.zeros[zi].z));
            if (dist < radius) cands.push_back({dist, zi, pi});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
    for (const auto& c : cands) {
        if (out.zeros[c.zi].doublet || out.poles[c.pi].doublet) continue;
        out.zeros[c.zi].doublet = true;
        out.poles[c.pi].doublet = true;
        out.doublets.emplace_back(c.zi, c.pi);
    }
    return out;
}

}  // namespace helm
