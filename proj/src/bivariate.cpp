#include "helm/bivariate.hpp"

#include "helm/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace helm {

BivariatePoly::BivariatePoly(std::vector<std::vector<Complex>> a) : a_(std::move(a)) {
    for (std::size_t i = 0; i < a_.size(); ++i)
        for (std::size_t k = 0; k < a_[i].size(); ++k)
            if (!a_[i][k].is_zero()) {
                deg_v_ = std::max(deg_v_, static_cast<int>(i));
                deg_z_ = std::max(deg_z_, static_cast<int>(k));
            }
}

std::vector<Complex> BivariatePoly::in_v(const Complex& z) const {
    std::vector<Complex> out(static_cast<std::size_t>(std::max(deg_v_, 0)) + 1);
    for (int i = 0; i <= deg_v_; ++i) {
        Complex acc;
        const auto& row = a_[static_cast<std::size_t>(i)];
        for (std::size_t k = row.size(); k-- > 0;) acc = acc * z + row[k];
        out[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
}

Complex BivariatePoly::evaluate(const Complex& v, const Complex& z) const {
    std::vector<Complex> c = in_v(z);
    Complex acc;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * v + c[i];
    return acc;
}

namespace {

Real parse_real(const nlohmann::json& j) {
    if (j.is_number()) return Real(j.get<double>());
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (!s.empty() && s[0] == '+') s.erase(0, 1);
        return Real(s);
    }
    throw std::invalid_argument("matrix entry must be a number or a decimal string");
}

Complex eval_poly(const std::vector<Complex>& p, const Complex& x) {
    Complex acc;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

Real norm1(const std::vector<Complex>& p) {
    Real s(0);
    for (const auto& c : p) s += abs(c);
    return s;
}

}  // namespace

BivariatePoly parse_bivariate(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    const nlohmann::json& rows = doc.is_array() ? doc : doc.at("rows");
    std::vector<std::vector<Complex>> a;
    for (const auto& row : rows) {
        std::vector<Complex> r;
        for (const auto& e : row) {
            if (e.is_array() && e.size() == 2)
                r.emplace_back(parse_real(e[0]), parse_real(e[1]));
            else
                r.emplace_back(parse_real(e));
        }
        a.push_back(std::move(r));
    }
    BivariatePoly f(std::move(a));
    if (f.degree_v() < 1) throw std::invalid_argument("polynomial must depend on V");
    return f;
}

std::vector<Complex> derivative(const std::vector<Complex>& p) {
    std::vector<Complex> out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Real(static_cast<long>(i)));
    if (out.empty()) out.emplace_back();
    return out;
}

Complex resultant(const std::vector<Complex>& p, const std::vector<Complex>& q) {
    const std::size_t n = p.size() - 1, m = q.size() - 1;
    const std::size_t dim = n + m;
    if (dim == 0) return Complex(1);
    ComplexMatrix s(dim, dim);
    // rows of descending coefficients, shifted
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j <= n; ++j) s(r, r + j) = p[n - j];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j <= m; ++j) s(m + r, r + j) = q[m - j];
    try {
        return LuFactorization(std::move(s)).determinant();
    } catch (const SingularMatrixError&) {
        return Complex();
    }
}

CriticalPointsResult critical_points(const BivariatePoly& f) {
    CriticalPointsResult out;
    const int d = f.degree_v();
    const int K = std::max(f.degree_z(), 0);
    if (d < 1) throw std::invalid_argument("critical_points: polynomial must depend on V");
    const int ns = 2 * d * std::max(K, 1) + 1;
    out.samples = ns;
    const Real two_pi = boost::multiprecision::atan(Real(1)) * 8;
    const Real radius(2);

    std::vector<Complex> vals(static_cast<std::size_t>(ns));
    for (int j = 0; j < ns; ++j) {
        Complex z = polar(radius, two_pi * j / ns);
        std::vector<Complex> a = f.in_v(z);
        std::vector<Complex> b = derivative(a);
        if (a.back().is_zero()) throw std::runtime_error("critical_points: leading coefficient vanishes on sample circle");
        vals[static_cast<std::size_t>(j)] = resultant(a, b) / a.back();
    }
    // inverse DFT on the circle, then undo the radius scaling
    std::vector<Complex> co(static_cast<std::size_t>(ns));
    Real rk(1);
    for (int k = 0; k < ns; ++k) {
        Complex acc;
        for (int j = 0; j < ns; ++j) acc += vals[static_cast<std::size_t>(j)] * polar(Real(1), -two_pi * (static_cast<long>(j) * k % ns) / ns);
        co[static_cast<std::size_t>(k)] = acc / (rk * ns);
        rk *= radius;
    }
    // coefficients below the interpolation noise floor (in the |z| = 2 scaling) are dropped
    Real scaled_max(0);
    rk = 1;
    std::vector<Real> scaled(co.size());
    for (std::size_t k = 0; k < co.size(); ++k) {
        scaled[k] = abs(co[k]) * rk;
        if (scaled[k] > scaled_max) scaled_max = scaled[k];
        rk *= radius;
    }
    const Real floor_v = scaled_max * boost::multiprecision::ldexp(Real(1), -(current_precision_bits() * 3) / 5);
    while (co.size() > 1 && scaled[co.size() - 1] <= floor_v) co.pop_back();
    out.discriminant_degree = static_cast<int>(co.size()) - 1;

    RootResult zr = polynomial_roots(co);
    out.converged = zr.converged;
    out.diagnostic = zr.diagnostic;
    const Real pair_tol = boost::multiprecision::ldexp(Real(1), -current_precision_bits() / 6);
    for (std::size_t idx = 0; idx < zr.roots.size(); ++idx) {
        const Complex& z = zr.roots[idx];
        std::vector<Complex> a = f.in_v(z);
        std::vector<Complex> b = derivative(a);
        RootResult fr = polynomial_roots(a);
        RootResult br = polynomial_roots(b);
        Real best(-1);
        Complex v_best;
        for (const auto& u : fr.roots)
            for (const auto& w : br.roots) {
                Real au = abs(u);
                Real dist = abs(u - w) / (au > 1 ? au : Real(1));
                if (best < 0 || dist < best) {
                    best = dist;
                    v_best = (u + w) / Real(2);
                }
            }
        if (best >= 0 && best <= pair_tol) {
            CriticalPoint cp;
            cp.z = z;
            cp.v = v_best;
            cp.residual = zr.residuals[idx];
            cp.pair_distance = to_double(best);
            cp.derivative_residual = to_double(abs(eval_poly(b, v_best)) / norm1(a));
            out.points.push_back(std::move(cp));
        } else {
            out.rejected.push_back(z);
        }
    }
    return out;
}

RootResult solutions_at_z1(const BivariatePoly& f) { return polynomial_roots(f.in_v(Complex(1))); }

}  // namespace helm
