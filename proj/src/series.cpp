#include "helm/series.hpp"

namespace helm {

Complex PowerSeries::evaluate(const Complex& z) const {
    Complex acc;
    for (std::size_t n = c_.size(); n-- > 0;) acc = acc * z + c_[n];
    return acc;
}

PowerSeries PowerSeries::conjugated() const {
    std::vector<Complex> out;
    out.reserve(c_.size());
    for (const auto& v : c_) out.push_back(conj(v));
    return PowerSeries(std::move(out));
}

Complex reciprocal_next(const std::vector<Complex>& c, const std::vector<Complex>& d, std::size_t n) {
    if (c.empty() || c[0].is_zero()) throw SeriesError("reciprocal of a series with zero constant term");
    if (n == 0) return Complex(1) / c[0];
    if (d.size() < n) throw SeriesError("reciprocal_next: missing lower-order coefficients");
    Complex acc;
    for (std::size_t m = 0; m < n; ++m)
        if (n - m < c.size()) acc += c[n - m] * d[m];
    return -acc / c[0];
}

PowerSeries reciprocal(const PowerSeries& c) {
    std::vector<Complex> d;
    d.reserve(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) d.push_back(reciprocal_next(c.coeffs(), d, n));
    return PowerSeries(std::move(d));
}

Complex cauchy_coeff(const std::vector<Complex>& a, const std::vector<Complex>& b, std::size_t n) {
    Complex acc;
    std::size_t lo = n + 1 > b.size() ? n + 1 - b.size() : 0;
    std::size_t hi = std::min(n, a.empty() ? 0 : a.size() - 1);
    if (a.empty() || b.empty()) return acc;
    for (std::size_t j = lo; j <= hi; ++j) acc += a[j] * b[n - j];
    return acc;
}

PowerSeries cauchy_product(const PowerSeries& a, const PowerSeries& b, std::size_t order) {
    std::vector<Complex> out;
    out.reserve(order + 1);
    for (std::size_t n = 0; n <= order; ++n) out.push_back(cauchy_coeff(a.coeffs(), b.coeffs(), n));
    return PowerSeries(std::move(out));
}

MillerPower::MillerPower(Real alpha, Complex y0) : alpha_(std::move(alpha)) { y_.push_back(std::move(y0)); }

const Complex& MillerPower::next(const std::vector<Complex>& a) {
    const std::size_t k = y_.size();
    if (a.size() <= k) throw SeriesError("MillerPower: base series too short");
    if (a[0].is_zero()) throw SeriesError("MillerPower: zero constant term");
    Complex acc;
    Real ap1 = alpha_ + 1;
    for (std::size_t j = 1; j <= k; ++j) {
        if (a[j].is_zero()) continue;
        Real w = ap1 * static_cast<long>(j) - static_cast<long>(k);
        acc += (a[j] * y_[k - j]) * w;
    }
    y_.push_back(acc / (a[0] * Real(static_cast<long>(k))));
    return y_.back();
}

PowerSeries series_power(const PowerSeries& x, int k) {
    if (k < 1) throw SeriesError("series_power: exponent must be >= 1");
    const std::size_t order = x.order();
    std::size_t shift = 0;
    while (shift < x.size() && x[shift].is_zero()) ++shift;
    std::vector<Complex> out(x.size());
    if (shift == x.size()) return PowerSeries(std::move(out));
    const std::size_t lead = shift * static_cast<std::size_t>(k);
    if (lead > order) return PowerSeries(std::move(out));
    std::vector<Complex> a(x.coeffs().begin() + static_cast<std::ptrdiff_t>(shift), x.coeffs().end());
    MillerPower p(Real(k), pow(a[0], k));
    for (std::size_t n = 1; lead + n <= order; ++n) p.next(a);
    for (std::size_t n = 0; lead + n <= order; ++n) out[lead + n] = p.coeffs()[n];
    return PowerSeries(std::move(out));
}

}  // namespace helm
