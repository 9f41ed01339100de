#pragma once

#include "helm/numeric.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace helm {

/// Truncated power series c_0 + c_1 z + ... + c_N z^N.
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {}

    std::size_t size() const { return c_.size(); }
    bool empty() const { return c_.empty(); }
    /// Highest stored order N (size - 1).
    std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
    const Complex& operator[](std::size_t n) const { return c_[n]; }
    Complex& operator[](std::size_t n) { return c_[n]; }
    /// Coefficient n, or zero beyond the stored order.
    Complex at_or_zero(std::size_t n) const { return n < c_.size() ? c_[n] : Complex(); }
    void push_back(Complex v) { c_.push_back(std::move(v)); }
    void resize(std::size_t n) { c_.resize(n); }
    const std::vector<Complex>& coeffs() const { return c_; }

    /// Horner evaluation of the truncated polynomial.
    Complex evaluate(const Complex& z) const;
    /// Series whose coefficients are the conjugates of these (the germ of conj(f(conj z))).
    PowerSeries conjugated() const;

private:
    std::vector<Complex> c_;
};

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficient d_n of 1/c given d_0..d_{n-1}.
Complex reciprocal_next(const std::vector<Complex>& c, const std::vector<Complex>& d, std::size_t n);

/// Full reciprocal series through order c.order().
PowerSeries reciprocal(const PowerSeries& c);

/// Coefficient n of the Cauchy product a*b (missing coefficients count as zero).
Complex cauchy_coeff(const std::vector<Complex>& a, const std::vector<Complex>& b, std::size_t n);

/// Product a*b truncated to order `order`.
PowerSeries cauchy_product(const PowerSeries& a, const PowerSeries& b, std::size_t order);

/// Incremental computation of y = a^alpha with y_0 supplied, via the recurrence
/// y_k = 1/(k a_0) * sum_{j=1..k} ((alpha+1) j - k) a_j y_{k-j}.
class MillerPower {
public:
    MillerPower(Real alpha, Complex y0);

    /// Produces y_k for k = size(); requires a[0..k].
    const Complex& next(const std::vector<Complex>& a);
    std::size_t size() const { return y_.size(); }
    const std::vector<Complex>& coeffs() const { return y_; }

private:
    Real alpha_;
    std::vector<Complex> y_;
};

/// x(z)^k truncated to x.order(), for integer k >= 1.
PowerSeries series_power(const PowerSeries& x, int k);

}  // namespace helm
