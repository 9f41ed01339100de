#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <ostream>
#include <string>

namespace helm {

/// Arbitrary-precision real backed by MPFR. Precision is taken from the
/// thread default at construction time; see PrecisionScope.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Sets the working precision (in mantissa bits) for every Real created while
/// the scope is alive and restores the previous setting on exit.
class PrecisionScope {
public:
    explicit PrecisionScope(int mantissa_bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned previous_digits10_;
};

/// Mantissa bits of the current default precision.
int current_precision_bits();

/// 2^-bits: the unit roundoff of the current precision.
Real precision_epsilon();

class Complex {
public:
    Complex() : re_(0), im_(0) {}
    Complex(Real re) : re_(std::move(re)), im_(0) {}  // NOLINT(implicit)
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(double re) : re_(re), im_(0) {}  // NOLINT(implicit)
    Complex(int re) : re_(re), im_(0) {}     // NOLINT(implicit)
    Complex(double re, double im) : re_(re), im_(im) {}
    Complex(std::complex<double> z) : re_(z.real()), im_(z.imag()) {}  // NOLINT(implicit)

    const Real& real() const { return re_; }
    const Real& imag() const { return im_; }

    Complex& operator+=(const Complex& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Complex& operator*=(const Complex& o) {
        Real r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) {
        re_ *= s;
        im_ *= s;
        return *this;
    }
    Complex& operator/=(const Complex& o);
    Complex& operator/=(const Real& s) {
        re_ /= s;
        im_ /= s;
        return *this;
    }

    Complex operator-() const { return {-re_, -im_}; }

    /// *this -= a * b (and += for add_mul) without allocating temporaries.
    void sub_mul(const Complex& a, const Complex& b);
    void add_mul(const Complex& a, const Complex& b);

    bool is_zero() const { return re_ == 0 && im_ == 0; }

private:
    Real re_;
    Real im_;
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
inline bool operator==(const Complex& a, const Complex& b) {
    return a.real() == b.real() && a.imag() == b.imag();
}

Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex sqrt(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex pow(const Complex& z, int k);
Complex polar(const Real& r, const Real& theta);
Complex i_unit();

/// Copy rounded (or widened) to the given mantissa bits; plain copies keep the source precision.
Real with_precision(const Real& x, int mantissa_bits);
Complex with_precision(const Complex& z, int mantissa_bits);

std::complex<double> to_std(const Complex& z);
double to_double(const Real& x);

/// Full-precision decimal rendering ("re,im").
std::string to_decimal(const Complex& z);
std::ostream& operator<<(std::ostream& os, const Complex& z);

}  // namespace helm
