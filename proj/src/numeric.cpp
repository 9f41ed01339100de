#include "helm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace helm {

namespace {

unsigned digits10_for_bits(int bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

PrecisionScope::PrecisionScope(int mantissa_bits)
    : previous_digits10_(Real::default_precision()) {
    Real::default_precision(digits10_for_bits(mantissa_bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_digits10_); }

int current_precision_bits() {
    return static_cast<int>(std::floor(Real::default_precision() / 0.30102999566398120));
}

Real precision_epsilon() {
    Real one(1);
    return boost::multiprecision::ldexp(one, -current_precision_bits());
}

Complex& Complex::operator/=(const Complex& o) {
    Real den = o.re_ * o.re_ + o.im_ * o.im_;
    Real r = (re_ * o.re_ + im_ * o.im_) / den;
    im_ = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(r);
    return *this;
}

namespace {

// Scratch registers for fused complex products, widened on demand.
struct FusedScratch {
    mpfr_t t1, t2;
    mpfr_prec_t prec = 0;
    FusedScratch() {
        mpfr_init2(t1, MPFR_PREC_MIN);
        mpfr_init2(t2, MPFR_PREC_MIN);
    }
    ~FusedScratch() {
        mpfr_clear(t1);
        mpfr_clear(t2);
    }
    void fit(mpfr_prec_t p) {
        if (p == prec) return;
        mpfr_set_prec(t1, p);
        mpfr_set_prec(t2, p);
        prec = p;
    }
};

thread_local FusedScratch scratch;

mpfr_srcptr raw(const Real& x) { return x.backend().data(); }
mpfr_ptr raw(Real& x) { return x.backend().data(); }

void fused(Real& re, Real& im, const Complex& a, const Complex& b, bool subtract) {
    mpfr_prec_t p = std::max({mpfr_get_prec(raw(a.real())), mpfr_get_prec(raw(a.imag())),
                              mpfr_get_prec(raw(b.real())), mpfr_get_prec(raw(b.imag()))});
    scratch.fit(p);
    // t1 = a.re b.re - a.im b.im, t2 = a.re b.im + a.im b.re
    mpfr_mul(scratch.t1, raw(a.real()), raw(b.real()), MPFR_RNDN);
    mpfr_mul(scratch.t2, raw(a.imag()), raw(b.imag()), MPFR_RNDN);
    mpfr_sub(scratch.t1, scratch.t1, scratch.t2, MPFR_RNDN);
    if (subtract)
        mpfr_sub(raw(re), raw(re), scratch.t1, MPFR_RNDN);
    else
        mpfr_add(raw(re), raw(re), scratch.t1, MPFR_RNDN);
    mpfr_mul(scratch.t1, raw(a.real()), raw(b.imag()), MPFR_RNDN);
    mpfr_mul(scratch.t2, raw(a.imag()), raw(b.real()), MPFR_RNDN);
    mpfr_add(scratch.t1, scratch.t1, scratch.t2, MPFR_RNDN);
    if (subtract)
        mpfr_sub(raw(im), raw(im), scratch.t1, MPFR_RNDN);
    else
        mpfr_add(raw(im), raw(im), scratch.t1, MPFR_RNDN);
}

}  // namespace

void Complex::sub_mul(const Complex& a, const Complex& b) { fused(re_, im_, a, b, true); }

void Complex::add_mul(const Complex& a, const Complex& b) { fused(re_, im_, a, b, false); }

Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }

Real norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

Real abs(const Complex& z) { return boost::multiprecision::hypot(z.real(), z.imag()); }

Real arg(const Complex& z) { return boost::multiprecision::atan2(z.imag(), z.real()); }

Complex sqrt(const Complex& z) {
    if (z.is_zero()) return {};
    // principal branch, computed without cancellation
    Real r = abs(z);
    Real t = boost::multiprecision::sqrt((r + boost::multiprecision::abs(z.real())) / 2);
    if (z.real() >= 0) return {t, z.imag() / (2 * t)};
    Real im = z.imag() >= 0 ? t : Real(-t);
    return {boost::multiprecision::abs(z.imag()) / (2 * t), im};
}

Complex exp(const Complex& z) {
    Real m = boost::multiprecision::exp(z.real());
    return {m * boost::multiprecision::cos(z.imag()), m * boost::multiprecision::sin(z.imag())};
}

Complex log(const Complex& z) { return {boost::multiprecision::log(abs(z)), arg(z)}; }

Complex pow(const Complex& z, int k) {
    if (k < 0) return Complex(1) / pow(z, -k);
    Complex result(1);
    Complex base = z;
    while (k > 0) {
        if (k & 1) result *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return result;
}

Complex polar(const Real& r, const Real& theta) {
    return {r * boost::multiprecision::cos(theta), r * boost::multiprecision::sin(theta)};
}

Complex i_unit() { return {Real(0), Real(1)}; }

Real with_precision(const Real& x, int mantissa_bits) { return Real(x, digits10_for_bits(mantissa_bits)); }

Complex with_precision(const Complex& z, int mantissa_bits) {
    return {with_precision(z.real(), mantissa_bits), with_precision(z.imag(), mantissa_bits)};
}

std::complex<double> to_std(const Complex& z) {
    return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}

double to_double(const Real& x) { return x.convert_to<double>(); }

std::string to_decimal(const Complex& z) {
    std::ostringstream os;
    const auto digits = static_cast<std::streamsize>(Real::default_precision());
    os.precision(digits);
    os << z.real() << ',' << z.imag();
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
    return os << '(' << z.real() << ',' << z.imag() << ')';
}

}  // namespace helm
