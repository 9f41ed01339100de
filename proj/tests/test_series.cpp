#include <doctest.h>

#include "helm/linalg.hpp"
#include "helm/series.hpp"

#include <cmath>

using namespace helm;

namespace {

double err(const Complex& a, const Complex& b) { return to_double(abs(a - b)); }

PowerSeries exp_series(int order) {
    std::vector<Complex> c;
    Real f(1);
    for (int n = 0; n <= order; ++n) {
        c.emplace_back(Real(1) / f);
        f *= Real(n + 1);
    }
    return PowerSeries(c);
}

}  // namespace

TEST_CASE("reciprocal of exp(z) is exp(-z)") {
    PrecisionScope scope(256);
    PowerSeries e = exp_series(40);
    PowerSeries r = reciprocal(e);
    Real f(1);
    for (int n = 0; n <= 40; ++n) {
        Complex expected(Real(n % 2 ? -1 : 1) / f);
        CHECK(err(r[n], expected) < 1e-70);
        f *= Real(n + 1);
    }
}

TEST_CASE("reciprocal of a zero-led series is rejected") {
    PrecisionScope scope(128);
    PowerSeries c(std::vector<Complex>{Complex(0), Complex(1)});
    CHECK_THROWS_AS(reciprocal(c), SeriesError);
}

TEST_CASE("cauchy product of geometric series gives n + 1") {
    PrecisionScope scope(128);
    PowerSeries g(std::vector<Complex>(20, Complex(1)));
    PowerSeries p = cauchy_product(g, g, 19);
    for (int n = 0; n < 20; ++n) CHECK(err(p[n], Complex(n + 1)) < 1e-30);
}

TEST_CASE("series_power matches repeated products") {
    PrecisionScope scope(256);
    PowerSeries x(std::vector<Complex>{Complex(1.0, 0.5), Complex(-0.3, 0.2), Complex(0.7), Complex(0.0, -1.1),
                                       Complex(0.25, 0.25), Complex(-0.5)});
    PowerSeries p = x;
    for (int k = 2; k <= 5; ++k) {
        p = cauchy_product(p, x, x.order());
        PowerSeries q = series_power(x, k);
        for (std::size_t n = 0; n <= x.order(); ++n) CHECK(err(p[n], q[n]) < 1e-60);
    }
}

TEST_CASE("Miller recurrence reproduces sqrt(1 + z)") {
    PrecisionScope scope(256);
    std::vector<Complex> a{Complex(1), Complex(1)};
    for (int n = 2; n <= 30; ++n) a.emplace_back(0);
    MillerPower mp(Real(0.5), Complex(1));
    Real binom(1);
    for (int n = 1; n <= 30; ++n) {
        const Complex& y = mp.next(std::vector<Complex>(a.begin(), a.begin() + n + 1));
        binom = binom * (Real(0.5) - Real(n - 1)) / Real(n);
        CHECK(err(y, Complex(binom)) < 1e-70);
    }
}

TEST_CASE("conjugated series conjugates every coefficient") {
    PrecisionScope scope(128);
    PowerSeries x(std::vector<Complex>{Complex(1.0, 2.0), Complex(-3.0, 0.5)});
    PowerSeries y = x.conjugated();
    CHECK(err(y[0], Complex(1.0, -2.0)) == 0.0);
    CHECK(err(y[1], Complex(-3.0, -0.5)) == 0.0);
}

TEST_CASE("LU solve and determinant") {
    PrecisionScope scope(256);
    ComplexMatrix a(3, 3);
    const double m[3][3] = {{4, 1, 2}, {1, 5, 3}, {2, 3, 6}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = Complex(m[i][j], i == j ? 1.0 : 0.0);
    LuFactorization lu(a);
    ComplexVector x{Complex(1), Complex(0.0, 2.0), Complex(-1)};
    ComplexVector b = a.multiply(x);
    ComplexVector y = lu.solve(b);
    for (int i = 0; i < 3; ++i) CHECK(err(x[i], y[i]) < 1e-70);
    // det of the real part plus i on the diagonal, expanded by hand
    Complex d = lu.determinant();
    Complex expected(Real(0), Real(0));
    {
        std::complex<double> e[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) e[i][j] = {m[i][j], i == j ? 1.0 : 0.0};
        expected = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                   e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    }
    CHECK(err(d, expected) < 1e-12);
}

TEST_CASE("singular matrix is reported") {
    PrecisionScope scope(128);
    ComplexMatrix a(2, 2);
    a(0, 0) = Complex(1);
    a(0, 1) = Complex(2);
    a(1, 0) = Complex(2);
    a(1, 1) = Complex(4);
    CHECK_THROWS_AS(LuFactorization{a}, SingularMatrixError);
}

TEST_CASE("precision scope restores the previous precision") {
    PrecisionScope outer(256);
    {
        PrecisionScope inner(1024);
        CHECK(current_precision_bits() >= 1024);
    }
    CHECK(current_precision_bits() >= 256);
    CHECK(current_precision_bits() < 1024);
}
