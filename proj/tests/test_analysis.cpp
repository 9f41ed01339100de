#include <doctest.h>

#include "helm/bivariate.hpp"
#include "helm/convergence.hpp"
#include "helm/roots.hpp"
#include "helm/singularity.hpp"
#include "helm/stahl.hpp"

#include <cmath>

using namespace helm;

namespace {

// (1 - z/a)^(-1/2)
PowerSeries branch_series(double a, int order) {
    std::vector<Complex> c;
    Real coef(1);
    for (int n = 0; n <= order; ++n) {
        c.emplace_back(coef);
        coef = coef * Real(2 * n + 1) / Real(2 * n + 2) / Real(a);
    }
    return PowerSeries(c);
}

}  // namespace

TEST_CASE("roots of a cubic with known roots") {
    PrecisionScope scope(256);
    // (x - 1)(x - 2)(x - 3) = -6 + 11x - 6x^2 + x^3
    RootResult r = polynomial_roots({Complex(-6), Complex(11), Complex(-6), Complex(1)});
    REQUIRE(r.converged);
    REQUIRE(r.roots.size() == 3);
    std::vector<double> re;
    for (const auto& z : r.roots) {
        CHECK(std::abs(to_std(z).imag()) < 1e-60);
        re.push_back(to_std(z).real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(re[2] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("roots at the origin are kept") {
    PrecisionScope scope(128);
    RootResult r = polynomial_roots({Complex(0), Complex(0), Complex(-4), Complex(1)});
    REQUIRE(r.roots.size() == 3);
    int at_origin = 0;
    for (const auto& z : r.roots)
        if (z.is_zero()) ++at_origin;
    CHECK(at_origin == 2);
}

TEST_CASE("ratio estimate locates a square-root branch point") {
    PrecisionScope scope(256);
    FabryEstimate f = fabry_estimate(branch_series(1.7, 80), 16);
    REQUIRE(f.finite);
    CHECK_FALSE(f.oscillating);
    CHECK(std::abs(f.z_b - std::complex<double>(1.7, 0.0)) < 1e-4);
}

TEST_CASE("ratio estimate on an oscillating series reports a modulus") {
    PrecisionScope scope(256);
    // 1 / (1 + z^2 / 4): singularities at +-2i
    std::vector<Complex> c(61);
    Real a(1);
    for (int k = 0; 2 * k <= 60; ++k) {
        c[2 * k] = Complex(a);
        a = a * Real(-0.25);
    }
    FabryEstimate f = fabry_estimate(PowerSeries(c), 16);
    CHECK(f.oscillating);
    CHECK(f.modulus == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("radius estimate flags an entire function") {
    PrecisionScope scope(256);
    std::vector<Complex> c;
    Real f(1);
    for (int n = 0; n <= 60; ++n) {
        c.emplace_back(Real(1) / f);
        f *= Real(n + 1);
    }
    CHECK(radius_estimate(PowerSeries(c)).entire_like);
    CHECK_FALSE(radius_estimate(branch_series(2.0, 60)).entire_like);
}

TEST_CASE("branch-point analysis of a square-root singularity") {
    PrecisionScope scope(1024);
    PowerSeries c = branch_series(1.3, 160);
    FabryEstimate f = fabry_estimate(c, 32);
    ZeroPoleSet zp = zeros_poles(pade_lm(c, 80, 80), hint_from(f));
    BranchPointReport rep = analyze_branch_points(c, zp, 32);
    REQUIRE(rep.positive_real);
    CHECK(*rep.positive_real == doctest::Approx(1.3).epsilon(1e-4));
    // poles crowd toward the endpoint from one side: the kernel mode sits about one bandwidth inside the cut
    double nearest = 1e9;
    for (auto cand : rep.density_candidates) nearest = std::min(nearest, std::abs(cand - std::complex<double>(1.3, 0.0)));
    CHECK(nearest < 2 * kDensityBandwidth);
}

TEST_CASE("branch-point analysis confirms an isolated pole") {
    PrecisionScope scope(256);
    // 1 / ((1 - z/1.3)(1 - z/3))
    std::vector<Complex> c;
    Real a = Real(1) / Real(1.3), b = Real(1) / Real(3);
    for (int n = 0; n <= 40; ++n)
        c.emplace_back((boost::multiprecision::pow(a, n + 1) - boost::multiprecision::pow(b, n + 1)) / (a - b));
    PowerSeries s(c);
    FabryEstimate f = fabry_estimate(s, 16);
    RationalApprox r = pade_lm(s, 0, 2);
    BranchPointReport rep = analyze_branch_points(s, zeros_poles(r, hint_from(f)), 16);
    REQUIRE(rep.confirmed);
    CHECK(std::abs(*rep.confirmed - std::complex<double>(1.3, 0.0)) < 1e-12);
    REQUIRE(rep.positive_real);
    CHECK(*rep.positive_real == doctest::Approx(1.3).epsilon(1e-6));
}

TEST_CASE("density maxima separate two clusters") {
    std::vector<std::complex<double>> pts;
    for (int k = 0; k < 10; ++k) {
        pts.emplace_back(1.0 + 0.001 * k, 0.0);
        pts.emplace_back(-2.0, 0.5 + 0.001 * k);
    }
    auto m = density_maxima(pts, 0.02);
    REQUIRE(m.size() == 2);
}

TEST_CASE("convergence rate of diagonal approximants to a square root") {
    PrecisionScope scope(256);
    PowerSeries c = branch_series(1.0, 60);
    Complex z(-0.5);
    Complex ref(Real(1) / boost::multiprecision::sqrt(Real(1.5)));
    RateSummary rs = convergence_rate(c, z, ref, {5, 10, 15, 20, 25});
    REQUIRE(rs.points.size() >= 3);
    for (const auto& p : rs.points) CHECK(p.rate < 1.0);
    CHECK(rs.fitted_rate < 1.0);
}

TEST_CASE("critical points of V^2 - z") {
    PrecisionScope scope(256);
    BivariatePoly f({{Complex(0), Complex(-1)}, {Complex(0), Complex(0)}, {Complex(1), Complex(0)}});
    CHECK(f.degree_v() == 2);
    CHECK(f.degree_z() == 1);
    CriticalPointsResult r = critical_points(f);
    REQUIRE(r.points.size() == 1);
    CHECK(to_double(abs(r.points[0].z)) < 1e-30);
}

TEST_CASE("critical points of V^2 - 2V + z") {
    PrecisionScope scope(256);
    // discriminant 4 - 4z vanishes at z = 1 with V = 1
    BivariatePoly f({{Complex(0), Complex(1)}, {Complex(-2), Complex(0)}, {Complex(1), Complex(0)}});
    CriticalPointsResult r = critical_points(f);
    REQUIRE(r.points.size() == 1);
    CHECK(to_double(abs(r.points[0].z - Complex(1))) < 1e-30);
    CHECK(to_double(abs(r.points[0].v - Complex(1))) < 1e-15);
    RootResult at_one = solutions_at_z1(f);
    REQUIRE(at_one.roots.size() == 2);
}

TEST_CASE("resultant of linear factors") {
    PrecisionScope scope(128);
    Complex r = resultant({Complex(-1), Complex(1)}, {Complex(-2), Complex(1)});
    CHECK(to_double(abs(r)) == doctest::Approx(1.0));
    Complex zero = resultant({Complex(-1), Complex(1)}, {Complex(1), Complex(-2), Complex(1)});
    CHECK(to_double(abs(zero)) < 1e-30);
}

TEST_CASE("bivariate matrix parsing") {
    PrecisionScope scope(256);
    BivariatePoly f = parse_bivariate(R"({"rows":[[["1","0"],[0.5,"-0.25"]],[[0,0],["2",0]]]})");
    CHECK(f.degree_v() == 1);
    CHECK(to_double(abs(f.evaluate(Complex(1), Complex(1)) - Complex(3.5, -0.25))) < 1e-30);
    CHECK_THROWS(parse_bivariate(R"({"rows":"x"})"));
}

TEST_CASE("zero-pole export counts every record") {
    PrecisionScope scope(256);
    PowerSeries c = branch_series(1.3, 40);
    ZeroPoleSet zp = zeros_poles(pade_lm(c, 20, 20));
    StahlExport ex = stahl_export(zp, fabry_estimate(c, 8));
    CHECK(ex.records == zp.zeros.size() + zp.poles.size());
    CHECK(ex.csv.find("kind,re,im,residual,is_doublet") == 0);
}
