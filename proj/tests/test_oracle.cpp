#include <doctest.h>

#include "helm/case_io.hpp"
#include "helm/mismatch.hpp"
#include "helm/oracle.hpp"

using namespace helm;

namespace {

Network two_bus(cd s, cd z) {
    std::vector<Bus> buses(2);
    buses[0].id = 1;
    buses[0].kind = BusKind::Slack;
    buses[1].id = 2;
    buses[1].kind = BusKind::PQ;
    buses[1].s = s;
    return Network(buses, {{1, 2, z}});
}

}  // namespace

TEST_CASE("unloaded network converges immediately") {
    Network net = two_bus(cd(0.0, 0.0), cd(0.01, 0.1));
    NRResult r = newton_raphson(net, AdmittanceMatrix(net), NRConfig{});
    REQUIRE(r.converged());
    CHECK(r.iterations <= 1);
    CHECK(std::abs(r.v[1] - cd(1.0, 0.0)) < 1e-14);
}

TEST_CASE("two-bus NR matches the closed form") {
    const cd s(-0.9, -0.4), z(0.03, 0.12);
    Network net = two_bus(s, z);
    NRResult r = newton_raphson(net, AdmittanceMatrix(net), NRConfig{});
    REQUIRE(r.converged());
    TwoBusSolutions bf = brute_force_two_bus(s, z, cd(1.0, 0.0));
    REQUIRE(bf.roots.size() == 2);
    double best = 1e9;
    for (const auto& root : bf.roots) best = std::min(best, std::abs(root.v - r.v[1]));
    CHECK(best < 1e-10);
    // both closed-form roots satisfy the power-flow equations
    AdmittanceMatrix y(net);
    for (const auto& root : bf.roots) CHECK(max_abs(mismatch(net, y, {cd(1.0, 0.0), root.v})) < 1e-12);
}

TEST_CASE("closed form reports infeasibility") {
    TwoBusSolutions bf = brute_force_two_bus(cd(-6.0, -2.0), cd(0.02, 0.1), cd(1.0, 0.0));
    CHECK_FALSE(bf.feasible);
    CHECK(bf.discriminant < 0.0);
    CHECK(bf.roots.empty());
}

TEST_CASE("NR fails beyond the fold") {
    Network net = two_bus(cd(-6.0, -2.0), cd(0.02, 0.1));
    NRResult r = newton_raphson(net, AdmittanceMatrix(net), NRConfig{});
    CHECK_FALSE(r.converged());
}

TEST_CASE("NR holds PV magnitude and active power") {
    Network net = parse_case(R"({"buses":[{"id":1,"kind":"slack"},{"id":2,"kind":"pv","p":0.5,"m_set":1.03},
                                          {"id":3,"kind":"pq","s":[-0.6,-0.25]}],
                                 "lines":[{"from":1,"to":2,"z":[0.02,0.12]},{"from":2,"to":3,"z":[0.03,0.15]},
                                          {"from":1,"to":3,"z":[0.02,0.2]}]})");
    AdmittanceMatrix y(net);
    NRResult r = newton_raphson(net, y, NRConfig{});
    REQUIRE(r.converged());
    CHECK(std::abs(std::abs(r.v[1]) - 1.03) < 1e-12);
    CHECK(std::abs(injection(y, r.v, 1).real() - 0.5) < 1e-10);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
}

TEST_CASE("NR switches a PV bus at its reactive limit") {
    Network net = load_case_file(std::string(HELM_DATA_DIR) + "/fix3pv_qlim.json");
    NRConfig c;
    c.enforce_q_limits = true;
    NRResult r = newton_raphson(net, AdmittanceMatrix(net), c);
    REQUIRE(r.converged());
    CHECK(r.switched_buses == std::vector<int>{1});
    AdmittanceMatrix y(net);
    CHECK(injection(y, r.v, net.index_of(1)).imag() == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("warm start from the solution converges at once") {
    const cd s(-0.9, -0.4), z(0.03, 0.12);
    Network net = two_bus(s, z);
    AdmittanceMatrix y(net);
    NRResult a = newton_raphson(net, y, NRConfig{});
    NRConfig c;
    c.start = NRStart::Given;
    c.v0 = a.v;
    NRResult b = newton_raphson(net, y, c);
    REQUIRE(b.converged());
    CHECK(b.iterations <= 1);
}
