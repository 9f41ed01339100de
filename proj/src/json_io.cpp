#include "helm/json_io.hpp"

#include <sstream>

namespace helm {

using nlohmann::json;

namespace {

json pair(cd z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json to_json(const Network& net, const Solution& sol) {
    json j;
    j["feasible"] = sol.feasible;
    j["status"] = to_string(sol.status);
    j["variant"] = to_string(sol.variant);
    j["degree_used"] = sol.degree_used;
    j["mismatch_max"] = sol.mismatch_max;
    j["buses"] = json::array();
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Bus& b = net.buses()[i];
        json jb = {{"id", b.id}, {"kind", to_string(b.kind)}, {"v", pair(sol.v.at(i))}};
        if (auto it = sol.q.find(i); it != sol.q.end()) jb["q"] = it->second;
        if (auto it = sol.i_load.find(i); it != sol.i_load.end()) jb["i_load"] = pair(it->second);
        if (i < sol.mismatch.size()) jb["mismatch"] = pair(sol.mismatch[i]);
        j["buses"].push_back(jb);
    }
    j["branch_point"] = sol.branch_point ? pair(*sol.branch_point) : json(nullptr);
    if (sol.proximity.value)
        j["proximity"] = *sol.proximity.value;
    else
        j["proximity"] = "beyond horizon";
    const auto& f = sol.diagnostics.fabry;
    if (f.finite)
        j["fabry"] = {{"z_b", pair(f.z_b)}, {"modulus", f.modulus}, {"oscillating", f.oscillating}};
    j["switched_buses"] = sol.switched_buses;
    j["notes"] = sol.notes;
    return j;
}

json to_json(const Network& net, const NRResult& nr) {
    json j;
    j["status"] = to_string(nr.status);
    j["converged"] = nr.converged();
    j["iterations"] = nr.iterations;
    j["mismatch_max"] = nr.mismatch_max;
    j["trace"] = nr.trace;
    j["buses"] = json::array();
    for (std::size_t i = 0; i < net.size() && i < nr.v.size(); ++i)
        j["buses"].push_back({{"id", net.buses()[i].id}, {"v", pair(nr.v[i])}});
    j["switched_buses"] = nr.switched_buses;
    return j;
}

json to_json(const CriticalPointsResult& cp) {
    json j;
    j["points"] = json::array();
    for (const auto& p : cp.points)
        j["points"].push_back({{"z", pair(to_std(p.z))},
                               {"v", pair(to_std(p.v))},
                               {"residual", p.residual},
                               {"pair_distance", p.pair_distance},
                               {"derivative_residual", p.derivative_residual}});
    j["rejected"] = json::array();
    for (const auto& z : cp.rejected) j["rejected"].push_back(pair(to_std(z)));
    j["discriminant_degree"] = cp.discriminant_degree;
    j["samples"] = cp.samples;
    j["converged"] = cp.converged;
    if (!cp.diagnostic.empty()) j["diagnostic"] = cp.diagnostic;
    return j;
}

std::string series_csv(const Network& net, const SeriesSet& set) {
    PrecisionScope scope(set.mantissa_bits);
    std::ostringstream os;
    os << "bus,order,re,im\n";
    for (std::size_t i = 0; i < set.v.size(); ++i)
        for (std::size_t n = 0; n < set.v[i].size(); ++n)
            os << net.buses()[i].id << ',' << n << ',' << to_decimal(set.v[i][n]) << '\n';
    return os.str();
}

}  // namespace helm
