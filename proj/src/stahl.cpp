#include "helm/stahl.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace helm {

std::string zero_pole_csv(const ZeroPoleSet& zp) {
    std::ostringstream os;
    os << "kind,re,im,residual,is_doublet\n" << std::setprecision(17);
    auto emit = [&](const char* kind, const RootInfo& r) {
        auto z = to_std(r.z);
        os << kind << ',' << z.real() << ',' << z.imag() << ',' << r.residual << ',' << (r.doublet ? 1 : 0) << '\n';
    };
    for (const auto& r : zp.zeros) emit("zero", r);
    for (const auto& r : zp.poles) emit("pole", r);
    return os.str();
}

StahlExport stahl_export(const ZeroPoleSet& zp, const std::optional<FabryEstimate>& fabry) {
    StahlExport out;
    out.csv = zero_pole_csv(zp);
    out.records = zp.zeros.size() + zp.poles.size();
    std::vector<std::complex<double>> poles;
    for (const auto& p : zp.poles)
        if (!p.doublet) poles.push_back(to_std(p.z));
    out.candidates = density_maxima(poles, kDensityBandwidth);

    nlohmann::json j;
    j["zeros"] = zp.zeros.size();
    j["poles"] = zp.poles.size();
    j["doublets"] = zp.doublets.size();
    j["converged"] = zp.converged;
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : out.candidates) {
        nlohmann::json jc = {{"z", {c.real(), c.imag()}}};
        if (fabry && fabry->finite) {
            double dist = fabry->oscillating ? std::abs(std::abs(c) - fabry->modulus) : std::abs(c - fabry->z_b);
            jc["confirmed"] = dist < kConfirmRadius;
        }
        j["candidates"].push_back(jc);
    }
    if (fabry) {
        j["fabry"] = {{"z_b", {fabry->z_b.real(), fabry->z_b.imag()}},
                      {"modulus", fabry->modulus},
                      {"oscillating", fabry->oscillating},
                      {"finite", fabry->finite}};
    }
    out.summary_json = j.dump(2);
    return out;
}

}  // namespace helm
