#pragma once

#include "helm/pade.hpp"
#include "helm/singularity.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace helm {

struct StahlExport {
    /// kind,re,im,residual,is_doublet
    std::string csv;
    std::string summary_json;
    std::size_t records = 0;
    std::vector<std::complex<double>> candidates;
};

std::string zero_pole_csv(const ZeroPoleSet& zp);

/// Zero-pole records plus accumulation candidates (pole-density maxima). When a
/// ratio estimate is supplied, candidates within the confirmation radius are marked.
StahlExport stahl_export(const ZeroPoleSet& zp, const std::optional<FabryEstimate>& fabry = std::nullopt);

}  // namespace helm
