#pragma once

#include "helm/bivariate.hpp"
#include "helm/oracle.hpp"
#include "helm/solve.hpp"

#include <json.hpp>

namespace helm {

nlohmann::json to_json(const Network& net, const Solution& sol);
nlohmann::json to_json(const Network& net, const NRResult& nr);
nlohmann::json to_json(const CriticalPointsResult& cp);

/// Per-bus series dump: bus,order,re,im at full precision.
std::string series_csv(const Network& net, const SeriesSet& set);

}  // namespace helm
