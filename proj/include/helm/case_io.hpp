#pragma once

#include "helm/network.hpp"

#include <string>

namespace helm {

/// Parses a JSON case. Complex values are [re, im] pairs; consumption is negative.
Network parse_case(const std::string& text);
Network load_case_file(const std::string& path);

/// Inverse of parse_case; doubles are written with round-trip precision.
std::string serialize_case(const Network& net);

std::string read_text_file(const std::string& path);

}  // namespace helm
