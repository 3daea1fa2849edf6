#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kinex/config.hpp"

namespace kinex {

struct PresetMember {
  std::string label;
  RunConfig config;
  std::string description;
  std::size_t runs = 1;
};

// Parameterizations behind figure ids fig1 ... fig7. Throws
// std::invalid_argument for an unknown id.
std::vector<PresetMember> preset(std::string_view figure_id);

std::vector<std::string> preset_ids();

}  // namespace kinex
