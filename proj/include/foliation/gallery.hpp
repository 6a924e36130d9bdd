#pragma once

// Named scenarios with fixed default seeds.

#include <optional>
#include <string_view>
#include <vector>

#include "foliation/scenario.hpp"

namespace foliation {

const std::vector<ScenarioSpec>& gallery_list();

std::optional<ScenarioSpec> gallery_find(std::string_view name);

// A section named after a gallery entry starts from that entry's defaults;
// any other section must set kind.
std::vector<ScenarioSpec> specs_from_sections(const std::vector<ScenarioSection>& sections);

}  // namespace foliation
