#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gridharden/cost_envelope.hpp"
#include "gridharden/feeder.hpp"

namespace gridharden {

struct GeneratorSettings {
  std::size_t nodes = 13;
  std::size_t damaged = 4;
  std::uint64_t seed = 0;
  std::size_t options_per_edge = 3;
  int max_repair_time = 10;  // repair times are integers in [1, max]
};

struct Instance {
  FeederGraph feeder;
  DamageScenario scenario;
  std::vector<HardeningMenu> menus;
};

/// Random radial feeder (each node attaches to a uniformly chosen earlier
/// node), weights uniform on [0.5, 1.5), a uniformly random damaged subset
/// with integer repair times, and strictly monotone menus whose largest
/// reduction stays below the repair time. Same settings, same instance.
Instance generate_instance(const GeneratorSettings& settings);

}  // namespace gridharden
