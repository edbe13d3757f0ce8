#include "gridharden/generator.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "gridharden/error.hpp"

namespace gridharden {

namespace {

std::string padded(char prefix, std::size_t value, std::size_t width) {
  auto digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

}  // namespace

Instance generate_instance(const GeneratorSettings& settings) {
  if (settings.nodes < 2) throw Error("infeasible-size", "a feeder needs at least two nodes");
  if (settings.damaged > settings.nodes - 1) {
    throw Error("infeasible-size", "damaged count " + std::to_string(settings.damaged) +
                                       " exceeds edge count " + std::to_string(settings.nodes - 1));
  }
  if (settings.max_repair_time < 1) throw Error("infeasible-size", "max repair time must be at least 1");

  std::mt19937_64 rng(settings.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto width = std::to_string(settings.nodes - 1).size();

  Instance inst;
  auto& feeder = inst.feeder;
  feeder.name = "random-" + std::to_string(settings.nodes) + "-" + std::to_string(settings.damaged) + "-" +
                std::to_string(settings.seed);
  feeder.source = padded('n', 0, width);
  feeder.nodes.push_back({feeder.source, 0.5 + unit(rng)});
  for (std::size_t i = 1; i < settings.nodes; ++i) {
    const auto parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    feeder.nodes.push_back({padded('n', i, width), 0.5 + unit(rng)});
    feeder.edges.push_back({padded('e', i, width), feeder.nodes[parent].id, feeder.nodes[i].id});
  }

  // Partial Fisher-Yates over edge indices.
  std::vector<std::size_t> pick(feeder.edges.size());
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  for (std::size_t i = 0; i < settings.damaged; ++i) {
    const auto j = std::uniform_int_distribution<std::size_t>(i, pick.size() - 1)(rng);
    std::swap(pick[i], pick[j]);
  }
  pick.resize(settings.damaged);
  std::sort(pick.begin(), pick.end());

  std::uniform_int_distribution<int> repair(1, settings.max_repair_time);
  for (const auto e : pick) {
    const auto& edge = feeder.edges[e].id;
    const double p = repair(rng);
    inst.scenario.damaged.push_back({edge, p});

    // Distinct reductions in (0, 0.9 p), costs with random positive increments.
    std::vector<double> fractions(settings.options_per_edge);
    for (auto& f : fractions) f = 0.05 + 0.85 * unit(rng);
    std::sort(fractions.begin(), fractions.end());
    fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
    HardeningMenu menu{edge, {}};
    double cost = 0.0;
    for (const double f : fractions) {
      cost += 0.25 + 2.0 * unit(rng);
      menu.options.push_back({f * p, cost});
    }
    if (!menu.options.empty()) inst.menus.push_back(std::move(menu));
  }
  return inst;
}

}  // namespace gridharden
