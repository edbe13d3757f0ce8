#include "gridharden/cost_envelope.hpp"

#include <algorithm>
#include <cmath>

#include "gridharden/error.hpp"

namespace gridharden {

namespace {

constexpr double kDomainSlack = 1e-12;

// z-component of (b - o) x (c - o).
double cross(const HardeningOption& o, const HardeningOption& b, const HardeningOption& c) {
  return (b.dp - o.dp) * (c.cost - o.cost) - (b.cost - o.cost) * (c.dp - o.dp);
}

}  // namespace

HardeningMenu filter_dominated(HardeningMenu menu) {
  auto& opts = menu.options;
  for (const auto& o : opts) {
    if (!std::isfinite(o.dp) || !std::isfinite(o.cost) || o.dp <= 0.0 || o.cost <= 0.0) {
      throw Error("invalid-menu", "edge '" + menu.edge + "' has an option with nonpositive dp or cost");
    }
  }
  // Largest dp first, cheapest first within equal dp; keep an option only if
  // it is strictly cheaper than everything reducing repair time at least as much.
  std::sort(opts.begin(), opts.end(), [](const HardeningOption& a, const HardeningOption& b) {
    return a.dp != b.dp ? a.dp > b.dp : a.cost < b.cost;
  });
  std::vector<HardeningOption> kept;
  for (const auto& o : opts) {
    if (kept.empty() || o.cost < kept.back().cost) kept.push_back(o);
  }
  std::reverse(kept.begin(), kept.end());
  opts = std::move(kept);
  return menu;
}

CostEnvelope convex_envelope(const HardeningMenu& menu) {
  CostEnvelope env;
  env.edge = menu.edge;
  for (std::size_t k = 0; k < menu.options.size(); ++k) {
    const auto& o = menu.options[k];
    if (o.dp <= 0.0 || o.cost <= 0.0) {
      throw Error("invalid-menu", "edge '" + menu.edge + "' has an option with nonpositive dp or cost");
    }
    if (k > 0 && (o.dp <= menu.options[k - 1].dp || o.cost <= menu.options[k - 1].cost)) {
      throw Error("invalid-menu", "edge '" + menu.edge + "' menu is not strictly increasing; filter it first");
    }
  }

  std::vector<HardeningOption> hull{{0.0, 0.0}};
  for (const auto& o : menu.options) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), o) < 0.0) hull.pop_back();
    hull.push_back(o);
  }

  for (std::size_t k = 1; k < hull.size(); ++k) {
    const auto& a = hull[k - 1];
    const auto& b = hull[k];
    env.segments.push_back({(b.cost - a.cost) / (b.dp - a.dp), a.cost, a.dp, b.dp});
    env.vertices.push_back(b);
  }
  return env;
}

double envelope_value(const CostEnvelope& envelope, double dp) {
  if (dp == 0.0) return 0.0;
  if (!(dp >= 0.0) || dp > envelope.max_dp() + kDomainSlack) {
    throw Error("domain", "dp outside envelope range for edge '" + envelope.edge + "'");
  }
  const auto it = std::lower_bound(envelope.segments.begin(), envelope.segments.end(), dp,
                                   [](const Segment& s, double x) { return s.upper < x; });
  const auto& seg = it == envelope.segments.end() ? envelope.segments.back() : *it;
  const auto k = static_cast<std::size_t>(&seg - envelope.segments.data());
  if (dp == seg.upper) return envelope.vertices[k].cost;
  return seg.intercept + seg.slope * (dp - seg.lower);
}

}  // namespace gridharden
