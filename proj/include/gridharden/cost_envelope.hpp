#pragma once

#include <string>
#include <vector>

namespace gridharden {

/// One discrete hardening strategy: reduction in expected repair time and
/// what it costs.
struct HardeningOption {
  double dp = 0.0;
  double cost = 0.0;

  friend bool operator==(const HardeningOption&, const HardeningOption&) = default;
};

struct HardeningMenu {
  std::string edge;
  std::vector<HardeningOption> options;
};

/// One linear piece of a convex envelope: cost(dp) = intercept + slope * (dp - lower)
/// on [lower, upper].
struct Segment {
  double slope = 0.0;
  double intercept = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Lower convex envelope of {(0,0)} plus a filtered menu. `vertices[k]` is
/// the option at the upper end of `segments[k]`; every vertex is a real menu
/// option.
struct CostEnvelope {
  std::string edge;
  std::vector<Segment> segments;
  std::vector<HardeningOption> vertices;

  bool empty() const noexcept { return segments.empty(); }
  double max_dp() const noexcept { return segments.empty() ? 0.0 : segments.back().upper; }
  double max_cost() const noexcept { return vertices.empty() ? 0.0 : vertices.back().cost; }
};

/// Drops every option beaten by another that reduces repair time at least as
/// much for no more money. The result is strictly increasing in both dp and
/// cost; identical duplicates collapse to one.
HardeningMenu filter_dominated(HardeningMenu menu);

/// Lower convex hull through the origin and the (filtered) menu options.
/// Collinear hull points stay as breakpoints.
CostEnvelope convex_envelope(const HardeningMenu& menu);

/// Piecewise-linear envelope value. Throws Error("domain") outside
/// [0, max_dp].
double envelope_value(const CostEnvelope& envelope, double dp);

}  // namespace gridharden
