#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gridharden/feeder.hpp"
#include "gridharden/sequencer.hpp"

namespace gridharden {

/// One draw of every job's repair time. Reproducible from
/// (seed, index) alone.
struct ScenarioSample {
  std::map<std::string, double> repair_times;
  std::size_t index = 0;
  std::uint64_t seed = 0;
};

/// Geometric repair time on {1, 2, ...} with mean `expected`; means below 1
/// are returned unchanged. With `cap`, draws above it are rejected and
/// redrawn (support truncated to {1, ..., floor(cap)}).
class RepairTimeSampler {
public:
  RepairTimeSampler(std::uint64_t seed, std::size_t index);
  double draw(double expected, std::optional<double> cap = std::nullopt);

private:
  std::mt19937_64 engine_;
};

ScenarioSample sample_scenario(const std::map<std::string, double>& expected, std::uint64_t seed,
                               std::size_t index);

/// Mean of the (possibly truncated) repair time distribution used by the
/// sampler.
double distribution_mean(double expected, std::optional<double> cap = std::nullopt);

struct EvalReport {
  double mean = 0.0;
  double stderr_ = 0.0;  // zero for a single sample
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double f_of_mean = 0.0;
  std::optional<double> jensen_bound;  // f(pmax) - 2 f(pmax / 2)
};

struct MonteCarloOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  /// Per-job upper bound on repair time (aligned with the graph's jobs).
  /// When set, sampling is truncated to it and the worst-case Jensen gap is
  /// reported.
  std::optional<std::vector<double>> pmax;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Monte Carlo estimate of the expected optimal harm when each job's repair
/// time is drawn independently around `expected` (aligned with the graph's
/// jobs). `f_of_mean` is the optimal harm at the distribution means.
EvalReport monte_carlo_expected_harm(const PrecedenceGraph& graph, const std::vector<double>& expected,
                                     const MonteCarloOptions& options);

struct TrajectoryPoint {
  double time = 0.0;
  double operability = 0.0;  // holds from `time` until the next point
};

/// Operability Q(t): fraction of total node weight energized, as a step
/// function over [0, horizon]. `resilience` is the area under it.
struct Trajectory {
  std::vector<TrajectoryPoint> points;
  double horizon = 0.0;
  double resilience = 0.0;
};

Trajectory trajectory(const RepairSequence& sequence, const PrecedenceGraph& graph, double horizon);

}  // namespace gridharden
