#include "gridharden/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gridharden/error.hpp"

namespace gridharden {

namespace {

void require_expected(double expected, std::optional<double> cap) {
  if (!std::isfinite(expected) || expected <= 0.0) {
    throw Error("nonpositive-repair-time", "expected repair time must be positive");
  }
  if (cap && (*cap < expected || (expected >= 1.0 && *cap < 1.0))) {
    throw Error("domain", "repair time cap lies below the expected repair time");
  }
}

std::mt19937_64 engine_for(std::uint64_t seed, std::size_t index) {
  // Counter-based split: every sample owns an engine derived from (seed, index).
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RepairTimeSampler::RepairTimeSampler(std::uint64_t seed, std::size_t index) : engine_(engine_for(seed, index)) {}

double RepairTimeSampler::draw(double expected, std::optional<double> cap) {
  require_expected(expected, cap);
  if (expected <= 1.0) return expected;
  std::geometric_distribution<long long> failures(1.0 / expected);
  const auto limit = cap ? std::floor(*cap) : std::numeric_limits<double>::infinity();
  for (;;) {
    const auto value = static_cast<double>(failures(engine_) + 1);
    if (value <= limit) return value;
  }
}

double distribution_mean(double expected, std::optional<double> cap) {
  require_expected(expected, cap);
  if (expected <= 1.0 || !cap) return expected;
  const double q = 1.0 / expected;
  const double r = 1.0 - q;
  const double m = std::floor(*cap);
  const double rm = std::pow(r, m);
  return (1.0 - (m + 1.0) * rm + m * rm * r) / (q * (1.0 - rm));
}

ScenarioSample sample_scenario(const std::map<std::string, double>& expected, std::uint64_t seed, std::size_t index) {
  ScenarioSample out;
  out.seed = seed;
  out.index = index;
  RepairTimeSampler sampler(seed, index);
  for (const auto& [edge, mean] : expected) out.repair_times[edge] = sampler.draw(mean);
  return out;
}

EvalReport monte_carlo_expected_harm(const PrecedenceGraph& graph, const std::vector<double>& expected,
                                     const MonteCarloOptions& options) {
  if (options.samples == 0) throw Error("invalid-samples", "sample count must be at least 1");
  if (expected.size() != graph.size()) throw Error("size-mismatch", "expected times do not match job count");
  const auto& pmax = options.pmax;
  if (pmax && pmax->size() != graph.size()) throw Error("size-mismatch", "pmax does not match job count");
  auto cap_of = [&](std::size_t j) { return pmax ? std::optional<double>((*pmax)[j]) : std::nullopt; };

  std::vector<double> means(graph.size());
  for (std::size_t j = 0; j < graph.size(); ++j) means[j] = distribution_mean(expected[j], cap_of(j));

  std::vector<double> harms(options.samples);
  auto work = [&](std::size_t begin, std::size_t end) {
    auto scratch = graph;
    for (auto i = begin; i < end; ++i) {
      RepairTimeSampler sampler(options.seed, i);
      for (std::size_t j = 0; j < graph.size(); ++j) {
        scratch.jobs[j].repair_time = sampler.draw(expected[j], cap_of(j));
      }
      harms[i] = optimal_sequence(scratch).harm;
    }
  };

  auto threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (options.samples + 255) / 256));
  if (threads <= 1) {
    work(0, options.samples);
  } else {
    std::vector<std::jthread> pool;
    const auto chunk = (options.samples + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const auto begin = std::min<std::size_t>(t * chunk, options.samples);
      const auto end = std::min<std::size_t>(begin + chunk, options.samples);
      pool.emplace_back(work, begin, end);
    }
  }

  // Fixed-order reduction keeps the report independent of the thread count.
  EvalReport report;
  report.samples = options.samples;
  report.seed = options.seed;
  double sum = 0.0;
  for (const double h : harms) sum += h;
  report.mean = sum / static_cast<double>(harms.size());
  if (harms.size() > 1) {
    double ss = 0.0;
    for (const double h : harms) ss += (h - report.mean) * (h - report.mean);
    const double variance = ss / static_cast<double>(harms.size() - 1);
    report.stderr_ = std::sqrt(variance / static_cast<double>(harms.size()));
  }
  report.f_of_mean = optimal_sequence(graph.with_repair_times(means)).harm;
  if (pmax) {
    std::vector<double> half(pmax->size());
    std::transform(pmax->begin(), pmax->end(), half.begin(), [](double p) { return p / 2.0; });
    report.jensen_bound = optimal_sequence(graph.with_repair_times(*pmax)).harm -
                          2.0 * optimal_sequence(graph.with_repair_times(half)).harm;
  }
  return report;
}

Trajectory trajectory(const RepairSequence& sequence, const PrecedenceGraph& graph, double horizon) {
  if (sequence.jobs.size() != graph.size()) {
    throw Error("size-mismatch", "sequence does not cover every job");
  }
  double last = 0.0;
  for (const double t : sequence.energization) last = std::max(last, t);
  if (!std::isfinite(horizon) || horizon < last) {
    throw Error("domain", "horizon " + std::to_string(horizon) + " ends before the last energization at " +
                              std::to_string(last));
  }

  Trajectory out;
  out.horizon = horizon;
  const double total = graph.total_weight();
  if (total <= 0.0) {
    out.points.push_back({0.0, 1.0});
    out.resilience = horizon;
    return out;
  }

  std::vector<std::pair<double, double>> events;  // (energization time, weight)
  events.reserve(sequence.jobs.size());
  for (std::size_t k = 0; k < sequence.jobs.size(); ++k) {
    events.emplace_back(sequence.energization[k], graph.jobs[sequence.jobs[k]].weight);
  }
  std::sort(events.begin(), events.end());

  double energized = graph.source_weight;
  double time = 0.0;
  double area = 0.0;  // integral of energized weight
  std::size_t e = 0;
  while (e < events.size() && events[e].first <= 0.0) energized += events[e++].second;
  out.points.push_back({0.0, energized / total});
  while (e < events.size()) {
    const double at = events[e].first;
    area += energized * (at - time);
    time = at;
    while (e < events.size() && events[e].first == at) energized += events[e++].second;
    out.points.push_back({at, energized / total});
  }
  area += energized * (horizon - time);
  out.resilience = area / total;
  return out;
}

}  // namespace gridharden
