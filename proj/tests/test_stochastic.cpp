#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "gridharden/error.hpp"
#include "gridharden/stochastic.hpp"
#include "support/instances.hpp"

using namespace gridharden;

namespace {

PrecedenceGraph independent(std::vector<double> weights, std::vector<double> times) {
  PrecedenceGraph g;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    g.jobs.push_back({"j" + std::to_string(j), weights[j], times[j], kVirtualRoot, {}});
  }
  return g;
}

}  // namespace

TEST_CASE("degenerate and sub-unit means are constants") {
  RepairTimeSampler sampler(5, 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(sampler.draw(1.0) == 1.0);
    CHECK(sampler.draw(0.5) == 0.5);
  }
  CHECK(distribution_mean(0.5) == 0.5);
  CHECK(distribution_mean(4.0) == 4.0);
}

TEST_CASE("geometric draws have the requested mean") {
  RepairTimeSampler sampler(11, 3);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sampler.draw(4.0);
    REQUIRE(x >= 1.0);
    REQUIRE(x == std::floor(x));
    sum += x;
  }
  CHECK(std::abs(sum / n - 4.0) < 0.02);
}

TEST_CASE("truncated draws stay within the cap and match the truncated mean") {
  RepairTimeSampler sampler(2, 9);
  const int n = 400'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sampler.draw(4.0, 6.0);
    REQUIRE(x <= 6.0);
    sum += x;
  }
  // Direct sum over the support {1..6} of a geometric with q = 1/4.
  const double q = 0.25;
  double mass = 0.0, first = 0.0;
  for (int k = 1; k <= 6; ++k) {
    const double pk = q * std::pow(1.0 - q, k - 1);
    mass += pk;
    first += k * pk;
  }
  CHECK(distribution_mean(4.0, 6.0) == doctest::Approx(first / mass).epsilon(1e-12));
  CHECK(std::abs(sum / n - first / mass) < 0.01);
}

TEST_CASE("scenario samples are reproducible from seed and index") {
  const std::map<std::string, double> expected{{"a", 3.0}, {"b", 7.5}, {"c", 0.25}};
  const auto s1 = sample_scenario(expected, 42, 17);
  const auto s2 = sample_scenario(expected, 42, 17);
  CHECK(s1.repair_times == s2.repair_times);
  CHECK(s1.repair_times.at("c") == 0.25);
  CHECK(s1.index == 17);
  CHECK(s1.seed == 42);
  CHECK_THROWS_AS(sample_scenario({{"a", 0.0}}, 1, 0), Error);
}

TEST_CASE("single job expected harm is its expected repair time") {
  const auto g = independent({1.0}, {4.0});
  MonteCarloOptions options;
  options.samples = 20'000;
  options.seed = 3;
  const auto report = monte_carlo_expected_harm(g, {4.0}, options);
  CHECK(report.samples == 20'000);
  CHECK(report.f_of_mean == 4.0);
  CHECK(report.stderr_ > 0.0);
  CHECK(std::abs(report.mean - 4.0) <= 3.0 * report.stderr_);
  CHECK_FALSE(report.jensen_bound.has_value());
}

TEST_CASE("one sample reports that sample's harm and zero standard error") {
  const auto g = independent({1.0, 2.0}, {3.0, 5.0});
  MonteCarloOptions options;
  options.samples = 1;
  options.seed = 77;
  const auto report = monte_carlo_expected_harm(g, {3.0, 5.0}, options);
  CHECK(report.stderr_ == 0.0);
  const auto sample = sample_scenario({{"j0", 3.0}, {"j1", 5.0}}, 77, 0);
  const auto drawn = g.with_repair_times({sample.repair_times.at("j0"), sample.repair_times.at("j1")});
  CHECK(report.mean == optimal_sequence(drawn).harm);
}

TEST_CASE("two independent jobs satisfy the Jensen upper bound") {
  const auto g = independent({1.0, 1.0}, {2.0, 2.0});
  MonteCarloOptions options;
  options.samples = 100'000;
  options.seed = 12;
  const auto report = monte_carlo_expected_harm(g, {2.0, 2.0}, options);
  CHECK(report.f_of_mean == 6.0);
  CHECK(report.mean <= report.f_of_mean + 3.0 * report.stderr_);
}

TEST_CASE("report is independent of thread count") {
  std::mt19937_64 rng(5);
  const auto g = testing::random_outtree(rng, 12);
  MonteCarloOptions options;
  options.samples = 3'000;
  options.seed = 99;
  options.threads = 1;
  const auto one = monte_carlo_expected_harm(g, g.repair_times(), options);
  for (unsigned threads : {2u, 3u, 8u}) {
    options.threads = threads;
    const auto many = monte_carlo_expected_harm(g, g.repair_times(), options);
    CHECK(many.mean == one.mean);
    CHECK(many.stderr_ == one.stderr_);
  }
}

TEST_CASE("worst-case gap term under truncated sampling") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = testing::random_outtree(rng, 6);
    std::vector<double> cap;
    for (const auto p : g.repair_times()) cap.push_back(2.0 * p + 2.0);
    MonteCarloOptions options;
    options.samples = 5'000;
    options.seed = 1000 + trial;
    options.pmax = cap;
    const auto report = monte_carlo_expected_harm(g, g.repair_times(), options);
    REQUIRE(report.jensen_bound.has_value());

    const double f_max = optimal_sequence(g.with_repair_times(cap)).harm;
    std::vector<double> half;
    for (const auto c : cap) half.push_back(c / 2.0);
    CHECK(*report.jensen_bound == doctest::Approx(f_max - 2.0 * optimal_sequence(g.with_repair_times(half)).harm));
    // Harm is positively homogeneous in the repair times, so the term vanishes.
    CHECK(std::abs(*report.jensen_bound) <= 1e-9 * f_max);
    CHECK(report.mean <= report.f_of_mean + 3.0 * report.stderr_);
  }
}

TEST_CASE("truncated two-job instance has a strictly positive Jensen gap") {
  // f = p0 + p1 + min(p0, p1), so the gap is min of the means minus E[min] > 0.
  const auto g = independent({1.0, 1.0}, {2.0, 2.0});
  MonteCarloOptions options;
  options.samples = 20'000;
  options.seed = 4;
  options.pmax = std::vector<double>{6.0, 6.0};
  const auto report = monte_carlo_expected_harm(g, {2.0, 2.0}, options);
  CHECK(report.f_of_mean - report.mean > 3.0 * report.stderr_);
  CHECK(report.f_of_mean - report.mean > *report.jensen_bound + 3.0 * report.stderr_);
}

TEST_CASE("single job trajectory") {
  PrecedenceGraph g = independent({1.0}, {2.0});
  g.source_weight = 1.0;
  const auto t = trajectory(optimal_sequence(g), g, 4.0);
  REQUIRE(t.points.size() == 2);
  CHECK(t.points[0].time == 0.0);
  CHECK(t.points[0].operability == 0.5);
  CHECK(t.points[1].time == 2.0);
  CHECK(t.points[1].operability == 1.0);
  CHECK(t.resilience == 3.0);
}

TEST_CASE("undamaged network is fully operable") {
  PrecedenceGraph g;
  g.source_weight = 13.0;
  const auto t = trajectory(optimal_sequence(g), g, 7.5);
  CHECK(t.points.size() == 1);
  CHECK(t.points[0].operability == 1.0);
  CHECK(t.resilience == 7.5);
}

TEST_CASE("trajectory area matches harm for arbitrary orders") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::random_outtree(rng, 1 + trial % 15);
    g.source_weight = trial % 4;
    // A random valid order: repeatedly pick a random ready job.
    std::vector<std::size_t> ready, chosen;
    std::vector<bool> done(g.size(), false);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g.jobs[j].parent == kVirtualRoot) ready.push_back(j);
    }
    while (!ready.empty()) {
      const auto pick = std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng);
      const auto j = ready[pick];
      ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
      chosen.push_back(j);
      for (std::size_t c = 0; c < g.size(); ++c) {
        if (g.jobs[c].parent == j) ready.push_back(c);
      }
    }
    REQUIRE(chosen.size() == g.size());
    const auto seq = evaluate_order(g, chosen);
    double total_time = 0.0;
    for (const auto p : g.repair_times()) total_time += p;
    const double horizon = total_time + trial % 3;
    const auto t = trajectory(seq, g, horizon);
    CHECK(g.total_weight() * (horizon - t.resilience) == doctest::Approx(seq.harm).epsilon(1e-12));
    for (std::size_t k = 1; k < t.points.size(); ++k) {
      CHECK(t.points[k].operability >= t.points[k - 1].operability);
    }
    CHECK(t.points.back().operability == doctest::Approx(1.0));
  }
}

TEST_CASE("horizon before the last energization is a domain error") {
  const auto g = independent({1.0}, {2.0});
  try {
    trajectory(optimal_sequence(g), g, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "domain");
  }
}
