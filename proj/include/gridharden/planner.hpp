#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gridharden/cost_envelope.hpp"
#include "gridharden/feeder.hpp"
#include "gridharden/sequencer.hpp"

namespace gridharden {

/// Harm reduction per unit decrease of each job's repair time under a fixed
/// sequence: the job's weight plus the weights of every job after it.
using OmegaWeights = std::map<std::string, double>;

OmegaWeights omega_weights(const RepairSequence& sequence, const PrecedenceGraph& graph);

/// Absolute tolerance for "budget met exactly" decisions.
inline constexpr double kBudgetTolerance = 1e-9;

struct FractionalChoice {
  double dp = 0.0;
  double spend = 0.0;
};

/// Solution of the continuous knapsack over convex envelopes. At most one
/// edge (`fractional_edge`) ends strictly inside a segment.
struct FractionalPlan {
  std::map<std::string, FractionalChoice> choices;  // every envelope edge
  double budget = 0.0;
  double total_spend = 0.0;
  double objective = 0.0;  // sum of omega * dp with the final omega
  std::string fractional_edge;
};

/// Called by the greedy after each fully committed segment with the current
/// dp per edge; returns refreshed weights. Empty means weights stay fixed.
using Reweigher = std::function<OmegaWeights(const std::map<std::string, double>&)>;

/// Greedy LP: commit envelope segments by descending omega/slope (ties: edge
/// id, then segment index) until the budget is met exactly or every segment
/// is used. The one segment that does not fit is taken fractionally.
FractionalPlan greedy_lp(const std::vector<CostEnvelope>& envelopes, const OmegaWeights& omega,
                         double budget, const Reweigher& reweigh = {});

enum class ScheduleUpdate : int {
  kNever = 1,         // keep the initial sequence throughout
  kAfterEachLp = 2,   // re-sequence after every LP pass
  kAfterEachStep = 3, // re-sequence after every greedy commitment
};

ScheduleUpdate schedule_update_from(int option);

struct HardeningPlan {
  std::map<std::string, HardeningOption> choices;  // hardened edges only
  double spend = 0.0;
  double budget = 0.0;
  double residual = 0.0;
  int option = 0;  // 1..3 for the heuristic, 0 for the exact oracle
  std::map<std::string, double> hardened_times;  // every job
  RepairSequence sequence;
  double harm = 0.0;
  double unhardened_harm = 0.0;
  std::size_t passes = 0;
};

/// Rounds every edge down to the nearest envelope vertex at or below its
/// fractional dp. Vertices are real menu options, so the result is feasible.
HardeningPlan round_down(const FractionalPlan& plan, const std::vector<CostEnvelope>& envelopes);

/// Multi-pass hardening heuristic: sequence, omega, greedy LP, round down,
/// then backfill with the residual budget until it is spent or nothing
/// affordable remains. `option` picks how often the sequence is refreshed.
HardeningPlan plan(const PrecedenceGraph& graph, const std::vector<HardeningMenu>& menus, double budget,
                   int option = 1);
HardeningPlan plan(const FeederGraph& feeder, const DamageScenario& scenario,
                   const std::vector<HardeningMenu>& menus, double budget, int option = 1);

struct OracleLimits {
  std::size_t max_combinations = 1'000'000;
  std::size_t max_jobs = kDefaultSequenceOracleCap;
};

/// Exhaustive search over every affordable option combination, each
/// sequenced optimally. Ties go to the lexicographically smallest choice
/// vector (edges by id, "none" before options in increasing dp).
HardeningPlan exact_joint_oracle(const PrecedenceGraph& graph, const std::vector<HardeningMenu>& menus,
                                 double budget, const OracleLimits& limits = {});
HardeningPlan exact_joint_oracle(const FeederGraph& feeder, const DamageScenario& scenario,
                                 const std::vector<HardeningMenu>& menus, double budget,
                                 const OracleLimits& limits = {});

/// Menus restricted to the graph's jobs, dominance-filtered, sorted by edge
/// id, with every option checked against the job's repair time.
std::vector<HardeningMenu> prepare_menus(const PrecedenceGraph& graph, const std::vector<HardeningMenu>& menus);

/// Drops menus for intact feeder edges; unknown feeder edges are an error.
std::vector<HardeningMenu> damaged_edge_menus(const FeederGraph& feeder, const DamageScenario& scenario,
                                              const std::vector<HardeningMenu>& menus);

}  // namespace gridharden
