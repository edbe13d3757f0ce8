#include "gridharden/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gridharden/error.hpp"

namespace gridharden {

OmegaWeights omega_weights(const RepairSequence& sequence, const PrecedenceGraph& graph) {
  OmegaWeights omega;
  double suffix = 0.0;
  for (auto k = sequence.jobs.size(); k-- > 0;) {
    suffix += graph.jobs[sequence.jobs[k]].weight;
    omega[graph.jobs[sequence.jobs[k]].id] = suffix;
  }
  return omega;
}

namespace {

struct Candidate {
  double omega;
  double slope;
  std::size_t envelope;
  std::size_t segment;
};

// True when a should be committed after b.
struct LaterThan {
  const std::vector<CostEnvelope>* envelopes;

  bool operator()(const Candidate& a, const Candidate& b) const {
    const double lhs = a.omega * b.slope;
    const double rhs = b.omega * a.slope;
    if (lhs != rhs) return lhs < rhs;
    const auto& ea = (*envelopes)[a.envelope].edge;
    const auto& eb = (*envelopes)[b.envelope].edge;
    if (ea != eb) return ea > eb;
    return a.segment > b.segment;
  }
};

double omega_of(const OmegaWeights& omega, const std::string& edge) {
  const auto it = omega.find(edge);
  if (it == omega.end()) throw Error("unknown-edge", "no omega weight for edge '" + edge + "'");
  return it->second;
}

}  // namespace

FractionalPlan greedy_lp(const std::vector<CostEnvelope>& envelopes, const OmegaWeights& omega, double budget,
                         const Reweigher& reweigh) {
  if (!std::isfinite(budget) || budget < 0.0) throw Error("invalid-budget", "budget must be finite and >= 0");

  const auto n = envelopes.size();
  std::vector<double> dp(n, 0.0);
  std::vector<double> spend(n, 0.0);
  std::vector<std::size_t> next(n, 0);
  std::vector<double> weights(n);
  for (std::size_t l = 0; l < n; ++l) weights[l] = omega_of(omega, envelopes[l].edge);

  const LaterThan later{&envelopes};
  std::vector<Candidate> heap;
  auto rebuild = [&] {
    heap.clear();
    for (std::size_t l = 0; l < n; ++l) {
      if (next[l] < envelopes[l].segments.size()) {
        heap.push_back({weights[l], envelopes[l].segments[next[l]].slope, l, next[l]});
      }
    }
    std::make_heap(heap.begin(), heap.end(), later);
  };
  rebuild();

  FractionalPlan out;
  out.budget = budget;
  double used = 0.0;
  std::size_t fractional = n;
  while (!heap.empty() && budget - used > kBudgetTolerance) {
    std::pop_heap(heap.begin(), heap.end(), later);
    const auto pick = heap.back();
    heap.pop_back();
    const auto l = pick.envelope;
    const auto& env = envelopes[l];
    const auto& seg = env.segments[pick.segment];
    const double increment = env.vertices[pick.segment].cost - spend[l];
    const double remaining = budget - used;

    if (increment > remaining + kBudgetTolerance) {
      // Only part of this segment fits: spend the budget exactly and stop.
      dp[l] = seg.lower + remaining / seg.slope;
      spend[l] = seg.intercept + remaining;
      used = budget;
      fractional = l;
      break;
    }
    dp[l] = seg.upper;
    spend[l] = env.vertices[pick.segment].cost;
    used += increment;
    ++next[l];

    if (reweigh) {
      std::map<std::string, double> current;
      for (std::size_t e = 0; e < n; ++e) current[envelopes[e].edge] = dp[e];
      const auto refreshed = reweigh(current);
      for (std::size_t e = 0; e < n; ++e) weights[e] = omega_of(refreshed, envelopes[e].edge);
      rebuild();
    } else if (next[l] < env.segments.size()) {
      heap.push_back({weights[l], env.segments[next[l]].slope, l, next[l]});
      std::push_heap(heap.begin(), heap.end(), later);
    }
  }

  for (std::size_t l = 0; l < n; ++l) {
    out.choices[envelopes[l].edge] = {dp[l], spend[l]};
    out.total_spend += spend[l];
    out.objective += weights[l] * dp[l];
  }
  if (fractional < n) out.fractional_edge = envelopes[fractional].edge;
  return out;
}

ScheduleUpdate schedule_update_from(int option) {
  switch (option) {
    case 1: return ScheduleUpdate::kNever;
    case 2: return ScheduleUpdate::kAfterEachLp;
    case 3: return ScheduleUpdate::kAfterEachStep;
    default: throw Error("invalid-option", "option must be 1, 2 or 3, got " + std::to_string(option));
  }
}

HardeningPlan round_down(const FractionalPlan& fp, const std::vector<CostEnvelope>& envelopes) {
  HardeningPlan out;
  out.budget = fp.budget;
  for (const auto& env : envelopes) {
    const auto it = fp.choices.find(env.edge);
    if (it == fp.choices.end()) continue;
    const double dp = it->second.dp;
    const HardeningOption* best = nullptr;
    for (const auto& v : env.vertices) {
      if (v.dp <= dp) best = &v;
    }
    if (best != nullptr) {
      out.choices[env.edge] = *best;
      out.spend += best->cost;
    }
  }
  out.residual = out.budget - out.spend;
  return out;
}

std::vector<HardeningMenu> prepare_menus(const PrecedenceGraph& graph, const std::vector<HardeningMenu>& menus) {
  std::vector<HardeningMenu> out;
  std::set<std::string> seen;
  for (const auto& menu : menus) {
    const auto j = graph.index_of(menu.edge);
    if (!seen.insert(menu.edge).second) {
      throw Error("duplicate-menu", "edge '" + menu.edge + "' has more than one menu");
    }
    auto filtered = filter_dominated(menu);
    if (filtered.options.empty()) continue;
    const double p = graph.jobs[j].repair_time;
    if (filtered.options.back().dp >= p) {
      throw Error("dp-exceeds-repair-time", "edge '" + menu.edge + "' has an option reducing repair time " +
                                                std::to_string(p) + " to zero or below");
    }
    out.push_back(std::move(filtered));
  }
  std::sort(out.begin(), out.end(), [](const HardeningMenu& a, const HardeningMenu& b) { return a.edge < b.edge; });
  return out;
}

std::vector<HardeningMenu> damaged_edge_menus(const FeederGraph& feeder, const DamageScenario& scenario,
                                              const std::vector<HardeningMenu>& menus) {
  std::set<std::string> edges;
  for (const auto& e : feeder.edges) edges.insert(e.id);
  std::set<std::string> damaged;
  for (const auto& d : scenario.damaged) damaged.insert(d.edge);
  std::vector<HardeningMenu> out;
  for (const auto& menu : menus) {
    if (!edges.count(menu.edge)) {
      throw Error("unknown-edge", "menu references edge '" + menu.edge + "' which is not in the feeder");
    }
    if (damaged.count(menu.edge)) out.push_back(menu);
  }
  return out;
}

namespace {

// Mutable state of one heuristic run over prepared menus.
class Planner {
public:
  Planner(const PrecedenceGraph& graph, std::vector<HardeningMenu> menus, double budget, ScheduleUpdate update)
      : graph_(graph),
        menus_(std::move(menus)),
        budget_(budget),
        update_(update),
        committed_(menus_.size(), kNoIndex),
        job_of_menu_(menus_.size()) {
    for (std::size_t m = 0; m < menus_.size(); ++m) job_of_menu_[m] = graph_.index_of(menus_[m].edge);
  }

  HardeningPlan run() {
    HardeningPlan out;
    out.budget = budget_;
    out.option = static_cast<int>(update_);
    const auto initial = optimal_sequence(graph_);
    out.unhardened_harm = initial.harm;
    OmegaWeights omega = omega_weights(initial, graph_);

    double residual = budget_;
    while (residual > kBudgetTolerance) {
      std::vector<CostEnvelope> envelopes;
      std::vector<std::size_t> menu_of_env;
      build_envelopes(residual, envelopes, menu_of_env);
      if (envelopes.empty()) break;

      Reweigher reweigh;
      if (update_ == ScheduleUpdate::kAfterEachStep) {
        reweigh = [&](const std::map<std::string, double>& pass_dp) {
          auto times = hardened_times();
          for (std::size_t e = 0; e < envelopes.size(); ++e) {
            times[job_of_menu_[menu_of_env[e]]] -= pass_dp.at(envelopes[e].edge);
          }
          return sequence_weights(times);
        };
      }
      const auto fractional = greedy_lp(envelopes, omega, residual, reweigh);
      const auto rounded = round_down(fractional, envelopes);
      ++out.passes;

      bool advanced = false;
      for (std::size_t e = 0; e < envelopes.size(); ++e) {
        const auto it = rounded.choices.find(envelopes[e].edge);
        if (it == rounded.choices.end()) continue;
        commit(menu_of_env[e], it->second);
        advanced = true;
      }
      if (!advanced) break;

      residual = budget_ - total_spend();
      if (update_ != ScheduleUpdate::kNever) omega = sequence_weights(hardened_times());
    }

    const auto times = hardened_times();
    for (std::size_t m = 0; m < menus_.size(); ++m) {
      if (committed_[m] != kNoIndex) out.choices[menus_[m].edge] = menus_[m].options[committed_[m]];
    }
    out.spend = total_spend();
    out.residual = budget_ - out.spend;
    for (std::size_t j = 0; j < graph_.size(); ++j) out.hardened_times[graph_.jobs[j].id] = times[j];
    out.sequence = optimal_sequence(graph_.with_repair_times(times));
    out.harm = out.sequence.harm;
    return out;
  }

private:
  HardeningOption committed_option(std::size_t m) const {
    return committed_[m] == kNoIndex ? HardeningOption{} : menus_[m].options[committed_[m]];
  }

  double total_spend() const {
    double total = 0.0;
    for (std::size_t m = 0; m < menus_.size(); ++m) total += committed_option(m).cost;
    return total;
  }

  std::vector<double> hardened_times() const {
    auto times = graph_.repair_times();
    for (std::size_t m = 0; m < menus_.size(); ++m) times[job_of_menu_[m]] -= committed_option(m).dp;
    return times;
  }

  OmegaWeights sequence_weights(const std::vector<double>& times) const {
    const auto h = graph_.with_repair_times(times);
    return omega_weights(optimal_sequence(h), h);
  }

  // Envelope per edge over the affordable options beyond its committed one,
  // in coordinates relative to the committed option.
  void build_envelopes(double residual, std::vector<CostEnvelope>& envelopes,
                       std::vector<std::size_t>& menu_of_env) const {
    for (std::size_t m = 0; m < menus_.size(); ++m) {
      const auto base = committed_option(m);
      HardeningMenu step{menus_[m].edge, {}};
      const auto first = committed_[m] == kNoIndex ? 0 : committed_[m] + 1;
      for (auto k = first; k < menus_[m].options.size(); ++k) {
        const auto& o = menus_[m].options[k];
        if (o.cost - base.cost > residual + kBudgetTolerance) break;
        step.options.push_back({o.dp - base.dp, o.cost - base.cost});
      }
      if (step.options.empty()) continue;
      envelopes.push_back(convex_envelope(step));
      menu_of_env.push_back(m);
    }
  }

  // Maps a vertex of a relative envelope back to the menu option it came from.
  void commit(std::size_t m, const HardeningOption& relative) {
    const auto base = committed_option(m);
    const auto first = committed_[m] == kNoIndex ? 0 : committed_[m] + 1;
    for (auto k = first; k < menus_[m].options.size(); ++k) {
      const auto& o = menus_[m].options[k];
      if (o.dp - base.dp == relative.dp && o.cost - base.cost == relative.cost) {
        committed_[m] = k;
        return;
      }
    }
    throw Error("internal", "rounded choice for edge '" + menus_[m].edge + "' is not a menu option");
  }

  const PrecedenceGraph& graph_;
  std::vector<HardeningMenu> menus_;
  double budget_;
  ScheduleUpdate update_;
  std::vector<std::size_t> committed_;
  std::vector<std::size_t> job_of_menu_;
};

void require_budget(double budget) {
  if (!std::isfinite(budget) || budget < 0.0) throw Error("invalid-budget", "budget must be finite and >= 0");
}

}  // namespace

HardeningPlan plan(const PrecedenceGraph& graph, const std::vector<HardeningMenu>& menus, double budget, int option) {
  const auto update = schedule_update_from(option);
  require_budget(budget);
  return Planner(graph, prepare_menus(graph, menus), budget, update).run();
}

HardeningPlan plan(const FeederGraph& feeder, const DamageScenario& scenario, const std::vector<HardeningMenu>& menus,
                   double budget, int option) {
  schedule_update_from(option);
  const auto graph = precedence_from(feeder, scenario);
  return plan(graph, damaged_edge_menus(feeder, scenario, menus), budget, option);
}

HardeningPlan exact_joint_oracle(const PrecedenceGraph& graph, const std::vector<HardeningMenu>& menus, double budget,
                                 const OracleLimits& limits) {
  require_budget(budget);
  if (graph.size() > limits.max_jobs) {
    throw Error("oracle-too-large", "joint oracle limited to " + std::to_string(limits.max_jobs) + " jobs");
  }
  const auto prepared = prepare_menus(graph, menus);
  std::size_t combinations = 1;
  for (const auto& m : prepared) {
    const auto factor = m.options.size() + 1;
    if (combinations > limits.max_combinations / factor) {
      throw Error("oracle-too-large", "joint oracle limited to " + std::to_string(limits.max_combinations) +
                                          " option combinations");
    }
    combinations *= factor;
  }
  if (combinations > limits.max_combinations) {
    throw Error("oracle-too-large", "joint oracle limited to " + std::to_string(limits.max_combinations) +
                                        " option combinations");
  }

  std::vector<std::size_t> job(prepared.size());
  for (std::size_t m = 0; m < prepared.size(); ++m) job[m] = graph.index_of(prepared[m].edge);

  const auto base_times = graph.repair_times();
  auto times = base_times;
  auto scratch = graph;
  std::vector<std::size_t> choice(prepared.size(), kNoIndex);
  std::vector<std::size_t> best_choice = choice;
  double best_harm = std::numeric_limits<double>::infinity();

  // Depth-first in lexicographic choice order; "none" precedes every option
  // and options are increasing in cost, so the budget cut is a break.
  auto search = [&](auto&& self, std::size_t m, double spent) -> void {
    if (m == prepared.size()) {
      for (std::size_t j = 0; j < times.size(); ++j) scratch.jobs[j].repair_time = times[j];
      const double h = optimal_sequence(scratch).harm;
      if (h < best_harm) {
        best_harm = h;
        best_choice = choice;
      }
      return;
    }
    choice[m] = kNoIndex;
    self(self, m + 1, spent);
    for (std::size_t k = 0; k < prepared[m].options.size(); ++k) {
      const auto& o = prepared[m].options[k];
      if (spent + o.cost > budget + kBudgetTolerance) break;
      choice[m] = k;
      times[job[m]] = base_times[job[m]] - o.dp;
      self(self, m + 1, spent + o.cost);
    }
    choice[m] = kNoIndex;
    times[job[m]] = base_times[job[m]];
  };
  search(search, 0, 0.0);

  HardeningPlan out;
  out.budget = budget;
  out.option = 0;
  out.unhardened_harm = optimal_sequence(graph).harm;
  times = base_times;
  for (std::size_t m = 0; m < prepared.size(); ++m) {
    if (best_choice[m] == kNoIndex) continue;
    const auto& o = prepared[m].options[best_choice[m]];
    out.choices[prepared[m].edge] = o;
    out.spend += o.cost;
    times[job[m]] -= o.dp;
  }
  out.residual = budget - out.spend;
  for (std::size_t j = 0; j < graph.size(); ++j) out.hardened_times[graph.jobs[j].id] = times[j];
  out.sequence = optimal_sequence(graph.with_repair_times(times));
  out.harm = out.sequence.harm;
  return out;
}

HardeningPlan exact_joint_oracle(const FeederGraph& feeder, const DamageScenario& scenario,
                                 const std::vector<HardeningMenu>& menus, double budget, const OracleLimits& limits) {
  const auto graph = precedence_from(feeder, scenario);
  return exact_joint_oracle(graph, damaged_edge_menus(feeder, scenario, menus), budget, limits);
}

}  // namespace gridharden
