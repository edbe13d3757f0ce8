#include "gridharden/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

#include "gridharden/error.hpp"
#include "gridharden/generator.hpp"
#include "gridharden/io.hpp"
#include "gridharden/planner.hpp"
#include "gridharden/sequencer.hpp"
#include "gridharden/stochastic.hpp"

namespace gridharden {

namespace {

constexpr double kAgreementTolerance = 1e-9;

bool same_harm(double a, double b) {
  return std::abs(a - b) <= kAgreementTolerance * std::max(1.0, std::abs(a));
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << json{{"error", code}, {"message", message}}.dump() << '\n';
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_text_file(cfg.out, text);
  }
}

const std::string& need_path(const std::string& path, const char* flag) {
  if (path.empty()) throw Error("missing-argument", std::string("--") + flag + " is required");
  return path;
}

struct Inputs {
  FeederGraph feeder;
  DamageScenario scenario;
  std::vector<HardeningMenu> menus;
  PrecedenceGraph graph;
};

Inputs load(const RunConfig& cfg, std::ostream& err, bool with_menu) {
  const ParseOptions parse{cfg.strict, &err};
  Inputs in;
  in.feeder = parse_feeder(read_json_file(need_path(cfg.feeder, "feeder")), parse);
  in.scenario = parse_scenario(read_json_file(need_path(cfg.scenario, "scenario")), parse);
  in.graph = precedence_from(in.feeder, in.scenario);
  if (with_menu) {
    in.menus = damaged_edge_menus(in.feeder, in.scenario,
                                  parse_menus(read_json_file(need_path(cfg.menu, "menu")), parse));
  }
  return in;
}

double need_budget(const RunConfig& cfg) {
  if (!cfg.budget) throw Error("missing-argument", "--budget is required");
  if (!std::isfinite(*cfg.budget) || *cfg.budget < 0.0) throw Error("invalid-budget", "budget must be >= 0");
  return *cfg.budget;
}

std::uint64_t need_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw Error("missing-argument", "--seed is required for sampling commands");
  return *cfg.seed;
}

std::vector<double> hardened_vector(const PrecedenceGraph& graph, const HardeningPlan& plan) {
  std::vector<double> times(graph.size());
  for (std::size_t j = 0; j < graph.size(); ++j) times[j] = plan.hardened_times.at(graph.jobs[j].id);
  return times;
}

EvalReport evaluate_times(const RunConfig& cfg, const PrecedenceGraph& graph, const std::vector<double>& times) {
  MonteCarloOptions mc;
  mc.samples = cfg.samples.value_or(10'000);
  mc.seed = need_seed(cfg);
  if (cfg.pmax) mc.pmax = std::vector<double>(graph.size(), *cfg.pmax);
  return monte_carlo_expected_harm(graph, times, mc);
}

}  // namespace

BudgetGrid BudgetGrid::parse(const std::string& spec) {
  BudgetGrid grid;
  std::istringstream in(spec);
  in.imbue(std::locale::classic());
  char c1 = 0, c2 = 0;
  if (!(in >> grid.start >> c1 >> grid.stop >> c2 >> grid.step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw Error("invalid-grid", "budget grid must look like start:stop:step, got '" + spec + "'");
  }
  if (grid.start < 0.0 || grid.stop < grid.start || !(grid.step > 0.0)) {
    throw Error("invalid-grid", "budget grid needs 0 <= start <= stop and step > 0");
  }
  return grid;
}

std::vector<double> BudgetGrid::values() const {
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  return out;
}

int cmd_sequence(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto in = load(cfg, err, false);
  const auto seq = optimal_sequence(in.graph);
  auto doc = to_json(seq);
  bool ok = true;
  if (cfg.oracle) {
    const auto oracle = brute_force_sequence(in.graph);
    doc["oracle"] = to_json(oracle);
    ok = same_harm(seq.harm, oracle.harm);
    doc["agrees"] = ok;
  }
  emit(cfg, out, doc.dump(2) + "\n");
  if (!ok) report_error(err, "oracle-disagrees", "optimal sequence harm differs from the exhaustive search");
  return ok ? 0 : 1;
}

int cmd_harden(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto in = load(cfg, err, true);
  const double budget = need_budget(cfg);
  const auto result = plan(in.graph, in.menus, budget, cfg.option);
  auto doc = to_json(result);
  bool ok = true;
  if (cfg.exact) {
    const auto oracle = exact_joint_oracle(in.graph, in.menus, budget);
    doc["oracle"] = to_json(oracle);
    doc["ratio"] = oracle.harm > 0.0 ? result.harm / oracle.harm : 1.0;
    ok = oracle.harm <= result.harm + kAgreementTolerance * std::max(1.0, result.harm);
  }
  emit(cfg, out, doc.dump(2) + "\n");
  if (!ok) report_error(err, "oracle-worse", "exact oracle harm exceeds the heuristic harm");
  return ok ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.budgets) throw Error("missing-argument", "--budgets start:stop:step is required");
  const auto in = load(cfg, err, true);
  const bool sampled = cfg.seed.has_value();

  std::string csv = sampled ? "budget,f_of_mean,mc_mean,mc_stderr\n" : "budget,f_of_mean\n";
  double previous = std::numeric_limits<double>::infinity();
  std::optional<double> violation;
  for (const double budget : cfg.budgets->values()) {
    const auto result = plan(in.graph, in.menus, budget, cfg.option);
    csv += format_number(budget) + ',' + format_number(result.harm);
    if (sampled) {
      const auto report = evaluate_times(cfg, in.graph, hardened_vector(in.graph, result));
      csv += ',' + format_number(report.mean) + ',' + format_number(report.stderr_);
    }
    csv += '\n';
    if (!violation && result.harm > previous + kAgreementTolerance * std::max(1.0, previous)) violation = budget;
    previous = result.harm;
  }
  emit(cfg, out, csv);
  if (violation) {
    report_error(err, "non-monotone", "harm increased at budget " + format_number(*violation));
    return 1;
  }
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  need_seed(cfg);
  const bool hardened = !cfg.menu.empty();
  const auto in = load(cfg, err, hardened);
  auto times = in.graph.repair_times();
  if (hardened) times = hardened_vector(in.graph, plan(in.graph, in.menus, need_budget(cfg), cfg.option));

  const auto report = evaluate_times(cfg, in.graph, times);
  emit(cfg, out, to_json(report).dump(2) + "\n");

  if (!cfg.trajectory.empty()) {
    const auto expected = in.graph.with_repair_times(times);
    const auto seq = optimal_sequence(expected);
    double total = 0.0;
    for (const double t : times) total += t;
    write_text_file(cfg.trajectory, trajectory_csv(trajectory(seq, expected, cfg.horizon.value_or(total))));
  }
  return 0;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  GeneratorSettings settings;
  settings.nodes = cfg.nodes;
  settings.damaged = cfg.damaged;
  settings.seed = need_seed(cfg);
  settings.options_per_edge = cfg.options_per_edge;
  const auto inst = generate_instance(settings);

  if (cfg.out.empty()) {
    json doc{{"feeder", to_json(inst.feeder)}, {"scenario", to_json(inst.scenario)}, {"menu", to_json(inst.menus)}};
    out << doc.dump(2) << '\n';
    return 0;
  }
  const std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("io-error", "cannot create directory '" + cfg.out + "': " + ec.message());
  write_text_file((dir / "feeder.json").string(), to_json(inst.feeder).dump(2) + "\n");
  write_text_file((dir / "scenario.json").string(), to_json(inst.scenario).dump(2) + "\n");
  write_text_file((dir / "menu.json").string(), to_json(inst.menus).dump(2) + "\n");
  return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ParseOptions parse{cfg.strict, &err};
  const auto feeder = parse_feeder(read_json_file(need_path(cfg.feeder, "feeder")), parse);
  auto violations = validate(feeder);

  std::optional<DamageScenario> scenario;
  if (!cfg.scenario.empty()) {
    scenario = parse_scenario(read_json_file(cfg.scenario), parse);
    for (auto& v : validate(feeder, *scenario)) violations.push_back(std::move(v));
  }
  if (!cfg.menu.empty()) {
    const auto menus = parse_menus(read_json_file(cfg.menu), parse);
    std::set<std::string> edges;
    for (const auto& e : feeder.edges) edges.insert(e.id);
    std::map<std::string, double> repair;
    if (scenario) {
      for (const auto& d : scenario->damaged) repair[d.edge] = d.repair_time;
    }
    for (const auto& menu : menus) {
      if (!edges.count(menu.edge)) {
        violations.push_back({"unknown-edge", "menu references edge '" + menu.edge + "' which is not in the feeder"});
        continue;
      }
      try {
        const auto filtered = filter_dominated(menu);
        const auto it = repair.find(menu.edge);
        if (it != repair.end() && !filtered.options.empty() && filtered.options.back().dp >= it->second) {
          violations.push_back({"dp-exceeds-repair-time",
                                "edge '" + menu.edge + "' has an option reducing repair time to zero or below"});
        }
      } catch (const Error& e) {
        violations.push_back({e.code(), e.what()});
      }
    }
  }

  json doc{{"ok", violations.empty()}, {"violations", json::array()}};
  for (const auto& v : violations) doc["violations"].push_back({{"code", v.code}, {"message", v.message}});
  emit(cfg, out, doc.dump(2) + "\n");
  return violations.empty() ? 0 : 1;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "sequence") return cmd_sequence(cfg, out, err);
    if (cfg.command == "harden") return cmd_harden(cfg, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
    if (cfg.command == "evaluate") return cmd_evaluate(cfg, out, err);
    if (cfg.command == "generate") return cmd_generate(cfg, out, err);
    if (cfg.command == "validate") return cmd_validate(cfg, out, err);
    throw Error("unknown-command", "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
  }
  return 2;
}

}  // namespace gridharden
