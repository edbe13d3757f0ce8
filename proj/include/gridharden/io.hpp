#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "gridharden/cost_envelope.hpp"
#include "gridharden/feeder.hpp"
#include "gridharden/planner.hpp"
#include "gridharden/sequencer.hpp"
#include "gridharden/stochastic.hpp"

namespace gridharden {

using json = nlohmann::json;

/// Strict parsing rejects unknown fields; lenient parsing reports them on
/// `warnings` (when set) and carries on.
struct ParseOptions {
  bool strict = false;
  std::ostream* warnings = nullptr;
};

FeederGraph parse_feeder(const json& doc, const ParseOptions& options = {});
DamageScenario parse_scenario(const json& doc, const ParseOptions& options = {});
std::vector<HardeningMenu> parse_menus(const json& doc, const ParseOptions& options = {});

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json to_json(const FeederGraph& feeder);
json to_json(const DamageScenario& scenario);
json to_json(const std::vector<HardeningMenu>& menus);
json to_json(const RepairSequence& sequence);
json to_json(const HardeningPlan& plan);
json to_json(const EvalReport& report);

/// Locale-independent decimal with 17 significant digits.
std::string format_number(double value);

/// "time,Q" rows.
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace gridharden
