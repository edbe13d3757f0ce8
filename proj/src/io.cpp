#include "gridharden/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <set>
#include <sstream>

#include "gridharden/error.hpp"

namespace gridharden {

namespace {

void check_fields(const json& obj, std::initializer_list<const char*> allowed, const std::string& where,
                  const ParseOptions& options) {
  if (!obj.is_object()) throw Error("parse-error", where + " must be a JSON object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (known.count(item.key())) continue;
    if (options.strict) throw Error("unknown-field", "unknown field '" + item.key() + "' in " + where);
    if (options.warnings) *options.warnings << "warning: ignoring unknown field '" << item.key() << "' in " << where << '\n';
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error("parse-error", std::string("missing field '") + key + "' in " + where);
  return *it;
}

std::string text(const json& value, const std::string& what) {
  if (!value.is_string()) throw Error("parse-error", what + " must be a string");
  return value.get<std::string>();
}

double number(const json& value, const std::string& what) {
  if (!value.is_number()) throw Error("parse-error", what + " must be a number");
  return value.get<double>();
}

const json& array(const json& value, const std::string& what) {
  if (!value.is_array()) throw Error("parse-error", what + " must be an array");
  return value;
}

}  // namespace

FeederGraph parse_feeder(const json& doc, const ParseOptions& options) {
  check_fields(doc, {"name", "source", "nodes", "edges"}, "feeder", options);
  FeederGraph feeder;
  if (doc.contains("name")) feeder.name = text(doc["name"], "feeder name");

  const auto& source = require(doc, "source", "feeder");
  if (source.is_array()) {
    if (source.size() != 1) throw Error("multiple-sources", "exactly one source node is supported");
    feeder.source = text(source[0], "source");
  } else {
    feeder.source = text(source, "source");
  }

  for (const auto& n : array(require(doc, "nodes", "feeder"), "nodes")) {
    check_fields(n, {"id", "weight"}, "node", options);
    Node node;
    node.id = text(require(n, "id", "node"), "node id");
    if (n.contains("weight")) node.weight = number(n["weight"], "weight of node '" + node.id + "'");
    feeder.nodes.push_back(std::move(node));
  }
  for (const auto& e : array(require(doc, "edges", "feeder"), "edges")) {
    check_fields(e, {"id", "from", "to"}, "edge", options);
    Edge edge;
    edge.id = text(require(e, "id", "edge"), "edge id");
    edge.from = text(require(e, "from", "edge '" + edge.id + "'"), "edge endpoint");
    edge.to = text(require(e, "to", "edge '" + edge.id + "'"), "edge endpoint");
    feeder.edges.push_back(std::move(edge));
  }
  return feeder;
}

DamageScenario parse_scenario(const json& doc, const ParseOptions& options) {
  check_fields(doc, {"damaged"}, "scenario", options);
  DamageScenario scenario;
  for (const auto& d : array(require(doc, "damaged", "scenario"), "damaged")) {
    check_fields(d, {"edge", "repair_time"}, "damaged entry", options);
    DamagedEdge entry;
    entry.edge = text(require(d, "edge", "damaged entry"), "damaged edge");
    entry.repair_time = number(require(d, "repair_time", "damaged entry"), "repair_time");
    scenario.damaged.push_back(std::move(entry));
  }
  return scenario;
}

std::vector<HardeningMenu> parse_menus(const json& doc, const ParseOptions& options) {
  check_fields(doc, {"options"}, "menu", options);
  const auto& all = require(doc, "options", "menu");
  if (!all.is_object()) throw Error("parse-error", "menu options must be an object keyed by edge id");
  std::vector<HardeningMenu> menus;
  for (const auto& item : all.items()) {
    HardeningMenu menu;
    menu.edge = item.key();
    for (const auto& o : array(item.value(), "options of edge '" + menu.edge + "'")) {
      check_fields(o, {"dp", "cost"}, "option of edge '" + menu.edge + "'", options);
      menu.options.push_back({number(require(o, "dp", "option"), "dp"), number(require(o, "cost", "option"), "cost")});
    }
    menus.push_back(std::move(menu));
  }
  return menus;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("parse-error", "'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("io-error", "failed writing '" + path + "'");
}

json to_json(const FeederGraph& feeder) {
  json doc;
  doc["name"] = feeder.name;
  doc["source"] = feeder.source;
  doc["nodes"] = json::array();
  for (const auto& n : feeder.nodes) doc["nodes"].push_back({{"id", n.id}, {"weight", n.weight}});
  doc["edges"] = json::array();
  for (const auto& e : feeder.edges) doc["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}});
  return doc;
}

json to_json(const DamageScenario& scenario) {
  json doc;
  doc["damaged"] = json::array();
  for (const auto& d : scenario.damaged) doc["damaged"].push_back({{"edge", d.edge}, {"repair_time", d.repair_time}});
  return doc;
}

json to_json(const std::vector<HardeningMenu>& menus) {
  json options = json::object();
  for (const auto& m : menus) {
    auto& list = options[m.edge] = json::array();
    for (const auto& o : m.options) list.push_back({{"dp", o.dp}, {"cost", o.cost}});
  }
  return {{"options", options}};
}

json to_json(const RepairSequence& sequence) {
  json doc;
  doc["order"] = sequence.order;
  doc["completion"] = json::object();
  doc["energization"] = json::object();
  for (std::size_t k = 0; k < sequence.order.size(); ++k) {
    doc["completion"][sequence.order[k]] = sequence.completion[k];
    doc["energization"][sequence.order[k]] = sequence.energization[k];
  }
  doc["harm"] = sequence.harm;
  return doc;
}

json to_json(const HardeningPlan& plan) {
  json doc;
  doc["plan"] = json::object();
  for (const auto& [edge, o] : plan.choices) doc["plan"][edge] = {{"dp", o.dp}, {"cost", o.cost}};
  doc["table"] = json::array();
  for (const auto& [edge, time] : plan.hardened_times) {
    const auto it = plan.choices.find(edge);
    doc["table"].push_back({{"edge", edge}, {"dp", it == plan.choices.end() ? 0.0 : it->second.dp}});
  }
  doc["spend"] = plan.spend;
  doc["budget"] = plan.budget;
  doc["residual"] = plan.residual;
  doc["sequence"] = plan.sequence.order;
  doc["harm"] = plan.harm;
  doc["unhardened_harm"] = plan.unhardened_harm;
  doc["option"] = plan.option;
  return doc;
}

json to_json(const EvalReport& report) {
  json doc;
  doc["samples"] = report.samples;
  doc["seed"] = report.seed;
  doc["mean"] = report.mean;
  doc["stderr"] = report.stderr_;
  doc["f_of_mean"] = report.f_of_mean;
  doc["jensen_bound"] = report.jensen_bound ? json(*report.jensen_bound) : json(nullptr);
  return doc;
}

std::string format_number(double value) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << value;
  return os.str();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "time,Q\n";
  for (const auto& p : trajectory.points) {
    out += format_number(p.time) + ',' + format_number(p.operability) + '\n';
  }
  if (!trajectory.points.empty() && trajectory.horizon > trajectory.points.back().time) {
    out += format_number(trajectory.horizon) + ',' + format_number(trajectory.points.back().operability) + '\n';
  }
  return out;
}

}  // namespace gridharden
