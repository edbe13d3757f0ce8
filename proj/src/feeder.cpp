#include "gridharden/feeder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "gridharden/error.hpp"

namespace gridharden {

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

std::unordered_map<std::string, std::size_t> node_index(const FeederGraph& feeder) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(feeder.nodes.size());
  for (std::size_t i = 0; i < feeder.nodes.size(); ++i) {
    index.emplace(feeder.nodes[i].id, i);
  }
  return index;
}

void require_valid(const FeederGraph& feeder, const DamageScenario& scenario) {
  auto violations = validate(feeder);
  if (violations.empty()) violations = validate(feeder, scenario);
  if (!violations.empty()) {
    throw Error(violations.front().code, violations.front().message);
  }
}

}  // namespace

std::vector<Violation> validate(const FeederGraph& feeder) {
  std::vector<Violation> out;

  std::set<std::string> seen_nodes;
  for (const auto& n : feeder.nodes) {
    if (!seen_nodes.insert(n.id).second) {
      out.push_back({"duplicate-node", "node id '" + n.id + "' appears more than once"});
    }
    if (!std::isfinite(n.weight) || n.weight < 0.0) {
      out.push_back({"negative-weight", "node '" + n.id + "' has a negative or non-finite weight"});
    }
  }
  if (feeder.source.empty() || !seen_nodes.count(feeder.source)) {
    out.push_back({"missing-source", "source node '" + feeder.source + "' is not a node of the feeder"});
  }

  std::set<std::string> seen_edges;
  bool endpoints_ok = true;
  for (const auto& e : feeder.edges) {
    if (!seen_edges.insert(e.id).second) {
      out.push_back({"duplicate-edge", "edge id '" + e.id + "' appears more than once"});
    }
    for (const auto* end : {&e.from, &e.to}) {
      if (!seen_nodes.count(*end)) {
        out.push_back({"unknown-endpoint", "edge '" + e.id + "' references unknown node '" + *end + "'"});
        endpoints_ok = false;
      }
    }
  }

  if (!feeder.nodes.empty() && feeder.edges.size() + 1 != feeder.nodes.size()) {
    out.push_back({"not-radial", "edge count " + std::to_string(feeder.edges.size()) +
                                     " differs from node count - 1 = " +
                                     std::to_string(feeder.nodes.size() - 1)});
  }
  if (feeder.nodes.empty()) {
    out.push_back({"empty-feeder", "feeder has no nodes"});
  }

  if (endpoints_ok && !feeder.nodes.empty()) {
    const auto index = node_index(feeder);
    DisjointSets sets(feeder.nodes.size());
    std::size_t components = feeder.nodes.size();
    for (const auto& e : feeder.edges) {
      if (sets.unite(index.at(e.from), index.at(e.to))) {
        --components;
      } else {
        out.push_back({"not-radial", "edge '" + e.id + "' closes a cycle"});
      }
    }
    if (components > 1) {
      out.push_back({"disconnected", "feeder has " + std::to_string(components) + " connected components"});
    }
  }
  return out;
}

std::vector<Violation> validate(const FeederGraph& feeder, const DamageScenario& scenario) {
  std::vector<Violation> out;
  std::set<std::string> edges;
  for (const auto& e : feeder.edges) edges.insert(e.id);
  std::set<std::string> seen;
  for (const auto& d : scenario.damaged) {
    if (!edges.count(d.edge)) {
      out.push_back({"unknown-edge", "damaged edge '" + d.edge + "' is not an edge of the feeder"});
    }
    if (!seen.insert(d.edge).second) {
      out.push_back({"duplicate-damage", "edge '" + d.edge + "' is listed as damaged more than once"});
    }
    if (!std::isfinite(d.repair_time) || d.repair_time <= 0.0) {
      out.push_back({"nonpositive-repair-time", "edge '" + d.edge + "' must have a positive repair time"});
    }
  }
  return out;
}

DamagedComponentGraph contract_intact(const FeederGraph& feeder, const DamageScenario& scenario) {
  require_valid(feeder, scenario);

  const auto index = node_index(feeder);
  std::unordered_map<std::string, double> damaged;
  for (const auto& d : scenario.damaged) damaged.emplace(d.edge, d.repair_time);

  DisjointSets sets(feeder.nodes.size());
  for (const auto& e : feeder.edges) {
    if (!damaged.count(e.id)) sets.unite(index.at(e.from), index.at(e.to));
  }

  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < feeder.nodes.size(); ++i) {
    groups[sets.find(i)].push_back(feeder.nodes[i].id);
  }

  DamagedComponentGraph g;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    g.supernodes.push_back({std::move(members), 0.0});
  }
  std::sort(g.supernodes.begin(), g.supernodes.end(),
            [](const Supernode& a, const Supernode& b) { return a.members.front() < b.members.front(); });

  std::unordered_map<std::string, std::size_t> owner;
  for (std::size_t s = 0; s < g.supernodes.size(); ++s) {
    for (const auto& m : g.supernodes[s].members) owner.emplace(m, s);
  }
  for (const auto& n : feeder.nodes) g.supernodes[owner.at(n.id)].weight += n.weight;
  g.source_supernode = owner.at(feeder.source);

  // Orient damaged edges away from the source supernode.
  std::vector<std::vector<std::pair<std::size_t, const Edge*>>> adjacent(g.supernodes.size());
  for (const auto& e : feeder.edges) {
    if (!damaged.count(e.id)) continue;
    const auto a = owner.at(e.from);
    const auto b = owner.at(e.to);
    adjacent[a].emplace_back(b, &e);
    adjacent[b].emplace_back(a, &e);
  }
  std::vector<bool> visited(g.supernodes.size(), false);
  std::queue<std::size_t> frontier;
  frontier.push(g.source_supernode);
  visited[g.source_supernode] = true;
  while (!frontier.empty()) {
    const auto s = frontier.front();
    frontier.pop();
    for (const auto& [t, edge] : adjacent[s]) {
      if (visited[t]) continue;
      visited[t] = true;
      g.arcs.push_back({edge->id, s, t, damaged.at(edge->id)});
      frontier.push(t);
    }
  }
  std::sort(g.arcs.begin(), g.arcs.end(), [](const Arc& a, const Arc& b) { return a.edge < b.edge; });
  return g;
}

PrecedenceGraph build_precedence(const DamagedComponentGraph& g) {
  const auto n_super = g.supernodes.size();
  if (g.source_supernode >= n_super) {
    throw Error("missing-source", "source supernode index out of range");
  }

  std::vector<std::size_t> incoming(n_super, kNoIndex);
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const auto& arc = g.arcs[a];
    if (arc.from >= n_super || arc.to >= n_super) {
      throw Error("unknown-endpoint", "arc '" + arc.edge + "' references a missing supernode");
    }
    if (arc.to == g.source_supernode || incoming[arc.to] != kNoIndex) {
      throw Error("not-radial", "supernode reached by more than one damaged edge (arc '" + arc.edge + "')");
    }
    incoming[arc.to] = a;
  }

  std::vector<std::size_t> order(g.arcs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return g.arcs[a].edge < g.arcs[b].edge; });
  std::vector<std::size_t> job_of_arc(g.arcs.size());
  for (std::size_t j = 0; j < order.size(); ++j) job_of_arc[order[j]] = j;

  PrecedenceGraph p;
  p.source_weight = g.supernodes[g.source_supernode].weight;
  p.jobs.reserve(g.arcs.size());
  for (const auto a : order) {
    const auto& arc = g.arcs[a];
    Job job;
    job.id = arc.edge;
    job.weight = g.supernodes[arc.to].weight;
    job.repair_time = arc.repair_time;
    job.energized = g.supernodes[arc.to].members;
    if (arc.from == g.source_supernode) {
      job.parent = kVirtualRoot;
    } else if (incoming[arc.from] == kNoIndex) {
      throw Error("disconnected", "arc '" + arc.edge + "' starts at a supernode unreachable from the source");
    } else {
      job.parent = job_of_arc[incoming[arc.from]];
    }
    p.jobs.push_back(std::move(job));
  }

  // Reject cycles among parent links (possible only for hand-built graphs).
  if (p.topological_order().size() != p.size()) {
    throw Error("not-radial", "damaged edges do not form an outtree rooted at the source");
  }
  return p;
}

PrecedenceGraph precedence_from(const FeederGraph& feeder, const DamageScenario& scenario) {
  return build_precedence(contract_intact(feeder, scenario));
}

std::size_t PrecedenceGraph::index_of(const std::string& id) const {
  const auto it = std::lower_bound(jobs.begin(), jobs.end(), id,
                                   [](const Job& j, const std::string& key) { return j.id < key; });
  if (it == jobs.end() || it->id != id) {
    throw Error("unknown-edge", "'" + id + "' is not a job of the precedence graph");
  }
  return static_cast<std::size_t>(it - jobs.begin());
}

double PrecedenceGraph::total_weight() const {
  double total = source_weight;
  for (const auto& j : jobs) total += j.weight;
  return total;
}

std::vector<double> PrecedenceGraph::repair_times() const {
  std::vector<double> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) out.push_back(j.repair_time);
  return out;
}

PrecedenceGraph PrecedenceGraph::with_repair_times(const std::vector<double>& times) const {
  if (times.size() != jobs.size()) {
    throw Error("size-mismatch", "repair time vector length differs from job count");
  }
  PrecedenceGraph copy = *this;
  for (std::size_t i = 0; i < jobs.size(); ++i) copy.jobs[i].repair_time = times[i];
  return copy;
}

std::vector<std::size_t> PrecedenceGraph::topological_order() const {
  std::vector<std::vector<std::size_t>> children(jobs.size());
  std::vector<std::size_t> out;
  out.reserve(jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].parent == kVirtualRoot) {
      out.push_back(j);
    } else if (jobs[j].parent < jobs.size()) {
      children[jobs[j].parent].push_back(j);
    }
  }
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto c : children[out[head]]) out.push_back(c);
  }
  return out;
}

}  // namespace gridharden
