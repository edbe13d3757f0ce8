#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace gridharden {

struct Node {
  std::string id;
  double weight = 1.0;
};

struct Edge {
  std::string id;
  std::string from;
  std::string to;
};

/// Radial distribution network with a single energized source.
struct FeederGraph {
  std::string name;
  std::string source;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

struct DamagedEdge {
  std::string edge;
  double repair_time = 0.0;
};

struct DamageScenario {
  std::vector<DamagedEdge> damaged;
};

struct Violation {
  std::string code;
  std::string message;
};

/// Reports every structural problem with the feeder. An empty result means
/// the feeder is connected, radial, has unique ids, nonnegative weights and
/// an existing source.
std::vector<Violation> validate(const FeederGraph& feeder);

/// Checks a damage scenario against a feeder (known edges, no duplicates,
/// positive repair times).
std::vector<Violation> validate(const FeederGraph& feeder,
                                const DamageScenario& scenario);

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct Supernode {
  std::vector<std::string> members;  // sorted
  double weight = 0.0;
};

/// A damaged edge of the feeder, oriented away from the source.
struct Arc {
  std::string edge;
  std::size_t from = 0;
  std::size_t to = 0;
  double repair_time = 0.0;
};

/// Feeder with every intact-edge-connected component collapsed into a
/// supernode. Supernodes are ordered by their smallest member id and arcs by
/// edge id, so the structure does not depend on input ordering.
struct DamagedComponentGraph {
  std::vector<Supernode> supernodes;
  std::vector<Arc> arcs;
  std::size_t source_supernode = 0;
};

DamagedComponentGraph contract_intact(const FeederGraph& feeder,
                                      const DamageScenario& scenario);

/// Parent index used for jobs hanging directly off the energized source
/// component. The synthetic root has zero weight and zero repair time and is
/// never part of a sequence.
inline constexpr std::size_t kVirtualRoot = kNoIndex;

struct Job {
  std::string id;  // damaged edge id
  double weight = 0.0;
  double repair_time = 0.0;
  std::size_t parent = kVirtualRoot;
  std::vector<std::string> energized;
};

/// Outtree of repair jobs. Jobs are sorted by id; `parent` refers to indices
/// into `jobs`.
struct PrecedenceGraph {
  std::vector<Job> jobs;
  double source_weight = 0.0;  // weight energized at t = 0

  std::size_t size() const noexcept { return jobs.size(); }
  std::size_t index_of(const std::string& id) const;
  double total_weight() const;
  std::vector<double> repair_times() const;
  /// Copy with job repair times replaced (same job order).
  PrecedenceGraph with_repair_times(const std::vector<double>& times) const;
  /// Job indices ordered so that every parent precedes its children.
  std::vector<std::size_t> topological_order() const;
};

PrecedenceGraph build_precedence(const DamagedComponentGraph& g);

/// Convenience: validate, contract and build the precedence graph.
PrecedenceGraph precedence_from(const FeederGraph& feeder,
                                const DamageScenario& scenario);

}  // namespace gridharden
