#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gridharden/feeder.hpp"

namespace gridharden {

/// A single-crew repair order with its timing. `completion` and
/// `energization` are aligned with `order` (position i belongs to order[i]).
struct RepairSequence {
  std::vector<std::size_t> jobs;   // job indices into the precedence graph
  std::vector<std::string> order;  // the same jobs by edge id
  std::vector<double> completion;
  std::vector<double> energization;
  double harm = 0.0;
};

/// Group bookkeeping for the outtree merging algorithm. Each live group is a
/// chain of jobs that will be processed back to back; merging a group into
/// the group holding its predecessor appends its chain.
class MergeState {
public:
  explicit MergeState(const PrecedenceGraph& graph);

  /// Merges the best group into its predecessor's group; false once only
  /// the root group remains.
  bool merge_next();
  /// Job order of the root group (excluding the synthetic root).
  std::vector<std::size_t> order() const;

  double group_weight(std::size_t group) const { return weight_[group]; }
  double group_time(std::size_t group) const { return time_[group]; }
  std::size_t live_groups() const noexcept { return live_; }

private:
  struct Candidate {
    double weight;
    double time;
    std::size_t smallest;  // smallest job index in the group (= lexicographic id)
    std::size_t group;
    std::size_t version;
  };
  struct Worse {
    bool operator()(const Candidate& a, const Candidate& b) const;
  };

  std::size_t find(std::size_t group);
  void push(std::size_t group);

  // Group g corresponds to job g - 1; group 0 is the synthetic root.
  std::vector<std::size_t> pred_job_;  // predecessor group of each group's head job
  std::vector<double> weight_;
  std::vector<double> time_;
  std::vector<std::size_t> smallest_;
  std::vector<std::size_t> version_;
  std::vector<std::size_t> owner_;  // union-find over groups
  std::vector<std::size_t> next_;   // job chain links
  std::vector<std::size_t> last_;   // last job of each group's chain
  std::vector<Candidate> heap_;
  std::size_t live_ = 0;
};

/// Harm-minimizing single-crew repair sequence for an outtree of jobs,
/// O(n log n). Ties between equally good groups go to the group whose
/// smallest job id is lexicographically least.
RepairSequence optimal_sequence(const PrecedenceGraph& graph);

/// Evaluates any permutation of the jobs under soft precedence: a job's
/// supernode energizes at max(own completion, parent's energization).
RepairSequence evaluate_order(const PrecedenceGraph& graph, const std::vector<std::string>& order);
RepairSequence evaluate_order(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs);

/// Harm of an index order without building a RepairSequence.
double order_harm(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs);

inline constexpr std::size_t kDefaultSequenceOracleCap = 9;

/// Exhaustive search over all job permutations. Ties resolve to the
/// lexicographically smallest order. Throws Error("oracle-too-large") above
/// `max_jobs`.
RepairSequence brute_force_sequence(const PrecedenceGraph& graph,
                                    std::size_t max_jobs = kDefaultSequenceOracleCap);

/// True when every job appears after its parent.
bool respects_precedence(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs);

}  // namespace gridharden
