#include "gridharden/sequencer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridharden/error.hpp"

namespace gridharden {

namespace {

void require_positive_times(const PrecedenceGraph& graph) {
  for (const auto& job : graph.jobs) {
    if (!std::isfinite(job.repair_time) || job.repair_time <= 0.0) {
      throw Error("nonpositive-repair-time", "job '" + job.id + "' must have a positive repair time");
    }
    if (!std::isfinite(job.weight) || job.weight < 0.0) {
      throw Error("negative-weight", "job '" + job.id + "' has a negative or non-finite weight");
    }
  }
}

// Energization times indexed by job, given completion times indexed by job.
std::vector<double> energization_times(const PrecedenceGraph& graph,
                                       const std::vector<std::size_t>& topo,
                                       const std::vector<double>& completion) {
  std::vector<double> energized(graph.size(), 0.0);
  for (const auto j : topo) {
    const auto parent = graph.jobs[j].parent;
    const double upstream = parent == kVirtualRoot ? 0.0 : energized[parent];
    energized[j] = std::max(completion[j], upstream);
  }
  return energized;
}

void require_permutation(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs) {
  if (jobs.size() != graph.size()) {
    throw Error("not-a-permutation", "order has " + std::to_string(jobs.size()) + " jobs, expected " +
                                         std::to_string(graph.size()));
  }
  std::vector<bool> seen(graph.size(), false);
  for (const auto j : jobs) {
    if (j >= graph.size() || seen[j]) {
      throw Error("not-a-permutation", "order repeats a job or names an unknown job");
    }
    seen[j] = true;
  }
}

// Fast harm evaluation reused by the exhaustive search.
class HarmEvaluator {
public:
  explicit HarmEvaluator(const PrecedenceGraph& graph)
      : graph_(graph), topo_(graph.topological_order()), completion_(graph.size()) {}

  double operator()(const std::vector<std::size_t>& jobs) {
    double t = 0.0;
    for (const auto j : jobs) {
      t += graph_.jobs[j].repair_time;
      completion_[j] = t;
    }
    const auto energized = energization_times(graph_, topo_, completion_);
    double harm = 0.0;
    for (const auto j : jobs) harm += graph_.jobs[j].weight * energized[j];
    return harm;
  }

private:
  const PrecedenceGraph& graph_;
  std::vector<std::size_t> topo_;
  std::vector<double> completion_;
};

}  // namespace

bool MergeState::Worse::operator()(const Candidate& a, const Candidate& b) const {
  // q(a) < q(b) compared by cross-multiplication, avoiding the division.
  const double lhs = a.weight * b.time;
  const double rhs = b.weight * a.time;
  if (lhs != rhs) return lhs < rhs;
  return a.smallest > b.smallest;
}

MergeState::MergeState(const PrecedenceGraph& graph) {
  const auto groups = graph.size() + 1;
  pred_job_.assign(groups, 0);
  weight_.assign(groups, 0.0);
  time_.assign(groups, 0.0);
  smallest_.resize(groups);
  version_.assign(groups, 0);
  owner_.resize(groups);
  next_.assign(groups, kNoIndex);
  last_.resize(groups);
  std::iota(owner_.begin(), owner_.end(), std::size_t{0});
  std::iota(last_.begin(), last_.end(), std::size_t{0});
  smallest_[0] = kNoIndex;
  for (std::size_t g = 1; g < groups; ++g) {
    const auto& job = graph.jobs[g - 1];
    pred_job_[g] = job.parent == kVirtualRoot ? 0 : job.parent + 1;
    weight_[g] = job.weight;
    time_[g] = job.repair_time;
    smallest_[g] = g - 1;
  }
  heap_.reserve(2 * groups);
  for (std::size_t g = 1; g < groups; ++g) push(g);
  live_ = groups;
}

std::size_t MergeState::find(std::size_t group) {
  auto root = group;
  while (owner_[root] != root) root = owner_[root];
  while (owner_[group] != root) {
    const auto up = owner_[group];
    owner_[group] = root;
    group = up;
  }
  return root;
}

void MergeState::push(std::size_t group) {
  heap_.push_back({weight_[group], time_[group], smallest_[group], group, version_[group]});
  std::push_heap(heap_.begin(), heap_.end(), Worse{});
}

bool MergeState::merge_next() {
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), Worse{});
    const auto top = heap_.back();
    heap_.pop_back();
    const auto j = top.group;
    if (owner_[j] != j || version_[j] != top.version) continue;  // stale entry

    const auto i = find(pred_job_[j]);
    weight_[i] += weight_[j];
    time_[i] += time_[j];
    smallest_[i] = std::min(smallest_[i], smallest_[j]);
    next_[last_[i]] = j;
    last_[i] = last_[j];
    owner_[j] = i;
    ++version_[i];
    --live_;
    if (i != 0) push(i);
    return true;
  }
  return false;
}

std::vector<std::size_t> MergeState::order() const {
  std::vector<std::size_t> out;
  for (auto g = next_[0]; g != kNoIndex; g = next_[g]) out.push_back(g - 1);
  return out;
}

RepairSequence optimal_sequence(const PrecedenceGraph& graph) {
  require_positive_times(graph);
  MergeState state(graph);
  while (state.merge_next()) {
  }
  return evaluate_order(graph, state.order());
}

RepairSequence evaluate_order(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs) {
  require_permutation(graph, jobs);
  std::vector<double> completion(graph.size(), 0.0);
  double t = 0.0;
  for (const auto j : jobs) {
    t += graph.jobs[j].repair_time;
    completion[j] = t;
  }
  const auto energized = energization_times(graph, graph.topological_order(), completion);

  RepairSequence seq;
  seq.jobs = jobs;
  seq.order.reserve(jobs.size());
  seq.completion.reserve(jobs.size());
  seq.energization.reserve(jobs.size());
  for (const auto j : jobs) {
    seq.order.push_back(graph.jobs[j].id);
    seq.completion.push_back(completion[j]);
    seq.energization.push_back(energized[j]);
    seq.harm += graph.jobs[j].weight * energized[j];
  }
  return seq;
}

RepairSequence evaluate_order(const PrecedenceGraph& graph, const std::vector<std::string>& order) {
  std::vector<std::size_t> jobs;
  jobs.reserve(order.size());
  for (const auto& id : order) {
    try {
      jobs.push_back(graph.index_of(id));
    } catch (const Error&) {
      throw Error("not-a-permutation", "order names unknown job '" + id + "'");
    }
  }
  return evaluate_order(graph, jobs);
}

double order_harm(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs) {
  require_permutation(graph, jobs);
  return HarmEvaluator(graph)(jobs);
}

RepairSequence brute_force_sequence(const PrecedenceGraph& graph, std::size_t max_jobs) {
  if (graph.size() > max_jobs) {
    throw Error("oracle-too-large", "sequence oracle limited to " + std::to_string(max_jobs) + " jobs, got " +
                                        std::to_string(graph.size()));
  }
  require_positive_times(graph);

  std::vector<std::size_t> perm(graph.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  HarmEvaluator harm_of(graph);
  auto best = perm;
  double best_harm = harm_of(perm);
  // Lexicographic enumeration; only strict improvements replace the incumbent.
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double h = harm_of(perm);
    if (h < best_harm) {
      best_harm = h;
      best = perm;
    }
  }
  return evaluate_order(graph, best);
}

bool respects_precedence(const PrecedenceGraph& graph, const std::vector<std::size_t>& jobs) {
  std::vector<std::size_t> position(graph.size(), kNoIndex);
  for (std::size_t k = 0; k < jobs.size(); ++k) position[jobs[k]] = k;
  for (std::size_t j = 0; j < graph.size(); ++j) {
    const auto parent = graph.jobs[j].parent;
    if (position[j] == kNoIndex) return false;
    if (parent != kVirtualRoot && position[parent] > position[j]) return false;
  }
  return true;
}

}  // namespace gridharden
