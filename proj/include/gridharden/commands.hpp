#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gridharden {

struct BudgetGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// Parses "start:stop:step".
  static BudgetGrid parse(const std::string& spec);
  /// start, start + step, ... up to and including stop.
  std::vector<double> values() const;
};

struct RunConfig {
  std::string command;
  std::string feeder;
  std::string scenario;
  std::string menu;
  std::optional<double> budget;
  std::optional<BudgetGrid> budgets;
  int option = 1;
  bool oracle = false;
  bool exact = false;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> pmax;
  std::string out;
  bool strict = false;
  // evaluate
  std::string trajectory;
  std::optional<double> horizon;
  // generate
  std::size_t nodes = 13;
  std::size_t damaged = 4;
  std::size_t options_per_edge = 3;
};

/// Runs one subcommand. Results go to `cfg.out` (a file, or a directory for
/// `generate`) or to `out` when no path is given. Failures are written to
/// `err` as {"error": code, "message": ...}. Returns the process exit code:
/// 0 success, 1 a result check failed, 2 invalid input.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_sequence(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_harden(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gridharden
