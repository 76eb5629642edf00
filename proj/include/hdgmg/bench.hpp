#pragma once

#include "hdgmg/local_solver.hpp"
#include "hdgmg/multigrid.hpp"
#include "hdgmg/transfer.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdgmg {

/// Invalid benchmark or check configuration.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Benchmark matrix; paper levels are 1-based (paper level = internal level + 1).
struct BenchConfig
{
  std::vector<InjectionKind> injections{InjectionKind::I0, InjectionKind::I1, InjectionKind::I2, InjectionKind::I3};
  std::vector<int> degrees{1, 2, 3};
  std::vector<TauRule> tau_rules{TauRule::OverH, TauRule::Constant};
  std::vector<int> smoothing_steps{1, 2};
  int min_paper_level = 2;
  int max_paper_level = 7;
  SmootherKind smoother;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  int jobs = 0;        ///< worker threads, 0 = hardware concurrency
  bool timing = false; ///< record wall times (otherwise written as 0)

  /// Throws ConfigError.
  void check() const;
};

/// Reads the fields present in a JSON object on top of `base`; unknown keys are errors.
BenchConfig bench_config_from_json(const std::string& text, const BenchConfig& base = {});

TauRule parse_tau_rule(const std::string& s);
std::string tau_rule_label(TauRule rule);

struct BenchRow
{
  InjectionKind injection = InjectionKind::I1;
  int p = 1;
  std::string tau;
  int paper_level = 2;
  int dofs = 0;
  int m = 1;
  int iterations = 0;
  double rho = 0.0;
  double wall_ms = 0.0;
  bool diverged = false;
};

struct BenchReport
{
  std::vector<BenchRow> rows;

  bool any_diverged() const;
  /// Header "injection,p,tau,paper_level,dofs,m,iterations,rho,wall_ms"; diverged rows
  /// carry "DIVERGED" in the iterations column.
  void write_csv(std::ostream& os) const;
  /// One table per injection: rows (p, "# DoFs" or tau), columns level x m.
  void write_markdown(std::ostream& os) const;
  /// Inverse of write_markdown for the table fields (rho and wall_ms are not in the table).
  static BenchReport parse_markdown(std::istream& is);
};

/// Solves -Delta u = 1 for every combination; rows follow the order
/// injection, p, tau, level, m of the config regardless of scheduling.
BenchReport run_bench(const BenchConfig& config);

} // namespace hdgmg
