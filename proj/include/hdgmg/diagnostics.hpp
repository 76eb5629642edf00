#pragma once

#include "hdgmg/hdg_system.hpp"
#include "hdgmg/spectral.hpp"
#include "hdgmg/transfer.hpp"

#include <Eigen/SparseCholesky>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hdgmg {

/// One estimated constant. `level` is "l" for single-level checks and "l-1:l"
/// for level pairs (internal numbering).
struct AssumptionRow
{
  std::string assumption;
  std::string level;
  std::string kind;
  int p = 1;
  std::string tau;
  std::string injection = "-";
  double constant = 0.0;
  double growth = 0.0; ///< ratio to the previous level of the same series, 0 for the first
  bool pass = false;
};

struct AssumptionReport
{
  std::vector<AssumptionRow> rows;

  bool passed() const;
  void append(const AssumptionReport& other);
  /// Header "assumption,level,kind,p,tau,injection,constant,growth,pass".
  void write_csv(std::ostream& os) const;
};

/// Fills `growth` of every row from the previous row with the same assumption,
/// kind, p, tau and injection, and fails rows whose growth exceeds `limit`.
void apply_growth_limit(AssumptionReport& report, const std::string& assumption, double limit);

/// Sparse Cholesky solve of an SPD system.
class DirectSolver
{
public:
  explicit DirectSolver(const SparseMatrix& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

/// Operators of two consecutive levels with one injection.
class LevelPair
{
public:
  LevelPair(const Discretization& coarse, const Discretization& fine, InjectionKind kind);

  const Discretization& coarse() const { return coarse_; }
  const Discretization& fine() const { return fine_; }
  InjectionKind kind() const { return kind_; }
  const SparseMatrix& a_coarse() const { return a_coarse_; }
  const SparseMatrix& a_fine() const { return a_fine_; }
  const SparseMatrix& injection() const { return injection_; }
  std::string level_label() const;

  /// P lambda: a_{l-1}(P lambda, mu) = a_l(lambda, I mu) for all coarse mu.
  SkeletonVector ritz_projection(const SkeletonVector& fine_lambda) const;
  /// A_{l-1}^{-1} applied to a coarse vector.
  SkeletonVector coarse_solve(const SkeletonVector& rhs) const;
  /// A_l^{-1} applied to a fine vector (factorized on first use).
  SkeletonVector fine_solve(const SkeletonVector& rhs) const;

private:
  const Discretization& coarse_;
  const Discretization& fine_;
  InjectionKind kind_;
  SparseMatrix a_coarse_;
  SparseMatrix a_fine_;
  SparseMatrix injection_;
  DirectSolver coarse_solver_;
  mutable std::unique_ptr<DirectSolver> fine_solver_;
};

SkeletonVector ritz_quasi_projection(const LevelPair& pair, const SkeletonVector& fine_lambda);

/// Gaussian random vector of unit Euclidean norm.
Eigen::VectorXd random_unit_vector(Eigen::Index size, std::uint64_t seed);

/// Cellwise quadratic forms on one level.
SparseMatrix form_flux(const Discretization& disc);          ///< |Q mu|_0^2
SparseMatrix form_bulk(const Discretization& disc);          ///< |U mu|_0^2
SparseMatrix form_trace_defect(const Discretization& disc);  ///< |U mu - mu|_l^2
SparseMatrix form_gradient_gap(const Discretization& disc);  ///< |Q mu + grad U mu|_0^2

/// Largest deviation of I gamma_{l-1} w from gamma_l w over coarse interior hats.
AssumptionReport check_identity_IA2(const LevelPair& pair);

/// sup |I lambda|_l^2 / |lambda|_{l-1}^2. All constants are sups of squared-form ratios.
AssumptionReport check_injection_stability(const LevelPair& pair, const SpectralOptions& options = {});

/// Max over `trials` random lambda and every coarse interior hat w of
/// |(Q_l lambda - Q_{l-1} P lambda, grad w)_0| / (|Q_l lambda|_0 |grad w|_0).
AssumptionReport check_quasi_orthogonality(const LevelPair& pair, int trials = 64, std::uint64_t seed = 1);

/// ES-I: sup a_l(I lambda, I lambda) / a_{l-1}(lambda, lambda);
/// ES-P: sup a_{l-1}(P lambda, P lambda) / a_l(lambda, lambda);
/// A2: sup |lambda - I P lambda|_a^2 / |lambda|_a^2.
AssumptionReport check_energy_stability(const LevelPair& pair, const SpectralOptions& options = {});

/// A1: sup |a_l(lambda - I P lambda, lambda)| / (h_l^2 |A lambda|_l^2) and the
/// variant normalized by the largest eigenvalue of A_l instead of h_l^{-2}.
/// Random draws are combined with a dense eigensolve when the fine size allows.
AssumptionReport check_A1(const LevelPair& pair, int trials = 64, std::uint64_t seed = 1,
                          const SpectralOptions& options = {});

/// LS1, LS2-Q, LS2-U, LS3, LS6-lower, LS6-upper on one level.
AssumptionReport check_LS(const Discretization& disc, const SpectralOptions& options = {});

/// LS4: max nodal error of reconstruct(gamma w) against w and -grad w over interior hats.
AssumptionReport check_LS4(const Discretization& disc);

struct ConvergenceRow
{
  int level = 0;
  double h = 0.0;
  int dofs = 0;
  double error_trace = 0.0; ///< |Pi_d u - lambda|_l
  double error_u = 0.0;     ///< |u - u_l|_0
  double error_q = 0.0;     ///< |grad u + q_l|_0
  double order_trace = 0.0; ///< observed orders against the previous row (0 for the first)
  double order_u = 0.0;
  double order_q = 0.0;
};

/// Manufactured solution u = sin(pi x) sin(pi y), f = 2 pi^2 u, direct solves on
/// the given internal levels.
std::vector<ConvergenceRow> convergence_study(const SolverKind& kind, const std::vector<int>& levels, int threads = 0);
void write_convergence_csv(std::ostream& os, const SolverKind& kind, const std::vector<ConvergenceRow>& rows);

/// Everything the `check` command runs.
struct CheckConfig
{
  std::vector<int> degrees{1};
  std::vector<TauRule> tau_rules{TauRule::OverH, TauRule::Constant};
  std::vector<InjectionKind> injections{InjectionKind::I0, InjectionKind::I1, InjectionKind::I2, InjectionKind::I3};
  int min_level = 2;       ///< fine level of the first level pair
  int max_level = 3;       ///< fine level of the last level pair
  int ls_max_level = 3;    ///< finest level of the LS checks
  int a1_max_level = 3;    ///< finest level of the A1 check
  int trials = 64;
  std::uint64_t seed = 1;
  int threads = 0;
  SpectralOptions spectral{1e-8, 400, 600, 1};
};

AssumptionReport run_checks(const CheckConfig& config);

} // namespace hdgmg
