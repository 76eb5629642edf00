#pragma once

#include "hdgmg/hdg_system.hpp"
#include "hdgmg/transfer.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hdgmg {

enum class SmootherType
{
  Jacobi,
  GaussSeidel,         ///< one step is a single sweep; the V-cycle alternates directions
  SymmetricGaussSeidel ///< one step is a forward sweep followed by a backward sweep
};

struct SmootherKind
{
  SmootherType type = SmootherType::SymmetricGaussSeidel;
  double omega = 2.0 / 3.0; ///< Jacobi relaxation, 0 < omega <= 1

  static SmootherKind jacobi(double omega = 2.0 / 3.0) { return {SmootherType::Jacobi, omega}; }
  static SmootherKind gauss_seidel() { return {SmootherType::GaussSeidel, 1.0}; }
  static SmootherKind symmetric_gauss_seidel() { return {SmootherType::SymmetricGaussSeidel, 1.0}; }
  void check() const;
  std::string name() const;
};

SmootherKind parse_smoother(const std::string& s);

/// One smoothing step x <- x + R (b - A x). Jacobi: R = omega D^{-1} (self-adjoint).
/// Gauss-Seidel: forward sweep in ascending DoF order; `adjoint` selects the
/// backward sweep in descending order (the Euclidean transpose of the forward one).
/// Symmetric Gauss-Seidel: forward then backward sweep, self-adjoint, so `adjoint` is ignored.
/// Throws std::runtime_error on a zero diagonal entry.
void smooth(const SparseMatrix& a, Eigen::VectorXd& x, const Eigen::VectorXd& b, const SmootherKind& kind,
            bool adjoint);

struct MgConfig
{
  int smoothing_steps = 1; ///< m >= 1
  SmootherKind smoother;
  InjectionKind injection = InjectionKind::I1;
  SolverKind kind;
  int coarsest = 0;

  void check() const;
};

/// Operators of all levels coarsest..finest. Matrices and injections are shared
/// pointers so several stacks (e.g. differing only in the injection) can reuse them.
class LevelStack
{
public:
  /// matrices[l] for l = 0..L; injections[l] maps level l-1 to l (injections[0] unused).
  LevelStack(std::vector<std::shared_ptr<const SparseMatrix>> matrices,
             std::vector<std::shared_ptr<const SparseMatrix>> injections, int coarsest = 0);

  int finest() const { return static_cast<int>(matrices_.size()) - 1; }
  int coarsest() const { return coarsest_; }
  const SparseMatrix& matrix(int level) const { return *matrices_.at(level); }
  const SparseMatrix& injection(int level) const { return *injections_.at(level); }
  /// B_coarsest = A^{-1} by dense Cholesky.
  Eigen::VectorXd coarse_solve(const Eigen::VectorXd& rhs) const;

private:
  std::vector<std::shared_ptr<const SparseMatrix>> matrices_;
  std::vector<std::shared_ptr<const SparseMatrix>> injections_;
  int coarsest_;
  Eigen::LLT<Eigen::MatrixXd> coarse_factor_;
};

/// Discretizations, condensed matrices and injection matrices of a hierarchy.
struct HierarchyOperators
{
  std::vector<std::unique_ptr<Discretization>> discretizations;
  std::vector<std::shared_ptr<const SparseMatrix>> matrices;
};

/// Builds the discretizations and condensed matrices on levels 0..finest of the hierarchy.
HierarchyOperators build_operators(const MeshHierarchy& hierarchy, const SolverKind& kind, int threads = 0);

/// Injection matrices for levels 1..finest (index 0 holds nullptr).
std::vector<std::shared_ptr<const SparseMatrix>> build_injections(const HierarchyOperators& ops, InjectionKind kind);

/// Convenience: build everything for one configuration up to `finest`.
LevelStack build_level_stack(const MeshHierarchy& hierarchy, const MgConfig& config, int threads = 0);

/// B_l mu: one V-cycle with zero initial guess.
Eigen::VectorXd vcycle(const LevelStack& stack, int level, const Eigen::VectorXd& rhs, const MgConfig& config);

struct SolveResult
{
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history; ///< relative Euclidean residuals, entry 0 is 1
  Eigen::VectorXd solution;
  std::string failure;

  /// Geometric mean contraction (r_K / r_0)^{1/K}.
  double contraction() const;
};

/// x_{k+1} = x_k + B (b - A x_k) from x_0 = 0 until |b - A x|_2 / |b|_2 < tol.
/// Stops unconverged after `max_iterations` or when the residual grows 10x.
SolveResult solve_stationary(const LevelStack& stack, int level, const Eigen::VectorXd& b, const MgConfig& config,
                             double tol = 1e-6, int max_iterations = 500);

} // namespace hdgmg
