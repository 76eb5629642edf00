#pragma once

#include "hdgmg/local_solver.hpp"
#include "hdgmg/parallel.hpp"
#include "hdgmg/skeleton.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace hdgmg {

struct CondensedSystem
{
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Cellwise bulk approximation u_l, q_l in the local bases.
struct BulkField
{
  std::vector<Eigen::VectorXd> u;
  std::vector<Eigen::VectorXd> q;
};

/// HDG discretization of one mesh level: the skeleton space and the local
/// solvers of every cell. The mesh must outlive it.
class Discretization
{
public:
  /// `threads` = 0 uses all hardware threads; results do not depend on it.
  Discretization(const MeshLevel& mesh, const SolverKind& kind, int threads = 0);

  const MeshLevel& mesh() const { return space_.mesh(); }
  const SkeletonSpace& space() const { return space_; }
  const SolverKind& kind() const { return kind_; }
  double tau() const { return kind_.tau(mesh().h); }
  const LocalOperators& local(int cell) const { return locals_[cell]; }
  int threads() const { return threads_; }

  /// Local trace coefficients of lambda on a cell (zeros on boundary edges).
  Eigen::VectorXd gather(int cell, const SkeletonVector& lambda) const;

  /// Global sparse matrix of a_l; cell contributions are scattered in cell order.
  SparseMatrix assemble_matrix() const;
  /// b_l(mu) = int U mu f.
  Eigen::VectorXd assemble_rhs(const ScalarFunction& f) const;
  CondensedSystem assemble(const ScalarFunction& f) const;

  /// Scatter a per-cell matrix family into a global skeleton matrix.
  template <class LocalMatrix>
  SparseMatrix assemble_cellwise(LocalMatrix&& local_matrix) const;

  /// u_l = U lambda + U f, q_l = Q lambda + Q f (f may be empty for f = 0).
  BulkField reconstruct(const SkeletonVector& lambda, const ScalarFunction& f = {}) const;

  double u_value(const BulkField& field, int cell, const Eigen::Vector2d& x) const;
  Eigen::Vector2d q_value(const BulkField& field, int cell, const Eigen::Vector2d& x) const;

  /// Functional mu -> sum_T int_dT (q_l . nu + tau (u_l - lambda)) mu over the
  /// skeleton basis, evaluated from the reconstructed fields.
  Eigen::VectorXd flux_balance(const SkeletonVector& lambda, const ScalarFunction& f = {}) const;
  /// max |flux_balance|
  double flux_balance_residual(const SkeletonVector& lambda, const ScalarFunction& f = {}) const;

private:
  SkeletonSpace space_;
  SolverKind kind_;
  int threads_;
  std::vector<LocalOperators> locals_;
};

template <class LocalMatrix>
SparseMatrix Discretization::assemble_cellwise(LocalMatrix&& local_matrix) const
{
  std::vector<Eigen::MatrixXd> blocks(mesh().num_cells());
  parallel_for(mesh().num_cells(), threads_, [&](int c) { blocks[c] = local_matrix(locals_[c]); });
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < mesh().num_cells(); ++c)
  {
    const std::vector<int> dofs = space_.cell_dofs(c);
    for (std::size_t a = 0; a < dofs.size(); ++a)
    {
      if (dofs[a] < 0)
        continue;
      for (std::size_t b = 0; b < dofs.size(); ++b)
        if (dofs[b] >= 0)
          triplets.emplace_back(dofs[a], dofs[b], blocks[c](a, b));
    }
  }
  SparseMatrix m(space_.dof_count(), space_.dof_count());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

/// Convenience: assemble(level, space, kind, f).
CondensedSystem assemble(const Discretization& disc, const ScalarFunction& f);

} // namespace hdgmg
