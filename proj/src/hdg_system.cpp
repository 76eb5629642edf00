#include "hdgmg/hdg_system.hpp"

#include "hdgmg/quadrature.hpp"

#include <cmath>

namespace hdgmg {

Discretization::Discretization(const MeshLevel& mesh, const SolverKind& kind, int threads)
  : space_(mesh, kind.degree), kind_(kind), threads_(threads <= 0 ? default_threads() : threads)
{
  kind_.check();
  std::vector<std::optional<LocalOperators>> built(mesh.num_cells());
  parallel_for(mesh.num_cells(), threads_, [&](int c) { built[c].emplace(build_local(mesh, c, kind_, mesh.h)); });
  locals_.reserve(built.size());
  for (auto& b : built)
    locals_.push_back(std::move(*b));
}

Eigen::VectorXd Discretization::gather(int cell, const SkeletonVector& lambda) const
{
  const std::vector<int> dofs = space_.cell_dofs(cell);
  Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t a = 0; a < dofs.size(); ++a)
    if (dofs[a] >= 0)
      local[a] = lambda[dofs[a]];
  return local;
}

SparseMatrix Discretization::assemble_matrix() const
{
  return assemble_cellwise([](const LocalOperators& ops) { return ops.condensed; });
}

Eigen::VectorXd Discretization::assemble_rhs(const ScalarFunction& f) const
{
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space_.dof_count());
  if (!f)
    return b;
  std::vector<Eigen::VectorXd> loads(mesh().num_cells());
  parallel_for(mesh().num_cells(), threads_, [&](int c) { loads[c] = locals_[c].condensed_load(f); });
  for (int c = 0; c < mesh().num_cells(); ++c)
  {
    const std::vector<int> dofs = space_.cell_dofs(c);
    for (std::size_t a = 0; a < dofs.size(); ++a)
      if (dofs[a] >= 0)
        b[dofs[a]] += loads[c][a];
  }
  return b;
}

CondensedSystem Discretization::assemble(const ScalarFunction& f) const { return {assemble_matrix(), assemble_rhs(f)}; }

CondensedSystem assemble(const Discretization& disc, const ScalarFunction& f) { return disc.assemble(f); }

BulkField Discretization::reconstruct(const SkeletonVector& lambda, const ScalarFunction& f) const
{
  space_.require_vector(lambda, "reconstruct");
  BulkField field;
  field.u.resize(mesh().num_cells());
  field.q.resize(mesh().num_cells());
  parallel_for(mesh().num_cells(), threads_, [&](int c) {
    const LocalOperators& ops = locals_[c];
    const Eigen::VectorXd local = gather(c, lambda);
    field.u[c] = ops.u_of_trace * local;
    field.q[c] = ops.q_of_trace * local;
    if (f)
    {
      const Eigen::VectorXd moments = ops.load_moments(f);
      field.u[c] += ops.u_of_load * moments;
      field.q[c] += ops.q_of_load * moments;
    }
  });
  return field;
}

double Discretization::u_value(const BulkField& field, int cell, const Eigen::Vector2d& x) const
{
  return locals_[cell].basis.scalar_values(x).dot(field.u[cell]);
}

Eigen::Vector2d Discretization::q_value(const BulkField& field, int cell, const Eigen::Vector2d& x) const
{
  return locals_[cell].basis.vector_values(x) * field.q[cell];
}

Eigen::VectorXd Discretization::flux_balance(const SkeletonVector& lambda, const ScalarFunction& f) const
{
  const BulkField field = reconstruct(lambda, f);
  const int p = kind_.degree;
  const EdgeLagrange& trace_basis = space_.basis();
  const LineRule& rule = gauss_line(p + 2);
  const double tau = this->tau();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space_.dof_count());
  for (int c = 0; c < mesh().num_cells(); ++c)
  {
    const LocalOperators& ops = locals_[c];
    for (int i = 0; i < 3; ++i)
    {
      const int e = mesh().cells[c].edges[i];
      const int off = space_.edge_offset(e);
      if (off < 0)
        continue;
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        const double t = rule.points[q];
        const Eigen::Vector2d x = mesh().edge_point(e, t);
        const double flux = q_value(field, c, x).dot(ops.geometry.normals[i]) +
                            tau * (u_value(field, c, x) - eval_on_edge(space_, lambda, e, t));
        out.segment(off, p + 1) += rule.weights[q] * ops.geometry.edge_lengths[i] * flux * trace_basis.values(t);
      }
    }
  }
  return out;
}

double Discretization::flux_balance_residual(const SkeletonVector& lambda, const ScalarFunction& f) const
{
  return flux_balance(lambda, f).cwiseAbs().maxCoeff();
}

} // namespace hdgmg
