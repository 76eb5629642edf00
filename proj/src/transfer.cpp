#include "hdgmg/transfer.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hdgmg {

InjectionKind parse_injection(const std::string& s)
{
  if (s == "I0" || s == "i0" || s == "0")
    return InjectionKind::I0;
  if (s == "I1" || s == "i1" || s == "1")
    return InjectionKind::I1;
  if (s == "I2" || s == "i2" || s == "2")
    return InjectionKind::I2;
  if (s == "I3" || s == "i3" || s == "3")
    return InjectionKind::I3;
  if (s == "broken")
    return InjectionKind::Broken;
  throw std::invalid_argument("unknown injection '" + s + "' (expected I0, I1, I2, I3)");
}

std::string injection_name(InjectionKind k)
{
  switch (k)
  {
  case InjectionKind::I0: return "I0";
  case InjectionKind::I1: return "I1";
  case InjectionKind::I2: return "I2";
  case InjectionKind::I3: return "I3";
  case InjectionKind::Broken: return "broken";
  }
  return "?";
}

namespace {

constexpr double prune_tol = 1e-13;

using Row = std::map<int, double>;

class InjectionBuilder
{
public:
  InjectionBuilder(const SkeletonSpace& coarse, const SkeletonSpace& fine, const Discretization* disc)
    : coarse_(coarse), fine_(fine), cmesh_(coarse.mesh()), fmesh_(fine.mesh()), disc_(disc), lagrange_(coarse.degree()),
      incident_(cmesh_.num_vertices())
  {
    for (int e = 0; e < cmesh_.num_edges(); ++e)
      for (int v : cmesh_.edges[e].vertices)
        incident_[v].push_back(e);
  }

  // weight * lambda(x) on coarse edge e, x given by its edge parameter
  void edge_value(Row& row, int e, double s, double weight) const
  {
    const int off = coarse_.edge_offset(e);
    if (off < 0)
      return;
    const Eigen::VectorXd phi = coarse_.basis().values(s);
    for (int a = 0; a < coarse_.nodes_per_edge(); ++a)
      row[off + a] += weight * phi[a];
  }

  double coarse_parameter(int e, const Eigen::Vector2d& x) const
  {
    const auto& ev = cmesh_.edges[e].vertices;
    const Eigen::Vector2d a = cmesh_.vertices[ev[0]];
    const Eigen::Vector2d d = cmesh_.vertices[ev[1]] - a;
    return (x - a).dot(d) / d.squaredNorm();
  }

  // weight * [U_{l-1} lambda](x) using the local solver of coarse cell c
  void bulk_value(Row& row, int c, const Eigen::Vector2d& x, double weight) const
  {
    const LocalOperators& ops = disc_->local(c);
    const Eigen::RowVectorXd coeffs = ops.basis.scalar_values(x).transpose() * ops.u_of_trace;
    const std::vector<int> dofs = coarse_.cell_dofs(c);
    for (std::size_t a = 0; a < dofs.size(); ++a)
      if (dofs[a] >= 0)
        row[dofs[a]] += weight * coeffs[a];
  }

  // weight * <lambda>(v): mean over all coarse edges sharing vertex v, 0 on the boundary
  void vertex_average(Row& row, int v, double weight) const
  {
    if (cmesh_.is_boundary_vertex(v))
      return;
    const double share = weight / static_cast<double>(incident_[v].size());
    for (int e : incident_[v])
      edge_value(row, e, cmesh_.edges[e].vertices[0] == v ? 0.0 : 1.0, share);
  }

  // weight * [U^c lambda](x), the nodal continuous extension on coarse cell c
  void continuous_value(Row& row, int c, const Eigen::Vector2d& x, double weight) const
  {
    const CellGeometry g = cmesh_.geometry(c);
    const Cell& cell = cmesh_.cells[c];
    const int p = coarse_.degree();
    const Eigen::VectorXd basis = lagrange_.values(g.pullback(x));
    for (int n = 0; n < lagrange_.size(); ++n)
    {
      const double w = weight * basis[n];
      if (std::abs(w) < prune_tol)
        continue;
      const Eigen::Vector3i& ijk = lagrange_.lattice(n);
      const Eigen::Vector2d node = (ijk[0] * g.vertices[0] + ijk[1] * g.vertices[1] + ijk[2] * g.vertices[2]) / p;
      const int zeros = (ijk[0] == 0) + (ijk[1] == 0) + (ijk[2] == 0);
      if (zeros == 2)
      {
        const int local_vertex = ijk[0] == p ? 0 : (ijk[1] == p ? 1 : 2);
        vertex_average(row, cell.vertices[local_vertex], w);
      }
      else if (zeros == 1)
      {
        const int local_edge = ijk[0] == 0 ? 0 : (ijk[1] == 0 ? 1 : 2);
        const int e = cell.edges[local_edge];
        edge_value(row, e, coarse_parameter(e, node), w);
      }
      else
        bulk_value(row, c, node, w);
    }
  }

  // coarse edge whose midpoint is fine vertex v (red refinement numbering)
  int midpoint_edge(int v) const
  {
    const int e = v - cmesh_.num_vertices();
    if (e < 0 || e >= cmesh_.num_edges())
      throw std::logic_error("injection: new edge endpoint is not a coarse edge midpoint");
    return e;
  }

  Row row(InjectionKind kind, int fine_edge, int node) const
  {
    const Edge& fe = fmesh_.edges[fine_edge];
    const double t = fine_.basis().node(node);
    const Eigen::Vector2d x = fmesh_.edge_point(fine_edge, t);
    Row row;
    if (kind == InjectionKind::I0)
    {
      const int c = fe.provenance.origin == EdgeOrigin::ChildOfEdge ? cmesh_.edges[fe.provenance.parent].cells[0]
                                                                      : fe.provenance.parent;
      continuous_value(row, c, x, 1.0);
      return row;
    }
    if (fe.provenance.origin == EdgeOrigin::ChildOfEdge)
    {
      const int e = fe.provenance.parent;
      edge_value(row, e, coarse_parameter(e, x), 1.0);
      return row;
    }
    if (fe.provenance.origin != EdgeOrigin::InteriorOfCell)
      throw std::invalid_argument("injection: fine mesh is not a refinement of the coarse mesh");
    const bool endpoint = node == 0 || node == fine_.degree();
    const bool interpolate = kind == InjectionKind::I1 || (kind == InjectionKind::I3 && endpoint);
    if (kind == InjectionKind::Broken)
      return row;
    if (interpolate)
    {
      // (|x - b| lambda(a) + |x - a| lambda(b)) / |a - b| with a, b coarse edge midpoints
      edge_value(row, midpoint_edge(fe.vertices[0]), 0.5, 1.0 - t);
      edge_value(row, midpoint_edge(fe.vertices[1]), 0.5, t);
    }
    else
      bulk_value(row, fe.provenance.parent, x, 1.0);
    return row;
  }

private:
  const SkeletonSpace& coarse_;
  const SkeletonSpace& fine_;
  const MeshLevel& cmesh_;
  const MeshLevel& fmesh_;
  const Discretization* disc_;
  TriangleLagrange lagrange_;
  std::vector<std::vector<int>> incident_;
};

} // namespace

TransferMatrix build_injection(InjectionKind kind, const SkeletonSpace& coarse, const SkeletonSpace& fine,
                               const Discretization* coarse_disc)
{
  if (coarse.degree() != fine.degree())
    throw std::invalid_argument("build_injection: coarse and fine degree differ");
  if (fine.mesh().level_index != coarse.mesh().level_index + 1 ||
      fine.mesh().num_cells() != 4 * coarse.mesh().num_cells())
    throw std::invalid_argument("build_injection: fine level is not the refinement of the coarse level");
  if (needs_local_solvers(kind))
  {
    if (coarse_disc == nullptr)
      throw std::invalid_argument("build_injection: " + injection_name(kind) + " requires the coarse local solvers");
    if (&coarse_disc->mesh() != &coarse.mesh())
      throw std::invalid_argument("build_injection: local solvers belong to a different mesh");
  }

  const InjectionBuilder builder(coarse, fine, coarse_disc);
  std::vector<Eigen::Triplet<double>> triplets;
  const MeshLevel& fmesh = fine.mesh();
  for (int fe = 0; fe < fmesh.num_edges(); ++fe)
  {
    const int off = fine.edge_offset(fe);
    if (off < 0)
      continue;
    for (int k = 0; k < fine.nodes_per_edge(); ++k)
      for (const auto& [col, val] : builder.row(kind, fe, k))
        if (std::abs(val) > prune_tol)
          triplets.emplace_back(off + k, col, val);
  }
  TransferMatrix t;
  t.kind = kind;
  t.matrix.resize(fine.dof_count(), coarse.dof_count());
  t.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return t;
}

SkeletonVector restrict_residual(const TransferMatrix& transfer, const SkeletonVector& residual)
{
  if (residual.size() != transfer.matrix.rows())
    throw std::invalid_argument("restrict_residual: residual does not live on the fine space");
  return transfer.matrix.transpose() * residual;
}

SkeletonVector restrict_residual_scaled(const TransferMatrix& transfer, const SkeletonVector& residual,
                                        const SparseMatrix& coarse_mass, const SparseMatrix& fine_mass)
{
  const Eigen::VectorXd rhs = restrict_residual(transfer, fine_mass * residual);
  const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt{Eigen::SparseMatrix<double>(coarse_mass)};
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("restrict_residual_scaled: coarse mass matrix not SPD");
  return llt.solve(rhs);
}

void write_matrix(std::ostream& os, const SparseMatrix& m)
{
  std::ostringstream s;
  s << std::setprecision(17);
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      s << it.row() << ' ' << it.col() << ' ' << it.value() << "\n";
  os << s.str();
}

} // namespace hdgmg
