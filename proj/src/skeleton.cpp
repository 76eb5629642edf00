#include "hdgmg/skeleton.hpp"

#include "hdgmg/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace hdgmg {

SkeletonSpace::SkeletonSpace(const MeshLevel& mesh, int degree)
  : mesh_(&mesh), degree_(degree), basis_(degree), offsets_(mesh.num_edges(), -1)
{
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edges[e].boundary)
    {
      offsets_[e] = dof_count_;
      dof_count_ += nodes_per_edge();
    }
}

std::vector<int> SkeletonSpace::cell_dofs(int cell) const
{
  const int n = nodes_per_edge();
  std::vector<int> dofs(3 * n, -1);
  const Cell& c = mesh_->cells[cell];
  for (int i = 0; i < 3; ++i)
  {
    const int off = offsets_[c.edges[i]];
    if (off >= 0)
      for (int k = 0; k < n; ++k)
        dofs[i * n + k] = off + k;
  }
  return dofs;
}

void SkeletonSpace::require_vector(const SkeletonVector& v, const char* what) const
{
  if (v.size() != dof_count_)
    throw std::invalid_argument(std::string(what) + ": vector of length " + std::to_string(v.size()) +
                                " does not match skeleton space with " + std::to_string(dof_count_) + " DoFs");
}

double eval_on_edge(const SkeletonSpace& space, const SkeletonVector& lambda, int edge, double t)
{
  const int off = space.edge_offset(edge);
  if (off < 0)
    return 0.0;
  return space.basis().values(t).dot(lambda.segment(off, space.nodes_per_edge()));
}

SkeletonVector trace_conforming_p1(const SkeletonSpace& space, const Eigen::VectorXd& vertex_values)
{
  const MeshLevel& mesh = space.mesh();
  if (vertex_values.size() != mesh.num_vertices())
    throw std::invalid_argument("trace_conforming_p1: one value per vertex required");
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_boundary_vertex(v) && vertex_values[v] != 0.0)
      throw std::invalid_argument("trace_conforming_p1: nonzero value at boundary vertex " + std::to_string(v));
  SkeletonVector out = SkeletonVector::Zero(space.dof_count());
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const int off = space.edge_offset(e);
    if (off < 0)
      continue;
    const auto& ev = mesh.edges[e].vertices;
    for (int k = 0; k < space.nodes_per_edge(); ++k)
    {
      const double t = space.basis().node(k);
      out[off + k] = (1.0 - t) * vertex_values[ev[0]] + t * vertex_values[ev[1]];
    }
  }
  return out;
}

Eigen::VectorXd vertex_hat(const MeshLevel& mesh, int vertex)
{
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.num_vertices());
  w[vertex] = 1.0;
  return w;
}

std::vector<int> interior_vertices(const MeshLevel& mesh)
{
  std::vector<int> out;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!mesh.is_boundary_vertex(v))
      out.push_back(v);
  return out;
}

SparseMatrix build_scaled_mass(const SkeletonSpace& space)
{
  const MeshLevel& mesh = space.mesh();
  const int n = space.nodes_per_edge();
  std::vector<double> weight(mesh.num_edges(), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellGeometry g = mesh.geometry(c);
    for (int i = 0; i < 3; ++i)
      weight[mesh.cells[c].edges[i]] += g.area / g.perimeter;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const int off = space.edge_offset(e);
    if (off < 0)
      continue;
    const double s = weight[e] * mesh.edge_length(e);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        triplets.emplace_back(off + a, off + b, s * space.basis().mass()(a, b));
  }
  SparseMatrix m(space.dof_count(), space.dof_count());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

double scaled_inner_product(const SkeletonSpace& space, const SkeletonVector& lambda, const SkeletonVector& mu)
{
  space.require_vector(lambda, "scaled_inner_product");
  space.require_vector(mu, "scaled_inner_product");
  const MeshLevel& mesh = space.mesh();
  const LineRule& rule = gauss_line(space.degree() + 2);
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellGeometry g = mesh.geometry(c);
    double boundary_integral = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      const int e = mesh.cells[c].edges[i];
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        const double t = rule.points[q];
        boundary_integral +=
          rule.weights[q] * g.edge_lengths[i] * eval_on_edge(space, lambda, e, t) * eval_on_edge(space, mu, e, t);
      }
    }
    sum += g.area / g.perimeter * boundary_integral;
  }
  return sum;
}

SkeletonVector project_boundary(const SkeletonSpace& space, const ScalarFunction& u)
{
  const MeshLevel& mesh = space.mesh();
  const LineRule& rule = gauss_line(smooth_line_points);
  const int n = space.nodes_per_edge();
  const Eigen::LLT<Eigen::MatrixXd> mass(space.basis().mass());
  SkeletonVector out = SkeletonVector::Zero(space.dof_count());
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const int off = space.edge_offset(e);
    if (off < 0)
      continue;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < rule.size(); ++q)
      rhs += rule.weights[q] * u(mesh.edge_point(e, rule.points[q])) * space.basis().values(rule.points[q]);
    out.segment(off, n) = mass.solve(rhs);
  }
  return out;
}

} // namespace hdgmg
