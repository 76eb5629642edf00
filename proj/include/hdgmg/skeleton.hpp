#pragma once

#include "hdgmg/mesh.hpp"
#include "hdgmg/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace hdgmg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SkeletonVector = Eigen::VectorXd;
using ScalarFunction = std::function<double(const Eigen::Vector2d&)>;

/// Discontinuous degree-p Lagrange space on the interior edges of a mesh level.
/// Edge DoFs are contiguous, edges numbered in mesh order; node i of an edge sits
/// at parameter t = i/p. Boundary edges carry no DoFs (homogeneous Dirichlet).
class SkeletonSpace
{
public:
  SkeletonSpace(const MeshLevel& mesh, int degree);

  const MeshLevel& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int nodes_per_edge() const { return degree_ + 1; }
  int dof_count() const { return dof_count_; }
  const EdgeLagrange& basis() const { return basis_; }

  /// First DoF of an edge, -1 for boundary edges.
  int edge_offset(int edge) const { return offsets_[edge]; }
  /// 3(p+1) global DoFs of a cell in local-edge order; -1 marks boundary entries.
  std::vector<int> cell_dofs(int cell) const;

  void require_vector(const SkeletonVector& v, const char* what) const;

private:
  const MeshLevel* mesh_;
  int degree_;
  EdgeLagrange basis_;
  std::vector<int> offsets_;
  int dof_count_ = 0;
};

/// Value of lambda on an edge at parameter t (0 on boundary edges).
double eval_on_edge(const SkeletonSpace& space, const SkeletonVector& lambda, int edge, double t);

/// Trace of the conforming P1 function with the given vertex values.
/// Throws std::invalid_argument if a boundary vertex value is nonzero.
SkeletonVector trace_conforming_p1(const SkeletonSpace& space, const Eigen::VectorXd& vertex_values);

/// Hat function of an interior vertex as vertex values.
Eigen::VectorXd vertex_hat(const MeshLevel& mesh, int vertex);

/// Interior vertices of a level in id order.
std::vector<int> interior_vertices(const MeshLevel& mesh);

/// Block-diagonal matrix of <lambda, mu>_l = sum_T |T|/|dT| int_dT lambda mu.
SparseMatrix build_scaled_mass(const SkeletonSpace& space);

/// <lambda, mu>_l evaluated cell by cell with edge quadrature.
double scaled_inner_product(const SkeletonSpace& space, const SkeletonVector& lambda, const SkeletonVector& mu);

/// Per-edge L2 projection of a smooth function onto the skeleton space.
SkeletonVector project_boundary(const SkeletonSpace& space, const ScalarFunction& u);

} // namespace hdgmg
