#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdgmg {

/// How an edge came to exist relative to the next-coarser level.
enum class EdgeOrigin
{
  Root,           ///< edge of the initial mesh
  ChildOfEdge,    ///< half of a coarse edge
  InteriorOfCell  ///< new edge strictly inside a coarse cell
};

struct EdgeProvenance
{
  EdgeOrigin origin = EdgeOrigin::Root;
  int parent = -1; ///< coarse edge (ChildOfEdge) or coarse cell (InteriorOfCell)
  int half = -1;   ///< 0: contains the parent's first endpoint, 1: its second
};

/// Endpoints are stored lower vertex id first; the edge parameter t runs
/// from vertices[0] (t = 0) to vertices[1] (t = 1).
struct Edge
{
  std::array<int, 2> vertices{};
  bool boundary = false;
  std::array<int, 2> cells{-1, -1};
  EdgeProvenance provenance;

  int cell_count() const { return (cells[0] >= 0) + (cells[1] >= 0); }
};

/// Vertices counterclockwise, local edge i opposite local vertex i.
struct Cell
{
  std::array<int, 3> vertices{};
  std::array<int, 3> edges{};
  int parent = -1;
};

/// Affine map x = origin + J * xi from the reference triangle (0,0),(1,0),(0,1).
struct CellGeometry
{
  std::array<Eigen::Vector2d, 3> vertices;
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  double det = 0.0; ///< |det J| = 2 |T|
  double area = 0.0;
  double perimeter = 0.0;
  double diameter = 0.0;
  Eigen::Vector2d centroid;
  std::array<double, 3> edge_lengths{};
  std::array<Eigen::Vector2d, 3> normals; ///< outward unit normal of local edge i

  Eigen::Vector2d map(const Eigen::Vector2d& ref) const { return origin + jacobian * ref; }
  Eigen::Vector2d pullback(const Eigen::Vector2d& x) const;
};

class MeshLevel
{
public:
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Edge> edges;
  std::vector<Cell> cells;
  int level_index = 0;
  double h = 0.0; ///< maximal cell diameter

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_interior_edges() const;
  int num_boundary_edges() const { return num_edges() - num_interior_edges(); }

  /// Throws std::runtime_error on a degenerate cell.
  CellGeometry geometry(int cell) const;
  Eigen::Vector2d edge_point(int edge, double t) const;
  double edge_length(int edge) const;
  bool is_boundary_vertex(int vertex) const;
};

/// Unit square as a 2x2 grid of squares, each split along its anti-diagonal.
MeshLevel build_initial_mesh();

/// Regular (red) refinement through edge midpoints.
MeshLevel refine(const MeshLevel& coarse);

/// Human-readable descriptions of every violated invariant; empty when valid.
std::vector<std::string> validate(const MeshLevel& level);

/// Geometry of an arbitrary triangle (vertices in any order).
CellGeometry triangle_geometry(const std::array<Eigen::Vector2d, 3>& vertices);

class MeshHierarchy
{
public:
  /// Levels 0 .. finest, level 0 being the initial mesh.
  explicit MeshHierarchy(int finest);

  int finest() const { return static_cast<int>(levels_.size()) - 1; }
  const MeshLevel& level(int l) const { return levels_.at(l); }
  const std::vector<MeshLevel>& levels() const { return levels_; }

private:
  std::vector<MeshLevel> levels_;
};

/// Plain-text dump, one entity per line:
///   v <id> <x> <y>
///   e <id> <v0> <v1> <boundary> <cell0> <cell1> root|child <edge> <half>|interior <cell>
///   c <id> <v0> <v1> <v2> <e0> <e1> <e2> <parent>
void write_mesh(std::ostream& os, const MeshLevel& level);

} // namespace hdgmg
