#include "hdgmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hdgmg {

namespace {

constexpr double geometric_tol = 1e-12;

bool on_domain_boundary(const Eigen::Vector2d& x)
{
  return std::abs(x.x()) < geometric_tol || std::abs(x.x() - 1.0) < geometric_tol ||
         std::abs(x.y()) < geometric_tol || std::abs(x.y() - 1.0) < geometric_tol;
}

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Local edge i of a cell joins the two vertices other than i.
std::array<int, 2> local_edge_vertices(const Cell& c, int i)
{
  return {c.vertices[(i + 1) % 3], c.vertices[(i + 2) % 3]};
}

// Attach cells to already-created edges and finish derived data.
void connect(MeshLevel& level, const std::map<EdgeKey, int>& lookup)
{
  for (int c = 0; c < level.num_cells(); ++c)
  {
    Cell& cell = level.cells[c];
    for (int i = 0; i < 3; ++i)
    {
      const auto [a, b] = local_edge_vertices(cell, i);
      const int e = lookup.at(key(a, b));
      cell.edges[i] = e;
      Edge& edge = level.edges[e];
      if (edge.cells[0] < 0)
        edge.cells[0] = c;
      else
        edge.cells[1] = c;
    }
  }
  for (Edge& e : level.edges)
    e.boundary = e.cell_count() == 1;
  level.h = 0.0;
  for (int c = 0; c < level.num_cells(); ++c)
    level.h = std::max(level.h, level.geometry(c).diameter);
}

} // namespace

Eigen::Vector2d CellGeometry::pullback(const Eigen::Vector2d& x) const
{
  return jacobian.inverse() * (x - origin);
}

CellGeometry triangle_geometry(const std::array<Eigen::Vector2d, 3>& v)
{
  CellGeometry g;
  g.vertices = v;
  g.origin = v[0];
  g.jacobian.col(0) = v[1] - v[0];
  g.jacobian.col(1) = v[2] - v[0];
  const double signed_det = g.jacobian.determinant();
  g.det = std::abs(signed_det);
  g.area = 0.5 * g.det;
  const double orientation = signed_det >= 0.0 ? 1.0 : -1.0;
  g.centroid = (v[0] + v[1] + v[2]) / 3.0;
  for (int i = 0; i < 3; ++i)
  {
    const Eigen::Vector2d tangent = v[(i + 2) % 3] - v[(i + 1) % 3];
    g.edge_lengths[i] = tangent.norm();
    g.perimeter += g.edge_lengths[i];
    g.diameter = std::max(g.diameter, g.edge_lengths[i]);
    // rotate the counterclockwise tangent clockwise to point outwards
    g.normals[i] = orientation * Eigen::Vector2d(tangent.y(), -tangent.x()) / g.edge_lengths[i];
  }
  return g;
}

int MeshLevel::num_interior_edges() const
{
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return !e.boundary; }));
}

CellGeometry MeshLevel::geometry(int cell) const
{
  const Cell& c = cells.at(cell);
  CellGeometry g = triangle_geometry({vertices[c.vertices[0]], vertices[c.vertices[1]], vertices[c.vertices[2]]});
  if (g.area <= geometric_tol * geometric_tol)
    throw std::runtime_error("degenerate cell " + std::to_string(cell) + " on level " + std::to_string(level_index));
  return g;
}

Eigen::Vector2d MeshLevel::edge_point(int edge, double t) const
{
  const Edge& e = edges.at(edge);
  return (1.0 - t) * vertices[e.vertices[0]] + t * vertices[e.vertices[1]];
}

double MeshLevel::edge_length(int edge) const
{
  const Edge& e = edges.at(edge);
  return (vertices[e.vertices[1]] - vertices[e.vertices[0]]).norm();
}

bool MeshLevel::is_boundary_vertex(int vertex) const { return on_domain_boundary(vertices.at(vertex)); }

MeshLevel build_initial_mesh()
{
  MeshLevel level;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      level.vertices.emplace_back(0.5 * i, 0.5 * j);
  auto id = [](int i, int j) { return i + 3 * j; };
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
    {
      // the diagonal joins the top-left and bottom-right corners of each square
      Cell lower, upper;
      lower.vertices = {id(i, j), id(i + 1, j), id(i, j + 1)};
      upper.vertices = {id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)};
      level.cells.push_back(lower);
      level.cells.push_back(upper);
    }
  std::map<EdgeKey, int> lookup;
  for (const Cell& c : level.cells)
    for (int i = 0; i < 3; ++i)
    {
      const auto [a, b] = local_edge_vertices(c, i);
      if (lookup.emplace(key(a, b), level.num_edges()).second)
      {
        Edge e;
        e.vertices = {std::min(a, b), std::max(a, b)};
        level.edges.push_back(e);
      }
    }
  connect(level, lookup);
  return level;
}

MeshLevel refine(const MeshLevel& coarse)
{
  MeshLevel fine;
  fine.level_index = coarse.level_index + 1;
  fine.vertices = coarse.vertices;
  const int nv = coarse.num_vertices();
  for (const Edge& e : coarse.edges)
    fine.vertices.push_back(0.5 * (coarse.vertices[e.vertices[0]] + coarse.vertices[e.vertices[1]]));

  std::map<EdgeKey, int> lookup;
  auto add_edge = [&](int a, int b, EdgeProvenance prov) {
    Edge e;
    e.vertices = {std::min(a, b), std::max(a, b)};
    e.provenance = prov;
    lookup.emplace(key(a, b), fine.num_edges());
    fine.edges.push_back(e);
  };

  for (int ce = 0; ce < coarse.num_edges(); ++ce)
  {
    const Edge& e = coarse.edges[ce];
    const int mid = nv + ce;
    add_edge(e.vertices[0], mid, {EdgeOrigin::ChildOfEdge, ce, 0});
    add_edge(mid, e.vertices[1], {EdgeOrigin::ChildOfEdge, ce, 1});
  }
  for (int cc = 0; cc < coarse.num_cells(); ++cc)
  {
    const Cell& c = coarse.cells[cc];
    const std::array<int, 3> m{nv + c.edges[0], nv + c.edges[1], nv + c.edges[2]};
    for (int i = 0; i < 3; ++i)
      add_edge(m[(i + 1) % 3], m[(i + 2) % 3], {EdgeOrigin::InteriorOfCell, cc, -1});
  }
  for (int cc = 0; cc < coarse.num_cells(); ++cc)
  {
    const Cell& c = coarse.cells[cc];
    const auto& v = c.vertices;
    const std::array<int, 3> m{nv + c.edges[0], nv + c.edges[1], nv + c.edges[2]};
    const std::array<std::array<int, 3>, 4> children{{{v[0], m[2], m[1]},
                                                      {m[2], v[1], m[0]},
                                                      {m[1], m[0], v[2]},
                                                      {m[0], m[1], m[2]}}};
    for (const auto& child : children)
    {
      Cell cell;
      cell.vertices = child;
      cell.parent = cc;
      fine.cells.push_back(cell);
    }
  }
  connect(fine, lookup);
  return fine;
}

std::vector<std::string> validate(const MeshLevel& level)
{
  std::vector<std::string> out;
  auto report = [&out](const std::string& s) { out.push_back(s); };

  for (int v = 0; v < level.num_vertices(); ++v)
  {
    const Eigen::Vector2d& x = level.vertices[v];
    if (x.x() < -geometric_tol || x.x() > 1 + geometric_tol || x.y() < -geometric_tol || x.y() > 1 + geometric_tol)
      report("vertex " + std::to_string(v) + " outside the unit square");
  }

  std::vector<int> adjacency(level.num_edges(), 0);
  for (int c = 0; c < level.num_cells(); ++c)
  {
    const Cell& cell = level.cells[c];
    const auto& v = cell.vertices;
    const Eigen::Vector2d a = level.vertices[v[1]] - level.vertices[v[0]];
    const Eigen::Vector2d b = level.vertices[v[2]] - level.vertices[v[0]];
    if (a.x() * b.y() - a.y() * b.x() <= 0.0)
      report("orientation: cell " + std::to_string(c) + " has non-positive signed area");
    for (int i = 0; i < 3; ++i)
    {
      const int e = cell.edges[i];
      if (e < 0 || e >= level.num_edges())
      {
        report("cell " + std::to_string(c) + " references missing edge");
        continue;
      }
      ++adjacency[e];
      const auto [p, q] = local_edge_vertices(cell, i);
      if (key(p, q) != key(level.edges[e].vertices[0], level.edges[e].vertices[1]))
        report("cell " + std::to_string(c) + " local edge " + std::to_string(i) + " endpoints mismatch");
    }
  }

  for (int e = 0; e < level.num_edges(); ++e)
  {
    const Edge& edge = level.edges[e];
    if (edge.vertices[0] >= edge.vertices[1])
      report("edge " + std::to_string(e) + " endpoints not ordered by id");
    const bool geometric_boundary = on_domain_boundary(level.vertices[edge.vertices[0]]) &&
                                    on_domain_boundary(level.vertices[edge.vertices[1]]) &&
                                    on_domain_boundary(level.edge_point(e, 0.5));
    if (adjacency[e] == 0)
      report("conformity: edge " + std::to_string(e) + " is dangling (no adjacent cell)");
    else if (adjacency[e] > 2)
      report("conformity: edge " + std::to_string(e) + " shared by more than two cells");
    else if (adjacency[e] == 1 && !geometric_boundary)
      report("conformity: edge " + std::to_string(e) + " has one cell but is not on the boundary");
    else if (adjacency[e] == 2 && geometric_boundary)
      report("conformity: boundary edge " + std::to_string(e) + " has two cells");
    if (edge.boundary != (adjacency[e] == 1))
      report("edge " + std::to_string(e) + " boundary flag inconsistent with adjacency");
  }

  const int euler = level.num_vertices() - level.num_edges() + level.num_cells() + 1;
  if (euler != 2)
    report("Euler characteristic V - E + C + 1 = " + std::to_string(euler) + " != 2");
  return out;
}

MeshHierarchy::MeshHierarchy(int finest)
{
  if (finest < 0)
    throw std::invalid_argument("MeshHierarchy: finest level must be >= 0");
  levels_.push_back(build_initial_mesh());
  for (int l = 1; l <= finest; ++l)
    levels_.push_back(refine(levels_.back()));
}

void write_mesh(std::ostream& os, const MeshLevel& level)
{
  std::ostringstream s;
  s << std::setprecision(17);
  s << "# hdgmg mesh level " << level.level_index << "\n";
  s << "vertices " << level.num_vertices() << "\n";
  for (int v = 0; v < level.num_vertices(); ++v)
    s << "v " << v << ' ' << level.vertices[v].x() << ' ' << level.vertices[v].y() << "\n";
  s << "edges " << level.num_edges() << "\n";
  for (int e = 0; e < level.num_edges(); ++e)
  {
    const Edge& edge = level.edges[e];
    s << "e " << e << ' ' << edge.vertices[0] << ' ' << edge.vertices[1] << ' ' << (edge.boundary ? 1 : 0) << ' '
      << edge.cells[0] << ' ' << edge.cells[1] << ' ';
    switch (edge.provenance.origin)
    {
    case EdgeOrigin::Root: s << "root"; break;
    case EdgeOrigin::ChildOfEdge: s << "child " << edge.provenance.parent << ' ' << edge.provenance.half; break;
    case EdgeOrigin::InteriorOfCell: s << "interior " << edge.provenance.parent; break;
    }
    s << "\n";
  }
  s << "cells " << level.num_cells() << "\n";
  for (int c = 0; c < level.num_cells(); ++c)
  {
    const Cell& cell = level.cells[c];
    s << "c " << c << ' ' << cell.vertices[0] << ' ' << cell.vertices[1] << ' ' << cell.vertices[2] << ' '
      << cell.edges[0] << ' ' << cell.edges[1] << ' ' << cell.edges[2] << ' ' << cell.parent << "\n";
  }
  os << s.str();
}

} // namespace hdgmg
