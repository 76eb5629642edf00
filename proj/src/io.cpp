#include "hdgmg/io.hpp"

#include <iomanip>
#include <ostream>

namespace hdgmg {

void write_vtk(std::ostream& os, const Discretization& disc, const BulkField& field, const std::string& title)
{
  const MeshLevel& mesh = disc.mesh();
  const int nc = mesh.num_cells();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << std::setprecision(17);
  os << "POINTS " << 3 * nc << " double\n";
  for (const Cell& cell : mesh.cells)
    for (int v : cell.vertices)
      os << mesh.vertices[v][0] << ' ' << mesh.vertices[v][1] << " 0\n";
  os << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (int c = 0; c < nc; ++c)
    os << "3 " << 3 * c << ' ' << 3 * c + 1 << ' ' << 3 * c + 2 << '\n';
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c)
    os << "5\n";
  os << "POINT_DATA " << 3 * nc << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c)
    for (int v : mesh.cells[c].vertices)
      os << disc.u_value(field, c, mesh.vertices[v]) << '\n';
  os << "VECTORS q double\n";
  for (int c = 0; c < nc; ++c)
    for (int v : mesh.cells[c].vertices)
    {
      const Eigen::Vector2d q = disc.q_value(field, c, mesh.vertices[v]);
      os << q[0] << ' ' << q[1] << " 0\n";
    }
}

void write_trace_csv(std::ostream& os, const SkeletonSpace& space, const SkeletonVector& lambda)
{
  space.require_vector(lambda, "write_trace_csv");
  const MeshLevel& mesh = space.mesh();
  os << "edge,node,t,x,y,value\n" << std::setprecision(17);
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const int off = space.edge_offset(e);
    if (off < 0)
      continue;
    for (int a = 0; a < space.nodes_per_edge(); ++a)
    {
      const double t = space.basis().node(a);
      const Eigen::Vector2d x = mesh.edge_point(e, t);
      os << e << ',' << a << ',' << t << ',' << x[0] << ',' << x[1] << ',' << lambda[off + a] << '\n';
    }
  }
}

} // namespace hdgmg
