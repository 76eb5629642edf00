#include <doctest.h>

#include <hdgmg/mesh.hpp>

#include <fstream>
#include <set>
#include <sstream>

using namespace hdgmg;

TEST_CASE("initial mesh matches the golden dump")
{
  std::ifstream golden(HDGMG_TEST_DATA "/mesh_level0.txt");
  REQUIRE(golden);
  std::stringstream expected;
  expected << golden.rdbuf();
  std::ostringstream actual;
  write_mesh(actual, build_initial_mesh());
  CHECK(actual.str() == expected.str());
}

TEST_CASE("initial mesh diagonals run along x + y = const")
{
  const MeshLevel mesh = build_initial_mesh();
  int diagonals = 0;
  for (const Edge& e : mesh.edges)
  {
    const Eigen::Vector2d d = mesh.vertices[e.vertices[1]] - mesh.vertices[e.vertices[0]];
    if (d.x() != 0.0 && d.y() != 0.0)
    {
      CHECK(d.x() == doctest::Approx(-d.y()));
      ++diagonals;
    }
  }
  CHECK(diagonals == 4);
}

TEST_CASE("refinement counts")
{
  const MeshHierarchy hierarchy(5);
  for (int l = 0; l <= 5; ++l)
  {
    const MeshLevel& m = hierarchy.level(l);
    const int n = 2 << l; // squares per side
    CHECK(m.num_cells() == 2 * n * n);
    CHECK(m.num_vertices() == (n + 1) * (n + 1));
    CHECK(m.num_edges() == 3 * n * n + 2 * n);
    CHECK(m.num_boundary_edges() == 4 * n);
    CHECK(m.h == doctest::Approx(std::sqrt(2.0) / n));
    CHECK(validate(m).empty());
    if (l > 0)
    {
      const MeshLevel& c = hierarchy.level(l - 1);
      CHECK(m.num_edges() == 2 * c.num_edges() + 3 * c.num_cells());
    }
  }
}

TEST_CASE("total area and outward normals")
{
  const MeshHierarchy hierarchy(3);
  const MeshLevel& m = hierarchy.level(3);
  double area = 0.0;
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellGeometry g = m.geometry(c);
    area += g.area;
    CHECK(g.det == doctest::Approx(2.0 * g.area));
    Eigen::Vector2d closure = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i)
    {
      closure += g.edge_lengths[i] * g.normals[i];
      const Eigen::Vector2d mid = 0.5 * (g.vertices[(i + 1) % 3] + g.vertices[(i + 2) % 3]);
      CHECK(g.normals[i].dot(mid - g.centroid) > 0.0);
    }
    CHECK(closure.norm() < 1e-14);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("edge provenance of a refined mesh")
{
  const MeshHierarchy hierarchy(2);
  const MeshLevel& coarse = hierarchy.level(1);
  const MeshLevel& fine = hierarchy.level(2);
  int children = 0, interior = 0;
  for (int e = 0; e < fine.num_edges(); ++e)
  {
    const EdgeProvenance& prov = fine.edges[e].provenance;
    const Eigen::Vector2d a = fine.vertices[fine.edges[e].vertices[0]];
    const Eigen::Vector2d b = fine.vertices[fine.edges[e].vertices[1]];
    if (prov.origin == EdgeOrigin::ChildOfEdge)
    {
      ++children;
      const Edge& parent = coarse.edges[prov.parent];
      const Eigen::Vector2d pa = coarse.vertices[parent.vertices[0]];
      const Eigen::Vector2d pb = coarse.vertices[parent.vertices[1]];
      const Eigen::Vector2d end = prov.half == 0 ? pa : pb;
      CHECK(((a - end).norm() < 1e-14 || (b - end).norm() < 1e-14));
      CHECK(fine.edges[e].boundary == parent.boundary);
      CHECK(fine.edge_length(e) == doctest::Approx(0.5 * coarse.edge_length(prov.parent)));
    }
    else
    {
      REQUIRE(prov.origin == EdgeOrigin::InteriorOfCell);
      ++interior;
      CHECK_FALSE(fine.edges[e].boundary);
      const CellGeometry g = coarse.geometry(prov.parent);
      // both endpoints are midpoints of edges of the parent cell
      for (const Eigen::Vector2d& x : {a, b})
      {
        bool found = false;
        for (int i = 0; i < 3; ++i)
          found |= (x - 0.5 * (g.vertices[(i + 1) % 3] + g.vertices[(i + 2) % 3])).norm() < 1e-14;
        CHECK(found);
      }
    }
  }
  CHECK(children == 2 * coarse.num_edges());
  CHECK(interior == 3 * coarse.num_cells());
}

TEST_CASE("children of a cell tile their parent")
{
  const MeshHierarchy hierarchy(2);
  const MeshLevel& coarse = hierarchy.level(1);
  const MeshLevel& fine = hierarchy.level(2);
  std::vector<double> area(coarse.num_cells(), 0.0);
  std::vector<int> count(coarse.num_cells(), 0);
  for (int c = 0; c < fine.num_cells(); ++c)
  {
    const int parent = fine.cells[c].parent;
    REQUIRE(parent >= 0);
    area[parent] += fine.geometry(c).area;
    ++count[parent];
  }
  for (int c = 0; c < coarse.num_cells(); ++c)
  {
    CHECK(count[c] == 4);
    CHECK(area[c] == doctest::Approx(coarse.geometry(c).area));
  }
}

TEST_CASE("validate reports a broken mesh")
{
  MeshLevel m = build_initial_mesh();
  std::swap(m.cells[0].vertices[1], m.cells[0].vertices[2]);
  CHECK_FALSE(validate(m).empty());
}

TEST_CASE("degenerate geometry throws")
{
  MeshLevel m = build_initial_mesh();
  m.vertices[m.cells[0].vertices[2]] = 0.5 * (m.vertices[m.cells[0].vertices[0]] + m.vertices[m.cells[0].vertices[1]]);
  CHECK_THROWS_AS(m.geometry(0), std::runtime_error);
}
