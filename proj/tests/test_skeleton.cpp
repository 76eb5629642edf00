#include <doctest.h>

#include <hdgmg/skeleton.hpp>

#include <cmath>

using namespace hdgmg;

TEST_CASE("skeleton DoF counts on paper levels 2 to 7")
{
  const MeshHierarchy hierarchy(6);
  const int expected[3][6] = {{80, 352, 1472, 6016, 24320, 97792},
                              {120, 528, 2208, 9024, 36480, 146688},
                              {160, 704, 2944, 12032, 48640, 195584}};
  for (int p = 1; p <= 3; ++p)
    for (int l = 1; l <= 6; ++l)
      CHECK(SkeletonSpace(hierarchy.level(l), p).dof_count() == expected[p - 1][l - 1]);
}

TEST_CASE("boundary edges carry no DoFs and cell DoFs follow local edges")
{
  const MeshHierarchy hierarchy(1);
  const MeshLevel& mesh = hierarchy.level(1);
  const SkeletonSpace space(mesh, 2);
  for (int e = 0; e < mesh.num_edges(); ++e)
    CHECK((space.edge_offset(e) < 0) == mesh.edges[e].boundary);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const std::vector<int> dofs = space.cell_dofs(c);
    REQUIRE(dofs.size() == 9u);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
      {
        const int off = space.edge_offset(mesh.cells[c].edges[i]);
        CHECK(dofs[3 * i + k] == (off < 0 ? -1 : off + k));
      }
  }
}

TEST_CASE("conforming P1 traces reproduce linear functions on interior edges")
{
  const MeshHierarchy hierarchy(2);
  const MeshLevel& mesh = hierarchy.level(2);
  auto bubble = [](const Eigen::Vector2d& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
  Eigen::VectorXd w(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    w[v] = bubble(mesh.vertices[v]);
  for (int p = 1; p <= 3; ++p)
  {
    const SkeletonSpace space(mesh, p);
    const SkeletonVector g = trace_conforming_p1(space, w);
    for (int e = 0; e < mesh.num_edges(); ++e)
    {
      if (mesh.edges[e].boundary)
        continue;
      for (double t : {0.0, 0.3, 1.0})
      {
        const double expected = (1 - t) * w[mesh.edges[e].vertices[0]] + t * w[mesh.edges[e].vertices[1]];
        CHECK(eval_on_edge(space, g, e, t) == doctest::Approx(expected).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("conforming traces reject nonzero boundary values")
{
  const MeshLevel mesh = build_initial_mesh();
  const SkeletonSpace space(mesh, 1);
  CHECK_THROWS_AS(trace_conforming_p1(space, Eigen::VectorXd::Ones(mesh.num_vertices())), std::invalid_argument);
}

TEST_CASE("scaled mass of the constant trace")
{
  const MeshHierarchy hierarchy(2);
  const MeshLevel& mesh = hierarchy.level(2);
  const SkeletonSpace space(mesh, 2);
  // sum over cells of |T| / |dT| times the length of the cell's interior edges
  double expected = 0.0;
  for (const Cell& cell : mesh.cells)
  {
    std::array<Eigen::Vector2d, 3> v;
    for (int i = 0; i < 3; ++i)
      v[i] = mesh.vertices[cell.vertices[i]];
    const double area = 0.5 * std::abs((v[1] - v[0]).x() * (v[2] - v[0]).y() - (v[1] - v[0]).y() * (v[2] - v[0]).x());
    double perimeter = 0.0, interior = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      const double len = (v[(i + 2) % 3] - v[(i + 1) % 3]).norm();
      perimeter += len;
      if (!mesh.edges[cell.edges[i]].boundary)
        interior += len;
    }
    expected += area / perimeter * interior;
  }
  const SkeletonVector one = SkeletonVector::Ones(space.dof_count());
  const SparseMatrix m = build_scaled_mass(space);
  CHECK(one.dot(m * one) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(scaled_inner_product(space, one, one) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("scaled mass agrees with the quadrature inner product")
{
  const MeshHierarchy hierarchy(1);
  const SkeletonSpace space(hierarchy.level(1), 3);
  const SkeletonVector a = SkeletonVector::LinSpaced(space.dof_count(), -1.0, 2.0);
  const SkeletonVector b = a.array().sin().matrix();
  CHECK(a.dot(build_scaled_mass(space) * b) == doctest::Approx(scaled_inner_product(space, a, b)).epsilon(1e-13));
}

TEST_CASE("edge projection reproduces polynomials of degree p")
{
  const MeshHierarchy hierarchy(1);
  const MeshLevel& mesh = hierarchy.level(1);
  for (int p = 1; p <= 3; ++p)
  {
    const SkeletonSpace space(mesh, p);
    auto u = [p](const Eigen::Vector2d& x) { return std::pow(x.x() + 2 * x.y(), p) - x.y(); };
    const SkeletonVector g = project_boundary(space, u);
    for (int e = 0; e < mesh.num_edges(); ++e)
      if (!mesh.edges[e].boundary)
        for (double t : {0.2, 0.5, 0.9})
          CHECK(eval_on_edge(space, g, e, t) == doctest::Approx(u(mesh.edge_point(e, t))).epsilon(1e-12));
  }
}

TEST_CASE("interior vertex hats")
{
  const MeshHierarchy hierarchy(1);
  const MeshLevel& mesh = hierarchy.level(1);
  const std::vector<int> inner = interior_vertices(mesh);
  CHECK(inner.size() == 9u);
  for (int v : inner)
  {
    CHECK_FALSE(mesh.is_boundary_vertex(v));
    CHECK(vertex_hat(mesh, v).sum() == 1.0);
  }
}
