#include <doctest.h>

#include <hdgmg/diagnostics.hpp>
#include <hdgmg/hdg_system.hpp>

#include "support/full_system.hpp"

#include <random>

using namespace hdgmg;

namespace {

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm() / b.norm(); }

Eigen::VectorXd condensed_solve(const Discretization& disc, const ScalarFunction& f)
{
  const CondensedSystem sys = disc.assemble(f);
  return DirectSolver(sys.matrix).solve(sys.rhs);
}

} // namespace

TEST_CASE("condensed solve equals the unhybridized block solve")
{
  const MeshHierarchy hierarchy(1);
  auto one = [](const Eigen::Vector2d&) { return 1.0; };
  auto quadratic = [](const Eigen::Vector2d& x) { return 1.0 + x.x() * x.y() - 2.0 * x.x() * x.x(); };
  std::vector<SolverKind> kinds;
  for (int p = 1; p <= 3; ++p)
  {
    kinds.push_back(SolverKind::ldg_h(p, TauRule::OverH));
    kinds.push_back(SolverKind::ldg_h(p, TauRule::Constant));
    kinds.push_back(SolverKind::rt_h(p));
    if (p >= 2)
      kinds.push_back(SolverKind::bdm_h(p));
  }
  for (int level = 0; level <= 1; ++level)
    for (const SolverKind& kind : kinds)
      for (const ScalarFunction& f : {ScalarFunction(one), ScalarFunction(quadratic)})
      {
        CAPTURE(level);
        CAPTURE(kind.name());
        const Discretization disc(hierarchy.level(level), kind, 1);
        const Eigen::VectorXd lambda = condensed_solve(disc, f);
        const Eigen::VectorXd expected =
            oracle::full_system_trace(hierarchy.level(level), kind.family, kind.degree, disc.tau(), f);
        CHECK(relative_error(lambda, expected) < 1e-10);
      }
}

TEST_CASE("condensed matrix is symmetric positive definite with a skeleton stencil")
{
  const MeshHierarchy hierarchy(2);
  for (int p = 1; p <= 3; ++p)
  {
    const Discretization disc(hierarchy.level(2), SolverKind::ldg_h(p, TauRule::OverH));
    const SparseMatrix a = disc.assemble_matrix();
    const Eigen::MatrixXd dense(a);
    CHECK((dense - dense.transpose()).norm() < 1e-12 * dense.norm());
    CHECK(Eigen::LLT<Eigen::MatrixXd>(dense).info() == Eigen::Success);
    for (int r = 0; r < a.rows(); ++r)
      CHECK(a.row(r).nonZeros() <= 5 * (p + 1));
  }
}

TEST_CASE("flux balance is the residual of the condensed system")
{
  const MeshHierarchy hierarchy(2);
  auto f = [](const Eigen::Vector2d& x) { return std::sin(3 * x.x()) + x.y(); };
  for (const SolverKind& kind : {SolverKind::ldg_h(2, TauRule::OverH), SolverKind::rt_h(1)})
  {
    const Discretization disc(hierarchy.level(2), kind);
    const CondensedSystem sys = disc.assemble(f);
    const Eigen::VectorXd lambda = DirectSolver(sys.matrix).solve(sys.rhs);
    CHECK(disc.flux_balance_residual(lambda, f) < 1e-11);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    Eigen::VectorXd mu(sys.rhs.size());
    for (auto& v : mu)
      v = normal(rng);
    const Eigen::VectorXd balance = disc.flux_balance(mu, f);
    CHECK((balance + (sys.matrix * mu - sys.rhs)).norm() < 1e-10 * sys.rhs.norm());
  }
}

TEST_CASE("zero load gives zero fields")
{
  const MeshHierarchy hierarchy(1);
  const Discretization disc(hierarchy.level(1), SolverKind::ldg_h(2, TauRule::OverH));
  auto zero = [](const Eigen::Vector2d&) { return 0.0; };
  const CondensedSystem sys = disc.assemble(zero);
  CHECK(sys.rhs.norm() == 0.0);
  const BulkField field = disc.reconstruct(DirectSolver(sys.matrix).solve(sys.rhs), zero);
  for (int c = 0; c < disc.mesh().num_cells(); ++c)
  {
    CHECK(field.u[c].norm() == 0.0);
    CHECK(field.q[c].norm() == 0.0);
  }
}

TEST_CASE("assembly does not depend on the thread count")
{
  const MeshHierarchy hierarchy(3);
  const SolverKind kind = SolverKind::ldg_h(2, TauRule::Constant);
  const Discretization serial(hierarchy.level(3), kind, 1);
  const Discretization threaded(hierarchy.level(3), kind, 4);
  const SparseMatrix a = serial.assemble_matrix();
  const SparseMatrix b = threaded.assemble_matrix();
  CHECK(Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff() == 0.0);
}
