#include "hdgmg/diagnostics.hpp"

#include "hdgmg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hdgmg {

namespace {

AssumptionRow make_row(const std::string& assumption, const std::string& level, const SolverKind& kind,
                       const std::string& injection, double constant, bool pass)
{
  AssumptionRow row;
  row.assumption = assumption;
  row.level = level;
  row.kind = kind.name();
  row.p = kind.degree;
  row.tau = kind.tau_label();
  row.injection = injection;
  row.constant = constant;
  row.pass = pass && std::isfinite(constant);
  return row;
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

// gradient of the barycentric coordinate of local vertex k
Eigen::Vector2d barycentric_gradient(const CellGeometry& g, int k)
{
  return -g.normals[k] * g.edge_lengths[k] / g.det;
}

// integrals of the vector basis over the cell, 2 x nw
Eigen::MatrixXd vector_basis_integrals(const LocalOperators& ops)
{
  const TriangleRule& rule = triangle_rule_for_degree(ops.degree + 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2, ops.basis.vector_size());
  for (std::size_t q = 0; q < rule.size(); ++q)
    out += rule.weights[q] * ops.geometry.det * ops.basis.vector_values(ops.geometry.map(rule.points[q]));
  return out;
}

Eigen::VectorXd fine_vertex_values(const MeshLevel& coarse, const MeshLevel& fine, const Eigen::VectorXd& values)
{
  Eigen::VectorXd out(fine.num_vertices());
  out.head(coarse.num_vertices()) = values;
  for (int e = 0; e < coarse.num_edges(); ++e)
  {
    const auto& v = coarse.edges[e].vertices;
    out[coarse.num_vertices() + e] = 0.5 * (values[v[0]] + values[v[1]]);
  }
  return out;
}

std::vector<std::vector<int>> vertex_cells(const MeshLevel& mesh)
{
  std::vector<std::vector<int>> out(mesh.num_vertices());
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int v : mesh.cells[c].vertices)
      out[v].push_back(c);
  return out;
}

// inverse of a matrix made of contiguous dense diagonal blocks
SparseMatrix block_diagonal_inverse(const SparseMatrix& m, int block)
{
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index start = 0; start < m.rows(); start += block)
  {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(block, block);
    for (int i = 0; i < block; ++i)
      for (SparseMatrix::InnerIterator it(m, start + i); it; ++it)
      {
        if (it.col() < start || it.col() >= start + block)
          throw std::logic_error("block_diagonal_inverse: matrix is not block diagonal");
        b(i, it.col() - start) = it.value();
      }
    const Eigen::MatrixXd inv = b.inverse();
    for (int i = 0; i < block; ++i)
      for (int j = 0; j < block; ++j)
        triplets.emplace_back(start + i, start + j, inv(i, j));
  }
  SparseMatrix out(m.rows(), m.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

// sup over the range of D, dense
double range_sup(const SparseMatrix& n, const SparseMatrix& d)
{
  return sup_ratio_on_range(Eigen::MatrixXd(n), Eigen::MatrixXd(d));
}

} // namespace

bool AssumptionReport::passed() const
{
  return std::all_of(rows.begin(), rows.end(), [](const AssumptionRow& r) { return r.pass; });
}

void AssumptionReport::append(const AssumptionReport& other)
{
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

void AssumptionReport::write_csv(std::ostream& os) const
{
  os << "assumption,level,kind,p,tau,injection,constant,growth,pass\n";
  for (const AssumptionRow& r : rows)
  {
    std::ostringstream c, g;
    c << std::setprecision(6) << std::scientific << r.constant;
    g << std::setprecision(4) << std::fixed << r.growth;
    os << r.assumption << ',' << r.level << ',' << r.kind << ',' << r.p << ',' << r.tau << ',' << r.injection << ','
       << c.str() << ',' << g.str() << ',' << (r.pass ? "pass" : "FAIL") << '\n';
  }
}

void apply_growth_limit(AssumptionReport& report, const std::string& assumption, double limit)
{
  std::map<std::tuple<std::string, int, std::string, std::string>, double> previous;
  for (AssumptionRow& r : report.rows)
  {
    if (r.assumption != assumption)
      continue;
    const auto key = std::make_tuple(r.kind, r.p, r.tau, r.injection);
    const auto it = previous.find(key);
    if (it != previous.end())
    {
      r.growth = it->second > 0.0 ? r.constant / it->second : std::numeric_limits<double>::infinity();
      if (!(r.growth <= limit))
        r.pass = false;
    }
    previous[key] = r.constant;
  }
}

DirectSolver::DirectSolver(const SparseMatrix& a)
{
  const Eigen::SparseMatrix<double> col = a;
  llt_.compute(col);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("direct solver: matrix is not positive definite");
}

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

LevelPair::LevelPair(const Discretization& coarse, const Discretization& fine, InjectionKind kind)
  : coarse_(coarse),
    fine_(fine),
    kind_(kind),
    a_coarse_(coarse.assemble_matrix()),
    a_fine_(fine.assemble_matrix()),
    injection_(build_injection(kind, coarse.space(), fine.space(), &coarse).matrix),
    coarse_solver_(a_coarse_)
{
}

std::string LevelPair::level_label() const
{
  return std::to_string(coarse_.mesh().level_index) + ":" + std::to_string(fine_.mesh().level_index);
}

SkeletonVector LevelPair::ritz_projection(const SkeletonVector& fine_lambda) const
{
  fine_.space().require_vector(fine_lambda, "ritz_projection");
  return coarse_solver_.solve(injection_.transpose() * (a_fine_ * fine_lambda));
}

SkeletonVector LevelPair::coarse_solve(const SkeletonVector& rhs) const { return coarse_solver_.solve(rhs); }

SkeletonVector LevelPair::fine_solve(const SkeletonVector& rhs) const
{
  if (!fine_solver_)
    fine_solver_ = std::make_unique<DirectSolver>(a_fine_);
  return fine_solver_->solve(rhs);
}

SkeletonVector ritz_quasi_projection(const LevelPair& pair, const SkeletonVector& fine_lambda)
{
  return pair.ritz_projection(fine_lambda);
}

Eigen::VectorXd random_unit_vector(Eigen::Index size, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v[i] = normal(rng);
  return v / v.norm();
}

SparseMatrix form_flux(const Discretization& disc)
{
  return disc.assemble_cellwise(
    [](const LocalOperators& ops) -> Eigen::MatrixXd { return ops.q_of_trace.transpose() * ops.q_of_trace; });
}

SparseMatrix form_bulk(const Discretization& disc)
{
  return disc.assemble_cellwise(
    [](const LocalOperators& ops) -> Eigen::MatrixXd { return ops.u_of_trace.transpose() * ops.u_of_trace; });
}

SparseMatrix form_trace_defect(const Discretization& disc)
{
  return disc.assemble_cellwise([](const LocalOperators& ops) -> Eigen::MatrixXd {
    return ops.geometry.area / ops.geometry.perimeter * ops.boundary_defect;
  });
}

SparseMatrix form_gradient_gap(const Discretization& disc)
{
  return disc.assemble_cellwise([](const LocalOperators& ops) -> Eigen::MatrixXd {
    const TriangleRule& rule = triangle_rule_for_degree(2 * (ops.degree + 1));
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ops.trace_size(), ops.trace_size());
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Eigen::Vector2d x = ops.geometry.map(rule.points[q]);
      const Eigen::MatrixXd gap =
        ops.basis.vector_values(x) * ops.q_of_trace + ops.basis.scalar_gradients(x) * ops.u_of_trace;
      out += rule.weights[q] * ops.geometry.det * gap.transpose() * gap;
    }
    return out;
  });
}

AssumptionReport check_identity_IA2(const LevelPair& pair)
{
  const MeshLevel& cmesh = pair.coarse().mesh();
  const MeshLevel& fmesh = pair.fine().mesh();
  double worst = 0.0;
  for (int v : interior_vertices(cmesh))
  {
    const Eigen::VectorXd hat = vertex_hat(cmesh, v);
    const SkeletonVector coarse = trace_conforming_p1(pair.coarse().space(), hat);
    const SkeletonVector fine = trace_conforming_p1(pair.fine().space(), fine_vertex_values(cmesh, fmesh, hat));
    worst = std::max(worst, (pair.injection() * coarse - fine).cwiseAbs().maxCoeff());
  }
  AssumptionReport report;
  report.rows.push_back(
    make_row("IA2", pair.level_label(), pair.fine().kind(), injection_name(pair.kind()), worst, worst <= 1e-12));
  return report;
}

AssumptionReport check_injection_stability(const LevelPair& pair, const SpectralOptions& options)
{
  const SparseMatrix mc = build_scaled_mass(pair.coarse().space());
  const SparseMatrix mf = build_scaled_mass(pair.fine().space());
  const SparseMatrix n = pair.injection().transpose() * mf * pair.injection();
  const double c = sup_ratio(n, mc, options);
  AssumptionReport report;
  report.rows.push_back(
    make_row("IA1", pair.level_label(), pair.fine().kind(), injection_name(pair.kind()), c, finite_positive(c)));
  return report;
}

AssumptionReport check_quasi_orthogonality(const LevelPair& pair, int trials, std::uint64_t seed)
{
  const Discretization& cd = pair.coarse();
  const Discretization& fd = pair.fine();
  const MeshLevel& cmesh = cd.mesh();
  const MeshLevel& fmesh = fd.mesh();

  std::vector<Eigen::MatrixXd> cint(cmesh.num_cells()), fint(fmesh.num_cells());
  for (int c = 0; c < cmesh.num_cells(); ++c)
    cint[c] = vector_basis_integrals(cd.local(c));
  for (int c = 0; c < fmesh.num_cells(); ++c)
    fint[c] = vector_basis_integrals(fd.local(c));
  const auto cells_of = vertex_cells(cmesh);
  const std::vector<int> hats = interior_vertices(cmesh);

  // |grad w|_0 per hat and the gradient on each incident coarse cell
  std::vector<std::vector<std::pair<int, Eigen::Vector2d>>> grads(hats.size());
  std::vector<double> grad_norm(hats.size(), 0.0);
  for (std::size_t k = 0; k < hats.size(); ++k)
  {
    for (int c : cells_of[hats[k]])
    {
      const CellGeometry& g = cd.local(c).geometry;
      const auto& verts = cmesh.cells[c].vertices;
      const int local = static_cast<int>(std::find(verts.begin(), verts.end(), hats[k]) - verts.begin());
      const Eigen::Vector2d grad = barycentric_gradient(g, local);
      grads[k].emplace_back(c, grad);
      grad_norm[k] += g.area * grad.squaredNorm();
    }
    grad_norm[k] = std::sqrt(grad_norm[k]);
  }

  double worst = 0.0;
  for (int t = 0; t < trials; ++t)
  {
    const SkeletonVector lambda = random_unit_vector(fd.space().dof_count(), seed + static_cast<std::uint64_t>(t));
    const BulkField ff = fd.reconstruct(lambda);
    const BulkField cf = cd.reconstruct(pair.ritz_projection(lambda));
    std::vector<Eigen::Vector2d> diff(cmesh.num_cells());
    for (int c = 0; c < cmesh.num_cells(); ++c)
      diff[c] = -(cint[c] * cf.q[c]);
    double q_norm = 0.0;
    for (int c = 0; c < fmesh.num_cells(); ++c)
    {
      diff[fmesh.cells[c].parent] += fint[c] * ff.q[c];
      q_norm += ff.q[c].squaredNorm();
    }
    q_norm = std::sqrt(q_norm);
    if (q_norm == 0.0)
      continue;
    for (std::size_t k = 0; k < hats.size(); ++k)
    {
      double r = 0.0;
      for (const auto& [c, grad] : grads[k])
        r += diff[c].dot(grad);
      worst = std::max(worst, std::abs(r) / (q_norm * grad_norm[k]));
    }
  }
  AssumptionReport report;
  report.rows.push_back(
    make_row("QO", pair.level_label(), fd.kind(), injection_name(pair.kind()), worst, worst <= 1e-9));
  return report;
}

AssumptionReport check_energy_stability(const LevelPair& pair, const SpectralOptions& options)
{
  const SparseMatrix& af = pair.a_fine();
  const SparseMatrix& ac = pair.a_coarse();
  const SparseMatrix& inj = pair.injection();
  const std::string label = pair.level_label();
  const std::string name = injection_name(pair.kind());

  const double es_i = sup_ratio(SparseMatrix(inj.transpose() * af * inj), ac, options);

  double es_p = 0.0;
  double a2 = 0.0;
  const Eigen::Index nf = af.rows();
  if (nf <= options.dense_limit)
  {
    const Eigen::MatrixXd afd(af);
    const Eigen::MatrixXd rhs = Eigen::MatrixXd(inj.transpose()) * afd;
    Eigen::MatrixXd proj(ac.rows(), nf);
    for (Eigen::Index j = 0; j < nf; ++j)
      proj.col(j) = pair.coarse_solve(rhs.col(j));
    es_p = sup_ratio(Eigen::MatrixXd(proj.transpose() * Eigen::MatrixXd(ac) * proj), afd);
    const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(nf, nf) - Eigen::MatrixXd(inj) * proj;
    a2 = sup_ratio(Eigen::MatrixXd(e.transpose() * afd * e), afd);
  }
  else
  {
    auto ip = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return inj * pair.ritz_projection(x); };
    es_p = sup_ratio_lanczos(
      [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return af * (inj * pair.coarse_solve(inj.transpose() * (af * x)));
      },
      af, options);
    a2 = sup_ratio_lanczos(
      [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::VectorXd ay = af * (x - ip(x));
        return ay - af * (inj * pair.coarse_solve(inj.transpose() * ay));
      },
      af, options);
  }
  AssumptionReport report;
  const SolverKind& kind = pair.fine().kind();
  report.rows.push_back(make_row("ES-I", label, kind, name, es_i, finite_positive(es_i)));
  report.rows.push_back(make_row("ES-P", label, kind, name, es_p, finite_positive(es_p)));
  report.rows.push_back(make_row("A2", label, kind, name, a2, finite_positive(a2)));
  return report;
}

AssumptionReport check_A1(const LevelPair& pair, int trials, std::uint64_t seed, const SpectralOptions& options)
{
  const SparseMatrix& af = pair.a_fine();
  const SparseMatrix& inj = pair.injection();
  const SparseMatrix mass = build_scaled_mass(pair.fine().space());
  const DirectSolver mass_solver(mass);
  const double h = pair.fine().mesh().h;
  const double largest = sup_ratio(af, mass, options);

  // a(lambda - I P lambda, lambda) and |A lambda|_l^2 for one vector
  auto parts = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd ax = af * x;
    const Eigen::VectorXd r = inj.transpose() * ax;
    const double numerator = x.dot(ax) - r.dot(pair.coarse_solve(r));
    return std::make_pair(numerator, ax.dot(mass_solver.solve(ax)));
  };

  double worst = 0.0;
  for (int t = 0; t < trials; ++t)
  {
    const auto [num, den] = parts(random_unit_vector(af.rows(), seed + static_cast<std::uint64_t>(t)));
    worst = std::max(worst, std::abs(num) / (h * h * den));
  }
  const Eigen::Index nf = af.rows();
  if (nf <= options.dense_limit)
  {
    const Eigen::MatrixXd afd(af);
    const Eigen::MatrixXd r = Eigen::MatrixXd(inj.transpose()) * afd;
    Eigen::MatrixXd solved(r.rows(), r.cols());
    Eigen::MatrixXd minv_a(nf, nf);
    for (Eigen::Index j = 0; j < nf; ++j)
    {
      solved.col(j) = pair.coarse_solve(r.col(j));
      minv_a.col(j) = mass_solver.solve(afd.col(j));
    }
    Eigen::MatrixXd n = afd - r.transpose() * solved;
    n = 0.5 * (n + n.transpose()).eval();
    Eigen::MatrixXd d = h * h * afd * minv_a;
    d = 0.5 * (d + d.transpose()).eval();
    worst = std::max({worst, sup_ratio(n, d), sup_ratio(Eigen::MatrixXd(-n), d)});
  }
  else
  {
    SparseMatrix d = h * h * af * block_diagonal_inverse(mass, pair.fine().space().nodes_per_edge()) * af;
    d = 0.5 * (d + SparseMatrix(d.transpose()));
    for (double sign : {1.0, -1.0})
      worst = std::max(worst, sup_ratio_lanczos(
                                [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                                  const Eigen::VectorXd ax = af * x;
                                  return sign * (ax - af * (inj * pair.coarse_solve(inj.transpose() * ax)));
                                },
                                d, options));
  }
  AssumptionReport report;
  const SolverKind& kind = pair.fine().kind();
  const std::string name = injection_name(pair.kind());
  report.rows.push_back(make_row("A1", pair.level_label(), kind, name, worst, std::isfinite(worst)));
  const double by_eigenvalue = worst * h * h * largest;
  report.rows.push_back(make_row("A1-eig", pair.level_label(), kind, name, by_eigenvalue, std::isfinite(by_eigenvalue)));
  return report;
}

AssumptionReport check_LS(const Discretization& disc, const SpectralOptions& options)
{
  const double h2 = disc.mesh().h * disc.mesh().h;
  const SparseMatrix mass = build_scaled_mass(disc.space());
  const SparseMatrix a = disc.assemble_matrix();
  const SparseMatrix gq = form_flux(disc);
  const SparseMatrix gu = form_bulk(disc);
  const SparseMatrix gj = form_trace_defect(disc);
  const SparseMatrix gr = form_gradient_gap(disc);

  const double ls1 = sup_ratio(gj, SparseMatrix(h2 * gq), options);
  const double ls2q = sup_ratio(SparseMatrix(h2 * gq), mass, options);
  const double ls2u = sup_ratio(gu, mass, options);
  const double ls3 = range_sup(SparseMatrix(h2 * gr), gj);
  const double ls6_lower = 1.0 / sup_ratio(mass, a, options);
  const double ls6_upper = sup_ratio(SparseMatrix(h2 * a), mass, options);

  const std::string level = std::to_string(disc.mesh().level_index);
  const SolverKind& kind = disc.kind();
  AssumptionReport report;
  report.rows.push_back(make_row("LS1", level, kind, "-", ls1, std::isfinite(ls1)));
  report.rows.push_back(make_row("LS2-Q", level, kind, "-", ls2q, std::isfinite(ls2q)));
  report.rows.push_back(make_row("LS2-U", level, kind, "-", ls2u, std::isfinite(ls2u)));
  report.rows.push_back(make_row("LS3", level, kind, "-", ls3, std::isfinite(ls3)));
  report.rows.push_back(make_row("LS6-lower", level, kind, "-", ls6_lower, finite_positive(ls6_lower)));
  report.rows.push_back(make_row("LS6-upper", level, kind, "-", ls6_upper, finite_positive(ls6_upper)));
  return report;
}

AssumptionReport check_LS4(const Discretization& disc)
{
  const MeshLevel& mesh = disc.mesh();
  const auto cells_of = vertex_cells(mesh);
  const TriangleRule& rule = triangle_rule_for_degree(2);
  double worst = 0.0;
  for (int v : interior_vertices(mesh))
  {
    const Eigen::VectorXd hat = vertex_hat(mesh, v);
    const BulkField field = disc.reconstruct(trace_conforming_p1(disc.space(), hat));
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
      const CellGeometry& g = disc.local(c).geometry;
      const auto& verts = mesh.cells[c].vertices;
      Eigen::Vector2d grad = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k)
        grad += hat[verts[k]] * barycentric_gradient(g, k);
      std::vector<Eigen::Vector2d> points(g.vertices.begin(), g.vertices.end());
      for (std::size_t q = 0; q < rule.size(); ++q)
        points.push_back(g.map(rule.points[q]));
      for (const Eigen::Vector2d& x : points)
      {
        const Eigen::Vector2d r = g.pullback(x);
        const double w = hat[verts[0]] * (1.0 - r[0] - r[1]) + hat[verts[1]] * r[0] + hat[verts[2]] * r[1];
        worst = std::max(worst, std::abs(disc.u_value(field, c, x) - w));
        worst = std::max(worst, (disc.q_value(field, c, x) + grad).cwiseAbs().maxCoeff());
      }
    }
  }
  AssumptionReport report;
  report.rows.push_back(
    make_row("LS4", std::to_string(mesh.level_index), disc.kind(), "-", worst, worst <= 1e-11));
  return report;
}

std::vector<ConvergenceRow> convergence_study(const SolverKind& kind, const std::vector<int>& levels, int threads)
{
  if (levels.empty())
    return {};
  const double pi = 3.14159265358979323846;
  const ScalarFunction u = [pi](const Eigen::Vector2d& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  const ScalarFunction f = [pi, u](const Eigen::Vector2d& x) { return 2.0 * pi * pi * u(x); };
  auto grad_u = [pi](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                           pi * std::sin(pi * x[0]) * std::cos(pi * x[1]));
  };

  const MeshHierarchy hierarchy(*std::max_element(levels.begin(), levels.end()));
  const TriangleRule& rule = triangle_rule_for_degree(smooth_triangle_degree);
  std::vector<ConvergenceRow> rows;
  for (int l : levels)
  {
    const MeshLevel& mesh = hierarchy.level(l);
    const Discretization disc(mesh, kind, threads);
    const CondensedSystem system = disc.assemble(f);
    const SkeletonVector lambda = DirectSolver(system.matrix).solve(system.rhs);

    ConvergenceRow row;
    row.level = l;
    row.h = mesh.h;
    row.dofs = disc.space().dof_count();
    const SkeletonVector e = project_boundary(disc.space(), u) - lambda;
    row.error_trace = std::sqrt(e.dot(build_scaled_mass(disc.space()) * e));
    const BulkField field = disc.reconstruct(lambda, f);
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
      const CellGeometry& g = disc.local(c).geometry;
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        const Eigen::Vector2d x = g.map(rule.points[q]);
        const double w = rule.weights[q] * g.det;
        row.error_u += w * std::pow(u(x) - disc.u_value(field, c, x), 2);
        row.error_q += w * (grad_u(x) + disc.q_value(field, c, x)).squaredNorm();
      }
    }
    row.error_u = std::sqrt(row.error_u);
    row.error_q = std::sqrt(row.error_q);
    if (!rows.empty())
    {
      const ConvergenceRow& prev = rows.back();
      const double ratio = std::log(prev.h / row.h);
      row.order_trace = std::log(prev.error_trace / row.error_trace) / ratio;
      row.order_u = std::log(prev.error_u / row.error_u) / ratio;
      row.order_q = std::log(prev.error_q / row.error_q) / ratio;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const SolverKind& kind, const std::vector<ConvergenceRow>& rows)
{
  os << "kind,p,tau,level,h,dofs,error_trace,order_trace,error_u,order_u,error_q,order_q\n";
  for (const ConvergenceRow& r : rows)
  {
    os << kind.name() << ',' << kind.degree << ',' << kind.tau_label() << ',' << r.level << ',' << std::setprecision(6)
       << std::scientific << r.h << ',' << r.dofs << ',' << r.error_trace << ',' << std::fixed << std::setprecision(3)
       << r.order_trace << ',' << std::scientific << std::setprecision(6) << r.error_u << ',' << std::fixed
       << std::setprecision(3) << r.order_u << ',' << std::scientific << std::setprecision(6) << r.error_q << ','
       << std::fixed << std::setprecision(3) << r.order_q << '\n';
    os << std::defaultfloat;
  }
}

AssumptionReport run_checks(const CheckConfig& config)
{
  AssumptionReport report;
  const int finest = std::max({config.max_level, config.ls_max_level, config.a1_max_level, 1});
  const MeshHierarchy hierarchy(finest);
  for (int p : config.degrees)
    for (TauRule rule : config.tau_rules)
    {
      const SolverKind kind = SolverKind::ldg_h(p, rule, 1.0);
      std::vector<std::unique_ptr<Discretization>> discs;
      for (int l = 0; l <= finest; ++l)
        discs.push_back(std::make_unique<Discretization>(hierarchy.level(l), kind, config.threads));

      for (int l = 1; l <= config.ls_max_level; ++l)
        report.append(check_LS(*discs[l], config.spectral));
      for (int l = 1; l <= std::min(config.ls_max_level, 2); ++l)
        report.append(check_LS4(*discs[l]));

      for (InjectionKind inj : config.injections)
        for (int l = config.min_level; l <= config.max_level; ++l)
        {
          const LevelPair pair(*discs[l - 1], *discs[l], inj);
          report.append(check_injection_stability(pair, config.spectral));
          report.append(check_identity_IA2(pair));
          report.append(check_quasi_orthogonality(pair, config.trials, config.seed));
          report.append(check_energy_stability(pair, config.spectral));
          if (l <= config.a1_max_level)
            report.append(check_A1(pair, config.trials, config.seed, config.spectral));
        }

      if (p == 1 && rule == TauRule::OverH)
      {
        const auto rows = convergence_study(kind, {3, 4, 5}, config.threads);
        for (std::size_t i = 1; i < rows.size(); ++i)
          report.rows.push_back(make_row("LS5", std::to_string(rows[i - 1].level) + ":" + std::to_string(rows[i].level),
                                         kind, "-", rows[i].order_trace, rows[i].order_trace >= 1.9));
      }
    }

  apply_growth_limit(report, "IA1", 1.05);
  for (const char* name : {"ES-I", "ES-P", "A2", "LS1", "LS2-Q", "LS2-U", "LS3", "LS6-upper"})
    apply_growth_limit(report, name, 1.10);
  apply_growth_limit(report, "A1", 1.25);
  apply_growth_limit(report, "A1-eig", 1.25);
  return report;
}

} // namespace hdgmg
