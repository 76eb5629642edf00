#include "hdgmg/multigrid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdgmg {

void SmootherKind::check() const
{
  if (type == SmootherType::Jacobi && !(omega > 0.0 && omega <= 1.0))
    throw std::invalid_argument("Jacobi relaxation factor must satisfy 0 < omega <= 1");
}

std::string SmootherKind::name() const
{
  if (type == SmootherType::GaussSeidel)
    return "gs";
  if (type == SmootherType::SymmetricGaussSeidel)
    return "sgs";
  std::ostringstream s;
  s << "jacobi:" << omega;
  return s.str();
}

SmootherKind parse_smoother(const std::string& s)
{
  if (s == "sgs" || s == "symmetric-gauss-seidel")
    return SmootherKind::symmetric_gauss_seidel();
  if (s == "gs" || s == "gauss-seidel")
    return SmootherKind::gauss_seidel();
  if (s == "jacobi")
    return SmootherKind::jacobi();
  if (s.rfind("jacobi:", 0) == 0)
  {
    SmootherKind k = SmootherKind::jacobi(std::stod(s.substr(7)));
    k.check();
    return k;
  }
  throw std::invalid_argument("unknown smoother '" + s + "' (expected sgs, gs, jacobi or jacobi:<omega>)");
}

void smooth(const SparseMatrix& a, Eigen::VectorXd& x, const Eigen::VectorXd& b, const SmootherKind& kind,
            bool adjoint)
{
  const Eigen::Index n = a.rows();
  auto relax = [&](Eigen::Index i) {
    double sum = b[i];
    double diag = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
    {
      if (it.col() == i)
        diag = it.value();
      else
        sum -= it.value() * x[it.col()];
    }
    if (diag == 0.0)
      throw std::runtime_error("smoother: zero diagonal entry in row " + std::to_string(i));
    x[i] = sum / diag;
  };
  if (kind.type == SmootherType::SymmetricGaussSeidel)
  {
    for (Eigen::Index i = 0; i < n; ++i)
      relax(i);
    for (Eigen::Index i = n - 1; i >= 0; --i)
      relax(i);
    return;
  }
  if (kind.type == SmootherType::GaussSeidel)
  {
    if (!adjoint)
      for (Eigen::Index i = 0; i < n; ++i)
        relax(i);
    else
      for (Eigen::Index i = n - 1; i >= 0; --i)
        relax(i);
    return;
  }
  const Eigen::VectorXd diag = a.diagonal();
  if ((diag.array() == 0.0).any())
    throw std::runtime_error("smoother: zero diagonal entry");
  const Eigen::VectorXd r = b - a * x;
  x += kind.omega * r.cwiseQuotient(diag);
}

void MgConfig::check() const
{
  if (smoothing_steps < 1)
    throw std::invalid_argument("number of smoothing steps must be >= 1");
  if (coarsest < 0)
    throw std::invalid_argument("coarsest level must be >= 0");
  smoother.check();
  kind.check();
}

LevelStack::LevelStack(std::vector<std::shared_ptr<const SparseMatrix>> matrices,
                       std::vector<std::shared_ptr<const SparseMatrix>> injections, int coarsest)
  : matrices_(std::move(matrices)), injections_(std::move(injections)), coarsest_(coarsest)
{
  if (coarsest_ < 0 || coarsest_ >= static_cast<int>(matrices_.size()))
    throw std::invalid_argument("LevelStack: coarsest level out of range");
  if (injections_.size() != matrices_.size())
    throw std::invalid_argument("LevelStack: one injection slot per level required");
  for (int l = coarsest_ + 1; l <= finest(); ++l)
  {
    if (!injections_[l])
      throw std::invalid_argument("LevelStack: missing injection for level " + std::to_string(l));
    if (injections_[l]->rows() != matrices_[l]->rows() || injections_[l]->cols() != matrices_[l - 1]->rows())
      throw std::invalid_argument("LevelStack: injection dimensions do not match level " + std::to_string(l));
  }
  coarse_factor_.compute(Eigen::MatrixXd(*matrices_[coarsest_]));
  if (coarse_factor_.info() != Eigen::Success)
    throw std::runtime_error("LevelStack: coarsest matrix is not positive definite");
}

Eigen::VectorXd LevelStack::coarse_solve(const Eigen::VectorXd& rhs) const { return coarse_factor_.solve(rhs); }

HierarchyOperators build_operators(const MeshHierarchy& hierarchy, const SolverKind& kind, int threads)
{
  HierarchyOperators ops;
  for (const MeshLevel& level : hierarchy.levels())
  {
    ops.discretizations.push_back(std::make_unique<Discretization>(level, kind, threads));
    ops.matrices.push_back(std::make_shared<const SparseMatrix>(ops.discretizations.back()->assemble_matrix()));
  }
  return ops;
}

std::vector<std::shared_ptr<const SparseMatrix>> build_injections(const HierarchyOperators& ops, InjectionKind kind)
{
  std::vector<std::shared_ptr<const SparseMatrix>> out(ops.discretizations.size());
  for (std::size_t l = 1; l < ops.discretizations.size(); ++l)
  {
    const Discretization& coarse = *ops.discretizations[l - 1];
    const Discretization& fine = *ops.discretizations[l];
    out[l] = std::make_shared<const SparseMatrix>(
      build_injection(kind, coarse.space(), fine.space(), &coarse).matrix);
  }
  return out;
}

LevelStack build_level_stack(const MeshHierarchy& hierarchy, const MgConfig& config, int threads)
{
  config.check();
  const HierarchyOperators ops = build_operators(hierarchy, config.kind, threads);
  return LevelStack(ops.matrices, build_injections(ops, config.injection), config.coarsest);
}

Eigen::VectorXd vcycle(const LevelStack& stack, int level, const Eigen::VectorXd& rhs, const MgConfig& config)
{
  if (level == stack.coarsest())
    return stack.coarse_solve(rhs);
  const SparseMatrix& a = stack.matrix(level);
  const SparseMatrix& inj = stack.injection(level);
  const int m = config.smoothing_steps;

  // R^i is the forward smoother for odd i and its adjoint for even i
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  for (int i = 1; i <= m; ++i)
    smooth(a, x, rhs, config.smoother, i % 2 == 0);

  const Eigen::VectorXd coarse_rhs = inj.transpose() * (rhs - a * x);
  x += inj * vcycle(stack, level - 1, coarse_rhs, config);

  for (int i = 1; i <= m; ++i)
    smooth(a, x, rhs, config.smoother, (i + m) % 2 == 0);
  return x;
}

double SolveResult::contraction() const
{
  if (iterations == 0 || residual_history.empty())
    return 0.0;
  return std::pow(residual_history.back() / residual_history.front(), 1.0 / iterations);
}

SolveResult solve_stationary(const LevelStack& stack, int level, const Eigen::VectorXd& b, const MgConfig& config,
                             double tol, int max_iterations)
{
  config.check();
  if (!(tol > 0.0))
    throw std::invalid_argument("solve_stationary: tolerance must be positive");
  const double bnorm = b.norm();
  if (bnorm == 0.0)
    throw std::invalid_argument("solve_stationary: right-hand side must be nonzero");
  const SparseMatrix& a = stack.matrix(level);

  SolveResult result;
  result.solution = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  result.residual_history.push_back(1.0);
  while (result.residual_history.back() >= tol)
  {
    if (result.iterations >= max_iterations)
    {
      result.failure = "no convergence after " + std::to_string(max_iterations) + " iterations";
      return result;
    }
    result.solution += vcycle(stack, level, r, config);
    r = b - a * result.solution;
    ++result.iterations;
    const double rel = r.norm() / bnorm;
    result.residual_history.push_back(rel);
    if (!std::isfinite(rel) || rel > 10.0)
    {
      result.failure = "residual diverged";
      return result;
    }
  }
  result.converged = true;
  return result;
}

} // namespace hdgmg
