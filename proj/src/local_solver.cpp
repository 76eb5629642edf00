#include "hdgmg/local_solver.hpp"

#include "hdgmg/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdgmg {

void SolverKind::check() const
{
  if (degree < 1)
    throw std::invalid_argument("solver kind: degree must be >= 1");
  switch (family)
  {
  case MethodFamily::LdgH:
    if (!(tau_constant > 0.0))
      throw std::invalid_argument("LDG-H requires a positive stabilization parameter");
    break;
  case MethodFamily::RtH:
    break;
  case MethodFamily::BdmH:
    if (degree < 2)
      throw std::invalid_argument("BDM-H requires p >= 2");
    break;
  }
}

double SolverKind::tau(double h) const
{
  if (family != MethodFamily::LdgH)
    return 0.0;
  return tau_rule == TauRule::OverH ? tau_constant / h : tau_constant;
}

std::string SolverKind::name() const { return family_name(family); }

std::string SolverKind::tau_label() const
{
  if (family != MethodFamily::LdgH)
    return "0";
  std::ostringstream s;
  if (tau_constant == 1.0)
    s << (tau_rule == TauRule::OverH ? "1/h" : "1");
  else
    s << tau_constant << (tau_rule == TauRule::OverH ? "/h" : "");
  return s.str();
}

MethodFamily parse_family(const std::string& s)
{
  if (s == "ldg-h" || s == "LDG-H")
    return MethodFamily::LdgH;
  if (s == "rt-h" || s == "RT-H")
    return MethodFamily::RtH;
  if (s == "bdm-h" || s == "BDM-H")
    return MethodFamily::BdmH;
  throw std::invalid_argument("unknown method '" + s + "' (expected ldg-h, rt-h or bdm-h)");
}

std::string family_name(MethodFamily f)
{
  switch (f)
  {
  case MethodFamily::LdgH: return "ldg-h";
  case MethodFamily::RtH: return "rt-h";
  case MethodFamily::BdmH: return "bdm-h";
  }
  return "?";
}

namespace {

// Replace the columns of `coefficients` (a basis in monomial coordinates) by an
// L2(T)-orthonormal basis of the same span: C <- C L^{-T} with G = L L^T.
void orthonormalize(const Eigen::MatrixXd& gram, std::initializer_list<Eigen::MatrixXd*> coefficients)
{
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("local basis: Gram matrix is not positive definite");
  const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  for (Eigen::MatrixXd* c : coefficients)
    *c = (*c) * linv.transpose();
}

} // namespace

CellBasis::CellBasis(const CellGeometry& geometry, const SolverKind& kind)
  : monomials_(kind.degree + 1, geometry.centroid, geometry.diameter)
{
  const int nm = monomials_.size();
  const int p = kind.degree;
  const int vdeg = kind.bulk_degree();

  scalar_ = Eigen::MatrixXd::Zero(nm, monomial_count(vdeg));
  for (int k = 0; k < monomial_count(vdeg); ++k)
    scalar_(k, k) = 1.0;

  const int nvec = 2 * monomial_count(p);
  const int extra = kind.family == MethodFamily::RtH ? p + 1 : 0;
  vector_x_ = Eigen::MatrixXd::Zero(nm, nvec + extra);
  vector_y_ = Eigen::MatrixXd::Zero(nm, nvec + extra);
  for (int k = 0; k < monomial_count(p); ++k)
  {
    vector_x_(k, 2 * k) = 1.0;
    vector_y_(k, 2 * k + 1) = 1.0;
  }
  if (extra > 0)
  {
    // x * (homogeneous monomials of degree p): (x^{a+1} y^b, x^a y^{b+1})
    const auto& ex = monomials_.exponents();
    auto index = [&ex](int a, int b) {
      for (std::size_t k = 0; k < ex.size(); ++k)
        if (ex[k].first == a && ex[k].second == b)
          return static_cast<int>(k);
      throw std::logic_error("monomial not found");
    };
    for (int b = 0; b <= p; ++b)
    {
      const int a = p - b;
      vector_x_(index(a + 1, b), nvec + b) = 1.0;
      vector_y_(index(a, b + 1), nvec + b) = 1.0;
    }
  }

  const TriangleRule& rule = triangle_rule_for_degree(2 * (p + 1));
  Eigen::MatrixXd gram_v = Eigen::MatrixXd::Zero(scalar_size(), scalar_size());
  Eigen::MatrixXd gram_w = Eigen::MatrixXd::Zero(vector_size(), vector_size());
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Eigen::Vector2d x = geometry.map(rule.points[q]);
    const double w = rule.weights[q] * geometry.det;
    const Eigen::VectorXd m = monomials_.values(x);
    const Eigen::VectorXd v = scalar_.transpose() * m;
    const Eigen::VectorXd wx = vector_x_.transpose() * m;
    const Eigen::VectorXd wy = vector_y_.transpose() * m;
    gram_v += w * v * v.transpose();
    gram_w += w * (wx * wx.transpose() + wy * wy.transpose());
  }
  orthonormalize(gram_v, {&scalar_});
  orthonormalize(gram_w, {&vector_x_, &vector_y_});
}

Eigen::VectorXd CellBasis::scalar_values(const Eigen::Vector2d& x) const
{
  return scalar_.transpose() * monomials_.values(x);
}

Eigen::Matrix<double, 2, Eigen::Dynamic> CellBasis::scalar_gradients(const Eigen::Vector2d& x) const
{
  return monomials_.gradients(x) * scalar_;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> CellBasis::vector_values(const Eigen::Vector2d& x) const
{
  const Eigen::VectorXd m = monomials_.values(x);
  Eigen::Matrix<double, 2, Eigen::Dynamic> out(2, vector_size());
  out.row(0) = (vector_x_.transpose() * m).transpose();
  out.row(1) = (vector_y_.transpose() * m).transpose();
  return out;
}

Eigen::VectorXd CellBasis::vector_divergence(const Eigen::Vector2d& x) const
{
  const auto g = monomials_.gradients(x);
  return vector_x_.transpose() * g.row(0).transpose() + vector_y_.transpose() * g.row(1).transpose();
}

Eigen::Vector2d LocalOperators::edge_point(const MeshLevel& mesh, int local_edge, double t) const
{
  return mesh.edge_point(mesh.cells[cell].edges[local_edge], t);
}

Eigen::VectorXd LocalOperators::load_moments(const std::function<double(const Eigen::Vector2d&)>& f) const
{
  const TriangleRule& rule = triangle_rule_for_degree(smooth_triangle_degree);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.scalar_size());
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Eigen::Vector2d x = geometry.map(rule.points[q]);
    out += rule.weights[q] * geometry.det * f(x) * basis.scalar_values(x);
  }
  return out;
}

LocalOperators build_local(const MeshLevel& mesh, int cell, const SolverKind& kind, double h_level)
{
  kind.check();
  const CellGeometry geometry = mesh.geometry(cell);
  LocalOperators ops{cell, kind.degree, kind.tau(h_level), geometry, CellBasis(geometry, kind), {}, {}, {}, {}, {}, {}};
  const CellBasis& basis = ops.basis;
  const int p = kind.degree;
  const int nv = basis.scalar_size();
  const int nw = basis.vector_size();
  const int nt = ops.trace_size();
  const double tau = ops.tau;
  const EdgeLagrange trace_basis(p);

  Eigen::MatrixXd mass_w = Eigen::MatrixXd::Zero(nw, nw);
  Eigen::MatrixXd div_w = Eigen::MatrixXd::Zero(nv, nw);  // (v_i, div p_j)
  Eigen::MatrixXd grad_v = Eigen::MatrixXd::Zero(nv, nw); // (p_j, grad v_i)
  const TriangleRule& cell_rule = triangle_rule_for_degree(2 * (p + 1));
  for (std::size_t q = 0; q < cell_rule.size(); ++q)
  {
    const Eigen::Vector2d x = geometry.map(cell_rule.points[q]);
    const double w = cell_rule.weights[q] * geometry.det;
    const Eigen::VectorXd v = basis.scalar_values(x);
    const auto gv = basis.scalar_gradients(x);
    const auto pw = basis.vector_values(x);
    const Eigen::VectorXd dw = basis.vector_divergence(x);
    mass_w += w * pw.transpose() * pw;
    div_w += w * v * dw.transpose();
    grad_v += w * gv.transpose() * pw;
  }

  Eigen::MatrixXd flux_w = Eigen::MatrixXd::Zero(nw, nt);   // <lambda, p_j . nu>
  Eigen::MatrixXd trace_v = Eigen::MatrixXd::Zero(nv, nt);  // <lambda, v_i>
  Eigen::MatrixXd mass_vb = Eigen::MatrixXd::Zero(nv, nv);  // <u, v>_dT
  Eigen::MatrixXd normal_w = Eigen::MatrixXd::Zero(nv, nw); // <p_j . nu, v_i>_dT
  const LineRule& edge_rule = gauss_line(p + 2);
  for (int i = 0; i < 3; ++i)
  {
    const Eigen::Vector2d& nu = geometry.normals[i];
    const double len = geometry.edge_lengths[i];
    for (std::size_t q = 0; q < edge_rule.size(); ++q)
    {
      const double t = edge_rule.points[q];
      const Eigen::Vector2d x = ops.edge_point(mesh, i, t);
      const double w = edge_rule.weights[q] * len;
      const Eigen::VectorXd phi = trace_basis.values(t);
      const Eigen::VectorXd v = basis.scalar_values(x);
      const Eigen::VectorXd pn = basis.vector_values(x).transpose() * nu;
      flux_w.middleCols(i * (p + 1), p + 1) += w * pn * phi.transpose();
      trace_v.middleCols(i * (p + 1), p + 1) += w * v * phi.transpose();
      mass_vb += w * v * v.transpose();
      normal_w += w * v * pn.transpose();
    }
  }

  // Unknowns (q, u); rows: flux equation tested with p, then balance tested with v.
  Eigen::MatrixXd system(nw + nv, nw + nv);
  system.topLeftCorner(nw, nw) = mass_w;
  system.topRightCorner(nw, nv) = -div_w.transpose();
  system.bottomLeftCorner(nv, nw) = normal_w - grad_v;
  system.bottomRightCorner(nv, nv) = tau * mass_vb;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible())
    throw std::runtime_error("local solver singular on cell " + std::to_string(cell) + " for " + kind.name() +
                             " with p = " + std::to_string(p));

  Eigen::MatrixXd rhs_trace(nw + nv, nt);
  rhs_trace.topRows(nw) = -flux_w;
  rhs_trace.bottomRows(nv) = tau * trace_v;
  const Eigen::MatrixXd sol_trace = lu.solve(rhs_trace);
  ops.q_of_trace = sol_trace.topRows(nw);
  ops.u_of_trace = sol_trace.bottomRows(nv);

  Eigen::MatrixXd rhs_load = Eigen::MatrixXd::Zero(nw + nv, nv);
  rhs_load.bottomRows(nv) = Eigen::MatrixXd::Identity(nv, nv);
  const Eigen::MatrixXd sol_load = lu.solve(rhs_load);
  ops.q_of_load = sol_load.topRows(nw);
  ops.u_of_load = sol_load.bottomRows(nv);

  // a_T(lambda, mu) = (Q lambda, Q mu)_T + tau <U lambda - lambda, U mu - mu>_dT
  ops.boundary_defect = Eigen::MatrixXd::Zero(nt, nt);
  for (int i = 0; i < 3; ++i)
  {
    const double len = geometry.edge_lengths[i];
    for (std::size_t q = 0; q < edge_rule.size(); ++q)
    {
      const double t = edge_rule.points[q];
      const Eigen::Vector2d x = ops.edge_point(mesh, i, t);
      Eigen::RowVectorXd jump = basis.scalar_values(x).transpose() * ops.u_of_trace;
      jump.segment(i * (p + 1), p + 1) -= trace_basis.values(t).transpose();
      ops.boundary_defect += edge_rule.weights[q] * len * jump.transpose() * jump;
    }
  }
  ops.condensed = ops.q_of_trace.transpose() * mass_w * ops.q_of_trace + tau * ops.boundary_defect;
  ops.condensed = 0.5 * (ops.condensed + ops.condensed.transpose()).eval();
  return ops;
}

} // namespace hdgmg
