#pragma once

#include "hdgmg/mesh.hpp"
#include "hdgmg/polynomial.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace hdgmg {

enum class MethodFamily
{
  LdgH, ///< V = P_p, W = [P_p]^2, tau > 0
  RtH,  ///< V = P_p, W = [P_p]^2 + x P~_p, tau = 0
  BdmH  ///< V = P_{p-1}, W = [P_p]^2, tau = 0, p >= 2
};

enum class TauRule
{
  Constant, ///< tau = c
  OverH     ///< tau = c / h_l with h_l the level's maximal diameter
};

struct SolverKind
{
  MethodFamily family = MethodFamily::LdgH;
  int degree = 1;
  TauRule tau_rule = TauRule::OverH;
  double tau_constant = 1.0;

  static SolverKind ldg_h(int p, TauRule rule, double c = 1.0) { return {MethodFamily::LdgH, p, rule, c}; }
  static SolverKind rt_h(int p) { return {MethodFamily::RtH, p, TauRule::Constant, 0.0}; }
  static SolverKind bdm_h(int p) { return {MethodFamily::BdmH, p, TauRule::Constant, 0.0}; }

  /// Throws std::invalid_argument for unsupported combinations.
  void check() const;
  double tau(double h) const;
  int bulk_degree() const { return family == MethodFamily::BdmH ? degree - 1 : degree; }
  std::string name() const;
  /// "1/h" or "1" style label (literal c when c != 1); "0" for the mixed methods.
  std::string tau_label() const;
};

MethodFamily parse_family(const std::string& s);
std::string family_name(MethodFamily f);

/// Local bulk bases on one cell, orthonormal in L2(T).
class CellBasis
{
public:
  CellBasis(const CellGeometry& geometry, const SolverKind& kind);

  int scalar_size() const { return static_cast<int>(scalar_.cols()); }
  int vector_size() const { return static_cast<int>(vector_x_.cols()); }

  Eigen::VectorXd scalar_values(const Eigen::Vector2d& x) const;
  Eigen::Matrix<double, 2, Eigen::Dynamic> scalar_gradients(const Eigen::Vector2d& x) const;
  Eigen::Matrix<double, 2, Eigen::Dynamic> vector_values(const Eigen::Vector2d& x) const;
  Eigen::VectorXd vector_divergence(const Eigen::Vector2d& x) const;

private:
  ScaledMonomials monomials_;
  Eigen::MatrixXd scalar_;   // monomial coefficients of V basis
  Eigen::MatrixXd vector_x_; // x components of W basis
  Eigen::MatrixXd vector_y_; // y components of W basis
};

/// Per-cell HDG local solver and condensed local matrix. Local trace DoFs are
/// ordered (local edge i, node k) -> i (p+1) + k, nodes following the global
/// edge orientation.
struct LocalOperators
{
  int cell = -1;
  int degree = 1;
  double tau = 0.0;
  CellGeometry geometry;
  CellBasis basis;
  /// trace coefficients -> u_T, q_T
  Eigen::MatrixXd u_of_trace;
  Eigen::MatrixXd q_of_trace;
  /// load moments (f, v_i) -> u_T, q_T
  Eigen::MatrixXd u_of_load;
  Eigen::MatrixXd q_of_load;
  /// condensed local matrix of the energy form
  Eigen::MatrixXd condensed;
  /// int_dT (U lambda - lambda)(U mu - mu), independent of tau
  Eigen::MatrixXd boundary_defect;

  int trace_size() const { return 3 * (degree + 1); }
  /// Physical point of parameter t on local edge i (global edge orientation).
  Eigen::Vector2d edge_point(const MeshLevel& mesh, int local_edge, double t) const;
  /// Moments (f, v_i)_T computed with the smooth-function rule.
  Eigen::VectorXd load_moments(const std::function<double(const Eigen::Vector2d&)>& f) const;
  /// Local condensed right-hand side b_T(mu) = int_T U mu f.
  Eigen::VectorXd condensed_load(const std::function<double(const Eigen::Vector2d&)>& f) const
  {
    return u_of_trace.transpose() * load_moments(f);
  }
};

/// Builds the local solver of a cell. `h_level` feeds the tau rule.
/// Throws std::runtime_error naming the cell when the local system is singular.
LocalOperators build_local(const MeshLevel& mesh, int cell, const SolverKind& kind, double h_level);

} // namespace hdgmg
