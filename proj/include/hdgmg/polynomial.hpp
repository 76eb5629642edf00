#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace hdgmg {

/// Exponent pairs (a, b) of the 2D monomials x^a y^b with a + b <= degree,
/// ordered by total degree.
std::vector<std::pair<int, int>> monomial_exponents(int degree);

inline int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Monomials centred at `center` and scaled by `scale`:
/// m_k(x) = ((x - c_x)/s)^a ((y - c_y)/s)^b.
class ScaledMonomials
{
public:
  ScaledMonomials(int degree, Eigen::Vector2d center, double scale);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::pair<int, int>>& exponents() const { return exponents_; }

  Eigen::VectorXd values(const Eigen::Vector2d& x) const;
  /// Row 0: d/dx, row 1: d/dy.
  Eigen::Matrix<double, 2, Eigen::Dynamic> gradients(const Eigen::Vector2d& x) const;

  Eigen::Vector2d local(const Eigen::Vector2d& x) const { return (x - center_) / scale_; }
  double scale() const { return scale_; }

private:
  int degree_;
  Eigen::Vector2d center_;
  double scale_;
  std::vector<std::pair<int, int>> exponents_;
};

/// Equidistant 1D Lagrange basis of degree p on [0,1], nodes t_i = i/p.
class EdgeLagrange
{
public:
  explicit EdgeLagrange(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  double node(int i) const { return static_cast<double>(i) / degree_; }
  Eigen::VectorXd values(double t) const;
  /// Reference mass matrix int_0^1 phi_i phi_j dt.
  const Eigen::MatrixXd& mass() const { return mass_; }

private:
  int degree_;
  Eigen::MatrixXd mass_;
};

/// Equidistant nodal P_p basis on the reference triangle; nodes are the
/// barycentric lattice (i, j, k)/p, with (i, j, k) the weights of vertices 0, 1, 2.
class TriangleLagrange
{
public:
  explicit TriangleLagrange(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(lattice_.size()); }
  /// Barycentric integer triple of node n (sums to p).
  const Eigen::Vector3i& lattice(int n) const { return lattice_[n]; }
  /// Values of all nodal basis functions at reference point (xi, eta).
  Eigen::VectorXd values(const Eigen::Vector2d& ref) const;

private:
  int degree_;
  std::vector<Eigen::Vector3i> lattice_;
  std::vector<std::pair<int, int>> exponents_;
  Eigen::MatrixXd inverse_vandermonde_;
};

} // namespace hdgmg
