#include "hdgmg/polynomial.hpp"

#include "hdgmg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgmg {

namespace {

double ipow(double x, int k)
{
  double r = 1.0;
  for (int i = 0; i < k; ++i)
    r *= x;
  return r;
}

} // namespace

std::vector<std::pair<int, int>> monomial_exponents(int degree)
{
  std::vector<std::pair<int, int>> e;
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b)
      e.emplace_back(d - b, b);
  return e;
}

ScaledMonomials::ScaledMonomials(int degree, Eigen::Vector2d center, double scale)
  : degree_(degree), center_(std::move(center)), scale_(scale), exponents_(monomial_exponents(degree))
{
}

Eigen::VectorXd ScaledMonomials::values(const Eigen::Vector2d& x) const
{
  const Eigen::Vector2d z = local(x);
  Eigen::VectorXd v(size());
  for (int k = 0; k < size(); ++k)
    v[k] = ipow(z.x(), exponents_[k].first) * ipow(z.y(), exponents_[k].second);
  return v;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> ScaledMonomials::gradients(const Eigen::Vector2d& x) const
{
  const Eigen::Vector2d z = local(x);
  Eigen::Matrix<double, 2, Eigen::Dynamic> g(2, size());
  for (int k = 0; k < size(); ++k)
  {
    const auto [a, b] = exponents_[k];
    g(0, k) = a == 0 ? 0.0 : a * ipow(z.x(), a - 1) * ipow(z.y(), b) / scale_;
    g(1, k) = b == 0 ? 0.0 : b * ipow(z.x(), a) * ipow(z.y(), b - 1) / scale_;
  }
  return g;
}

EdgeLagrange::EdgeLagrange(int degree) : degree_(degree)
{
  if (degree < 1)
    throw std::invalid_argument("EdgeLagrange: degree must be >= 1");
  const LineRule& rule = gauss_line(degree + 1);
  mass_ = Eigen::MatrixXd::Zero(size(), size());
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Eigen::VectorXd phi = values(rule.points[q]);
    mass_ += rule.weights[q] * phi * phi.transpose();
  }
}

Eigen::VectorXd EdgeLagrange::values(double t) const
{
  Eigen::VectorXd v(size());
  for (int i = 0; i <= degree_; ++i)
  {
    double r = 1.0;
    for (int j = 0; j <= degree_; ++j)
      if (j != i)
        r *= (t - node(j)) / (node(i) - node(j));
    v[i] = r;
  }
  return v;
}

TriangleLagrange::TriangleLagrange(int degree) : degree_(degree), exponents_(monomial_exponents(degree))
{
  if (degree < 1)
    throw std::invalid_argument("TriangleLagrange: degree must be >= 1");
  for (int j = 0; j <= degree; ++j)
    for (int k = 0; k <= degree - j; ++k)
      lattice_.emplace_back(degree - j - k, j, k);
  const int n = size();
  Eigen::MatrixXd vandermonde(n, n);
  for (int r = 0; r < n; ++r)
  {
    const double xi = static_cast<double>(lattice_[r][1]) / degree;
    const double eta = static_cast<double>(lattice_[r][2]) / degree;
    for (int c = 0; c < n; ++c)
      vandermonde(r, c) = ipow(xi, exponents_[c].first) * ipow(eta, exponents_[c].second);
  }
  inverse_vandermonde_ = vandermonde.fullPivLu().inverse();
}

Eigen::VectorXd TriangleLagrange::values(const Eigen::Vector2d& ref) const
{
  Eigen::VectorXd m(size());
  for (int c = 0; c < size(); ++c)
    m[c] = ipow(ref.x(), exponents_[c].first) * ipow(ref.y(), exponents_[c].second);
  // basis_n(x) = sum_c Vinv(c, n) m_c(x)
  return inverse_vandermonde_.transpose() * m;
}

} // namespace hdgmg
