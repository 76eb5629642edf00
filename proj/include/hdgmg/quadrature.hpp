#pragma once

#include <Eigen/Dense>

#include <vector>

namespace hdgmg {

/// Points and weights of a rule on [0,1].
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// Points and weights on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct TriangleRule
{
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [0,1], exact to degree 2n-1.
const LineRule& gauss_line(int n);

/// Collapsed (Duffy) tensor Gauss rule with n points per direction,
/// exact for polynomials of total degree <= 2n-2.
const TriangleRule& gauss_triangle(int n);

/// Smallest collapsed rule exact for total degree `degree`.
const TriangleRule& triangle_rule_for_degree(int degree);

/// Fixed rules for integrating smooth (non-polynomial) data.
inline constexpr int smooth_line_points = 16;
inline constexpr int smooth_triangle_degree = 10;

} // namespace hdgmg
