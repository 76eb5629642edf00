#include "hdgmg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hdgmg {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
  double p0 = 1.0, p1 = x;
  if (n == 0)
    return {1.0, 0.0};
  for (int k = 2; k <= n; ++k)
  {
    const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

LineRule make_gauss_line(int n)
{
  // Newton iteration on the roots in [-1,1], mapped to [0,1].
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it)
    {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    const double dp = legendre(n, x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.points[n / 2] = 0.5;
  return rule;
}

TriangleRule make_gauss_triangle(int n)
{
  const LineRule& g = gauss_line(n);
  TriangleRule rule;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
    {
      const double u = g.points[i];
      const double v = g.points[j];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  return rule;
}

template <class Rule, class Factory>
const Rule& cached(std::map<int, Rule>& cache, std::mutex& mutex, int n, Factory make)
{
  if (n < 1)
    throw std::invalid_argument("quadrature: number of points must be positive");
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, make(n)).first;
  return it->second;
}

} // namespace

const LineRule& gauss_line(int n)
{
  static std::map<int, LineRule> cache;
  static std::mutex mutex;
  return cached(cache, mutex, n, make_gauss_line);
}

const TriangleRule& gauss_triangle(int n)
{
  static std::map<int, TriangleRule> cache;
  static std::mutex mutex;
  return cached(cache, mutex, n, make_gauss_triangle);
}

const TriangleRule& triangle_rule_for_degree(int degree)
{
  return gauss_triangle(std::max(1, (degree + 1) / 2 + 1));
}

} // namespace hdgmg
