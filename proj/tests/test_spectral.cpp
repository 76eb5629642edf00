#include <doctest.h>

#include <hdgmg/spectral.hpp>

#include <random>

using namespace hdgmg;

namespace {

Eigen::MatrixXd random_spd(int n, unsigned seed, double shift)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = normal(rng);
  return g * g.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

SparseMatrix to_sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

} // namespace

TEST_CASE("trivial pencils")
{
  const Eigen::MatrixXd d = random_spd(6, 1, 1.0);
  CHECK(sup_ratio(d, d) == doctest::Approx(1.0));
  CHECK(sup_ratio(Eigen::MatrixXd(2.5 * d), d) == doctest::Approx(2.5));
  const Eigen::MatrixXd diag = Eigen::Vector3d(1.0, 3.0, 2.0).asDiagonal();
  CHECK(sup_ratio(diag, Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(3.0));
  // N = diag(1, 3, 2), D = diag(1, 6, 1): ratios 1, 0.5, 2
  const Eigen::MatrixXd dd = Eigen::Vector3d(1.0, 6.0, 1.0).asDiagonal();
  CHECK(sup_ratio(diag, dd) == doctest::Approx(2.0));
}

TEST_CASE("indefinite denominators are rejected")
{
  const Eigen::MatrixXd d = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  CHECK_THROWS_AS(sup_ratio(Eigen::MatrixXd::Identity(2, 2), d), std::invalid_argument);
  CHECK_THROWS_AS(sup_ratio_lanczos([](const Eigen::VectorXd& x) { return x; }, to_sparse(d)), std::invalid_argument);
}

TEST_CASE("supremum on the range of a semidefinite denominator")
{
  // D = diag(2, 0, 1), N vanishes on the kernel direction e2
  const Eigen::MatrixXd d = Eigen::Vector3d(2.0, 0.0, 1.0).asDiagonal();
  const Eigen::MatrixXd n = Eigen::Vector3d(1.0, 0.0, 4.0).asDiagonal();
  CHECK(sup_ratio_on_range(n, d) == doctest::Approx(4.0));
}

TEST_CASE("Lanczos agrees with the dense eigensolver")
{
  for (int size : {30, 200})
  {
    const Eigen::MatrixXd n = random_spd(size, 3, 0.0);
    const Eigen::MatrixXd d = random_spd(size, 4, 5.0);
    const double dense = sup_ratio(n, d);
    SpectralOptions options;
    options.tol = 1e-12;
    options.max_iterations = size;
    const SparseMatrix dn = to_sparse(n);
    const double lanczos = sup_ratio_lanczos([&](const Eigen::VectorXd& x) { return Eigen::VectorXd(dn * x); },
                                             to_sparse(d), options);
    CHECK(lanczos == doctest::Approx(dense).epsilon(1e-8));
    options.dense_limit = 0;
    CHECK(sup_ratio(dn, to_sparse(d), options) == doctest::Approx(dense).epsilon(1e-8));
  }
}

TEST_CASE("Lanczos handles indefinite numerators")
{
  const Eigen::MatrixXd n = Eigen::Vector4d(-5.0, 1.0, 0.5, 2.0).asDiagonal();
  const SparseMatrix d = to_sparse(Eigen::MatrixXd::Identity(4, 4));
  SpectralOptions options;
  options.dense_limit = 0;
  CHECK(sup_ratio(to_sparse(n), d, options) == doctest::Approx(2.0));
}
