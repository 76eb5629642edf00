#include "hdgmg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace hdgmg {

double sup_ratio(const Eigen::MatrixXd& n, const Eigen::MatrixXd& d)
{
  if (n.rows() != d.rows() || n.cols() != d.cols() || n.rows() != n.cols())
    throw std::invalid_argument("sup_ratio: forms must be square and of equal size");
  const Eigen::LLT<Eigen::MatrixXd> llt(d);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sup_ratio: denominator form is not positive definite");
  // L^{-1} N L^{-T} has the generalized eigenvalues
  const Eigen::MatrixXd linv_n = llt.matrixL().solve(n);
  Eigen::MatrixXd c = llt.matrixL().solve(linv_n.transpose());
  c = 0.5 * (c + c.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double sup_ratio_on_range(const Eigen::MatrixXd& n, const Eigen::MatrixXd& d, double rel_tol)
{
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (d + d.transpose()));
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double cutoff = rel_tol * std::max(values.maxCoeff(), 0.0);
  std::vector<int> keep;
  for (int i = 0; i < values.size(); ++i)
    if (values[i] > cutoff)
      keep.push_back(i);
  if (keep.empty())
    throw std::invalid_argument("sup_ratio_on_range: denominator form vanishes");
  // basis of the range scaled so that D becomes the identity there
  Eigen::MatrixXd basis(d.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    basis.col(k) = eig.eigenvectors().col(keep[k]) / std::sqrt(values[keep[k]]);
  Eigen::MatrixXd c = basis.transpose() * n * basis;
  c = 0.5 * (c + c.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reduced(c, Eigen::EigenvaluesOnly);
  return reduced.eigenvalues().maxCoeff();
}

double sup_ratio_lanczos(const LinearMap& n, const SparseMatrix& d, const SpectralOptions& options)
{
  using ColMajor = Eigen::SparseMatrix<double>;
  const ColMajor dc = d;
  const Eigen::SimplicialLLT<ColMajor> llt(dc);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sup_ratio: denominator form is not positive definite");

  const Eigen::Index size = d.rows();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v[i] = normal(rng);

  // Lanczos for K = D^{-1} N, self-adjoint in <x, y>_D
  std::vector<Eigen::VectorXd> basis;
  std::vector<Eigen::VectorXd> d_basis; // D times each basis vector
  std::vector<double> alpha, beta;
  v /= std::sqrt(v.dot(d * v));
  double previous = -std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::min<Eigen::Index>(options.max_iterations, size));
  for (int k = 0; k < steps; ++k)
  {
    basis.push_back(v);
    d_basis.push_back(d * v);
    const Eigen::VectorXd nv = n(v);
    Eigen::VectorXd w = llt.solve(nv);
    alpha.push_back(v.dot(nv));
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < basis.size(); ++j)
        w -= d_basis[j].dot(w) * basis[j];
    const double b_next = std::sqrt(std::max(w.dot(d * w), 0.0));

    const int m = static_cast<int>(alpha.size());
    if (m % 5 == 0 || k + 1 == steps || b_next <= 1e-14 * std::abs(alpha.back()))
    {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                  : Eigen::VectorXd(0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
      eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = eig.eigenvalues()[m - 1];
      const double residual = b_next * std::abs(eig.eigenvectors()(m - 1, m - 1));
      const double scale = std::max(std::abs(theta), 1e-300);
      if (b_next <= 1e-14 * scale || residual <= options.tol * scale)
        return theta;
      previous = theta;
    }
    beta.push_back(b_next);
    v = w / b_next;
  }
  return previous;
}

double sup_ratio(const SparseMatrix& n, const SparseMatrix& d, const SpectralOptions& options)
{
  if (d.rows() <= options.dense_limit)
    return sup_ratio(Eigen::MatrixXd(n), Eigen::MatrixXd(d));
  return sup_ratio_lanczos([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return n * x; }, d, options);
}

} // namespace hdgmg
