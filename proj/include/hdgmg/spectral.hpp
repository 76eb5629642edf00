#pragma once

#include "hdgmg/skeleton.hpp"

#include <cstdint>
#include <functional>

namespace hdgmg {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct SpectralOptions
{
  double tol = 1e-8;         ///< relative change of the largest Ritz value
  int max_iterations = 400;  ///< Lanczos steps
  int dense_limit = 600;     ///< sizes up to this use a dense eigensolver
  std::uint64_t seed = 1;
};

/// sup_x (x^T N x) / (x^T D x) for symmetric N and SPD D (dense generalized eigensolve).
/// Throws std::invalid_argument if D is not positive definite.
double sup_ratio(const Eigen::MatrixXd& n, const Eigen::MatrixXd& d);

/// Same supremum over the complement of ker D for semidefinite D. Eigenvalues of D
/// below `rel_tol` times the largest one count as kernel; N must vanish on ker D.
double sup_ratio_on_range(const Eigen::MatrixXd& n, const Eigen::MatrixXd& d, double rel_tol = 1e-10);

/// Largest generalized eigenvalue of (N, D) by Lanczos in the D inner product with
/// full reorthogonalization; D is factorized by sparse Cholesky.
double sup_ratio_lanczos(const LinearMap& n, const SparseMatrix& d, const SpectralOptions& options = {});

/// Dense for small sizes, Lanczos otherwise.
double sup_ratio(const SparseMatrix& n, const SparseMatrix& d, const SpectralOptions& options = {});

} // namespace hdgmg
