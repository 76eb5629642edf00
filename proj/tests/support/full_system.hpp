#pragma once

#include <hdgmg/local_solver.hpp>
#include <hdgmg/mesh.hpp>

#include <Eigen/Dense>

#include <functional>

namespace oracle {

/// Solves the unhybridized HDG system for (q, u, lambda) on all cells at once with a
/// dense LU and returns the trace coefficients in skeleton numbering (interior edges
/// in mesh order, p+1 equidistant nodes per edge). Bulk bases are raw local monomials,
/// independent of the library's local solver.
Eigen::VectorXd full_system_trace(const hdgmg::MeshLevel& mesh, hdgmg::MethodFamily family, int p, double tau,
                                  const std::function<double(const Eigen::Vector2d&)>& f);

/// Lagrange basis on [0,1] with nodes i/p evaluated by the product formula.
Eigen::VectorXd lagrange_1d(int p, double t);

} // namespace oracle
