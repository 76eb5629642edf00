#pragma once

#include "hdgmg/hdg_system.hpp"
#include "hdgmg/skeleton.hpp"

#include <iosfwd>
#include <string>

namespace hdgmg {

enum class InjectionKind
{
  I0, ///< trace of the averaged continuous coarse reconstruction (wide stencil)
  I1, ///< identity on child edges, linear interpolation on new edges
  I2, ///< identity on child edges, coarse bulk reconstruction on new edges
  I3, ///< I1 at new-edge endpoints, I2 at their interior nodes
  Broken ///< identity on child edges, zero on new edges (negative control only)
};

InjectionKind parse_injection(const std::string& s);
std::string injection_name(InjectionKind k);
inline bool needs_local_solvers(InjectionKind k)
{
  return k == InjectionKind::I0 || k == InjectionKind::I2 || k == InjectionKind::I3;
}

/// Injection M_{l-1} -> M_l; rows are fine DoFs, columns coarse DoFs.
struct TransferMatrix
{
  InjectionKind kind = InjectionKind::I1;
  SparseMatrix matrix;

  SkeletonVector inject(const SkeletonVector& coarse) const { return matrix * coarse; }
};

/// `coarse_disc` supplies the coarse local solvers U_{l-1}; it is required for
/// I0, I2 and I3 (std::invalid_argument otherwise) and must discretize `coarse`.
/// The fine space must live on the red refinement of the coarse mesh.
TransferMatrix build_injection(InjectionKind kind, const SkeletonSpace& coarse, const SkeletonSpace& fine,
                               const Discretization* coarse_disc);

enum class RestrictionMode
{
  Euclidean, ///< I^T r
  Scaled     ///< M_{l-1}^{-1} I^T M_l r
};

/// Euclidean-mode restriction of a fine residual.
SkeletonVector restrict_residual(const TransferMatrix& transfer, const SkeletonVector& residual);

/// Scaled-mode restriction (adjoint of the injection in the scaled skeleton inner products).
SkeletonVector restrict_residual_scaled(const TransferMatrix& transfer, const SkeletonVector& residual,
                                        const SparseMatrix& coarse_mass, const SparseMatrix& fine_mass);

/// Coordinate dump "row col value", one nonzero per line, row-major order.
void write_matrix(std::ostream& os, const SparseMatrix& m);

} // namespace hdgmg
