#pragma once

#include "hdgmg/hdg_system.hpp"

#include <iosfwd>
#include <string>

namespace hdgmg {

/// Legacy ASCII VTK unstructured grid of the discontinuous bulk fields: every
/// cell gets its own three points carrying u and q (q with zero z component).
void write_vtk(std::ostream& os, const Discretization& disc, const BulkField& field, const std::string& title);

/// One line per skeleton DoF: "edge,node,t,x,y,value" (boundary edges omitted).
void write_trace_csv(std::ostream& os, const SkeletonSpace& space, const SkeletonVector& lambda);

} // namespace hdgmg
