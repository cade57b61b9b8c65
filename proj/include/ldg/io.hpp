#pragma once

#include <iosfwd>
#include <string>

#include "ldg/analysis.hpp"

namespace ldg {

inline constexpr const char* kCsvHeader = "h,dofs,err_dg,order_dg,err_l2,order_l2,energy,newton_iters,eps,k";

/// One row per record; order fields are blank on the last row and wherever
/// an order is undefined, error fields are blank for non-converged levels.
void write_csv(std::ostream& os, const ConvergenceTable& t, bool header = true);
void export_csv(const ConvergenceTable& t, const std::string& path);
ConvergenceTable read_csv(std::istream& is);
ConvergenceTable read_csv_file(const std::string& path);

/// Legacy ASCII VTK unstructured grid. Every triangle carries its own copy of
/// its Lagrange nodes so discontinuities survive; degree k > 1 triangles are
/// split into k^2 linear cells. Point data: u, v, s = |Psi|, theta = arg(u + iv)/2.
void write_vtk(std::ostream& os, const DgSpace& s, const Coefficients& z);
void export_vtk(const DgSpace& s, const Coefficients& z, const std::string& path);

}  // namespace ldg
