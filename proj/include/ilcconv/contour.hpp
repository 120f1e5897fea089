#pragma once

#include <string_view>
#include <vector>

#include "ilcconv/plant.hpp"
#include "ilcconv/sweep.hpp"

namespace ilcconv {

/// Numeric field a boundary is traced on. Iterate maps mc_iter to 0.5 (true),
/// 1 (marginal) or 1.5 (false) so the level-1 contour separates the verdicts.
enum class BoundaryField { SupT, SigmaSq, Rho, Iterate };

[[nodiscard]] std::string_view to_string(BoundaryField f) noexcept;
[[nodiscard]] BoundaryField parse_boundary_field(std::string_view token);

using Polyline = std::vector<ABPoint>;

/// Marching squares on a regular (ordered) grid: values[ia * nb + ib].
[[nodiscard]] std::vector<Polyline> iso_contour(const std::vector<double>& a_values,
                                                const std::vector<double>& b_values,
                                                const std::vector<double>& values, double level);

/// Level-1 contours of the chosen field over a complete rectangular sweep.
[[nodiscard]] std::vector<Polyline> extract_boundary(const std::vector<PointReport>& reports, BoundaryField which);

}  // namespace ilcconv
