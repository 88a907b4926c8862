#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gsfde/timegrid.hpp"

namespace gsfde {

/// Simple process on a grid: values[i] is the integrand on [t_i, t_{i+1}).
struct GridProcess {
  TimeGrid grid;
  std::vector<double> values;

  GridProcess(TimeGrid g, std::vector<double> v);

  static GridProcess constant(const TimeGrid& grid, double c);
  static GridProcess time(const TimeGrid& grid);
};

/// sum_{i<up_to} eta[i] dt
double lebesgue_integral(const GridProcess& eta, std::size_t up_to);

/// sum_{i<up_to} lambda[i] (B[i+1] - B[i])
double ito_integral(const GridProcess& lambda, std::span<const double> B, std::size_t up_to);

/// sum_{i<up_to} eta[i] (qv[i+1] - qv[i])
double qv_integral(const GridProcess& eta, std::span<const double> qv, std::size_t up_to);

/// Sum of k_values[j] over jump events with time <= t. `k_values` holds the
/// realized field K(s_j, ., z_j), one value per event.
double jump_integral(std::span<const double> k_values, std::span<const JumpEvent> jumps, double t);

// Running integrals evaluated at every node.
GridProcess running_lebesgue(const GridProcess& eta);
GridProcess running_ito(const GridProcess& lambda, std::span<const double> B);
GridProcess running_qv(const GridProcess& eta, std::span<const double> qv);
GridProcess running_jump(std::span<const double> k_values, const DrivingPath& path);

}  // namespace gsfde
