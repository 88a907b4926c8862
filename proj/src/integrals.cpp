#include "gsfde/integrals.hpp"

#include "gsfde/errors.hpp"
#include "gsfde/summation.hpp"

namespace gsfde {

namespace {

void check_index(const GridProcess& p, std::size_t up_to) {
  if (up_to > p.grid.n_steps()) throw UsageError("integral upper index out of range");
}

void check_integrator(const GridProcess& p, std::span<const double> integrator) {
  if (integrator.size() != p.values.size()) {
    throw UsageError("integrand and integrator lengths differ");
  }
}

template <class Increment>
GridProcess running(const GridProcess& p, Increment increment) {
  std::vector<double> out(p.values.size(), 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    acc.add(p.values[i] * increment(i));
    out[i + 1] = acc.value();
  }
  return GridProcess(p.grid, std::move(out));
}

}  // namespace

GridProcess::GridProcess(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n_nodes()) {
    throw UsageError("grid process length must be n_steps + 1");
  }
}

GridProcess GridProcess::constant(const TimeGrid& grid, double c) {
  return GridProcess(grid, std::vector<double>(grid.n_nodes(), c));
}

GridProcess GridProcess::time(const TimeGrid& grid) {
  std::vector<double> t(grid.n_nodes());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = grid.time(i);
  return GridProcess(grid, std::move(t));
}

double lebesgue_integral(const GridProcess& eta, std::size_t up_to) {
  check_index(eta, up_to);
  CompensatedSum acc;
  for (std::size_t i = 0; i < up_to; ++i) acc.add(eta.values[i]);
  return acc.value() * eta.grid.horizon() / static_cast<double>(eta.grid.n_steps());
}

double ito_integral(const GridProcess& lambda, std::span<const double> B, std::size_t up_to) {
  check_integrator(lambda, B);
  check_index(lambda, up_to);
  CompensatedSum acc;
  for (std::size_t i = 0; i < up_to; ++i) acc.add(lambda.values[i] * (B[i + 1] - B[i]));
  return acc.value();
}

double qv_integral(const GridProcess& eta, std::span<const double> qv, std::size_t up_to) {
  check_integrator(eta, qv);
  check_index(eta, up_to);
  CompensatedSum acc;
  for (std::size_t i = 0; i < up_to; ++i) acc.add(eta.values[i] * (qv[i + 1] - qv[i]));
  return acc.value();
}

double jump_integral(std::span<const double> k_values, std::span<const JumpEvent> jumps,
                     double t) {
  if (k_values.size() != jumps.size()) throw UsageError("one K value per jump event expected");
  CompensatedSum acc;
  for (std::size_t j = 0; j < jumps.size() && jumps[j].time <= t; ++j) acc.add(k_values[j]);
  return acc.value();
}

GridProcess running_lebesgue(const GridProcess& eta) {
  std::vector<double> out(eta.values.size(), 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    acc.add(eta.values[i]);
    out[i + 1] = acc.value() * eta.grid.horizon() / static_cast<double>(eta.grid.n_steps());
  }
  return GridProcess(eta.grid, std::move(out));
}

GridProcess running_ito(const GridProcess& lambda, std::span<const double> B) {
  check_integrator(lambda, B);
  return running(lambda, [&](std::size_t i) { return B[i + 1] - B[i]; });
}

GridProcess running_qv(const GridProcess& eta, std::span<const double> qv) {
  check_integrator(eta, qv);
  return running(eta, [&](std::size_t i) { return qv[i + 1] - qv[i]; });
}

GridProcess running_jump(std::span<const double> k_values, const DrivingPath& path) {
  if (k_values.size() != path.jumps.size()) {
    throw UsageError("one K value per jump event expected");
  }
  std::vector<double> out(path.grid.n_nodes(), 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < path.grid.n_steps(); ++i) {
    for (std::size_t j = path.offsets[i]; j < path.offsets[i + 1]; ++j) acc.add(k_values[j]);
    out[i + 1] = acc.value();
  }
  return GridProcess(path.grid, std::move(out));
}

}  // namespace gsfde
