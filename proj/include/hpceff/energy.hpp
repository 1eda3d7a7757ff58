/**
 * @file energy.hpp
 * @brief Energy accounting from node power samples.
 *
 * E [kWh] = W * N * T / 3600 / 1000 with W the average node power in watts,
 * N the node count and T the focus time in seconds. EDP = E * T [kWh*s].
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hpceff/error.hpp"
#include "hpceff/trace.hpp"

namespace hpceff {

/// Idle power of a two-socket node. Per-socket values are half the
/// two-socket measurement.
struct IdlePowerModel {
  double pck_idle_w = 287.39;
  double dram_idle_w = 5.39;
  double node_idle_w = 379.40;

  double pck_idle_per_socket_w() const { return pck_idle_w / 2.0; }
  double dram_idle_per_socket_w() const { return dram_idle_w / 2.0; }
};

/// Inclusive time window in seconds since run start.
struct PowerWindow {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();

  bool contains(double t) const { return t >= t0 && t <= t1; }
};

struct AveragePower {
  std::map<std::int64_t, double> per_node_w;
  double fleet_w = 0.0;
};

struct EnergyReport {
  double avg_node_power_w = 0.0;
  std::int64_t node_count = 0;
  double focus_time_s = 0.0;
  double energy_kwh = 0.0;
  double edp_kwh_s = 0.0;
};

struct IdleSubtraction {
  double watts = 0.0;
  bool negative_clamped = false;
};

namespace detail {

inline double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace detail

/// Mean DC power per node over in-window samples, and the mean over nodes.
/// Summation happens in sorted order so the result ignores sample order.
inline AveragePower average_power(std::span<const PowerSample> samples, const PowerWindow& window = {}) {
  std::map<std::int64_t, std::vector<double>> by_node;
  for (const auto& s : samples)
    if (window.contains(s.t_s)) by_node[s.node_id].push_back(s.dc_w);
  if (by_node.empty()) throw Error(ErrorKind::EmptyWindow, "no power samples inside the window");

  AveragePower out;
  std::vector<double> node_means;
  for (auto& [node, values] : by_node) {
    const double mean = detail::sorted_mean(std::move(values));
    out.per_node_w[node] = mean;
    node_means.push_back(mean);
  }
  out.fleet_w = detail::sorted_mean(std::move(node_means));
  return out;
}

inline EnergyReport energy_and_edp(double avg_node_power_w, std::int64_t nodes, double focus_time_s) {
  if (avg_node_power_w < 0 || nodes < 0 || focus_time_s < 0)
    throw Error(ErrorKind::InvalidArgument, "energy inputs must be non-negative");
  EnergyReport r;
  r.avg_node_power_w = avg_node_power_w;
  r.node_count = nodes;
  r.focus_time_s = focus_time_s;
  r.energy_kwh = avg_node_power_w * static_cast<double>(nodes) * focus_time_s / 3600.0 / 1000.0;
  r.edp_kwh_s = r.energy_kwh * focus_time_s;
  return r;
}

/// GFlop/(s*W).
inline double flops_power_efficiency(double gflops, double power_w) {
  if (!(power_w > 0)) throw Error(ErrorKind::ZeroPower, "power must be positive");
  return gflops / power_w;
}

/// GB/(s*W).
inline double bandwidth_power_efficiency(double gb_per_s, double power_w) {
  if (!(power_w > 0)) throw Error(ErrorKind::ZeroPower, "power must be positive");
  return gb_per_s / power_w;
}

/// Removes the idle package power of the sockets in use. Negative results
/// are floored at zero and flagged.
inline IdleSubtraction subtract_idle(double measured_pck_w, const IdlePowerModel& model = {}, int sockets_used = 1) {
  if (measured_pck_w < 0) throw Error(ErrorKind::InvalidArgument, "measured power must be non-negative");
  if (sockets_used != 1 && sockets_used != 2) throw Error(ErrorKind::InvalidArgument, "sockets_used must be 1 or 2");
  const double net = measured_pck_w - sockets_used * model.pck_idle_per_socket_w();
  if (net < 0) return {0.0, true};
  return {net, false};
}

/// Index of the unique interior minimum of an EDP series: strictly below
/// every other entry and neither the first nor the last point.
inline std::optional<std::size_t> edp_interior_minimum(std::span<const double> edp) {
  if (edp.size() < 3) return std::nullopt;
  const auto it = std::min_element(edp.begin(), edp.end());
  const auto idx = static_cast<std::size_t>(it - edp.begin());
  if (idx == 0 || idx + 1 == edp.size()) return std::nullopt;
  for (std::size_t k = 0; k < edp.size(); ++k)
    if (k != idx && !(edp[k] > *it)) return std::nullopt;
  return idx;
}

}  // namespace hpceff
