/**
 * @file classification.hpp
 * @brief Reduction of a trace to average thread times per category.
 *
 * For process i with M threads and P parallel regions:
 *
 *   T^k_i         = sum_j T^k_{i,j} / M                 k in {useful, mpi, idle}
 *   T^serial_i    = sum_j (T^I_{i,j} - sum_p T^I_{i,j,p}) / M
 *   T^lb_i        = sum_p (avg_j T^I_{i,j,p} - min_j T^I_{i,j,p})
 *   T^sched_i     = sum_p min_j T^I_{i,j,p}
 *
 * and every global value is the mean over processes. The serial term is
 * averaged over threads (M), so serial + lb + sched always equals idle.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "hpceff/trace.hpp"

namespace hpceff {

/// Average thread times (us) of one process, or of the whole run.
struct CategoryTimes {
  double t_useful = 0.0;
  double t_mpi = 0.0;
  double t_idle = 0.0;
  double t_idle_serial = 0.0;
  double t_idle_lb = 0.0;
  double t_idle_sched = 0.0;
  double t_total = 0.0;

  bool operator==(const CategoryTimes&) const = default;
};

struct CategoryAggregates {
  std::vector<CategoryTimes> per_process;
  CategoryTimes global;
  std::int64_t threads_per_process = 1;
};

namespace detail {

// Category sums scaled by M so every average is one integer / one division.
struct ScaledSums {
  std::int64_t useful = 0, mpi = 0, idle = 0, serial = 0, lb = 0, sched = 0;

  ScaledSums& operator+=(const ScaledSums& o) {
    useful += o.useful;
    mpi += o.mpi;
    idle += o.idle;
    serial += o.serial;
    lb += o.lb;
    sched += o.sched;
    return *this;
  }

  CategoryTimes divide(double denom) const {
    CategoryTimes c;
    c.t_useful = static_cast<double>(useful) / denom;
    c.t_mpi = static_cast<double>(mpi) / denom;
    c.t_idle = static_cast<double>(idle) / denom;
    c.t_idle_serial = static_cast<double>(serial) / denom;
    c.t_idle_lb = static_cast<double>(lb) / denom;
    c.t_idle_sched = static_cast<double>(sched) / denom;
    c.t_total = static_cast<double>(useful + mpi + idle) / denom;
    return c;
  }
};

inline ScaledSums scaled_process_sums(const ProcessTimeline& proc, std::size_t regions) {
  const auto threads = static_cast<std::int64_t>(proc.threads.size());
  ScaledSums s;
  std::vector<std::int64_t> region_sum(regions, 0);
  std::vector<std::int64_t> region_min(regions, std::numeric_limits<std::int64_t>::max());
  for (const auto& t : proc.threads) {
    s.useful += t.useful_us;
    s.mpi += t.mpi_us;
    s.idle += t.idle_us;
    s.serial += t.idle_us - t.region_idle_sum();
    for (const auto& r : t.region_idle) {
      const auto p = static_cast<std::size_t>(r.region_id);
      region_sum[p] += r.idle_us;
      region_min[p] = std::min(region_min[p], r.idle_us);
    }
  }
  for (std::size_t p = 0; p < regions; ++p) {
    s.lb += region_sum[p] - threads * region_min[p];
    s.sched += threads * region_min[p];
  }
  return s;
}

}  // namespace detail

/// Per-process and global average thread times. Expects a validated trace.
inline CategoryAggregates classify(const Trace& trace) {
  const auto regions = static_cast<std::size_t>(trace.meta.region_count);
  const auto threads = static_cast<double>(trace.meta.threads_per_process);

  CategoryAggregates agg;
  agg.threads_per_process = trace.meta.threads_per_process;
  agg.per_process.reserve(trace.processes.size());

  detail::ScaledSums total;
  for (const auto& proc : trace.processes) {
    auto sums = detail::scaled_process_sums(proc, regions);
    agg.per_process.push_back(sums.divide(threads));
    total += sums;
  }
  agg.global = total.divide(threads * static_cast<double>(trace.processes.size()));
  return agg;
}

}  // namespace hpceff
