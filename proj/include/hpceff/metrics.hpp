/**
 * @file metrics.hpp
 * @brief POP base metrics and the hybrid MPI+OpenMP efficiency tree.
 *
 * All efficiencies are ratios of average thread times taken from
 * CategoryAggregates; T is the global average total thread time.
 */
#pragma once

#include <algorithm>
#include <optional>
#include <string>

#include "hpceff/classification.hpp"
#include "hpceff/error.hpp"

namespace hpceff {

struct MpiMetrics {
  double eff = 1.0;
  double load_balance = 1.0;
  double comm_eff = 1.0;

  bool operator==(const MpiMetrics&) const = default;
};

struct OmpMetrics {
  double eff = 1.0;
  double serial = 1.0;
  double load_balance = 1.0;
  double scheduling = 1.0;

  bool operator==(const OmpMetrics&) const = default;
};

/// Pure-MPI view (one thread per process).
struct BaseMetrics {
  double parallel_eff = 1.0;
  double load_balance = 1.0;
  double comm_eff = 1.0;

  bool operator==(const BaseMetrics&) const = default;
};

/// The hybrid parallel efficiency is NOT the product of its MPI and OpenMP
/// children; every other parent is the product of its children.
struct MetricTree {
  double hybrid_parallel_eff = 1.0;
  MpiMetrics mpi;
  OmpMetrics omp;
  std::optional<BaseMetrics> base;

  bool operator==(const MetricTree&) const = default;
};

inline constexpr double kMetricRangeTolerance = 1e-9;

namespace detail {

inline double checked_ratio(double num, double den, const char* name) {
  if (!(den > 0.0))
    throw Error(ErrorKind::DegenerateDenominator, std::string(name) + " has a non-positive denominator");
  const double raw = num / den;
  if (!(raw >= -kMetricRangeTolerance && raw <= 1.0 + kMetricRangeTolerance))
    throw Error(ErrorKind::MetricOutOfRange, std::string(name) + " = " + std::to_string(raw) + " is outside [0, 1]");
  return std::clamp(raw, 0.0, 1.0);
}

inline double max_non_mpi_time(const CategoryAggregates& agg) {
  double best = 0.0;
  for (const auto& p : agg.per_process) best = std::max(best, p.t_total - p.t_mpi);
  return best;
}

}  // namespace detail

/// Extended hybrid model. MPI time T^M is the communication category.
/// Throws DegenerateDenominator or MetricOutOfRange.
inline MetricTree hybrid_metrics(const CategoryAggregates& agg) {
  const auto& g = agg.global;
  const double t = g.t_total;
  if (!(t > 0.0)) throw Error(ErrorKind::DegenerateDenominator, "total time is zero");

  const double after_serial = t - g.t_idle_serial;
  const double after_lb = after_serial - g.t_idle_lb;
  const double after_sched = after_lb - g.t_idle_sched;

  MetricTree tree;
  tree.omp.serial = detail::checked_ratio(after_serial, t, "omp.serial");
  tree.omp.load_balance = detail::checked_ratio(after_lb, after_serial, "omp.load_balance");
  tree.omp.scheduling = detail::checked_ratio(after_sched, after_lb, "omp.scheduling");
  tree.omp.eff = detail::checked_ratio(t - g.t_idle, t, "omp.eff");

  const double max_non_mpi = detail::max_non_mpi_time(agg);
  tree.mpi.eff = detail::checked_ratio(t - g.t_mpi, t, "mpi.eff");
  tree.mpi.load_balance = detail::checked_ratio(t - g.t_mpi, max_non_mpi, "mpi.load_balance");
  tree.mpi.comm_eff = detail::checked_ratio(max_non_mpi, t, "mpi.comm_eff");

  tree.hybrid_parallel_eff = detail::checked_ratio(g.t_useful, t, "hybrid_parallel_eff");
  return tree;
}

/// POP base metrics from useful time. Requires one thread per process.
inline BaseMetrics base_metrics(const CategoryAggregates& agg) {
  if (agg.threads_per_process != 1)
    throw Error(ErrorKind::NotPureMpi, "base metrics need one thread per process, got " +
                                           std::to_string(agg.threads_per_process));
  const double t = agg.global.t_total;
  if (!(t > 0.0)) throw Error(ErrorKind::DegenerateDenominator, "total time is zero");
  double max_useful = 0.0;
  for (const auto& p : agg.per_process) max_useful = std::max(max_useful, p.t_useful);

  BaseMetrics base;
  base.parallel_eff = detail::checked_ratio(agg.global.t_useful, t, "base.parallel_eff");
  base.load_balance = detail::checked_ratio(agg.global.t_useful, max_useful, "base.load_balance");
  base.comm_eff = detail::checked_ratio(max_useful, t, "base.comm_eff");
  return base;
}

/// Hybrid tree plus the base view when the run is pure MPI.
inline MetricTree analyze(const CategoryAggregates& agg) {
  MetricTree tree = hybrid_metrics(agg);
  if (agg.threads_per_process == 1) tree.base = base_metrics(agg);
  return tree;
}

inline MetricTree analyze(const Trace& trace) { return analyze(classify(trace)); }

}  // namespace hpceff
