/**
 * @file scaling.hpp
 * @brief Strong-scaling comparison of runs against a baseline run.
 *
 * Counter-based children of computation scalability:
 *
 *   instruction = I_base / I_run
 *   ipc         = IPC_run / IPC_base        IPC = instructions / cycles
 *   frequency   = f_run / f_base            f = cycles / useful time
 *
 * Their product telescopes to useful_time_base / useful_time_run.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpceff/classification.hpp"
#include "hpceff/error.hpp"
#include "hpceff/trace.hpp"

namespace hpceff {

/// Totals over useful computation of all threads of a run.
struct UsefulCounters {
  double instructions = 0.0;
  double cycles = 0.0;
  double useful_time_s = 0.0;
};

struct ScalingPoint {
  std::int64_t resource_count = 1;
  double elapsed_s = 0.0;
  double throughput = 0.0;
  std::optional<UsefulCounters> counters;
  std::optional<double> parallel_eff;
};

struct Scalability {
  double instruction = 1.0;
  double ipc = 1.0;
  double frequency = 1.0;
  double computation = 1.0;
};

struct ScalingRow {
  std::int64_t resource_count = 1;
  double elapsed_s = 0.0;
  double speedup = 1.0;
  double ideal_speedup = 1.0;
  double throughput = 0.0;
  double ideal_throughput = 0.0;
  std::optional<Scalability> scalability;
  std::optional<double> parallel_eff;
  std::optional<double> global_eff;
};

struct ScalingReport {
  std::string throughput_unit;
  std::size_t baseline_row = 0;
  std::vector<ScalingRow> rows;  // ordered by resource_count
};

inline Scalability scalability(const ScalingPoint& baseline, const ScalingPoint& run) {
  if (!baseline.counters || !run.counters)
    throw Error(ErrorKind::MissingCounters, "scalability needs useful-computation counters on both runs");
  const auto& b = *baseline.counters;
  const auto& r = *run.counters;
  if (!(b.instructions > 0 && b.cycles > 0 && b.useful_time_s > 0))
    throw Error(ErrorKind::ZeroDenominator, "baseline counters must be positive");
  if (!(r.instructions > 0 && r.cycles > 0 && r.useful_time_s > 0))
    throw Error(ErrorKind::ZeroDenominator, "run counters must be positive");

  Scalability s;
  s.instruction = b.instructions / r.instructions;
  s.ipc = (r.instructions / r.cycles) / (b.instructions / b.cycles);
  s.frequency = (r.cycles / r.useful_time_s) / (b.cycles / b.useful_time_s);
  s.computation = s.instruction * s.ipc * s.frequency;
  return s;
}

/// Root of the metric tree; may exceed 1 when computation scales superlinearly.
inline double global_efficiency(double parallel_eff, double computation_scalability) {
  return parallel_eff * computation_scalability;
}

/// Speedup and ideal (linear) speedup of every point against the baseline.
/// Throws DuplicateResourceCount.
inline ScalingReport speedup_and_ideal(std::span<const ScalingPoint> series, std::size_t baseline_index,
                                       std::string throughput_unit = {}) {
  if (series.empty()) throw Error(ErrorKind::EmptyInput, "scaling series is empty");
  if (baseline_index >= series.size()) throw Error(ErrorKind::InvalidArgument, "baseline index out of range");
  for (const auto& p : series) {
    if (p.resource_count < 1) throw Error(ErrorKind::InvalidArgument, "resource count must be positive");
    if (!(p.elapsed_s > 0)) throw Error(ErrorKind::InvalidArgument, "elapsed time must be positive");
  }

  std::vector<std::size_t> order(series.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return series[a].resource_count < series[b].resource_count; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (series[order[k]].resource_count == series[order[k - 1]].resource_count)
      throw Error(ErrorKind::DuplicateResourceCount,
                  "resource count " + std::to_string(series[order[k]].resource_count) + " appears twice");

  const auto& base = series[baseline_index];
  const bool counters_everywhere =
      std::all_of(series.begin(), series.end(), [](const ScalingPoint& p) { return p.counters.has_value(); });

  ScalingReport report;
  report.throughput_unit = std::move(throughput_unit);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& p = series[order[k]];
    if (order[k] == baseline_index) report.baseline_row = k;
    ScalingRow row;
    row.resource_count = p.resource_count;
    row.elapsed_s = p.elapsed_s;
    row.speedup = base.elapsed_s / p.elapsed_s;
    row.ideal_speedup = static_cast<double>(p.resource_count) / static_cast<double>(base.resource_count);
    row.throughput = p.throughput;
    row.ideal_throughput = base.throughput * row.ideal_speedup;
    if (order[k] == baseline_index) {
      row.speedup = 1.0;
      row.ideal_speedup = 1.0;
    }
    if (counters_everywhere) {
      row.scalability = order[k] == baseline_index ? Scalability{} : scalability(base, p);
    }
    row.parallel_eff = p.parallel_eff;
    if (row.parallel_eff && row.scalability)
      row.global_eff = global_efficiency(*row.parallel_eff, row.scalability->computation);
    report.rows.push_back(row);
  }
  return report;
}

/// Minimum per-thread performance divided by the mean.
inline double performance_balance(std::span<const double> per_thread_perf) {
  if (per_thread_perf.empty()) throw Error(ErrorKind::EmptyInput, "performance list is empty");
  double sum = 0.0;
  double lowest = per_thread_perf.front();
  for (double v : per_thread_perf) {
    if (!(v > 0.0)) throw Error(ErrorKind::NonPositivePerf, "performance values must be positive");
    sum += v;
    lowest = std::min(lowest, v);
  }
  const double mean = sum / static_cast<double>(per_thread_perf.size());
  if (std::all_of(per_thread_perf.begin(), per_thread_perf.end(), [&](double v) { return v == lowest; }))
    return 1.0;
  return std::min(1.0, lowest / mean);
}

/// Builds a scaling point from a trace: elapsed is the global average thread
/// time, resources are nodes, counters are summed when every thread has them.
inline ScalingPoint scaling_point_from_trace(const Trace& trace, double work = 0.0,
                                             std::optional<double> parallel_eff = std::nullopt) {
  const auto agg = classify(trace);
  ScalingPoint p;
  p.resource_count = trace.meta.node_count;
  p.elapsed_s = agg.global.t_total * 1e-6;
  p.throughput = p.elapsed_s > 0 ? work / p.elapsed_s : 0.0;
  p.parallel_eff = parallel_eff;
  if (trace.has_counters()) {
    std::int64_t cycles = 0, instructions = 0, useful = 0;
    for (const auto& proc : trace.processes)
      for (const auto& t : proc.threads) {
        cycles += t.counters->cycles;
        instructions += t.counters->instructions;
        useful += t.useful_us;
      }
    p.counters = UsefulCounters{static_cast<double>(instructions), static_cast<double>(cycles),
                                static_cast<double>(useful) * 1e-6};
  }
  return p;
}

}  // namespace hpceff
