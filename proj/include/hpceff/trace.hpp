/**
 * @file trace.hpp
 * @brief In-memory representation of one hybrid MPI+OpenMP run.
 *
 * Times are integer microseconds. The total time of a thread is never stored;
 * it is the sum of its useful, MPI and idle times.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hpceff/error.hpp"

namespace hpceff {

using Micros = std::int64_t;

struct RunMeta {
  std::string app_name;
  std::int64_t node_count = 1;
  std::int64_t process_count = 1;
  std::int64_t threads_per_process = 1;
  std::int64_t region_count = 0;
  std::optional<double> nominal_frequency_hz;

  bool operator==(const RunMeta&) const = default;
};

struct RegionIdle {
  std::int64_t region_id = 0;
  Micros idle_us = 0;

  bool operator==(const RegionIdle&) const = default;
};

/// Hardware counters gathered over useful computation only.
struct CounterSample {
  std::int64_t cycles = 0;
  std::int64_t instructions = 0;

  bool operator==(const CounterSample&) const = default;
};

struct ThreadTimeline {
  std::int64_t thread_id = 0;
  Micros useful_us = 0;
  Micros mpi_us = 0;
  Micros idle_us = 0;
  std::vector<RegionIdle> region_idle;
  std::optional<CounterSample> counters;

  Micros total_us() const { return useful_us + mpi_us + idle_us; }

  Micros region_idle_sum() const {
    Micros sum = 0;
    for (const auto& r : region_idle) sum += r.idle_us;
    return sum;
  }

  bool operator==(const ThreadTimeline&) const = default;
};

struct ProcessTimeline {
  std::int64_t rank = 0;
  std::vector<ThreadTimeline> threads;

  bool operator==(const ProcessTimeline&) const = default;
};

/// One EAR-style power sample. PCK and DRAM aggregate both sockets.
struct PowerSample {
  double t_s = 0.0;
  std::int64_t node_id = 0;
  double dc_w = 0.0;
  double pck_w = 0.0;
  double dram_w = 0.0;

  bool operator==(const PowerSample&) const = default;
};

struct Trace {
  RunMeta meta;
  std::vector<ProcessTimeline> processes;
  std::optional<std::vector<PowerSample>> power;

  bool operator==(const Trace&) const = default;

  bool has_counters() const {
    for (const auto& p : processes)
      for (const auto& t : p.threads)
        if (!t.counters) return false;
    return !processes.empty();
  }
};

namespace detail {

inline std::string where(std::size_t proc, std::size_t thread) {
  return "process " + std::to_string(proc) + " thread " + std::to_string(thread);
}

}  // namespace detail

/// Checks every structural invariant of a trace and returns it unchanged.
/// Throws Error{Shape | NegativeTime | RegionMismatch} naming the offender.
inline const Trace& validate_trace(const Trace& trace) {
  const auto& m = trace.meta;
  if (m.node_count < 1) throw Error(ErrorKind::Shape, "node_count must be >= 1");
  if (m.process_count < 1) throw Error(ErrorKind::Shape, "process_count must be >= 1");
  if (m.threads_per_process < 1) throw Error(ErrorKind::Shape, "threads_per_process must be >= 1");
  if (m.region_count < 0) throw Error(ErrorKind::Shape, "region_count must be >= 0");
  if (m.nominal_frequency_hz && !(*m.nominal_frequency_hz > 0.0))
    throw Error(ErrorKind::Shape, "nominal_frequency_hz must be positive");

  if (trace.processes.size() != static_cast<std::size_t>(m.process_count))
    throw Error(ErrorKind::Shape, "declared " + std::to_string(m.process_count) + " processes but found " +
                                      std::to_string(trace.processes.size()));

  const auto regions = static_cast<std::size_t>(m.region_count);
  std::vector<bool> seen(regions);
  for (std::size_t i = 0; i < trace.processes.size(); ++i) {
    const auto& proc = trace.processes[i];
    if (proc.threads.size() != static_cast<std::size_t>(m.threads_per_process))
      throw Error(ErrorKind::Shape, "process " + std::to_string(i) + " declares " +
                                        std::to_string(m.threads_per_process) + " threads but has " +
                                        std::to_string(proc.threads.size()) + " timelines");
    for (std::size_t j = 0; j < proc.threads.size(); ++j) {
      const auto& t = proc.threads[j];
      if (t.useful_us < 0 || t.mpi_us < 0 || t.idle_us < 0)
        throw Error(ErrorKind::NegativeTime, detail::where(i, j) + " has a negative time category");
      if (t.region_idle.size() != regions)
        throw Error(ErrorKind::Shape, detail::where(i, j) + " has " + std::to_string(t.region_idle.size()) +
                                          " region entries, expected " + std::to_string(regions));
      std::fill(seen.begin(), seen.end(), false);
      for (const auto& r : t.region_idle) {
        if (r.idle_us < 0)
          throw Error(ErrorKind::NegativeTime,
                      detail::where(i, j) + " region " + std::to_string(r.region_id) + " has negative idle time");
        if (r.region_id < 0 || r.region_id >= m.region_count || seen[static_cast<std::size_t>(r.region_id)])
          throw Error(ErrorKind::Shape, detail::where(i, j) + " region ids do not form [0, " +
                                            std::to_string(regions) + ")");
        seen[static_cast<std::size_t>(r.region_id)] = true;
      }
      if (t.region_idle_sum() > t.idle_us)
        throw Error(ErrorKind::RegionMismatch, detail::where(i, j) + " region idle sum " +
                                                   std::to_string(t.region_idle_sum()) + " us exceeds idle time " +
                                                   std::to_string(t.idle_us) + " us");
      if (t.counters) {
        if (t.counters->cycles < 0 || t.counters->instructions < 0)
          throw Error(ErrorKind::Shape, detail::where(i, j) + " has negative counters");
        if (t.counters->cycles > 0 && t.useful_us <= 0)
          throw Error(ErrorKind::Shape, detail::where(i, j) + " reports cycles without useful time");
      }
    }
  }

  if (trace.power) {
    for (std::size_t k = 0; k < trace.power->size(); ++k) {
      const auto& s = (*trace.power)[k];
      if (s.t_s < 0 || s.node_id < 0 || s.dc_w < 0 || s.pck_w < 0 || s.dram_w < 0)
        throw Error(ErrorKind::Shape, "power sample " + std::to_string(k) + " has a negative field");
    }
  }
  return trace;
}

}  // namespace hpceff
