/**
 * @file synth.hpp
 * @brief Seeded synthetic hybrid traces with closed-form expected metrics.
 *
 * Every thread owns a time budget of `base_useful` microseconds. Inefficiencies
 * are carved out of that budget, so every thread has the same total time:
 *
 *   mpi_i     = round(mpi_fraction * B) + (i == N-1 ? round(mpi_imbalance * B) : 0)
 *   serial    = round(serial_idle_fraction * B)           idle outside regions
 *   region p  = sched_idle                                 thread 0
 *             = sched_idle + round(region_imbalance * B / P)   threads 1..M-1
 *   useful    = B - mpi_i - serial - sum_p region p
 *
 * The expected metric tree is evaluated symbolically from these quantities
 * and never goes through classify() or hybrid_metrics().
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "hpceff/error.hpp"
#include "hpceff/metrics.hpp"
#include "hpceff/trace.hpp"

namespace hpceff {

struct SynthSpec {
  std::string app_name = "synth";
  std::int64_t nodes = 1;
  std::int64_t processes = 1;
  std::int64_t threads_per_process = 1;
  std::int64_t regions = 0;
  Micros base_useful = 1'000'000;
  double mpi_fraction = 0.0;
  double serial_idle_fraction = 0.0;
  double region_imbalance = 0.0;
  Micros sched_idle = 0;
  double mpi_imbalance = 0.0;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  /// Emit DC power samples for every node at this constant power (W).
  std::optional<double> node_power_w;
  double power_period_s = 60.0;
};

struct SynthResult {
  Trace trace;
  std::optional<MetricTree> truth;  // absent when jitter > 0
};

namespace detail {

struct SynthLayout {
  Micros mpi_base = 0;
  Micros mpi_extra = 0;
  Micros serial = 0;
  Micros lb_extra = 0;  // per region, threads other than 0
};

inline void check_unit_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v < 1.0))
    throw Error(ErrorKind::InfeasibleSpec, std::string(name) + " must lie in [0, 1)");
}

inline SynthLayout synth_layout(const SynthSpec& s) {
  if (s.nodes < 1 || s.processes < 1 || s.threads_per_process < 1 || s.regions < 0)
    throw Error(ErrorKind::InfeasibleSpec, "nodes, processes and threads must be >= 1, regions >= 0");
  if (s.base_useful <= 0) throw Error(ErrorKind::InfeasibleSpec, "base_useful must be positive");
  if (s.sched_idle < 0) throw Error(ErrorKind::InfeasibleSpec, "sched_idle must be non-negative");
  check_unit_fraction(s.mpi_fraction, "mpi_fraction");
  check_unit_fraction(s.serial_idle_fraction, "serial_idle_fraction");
  check_unit_fraction(s.region_imbalance, "region_imbalance");
  check_unit_fraction(s.mpi_imbalance, "mpi_imbalance");
  check_unit_fraction(s.jitter, "jitter");
  if (s.node_power_w && !(*s.node_power_w >= 0.0)) throw Error(ErrorKind::InfeasibleSpec, "node power must be >= 0");
  if (s.node_power_w && !(s.power_period_s > 0.0)) throw Error(ErrorKind::InfeasibleSpec, "power period must be > 0");

  const double b = static_cast<double>(s.base_useful);
  SynthLayout l;
  l.mpi_base = std::llround(s.mpi_fraction * b);
  l.mpi_extra = std::llround(s.mpi_imbalance * b);
  l.serial = std::llround(s.serial_idle_fraction * b);
  l.lb_extra = s.regions > 0 ? std::llround(s.region_imbalance * b / static_cast<double>(s.regions)) : 0;

  const Micros worst_mpi = l.mpi_base + l.mpi_extra;  // the last rank
  const Micros worst_region = s.regions * (s.sched_idle + (s.threads_per_process > 1 ? l.lb_extra : 0));
  if (s.base_useful - worst_mpi - l.serial - worst_region < 0)
    throw Error(ErrorKind::InfeasibleSpec, "inefficiency knobs exceed the per-thread time budget");
  return l;
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Micros jittered(Micros value, double jitter, std::mt19937_64& rng) {
  if (jitter == 0.0) return value;
  const double factor = 1.0 + jitter * (2.0 * unit_uniform(rng) - 1.0);
  return std::llround(static_cast<double>(value) * factor);
}

}  // namespace detail

/// Closed-form metric tree of a jitter-free spec.
inline MetricTree synth_ground_truth(const SynthSpec& s) {
  const auto l = detail::synth_layout(s);
  const double b = static_cast<double>(s.base_useful);
  const double n = static_cast<double>(s.processes);
  const double m = static_cast<double>(s.threads_per_process);
  const double p = static_cast<double>(s.regions);

  const double serial = static_cast<double>(l.serial);
  const double lb = p * static_cast<double>(l.lb_extra) * (m - 1.0) / m;
  const double sched = p * static_cast<double>(s.sched_idle);
  const double idle = serial + lb + sched;
  const double min_mpi = static_cast<double>(s.processes > 1 ? l.mpi_base : l.mpi_base + l.mpi_extra);
  const double mean_mpi = static_cast<double>(l.mpi_base) + static_cast<double>(l.mpi_extra) / n;
  const double useful = b - mean_mpi - idle;

  MetricTree t;
  t.omp.serial = (b - serial) / b;
  t.omp.load_balance = (b - serial - lb) / (b - serial);
  t.omp.scheduling = (b - serial - lb - sched) / (b - serial - lb);
  t.omp.eff = (b - idle) / b;
  t.mpi.eff = (b - mean_mpi) / b;
  t.mpi.load_balance = (b - mean_mpi) / (b - min_mpi);
  t.mpi.comm_eff = (b - min_mpi) / b;
  t.hybrid_parallel_eff = useful / b;
  if (s.threads_per_process == 1) {
    const double max_useful = b - min_mpi - idle;
    t.base = BaseMetrics{useful / b, useful / max_useful, max_useful / b};
  }
  return t;
}

/// Deterministic for a given spec. Throws InfeasibleSpec.
inline SynthResult generate(const SynthSpec& s) {
  const auto l = detail::synth_layout(s);
  std::mt19937_64 rng(s.seed);

  Trace trace;
  trace.meta.app_name = s.app_name;
  trace.meta.node_count = s.nodes;
  trace.meta.process_count = s.processes;
  trace.meta.threads_per_process = s.threads_per_process;
  trace.meta.region_count = s.regions;

  for (std::int64_t i = 0; i < s.processes; ++i) {
    ProcessTimeline proc;
    proc.rank = i;
    const Micros mpi = l.mpi_base + (i == s.processes - 1 ? l.mpi_extra : 0);
    for (std::int64_t j = 0; j < s.threads_per_process; ++j) {
      ThreadTimeline t;
      t.thread_id = j;
      Micros region_total = 0;
      for (std::int64_t p = 0; p < s.regions; ++p) {
        const Micros region = s.sched_idle + (j == 0 ? 0 : l.lb_extra);
        region_total += region;
        t.region_idle.push_back({p, region});
      }
      const Micros useful = s.base_useful - mpi - l.serial - region_total;

      t.useful_us = detail::jittered(useful, s.jitter, rng);
      t.mpi_us = detail::jittered(mpi, s.jitter, rng);
      Micros idle = detail::jittered(l.serial, s.jitter, rng);
      for (auto& r : t.region_idle) {
        r.idle_us = detail::jittered(r.idle_us, s.jitter, rng);
        idle += r.idle_us;
      }
      t.idle_us = idle;
      proc.threads.push_back(std::move(t));
    }
    trace.processes.push_back(std::move(proc));
  }

  if (s.node_power_w) {
    std::vector<PowerSample> samples;
    const double span_s = static_cast<double>(s.base_useful) * 1e-6;
    const auto steps = static_cast<std::int64_t>(std::floor(span_s / s.power_period_s));
    for (std::int64_t node = 0; node < s.nodes; ++node)
      for (std::int64_t k = 0; k <= steps; ++k) {
        double w = *s.node_power_w;
        if (s.jitter > 0) w *= 1.0 + s.jitter * (2.0 * detail::unit_uniform(rng) - 1.0);
        samples.push_back({static_cast<double>(k) * s.power_period_s, node, w, 0.6 * w, 0.05 * w});
      }
    trace.power = std::move(samples);
  }

  validate_trace(trace);
  SynthResult out{std::move(trace), std::nullopt};
  if (s.jitter == 0.0) out.truth = synth_ground_truth(s);
  return out;
}

/// Useful-computation counters at a fixed IPC and frequency:
/// cycles = floor(useful_us * GHz * 1e3), instructions = floor(cycles * ipc).
inline void generate_counters(Trace& trace, double ipc, double frequency_ghz) {
  if (!(ipc > 0) || !(frequency_ghz > 0))
    throw Error(ErrorKind::InvalidArgument, "ipc and frequency must be positive");
  // The nudge keeps exact products such as 2.47 GHz * 1e3 from flooring one short.
  auto floor_exact = [](double v) { return static_cast<std::int64_t>(std::floor(v * (1.0 + 1e-12))); };
  for (auto& proc : trace.processes)
    for (auto& t : proc.threads) {
      const auto cycles = floor_exact(static_cast<double>(t.useful_us) * frequency_ghz * 1e3);
      t.counters = CounterSample{cycles, floor_exact(static_cast<double>(cycles) * ipc)};
    }
}

}  // namespace hpceff
