/**
 * @file peaks.hpp
 * @brief Theoretical peak calculators. GB is 10^9 bytes throughout.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hpceff/error.hpp"

namespace hpceff {

enum class Isa { x86, avx2, avx512 };
enum class Precision { sp, dp };

constexpr std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::x86: return "x86";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
  }
  return "?";
}

constexpr std::string_view to_string(Precision p) { return p == Precision::sp ? "sp" : "dp"; }

inline std::optional<Isa> parse_isa(std::string_view s) {
  if (s == "x86") return Isa::x86;
  if (s == "avx2") return Isa::avx2;
  if (s == "avx512") return Isa::avx512;
  return std::nullopt;
}

inline std::optional<Precision> parse_precision(std::string_view s) {
  if (s == "sp") return Precision::sp;
  if (s == "dp") return Precision::dp;
  return std::nullopt;
}

struct FpuPeakSpec {
  int vector_length = 1;
  int pipeline_count = 1;
  int flops_per_op = 2;  // FMA
  std::optional<double> frequency_ghz;
};

struct FpuPeak {
  double flop_per_cycle = 0.0;
  std::optional<double> gflops;
};

struct IsaPreset {
  Isa isa;
  Precision precision;
  int vector_length;
  int pipelines;

  std::string name() const { return std::string(to_string(isa)) + "." + std::string(to_string(precision)); }

  FpuPeakSpec spec(std::optional<double> frequency_ghz = std::nullopt) const {
    return FpuPeakSpec{vector_length, pipelines, 2, frequency_ghz};
  }
};

/// Sapphire Rapids cores: two FMA pipelines for every ISA.
inline constexpr std::array<IsaPreset, 6> kIsaPresets{{
    {Isa::x86, Precision::sp, 1, 2},
    {Isa::x86, Precision::dp, 1, 2},
    {Isa::avx2, Precision::sp, 8, 2},
    {Isa::avx2, Precision::dp, 4, 2},
    {Isa::avx512, Precision::sp, 16, 2},
    {Isa::avx512, Precision::dp, 8, 2},
}};

inline std::optional<IsaPreset> find_preset(Isa isa, Precision precision) {
  for (const auto& p : kIsaPresets)
    if (p.isa == isa && p.precision == precision) return p;
  return std::nullopt;
}

/// P = V * N * flops_per_op Flop/cycle; GFlop/s = P * GHz when a frequency is given.
inline FpuPeak fpu_peak(const FpuPeakSpec& spec) {
  if (spec.vector_length < 1 || spec.pipeline_count < 1 || spec.flops_per_op < 1)
    throw Error(ErrorKind::InvalidArgument, "vector length, pipelines and flops per op must be >= 1");
  FpuPeak peak;
  peak.flop_per_cycle = static_cast<double>(spec.vector_length) * spec.pipeline_count * spec.flops_per_op;
  if (spec.frequency_ghz) {
    if (!(*spec.frequency_ghz > 0)) throw Error(ErrorKind::InvalidArgument, "frequency must be positive");
    peak.gflops = peak.flop_per_cycle * *spec.frequency_ghz;
  }
  return peak;
}

struct BandwidthPeak {
  double bytes_per_cycle = 0.0;
  double gb_per_s = 0.0;
};

/// Every load/store pipeline serves one instruction of the given width per cycle.
inline BandwidthPeak l1_peak_bandwidth(double bytes_per_instr, int pipelines, double frequency_ghz) {
  if (!(bytes_per_instr > 0) || pipelines < 1 || !(frequency_ghz > 0))
    throw Error(ErrorKind::InvalidArgument, "L1 peak inputs must be positive");
  BandwidthPeak p;
  p.bytes_per_cycle = bytes_per_instr * pipelines;
  p.gb_per_s = p.bytes_per_cycle * frequency_ghz;
  return p;
}

inline double bytes_per_cycle_to_gb_per_s(double bytes_per_cycle, double frequency_ghz) {
  return bytes_per_cycle * frequency_ghz;
}

inline double gb_per_s_to_bytes_per_cycle(double gb_per_s, double frequency_ghz) {
  if (!(frequency_ghz > 0)) throw Error(ErrorKind::InvalidArgument, "frequency must be positive");
  return gb_per_s / frequency_ghz;
}

/// Rated memory bandwidth, e.g. 307.20 GB/s per DDR5 socket.
struct MemPeakSpec {
  double gb_per_s_per_socket = 0.0;
  int sockets = 1;

  double total_gb_per_s() const {
    if (!(gb_per_s_per_socket > 0) || sockets < 1)
      throw Error(ErrorKind::InvalidArgument, "memory peak values must be positive");
    return gb_per_s_per_socket * sockets;
  }
};

/// 100 * measured / peak. Not capped at 100.
inline double percent_of_peak(double measured, double peak) {
  if (!(peak > 0)) throw Error(ErrorKind::ZeroPeak, "peak must be positive");
  return 100.0 * measured / peak;
}

/// Reporting arithmetic of a throughput kernel run: raw counts in, rates out.
struct KernelReport {
  double flop_per_cycle = 0.0;
  double frequency_ghz = 0.0;
  double gflops = 0.0;
  double ipc = 0.0;
  std::optional<double> percent_peak;
  std::optional<double> efficiency_gflops_per_w;
};

inline KernelReport fpu_kernel_report(double instructions, double flops, double duration_s, double cycles,
                                      std::optional<double> power_w = std::nullopt,
                                      std::optional<double> peak_flop_per_cycle = std::nullopt) {
  if (!(duration_s > 0) || !(cycles > 0))
    throw Error(ErrorKind::ZeroDenominator, "duration and cycles must be positive");
  KernelReport r;
  r.flop_per_cycle = flops / cycles;
  r.frequency_ghz = cycles / duration_s * 1e-9;
  r.gflops = flops / duration_s * 1e-9;
  r.ipc = instructions / cycles;
  if (peak_flop_per_cycle) r.percent_peak = percent_of_peak(r.flop_per_cycle, *peak_flop_per_cycle);
  if (power_w) {
    if (!(*power_w > 0)) throw Error(ErrorKind::ZeroPower, "power must be positive");
    r.efficiency_gflops_per_w = r.gflops / *power_w;
  }
  return r;
}

}  // namespace hpceff
