/**
 * @file microbench.hpp
 * @brief Pointer-chase latency and multi-threaded copy bandwidth kernels.
 */
#pragma once

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#if defined(__linux__)
#include <pthread.h>
#include <sched.h>
#include <unistd.h>
#endif

#include "hpceff/error.hpp"
#include "hpceff/scaling.hpp"

namespace hpceff {

inline constexpr std::size_t kPageSize = 4096;
inline constexpr std::size_t kMiB = std::size_t{1} << 20;

// --- pointer chase ------------------------------------------------------------

/// successor[i] is the element visited after element i.
struct ChasePattern {
  std::size_t element_count = 0;
  std::size_t stride = 1;
  std::vector<std::uint64_t> successor;
};

/// Stride-separated single cycle over all elements. When gcd(stride, n) > 1
/// the pure modular walk splits into several cycles; on closing a cycle the
/// walk continues at the next start offset instead.
inline ChasePattern build_chase(std::size_t elements, std::size_t stride) {
  if (elements < 2) throw Error(ErrorKind::InfeasiblePattern, "a chase needs at least 2 elements");
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");

  // The walk visits the residue classes o + k*step (mod n), o < gcd, in turn.
  // Class o starts at o and ends at o - step, so an element whose plain
  // successor is a class start j < gcd is a class tail and links to the
  // next start instead.
  const std::size_t step = stride % elements;
  const std::size_t groups = std::gcd(step, elements);  // gcd(0, n) = n

  ChasePattern pattern{elements, stride, std::vector<std::uint64_t>(elements)};
  for (std::size_t i = 0; i < elements; ++i) {
    std::size_t j = i + step;
    if (j >= elements) j -= elements;
    if (j < groups) j = (j + 1 == groups) ? 0 : j + 1;
    pattern.successor[i] = j;
  }
  return pattern;
}

struct LatencyResult {
  double avg_access_latency_us = 0.0;
  double latency_cycles = 0.0;
  double assumed_frequency_ghz = 0.0;
  std::size_t accesses = 0;
};

inline double latency_us_to_cycles(double latency_us, double frequency_ghz) { return latency_us * frequency_ghz * 1e3; }

namespace detail {

struct FreeDeleter {
  void operator()(void* p) const noexcept { std::free(p); }
};

template <typename T>
using AlignedBuffer = std::unique_ptr<T[], FreeDeleter>;

template <typename T>
AlignedBuffer<T> page_aligned(std::size_t count) {
  std::size_t bytes = count * sizeof(T);
  bytes = (bytes + kPageSize - 1) / kPageSize * kPageSize;
  void* p = std::aligned_alloc(kPageSize, bytes == 0 ? kPageSize : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return AlignedBuffer<T>(static_cast<T*>(p));
}

inline volatile std::uint64_t g_chase_sink = 0;

inline std::uint64_t chase(const std::uint64_t* buf, std::uint64_t start, std::size_t steps) {
  std::uint64_t idx = start;
  for (std::size_t k = 0; k < steps; ++k) idx = buf[idx];
  return idx;
}

}  // namespace detail

/// Warm-up traversals followed by timed traversals of a dependent-load chain
/// over a page-aligned copy of the pattern.
inline LatencyResult run_latency(const ChasePattern& pattern, std::size_t warmup_traversals,
                                 std::size_t timed_traversals, double assumed_frequency_ghz = 3.0) {
  if (timed_traversals < 1) throw Error(ErrorKind::InvalidArgument, "need at least one timed traversal");
  if (!(assumed_frequency_ghz > 0)) throw Error(ErrorKind::InvalidArgument, "frequency must be positive");
  const std::size_t n = pattern.element_count;
  if (n < 2 || pattern.successor.size() != n) throw Error(ErrorKind::InvalidArgument, "malformed chase pattern");

  auto buf = detail::page_aligned<std::uint64_t>(n);
  std::memcpy(buf.get(), pattern.successor.data(), n * sizeof(std::uint64_t));

  std::uint64_t idx = detail::chase(buf.get(), 0, warmup_traversals * n);
  const auto steps = timed_traversals * n;
  const auto t0 = std::chrono::steady_clock::now();
  idx = detail::chase(buf.get(), idx, steps);
  const auto t1 = std::chrono::steady_clock::now();
  detail::g_chase_sink = idx;

  LatencyResult r;
  r.accesses = steps;
  r.assumed_frequency_ghz = assumed_frequency_ghz;
  r.avg_access_latency_us = std::chrono::duration<double, std::micro>(t1 - t0).count() / static_cast<double>(steps);
  r.latency_cycles = latency_us_to_cycles(r.avg_access_latency_us, assumed_frequency_ghz);
  return r;
}

// --- copy bandwidth -----------------------------------------------------------

enum class Binding { close, spread };

inline std::optional<Binding> parse_binding(std::string_view s) {
  if (s == "close") return Binding::close;
  if (s == "spread") return Binding::spread;
  return std::nullopt;
}

constexpr std::string_view to_string(Binding b) { return b == Binding::close ? "close" : "spread"; }

struct CopyBandwidthResult {
  std::size_t threads = 0;
  std::size_t buffer_bytes = 0;  // per thread
  std::size_t iterations = 0;
  double elapsed_s = 0.0;
  std::uint64_t bytes_moved = 0;  // read + write, all threads
  double aggregate_gb_per_s = 0.0;
  std::vector<double> per_thread_gb_per_s;
  double balance = 1.0;
  bool binding_applied = false;
  std::vector<std::string> warnings;
};

/// Bytes a copy moves: every byte is read once and written once.
inline std::uint64_t copy_bytes_moved(std::size_t buffer_bytes, std::size_t iterations, std::size_t threads) {
  return std::uint64_t{2} * buffer_bytes * iterations * threads;
}

inline std::size_t online_cpus() {
  const auto n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

inline std::size_t last_level_cache_bytes() {
#if defined(__linux__) && defined(_SC_LEVEL3_CACHE_SIZE)
  for (int name : {_SC_LEVEL3_CACHE_SIZE, _SC_LEVEL2_CACHE_SIZE}) {
    const long v = sysconf(name);
    if (v > 0) return static_cast<std::size_t>(v);
  }
#endif
  return 32 * kMiB;
}

/// Per-thread buffer so that all source arrays together cover at least
/// three times the last-level cache.
inline std::size_t default_copy_mib(std::size_t threads) {
  if (threads == 0) threads = 1;
  const std::size_t want = 3 * last_level_cache_bytes();
  const std::size_t per_thread = (want + threads - 1) / threads;
  return std::max<std::size_t>(1, (per_thread + kMiB - 1) / kMiB);
}

namespace detail {

inline std::size_t cpu_for(std::size_t thread, std::size_t threads, Binding binding, std::size_t cpus) {
  if (binding == Binding::close || threads >= cpus) return thread % cpus;
  return (thread * (cpus / threads)) % cpus;
}

inline bool bind_current_thread(std::size_t cpu) {
#if defined(__linux__)
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
#else
  (void)cpu;
  return false;
#endif
}

}  // namespace detail

/// One worker per thread copies its own page-aligned array `iterations`
/// times; workers meet at a barrier after every iteration.
inline CopyBandwidthResult run_copy_bandwidth(std::size_t threads, std::size_t buffer_mib, Binding binding,
                                              std::size_t iterations) {
  if (threads < 1) throw Error(ErrorKind::InvalidArgument, "need at least one thread");
  if (buffer_mib < 1) throw Error(ErrorKind::InvalidArgument, "buffer must be at least 1 MiB");
  if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "need at least one iteration");

  const std::size_t bytes = buffer_mib * kMiB;
  const std::size_t cpus = online_cpus();
  std::vector<double> thread_seconds(threads, 0.0);
  std::vector<char> bound(threads, 0);

  std::barrier sync(static_cast<std::ptrdiff_t>(threads) + 1);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      bound[t] = detail::bind_current_thread(detail::cpu_for(t, threads, binding, cpus)) ? 1 : 0;
      // first touch from the owning thread
      auto src = detail::page_aligned<unsigned char>(bytes);
      auto dst = detail::page_aligned<unsigned char>(bytes);
      std::memset(src.get(), static_cast<int>(t + 1), bytes);
      std::memset(dst.get(), 0, bytes);
      sync.arrive_and_wait();  // ready
      sync.arrive_and_wait();  // start
      double busy = 0.0;
      for (std::size_t it = 0; it < iterations; ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        std::memcpy(dst.get(), src.get(), bytes);
        busy += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        sync.arrive_and_wait();
      }
      thread_seconds[t] = busy;
      detail::g_chase_sink = dst[bytes - 1];
    });
  }

  sync.arrive_and_wait();
  const auto start = std::chrono::steady_clock::now();
  sync.arrive_and_wait();
  for (std::size_t it = 0; it < iterations; ++it) sync.arrive_and_wait();
  const auto stop = std::chrono::steady_clock::now();
  for (auto& w : workers) w.join();

  CopyBandwidthResult r;
  r.threads = threads;
  r.buffer_bytes = bytes;
  r.iterations = iterations;
  r.elapsed_s = std::chrono::duration<double>(stop - start).count();
  r.bytes_moved = copy_bytes_moved(bytes, iterations, threads);
  r.aggregate_gb_per_s = static_cast<double>(r.bytes_moved) / r.elapsed_s * 1e-9;
  const double per_thread_bytes = static_cast<double>(copy_bytes_moved(bytes, iterations, 1));
  for (double s : thread_seconds) r.per_thread_gb_per_s.push_back(per_thread_bytes / std::max(s, 1e-12) * 1e-9);
  r.balance = performance_balance(r.per_thread_gb_per_s);
  r.binding_applied = std::all_of(bound.begin(), bound.end(), [](char b) { return b != 0; });
  if (!r.binding_applied)
    r.warnings.push_back(std::string(to_string(ErrorKind::BindingUnsupported)) +
                         ": thread affinity could not be applied, running unbound");
  if (threads > cpus)
    r.warnings.push_back("more threads than online CPUs (" + std::to_string(cpus) + "), threads share cores");
  return r;
}

}  // namespace hpceff
