#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "hpceff/scaling.hpp"
#include "hpceff/synth.hpp"

using namespace hpceff;

namespace {

ScalingPoint point(std::int64_t resources, double elapsed, double throughput = 0.0) {
  ScalingPoint p;
  p.resource_count = resources;
  p.elapsed_s = elapsed;
  p.throughput = throughput;
  return p;
}

ScalingPoint counted(double instructions, double cycles, double useful_s) {
  ScalingPoint p = point(1, 1.0);
  p.counters = UsefulCounters{instructions, cycles, useful_s};
  return p;
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Scalability, IdenticalRunIsOne) {
  const auto b = counted(100, 50, 25);
  const auto s = scalability(b, b);
  EXPECT_DOUBLE_EQ(s.instruction, 1.0);
  EXPECT_DOUBLE_EQ(s.ipc, 1.0);
  EXPECT_DOUBLE_EQ(s.frequency, 1.0);
  EXPECT_DOUBLE_EQ(s.computation, 1.0);
}

TEST(Scalability, HalvedFrequency) {
  // same instructions and cycles, twice the useful time
  const auto s = scalability(counted(100, 50, 25), counted(100, 50, 50));
  EXPECT_DOUBLE_EQ(s.instruction, 1.0);
  EXPECT_DOUBLE_EQ(s.ipc, 1.0);
  EXPECT_DOUBLE_EQ(s.frequency, 0.5);
  EXPECT_DOUBLE_EQ(s.computation, 0.5);
}

TEST(Scalability, MixedChildren) {
  const auto s = scalability(counted(100, 50, 25), counted(120, 50, 20));
  EXPECT_NEAR(s.instruction, 100.0 / 120.0, 1e-12);
  EXPECT_NEAR(s.ipc, 1.2, 1e-12);
  EXPECT_NEAR(s.frequency, 1.25, 1e-12);
  EXPECT_NEAR(s.computation, 1.25, 1e-12);
  EXPECT_NEAR(s.computation, 25.0 / 20.0, 1e-12);  // useful-time ratio
}

TEST(Scalability, Errors) {
  EXPECT_EQ(kind_of([] { scalability(point(1, 1), counted(1, 1, 1)); }), ErrorKind::MissingCounters);
  EXPECT_EQ(kind_of([] { scalability(counted(0, 1, 1), counted(1, 1, 1)); }), ErrorKind::ZeroDenominator);
  EXPECT_EQ(kind_of([] { scalability(counted(1, 1, 1), counted(1, 0, 1)); }), ErrorKind::ZeroDenominator);
}

TEST(ScalabilityProperty, ProductTelescopesToUsefulTimeRatio) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double tb = u(rng), fb = u(rng), ipcb = u(rng);
    const double tr = u(rng), fr = u(rng), ipcr = u(rng);
    const double cb = tb * fb, cr = tr * fr;
    const auto s = scalability(counted(ipcb * cb, cb, tb), counted(ipcr * cr, cr, tr));
    EXPECT_NEAR(s.computation, tb / tr, 1e-12 * std::max(1.0, tb / tr));
  }
}

TEST(GlobalEfficiency, Products) {
  EXPECT_DOUBLE_EQ(global_efficiency(1.0, 1.0), 1.0);
  EXPECT_NEAR(global_efficiency(0.5, 1.83), 0.915, 1e-12);
  EXPECT_DOUBLE_EQ(global_efficiency(0.7, 1.0), 0.7);
}

TEST(Speedup, PerfectScaling) {
  const std::vector<ScalingPoint> s{point(8, 100), point(16, 50)};
  const auto r = speedup_and_ideal(s, 0);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(r.rows[1].speedup, 2.0);
  EXPECT_DOUBLE_EQ(r.rows[1].ideal_speedup, 2.0);
}

TEST(Speedup, SublinearScaling) {
  const std::vector<ScalingPoint> s{point(8, 100), point(16, 80)};
  const auto r = speedup_and_ideal(s, 0);
  EXPECT_DOUBLE_EQ(r.rows[1].speedup, 1.25);
  EXPECT_DOUBLE_EQ(r.rows[1].ideal_speedup, 2.0);
}

TEST(Speedup, IdealLineIsProportionalAndRowsAreSorted) {
  const std::vector<ScalingPoint> s{point(48, 30, 90), point(12, 100, 30), point(24, 55, 55)};
  const auto r = speedup_and_ideal(s, 1, "kCells/s");
  EXPECT_EQ(r.throughput_unit, "kCells/s");
  EXPECT_EQ(r.baseline_row, 0u);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.ideal_speedup, static_cast<double>(row.resource_count) / 12.0);
    EXPECT_DOUBLE_EQ(row.ideal_throughput, 30.0 * row.ideal_speedup);
  }
  EXPECT_EQ(r.rows[0].resource_count, 12);
  EXPECT_EQ(r.rows[2].resource_count, 48);
  EXPECT_EQ(r.rows[0].speedup, 1.0);
}

TEST(Speedup, BaselineHasUnitScalabilities) {
  std::vector<ScalingPoint> s{counted(100, 50, 25), counted(120, 50, 20)};
  s[1].resource_count = 2;
  s[0].parallel_eff = 0.9;
  s[1].parallel_eff = 0.8;
  const auto r = speedup_and_ideal(s, 0);
  ASSERT_TRUE(r.rows[0].scalability);
  EXPECT_EQ(r.rows[0].scalability->computation, 1.0);
  EXPECT_EQ(r.rows[0].scalability->ipc, 1.0);
  ASSERT_TRUE(r.rows[1].global_eff);
  EXPECT_NEAR(*r.rows[1].global_eff, 0.8 * 1.25, 1e-12);
}

TEST(Speedup, MissingCountersLeaveScalabilityEmpty) {
  std::vector<ScalingPoint> s{counted(100, 50, 25), point(2, 0.5)};
  const auto r = speedup_and_ideal(s, 0);
  EXPECT_FALSE(r.rows[0].scalability);
  EXPECT_FALSE(r.rows[1].scalability);
}

TEST(Speedup, DuplicateResourceCount) {
  const std::vector<ScalingPoint> s{point(8, 100), point(8, 50)};
  EXPECT_EQ(kind_of([&] { speedup_and_ideal(s, 0); }), ErrorKind::DuplicateResourceCount);
}

TEST(Balance, Examples) {
  EXPECT_EQ(performance_balance(std::vector<double>{70, 80, 90}), 0.875);
  EXPECT_EQ(performance_balance(std::vector<double>{3.3, 3.3, 3.3}), 1.0);
}

TEST(Balance, OneSlowThreadAmong112) {
  std::vector<double> v(112, 1.0);
  v[57] = 0.9;
  const double expected = 0.9 / ((111.0 + 0.9) / 112.0);
  EXPECT_NEAR(performance_balance(v), expected, 1e-12);
  EXPECT_NEAR(performance_balance(v), 0.9, 1e-3);
  EXPECT_LT(performance_balance(v), 1.0);
}

TEST(Balance, Errors) {
  EXPECT_EQ(kind_of([] { performance_balance(std::vector<double>{}); }), ErrorKind::EmptyInput);
  EXPECT_EQ(kind_of([] { performance_balance(std::vector<double>{1, 0}); }), ErrorKind::NonPositivePerf);
  EXPECT_EQ(kind_of([] { performance_balance(std::vector<double>{1, -2}); }), ErrorKind::NonPositivePerf);
}

TEST(BalanceProperty, ScaleInvariantAndBounded) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> v(1 + rng() % 64);
    for (auto& x : v) x = u(rng);
    const double b = performance_balance(v);
    EXPECT_GT(b, 0.0);
    EXPECT_LE(b, 1.0);
    for (double lambda : {0.5, 2.0, 1000.0, 1e-3}) {
      std::vector<double> w = v;
      for (auto& x : w) x *= lambda;
      EXPECT_NEAR(performance_balance(w), b, 1e-12);
    }
  }
}

TEST(ScalingFromTrace, IpcChangeCarriesThrough) {
  SynthSpec spec;
  spec.processes = 4;
  spec.threads_per_process = 2;
  spec.base_useful = 2'000'000;
  spec.mpi_fraction = 0.1;
  auto base = generate(spec).trace;
  spec.nodes = 2;
  auto run = generate(spec).trace;
  generate_counters(base, 1.0, 3.0);
  generate_counters(run, 1.2, 3.0);
  const std::vector<ScalingPoint> pts{scaling_point_from_trace(base, 100.0), scaling_point_from_trace(run, 100.0)};
  EXPECT_EQ(pts[1].resource_count, 2);
  EXPECT_NEAR(pts[0].elapsed_s, 2.0, 1e-12);
  EXPECT_NEAR(pts[0].throughput, 50.0, 1e-9);
  const auto r = speedup_and_ideal(pts, 0);
  ASSERT_TRUE(r.rows[1].scalability);
  EXPECT_NEAR(r.rows[1].scalability->ipc, 1.2, 1e-9);
  EXPECT_NEAR(r.rows[1].scalability->frequency, 1.0, 1e-9);
}
