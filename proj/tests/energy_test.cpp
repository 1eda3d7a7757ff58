#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hpceff/energy.hpp"

using namespace hpceff;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

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

/// Nodes 2^k; elapsed follows Amdahl with serial fraction s, power per node constant.
std::vector<double> alya_shaped_edp(double serial_fraction, double node_w, double t1, int points) {
  std::vector<double> edp;
  for (int k = 0; k < points; ++k) {
    const double n = std::ldexp(1.0, k);
    const double t = t1 * (serial_fraction + (1.0 - serial_fraction) / n);
    edp.push_back(energy_and_edp(node_w, static_cast<std::int64_t>(n), t).edp_kwh_s);
  }
  return edp;
}

}  // namespace

TEST(AveragePower, Examples) {
  const std::vector<PowerSample> constant{{0, 0, 1000, 0, 0}, {60, 0, 1000, 0, 0}, {120, 0, 1000, 0, 0}};
  EXPECT_DOUBLE_EQ(average_power(constant).fleet_w, 1000.0);

  const std::vector<PowerSample> pair{{0, 0, 900, 0, 0}, {60, 0, 1100, 0, 0}};
  EXPECT_DOUBLE_EQ(average_power(pair).fleet_w, 1000.0);

  const std::vector<PowerSample> nodes{{0, 0, 400, 0, 0}, {0, 1, 600, 0, 0}};
  const auto avg = average_power(nodes);
  EXPECT_DOUBLE_EQ(avg.fleet_w, 500.0);
  EXPECT_DOUBLE_EQ(avg.per_node_w.at(0), 400.0);
  EXPECT_DOUBLE_EQ(avg.per_node_w.at(1), 600.0);
}

TEST(AveragePower, WindowIsInclusive) {
  const std::vector<PowerSample> s{{0, 0, 100, 0, 0}, {10, 0, 200, 0, 0}, {20, 0, 300, 0, 0}, {30, 0, 400, 0, 0}};
  EXPECT_DOUBLE_EQ(average_power(s, {10, 20}).fleet_w, 250.0);
  EXPECT_EQ(kind_of([&] { average_power(s, {31, 40}); }), ErrorKind::EmptyWindow);
  EXPECT_EQ(kind_of([] { average_power(std::vector<PowerSample>{}); }), ErrorKind::EmptyWindow);
}

TEST(AveragePowerProperty, ReorderInvariant) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(100.0, 2000.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<PowerSample> s;
    for (int i = 0; i < 50; ++i)
      s.push_back({static_cast<double>(i), static_cast<std::int64_t>(rng() % 4), w(rng), 0, 0});
    const auto before = average_power(s);
    std::shuffle(s.begin(), s.end(), rng);
    const auto after = average_power(s);
    EXPECT_EQ(before.fleet_w, after.fleet_w);
    EXPECT_EQ(before.per_node_w, after.per_node_w);
  }
}

TEST(EnergyAndEdp, UnitCase) {
  const auto e = energy_and_edp(1000, 1, 3600);
  EXPECT_DOUBLE_EQ(e.energy_kwh, 1.0);
  EXPECT_DOUBLE_EQ(e.edp_kwh_s, 3600.0);
}

TEST(EnergyAndEdp, ZeroPower) {
  const auto e = energy_and_edp(0, 16, 1234);
  EXPECT_EQ(e.energy_kwh, 0.0);
  EXPECT_EQ(e.edp_kwh_s, 0.0);
}

TEST(EnergyAndEdp, DlBenchRows) {
  // fleet power already aggregated over all nodes
  EXPECT_LE(rel_err(energy_and_edp(47'680, 1, 2473.04).energy_kwh, 32.76), 1e-3);
  EXPECT_LE(rel_err(energy_and_edp(186'410, 1, 644.254).energy_kwh, 33.36), 1e-3);
}

TEST(EnergyProperty, Linearity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1.0, 5000.0);
  for (int k = 0; k < 300; ++k) {
    const double w = u(rng), t = u(rng);
    const auto n = static_cast<std::int64_t>(1 + rng() % 100);
    const auto e = energy_and_edp(w, n, t);
    EXPECT_NEAR(e.energy_kwh, w * static_cast<double>(n) * t / 3600.0 / 1000.0, 1e-12 * e.energy_kwh);
    EXPECT_NEAR(energy_and_edp(w, n, 2 * t).energy_kwh, 2 * e.energy_kwh, 1e-12 * e.energy_kwh);
    EXPECT_NEAR(energy_and_edp(w, n, 2 * t).edp_kwh_s, 4 * e.edp_kwh_s, 1e-12 * e.edp_kwh_s);
    EXPECT_NEAR(energy_and_edp(2 * w, n, t).energy_kwh, 2 * e.energy_kwh, 1e-12 * e.energy_kwh);
    EXPECT_NEAR(energy_and_edp(w, 2 * n, t).energy_kwh, 2 * e.energy_kwh, 1e-12 * e.energy_kwh);
  }
}

TEST(PowerEfficiency, Examples) {
  EXPECT_NEAR(flops_power_efficiency(78.86, 152.43), 0.52, 0.005);
  EXPECT_NEAR(flops_power_efficiency(6610, 870), 7.59, 0.01);
  EXPECT_EQ(flops_power_efficiency(0, 100), 0.0);
  EXPECT_DOUBLE_EQ(bandwidth_power_efficiency(100, 100), 1.0);
  EXPECT_EQ(bandwidth_power_efficiency(0, 50), 0.0);
  EXPECT_EQ(kind_of([] { flops_power_efficiency(1, 0); }), ErrorKind::ZeroPower);
  EXPECT_EQ(kind_of([] { bandwidth_power_efficiency(1, -1); }), ErrorKind::ZeroPower);
}

TEST(PowerEfficiency, PeaksWhereBandwidthSaturates) {
  // bandwidth saturates at 16 threads, power keeps growing linearly
  std::vector<double> eff;
  const int threads = 56;
  for (int t = 1; t <= threads; ++t) {
    const double bw = 25.0 * std::min(t, 16);
    const double power = 150.0 + 3.0 * t;
    eff.push_back(bandwidth_power_efficiency(bw, power));
  }
  const auto best = static_cast<int>(std::max_element(eff.begin(), eff.end()) - eff.begin()) + 1;
  EXPECT_EQ(best, 16);
  EXPECT_LT(best, threads);
}

TEST(SubtractIdle, Examples) {
  const auto a = subtract_idle(152.70);
  EXPECT_NEAR(a.watts, 9.005, 1e-9);
  EXPECT_FALSE(a.negative_clamped);
  const auto b = subtract_idle(143.695);
  EXPECT_NEAR(b.watts, 0.0, 1e-9);
  const auto c = subtract_idle(100);
  EXPECT_EQ(c.watts, 0.0);
  EXPECT_TRUE(c.negative_clamped);
  EXPECT_NEAR(subtract_idle(300, {}, 2).watts, 300 - 287.39, 1e-9);
}

TEST(IdleModel, PerSocketHalves) {
  const IdlePowerModel m;
  EXPECT_DOUBLE_EQ(m.pck_idle_per_socket_w(), 143.695);
  EXPECT_DOUBLE_EQ(m.dram_idle_per_socket_w(), 2.695);
  EXPECT_DOUBLE_EQ(m.node_idle_w, 379.40);
}

TEST(EdpShape, AlyaShapedSeriesHasUniqueInteriorMinimum) {
  for (double s : {0.01, 0.02, 0.05, 0.1}) {
    const auto edp = alya_shaped_edp(s, 600.0, 3600.0, 14);
    const auto idx = edp_interior_minimum(edp);
    ASSERT_TRUE(idx) << "serial fraction " << s;
    // U-shape: strictly decreasing to the minimum, strictly increasing after
    for (std::size_t k = 1; k <= *idx; ++k) EXPECT_LT(edp[k], edp[k - 1]);
    for (std::size_t k = *idx + 1; k < edp.size(); ++k) EXPECT_GT(edp[k], edp[k - 1]);
  }
}

TEST(EdpShape, MonotoneSeriesHasNoInteriorMinimum) {
  EXPECT_FALSE(edp_interior_minimum(std::vector<double>{5, 4, 3, 2}));
  EXPECT_FALSE(edp_interior_minimum(std::vector<double>{1, 2, 3}));
  EXPECT_FALSE(edp_interior_minimum(std::vector<double>{3, 1, 1, 3}));
  EXPECT_EQ(edp_interior_minimum(std::vector<double>{3, 1, 2}), std::optional<std::size_t>(1));
}
