#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "hpceff/report.hpp"
#include "hpceff/synth.hpp"

using namespace hpceff;

namespace {

MetricTree ones() {
  MetricTree t;
  t.hybrid_parallel_eff = 1;
  t.mpi = {1, 1, 1};
  t.omp = {1, 1, 1, 1};
  t.base = BaseMetrics{1, 1, 1};
  return t;
}

MetricTree worked_mpi_tree() {
  SynthSpec s;
  s.processes = 2;
  s.base_useful = 10'000'000;
  s.mpi_fraction = 0.2;
  s.mpi_imbalance = 0.2;
  return analyze(generate(s).trace);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ScalingReport series(std::vector<std::pair<std::int64_t, double>> nodes_elapsed) {
  std::vector<ScalingPoint> pts;
  for (auto [n, t] : nodes_elapsed) {
    ScalingPoint p;
    p.resource_count = n;
    p.elapsed_s = t;
    p.throughput = 1000.0 / t;
    pts.push_back(p);
  }
  return speedup_and_ideal(pts, 0, "kCells/s");
}

}  // namespace

TEST(RenderTree, AllOnesText) {
  const auto text = render_tree(ones(), Format::text);
  int values = 0;
  for (const auto& l : lines(text)) {
    if (l.find("Base model") == 0) continue;
    EXPECT_EQ(l.substr(l.size() - 4), "1.00") << l;
    ++values;
  }
  EXPECT_EQ(values, 11);
  EXPECT_NE(text.find("  MPI Parallel Efficiency"), std::string::npos);
  EXPECT_NE(text.find("    OpenMP Load Balance"), std::string::npos);
}

TEST(RenderTree, WorkedExampleCsvRow) {
  const auto csv = render_tree(worked_mpi_tree(), Format::csv);
  const auto rows = lines(csv);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "metric,value");
  EXPECT_NE(csv.find("\nmpi.eff,0.7\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\nmpi.load_balance,0.875\n"), std::string::npos);
  EXPECT_NE(csv.find("\nomp.load_balance,1\n"), std::string::npos);
  EXPECT_NE(csv.find("\nbase.comm_eff,0.8\n"), std::string::npos);
}

TEST(RenderTree, TextUsesTwoDecimals) {
  const auto text = render_tree(worked_mpi_tree(), Format::text);
  EXPECT_NE(text.find("0.70\n"), std::string::npos);
  EXPECT_NE(text.find("0.88\n"), std::string::npos);  // 0.875 rounded
}

TEST(RenderTree, JsonRoundTrip) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    MetricTree t;
    t.hybrid_parallel_eff = u(rng);
    t.mpi = {u(rng), u(rng), u(rng)};
    t.omp = {u(rng), u(rng), u(rng), u(rng)};
    if (k % 2) t.base = BaseMetrics{u(rng), u(rng), u(rng)};
    EXPECT_EQ(parse_tree_json(render_tree(t, Format::json)), t);
  }
}

TEST(RenderTree, CsvIsLossFree) {
  MetricTree t = ones();
  t.mpi.eff = 0.1 + 0.2;
  t.omp.serial = 1.0 / 3.0;
  for (const auto& l : lines(render_tree(t, Format::csv))) {
    if (l.rfind("mpi.eff,", 0) == 0) {
      EXPECT_EQ(std::stod(l.substr(8)), t.mpi.eff);
    }
    if (l.rfind("omp.serial,", 0) == 0) {
      EXPECT_EQ(std::stod(l.substr(11)), t.omp.serial);
    }
  }
}

TEST(RenderTree, RejectsUnknownMetric) {
  EXPECT_THROW(parse_tree_json(R"({"hybrid_parallel_eff": 1, "mpi.colour": 2})"), Error);
  EXPECT_THROW(parse_tree_json(R"({"hybrid_parallel_eff": 1})"), Error);
}

TEST(RenderTree, Deterministic) {
  const auto t = worked_mpi_tree();
  for (auto f : {Format::text, Format::csv, Format::json}) EXPECT_EQ(render_tree(t, f), render_tree(t, f));
}

TEST(ScalingCsv, HeaderAndNa) {
  const auto csv = render_scaling_csv(series({{8, 100}, {16, 80}}));
  const auto rows = lines(csv);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], kScalingCsvHeader);
  EXPECT_EQ(rows[2], "16,80,1.25,2,12.5,NA,NA,NA,NA,NA,NA");
}

TEST(PlotData, PerfectScalingCurvesMatch) {
  const auto d = render_scaling_plotdata(series({{8, 100}, {16, 50}}));
  EXPECT_EQ(d.actual, d.ideal);
  EXPECT_EQ(d.actual, "8 1\n16 2\n");
}

TEST(PlotData, BaselineOnly) {
  const auto d = render_scaling_plotdata(series({{4, 10}}));
  EXPECT_EQ(d.actual, "4 1\n");
  EXPECT_EQ(d.ideal, "4 1\n");
}

TEST(PlotData, IdealIsLinearInResources) {
  const auto d = render_scaling_plotdata(series({{12, 1000}, {24, 560}, {48, 320}, {96, 230}, {192, 200}}));
  for (const auto& l : lines(d.ideal)) {
    std::istringstream in(l);
    double x = 0, y = 0;
    in >> x >> y;
    EXPECT_DOUBLE_EQ(y, x / 12.0);
  }
  const auto tp = render_throughput_plotdata(series({{12, 1000}, {24, 560}}));
  EXPECT_EQ(tp.ideal, "12 1\n24 2\n");
}

TEST(Energy, Renderings) {
  const auto e = energy_and_edp(1000, 1, 3600);
  EXPECT_NE(render_energy(e, Format::text).find("Energy               1.00 kWh"), std::string::npos);
  EXPECT_EQ(lines(render_energy(e, Format::csv))[1], "1000,1,3600,1,3600");
  const auto j = nlohmann::json::parse(render_energy(e, Format::json));
  EXPECT_EQ(j["energy_kwh"].get<double>(), 1.0);
}

TEST(Bundle, ProvenanceAndPayloadRule) {
  ReportBundle b;
  EXPECT_THROW(bundle_to_json(b), Error);
  b.metric_tree = ones();
  b.inputs = {"a.json"};
  const auto j = bundle_to_json(b);
  EXPECT_EQ(j["provenance"]["version"], std::string(kVersion));
  EXPECT_EQ(j["provenance"]["inputs"][0], "a.json");
  EXPECT_TRUE(j.contains("metric_tree"));
  EXPECT_FALSE(j.contains("scaling"));
}
