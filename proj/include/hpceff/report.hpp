/**
 * @file report.hpp
 * @brief Text, CSV, JSON and plot-data renderings of analysis results.
 *
 * Output is deterministic: fixed key order, '.' decimal separator and
 * shortest round-trip formatting for full-precision values.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hpceff/energy.hpp"
#include "hpceff/error.hpp"
#include "hpceff/format.hpp"
#include "hpceff/metrics.hpp"
#include "hpceff/scaling.hpp"

namespace hpceff {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Format { text, csv, json };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::text;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

// --- metric tree ------------------------------------------------------------

/// Flat key paths in tree order.
inline std::vector<std::pair<std::string, double>> flatten(const MetricTree& t) {
  std::vector<std::pair<std::string, double>> kv{
      {"hybrid_parallel_eff", t.hybrid_parallel_eff},
      {"mpi.eff", t.mpi.eff},
      {"mpi.load_balance", t.mpi.load_balance},
      {"mpi.comm_eff", t.mpi.comm_eff},
      {"omp.eff", t.omp.eff},
      {"omp.serial", t.omp.serial},
      {"omp.load_balance", t.omp.load_balance},
      {"omp.scheduling", t.omp.scheduling},
  };
  if (t.base) {
    kv.emplace_back("base.parallel_eff", t.base->parallel_eff);
    kv.emplace_back("base.load_balance", t.base->load_balance);
    kv.emplace_back("base.comm_eff", t.base->comm_eff);
  }
  return kv;
}

inline nlohmann::ordered_json tree_to_json(const MetricTree& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : flatten(t)) j[k] = v;
  return j;
}

inline MetricTree tree_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "metric tree must be a JSON object");
  auto get = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw Error(ErrorKind::Parse, std::string("metric tree lacks '") + key + "'");
    return it->get<double>();
  };
  static constexpr std::array<std::string_view, 11> known{
      "hybrid_parallel_eff", "mpi.eff", "mpi.load_balance", "mpi.comm_eff", "omp.eff", "omp.serial",
      "omp.load_balance", "omp.scheduling", "base.parallel_eff", "base.load_balance", "base.comm_eff"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || item.key() == k;
    if (!ok) throw Error(ErrorKind::Parse, "unknown metric '" + item.key() + "'");
  }
  MetricTree t;
  t.hybrid_parallel_eff = get("hybrid_parallel_eff");
  t.mpi = {get("mpi.eff"), get("mpi.load_balance"), get("mpi.comm_eff")};
  t.omp = {get("omp.eff"), get("omp.serial"), get("omp.load_balance"), get("omp.scheduling")};
  if (j.contains("base.parallel_eff") || j.contains("base.load_balance") || j.contains("base.comm_eff"))
    t.base = BaseMetrics{get("base.parallel_eff"), get("base.load_balance"), get("base.comm_eff")};
  return t;
}

inline MetricTree parse_tree_json(std::string_view text) {
  try {
    return tree_from_json(nlohmann::json::parse(text.begin(), text.end()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

namespace detail {

inline void text_row(std::string& out, int depth, std::string_view label, double value) {
  std::string line(static_cast<std::size_t>(depth) * 2, ' ');
  line += label;
  if (line.size() < 40) line.resize(40, ' ');
  out += line + format_fixed(value, 2) + "\n";
}

}  // namespace detail

inline std::string render_tree(const MetricTree& t, Format format) {
  std::string out;
  switch (format) {
    case Format::text:
      detail::text_row(out, 0, "Hybrid Parallel Efficiency", t.hybrid_parallel_eff);
      detail::text_row(out, 1, "MPI Parallel Efficiency", t.mpi.eff);
      detail::text_row(out, 2, "MPI Load Balance", t.mpi.load_balance);
      detail::text_row(out, 2, "MPI Communication Efficiency", t.mpi.comm_eff);
      detail::text_row(out, 1, "OpenMP Parallel Efficiency", t.omp.eff);
      detail::text_row(out, 2, "OpenMP Serial Efficiency", t.omp.serial);
      detail::text_row(out, 2, "OpenMP Load Balance", t.omp.load_balance);
      detail::text_row(out, 2, "OpenMP Scheduling Efficiency", t.omp.scheduling);
      if (t.base) {
        out += "Base model (pure MPI)\n";
        detail::text_row(out, 1, "Parallel Efficiency", t.base->parallel_eff);
        detail::text_row(out, 2, "Load Balance", t.base->load_balance);
        detail::text_row(out, 2, "Communication Efficiency", t.base->comm_eff);
      }
      return out;
    case Format::csv:
      out = "metric,value\n";
      for (const auto& [k, v] : flatten(t)) out += k + "," + format_double(v) + "\n";
      return out;
    case Format::json:
      return tree_to_json(t).dump(2) + "\n";
  }
  return out;
}

// --- scaling ------------------------------------------------------------------

inline constexpr std::string_view kScalingCsvHeader =
    "resource,elapsed_s,speedup,ideal_speedup,throughput,instr_scal,ipc_scal,freq_scal,comp_scal,parallel_eff,global_eff";

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline std::string render_scaling_csv(const ScalingReport& report) {
  std::string out(kScalingCsvHeader);
  out += "\n";
  for (const auto& r : report.rows) {
    const auto& s = r.scalability;
    out += std::to_string(r.resource_count) + "," + format_double(r.elapsed_s) + "," + format_double(r.speedup) + "," +
           format_double(r.ideal_speedup) + "," + format_double(r.throughput) + "," +
           detail::opt_cell(s ? std::optional(s->instruction) : std::nullopt) + "," +
           detail::opt_cell(s ? std::optional(s->ipc) : std::nullopt) + "," +
           detail::opt_cell(s ? std::optional(s->frequency) : std::nullopt) + "," +
           detail::opt_cell(s ? std::optional(s->computation) : std::nullopt) + "," +
           detail::opt_cell(r.parallel_eff) + "," + detail::opt_cell(r.global_eff) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json scaling_to_json(const ScalingReport& report) {
  nlohmann::ordered_json j;
  j["throughput_unit"] = report.throughput_unit;
  j["baseline_row"] = report.baseline_row;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    const auto& s = r.scalability;
    nlohmann::ordered_json row;
    row["resource"] = r.resource_count;
    row["elapsed_s"] = r.elapsed_s;
    row["speedup"] = r.speedup;
    row["ideal_speedup"] = r.ideal_speedup;
    row["throughput"] = r.throughput;
    row["ideal_throughput"] = r.ideal_throughput;
    row["instr_scal"] = detail::opt_json(s ? std::optional(s->instruction) : std::nullopt);
    row["ipc_scal"] = detail::opt_json(s ? std::optional(s->ipc) : std::nullopt);
    row["freq_scal"] = detail::opt_json(s ? std::optional(s->frequency) : std::nullopt);
    row["comp_scal"] = detail::opt_json(s ? std::optional(s->computation) : std::nullopt);
    row["parallel_eff"] = detail::opt_json(r.parallel_eff);
    row["global_eff"] = detail::opt_json(r.global_eff);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline std::string render_scaling_text(const ScalingReport& report) {
  std::string out = "resource  elapsed_s     speedup  ideal   throughput";
  if (!report.throughput_unit.empty()) out += " [" + report.throughput_unit + "]";
  out += "\n";
  for (const auto& r : report.rows) {
    auto pad = [](std::string s, std::size_t w) {
      if (s.size() < w) s.insert(0, w - s.size(), ' ');
      return s;
    };
    out += pad(std::to_string(r.resource_count), 8) + pad(format_fixed(r.elapsed_s, 3), 11) +
           pad(format_fixed(r.speedup, 2), 12) + pad(format_fixed(r.ideal_speedup, 2), 7) +
           pad(format_fixed(r.throughput, 3), 13) + "\n";
  }
  return out;
}

/// Whitespace-separated `x y` series for an external plotter.
struct PlotData {
  std::string actual;
  std::string ideal;
};

inline PlotData render_scaling_plotdata(const ScalingReport& report) {
  if (report.rows.empty()) throw Error(ErrorKind::EmptyInput, "scaling report has no rows");
  PlotData d;
  for (const auto& r : report.rows) {
    const auto x = std::to_string(r.resource_count);
    d.actual += x + " " + format_double(r.speedup) + "\n";
    d.ideal += x + " " + format_double(r.ideal_speedup) + "\n";
  }
  return d;
}

inline PlotData render_throughput_plotdata(const ScalingReport& report) {
  if (report.rows.empty()) throw Error(ErrorKind::EmptyInput, "scaling report has no rows");
  PlotData d;
  for (const auto& r : report.rows) {
    const auto x = std::to_string(r.resource_count);
    d.actual += x + " " + format_double(r.throughput) + "\n";
    d.ideal += x + " " + format_double(r.ideal_throughput) + "\n";
  }
  return d;
}

// --- energy -------------------------------------------------------------------

inline nlohmann::ordered_json energy_to_json(const EnergyReport& e) {
  nlohmann::ordered_json j;
  j["avg_node_power_w"] = e.avg_node_power_w;
  j["nodes"] = e.node_count;
  j["focus_time_s"] = e.focus_time_s;
  j["energy_kwh"] = e.energy_kwh;
  j["edp_kwh_s"] = e.edp_kwh_s;
  return j;
}

inline std::string render_energy(const EnergyReport& e, Format format) {
  switch (format) {
    case Format::text:
      return "Average node power   " + format_fixed(e.avg_node_power_w, 2) + " W\n" +
             "Nodes                " + std::to_string(e.node_count) + "\n" +
             "Focus time           " + format_fixed(e.focus_time_s, 2) + " s\n" +
             "Energy               " + format_fixed(e.energy_kwh, 2) + " kWh\n" +
             "EDP                  " + format_fixed(e.edp_kwh_s, 2) + " kWh*s\n";
    case Format::csv:
      return "avg_node_power_w,nodes,focus_time_s,energy_kwh,edp_kwh_s\n" + format_double(e.avg_node_power_w) + "," +
             std::to_string(e.node_count) + "," + format_double(e.focus_time_s) + "," + format_double(e.energy_kwh) +
             "," + format_double(e.edp_kwh_s) + "\n";
    case Format::json:
      return energy_to_json(e).dump(2) + "\n";
  }
  return {};
}

// --- bundle ---------------------------------------------------------------------

struct ReportBundle {
  std::optional<MetricTree> metric_tree;
  std::optional<ScalingReport> scaling_report;
  std::optional<EnergyReport> energy_report;
  std::vector<std::string> inputs;
};

inline nlohmann::ordered_json bundle_to_json(const ReportBundle& b) {
  if (!b.metric_tree && !b.scaling_report && !b.energy_report)
    throw Error(ErrorKind::EmptyInput, "report bundle has no payload");
  nlohmann::ordered_json j;
  j["provenance"] = {{"tool", "hpceff"}, {"version", std::string(kVersion)}, {"inputs", b.inputs}};
  if (b.metric_tree) j["metric_tree"] = tree_to_json(*b.metric_tree);
  if (b.scaling_report) j["scaling"] = scaling_to_json(*b.scaling_report);
  if (b.energy_report) j["energy"] = energy_to_json(*b.energy_report);
  return j;
}

}  // namespace hpceff
