// hpceff: efficiency, scaling, energy and peak analysis of hybrid MPI+OpenMP runs.
//
// Exit codes: 0 success, 2 input/validation error, 3 degenerate computation,
// 4 requested optional data missing (e.g. no power samples).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hpceff/hpceff.hpp"

namespace fs = std::filesystem;
using namespace hpceff;

namespace {

struct Output {
  std::string format = "text";
  std::string out_dir;

  Format fmt() const {
    auto f = parse_format(format);
    if (!f) throw Error(ErrorKind::InvalidArgument, "unknown format '" + format + "' (text|csv|json)");
    return *f;
  }
};

void add_output_options(CLI::App* cmd, Output& o, const std::string& default_format = "text") {
  o.format = default_format;
  cmd->add_option("--format", o.format, "Output format: text, csv or json")
      ->envname("HPCEFF_FORMAT")
      ->capture_default_str();
  cmd->add_option("--out", o.out_dir, "Write output files into this directory instead of stdout")->envname("HPCEFF_OUT");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  f << content;
}

/// Writes to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Output& o, const std::string& name, const std::string& content) {
  if (o.out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(o.out_dir);
  write_file(fs::path(o.out_dir) / name, content);
}

std::string extension(Format f) {
  switch (f) {
    case Format::text: return ".txt";
    case Format::csv: return ".csv";
    case Format::json: return ".json";
  }
  return ".txt";
}

// --- analyze -------------------------------------------------------------------

struct AnalyzeArgs {
  std::string trace;
  Output out;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto fmt = a.out.fmt();
  const Trace trace = load_trace(a.trace);
  const MetricTree tree = analyze(trace);
  emit(a.out, "metrics" + extension(fmt), render_tree(tree, fmt));
  return 0;
}

// --- compare -------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> traces;
  std::string baseline;
  std::string unit;
  double work = 1.0;
  bool plot = false;
  Output out;
};

int cmd_compare(const CompareArgs& a) {
  const auto fmt = a.out.fmt();
  std::vector<std::string> paths = a.traces;
  std::string baseline = a.baseline.empty() ? (paths.empty() ? std::string{} : paths.front()) : a.baseline;
  if (!baseline.empty() && std::find(paths.begin(), paths.end(), baseline) == paths.end()) paths.insert(paths.begin(), baseline);
  if (paths.size() < 2) throw Error(ErrorKind::InvalidArgument, "compare needs at least two traces");

  std::vector<ScalingPoint> points;
  std::size_t baseline_index = 0;
  bool counters_missing = false;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const Trace trace = load_trace(paths[k]);
    const MetricTree tree = analyze(trace);
    points.push_back(scaling_point_from_trace(trace, a.work, tree.hybrid_parallel_eff));
    counters_missing = counters_missing || !points.back().counters;
    if (paths[k] == baseline) baseline_index = k;
  }
  if (counters_missing) {
    std::cerr << "warning: some traces lack hardware counters; scalability columns are NA\n";
    for (auto& p : points) p.counters.reset();
  }

  const ScalingReport report = speedup_and_ideal(points, baseline_index, a.unit);
  const auto& base_row = report.rows[report.baseline_row];
  for (const auto& r : report.rows)
    if (r.resource_count > base_row.resource_count && r.speedup <= 1.0)
      std::cerr << "warning: anomaly at " << r.resource_count << " resources: speedup " << format_fixed(r.speedup, 2)
                << " with " << format_fixed(r.ideal_speedup, 2) << "x the baseline resources\n";

  switch (fmt) {
    case Format::csv: emit(a.out, "scaling.csv", render_scaling_csv(report)); break;
    case Format::json: emit(a.out, "scaling.json", scaling_to_json(report).dump(2) + "\n"); break;
    case Format::text: emit(a.out, "scaling.txt", render_scaling_text(report)); break;
  }
  if (a.plot) {
    if (a.out.out_dir.empty()) throw Error(ErrorKind::InvalidArgument, "--plot requires --out");
    const auto speed = render_scaling_plotdata(report);
    const auto thr = render_throughput_plotdata(report);
    emit(a.out, "speedup.dat", speed.actual);
    emit(a.out, "speedup_ideal.dat", speed.ideal);
    emit(a.out, "throughput.dat", thr.actual);
    emit(a.out, "throughput_ideal.dat", thr.ideal);
  }
  return 0;
}

// --- energy --------------------------------------------------------------------

struct EnergyArgs {
  std::string trace;
  std::string power_csv;
  std::optional<std::int64_t> nodes;
  std::optional<double> focus_seconds;
  std::optional<double> t0;
  std::optional<double> t1;
  Output out;
};

int cmd_energy(const EnergyArgs& a) {
  const auto fmt = a.out.fmt();
  std::optional<Trace> trace;
  if (!a.trace.empty()) trace = load_trace(a.trace);

  std::vector<PowerSample> samples;
  if (!a.power_csv.empty()) {
    try {
      samples = parse_power_csv(read_file(a.power_csv));
    } catch (const Error& e) {
      throw Error(e.kind(), a.power_csv + ": " + e.what());
    }
  } else if (trace && trace->power) {
    samples = *trace->power;
  }
  if (samples.empty()) throw Error(ErrorKind::MissingPowerData, "no power samples (trace has none and no --power-csv)");

  PowerWindow window;
  if (a.t0) window.t0 = *a.t0;
  if (a.t1) window.t1 = *a.t1;
  const AveragePower avg = average_power(samples, window);

  std::int64_t nodes = 0;
  if (a.nodes) nodes = *a.nodes;
  else if (trace) nodes = trace->meta.node_count;
  else nodes = static_cast<std::int64_t>(avg.per_node_w.size());

  double focus = 0.0;
  if (a.focus_seconds) focus = *a.focus_seconds;
  else if (trace) focus = classify(*trace).global.t_total * 1e-6;
  else throw Error(ErrorKind::InvalidArgument, "--focus-seconds is required without a trace");

  emit(a.out, "energy" + extension(fmt), render_energy(energy_and_edp(avg.fleet_w, nodes, focus), fmt));
  return 0;
}

// --- peaks ---------------------------------------------------------------------

struct PeaksArgs {
  bool list = false;
  std::string isa;
  std::string precision = "dp";
  std::optional<int> vector_length;
  std::optional<int> pipelines;
  std::optional<double> ghz;
  std::optional<double> l1_bytes;
  std::optional<int> l1_pipelines;
  std::optional<double> measured;
  std::optional<double> peak;
  Output out;
};

int cmd_peaks(const PeaksArgs& a) {
  const auto fmt = a.out.fmt();
  nlohmann::ordered_json j;
  std::string text, csv;

  if (a.list) {
    auto rows = nlohmann::ordered_json::array();
    text = "isa         V  N  Flop/cycle\n";
    csv = "isa,vector_length,pipelines,flop_per_cycle\n";
    for (const auto& p : kIsaPresets) {
      const auto peak = fpu_peak(p.spec());
      auto name = p.name();
      std::string padded = name;
      padded.resize(10, ' ');
      char line[96];
      std::snprintf(line, sizeof line, "%s %2d %2d %11.0f\n", padded.c_str(), p.vector_length, p.pipelines,
                    peak.flop_per_cycle);
      text += line;
      csv += name + "," + std::to_string(p.vector_length) + "," + std::to_string(p.pipelines) + "," +
             format_double(peak.flop_per_cycle) + "\n";
      rows.push_back({{"isa", name}, {"vector_length", p.vector_length}, {"pipelines", p.pipelines},
                      {"flop_per_cycle", peak.flop_per_cycle}});
    }
    j["presets"] = rows;
  } else if (a.l1_bytes || a.l1_pipelines) {
    if (!a.l1_bytes || !a.l1_pipelines || !a.ghz)
      throw Error(ErrorKind::InvalidArgument, "L1 peak needs --l1-bytes, --l1-pipelines and --ghz");
    const auto bw = l1_peak_bandwidth(*a.l1_bytes, *a.l1_pipelines, *a.ghz);
    j = {{"bytes_per_cycle", bw.bytes_per_cycle}, {"gb_per_s", bw.gb_per_s}};
    text = "L1 peak  " + format_fixed(bw.bytes_per_cycle, 2) + " Byte/cycle  " + format_fixed(bw.gb_per_s, 2) + " GB/s\n";
    csv = "bytes_per_cycle,gb_per_s\n" + format_double(bw.bytes_per_cycle) + "," + format_double(bw.gb_per_s) + "\n";
  } else if (a.measured || a.peak) {
    if (!a.measured || !a.peak) throw Error(ErrorKind::InvalidArgument, "percent of peak needs --measured and --peak");
    const double pct = percent_of_peak(*a.measured, *a.peak);
    j = {{"percent_of_peak", pct}};
    text = "Percent of peak  " + format_fixed(pct, 2) + " %\n";
    csv = "percent_of_peak\n" + format_double(pct) + "\n";
  } else {
    FpuPeakSpec spec;
    std::string name = "custom";
    if (!a.isa.empty()) {
      auto isa = parse_isa(a.isa);
      auto prec = parse_precision(a.precision);
      if (!isa || !prec) throw Error(ErrorKind::InvalidArgument, "unknown ISA/precision '" + a.isa + "." + a.precision + "'");
      const auto preset = *find_preset(*isa, *prec);
      spec = preset.spec();
      name = preset.name();
    } else if (a.vector_length && a.pipelines) {
      spec.vector_length = *a.vector_length;
      spec.pipeline_count = *a.pipelines;
    } else {
      throw Error(ErrorKind::InvalidArgument, "give --list, --isa, --vector-length/--pipelines, --l1-* or --measured/--peak");
    }
    spec.frequency_ghz = a.ghz;
    const auto peak = fpu_peak(spec);
    j = {{"isa", name}, {"flop_per_cycle", peak.flop_per_cycle},
         {"gflops", peak.gflops ? nlohmann::ordered_json(*peak.gflops) : nlohmann::ordered_json(nullptr)}};
    text = name + "  " + format_double(peak.flop_per_cycle) + " Flop/cycle";
    if (peak.gflops) text += "  " + format_fixed(*peak.gflops, 2) + " GFlop/s";
    text += "\n";
    csv = "isa,flop_per_cycle,gflops\n" + name + "," + format_double(peak.flop_per_cycle) + "," +
          (peak.gflops ? format_double(*peak.gflops) : "NA") + "\n";
  }

  switch (fmt) {
    case Format::text: emit(a.out, "peaks.txt", text); break;
    case Format::csv: emit(a.out, "peaks.csv", csv); break;
    case Format::json: emit(a.out, "peaks.json", j.dump(2) + "\n"); break;
  }
  return 0;
}

// --- synth ---------------------------------------------------------------------

struct SynthArgs {
  SynthSpec spec;
  std::optional<double> ipc;
  std::optional<double> counter_ghz;
  std::optional<double> node_power_w;
  std::string name = "synth";
  std::string out_dir;
};

int cmd_synth(SynthArgs a) {
  a.spec.node_power_w = a.node_power_w;
  auto result = generate(a.spec);
  if (a.ipc || a.counter_ghz) {
    if (!a.ipc || !a.counter_ghz) throw Error(ErrorKind::InvalidArgument, "counters need both --ipc and --counter-ghz");
    generate_counters(result.trace, *a.ipc, *a.counter_ghz);
  }
  const std::string doc = serialize_trace(result.trace);
  if (a.out_dir.empty()) {
    std::cout << doc;
    if (result.truth) std::cerr << "note: ground truth is only written with --out\n";
    return 0;
  }
  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / (a.name + ".json"), doc);
  if (result.truth) write_file(fs::path(a.out_dir) / (a.name + ".truth.json"), tree_to_json(*result.truth).dump(2) + "\n");
  return 0;
}

// --- bench ---------------------------------------------------------------------

struct LatencyArgs {
  double mib = 1.0;
  std::size_t stride = 8;
  std::size_t warmup = 1;
  std::size_t traversals = 4;
  double assume_ghz = 3.0;
  bool json = false;
  Output out;
};

int cmd_bench_latency(const LatencyArgs& a) {
  if (!(a.mib > 0)) throw Error(ErrorKind::InvalidArgument, "--mib must be positive");
  const auto elements = static_cast<std::size_t>(a.mib * static_cast<double>(kMiB) / sizeof(std::uint64_t));
  const auto pattern = build_chase(elements, a.stride);
  const auto r = run_latency(pattern, a.warmup, a.traversals, a.assume_ghz);
  const auto fmt = a.json ? Format::json : a.out.fmt();
  std::string doc;
  if (fmt == Format::json) {
    nlohmann::ordered_json j{{"buffer_bytes", elements * sizeof(std::uint64_t)},
                             {"elements", elements},
                             {"stride", a.stride},
                             {"warmup", a.warmup},
                             {"traversals", a.traversals},
                             {"latency_us", r.avg_access_latency_us},
                             {"latency_cycles", r.latency_cycles},
                             {"assumed_ghz", a.assume_ghz}};
    doc = j.dump(2) + "\n";
  } else if (fmt == Format::csv) {
    doc = "buffer_bytes,stride,latency_us,latency_cycles\n" + std::to_string(elements * 8) + "," +
          std::to_string(a.stride) + "," + format_double(r.avg_access_latency_us) + "," +
          format_double(r.latency_cycles) + "\n";
  } else {
    doc = "buffer      " + std::to_string(elements * 8) + " B (" + std::to_string(elements) + " elements)\n" +
          "stride      " + std::to_string(a.stride) + "\n" + "latency     " +
          format_fixed(r.avg_access_latency_us * 1e3, 3) + " ns\n" + "cycles      " + format_fixed(r.latency_cycles, 2) +
          " @ " + format_fixed(a.assume_ghz, 2) + " GHz\n";
  }
  emit(a.out, "latency" + extension(fmt), doc);
  return 0;
}

struct CopyArgs {
  std::size_t threads = 1;
  std::optional<std::size_t> mib;
  std::string bind = "close";
  std::size_t iters = 10;
  bool json = false;
  Output out;
};

int cmd_bench_copy(const CopyArgs& a) {
  auto binding = parse_binding(a.bind);
  if (!binding) throw Error(ErrorKind::InvalidArgument, "--bind must be close or spread");
  const std::size_t mib = a.mib.value_or(default_copy_mib(a.threads));
  const auto r = run_copy_bandwidth(a.threads, mib, *binding, a.iters);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  const auto fmt = a.json ? Format::json : a.out.fmt();
  std::string doc;
  if (fmt == Format::json) {
    nlohmann::ordered_json j{{"threads", r.threads},
                             {"buffer_mib", mib},
                             {"binding", std::string(to_string(*binding))},
                             {"binding_applied", r.binding_applied},
                             {"iterations", r.iterations},
                             {"bytes_moved", r.bytes_moved},
                             {"elapsed_s", r.elapsed_s},
                             {"aggregate_gb_per_s", r.aggregate_gb_per_s},
                             {"per_thread_gb_per_s", r.per_thread_gb_per_s},
                             {"balance", r.balance}};
    doc = j.dump(2) + "\n";
  } else if (fmt == Format::csv) {
    doc = "thread,gb_per_s\n";
    for (std::size_t t = 0; t < r.per_thread_gb_per_s.size(); ++t)
      doc += std::to_string(t) + "," + format_double(r.per_thread_gb_per_s[t]) + "\n";
    doc += "all," + format_double(r.aggregate_gb_per_s) + "\n";
  } else {
    doc = "threads     " + std::to_string(r.threads) + " (" + std::string(to_string(*binding)) +
          (r.binding_applied ? "" : ", unbound") + ")\n" + "buffer      " + std::to_string(mib) +
          " MiB per thread\n" + "moved       " + std::to_string(r.bytes_moved) + " B in " +
          format_fixed(r.elapsed_s, 4) + " s\n" + "aggregate   " + format_fixed(r.aggregate_gb_per_s, 2) + " GB/s\n" +
          "balance     " + format_fixed(r.balance, 2) + "\n";
  }
  emit(a.out, "copy" + extension(fmt), doc);
  return 0;
}

// --- report --------------------------------------------------------------------

struct ReportArgs {
  std::string tree;
  Output out;
};

int cmd_report(const ReportArgs& a) {
  const auto fmt = a.out.fmt();
  std::string text = read_file(a.tree);
  MetricTree tree;
  try {
    tree = parse_tree_json(text);
  } catch (const Error& e) {
    throw Error(e.kind(), a.tree + ": " + e.what());
  }
  emit(a.out, "metrics" + extension(fmt), render_tree(tree, fmt));
  return 0;
}

bool wants_json(int argc, char** argv) {
  for (int k = 1; k < argc; ++k) {
    std::string_view arg(argv[k]);
    if (arg == "--json" || arg == "--format=json") return true;
    if (arg == "--format" && k + 1 < argc && std::string_view(argv[k + 1]) == "json") return true;
  }
  const char* env = std::getenv("HPCEFF_FORMAT");
  return env != nullptr && std::string_view(env) == "json";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hpceff: hybrid MPI+OpenMP efficiency, scaling, energy and peak analysis.\n"
               "Option precedence: command-line flags > HPCEFF_* environment > defaults."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute the efficiency metric tree of a trace");
  analyze_cmd->add_option("trace", analyze_args.trace, "Trace JSON file")->required();
  add_output_options(analyze_cmd, analyze_args.out);

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "Scaling report of several traces against a baseline");
  compare_cmd->add_option("traces", compare_args.traces, "Trace JSON files")->required();
  compare_cmd->add_option("--baseline", compare_args.baseline, "Baseline trace (default: first trace)");
  compare_cmd->add_option("--throughput-unit", compare_args.unit, "Label of the throughput unit");
  compare_cmd->add_option("--work", compare_args.work, "Work units done by each run (throughput = work / elapsed)")
      ->capture_default_str();
  compare_cmd->add_flag("--plot", compare_args.plot, "Also write x/y plot data files (needs --out)");
  add_output_options(compare_cmd, compare_args.out, "csv");

  EnergyArgs energy_args;
  auto* energy_cmd = app.add_subcommand("energy", "Energy and energy-delay product from power samples");
  energy_cmd->add_option("trace", energy_args.trace, "Trace JSON file (optional with --power-csv)");
  energy_cmd->add_option("--power-csv", energy_args.power_csv, "CSV with header t_s,node,dc_w,pck_w,dram_w");
  energy_cmd->add_option("--nodes", energy_args.nodes, "Node count (default: trace meta or distinct CSV nodes)");
  energy_cmd->add_option("--focus-seconds", energy_args.focus_seconds, "Focus-of-analysis time in seconds");
  energy_cmd->add_option("--t0", energy_args.t0, "Power averaging window start (s)");
  energy_cmd->add_option("--t1", energy_args.t1, "Power averaging window end (s)");
  add_output_options(energy_cmd, energy_args.out);

  PeaksArgs peaks_args;
  auto* peaks_cmd = app.add_subcommand("peaks", "Theoretical peak calculators");
  peaks_cmd->add_flag("--list", peaks_args.list, "List the built-in ISA presets");
  peaks_cmd->add_option("--isa", peaks_args.isa, "x86, avx2 or avx512");
  peaks_cmd->add_option("--precision", peaks_args.precision, "sp or dp")->capture_default_str();
  peaks_cmd->add_option("--vector-length", peaks_args.vector_length, "Custom SIMD vector length");
  peaks_cmd->add_option("--pipelines", peaks_args.pipelines, "Custom FMA pipeline count");
  peaks_cmd->add_option("--ghz", peaks_args.ghz, "Core frequency in GHz");
  peaks_cmd->add_option("--l1-bytes", peaks_args.l1_bytes, "Bytes per load/store instruction");
  peaks_cmd->add_option("--l1-pipelines", peaks_args.l1_pipelines, "Load or store pipelines");
  peaks_cmd->add_option("--measured", peaks_args.measured, "Measured value for percent of peak");
  peaks_cmd->add_option("--peak", peaks_args.peak, "Peak value for percent of peak");
  add_output_options(peaks_cmd, peaks_args.out);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trace with known metrics");
  auto& sp = synth_args.spec;
  synth_cmd->add_option("--nodes", sp.nodes)->capture_default_str();
  synth_cmd->add_option("--processes", sp.processes)->capture_default_str();
  synth_cmd->add_option("--threads", sp.threads_per_process)->capture_default_str();
  synth_cmd->add_option("--regions", sp.regions)->capture_default_str();
  synth_cmd->add_option("--base-useful-us", sp.base_useful, "Per-thread time budget (us)")->capture_default_str();
  synth_cmd->add_option("--mpi-fraction", sp.mpi_fraction)->capture_default_str();
  synth_cmd->add_option("--mpi-imbalance", sp.mpi_imbalance, "Extra MPI fraction on the last rank")->capture_default_str();
  synth_cmd->add_option("--serial-idle-fraction", sp.serial_idle_fraction)->capture_default_str();
  synth_cmd->add_option("--region-imbalance", sp.region_imbalance)->capture_default_str();
  synth_cmd->add_option("--sched-idle-us", sp.sched_idle, "Idle per region on every thread (us)")->capture_default_str();
  synth_cmd->add_option("--jitter", sp.jitter)->capture_default_str();
  synth_cmd->add_option("--seed", sp.seed)->capture_default_str();
  synth_cmd->add_option("--app", sp.app_name)->capture_default_str();
  synth_cmd->add_option("--ipc", synth_args.ipc, "Add counters at this IPC");
  synth_cmd->add_option("--counter-ghz", synth_args.counter_ghz, "Add counters at this frequency");
  synth_cmd->add_option("--node-power-w", synth_args.node_power_w, "Add constant DC power samples");
  synth_cmd->add_option("--name", synth_args.name, "Base file name")->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out_dir, "Output directory")->envname("HPCEFF_OUT");

  auto* bench_cmd = app.add_subcommand("bench", "Desk-scale memory micro-benchmarks");
  bench_cmd->require_subcommand(1);
  LatencyArgs latency_args;
  auto* latency_cmd = bench_cmd->add_subcommand("latency", "Pointer-chase latency");
  latency_cmd->add_option("--mib", latency_args.mib, "Buffer size in MiB (fractions allowed)")->capture_default_str();
  latency_cmd->add_option("--stride", latency_args.stride, "Stride in 64-bit elements")->capture_default_str();
  latency_cmd->add_option("--warmup", latency_args.warmup, "Warm-up traversals")->capture_default_str();
  latency_cmd->add_option("--traversals", latency_args.traversals, "Timed traversals")->capture_default_str();
  latency_cmd->add_option("--assume-ghz", latency_args.assume_ghz, "Frequency for the cycle conversion")
      ->capture_default_str();
  latency_cmd->add_flag("--json", latency_args.json, "Machine-readable output");
  add_output_options(latency_cmd, latency_args.out);

  CopyArgs copy_args;
  auto* copy_cmd = bench_cmd->add_subcommand("copy", "Multi-threaded copy bandwidth");
  copy_cmd->add_option("--threads", copy_args.threads)->capture_default_str();
  copy_cmd->add_option("--mib", copy_args.mib, "Array size per thread in MiB (default: 3x LLC over all threads)");
  copy_cmd->add_option("--bind", copy_args.bind, "close or spread")->capture_default_str();
  copy_cmd->add_option("--iters", copy_args.iters)->capture_default_str();
  copy_cmd->add_flag("--json", copy_args.json, "Machine-readable output");
  add_output_options(copy_cmd, copy_args.out);

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Re-render a metric tree JSON document");
  report_cmd->add_option("--tree", report_args.tree, "Metric tree JSON")->required();
  add_output_options(report_cmd, report_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_args);
    if (*compare_cmd) return cmd_compare(compare_args);
    if (*energy_cmd) return cmd_energy(energy_args);
    if (*peaks_cmd) return cmd_peaks(peaks_args);
    if (*synth_cmd) return cmd_synth(synth_args);
    if (*latency_cmd) return cmd_bench_latency(latency_args);
    if (*copy_cmd) return cmd_bench_copy(copy_args);
    if (*report_cmd) return cmd_report(report_args);
  } catch (const Error& e) {
    if (wants_json(argc, argv)) {
      nlohmann::ordered_json j{{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
      std::cout << j.dump(2) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
