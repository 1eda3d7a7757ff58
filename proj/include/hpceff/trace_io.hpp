/**
 * @file trace_io.hpp
 * @brief Trace JSON documents and EAR-like power CSV files.
 *
 * Trace schema (unknown keys are rejected, `region_idle_us` is positional):
 *
 *   {"meta": {"app", "nodes", "processes", "threads_per_process", "regions",
 *             "nominal_freq_hz"},
 *    "processes": [{"rank", "threads": [{"tid", "useful_us", "mpi_us",
 *                   "idle_us", "region_idle_us", "cycles", "instructions"}]}],
 *    "power": [{"t_s", "node", "dc_w", "pck_w", "dram_w"}] | null}
 */
#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hpceff/error.hpp"
#include "hpceff/format.hpp"
#include "hpceff/trace.hpp"

namespace hpceff {

namespace detail {

using ojson = nlohmann::ordered_json;

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                                std::string_view context) {
  if (!obj.is_object()) throw Error(ErrorKind::Parse, std::string(context) + " must be an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (auto key : allowed) ok = ok || item.key() == key;
    if (!ok) throw Error(ErrorKind::Parse, "unknown key '" + item.key() + "' in " + std::string(context));
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::Parse, "missing key '" + std::string(key) + "' in " + std::string(context));
  return *it;
}

inline std::int64_t get_int(const nlohmann::json& obj, const char* key, std::string_view context) {
  const auto& v = require(obj, key, context);
  if (!v.is_number_integer())
    throw Error(ErrorKind::Parse, "'" + std::string(key) + "' in " + std::string(context) + " must be an integer");
  return v.get<std::int64_t>();
}

inline double get_number(const nlohmann::json& obj, const char* key, std::string_view context) {
  const auto& v = require(obj, key, context);
  if (!v.is_number()) throw Error(ErrorKind::Parse, "'" + std::string(key) + "' in " + std::string(context) + " must be a number");
  return v.get<double>();
}

inline std::optional<std::int64_t> get_opt_int(const nlohmann::json& obj, const char* key, std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer())
    throw Error(ErrorKind::Parse, "'" + std::string(key) + "' in " + std::string(context) + " must be an integer or null");
  return it->get<std::int64_t>();
}

inline PowerSample power_sample_from_json(const nlohmann::json& j, std::string_view ctx) {
  reject_unknown_keys(j, {"t_s", "node", "dc_w", "pck_w", "dram_w"}, ctx);
  PowerSample s;
  s.t_s = get_number(j, "t_s", ctx);
  s.node_id = get_int(j, "node", ctx);
  s.dc_w = get_number(j, "dc_w", ctx);
  s.pck_w = get_number(j, "pck_w", ctx);
  s.dram_w = get_number(j, "dram_w", ctx);
  return s;
}

}  // namespace detail

/// Builds a Trace from a parsed JSON document. Does not validate invariants.
inline Trace trace_from_json(const nlohmann::json& doc) {
  using namespace detail;
  reject_unknown_keys(doc, {"meta", "processes", "power"}, "trace");

  Trace trace;
  const auto& meta = require(doc, "meta", "trace");
  reject_unknown_keys(meta, {"app", "nodes", "processes", "threads_per_process", "regions", "nominal_freq_hz"}, "meta");
  const auto& app = require(meta, "app", "meta");
  if (!app.is_string()) throw Error(ErrorKind::Parse, "'app' in meta must be a string");
  trace.meta.app_name = app.get<std::string>();
  trace.meta.node_count = get_int(meta, "nodes", "meta");
  trace.meta.process_count = get_int(meta, "processes", "meta");
  trace.meta.threads_per_process = get_int(meta, "threads_per_process", "meta");
  trace.meta.region_count = get_int(meta, "regions", "meta");
  if (auto it = meta.find("nominal_freq_hz"); it != meta.end() && !it->is_null()) {
    if (!it->is_number()) throw Error(ErrorKind::Parse, "'nominal_freq_hz' must be a number or null");
    trace.meta.nominal_frequency_hz = it->get<double>();
  }

  const auto& procs = require(doc, "processes", "trace");
  if (!procs.is_array()) throw Error(ErrorKind::Parse, "'processes' must be an array");
  for (std::size_t i = 0; i < procs.size(); ++i) {
    const std::string pctx = "processes[" + std::to_string(i) + "]";
    const auto& pj = procs[i];
    reject_unknown_keys(pj, {"rank", "threads"}, pctx);
    ProcessTimeline proc;
    proc.rank = get_int(pj, "rank", pctx);
    const auto& threads = require(pj, "threads", pctx);
    if (!threads.is_array()) throw Error(ErrorKind::Parse, pctx + ".threads must be an array");
    for (std::size_t j = 0; j < threads.size(); ++j) {
      const std::string tctx = pctx + ".threads[" + std::to_string(j) + "]";
      const auto& tj = threads[j];
      reject_unknown_keys(tj, {"tid", "useful_us", "mpi_us", "idle_us", "region_idle_us", "cycles", "instructions"}, tctx);
      ThreadTimeline t;
      t.thread_id = get_int(tj, "tid", tctx);
      t.useful_us = get_int(tj, "useful_us", tctx);
      t.mpi_us = get_int(tj, "mpi_us", tctx);
      t.idle_us = get_int(tj, "idle_us", tctx);
      const auto& regions = require(tj, "region_idle_us", tctx);
      if (!regions.is_array()) throw Error(ErrorKind::Parse, tctx + ".region_idle_us must be an array");
      for (std::size_t p = 0; p < regions.size(); ++p) {
        if (!regions[p].is_number_integer())
          throw Error(ErrorKind::Parse, tctx + ".region_idle_us must contain integers");
        t.region_idle.push_back({static_cast<std::int64_t>(p), regions[p].get<std::int64_t>()});
      }
      auto cycles = get_opt_int(tj, "cycles", tctx);
      auto instructions = get_opt_int(tj, "instructions", tctx);
      if (cycles.has_value() != instructions.has_value())
        throw Error(ErrorKind::Parse, tctx + " must give both cycles and instructions, or neither");
      if (cycles) t.counters = CounterSample{*cycles, *instructions};
      proc.threads.push_back(std::move(t));
    }
    trace.processes.push_back(std::move(proc));
  }

  if (auto it = doc.find("power"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(ErrorKind::Parse, "'power' must be an array or null");
    std::vector<PowerSample> samples;
    for (std::size_t k = 0; k < it->size(); ++k)
      samples.push_back(power_sample_from_json((*it)[k], "power[" + std::to_string(k) + "]"));
    trace.power = std::move(samples);
  }
  return trace;
}

inline nlohmann::ordered_json trace_to_json(const Trace& trace) {
  detail::ojson doc;
  auto& meta = doc["meta"];
  meta["app"] = trace.meta.app_name;
  meta["nodes"] = trace.meta.node_count;
  meta["processes"] = trace.meta.process_count;
  meta["threads_per_process"] = trace.meta.threads_per_process;
  meta["regions"] = trace.meta.region_count;
  meta["nominal_freq_hz"] = trace.meta.nominal_frequency_hz ? detail::ojson(*trace.meta.nominal_frequency_hz) : nullptr;

  auto procs = detail::ojson::array();
  for (const auto& p : trace.processes) {
    detail::ojson pj;
    pj["rank"] = p.rank;
    auto threads = detail::ojson::array();
    for (const auto& t : p.threads) {
      detail::ojson tj;
      tj["tid"] = t.thread_id;
      tj["useful_us"] = t.useful_us;
      tj["mpi_us"] = t.mpi_us;
      tj["idle_us"] = t.idle_us;
      // positional: slot = region id
      std::vector<Micros> regions(t.region_idle.size(), 0);
      for (const auto& r : t.region_idle)
        if (r.region_id >= 0 && static_cast<std::size_t>(r.region_id) < regions.size())
          regions[static_cast<std::size_t>(r.region_id)] = r.idle_us;
      tj["region_idle_us"] = regions;
      tj["cycles"] = t.counters ? detail::ojson(t.counters->cycles) : nullptr;
      tj["instructions"] = t.counters ? detail::ojson(t.counters->instructions) : nullptr;
      threads.push_back(std::move(tj));
    }
    pj["threads"] = std::move(threads);
    procs.push_back(std::move(pj));
  }
  doc["processes"] = std::move(procs);

  if (trace.power) {
    auto power = detail::ojson::array();
    for (const auto& s : *trace.power)
      power.push_back({{"t_s", s.t_s}, {"node", s.node_id}, {"dc_w", s.dc_w}, {"pck_w", s.pck_w}, {"dram_w", s.dram_w}});
    doc["power"] = std::move(power);
  } else {
    doc["power"] = nullptr;
  }
  return doc;
}

/// Parses and validates a trace document.
inline Trace parse_trace(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  Trace trace = trace_from_json(doc);
  validate_trace(trace);
  return trace;
}

inline std::string serialize_trace(const Trace& trace) { return trace_to_json(trace).dump(1) + "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Trace load_trace(const std::string& path) {
  try {
    return parse_trace(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + std::string(e.what()));
  }
}

// --- power CSV --------------------------------------------------------------

inline constexpr std::string_view kPowerCsvHeader = "t_s,node,dc_w,pck_w,dram_w";

inline std::vector<PowerSample> parse_power_csv(std::string_view text) {
  std::vector<PowerSample> samples;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kPowerCsvHeader)
        throw Error(ErrorKind::Parse, "power CSV header must be '" + std::string(kPowerCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    double fields[5];
    std::size_t n = 0;
    while (n < 5) {
      auto comma = line.find(',');
      auto cell = line.substr(0, comma);
      if (!parse_double(cell, fields[n]))
        throw Error(ErrorKind::Parse, "power CSV line " + std::to_string(line_no) + ": bad number '" +
                                          std::string(cell) + "'");
      ++n;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
      if (n == 5) throw Error(ErrorKind::Parse, "power CSV line " + std::to_string(line_no) + ": too many fields");
    }
    if (n != 5) throw Error(ErrorKind::Parse, "power CSV line " + std::to_string(line_no) + ": expected 5 fields");
    if (fields[1] != static_cast<double>(static_cast<std::int64_t>(fields[1])))
      throw Error(ErrorKind::Parse, "power CSV line " + std::to_string(line_no) + ": node must be an integer");
    PowerSample s{fields[0], static_cast<std::int64_t>(fields[1]), fields[2], fields[3], fields[4]};
    if (s.t_s < 0 || s.node_id < 0 || s.dc_w < 0 || s.pck_w < 0 || s.dram_w < 0)
      throw Error(ErrorKind::Parse, "power CSV line " + std::to_string(line_no) + ": negative value");
    samples.push_back(s);
  }
  if (!header_seen) throw Error(ErrorKind::Parse, "power CSV is empty");
  return samples;
}

inline std::string write_power_csv(const std::vector<PowerSample>& samples) {
  std::string out(kPowerCsvHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += format_double(s.t_s) + ',' + std::to_string(s.node_id) + ',' + format_double(s.dc_w) + ',' +
           format_double(s.pck_w) + ',' + format_double(s.dram_w) + '\n';
  }
  return out;
}

}  // namespace hpceff
