// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>

#include "json.hpp"
#include "turbomor/analysis/moments.hpp"
#include "turbomor/analysis/passivity.hpp"
#include "turbomor/analysis/transfer.hpp"
#include "turbomor/analysis/transient.hpp"
#include "turbomor/analysis/waveform.hpp"
#include "turbomor/generators/networks.hpp"
#include "turbomor/ingest/bundle.hpp"
#include "turbomor/ingest/netlist.hpp"
#include "turbomor/partition/nested_dissection.hpp"
#include "turbomor/partition/partitioned_reduce.hpp"
#include "turbomor/prima/prima.hpp"
#include "turbomor/reduce/export.hpp"
#include "turbomor/reduce/turbomor.hpp"
#include "turbomor_cli/cli.hpp"

namespace turbomor::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_input;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
}

void check_input(const InputSpec& in) {
  if (in.netlist.empty() == in.bundle.empty()) throw UsageError("give exactly one of --netlist and --bundle");
}

json to_json(const InputSpec& in) {
  return in.netlist.empty() ? json{{"bundle", in.bundle}} : json{{"netlist", in.netlist}};
}

json to_json(const ReductionOptions& o) {
  return {{"pivot_tolerance", o.pivot_tolerance},
          {"symmetry_tolerance", o.symmetry_tolerance},
          {"promotion_limit", o.promotion_limit},
          {"deflation_tolerance", o.deflation_tolerance},
          {"ordering", o.ordering == Ordering::natural ? "natural" : "fill-reducing"},
          {"panel_width", o.panel_width}};
}

DescriptorSystem load_system(const InputSpec& in, std::ostream& err) {
  check_input(in);
  if (!in.netlist.empty()) {
    std::vector<std::string> warnings;
    DescriptorSystem sys = stamp(read_netlist_file(in.netlist), &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    return sys;
  }
  return load_matrix_bundle(BundlePaths::discover(in.bundle));
}

void write_json(const std::string& path, const json& j) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << std::setw(2) << j << "\n";
}

json envelope(const std::string& command, json config, json result) {
  return {{"schema_version", kReportSchemaVersion},
          {"command", command},
          {"config", std::move(config)},
          {"result", std::move(result)}};
}

json to_json(const ReductionReport& r) {
  json iterations = json::array();
  for (const auto& it : r.iterations)
    iterations.push_back({{"iteration", it.iteration},
                          {"width", it.width},
                          {"interior", it.interior},
                          {"fill_in", it.fill_in},
                          {"seconds", it.seconds}});
  return {{"moments_matched", r.moments_matched},
          {"promoted_row_count", r.promoted_row_count},
          {"promoted", r.promoted},
          {"iterations", iterations},
          {"timings", r.timings},
          {"truncated", r.truncated},
          {"partitions", r.partitions},
          {"pass_through", r.pass_through},
          {"deflated_columns", r.deflated_columns},
          {"notes", r.notes}};
}

std::pair<ReducedModel, ReductionReport> reduce_system(const DescriptorSystem& sys, const std::string& method, int q,
                                                       bool partition, Index leaf_size, const std::string& perm_file,
                                                       const ReductionOptions& options) {
  if (method == "prima") {
    if (partition) throw UsageError("--partition applies to the turbomor method only");
    return prima_reduce(sys, q, options);
  }
  if (method != "turbomor") throw UsageError("unknown method '" + method + "'");
  if (!perm_file.empty()) return reduce_partitioned(sys, q, read_permutation_file(perm_file, sys.node_labels), options);
  if (partition) return reduce_partitioned(sys, q, leaf_size, options);
  return turbomor_reduce(sys, q, options);
}

std::vector<std::string> port_names(const DescriptorSystem& sys) {
  return {sys.node_labels.begin(), sys.node_labels.begin() + sys.port_count()};
}

TransientBackend backend_from(const std::string& name) {
  if (name == "auto") return TransientBackend::automatic;
  if (name == "sparse") return TransientBackend::sparse;
  if (name == "dense") return TransientBackend::dense;
  if (name == "block") return TransientBackend::block_tridiagonal;
  throw UsageError("unknown backend '" + name + "'");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_reduce(const ReduceConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.q < 1) throw UsageError("--q must be at least 1");
    if (cfg.format != "bundle" && cfg.format != "netlist") throw UsageError("--format is bundle or netlist");
    const DescriptorSystem sys = load_system(cfg.input, err);
    const auto t0 = Clock::now();
    auto [rom, report] = reduce_system(sys, cfg.method, cfg.q, cfg.partition, cfg.leaf_size, cfg.perm_file, cfg.options);
    const double seconds = elapsed(t0);
    export_rom(rom, cfg.format == "netlist" ? RomFormat::netlist : RomFormat::bundle, cfg.out);

    json config = {{"input", to_json(cfg.input)},
                   {"method", cfg.method},
                   {"q", cfg.q},
                   {"partition", cfg.partition || !cfg.perm_file.empty()},
                   {"leaf_size", cfg.leaf_size},
                   {"perm_file", cfg.perm_file},
                   {"options", to_json(cfg.options)},
                   {"out", cfg.out},
                   {"format", cfg.format}};
    json result = to_json(report);
    result["method"] = rom.method;
    result["m"] = sys.order();
    result["p"] = sys.port_count();
    result["order"] = rom.order();
    result["p_eff"] = rom.p_eff;
    result["nnz_g"] = rom.g.nonZeros();
    result["nnz_c"] = rom.c.nonZeros();
    result["reduce_seconds"] = seconds;
    const std::string report_path =
        !cfg.report.empty() ? cfg.report : cfg.format == "bundle" ? (fs::path(cfg.out) / "report.json").string()
                                                                  : cfg.out + ".report.json";
    write_json(report_path, envelope("reduce", config, result));

    out << rom.method << " q=" << cfg.q << ": m=" << sys.order() << " p=" << sys.port_count()
        << " -> order " << rom.order() << " in " << std::setprecision(3) << seconds << " s";
    if (report.partitions > 1) out << ", " << report.partitions << " partitions";
    if (report.promoted_row_count > 0) out << ", " << report.promoted_row_count << " promoted rows";
    out << "\n";
    for (const auto& n : report.notes) out << "note: " << n << "\n";
    return static_cast<int>(exit_ok);
  });
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.rom.empty()) throw UsageError("--rom is required");
    if (cfg.moments < 0) throw UsageError("--moments must be non-negative");
    const DescriptorSystem sys = load_system(cfg.input, err);
    const ReducedModel rom = load_rom(cfg.rom);
    if (rom.p != sys.port_count())
      throw DimensionMismatch("model has " + std::to_string(rom.p) + " ports, original has " +
                              std::to_string(sys.port_count()));

    int moments = cfg.moments;
    if (moments == 0 && cfg.freq.empty() && !cfg.passivity) moments = 2 * std::max(rom.q, 1);

    bool pass = true;
    json result = json::object();
    if (moments > 0) {
      const auto errors = moment_errors(moments_direct(sys, moments), moments_direct(rom, moments));
      json rows = json::array();
      for (std::size_t k = 0; k < errors.size(); ++k) {
        const bool ok = errors[k] <= cfg.moment_tol;
        pass = pass && ok;
        rows.push_back({{"k", k}, {"relative_error", errors[k]}, {"pass", ok}});
        out << "moment M_" << k << ": relative error " << std::scientific << std::setprecision(3) << errors[k]
            << (ok ? "  ok" : "  FAIL") << "\n";
      }
      result["moments"] = rows;
    }
    if (!cfg.freq.empty()) {
      const auto s = frequency_samples(cfg.freq);
      const auto errors = transfer_errors(transfer_eval(sys, s), transfer_eval(rom, s));
      json rows = json::array();
      for (std::size_t i = 0; i < errors.size(); ++i) {
        const bool ok = errors[i] <= cfg.freq_tol;
        pass = pass && ok;
        rows.push_back({{"hz", cfg.freq[i]}, {"relative_error", errors[i]}, {"pass", ok}});
        out << "H(j2pi " << std::scientific << std::setprecision(3) << cfg.freq[i] << " Hz): relative error "
            << errors[i] << (ok ? "  ok" : "  FAIL") << "\n";
      }
      result["frequency"] = rows;
    }
    if (cfg.passivity) {
      PassivityOptions popt;
      popt.tolerance = cfg.passivity_tol;
      const PassivityReport r = passivity_check(rom, popt);
      pass = pass && r.passed;
      auto check = [](const MatrixCheck& m) {
        return json{{"symmetric", m.symmetric},
                    {"nonnegative", m.nonnegative},
                    {"asymmetry", m.asymmetry},
                    {"norm", m.norm},
                    {"min_value", m.min_value},
                    {"method", m.method},
                    {"witness_index", m.witness_index}};
      };
      result["passivity"] = {{"pass", r.passed}, {"g", check(r.g)}, {"c", check(r.c)}};
      for (const auto& [name, m] : {std::pair{"G", &r.g}, std::pair{"C", &r.c}}) {
        out << "passivity " << name << ": min " << std::scientific << std::setprecision(3) << m->min_value
            << " (norm " << m->norm << ", " << m->method << ")";
        if (!(m->symmetric && m->nonnegative)) out << "  FAIL witness row " << m->witness_index;
        else out << "  ok";
        out << "\n";
      }
    }
    result["pass"] = pass;
    json config = {{"input", to_json(cfg.input)},
                   {"rom", cfg.rom},
                   {"moments", moments},
                   {"freq", cfg.freq},
                   {"freq_tol", cfg.freq_tol},
                   {"moment_tol", cfg.moment_tol},
                   {"passivity", cfg.passivity},
                   {"passivity_tol", cfg.passivity_tol}};
    const std::string report_path = cfg.report.empty() ? (fs::path(cfg.rom) / "verify.json").string() : cfg.report;
    write_json(report_path, envelope("verify", config, result));
    out << (pass ? "verify: pass" : "verify: FAIL") << "\n";
    return static_cast<int>(pass ? exit_ok : exit_verify_failed);
  });
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(cfg.dt > 0.0)) throw UsageError("--dt must be positive");
    if (!(cfg.t_end > 0.0)) throw UsageError("--t-end must be positive");
    const bool have_input = !cfg.input.netlist.empty() || !cfg.input.bundle.empty();
    if (have_input == !cfg.rom.empty()) throw UsageError("give exactly one of --netlist, --bundle and --rom");
    if (cfg.waveform.empty() == (cfg.step == 0.0)) throw UsageError("give exactly one of --waveform and --step");
    const TransientBackend backend = backend_from(cfg.backend);

    ReducedModel rom;
    DescriptorSystem sys;
    if (have_input) sys = load_system(cfg.input, err);
    else rom = load_rom(cfg.rom);
    const Index p = have_input ? sys.port_count() : rom.p;

    std::vector<PwlSource> sources;
    if (!cfg.waveform.empty()) {
      sources = read_pwl_csv_file(cfg.waveform);
      if (static_cast<Index>(sources.size()) != p)
        throw DimensionMismatch("waveform has " + std::to_string(sources.size()) + " columns, model has " +
                                std::to_string(p) + " ports");
    } else {
      sources.assign(static_cast<std::size_t>(p), PwlSource::step(cfg.step, 0.0, cfg.rise));
    }

    TransientOptions topt;
    topt.backend = backend;
    const TransientResult res = have_input ? transient_sim(sys, sources, cfg.t_end, cfg.dt, topt)
                                           : transient_sim(rom, sources, cfg.t_end, cfg.dt, topt);
    const std::vector<std::string> names =
        have_input ? port_names(sys) : std::vector<std::string>(rom.labels.begin(), rom.labels.begin() + rom.p);
    write_waveform_csv_file(cfg.out, res, names);
    out << "simulated " << res.time.size() << " points (" << res.backend << "), wrote " << cfg.out << "\n";

    if (!cfg.reference.empty()) {
      const TransientResult ref = read_waveform_csv_file(cfg.reference);
      const ErrorMetrics m = error_metrics(ref, res);
      json config = {{"model", have_input ? to_json(cfg.input) : json{{"rom", cfg.rom}}},
                     {"waveform", cfg.waveform},
                     {"step", cfg.step},
                     {"rise", cfg.rise},
                     {"t_end", cfg.t_end},
                     {"dt", cfg.dt},
                     {"backend", res.backend},
                     {"reference", cfg.reference}};
      json result = {{"global_max", m.global_max},
                     {"rms", m.rms},
                     {"max_abs", m.max_abs},
                     {"factor_seconds", res.factor_seconds},
                     {"step_seconds", res.step_seconds}};
      const std::string path = cfg.metrics.empty() ? cfg.out + ".metrics.json" : cfg.metrics;
      write_json(path, envelope("simulate", config, result));
      out << "max error " << std::scientific << std::setprecision(3) << m.global_max << ", rms " << m.rms << "\n";
    }
    return static_cast<int>(exit_ok);
  });
}

// ---------------------------------------------------------------------------

namespace {

DescriptorSystem build_example(const BenchExample& ex) {
  if (ex.kind == "bus") {
    BusOptions o;
    o.lines = ex.lines;
    o.segments = ex.segments;
    return stamp(generate_bus(o));
  }
  if (ex.kind == "mesh") {
    MeshOptions o;
    o.rows = ex.rows;
    o.cols = ex.cols;
    o.ports = ex.ports;
    o.pads = ex.pads;
    o.seed = ex.seed;
    return stamp(generate_mesh(o));
  }
  if (ex.kind == "netlist") return stamp(read_netlist_file(ex.path));
  if (ex.kind == "bundle") return load_matrix_bundle(BundlePaths::discover(ex.path));
  throw UsageError("unknown example kind '" + ex.kind + "'");
}

BenchRow run_cell(const BenchConfig& cfg, const BenchExample& ex, const DescriptorSystem& sys,
                  const std::string& method, int q) {
  BenchRow row;
  row.example = ex.name;
  row.method = method;
  row.q = q;
  row.m = sys.order();
  row.p = sys.port_count();
  try {
    const bool partition = method == "turbomor-partitioned";
    const std::string base = partition ? "turbomor" : method;
    std::vector<double> times;
    ReducedModel rom;
    for (int r = 0; r < std::max(cfg.repeats, 1); ++r) {
      const auto t0 = Clock::now();
      auto result = reduce_system(sys, base, q, partition, cfg.leaf_size, "", ReductionOptions{});
      times.push_back(elapsed(t0));
      rom = std::move(result.first);
    }
    row.reduce_time = median(times);
    row.rom_order = rom.order();
    row.nnz = rom.g.nonZeros() + rom.c.nonZeros();
    if (cfg.simulate) {
      const std::vector<PwlSource> src(static_cast<std::size_t>(rom.p), PwlSource::step(1e-3, 0.0, 10.0 * cfg.dt));
      const auto t0 = Clock::now();
      transient_sim(rom, src, cfg.t_end, cfg.dt);
      row.sim_time = elapsed(t0);
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  for (const auto& m : cfg.methods)
    if (m != "turbomor" && m != "prima" && m != "turbomor-partitioned") throw UsageError("unknown method '" + m + "'");
  for (int q : cfg.q)
    if (q < 1) throw UsageError("q must be at least 1");

  std::vector<BenchRow> rows;
  for (const BenchExample& ex : cfg.examples) {
    std::shared_ptr<const DescriptorSystem> sys;
    std::string load_error;
    try {
      sys = std::make_shared<const DescriptorSystem>(build_example(ex));
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    std::vector<std::future<BenchRow>> pending;
    for (const auto& method : cfg.methods)
      for (int q : cfg.q) {
        if (!sys) {
          BenchRow row;
          row.example = ex.name;
          row.method = method;
          row.q = q;
          row.error = load_error;
          rows.push_back(row);
          continue;
        }
        if (cfg.parallel) {
          pending.push_back(std::async(std::launch::async, [&cfg, &ex, sys, method, q] {
            BenchRow row = run_cell(cfg, ex, *sys, method, q);
            row.contended = true;
            return row;
          }));
        } else {
          rows.push_back(run_cell(cfg, ex, *sys, method, q));
        }
      }
    for (auto& f : pending) rows.push_back(f.get());
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "example,method,q,reduce_time,sim_time,rom_order,nnz,m,p,status,contended,error\n";
  for (const BenchRow& r : rows) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), '"', '\'');
    out << r.example << ',' << r.method << ',' << r.q << ',' << std::setprecision(6) << r.reduce_time << ','
        << r.sim_time << ',' << r.rom_order << ',' << r.nnz << ',' << r.m << ',' << r.p << ','
        << (r.ok ? "ok" : "error") << ',' << (r.contended ? 1 : 0) << ",\"" << error << "\"\n";
  }
}

void load_bench_suite(const std::string& path, BenchConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open suite file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw InputError("suite file " + path + ": " + e.what());
  }
  try {
    for (const json& e : j.value("examples", json::array())) {
      BenchExample ex;
      ex.kind = e.at("kind").get<std::string>();
      ex.lines = e.value("lines", ex.lines);
      ex.segments = e.value("segments", ex.segments);
      ex.rows = e.value("rows", ex.rows);
      ex.cols = e.value("cols", ex.cols);
      ex.ports = e.value("ports", ex.ports);
      ex.pads = e.value("pads", ex.pads);
      ex.seed = e.value("seed", ex.seed);
      ex.path = e.value("path", std::string());
      ex.name = e.value("name", ex.kind + "-" + std::to_string(cfg.examples.size() + 1));
      cfg.examples.push_back(ex);
    }
    if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("q")) cfg.q = j.at("q").get<std::vector<int>>();
    cfg.leaf_size = j.value("leaf_size", cfg.leaf_size);
    cfg.repeats = j.value("repeats", cfg.repeats);
    if (j.contains("simulate")) {
      cfg.simulate = true;
      cfg.t_end = j.at("simulate").value("t_end", cfg.t_end);
      cfg.dt = j.at("simulate").value("dt", cfg.dt);
    }
  } catch (const json::exception& e) {
    throw InputError("suite file " + path + ": " + e.what());
  }
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<BenchRow> rows = run_bench(cfg);
    {
      const fs::path p(cfg.out);
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      std::ofstream f(cfg.out);
      if (!f) throw InputError("cannot write " + cfg.out);
      write_bench_csv(f, rows);
    }
    json examples = json::array();
    for (const auto& ex : cfg.examples)
      examples.push_back({{"name", ex.name},
                          {"kind", ex.kind},
                          {"lines", ex.lines},
                          {"segments", ex.segments},
                          {"rows", ex.rows},
                          {"cols", ex.cols},
                          {"ports", ex.ports},
                          {"pads", ex.pads},
                          {"seed", ex.seed},
                          {"path", ex.path}});
    json config = {{"examples", examples},   {"methods", cfg.methods}, {"q", cfg.q},
                   {"leaf_size", cfg.leaf_size}, {"repeats", cfg.repeats}, {"simulate", cfg.simulate},
                   {"t_end", cfg.t_end},         {"dt", cfg.dt},           {"parallel", cfg.parallel},
                   {"out", cfg.out}};
    int failed = 0;
    for (const auto& r : rows) failed += r.ok ? 0 : 1;
    json result = {{"cells", rows.size()}, {"failed", failed}, {"timing", "median wall clock of the reduction call"}};
    write_json(cfg.report.empty() ? cfg.out + ".json" : cfg.report, envelope("bench", config, result));
    for (const auto& r : rows) {
      out << std::left << std::setw(16) << r.example << std::setw(22) << r.method << " q=" << r.q;
      if (r.ok)
        out << "  order " << r.rom_order << "  reduce " << std::fixed << std::setprecision(3) << r.reduce_time << " s";
      else
        out << "  error: " << r.error;
      out << "\n";
    }
    out << rows.size() << " cells, " << failed << " failed, wrote " << cfg.out << "\n";
    return static_cast<int>(exit_ok);
  });
}

}  // namespace turbomor::cli
