// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "turbomor/generators/networks.hpp"
#include "turbomor/ingest/bundle.hpp"
#include "turbomor/ingest/netlist.hpp"
#include "turbomor_cli/cli.hpp"

namespace turbomor::cli {

namespace {

void add_input(CLI::App* cmd, InputSpec& in) {
  auto* netlist = cmd->add_option("--netlist", in.netlist, "SPICE-subset RC netlist");
  auto* bundle = cmd->add_option("--bundle", in.bundle, "Matrix Market bundle directory");
  netlist->excludes(bundle);
}

void add_reduction_options(CLI::App* cmd, ReductionOptions& o, std::string& ordering) {
  cmd->add_option("--pivot-tol", o.pivot_tolerance, "Relative Cholesky pivot threshold")->capture_default_str();
  cmd->add_option("--symmetry-tol", o.symmetry_tolerance, "Accepted relative asymmetry")->capture_default_str();
  cmd->add_option("--promotion-limit", o.promotion_limit, "Promoted rows as a fraction of interior")
      ->capture_default_str();
  cmd->add_option("--deflation-tol", o.deflation_tolerance, "PRIMA deflation threshold")->capture_default_str();
  cmd->add_option("--panel-width", o.panel_width, "Householder panel width")->capture_default_str();
  cmd->add_option("--ordering", ordering, "Cholesky ordering")
      ->check(CLI::IsMember({"natural", "fill-reducing"}))
      ->capture_default_str();
}

int generate(const Netlist& net, const std::string& out_path, const std::string& format,
             const std::vector<std::string>& header, std::ostream& out, std::ostream& err) {
  try {
    if (format == "bundle") {
      std::filesystem::create_directories(out_path);
      write_matrix_bundle(BundlePaths::in_directory(out_path, "sys"), stamp(net));
    } else {
      std::ofstream f(out_path);
      if (!f) throw InputError("cannot write " + out_path);
      f << format_netlist(net, header);
    }
    const DescriptorSystem sys = stamp(net);
    out << "wrote " << out_path << ": m=" << sys.order() << " p=" << sys.port_count() << "\n";
    return exit_ok;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
}

std::vector<BenchExample> parse_mesh_specs(const std::vector<std::string>& specs, Index ports, Index pads,
                                           std::uint64_t seed) {
  std::vector<BenchExample> out;
  for (const auto& spec : specs) {
    BenchExample ex;
    ex.kind = "mesh";
    const auto x = spec.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(spec);
      ex.rows = std::stoll(spec.substr(0, x));
      ex.cols = std::stoll(spec.substr(x + 1));
    } catch (const std::exception&) {
      throw UsageError("--mesh expects ROWSxCOLS, got '" + spec + "'");
    }
    ex.ports = ports;
    ex.pads = pads;
    ex.seed = seed;
    ex.name = "mesh-" + spec;
    out.push_back(ex);
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"TurboMOR: moment-matching reduction of large RC networks", "turbomor"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "turbomor 0.1.0");

  ReduceConfig reduce;
  std::string reduce_ordering = "fill-reducing";
  auto* cmd_r = app.add_subcommand("reduce", "Reduce a network to a ROM bundle");
  add_input(cmd_r, reduce.input);
  cmd_r->add_option("--method", reduce.method, "Reduction method")
      ->check(CLI::IsMember({"turbomor", "prima"}))
      ->capture_default_str();
  cmd_r->add_option("--q", reduce.q, "Number of block moments to match")->capture_default_str();
  cmd_r->add_flag("--partition", reduce.partition, "Partitioned reduction by nested dissection");
  cmd_r->add_option("--leaf-size", reduce.leaf_size, "Nested dissection leaf size")->capture_default_str();
  cmd_r->add_option("--perm-file", reduce.perm_file, "Partition given as a permutation file");
  cmd_r->add_option("--out", reduce.out, "Output bundle directory or netlist path")->capture_default_str();
  cmd_r->add_option("--format", reduce.format, "Output format")
      ->check(CLI::IsMember({"bundle", "netlist"}))
      ->capture_default_str();
  cmd_r->add_option("--report", reduce.report, "Report JSON path");
  add_reduction_options(cmd_r, reduce.options, reduce_ordering);

  VerifyConfig verify;
  auto* cmd_v = app.add_subcommand("verify", "Check a ROM against the original network");
  add_input(cmd_v, verify.input);
  cmd_v->add_option("--rom", verify.rom, "ROM bundle directory")->required();
  cmd_v->add_option("--moments", verify.moments, "Compare the first K block moments");
  cmd_v->add_option("--freq", verify.freq, "Frequencies in Hz for transfer comparison")->delimiter(',');
  cmd_v->add_option("--freq-tol", verify.freq_tol, "Relative transfer tolerance")->capture_default_str();
  cmd_v->add_option("--moment-tol", verify.moment_tol, "Relative moment tolerance")->capture_default_str();
  cmd_v->add_flag("--passivity", verify.passivity, "Check that G and C are positive semidefinite");
  cmd_v->add_option("--passivity-tol", verify.passivity_tol, "Relative eigenvalue tolerance")
      ->capture_default_str();
  cmd_v->add_option("--report", verify.report, "Report JSON path");

  SimulateConfig sim;
  auto* cmd_s = app.add_subcommand("simulate", "Trapezoidal transient of a network or ROM");
  add_input(cmd_s, sim.input);
  cmd_s->add_option("--rom", sim.rom, "ROM bundle directory");
  cmd_s->add_option("--waveform", sim.waveform, "PWL source CSV: t,port1,port2,...");
  cmd_s->add_option("--step", sim.step, "Step current on every port instead of a waveform");
  cmd_s->add_option("--rise", sim.rise, "Rise time of the step")->capture_default_str();
  cmd_s->add_option("--t-end", sim.t_end, "End time in seconds")->required();
  cmd_s->add_option("--dt", sim.dt, "Time step in seconds")->required();
  cmd_s->add_option("--backend", sim.backend, "Linear solver backend")
      ->check(CLI::IsMember({"auto", "sparse", "dense", "block"}))
      ->capture_default_str();
  cmd_s->add_option("--out", sim.out, "Output waveform CSV")->capture_default_str();
  cmd_s->add_option("--reference", sim.reference, "Reference waveform CSV for error metrics");
  cmd_s->add_option("--metrics", sim.metrics, "Metrics JSON path");

  BenchConfig bench;
  std::string suite;
  std::vector<Index> bus_lines;
  std::vector<std::string> meshes;
  std::vector<std::string> netlists;
  Index segments = 150;
  Index mesh_ports = 8;
  Index mesh_pads = 4;
  std::uint64_t mesh_seed = 1;
  auto* cmd_b = app.add_subcommand("bench", "Time reductions over a suite of examples");
  cmd_b->add_option("--suite", suite, "JSON suite description");
  cmd_b->add_option("--bus", bus_lines, "Generated buses with this many lines (p = 2 lines)")->delimiter(',');
  cmd_b->add_option("--segments", segments, "Segments per bus line")->capture_default_str();
  cmd_b->add_option("--mesh", meshes, "Generated meshes ROWSxCOLS")->delimiter(',');
  cmd_b->add_option("--mesh-ports", mesh_ports, "Ports per mesh")->capture_default_str();
  cmd_b->add_option("--mesh-pads", mesh_pads, "Supply pads per mesh")->capture_default_str();
  cmd_b->add_option("--seed", mesh_seed, "Mesh generator seed")->capture_default_str();
  cmd_b->add_option("--netlists", netlists, "Netlist files")->delimiter(',');
  cmd_b->add_option("--methods", bench.methods, "turbomor, prima, turbomor-partitioned")->delimiter(',');
  cmd_b->add_option("--q", bench.q, "Values of q")->delimiter(',');
  cmd_b->add_option("--leaf-size", bench.leaf_size, "Leaf size for partitioned runs")->capture_default_str();
  cmd_b->add_option("--repeats", bench.repeats, "Repeats per cell; the median is reported")->capture_default_str();
  cmd_b->add_flag("--simulate", bench.simulate, "Also time a transient run of each ROM");
  cmd_b->add_option("--t-end", bench.t_end, "Transient end time")->capture_default_str();
  cmd_b->add_option("--dt", bench.dt, "Transient time step")->capture_default_str();
  cmd_b->add_flag("--parallel", bench.parallel, "Run cells concurrently; timings are flagged as contended");
  cmd_b->add_option("--out", bench.out, "Output CSV")->capture_default_str();
  cmd_b->add_option("--report", bench.report, "Report JSON path");

  BusOptions bus;
  std::string bus_out = "bus.sp";
  std::string bus_format = "netlist";
  auto* cmd_gb = app.add_subcommand("gen-bus", "Generate a coupled RC bus");
  cmd_gb->add_option("--lines", bus.lines, "Number of lines")->capture_default_str();
  cmd_gb->add_option("--segments", bus.segments, "RC segments per line")->capture_default_str();
  cmd_gb->add_option("--r-segment", bus.r_segment, "Segment resistance")->capture_default_str();
  cmd_gb->add_option("--c-ground", bus.c_ground, "Ground capacitance per node")->capture_default_str();
  cmd_gb->add_option("--c-coupling", bus.c_coupling, "Coupling capacitance per node")->capture_default_str();
  cmd_gb->add_option("--r-driver", bus.r_driver, "Driver resistance")->capture_default_str();
  cmd_gb->add_option("--c-load", bus.c_load, "Load capacitance")->capture_default_str();
  cmd_gb->add_option("--out", bus_out, "Output netlist path or bundle directory")->capture_default_str();
  cmd_gb->add_option("--format", bus_format, "Output format")
      ->check(CLI::IsMember({"netlist", "bundle"}))
      ->capture_default_str();

  MeshOptions mesh;
  std::string mesh_out = "mesh.sp";
  std::string mesh_format = "netlist";
  auto* cmd_gm = app.add_subcommand("gen-mesh", "Generate a seeded random RC power mesh");
  cmd_gm->add_option("--rows", mesh.rows, "Mesh rows")->capture_default_str();
  cmd_gm->add_option("--cols", mesh.cols, "Mesh columns")->capture_default_str();
  cmd_gm->add_option("--ports", mesh.ports, "Port count")->capture_default_str();
  cmd_gm->add_option("--pads", mesh.pads, "Supply pads")->capture_default_str();
  cmd_gm->add_option("--r-edge", mesh.r_edge, "Nominal edge resistance")->capture_default_str();
  cmd_gm->add_option("--c-node", mesh.c_node, "Nominal node capacitance")->capture_default_str();
  cmd_gm->add_option("--r-pad", mesh.r_pad, "Pad resistance")->capture_default_str();
  cmd_gm->add_option("--seed", mesh.seed, "Generator seed")->capture_default_str();
  cmd_gm->add_option("--out", mesh_out, "Output netlist path or bundle directory")->capture_default_str();
  cmd_gm->add_option("--format", mesh_format, "Output format")
      ->check(CLI::IsMember({"netlist", "bundle"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(exit_ok) : static_cast<int>(exit_usage);
  }

  auto usage = [&](const std::string& message) {
    err << "usage error: " << message << "\n";
    return static_cast<int>(exit_usage);
  };

  if (cmd_r->parsed()) {
    if (reduce.input.netlist.empty() == reduce.input.bundle.empty())
      return usage("give exactly one of --netlist and --bundle");
    reduce.options.ordering = reduce_ordering == "natural" ? Ordering::natural : Ordering::fill_reducing;
    return cmd_reduce(reduce, out, err);
  }
  if (cmd_v->parsed()) {
    if (verify.input.netlist.empty() == verify.input.bundle.empty())
      return usage("give exactly one of --netlist and --bundle");
    return cmd_verify(verify, out, err);
  }
  if (cmd_s->parsed()) return cmd_simulate(sim, out, err);
  if (cmd_b->parsed()) {
    try {
      if (!suite.empty()) load_bench_suite(suite, bench);
      for (Index lines : bus_lines) {
        BenchExample ex;
        ex.kind = "bus";
        ex.lines = lines;
        ex.segments = segments;
        ex.name = "bus-p" + std::to_string(2 * lines);
        bench.examples.push_back(ex);
      }
      for (auto& ex : parse_mesh_specs(meshes, mesh_ports, mesh_pads, mesh_seed)) bench.examples.push_back(ex);
      for (const auto& path : netlists) {
        BenchExample ex;
        ex.kind = "netlist";
        ex.path = path;
        ex.name = path;
        bench.examples.push_back(ex);
      }
    } catch (const UsageError& e) {
      return usage(e.what());
    } catch (const std::exception& e) {
      err << "input error: " << e.what() << "\n";
      return exit_input;
    }
    return cmd_bench(bench, out, err);
  }
  if (cmd_gb->parsed()) {
    if (bus.lines < 1 || bus.segments < 1) return usage("--lines and --segments must be positive");
    const Netlist net = generate_bus(bus);
    return generate(net, bus_out, bus_format,
                    {"coupled RC bus: " + std::to_string(bus.lines) + " lines, " + std::to_string(bus.segments) +
                     " segments"},
                    out, err);
  }
  if (cmd_gm->parsed()) {
    if (mesh.rows < 2 || mesh.cols < 2) return usage("--rows and --cols must be at least 2");
    try {
      const Netlist net = generate_mesh(mesh);
      return generate(net, mesh_out, mesh_format,
                      {"RC mesh " + std::to_string(mesh.rows) + "x" + std::to_string(mesh.cols) + ", seed " +
                       std::to_string(mesh.seed)},
                      out, err);
    } catch (const InputError& e) {
      return usage(e.what());
    }
  }
  return usage("no subcommand");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace turbomor::cli
