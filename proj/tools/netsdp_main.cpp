// netsdp: batch front end for causal-compatibility tests on networks.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "netsdp/pipeline.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

netsdp::DistributionTable resolve_distribution(const json& spec) {
  if (spec.at("family").get<std::string>() == "file")
    return netsdp::distribution_from_json(load_json(spec.at("path").get<std::string>()));
  return netsdp::distribution_from_spec(spec);
}

struct CommonArgs {
  std::string scenario_path, level_path, dist_path, output;
  netsdp::SolverSettings settings;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_dist) {
  cmd->add_option("-c,--scenario", args.scenario_path, "scenario JSON file")->required();
  cmd->add_option("-l,--level", args.level_path, "level spec JSON file")->required();
  if (with_dist)
    cmd->add_option("-d,--dist", args.dist_path, "distribution spec JSON file")->required();
  cmd->add_option("-o,--output", args.output, "output file (default: stdout)");
  cmd->add_option("--gap-tol", args.settings.sdp.gap_tol, "duality gap tolerance");
  cmd->add_option("--max-iter", args.settings.sdp.max_iter, "iteration cap");
  cmd->add_option("--eps", args.settings.incompat_eps, "incompatibility threshold on t*");
}

std::vector<double> parse_axis(const std::string& text) {
  // "a,b,c" or "lo:hi:n"
  std::vector<double> vals;
  if (text.find(':') != std::string::npos) {
    double lo, hi;
    int n;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
      throw std::invalid_argument("bad axis '" + text + "': expected lo:hi:n");
    for (int i = 0; i < n; ++i)
      vals.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return vals;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) vals.push_back(std::stod(tok));
  if (vals.empty()) throw std::invalid_argument("empty axis '" + text + "'");
  return vals;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal compatibility tests for quantum networks via scalar-extended "
               "moment-matrix relaxations"};
  app.require_subcommand(1);

  CommonArgs solve_args;
  double v_override = -1.0;
  auto* cmd_solve = app.add_subcommand("solve", "run a single feasibility test");
  add_common(cmd_solve, solve_args, true);
  cmd_solve->add_option("--v", v_override, "override the visibility of a P22-family spec");

  CommonArgs vis_args;
  double vis_lo = 0.0, vis_hi = 1.0, vis_tol = 0.01;
  auto* cmd_vis = app.add_subcommand("scan-visibility", "bisect the visibility threshold");
  add_common(cmd_vis, vis_args, false);
  cmd_vis->add_option("--lo", vis_lo, "lower bracket (not refuted)")->required();
  cmd_vis->add_option("--hi", vis_hi, "upper bracket (incompatible)")->required();
  cmd_vis->add_option("--tol", vis_tol, "bracket width tolerance");

  CommonArgs eff_args;
  std::map<std::string, std::string> axis_flags;
  auto* cmd_eff = app.add_subcommand("scan-efficiency", "grid scan over swap parameters");
  add_common(cmd_eff, eff_args, false);
  for (const char* name : {"eta-a", "eta-c", "theta-ab", "theta-bc", "alpha0", "alpha1"})
    cmd_eff->add_option("--" + std::string(name), axis_flags[name],
                        "axis values: 'a,b,c' or 'lo:hi:n'");

  CommonArgs export_args;
  auto* cmd_export = app.add_subcommand("export-sdpa", "write the program in SDPA sparse format");
  add_common(cmd_export, export_args, true);

  CommonArgs stats_args;
  auto* cmd_stats = app.add_subcommand("stats", "report problem dimensions");
  add_common(cmd_stats, stats_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (const char* env = std::getenv("NETSDP_GAP_TOL")) {
      double tol = std::atof(env);
      if (tol > 0)
        for (auto* a : {&solve_args, &vis_args, &eff_args, &export_args, &stats_args})
          a->settings.sdp.gap_tol = tol;
    }

    if (cmd_solve->parsed()) {
      auto sc = netsdp::scenario_from_json(load_json(solve_args.scenario_path));
      auto level = netsdp::level_from_json(load_json(solve_args.level_path));
      json dspec = load_json(solve_args.dist_path);
      if (v_override >= 0.0) dspec["v"] = v_override;
      netsdp::Pipeline pipe(sc, level);
      netsdp::RunReport report = pipe.run(resolve_distribution(dspec), solve_args.settings);
      json out = netsdp::report_to_json(report);
      out["config_echo"] = {{"scenario", netsdp::scenario_to_json(pipe.scenario)},
                            {"distribution", dspec}};
      write_output(solve_args.output, out.dump(2) + "\n");
      if (report.verdict == netsdp::Verdict::inconclusive) return 2;
    } else if (cmd_vis->parsed()) {
      auto sc = netsdp::scenario_from_json(load_json(vis_args.scenario_path));
      auto level = netsdp::level_from_json(load_json(vis_args.level_path));
      netsdp::Pipeline pipe(sc, level);
      auto result = netsdp::bisect_visibility(
          pipe, [](double v) { return netsdp::p22_family(v); }, vis_lo, vis_hi, vis_tol,
          vis_args.settings);
      write_output(vis_args.output, netsdp::bisect_to_json(result).dump(2) + "\n");
    } else if (cmd_eff->parsed()) {
      auto sc = netsdp::scenario_from_json(load_json(eff_args.scenario_path));
      auto level = netsdp::level_from_json(load_json(eff_args.level_path));
      netsdp::Pipeline pipe(sc, level);
      netsdp::ScanAxes axes;
      if (!axis_flags["eta-a"].empty()) axes.eta_a = parse_axis(axis_flags["eta-a"]);
      if (!axis_flags["eta-c"].empty()) axes.eta_c = parse_axis(axis_flags["eta-c"]);
      if (!axis_flags["theta-ab"].empty()) axes.theta_ab = parse_axis(axis_flags["theta-ab"]);
      if (!axis_flags["theta-bc"].empty()) axes.theta_bc = parse_axis(axis_flags["theta-bc"]);
      if (!axis_flags["alpha0"].empty()) axes.alpha0 = parse_axis(axis_flags["alpha0"]);
      if (!axis_flags["alpha1"].empty()) axes.alpha1 = parse_axis(axis_flags["alpha1"]);
      auto rows = netsdp::scan_grid(pipe, axes, eff_args.settings);
      write_output(eff_args.output, netsdp::scan_to_csv(rows));
      for (const auto& r : rows)
        if (r.verdict == netsdp::Verdict::inconclusive) return 2;
    } else if (cmd_export->parsed()) {
      auto sc = netsdp::scenario_from_json(load_json(export_args.scenario_path));
      auto level = netsdp::level_from_json(load_json(export_args.level_path));
      netsdp::Pipeline pipe(sc, level);
      auto inst = netsdp::instantiate(pipe.symbolic, resolve_distribution(load_json(export_args.dist_path)),
                                      pipe.scenario);
      write_output(export_args.output, netsdp::write_sdpa(netsdp::to_sdp(inst)));
    } else if (cmd_stats->parsed()) {
      auto sc = netsdp::scenario_from_json(load_json(stats_args.scenario_path));
      auto level = netsdp::level_from_json(load_json(stats_args.level_path));
      netsdp::Pipeline pipe(sc, level);
      auto st = netsdp::problem_stats(pipe.symbolic);
      json out = {{"dimension", st.dimension},
                  {"symbol_classes", st.variable_count},
                  {"structural_zeros", st.structural_zeros}};
      write_output(stats_args.output, out.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "netsdp: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
