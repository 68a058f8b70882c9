// Command-line front end: run Monte Carlo sweeps, inspect a single scenario,
// or run the quick self-check suite.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risconn/risconn.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_path,
            const std::string& format) {
  risconn::Config cfg;
  try {
    cfg = risconn::load_config_file(config_path);
  } catch (const risconn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto rows = risconn::run_sweep(risconn::make_plan(cfg));
    const auto fmt =
        format == "json" ? risconn::EmitFormat::Json : risconn::EmitFormat::Csv;
    if (out_path.empty()) {
      if (fmt == risconn::EmitFormat::Csv) {
        risconn::emit_csv(rows, std::cout);
      } else {
        risconn::emit_json(rows, std::cout);
      }
    } else {
      risconn::emit(rows, fmt, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cmd_inspect(const std::string& config_path, bool trace) {
  risconn::Config cfg;
  try {
    cfg = risconn::load_config_file(config_path);
  } catch (const risconn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto s = risconn::make_scenario(cfg, cfg.seed);
    const auto g = risconn::build_graph(s);
    const auto spec = risconn::spectrum(risconn::laplacian(g));
    const auto crits = risconn::criticality_report(g, cfg.params.epsilon);
    const auto cands = risconn::enumerate_candidates(s, g, crits, {cfg.allow_redundant});

    std::printf("scenario: seed=%llu  UEs=%d  UAVs=%d  RISs=%d  area=%gx%g m\n",
                static_cast<unsigned long long>(cfg.seed), s.ue_count(), s.uav_count(),
                s.ris_count(), cfg.area_w_m, cfg.area_h_m);
    std::printf("graph:    V=%d  E=%zu  lambda2=%.6g%s\n", g.n_nodes, g.edges.size(),
                spec.fiedler_value, spec.fiedler_value > 1e-9 ? "" : "  (disconnected)");
    std::printf("criticality of UAV nodes (eps=%g):\n", cfg.params.epsilon);
    for (int a = 0; a < s.uav_count(); ++a) {
      const int n = s.uav_node(a);
      std::printf("  uav %-3d node %-3d C=%-12.6g%s\n", a, n,
                  crits.value[static_cast<std::size_t>(n)],
                  crits.clamped[static_cast<std::size_t>(n)] ? "  clamped" : "");
    }
    std::printf("candidates: %zu reflected links (budget R=%d)\n", cands.size(), s.ris_count());
    if (trace) {
      const auto cons = risconn::make_constraints(s, s.ris_count(), cfg.strict_coverage);
      risconn::write_solver_trace(risconn::greedy_perturbation(g, cands, cons), std::cout);
      risconn::write_solver_trace(risconn::random_baseline(g, cands, cons, cfg.seed), std::cout);
      risconn::write_solver_trace(
          risconn::relax_and_round(g, cands, cons, cfg.relax_iters, cfg.relax_tol,
                                   cfg.plain_rounding)
              .second,
          std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "inspect failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connectivity maximization for RIS-assisted UAV networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";

  auto* run = app.add_subcommand("run", "Run the configured Monte Carlo sweep");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", out_path, "Output path (default: stdout)");
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  bool trace = false;
  auto* inspect = app.add_subcommand("inspect", "Describe one generated scenario");
  inspect->add_option("--config", config_path, "Config file")->required();
  inspect->add_flag("--trace", trace, "Emit per-step solver traces as JSON lines");

  auto* verify = app.add_subcommand("verify", "Run the quick property/oracle suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) return cmd_run(config_path, out_path, format);
  if (inspect->parsed()) return cmd_inspect(config_path, trace);
  if (verify->parsed()) return risconn::run_quick_verify(std::cout) ? 0 : 1;
  return 2;
}
