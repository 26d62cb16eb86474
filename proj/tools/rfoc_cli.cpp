#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rfoc/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixed-order robust controller synthesis for interval plants"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".", controller_path, method = "proposed", sdpa_path, minimize;
  std::optional<std::uint64_t> seed;
  double bisect_tol = 0.01;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "artifact directory");
    sub->add_option("--seed", seed, "override verify.seed");
  };
  auto add_controller = [&](CLI::App* sub) {
    sub->add_option("--controller", controller_path, "controller JSON (as written by synth)")
        ->check(CLI::ExistingFile);
  };
  auto* synth = app.add_subcommand("synth", "synthesize a controller");
  add_common(synth);
  synth->add_option("--method", method, "proposed | vertex | nominal");
  synth->add_option("--minimize", minimize, "bisect on rho_s or rho_t")->check(CLI::IsMember({"rho_s", "rho_t"}));
  synth->add_option("--bisect-tol", bisect_tol, "bisection tolerance in dB");
  auto* check = app.add_subcommand("check", "verify a controller against the gain bounds");
  add_common(check);
  add_controller(check);
  auto* bode = app.add_subcommand("bode", "emit Bode magnitude data");
  add_common(bode);
  add_controller(bode);
  auto* sim = app.add_subcommand("simulate", "closed-loop tracking simulation");
  add_common(sim);
  add_controller(sim);
  auto* cmp = app.add_subcommand("compare", "proposed vs vertex baseline vs nominal-only");
  add_common(cmp);
  auto* exp = app.add_subcommand("export-sdpa", "write the synthesis problem in SDPA sparse format");
  add_common(exp);
  exp->add_option("--method", method, "proposed | vertex | nominal");
  exp->add_option("--sdpa", sdpa_path, "output path (default <out>/problem.dat-s)");

  CLI11_PARSE(app, argc, argv);
  try {
    rfoc::RunConfig cfg = rfoc::load_config(config_path);
    if (seed) cfg.seed = *seed;
    rfoc::CommandOptions opts;
    opts.out_dir = out_dir;
    opts.method = rfoc::method_from_string(method);
    opts.sdpa_path = sdpa_path;
    opts.bisect_tol_db = bisect_tol;
    if (!minimize.empty()) opts.bisect = minimize == "rho_s" ? 's' : 't';
    if (!controller_path.empty()) {
      std::ifstream in(controller_path);
      std::stringstream ss;
      ss << in.rdbuf();
      opts.controller = rfoc::parse_controller_json(ss.str(), cfg.pins);
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    return rfoc::run_command(cmd, cfg, opts, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
