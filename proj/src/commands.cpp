#include "rfoc/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rfoc/simulate.hpp"
#include "rfoc/verify.hpp"

namespace rfoc {

using nlohmann::json;

std::string to_string(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::Vertex: return "vertex";
    case Method::Nominal: return "nominal";
  }
  return "proposed";
}

Method method_from_string(const std::string& s) {
  if (s == "proposed") return Method::Proposed;
  if (s == "vertex") return Method::Vertex;
  if (s == "nominal") return Method::Nominal;
  throw std::invalid_argument("method: unknown '" + s + "' (proposed, vertex, nominal)");
}

BuiltProblem build_problem(const RunConfig& cfg, Method method) { return build_problem(cfg, cfg.spec, method); }

BuiltProblem build_problem(const RunConfig& cfg, const SynthesisSpec& spec, Method method) {
  BuiltProblem b;
  b.k = register_controller(b.registry, cfg.m, cfg.pins);
  const UncertainPlant& plant = cfg.uncertain_plant();
  switch (method) {
    case Method::Proposed: b.lmis = robust_synthesis_lmis(plant, spec, b.k, b.registry); break;
    case Method::Vertex: b.lmis = vertex_baseline_lmis(plant, spec, b.k, b.registry); break;
    case Method::Nominal: b.lmis = nominal_lmis(plant, spec, b.k, b.registry); break;
  }
  b.problem = ConicProblem::assemble(b.registry, b.lmis, cfg.margin);
  return b;
}

SynthOutcome synthesize(const RunConfig& cfg, Method method, SolverAdapter& adapter) {
  return synthesize(cfg, cfg.spec, method, adapter);
}

SynthOutcome synthesize(const RunConfig& cfg, const SynthesisSpec& spec, Method method, SolverAdapter& adapter) {
  SynthOutcome out;
  out.method = method;
  out.spec = spec;
  out.deterministic = adapter.deterministic();
  const auto t0 = std::chrono::steady_clock::now();
  BuiltProblem b = build_problem(cfg, spec, method);
  out.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.lmi_count = static_cast<int>(b.lmis.size());
  out.variable_count = b.registry.size();
  out.result = solve(b.problem, adapter, cfg.solver);
  if (out.result.status == SolveStatus::Feasible) out.controller = extract_controller(out.result, b.registry, cfg.m, cfg.pins);
  return out;
}

BisectOutcome bisect_rho(const RunConfig& cfg, char which, Method method, SolverAdapter& adapter, double tol_db,
                         double lower_db) {
  if (which != 's' && which != 't') throw std::invalid_argument("bisect: target must be rho_s or rho_t");
  if (!(tol_db > 0.0)) throw std::invalid_argument("bisect: tolerance must be positive");
  BisectOutcome out;
  out.which = which;
  SynthesisSpec spec = cfg.spec;
  double& rho = which == 's' ? spec.rho_s : spec.rho_t;
  double hi = gain_to_db(rho), lo = lower_db;
  if (!(lo < hi)) throw std::invalid_argument("bisect: lower bound must lie below the configured rho");
  out.best = synthesize(cfg, spec, method, adapter);
  out.solves = 1;
  if (!out.best.controller) {
    out.rho = rho;
    return out;
  }
  out.rho = rho;
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (hi + lo);
    rho = db_to_gain(mid);
    SynthOutcome s = synthesize(cfg, spec, method, adapter);
    ++out.solves;
    if (s.controller) {
      hi = mid;
      out.rho = rho;
      out.best = std::move(s);
    } else {
      lo = mid;
    }
  }
  return out;
}

std::string controller_json(const ControllerParams& k) {
  std::vector<double> tail(k.x().coeffs().begin() + 1, k.x().coeffs().end());
  json j;
  j["order"] = k.order();
  j["x"] = tail;
  j["y"] = k.y().coeffs();
  return j.dump(2);
}

namespace {

json controller_obj(const ControllerParams& k) { return json::parse(controller_json(k)); }

json spec_obj(const SynthesisSpec& s) {
  return {{"rho_s", s.rho_s},        {"rho_s_db", gain_to_db(s.rho_s)}, {"rho_t", s.rho_t},
          {"rho_t_db", gain_to_db(s.rho_t)}, {"delta_s", s.delta_s},   {"delta_t", s.delta_t},
          {"central_polynomial", s.d_c.coeffs()}};
}

json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string synth_json(const SynthOutcome& s) {
  json j;
  j["method"] = to_string(s.method);
  j["status"] = to_string(s.result.status);
  j["spec"] = spec_obj(s.spec);
  if (s.controller) j["controller"] = controller_obj(*s.controller);
  json cert;
  cert["solver"] = s.result.solver;
  cert["solver_status"] = s.result.solver_status;
  cert["solver_deterministic"] = s.deterministic;
  cert["iterations"] = s.result.iterations;
  cert["solve_seconds"] = s.result.seconds;
  cert["build_seconds"] = s.build_seconds;
  cert["lmi_count"] = s.lmi_count;
  cert["variable_count"] = s.variable_count;
  cert["worst_violation"] = finite(s.result.worst_violation);
  cert["worst_eigenvalue"] = finite(s.result.worst_eigenvalue);
  cert["message"] = s.result.message;
  auto& res = cert["residuals"] = json::array();
  for (const auto& r : s.result.residuals) {
    res.push_back({{"constraint", r.name}, {"max_eigenvalue", finite(r.max_eigenvalue)}});
  }
  j["certificate"] = cert;
  return j.dump(2);
}

ControllerParams parse_controller_json(const std::string& text, const std::vector<Pin>& pins) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("controller: JSON parse error: ") + e.what());
  }
  const json& c = j.contains("controller") ? j["controller"] : j;
  if (!c.contains("x") || !c.contains("y")) throw std::invalid_argument("controller: needs x and y");
  try {
    return controller_from_coeffs(c["x"].get<std::vector<double>>(), c["y"].get<std::vector<double>>(), pins);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("controller: ") + e.what());
  }
}

std::string bode_csv(const PlantInstance& plant, const ControllerParams& k, const std::vector<double>& omegas) {
  const LoopTransfers lt = loop_transfers(plant.a, plant.b, k);
  const Rational p{plant.b, plant.a};
  const Rational c{k.y(), k.x()};
  const Rational l{conv(plant.b, k.y()), conv(plant.a, k.x())};
  std::ostringstream os;
  os << "omega,plant,plant_db,controller,controller_db,open_loop,open_loop_db,S,S_db,T,T_db\n";
  os << std::setprecision(10);
  const std::vector<const Rational*> gs{&p, &c, &l, &lt.sensitivity, &lt.complementary};
  std::vector<std::vector<GainPoint>> cols;
  for (const Rational* g : gs) cols.push_back(gain_response(*g, omegas));
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    os << omegas[i];
    for (const auto& col : cols) os << "," << col[i].magnitude << "," << gain_to_db(col[i].magnitude);
    os << "\n";
  }
  return os.str();
}

std::vector<CompareRow> compare_methods(const RunConfig& cfg, SolverAdapter& adapter) {
  std::vector<CompareRow> rows;
  const UncertainPlant& plant = cfg.uncertain_plant();
  for (Method m : {Method::Proposed, Method::Vertex, Method::Nominal}) {
    CompareRow row;
    row.method = m;
    const SynthOutcome s = synthesize(cfg, m, adapter);
    row.lmi_count = s.lmi_count;
    row.solve_seconds = s.result.seconds;
    row.status = to_string(s.result.status);
    row.controller = s.controller;
    if (s.controller) {
      row.vertices_stable = true;
      for (const auto& v : vertices(plant)) {
        const PlantInstance p = instantiate(plant, v);
        if (!check_stability(closed_loop_charpoly(p.a, p.b, *s.controller)).stable) row.vertices_stable = false;
      }
      const SimResult sim =
          simulate_tracking(cfg.simulation_plant(), *s.controller, cfg.reference, cfg.sim_duration(), cfg.dt);
      const TrackingMetrics tm = metrics(sim, cfg.settle_fraction);
      row.rmse = tm.rmse;
      row.max_abs_error = tm.max_abs_error;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "method,lmi_count,solve_seconds,status,vertices_stable,rmse,maxae\n";
  for (const auto& r : rows) {
    os << to_string(r.method) << "," << r.lmi_count << "," << r.solve_seconds << "," << r.status << ","
       << (r.vertices_stable ? "true" : "false") << ",";
    if (r.controller) {
      os << r.rmse << "," << r.max_abs_error;
    } else {
      os << ",";
    }
    os << "\n";
  }
  return os.str();
}

std::string compare_json(const std::vector<CompareRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j{{"method", to_string(r.method)},
           {"lmi_count", r.lmi_count},
           {"solve_seconds", r.solve_seconds},
           {"status", r.status},
           {"vertices_stable", r.vertices_stable}};
    if (r.controller) {
      j["controller"] = controller_obj(*r.controller);
      j["rmse"] = r.rmse;
      j["maxae"] = r.max_abs_error;
    }
    arr.push_back(j);
  }
  return arr.dump(2);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

ControllerParams pick_controller(const RunConfig& cfg, const CommandOptions& opts, const std::string& command) {
  if (opts.controller) return *opts.controller;
  if (cfg.controller) return *cfg.controller;
  throw std::invalid_argument(command + ": no controller (set controller.x/y in the config or pass --controller)");
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const std::filesystem::path out(opts.out_dir);
  if (command == "synth") {
    auto adapter = make_adapter(cfg.adapter);
    SynthOutcome s;
    if (opts.bisect) {
      const BisectOutcome b = bisect_rho(cfg, *opts.bisect, opts.method, *adapter, opts.bisect_tol_db);
      log << "bisection on rho_" << b.which << ": " << b.solves << " solves, best rho = " << b.rho << " ("
          << gain_to_db(b.rho) << " dB)\n";
      s = b.best;
    } else {
      s = synthesize(cfg, opts.method, *adapter);
    }
    write_file(out / "controller.json", synth_json(s));
    log << "method " << to_string(s.method) << ": " << s.lmi_count << " LMIs, " << s.variable_count
        << " variables, status " << to_string(s.result.status) << " (" << s.result.solver << " "
        << s.result.solver_status << ", " << s.result.seconds << " s)\n";
    if (!s.controller) {
      if (!s.result.message.empty()) log << s.result.message << "\n";
      return 2;
    }
    log << std::setprecision(8) << "x =";
    for (double v : s.controller->x().coeffs()) log << " " << v;
    log << "\ny =";
    for (double v : s.controller->y().coeffs()) log << " " << v;
    log << "\n";
    return 0;
  }
  if (command == "check") {
    const ControllerParams k = pick_controller(cfg, opts, command);
    const UncertainPlant& plant = cfg.uncertain_plant();
    const auto samples = sample_uncertainty(cfg.samples, cfg.seed, plant);
    const VerificationReport r = verify_specs(plant, k, cfg.spec, samples, cfg.verify);
    write_file(out / "report.json", report_json(r));
    write_file(out / "gains.csv", gain_table_csv(plant, k, cfg.spec, r, cfg.verify));
    log << r.samples.size() << " samples, stable fraction " << r.stable_fraction << ", worst margin "
        << r.worst_margin << "\nworst |S| " << r.worst_s_gain << " at w=" << r.worst_s_omega << " ("
        << r.worst_s_sample << "), bound " << cfg.spec.rho_s << "\nworst |T| " << r.worst_t_gain
        << " at w=" << r.worst_t_omega << " (" << r.worst_t_sample << "), bound " << cfg.spec.rho_t << "\n"
        << r.gain_violations.size() << " gain violations: " << (r.passed() ? "PASS" : "FAIL") << "\n";
    return r.passed() ? 0 : 3;
  }
  if (command == "bode") {
    const ControllerParams k = pick_controller(cfg, opts, command);
    const UncertainPlant& plant = cfg.uncertain_plant();
    const std::vector<double> grid = log_grid(1e-3, 1e3, 601);
    write_file(out / "bode_nominal.csv", bode_csv({plant.a_center(), plant.b_center()}, k, grid));
    if (cfg.perturbed) write_file(out / "bode_perturbed.csv", bode_csv(*cfg.perturbed, k, grid));
    log << "wrote bode data for " << grid.size() << " frequencies\n";
    return 0;
  }
  if (command == "simulate") {
    const ControllerParams k = pick_controller(cfg, opts, command);
    const SimResult sim = simulate_tracking(cfg.simulation_plant(), k, cfg.reference, cfg.sim_duration(), cfg.dt);
    const TrackingMetrics m = metrics(sim, cfg.settle_fraction);
    const int stride = std::max(1, static_cast<int>(std::lround(0.01 / cfg.dt)));
    write_file(out / "simulation.csv", sim_csv(sim, stride));
    json j{{"rmse", m.rmse},
           {"maxae", m.max_abs_error},
           {"settle_fraction", cfg.settle_fraction},
           {"duration", cfg.sim_duration()},
           {"dt", cfg.dt},
           {"reference", to_string(cfg.reference.kind)},
           {"warning", sim.warning}};
    write_file(out / "metrics.json", j.dump(2));
    if (!sim.warning.empty()) log << "warning: " << sim.warning << "\n";
    log << "rmse " << m.rmse << ", maxae " << m.max_abs_error << "\n";
    return 0;
  }
  if (command == "compare") {
    auto adapter = make_adapter(cfg.adapter);
    const auto rows = compare_methods(cfg, *adapter);
    write_file(out / "compare.csv", compare_csv(rows));
    write_file(out / "compare.json", compare_json(rows));
    log << compare_csv(rows);
    for (const auto& r : rows) {
      if (!r.controller) return 2;
    }
    return 0;
  }
  if (command == "export-sdpa") {
    const BuiltProblem b = build_problem(cfg, opts.method);
    const std::filesystem::path path = opts.sdpa_path.empty() ? out / "problem.dat-s" : std::filesystem::path(opts.sdpa_path);
    write_file(path, to_sdpa(b.problem));
    log << "wrote " << path.string() << ": " << b.problem.num_vars() << " variables, " << b.problem.blocks().size()
        << " matrix blocks, " << b.problem.scalars().size() << " diagonal entries\n";
    return 0;
  }
  throw std::invalid_argument("command: unknown '" + command + "'");
}

}  // namespace rfoc
