#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rfoc/config.hpp"
#include "rfoc/lmikit.hpp"
#include "rfoc/sdpgate.hpp"

namespace rfoc {

// proposed: the five scaled LMIs; vertex: five per vertex plant;
// nominal: five for the nominal plant only.
enum class Method { Proposed, Vertex, Nominal };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BuiltProblem {
  VarRegistry registry;
  ControllerVariables k;
  std::vector<Lmi> lmis;
  ConicProblem problem{0};
};

BuiltProblem build_problem(const RunConfig& cfg, Method method);
BuiltProblem build_problem(const RunConfig& cfg, const SynthesisSpec& spec, Method method);

struct SynthOutcome {
  Method method = Method::Proposed;
  SynthesisSpec spec;
  int lmi_count = 0;
  int variable_count = 0;
  double build_seconds = 0.0;
  SolveResult result;
  std::optional<ControllerParams> controller;
  bool deterministic = true;
};

SynthOutcome synthesize(const RunConfig& cfg, Method method, SolverAdapter& adapter);
SynthOutcome synthesize(const RunConfig& cfg, const SynthesisSpec& spec, Method method, SolverAdapter& adapter);

// Smallest feasible rho_s ('s') or rho_t ('t') by bisection in dB between
// lower_db and the configured value, which must itself be feasible.
struct BisectOutcome {
  char which = 's';
  double rho = 0.0;
  int solves = 0;
  SynthOutcome best;
};
BisectOutcome bisect_rho(const RunConfig& cfg, char which, Method method, SolverAdapter& adapter,
                         double tol_db = 0.01, double lower_db = -60.0);

std::string controller_json(const ControllerParams& k);
std::string synth_json(const SynthOutcome& s);
// Reads {"x": [x1..xm], "y": [y0..ym]} as written by controller_json.
ControllerParams parse_controller_json(const std::string& text, const std::vector<Pin>& pins = {});

// omega; magnitude of plant, controller, open loop, S, T (abs and dB).
std::string bode_csv(const PlantInstance& plant, const ControllerParams& k, const std::vector<double>& omegas);

struct CompareRow {
  Method method = Method::Proposed;
  int lmi_count = 0;
  double solve_seconds = 0.0;
  std::string status;
  std::optional<ControllerParams> controller;
  bool vertices_stable = false;
  double rmse = 0.0;
  double max_abs_error = 0.0;
};
std::vector<CompareRow> compare_methods(const RunConfig& cfg, SolverAdapter& adapter);
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string compare_json(const std::vector<CompareRow>& rows);

struct CommandOptions {
  std::string out_dir = ".";
  std::optional<ControllerParams> controller;  // overrides the config controller
  Method method = Method::Proposed;            // synth, export-sdpa
  std::optional<char> bisect;                  // synth: 's' or 't'
  double bisect_tol_db = 0.01;
  std::string sdpa_path;                       // export-sdpa (default <out>/problem.dat-s)
};

// synth | check | bode | simulate | compare | export-sdpa. Writes artifacts
// to out_dir, a summary to `log`, and returns the process exit status:
// 0 success, 2 infeasible or failed synthesis, 3 verification failure.
int run_command(const std::string& command, const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);

}  // namespace rfoc
