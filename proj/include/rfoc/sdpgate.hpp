#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rfoc/lmi_expr.hpp"
#include "rfoc/lmikit.hpp"
#include "rfoc/plantmodel.hpp"

namespace rfoc {

inline constexpr double kDefaultMargin = 1e-7;
inline constexpr double kResidualTolerance = 1e-6;

// Solver-facing constraint G(z) = G0 + sum_i z_i G_i >= 0 (real symmetric),
// obtained from F(z) <= -margin I as G = -F - margin I.
struct ConeBlock {
  std::string name;
  Eigen::MatrixXd constant;
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;  // ascending variable index

  [[nodiscard]] int dim() const { return static_cast<int>(constant.rows()); }
  [[nodiscard]] Eigen::MatrixXd evaluate(const Eigen::VectorXd& z) const;
  friend bool operator==(const ConeBlock&, const ConeBlock&);
};

// Scalar constraint g0 + g'z >= 0.
struct ScalarRow {
  std::string name;
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  [[nodiscard]] double evaluate(const Eigen::VectorXd& z) const;
  friend bool operator==(const ScalarRow&, const ScalarRow&) = default;
};

class ConicProblem {
 public:
  explicit ConicProblem(int num_vars, double margin = kDefaultMargin);

  // The listed LMIs (complex ones embedded) plus positivity of every
  // positive matrix and positive-diagonal variable in the registry.
  static ConicProblem assemble(const VarRegistry& registry, const std::vector<Lmi>& lmis,
                               double margin = kDefaultMargin);

  // f(z) <= -margin I. Complex Hermitian expressions are embedded.
  void add_lmi(const std::string& name, const AffineMatrix& f);
  // g(z) >= margin, i.e. -g <= -margin.
  void add_positive(const std::string& name, const AffineScalar& g);
  void set_objective(Eigen::VectorXd c);

  [[nodiscard]] int num_vars() const { return num_vars_; }
  [[nodiscard]] double margin() const { return margin_; }
  [[nodiscard]] const std::vector<ConeBlock>& blocks() const { return blocks_; }
  [[nodiscard]] const std::vector<ScalarRow>& scalars() const { return scalars_; }
  [[nodiscard]] const Eigen::VectorXd& objective() const { return objective_; }
  [[nodiscard]] bool empty() const { return blocks_.empty() && scalars_.empty(); }

  // Raw constructors used by the SDPA reader.
  void add_block(ConeBlock b);
  void add_scalar_row(ScalarRow r);

  friend bool operator==(const ConicProblem&, const ConicProblem&);

 private:
  int num_vars_;
  double margin_;
  std::vector<ConeBlock> blocks_;
  std::vector<ScalarRow> scalars_;
  Eigen::VectorXd objective_;
};

// SDPA sparse format: minimize c'x s.t. sum_i F_i x_i - F_0 >= 0, with
// F_i = G_i and F_0 = -G0 per block; scalar rows form one diagonal block.
// Names and the margin travel in comment lines. Throws on an empty problem.
std::string to_sdpa(const ConicProblem& problem);
ConicProblem parse_sdpa(const std::string& text);

enum class SolveStatus { Feasible, Infeasible, Inaccurate, Error };
std::string to_string(SolveStatus s);

struct SolverSettings {
  int max_iter = 200;
  double time_limit = 0.0;  // seconds, 0 = none
  double tol_gap_abs = 1e-8;
  double tol_gap_rel = 1e-8;
  double tol_feas = 1e-8;
  bool verbose = false;
};

// What an adapter hands back: the assignment and the solver's own verdict.
struct AdapterOutput {
  enum class Verdict { Solved, AlmostSolved, Infeasible, AlmostInfeasible, Unbounded, Stopped, Failed };
  Verdict verdict = Verdict::Failed;
  std::string solver_status;
  Eigen::VectorXd z;
  int iterations = 0;
  double objective = 0.0;
  std::string message;
};

class SolverAdapter {
 public:
  virtual ~SolverAdapter() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  // Solver nondeterminism worth flagging in output metadata.
  [[nodiscard]] virtual bool deterministic() const { return true; }
  virtual AdapterOutput run(const ConicProblem& problem, const SolverSettings& settings) = 0;
};

std::unique_ptr<SolverAdapter> make_clarabel_adapter();
// "clarabel" (default). An empty id falls back to $RFOC_SOLVER, then the
// default. Throws std::invalid_argument on unknown ids.
std::unique_ptr<SolverAdapter> make_adapter(const std::string& id = "");

struct ConstraintResidual {
  std::string name;
  // Largest eigenvalue of the original F(z) (scalar rows: -g(z)); must be < 0.
  double max_eigenvalue = 0.0;
  // max_eigenvalue + margin: violation of the solver-facing constraint.
  double violation = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  std::string solver;
  std::string solver_status;
  Eigen::VectorXd z;
  std::vector<ConstraintResidual> residuals;
  double worst_violation = 0.0;
  double worst_eigenvalue = 0.0;
  double objective = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::string message;
};

// Residuals are recomputed here from the problem data. A solution the
// solver calls solved is feasible only when every violation is within
// kResidualTolerance and every original constraint holds strictly;
// otherwise it is downgraded to inaccurate.
SolveResult solve(const ConicProblem& problem, SolverAdapter& adapter, const SolverSettings& settings = {});

std::vector<ConstraintResidual> residuals(const ConicProblem& problem, const Eigen::VectorXd& z);

// Reads x1..xm, y0..ym by name, fills pinned coefficients. Throws
// std::invalid_argument unless the result is feasible, and when a free
// coefficient is missing from the registry or the assignment.
ControllerParams extract_controller(const SolveResult& result, const VarRegistry& registry, int m,
                                    const std::vector<Pin>& pins);
// Same from an assignment alone (no status check).
ControllerParams extract_controller(const Eigen::VectorXd& z, const VarRegistry& registry, int m,
                                    const std::vector<Pin>& pins);

}  // namespace rfoc
