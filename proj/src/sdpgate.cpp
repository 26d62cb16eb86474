#include "rfoc/sdpgate.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rfoc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd ConeBlock::evaluate(const VectorXd& z) const {
  MatrixXd out = constant;
  for (const auto& [v, m] : terms) out += z(v) * m;
  return out;
}

double ScalarRow::evaluate(const VectorXd& z) const {
  double out = constant;
  for (const auto& [v, a] : terms) out += a * z(v);
  return out;
}

bool operator==(const ConeBlock& a, const ConeBlock& b) {
  if (a.name != b.name || a.constant.rows() != b.constant.rows() || a.constant.cols() != b.constant.cols()) {
    return false;
  }
  if (a.constant != b.constant || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].first != b.terms[i].first || a.terms[i].second != b.terms[i].second) return false;
  }
  return true;
}

bool operator==(const ConicProblem& a, const ConicProblem& b) {
  return a.num_vars_ == b.num_vars_ && a.margin_ == b.margin_ && a.blocks_ == b.blocks_ &&
         a.scalars_ == b.scalars_ && a.objective_ == b.objective_;
}

ConicProblem::ConicProblem(int num_vars, double margin)
    : num_vars_(num_vars), margin_(margin), objective_(VectorXd::Zero(num_vars)) {
  if (num_vars < 0) throw std::invalid_argument("ConicProblem: negative variable count");
  if (!(margin >= 0.0)) throw std::invalid_argument("solver.margin: must be >= 0");
}

ConicProblem ConicProblem::assemble(const VarRegistry& registry, const std::vector<Lmi>& lmis, double margin) {
  ConicProblem p(registry.size(), margin);
  for (const Lmi& l : lmis) p.add_lmi(l.name, l.lhs);
  for (int id = 0; id < static_cast<int>(registry.blocks().size()); ++id) {
    const VarBlock& b = registry.block(id);
    if (b.kind == VarKind::PositiveDiagonal) {
      for (int i = 0; i < b.dim; ++i) p.add_positive(b.name + "[" + std::to_string(i) + "]", registry.scalar(id, i));
    } else if (b.positive) {
      p.add_lmi(b.name + " > 0", -registry.matrix(id));
    }
  }
  return p;
}

void ConicProblem::add_lmi(const std::string& name, const AffineMatrix& f) {
  constexpr double kHermitianTol = 1e-9;
  if (f.rows() != f.cols() || f.rows() == 0) throw std::invalid_argument("add_lmi: " + name + " is not square");
  if (f.hermitian_defect() > kHermitianTol) throw std::invalid_argument("add_lmi: " + name + " is not Hermitian");
  const AffineMatrix real = f.is_real() ? f : hermitian_embed(f);
  const int n = real.rows();
  auto sym = [](const MatrixXd& m) -> MatrixXd { return 0.5 * (m + m.transpose()); };
  ConeBlock b;
  b.name = name;
  b.constant = -sym(real.constant().real()) - margin_ * MatrixXd::Identity(n, n);
  for (const auto& [v, m] : real.terms()) {
    if (v < 0 || v >= num_vars_) throw std::invalid_argument("add_lmi: " + name + " references an unknown variable");
    MatrixXd g = -sym(m.real());
    if (g.isZero(0.0)) continue;
    b.terms.emplace_back(v, std::move(g));
  }
  blocks_.push_back(std::move(b));
}

void ConicProblem::add_positive(const std::string& name, const AffineScalar& g) {
  ScalarRow r;
  r.name = name;
  r.constant = g.constant() - margin_;
  for (int v = 0; v < static_cast<int>(g.weights().size()); ++v) {
    const double w = g.weight(v);
    if (w == 0.0) continue;
    if (v >= num_vars_) throw std::invalid_argument("add_positive: " + name + " references an unknown variable");
    r.terms.emplace_back(v, w);
  }
  scalars_.push_back(std::move(r));
}

void ConicProblem::set_objective(VectorXd c) {
  if (c.size() != num_vars_) throw std::invalid_argument("set_objective: wrong length");
  objective_ = std::move(c);
}

void ConicProblem::add_block(ConeBlock b) {
  for (const auto& [v, m] : b.terms) {
    if (v < 0 || v >= num_vars_) throw std::invalid_argument("add_block: unknown variable");
  }
  blocks_.push_back(std::move(b));
}

void ConicProblem::add_scalar_row(ScalarRow r) {
  for (const auto& [v, a] : r.terms) {
    if (v < 0 || v >= num_vars_) throw std::invalid_argument("add_scalar_row: unknown variable");
  }
  scalars_.push_back(std::move(r));
}

// ---- SDPA ----

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_sdpa(const ConicProblem& p) {
  if (p.empty()) throw std::invalid_argument("to_sdpa: empty problem");
  std::ostringstream os;
  os << "* rfoc margin " << fmt(p.margin()) << "\n";
  for (std::size_t k = 0; k < p.blocks().size(); ++k) os << "* rfoc block " << k + 1 << " " << p.blocks()[k].name << "\n";
  for (std::size_t k = 0; k < p.scalars().size(); ++k) os << "* rfoc diag " << k + 1 << " " << p.scalars()[k].name << "\n";
  const bool has_diag = !p.scalars().empty();
  const std::size_t nblocks = p.blocks().size() + (has_diag ? 1 : 0);
  os << p.num_vars() << "\n" << nblocks << "\n";
  for (std::size_t k = 0; k < p.blocks().size(); ++k) os << (k ? " " : "") << p.blocks()[k].dim();
  if (has_diag) os << (p.blocks().empty() ? "" : " ") << "-" << p.scalars().size();
  os << "\n";
  for (int i = 0; i < p.num_vars(); ++i) os << (i ? " " : "") << fmt(p.objective()(i));
  os << "\n";
  auto emit = [&](int mat, std::size_t blk, const MatrixXd& m, double sign) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = i; j < m.cols(); ++j) {
        if (m(i, j) != 0.0) os << mat << " " << blk << " " << i + 1 << " " << j + 1 << " " << fmt(sign * m(i, j)) << "\n";
      }
    }
  };
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    const ConeBlock& b = p.blocks()[k];
    emit(0, k + 1, b.constant, -1.0);
    for (const auto& [v, m] : b.terms) emit(v + 1, k + 1, m, 1.0);
  }
  if (has_diag) {
    const std::size_t blk = p.blocks().size() + 1;
    std::map<int, std::vector<std::pair<int, double>>> by_var;
    for (std::size_t r = 0; r < p.scalars().size(); ++r) {
      const ScalarRow& row = p.scalars()[r];
      const int idx = static_cast<int>(r) + 1;
      if (row.constant != 0.0) os << 0 << " " << blk << " " << idx << " " << idx << " " << fmt(-row.constant) << "\n";
      for (const auto& [v, a] : row.terms) by_var[v].emplace_back(idx, a);
    }
    for (const auto& [v, entries] : by_var) {
      for (const auto& [idx, a] : entries) os << v + 1 << " " << blk << " " << idx << " " << idx << " " << fmt(a) << "\n";
    }
  }
  return os.str();
}

ConicProblem parse_sdpa(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  double margin = 0.0;
  std::map<int, std::string> block_names, diag_names;
  std::string body;
  while (std::getline(is, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '"')) {
      std::istringstream ls(line.substr(1));
      std::string tag, what;
      ls >> tag >> what;
      if (tag != "rfoc") continue;
      if (what == "margin") {
        ls >> margin;
      } else if (what == "block" || what == "diag") {
        int k = 0;
        ls >> k;
        std::string name;
        std::getline(ls >> std::ws, name);
        (what == "block" ? block_names : diag_names)[k] = name;
      }
      continue;
    }
    for (char& c : line) {
      if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
    }
    body += line + "\n";
  }
  std::istringstream bs(body);
  long m = -1, nblocks = -1;
  if (!(bs >> m >> nblocks) || m < 0 || nblocks < 0) throw std::invalid_argument("parse_sdpa: bad header");
  std::vector<long> sizes(nblocks);
  for (long& s : sizes) {
    if (!(bs >> s) || s == 0) throw std::invalid_argument("parse_sdpa: bad block structure");
  }
  VectorXd c(m);
  for (long i = 0; i < m; ++i) {
    std::string tok;
    if (!(bs >> tok)) throw std::invalid_argument("parse_sdpa: short objective vector");
    c(i) = std::strtod(tok.c_str(), nullptr);
  }
  ConicProblem p(static_cast<int>(m), margin);
  p.set_objective(c);
  // Dense accumulation per block and matrix number.
  std::vector<std::map<long, MatrixXd>> mats(nblocks);
  long mat, blk, i, j;
  std::string tok;
  while (bs >> mat >> blk >> i >> j >> tok) {
    if (mat < 0 || mat > m || blk < 1 || blk > nblocks) throw std::invalid_argument("parse_sdpa: entry out of range");
    const long n = std::labs(sizes[blk - 1]);
    if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("parse_sdpa: index out of range");
    if (sizes[blk - 1] < 0 && i != j) throw std::invalid_argument("parse_sdpa: off-diagonal entry in diagonal block");
    auto [it, fresh] = mats[blk - 1].try_emplace(mat, MatrixXd::Zero(n, n));
    const double v = std::strtod(tok.c_str(), nullptr);
    it->second(i - 1, j - 1) = v;
    it->second(j - 1, i - 1) = v;
  }
  if (!bs.eof()) throw std::invalid_argument("parse_sdpa: malformed entry line");
  int block_no = 0, diag_no = 0;
  for (long k = 0; k < nblocks; ++k) {
    const long n = std::labs(sizes[k]);
    auto zero_or = [&](long key) {
      auto it = mats[k].find(key);
      return it == mats[k].end() ? MatrixXd(MatrixXd::Zero(n, n)) : it->second;
    };
    if (sizes[k] > 0) {
      ConeBlock b;
      ++block_no;
      b.name = block_names.count(block_no) ? block_names[block_no] : "block" + std::to_string(block_no);
      b.constant = -zero_or(0);
      for (const auto& [v, mm] : mats[k]) {
        if (v > 0) b.terms.emplace_back(static_cast<int>(v - 1), mm);
      }
      p.add_block(std::move(b));
    } else {
      const MatrixXd f0 = zero_or(0);
      for (long r = 0; r < n; ++r) {
        ScalarRow row;
        ++diag_no;
        row.name = diag_names.count(diag_no) ? diag_names[diag_no] : "diag" + std::to_string(diag_no);
        row.constant = -f0(r, r);
        for (const auto& [v, mm] : mats[k]) {
          if (v > 0 && mm(r, r) != 0.0) row.terms.emplace_back(static_cast<int>(v - 1), mm(r, r));
        }
        p.add_scalar_row(std::move(row));
      }
    }
  }
  return p;
}

// ---- solving ----

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Inaccurate: return "inaccurate";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

std::unique_ptr<SolverAdapter> make_adapter(const std::string& id) {
  std::string chosen = id;
  if (chosen.empty()) {
    const char* env = std::getenv("RFOC_SOLVER");
    chosen = env && *env ? env : "clarabel";
  }
  if (chosen == "clarabel") return make_clarabel_adapter();
  throw std::invalid_argument("solver.adapter: unknown adapter '" + chosen + "'");
}

std::vector<ConstraintResidual> residuals(const ConicProblem& p, const VectorXd& z) {
  if (z.size() != p.num_vars()) throw std::invalid_argument("residuals: assignment has the wrong length");
  std::vector<ConstraintResidual> out;
  for (const ConeBlock& b : p.blocks()) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(b.evaluate(z), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    out.push_back({b.name, -lmin - p.margin(), -lmin});
  }
  for (const ScalarRow& r : p.scalars()) {
    const double g = r.evaluate(z);
    out.push_back({r.name, -g - p.margin(), -g});
  }
  return out;
}

SolveResult solve(const ConicProblem& problem, SolverAdapter& adapter, const SolverSettings& settings) {
  SolveResult res;
  res.solver = adapter.name();
  if (problem.empty()) {
    res.status = SolveStatus::Error;
    res.message = "empty problem";
    return res;
  }
  const auto t0 = std::chrono::steady_clock::now();
  AdapterOutput out;
  try {
    out = adapter.run(problem, settings);
  } catch (const std::exception& e) {
    out.verdict = AdapterOutput::Verdict::Failed;
    out.message = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.solver_status = out.solver_status;
  res.iterations = out.iterations;
  res.objective = out.objective;
  res.message = out.message;
  res.z = out.z;
  if (out.z.size() == problem.num_vars()) {
    res.residuals = residuals(problem, out.z);
    res.worst_violation = -std::numeric_limits<double>::infinity();
    res.worst_eigenvalue = -std::numeric_limits<double>::infinity();
    for (const auto& r : res.residuals) {
      res.worst_violation = std::max(res.worst_violation, r.violation);
      res.worst_eigenvalue = std::max(res.worst_eigenvalue, r.max_eigenvalue);
    }
  }
  using V = AdapterOutput::Verdict;
  const bool have_point = out.z.size() == problem.num_vars();
  switch (out.verdict) {
    case V::Solved:
      if (!have_point) {
        res.status = SolveStatus::Error;
        res.message = "adapter returned an assignment of the wrong length";
      } else if (res.worst_violation <= kResidualTolerance && res.worst_eigenvalue < 0.0) {
        res.status = SolveStatus::Feasible;
      } else {
        res.status = SolveStatus::Inaccurate;
        res.message = "solver reported solved but recomputed residual " + fmt(res.worst_violation) +
                      " (max eigenvalue " + fmt(res.worst_eigenvalue) + ") fails the acceptance check";
      }
      break;
    case V::Infeasible:
      res.status = SolveStatus::Infeasible;
      break;
    case V::AlmostSolved:
    case V::AlmostInfeasible:
    case V::Unbounded:
    case V::Stopped:
      res.status = SolveStatus::Inaccurate;
      if (res.message.empty()) res.message = "solver terminated with status " + out.solver_status;
      break;
    case V::Failed:
      res.status = SolveStatus::Error;
      if (res.message.empty()) res.message = "solver failed with status " + out.solver_status;
      break;
  }
  return res;
}

ControllerParams extract_controller(const VectorXd& z, const VarRegistry& registry, int m,
                                    const std::vector<Pin>& pins) {
  auto pinned = [&](Coefficient c, int i) -> const Pin* {
    for (const Pin& p : pins) {
      if (p.which == c && p.index == i) return &p;
    }
    return nullptr;
  };
  auto read = [&](Coefficient c, int i) {
    if (const Pin* p = pinned(c, i)) return p->value;
    const std::string name = (c == Coefficient::X ? "x" : "y") + std::to_string(i);
    const int id = registry.find(name);
    if (id < 0) throw std::invalid_argument("extract_controller: variable " + name + " is not registered");
    const int off = registry.block(id).offset;
    if (off >= z.size()) throw std::invalid_argument("extract_controller: assignment lacks " + name);
    return z(off);
  };
  std::vector<double> x{1.0}, y;
  for (int i = 1; i <= m; ++i) x.push_back(read(Coefficient::X, i));
  for (int i = 0; i <= m; ++i) y.push_back(read(Coefficient::Y, i));
  return ControllerParams(Poly(x), Poly(y), pins);
}

ControllerParams extract_controller(const SolveResult& result, const VarRegistry& registry, int m,
                                    const std::vector<Pin>& pins) {
  if (result.status != SolveStatus::Feasible) {
    throw std::invalid_argument("extract_controller: solve status is " + to_string(result.status));
  }
  return extract_controller(result.z, registry, m, pins);
}

}  // namespace rfoc
