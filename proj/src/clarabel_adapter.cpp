#include <Eigen/SparseCore>
#include <cmath>
#include <limits>
#include <vector>

#include "rfoc/sdpgate.hpp"
#include "rfoc_clarabel_shim.h"

extern "C" void openblas_set_num_threads(int);

namespace rfoc {

namespace {

std::string status_name(int32_t s) {
  switch (s) {
    case RFOC_STATUS_UNSOLVED: return "Unsolved";
    case RFOC_STATUS_SOLVED: return "Solved";
    case RFOC_STATUS_PRIMAL_INFEASIBLE: return "PrimalInfeasible";
    case RFOC_STATUS_DUAL_INFEASIBLE: return "DualInfeasible";
    case RFOC_STATUS_ALMOST_SOLVED: return "AlmostSolved";
    case RFOC_STATUS_ALMOST_PRIMAL_INFEASIBLE: return "AlmostPrimalInfeasible";
    case RFOC_STATUS_ALMOST_DUAL_INFEASIBLE: return "AlmostDualInfeasible";
    case RFOC_STATUS_MAX_ITERATIONS: return "MaxIterations";
    case RFOC_STATUS_MAX_TIME: return "MaxTime";
    case RFOC_STATUS_NUMERICAL_ERROR: return "NumericalError";
    case RFOC_STATUS_INSUFFICIENT_PROGRESS: return "InsufficientProgress";
    default: return "Other";
  }
}

AdapterOutput::Verdict verdict(int32_t s) {
  using V = AdapterOutput::Verdict;
  switch (s) {
    case RFOC_STATUS_SOLVED: return V::Solved;
    case RFOC_STATUS_ALMOST_SOLVED: return V::AlmostSolved;
    case RFOC_STATUS_PRIMAL_INFEASIBLE: return V::Infeasible;
    case RFOC_STATUS_ALMOST_PRIMAL_INFEASIBLE: return V::AlmostInfeasible;
    case RFOC_STATUS_DUAL_INFEASIBLE:
    case RFOC_STATUS_ALMOST_DUAL_INFEASIBLE: return V::Unbounded;
    case RFOC_STATUS_MAX_ITERATIONS:
    case RFOC_STATUS_MAX_TIME:
    case RFOC_STATUS_INSUFFICIENT_PROGRESS: return V::Stopped;
    default: return V::Failed;
  }
}

class ClarabelAdapter final : public SolverAdapter {
 public:
  // A single BLAS thread keeps repeated solves bit-identical.
  ClarabelAdapter() { openblas_set_num_threads(1); }

  [[nodiscard]] std::string name() const override { return "clarabel"; }

  AdapterOutput run(const ConicProblem& p, const SolverSettings& settings) override {
    // Slack s = b - A z: nonnegative rows first, then each PSD block as its
    // scaled upper triangle, column by column.
    const int n = p.num_vars();
    std::vector<Eigen::Triplet<double, long>> trip;
    std::vector<double> b;
    std::vector<int32_t> kinds;
    std::vector<size_t> dims;
    long row = 0;
    if (!p.scalars().empty()) {
      for (const ScalarRow& r : p.scalars()) {
        b.push_back(r.constant);
        for (const auto& [v, a] : r.terms) trip.emplace_back(row, v, -a);
        ++row;
      }
      kinds.push_back(RFOC_CONE_NONNEG);
      dims.push_back(p.scalars().size());
    }
    const double rt2 = std::sqrt(2.0);
    for (const ConeBlock& blk : p.blocks()) {
      const int d = blk.dim();
      for (int j = 0; j < d; ++j) {
        for (int i = 0; i <= j; ++i) {
          const double w = i == j ? 1.0 : rt2;
          b.push_back(w * blk.constant(i, j));
          for (const auto& [v, m] : blk.terms) {
            if (m(i, j) != 0.0) trip.emplace_back(row, v, -w * m(i, j));
          }
          ++row;
        }
      }
      kinds.push_back(RFOC_CONE_PSD_TRIANGLE);
      dims.push_back(static_cast<size_t>(d));
    }
    Eigen::SparseMatrix<double, Eigen::ColMajor, long> a(row, n);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    std::vector<size_t> colptr(a.outerIndexPtr(), a.outerIndexPtr() + n + 1);
    std::vector<size_t> rowval(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
    std::vector<double> nzval(a.valuePtr(), a.valuePtr() + a.nonZeros());
    std::vector<double> q(p.objective().data(), p.objective().data() + n);

    rfoc_clarabel_settings s{};
    s.max_iter = static_cast<uint32_t>(settings.max_iter);
    s.time_limit = settings.time_limit > 0.0 ? settings.time_limit : std::numeric_limits<double>::infinity();
    s.tol_gap_abs = settings.tol_gap_abs;
    s.tol_gap_rel = settings.tol_gap_rel;
    s.tol_feas = settings.tol_feas;
    s.verbose = settings.verbose ? 1 : 0;

    AdapterOutput out;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    rfoc_clarabel_info info{};
    char msg[512] = {0};
    const int32_t rc = rfoc_clarabel_solve(static_cast<size_t>(n), static_cast<size_t>(row), q.data(), colptr.data(),
                                           rowval.data(), nzval.data(), b.data(), kinds.size(), kinds.data(),
                                           dims.data(), &s, x.data(), &info, msg, sizeof msg);
    if (rc != 0) {
      out.verdict = AdapterOutput::Verdict::Failed;
      out.solver_status = "SetupError";
      out.message = std::string("clarabel: ") + msg;
      return out;
    }
    out.verdict = verdict(info.status);
    out.solver_status = status_name(info.status);
    out.iterations = static_cast<int>(info.iterations);
    out.objective = info.obj_val;
    out.z = std::move(x);
    return out;
  }
};

}  // namespace

std::unique_ptr<SolverAdapter> make_clarabel_adapter() { return std::make_unique<ClarabelAdapter>(); }

}  // namespace rfoc
