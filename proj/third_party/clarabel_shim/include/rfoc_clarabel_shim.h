// C interface to the Clarabel conic solver. Data layout follows Clarabel:
//   minimize q'x  subject to  A x + s = b,  s in K
// with A in compressed sparse column form and K a product of cones.
#pragma once

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum rfoc_cone_kind {
  RFOC_CONE_ZERO = 0,
  RFOC_CONE_NONNEG = 1,
  // Dimension is the matrix side; the slack holds the upper triangle in
  // column-major order with off-diagonal entries scaled by sqrt(2).
  RFOC_CONE_PSD_TRIANGLE = 2,
};

enum rfoc_solver_status {
  RFOC_STATUS_UNSOLVED = 0,
  RFOC_STATUS_SOLVED = 1,
  RFOC_STATUS_PRIMAL_INFEASIBLE = 2,
  RFOC_STATUS_DUAL_INFEASIBLE = 3,
  RFOC_STATUS_ALMOST_SOLVED = 4,
  RFOC_STATUS_ALMOST_PRIMAL_INFEASIBLE = 5,
  RFOC_STATUS_ALMOST_DUAL_INFEASIBLE = 6,
  RFOC_STATUS_MAX_ITERATIONS = 7,
  RFOC_STATUS_MAX_TIME = 8,
  RFOC_STATUS_NUMERICAL_ERROR = 9,
  RFOC_STATUS_INSUFFICIENT_PROGRESS = 10,
  RFOC_STATUS_OTHER = 11,
};

typedef struct {
  uint32_t max_iter;
  double time_limit;
  double tol_gap_abs;
  double tol_gap_rel;
  double tol_feas;
  uint8_t verbose;
} rfoc_clarabel_settings;

typedef struct {
  int32_t status;
  uint32_t iterations;
  double solve_time;
  double obj_val;
} rfoc_clarabel_info;

// Returns 0 when the solver ran (inspect info->status), a negative value on
// setup failure. On failure a message is written to msg (if non-null).
int32_t rfoc_clarabel_solve(size_t n, size_t m, const double* q,
                            const size_t* a_colptr, const size_t* a_rowval,
                            const double* a_nzval, const double* b,
                            size_t n_cones, const int32_t* cone_kinds,
                            const size_t* cone_dims,
                            const rfoc_clarabel_settings* settings,
                            double* x_out, rfoc_clarabel_info* info,
                            char* msg, size_t msg_len);

#ifdef __cplusplus
}
#endif
