//! C-ABI shim over Clarabel's default solver, limited to the zero,
//! nonnegative and PSD-triangle cones.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
pub struct RfocClarabelSettings {
    pub max_iter: u32,
    pub time_limit: f64,
    pub tol_gap_abs: f64,
    pub tol_gap_rel: f64,
    pub tol_feas: f64,
    pub verbose: u8,
}

#[repr(C)]
pub struct RfocClarabelInfo {
    pub status: i32,
    pub iterations: u32,
    pub solve_time: f64,
    pub obj_val: f64,
}

fn status_code(s: SolverStatus) -> i32 {
    match s {
        SolverStatus::Unsolved => 0,
        SolverStatus::Solved => 1,
        SolverStatus::PrimalInfeasible => 2,
        SolverStatus::DualInfeasible => 3,
        SolverStatus::AlmostSolved => 4,
        SolverStatus::AlmostPrimalInfeasible => 5,
        SolverStatus::AlmostDualInfeasible => 6,
        SolverStatus::MaxIterations => 7,
        SolverStatus::MaxTime => 8,
        SolverStatus::NumericalError => 9,
        SolverStatus::InsufficientProgress => 10,
        _ => 11,
    }
}

unsafe fn write_msg(msg: *mut c_char, msg_len: usize, text: &str) {
    if msg.is_null() || msg_len == 0 {
        return;
    }
    let bytes = text.as_bytes();
    let len = bytes.len().min(msg_len - 1);
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), msg as *mut u8, len);
    *msg.add(len) = 0;
}

/// # Safety
/// All pointers must reference arrays of the sizes implied by `n`, `m`,
/// `a_colptr[n]` and `n_cones`.
#[no_mangle]
pub unsafe extern "C" fn rfoc_clarabel_solve(
    n: usize,
    m: usize,
    q: *const f64,
    a_colptr: *const usize,
    a_rowval: *const usize,
    a_nzval: *const f64,
    b: *const f64,
    n_cones: usize,
    cone_kinds: *const i32,
    cone_dims: *const usize,
    settings: *const RfocClarabelSettings,
    x_out: *mut f64,
    info: *mut RfocClarabelInfo,
    msg: *mut c_char,
    msg_len: usize,
) -> i32 {
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<(), String> {
        let colptr = std::slice::from_raw_parts(a_colptr, n + 1).to_vec();
        let nnz = colptr[n];
        let rowval = std::slice::from_raw_parts(a_rowval, nnz).to_vec();
        let nzval = std::slice::from_raw_parts(a_nzval, nnz).to_vec();
        let a = CscMatrix::new(m, n, colptr, rowval, nzval);
        let p = CscMatrix::<f64>::zeros((n, n));
        let q = std::slice::from_raw_parts(q, n).to_vec();
        let b = std::slice::from_raw_parts(b, m).to_vec();

        let kinds = std::slice::from_raw_parts(cone_kinds, n_cones);
        let dims = std::slice::from_raw_parts(cone_dims, n_cones);
        let mut cones = Vec::with_capacity(n_cones);
        for (k, d) in kinds.iter().zip(dims.iter()) {
            cones.push(match *k {
                0 => SupportedConeT::ZeroConeT(*d),
                1 => SupportedConeT::NonnegativeConeT(*d),
                2 => SupportedConeT::PSDTriangleConeT(*d),
                other => return Err(format!("unknown cone kind {other}")),
            });
        }

        let user = &*settings;
        let mut s = DefaultSettings::<f64>::default();
        s.max_iter = user.max_iter;
        s.time_limit = user.time_limit;
        s.tol_gap_abs = user.tol_gap_abs;
        s.tol_gap_rel = user.tol_gap_rel;
        s.tol_feas = user.tol_feas;
        s.verbose = user.verbose != 0;

        let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, s)
            .map_err(|e| format!("{e:?}"))?;
        solver.solve();

        let x = std::slice::from_raw_parts_mut(x_out, n);
        x.copy_from_slice(&solver.solution.x);
        let out = &mut *info;
        out.status = status_code(solver.solution.status);
        out.iterations = solver.solution.iterations;
        out.solve_time = solver.solution.solve_time;
        out.obj_val = solver.solution.obj_val;
        Ok(())
    }));
    match result {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            write_msg(msg, msg_len, &e);
            -1
        }
        Err(_) => {
            write_msg(msg, msg_len, "clarabel panicked");
            -2
        }
    }
}
