//! Successive convex approximation of the trajectory subproblem.

mod banded;
mod bound;
mod qcqp;

pub use bound::{build_bound, ScaBound};
pub use qcqp::{
    solve_trajectory_qcqp, QcqpSolution, QcqpStatus, DEFAULT_QCQP_FEAS_TOL, DEFAULT_QCQP_TOL,
};
