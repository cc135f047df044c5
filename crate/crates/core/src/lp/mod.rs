//! Dense linear programming.
//!
//! [`solve_lp`] is a bounded-variable revised simplex with an explicit
//! basis inverse. The scheduling subproblem is assembled in [`scheduling`].

mod simplex;
pub mod scheduling;

pub use scheduling::{build_scheduling_lp, extract_schedule, solve_schedule};
pub use simplex::{solve_lp, solve_lp_warm};

use crate::error::{Error, Result};

/// Default optimality / feasibility tolerance.
pub const DEFAULT_LP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    /// a·x ≤ b
    Le,
    /// a·x = b
    Eq,
    /// a·x ≥ b
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// An LP `opt cᵀx  s.t.  rows·x (≤,=,≥) rhs,  lower ≤ x ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpStandardForm {
    pub sense: ObjectiveSense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub senses: Vec<RowSense>,
    /// May be `-inf`.
    pub lower: Vec<f64>,
    /// May be `+inf`.
    pub upper: Vec<f64>,
}

impl LpStandardForm {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let m = self.num_rows();
        if self.rhs.len() != m || self.senses.len() != m {
            return Err(Error::DimensionMismatch("rhs/senses vs rows".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch("bounds vs objective".into()));
        }
        if let Some(r) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("row {r} has wrong length")));
        }
        let finite = self.objective.iter().chain(self.rhs.iter()).chain(self.rows.iter().flatten());
        if finite.clone().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("LP coefficients must be finite".into()));
        }
        for j in 0..n {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(Error::InvalidConfig(format!("bad bounds on variable {j}")));
            }
        }
        Ok(())
    }

    /// Objective value at `x` in the problem's own sense.
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for (i, row) in self.rows.iter().enumerate() {
            let ax: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
            let viol = match self.senses[i] {
                RowSense::Le => ax - self.rhs[i],
                RowSense::Ge => self.rhs[i] - ax,
                RowSense::Eq => (ax - self.rhs[i]).abs(),
            };
            worst = worst.max(viol);
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Basis description used for warm starts. Column indices `>= num_vars`
/// refer to the slack of row `index - num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub basic: Vec<usize>,
    pub at_upper: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
    pub iterations: usize,
    /// Largest row or bound violation of `values`.
    pub primal_residual: f64,
    /// Most negative reduced cost (in minimization form) left at termination.
    pub max_dual_infeasibility: f64,
    pub basis: Option<Basis>,
}
