//! Alternating scheduling / trajectory optimization and binary recovery.

use std::time::{Duration, Instant};

use crate::channel::{maxmin_objective, rate_table, RateTable};
use crate::error::{Error, Result};
use crate::lp::{solve_schedule, DEFAULT_LP_TOL};
use crate::sca::{solve_trajectory_qcqp, QcqpStatus, DEFAULT_QCQP_FEAS_TOL, DEFAULT_QCQP_TOL};
use crate::scenario::{validate_trajectory, Scenario, Schedule, Trajectory};

/// Allowed dip between consecutive trace entries from solver tolerances.
pub const TRACE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcdConfig {
    /// Stop when the fractional objective increase drops below this.
    pub epsilon: f64,
    pub max_outer_iters: usize,
    /// Sub-slots per slot for binary recovery.
    pub tau: usize,
    pub lp_tol: f64,
    pub qcqp_tol: f64,
    pub qcqp_feas_tol: f64,
}

impl Default for BcdConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            max_outer_iters: 200,
            tau: 100,
            lp_tol: DEFAULT_LP_TOL,
            qcqp_tol: DEFAULT_QCQP_TOL,
            qcqp_feas_tol: DEFAULT_QCQP_FEAS_TOL,
        }
    }
}

impl BcdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::NonPositiveParameter("epsilon".into()));
        }
        if self.tau == 0 {
            return Err(Error::NonPositiveParameter("tau".into()));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::NonPositiveParameter("max_iters".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIters,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIters => "max_iters",
        }
    }
}

/// Binary schedule over τ·N sub-slots and its max-min rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRecovery {
    pub tau: usize,
    pub schedule: Schedule,
    /// Waypoints repeated τ times; the UAV holds position within a slot.
    pub trajectory: Trajectory,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub scheme: String,
    /// η after the initial scheduling step, then after every iteration.
    pub eta_trace: Vec<f64>,
    /// Lower-bound objective returned by each trajectory step.
    pub lb_trace: Vec<f64>,
    pub final_schedule: Schedule,
    pub final_trajectory: Trajectory,
    pub eta_relaxed: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub binary: BinaryRecovery,
    /// η lost going from the relaxed to the binary schedule.
    pub binary_gap: f64,
    pub qcqp_fallbacks: usize,
    /// Users that ended up with no slot share at all.
    pub starved_users: Vec<usize>,
    pub wall_time: Duration,
}

/// Splits `tau` sub-slots among users with quotas `tau·share`, by largest
/// remainder with ties going to the lower user index.
pub fn apportion(shares: &[f64], tau: usize) -> Vec<usize> {
    let quotas: Vec<f64> = shares.iter().map(|s| s.max(0.0) * tau as f64).collect();
    let total = (quotas.iter().sum::<f64>().round() as usize).min(tau);
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q + 1e-9).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    let remainder = |i: usize| quotas[i] - counts[i] as f64;
    let rems: Vec<f64> = order.iter().map(|&i| remainder(i)).collect();
    order.sort_by(|&a, &b| rems[b].total_cmp(&rems[a]).then(a.cmp(&b)));
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Expands a relaxed schedule into a binary one over τ sub-slots per
/// slot. Sub-slots inside a slot go to users in index order. Returns the
/// binary schedule and its max-min rate on the expanded rate table.
pub fn binarize(rt: &RateTable, a: &Schedule, tau: usize) -> Result<(Schedule, f64)> {
    let k = a.num_users();
    let n = a.num_slots();
    if rt.num_users() != k || rt.num_slots() != n {
        return Err(Error::DimensionMismatch("rate table vs schedule".into()));
    }
    let mut bin = Schedule::zeros(k, n * tau);
    let mut shares = vec![0.0; k];
    for slot in 0..n {
        for (i, s) in shares.iter_mut().enumerate() {
            *s = a.get(i, slot);
        }
        let mut next = slot * tau;
        for (i, c) in apportion(&shares, tau).into_iter().enumerate() {
            for sub in next..next + c {
                bin.set(i, sub, 1.0);
            }
            next += c;
        }
    }
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| rt.row(i).iter().flat_map(|&r| std::iter::repeat_n(r, tau)).collect())
        .collect();
    let expanded = RateTable::from_rows(&rows)?;
    let eta = maxmin_objective(&expanded, &bin)?;
    Ok((bin, eta))
}

fn expand_trajectory(t: &Trajectory, tau: usize) -> Trajectory {
    Trajectory::new(
        t.waypoints()
            .iter()
            .flat_map(|&q| std::iter::repeat_n(q, tau))
            .collect(),
    )
}

/// Sub-slot refinement of a solved report: binary schedule over τ·N
/// sub-slots, the expanded trajectory, and the resulting η.
pub fn recover_binary(s: &Scenario, report: &SolveReport, tau: usize) -> Result<(Schedule, Trajectory, f64)> {
    if tau == 0 {
        return Err(Error::NonPositiveParameter("tau".into()));
    }
    let rt = RateTable::at_waypoints(s, report.final_trajectory.waypoints());
    let (schedule, eta) = binarize(&rt, &report.final_schedule, tau)?;
    Ok((schedule, expand_trajectory(&report.final_trajectory, tau), eta))
}

pub(crate) fn starved(a: &Schedule) -> Vec<usize> {
    (0..a.num_users())
        .filter(|&i| a.row(i).iter().all(|&v| v < 1e-12))
        .collect()
}

/// Assembles a report from a finished relaxed solution.
pub(crate) fn finish_report(
    s: &Scenario,
    scheme: &str,
    traces: (Vec<f64>, Vec<f64>),
    schedule: Schedule,
    trajectory: Trajectory,
    status: SolveStatus,
    qcqp_fallbacks: usize,
    tau: usize,
    started: Instant,
) -> Result<SolveReport> {
    let (eta_trace, lb_trace) = traces;
    let eta_relaxed = *eta_trace.last().expect("trace is never empty");
    let rt = RateTable::at_waypoints(s, trajectory.waypoints());
    let (bin_schedule, bin_eta) = binarize(&rt, &schedule, tau)?;
    Ok(SolveReport {
        scheme: scheme.to_string(),
        iterations: lb_trace.len(),
        starved_users: starved(&schedule),
        binary: BinaryRecovery {
            tau,
            schedule: bin_schedule,
            trajectory: expand_trajectory(&trajectory, tau),
            eta: bin_eta,
        },
        binary_gap: eta_relaxed - bin_eta,
        eta_trace,
        lb_trace,
        final_schedule: schedule,
        final_trajectory: trajectory,
        eta_relaxed,
        status,
        qcqp_fallbacks,
        wall_time: started.elapsed(),
    })
}

/// Alternates the scheduling LP and the trajectory QCQP from `init`
/// until the fractional increase of η drops below `cfg.epsilon`.
pub fn bcd_solve(s: &Scenario, init: &Trajectory, cfg: &BcdConfig) -> Result<SolveReport> {
    let started = Instant::now();
    cfg.validate()?;
    validate_trajectory(s, init, cfg.qcqp_feas_tol)?.into_result()?;

    let mut trajectory = init.clone();
    let mut schedule = Schedule::zeros(s.num_users(), s.num_slots());
    let mut eta_trace = Vec::new();
    let mut lb_trace = Vec::new();
    let mut fallbacks = 0;
    let mut status = SolveStatus::MaxIters;

    for iter in 0..cfg.max_outer_iters {
        let rt = rate_table(s, &trajectory)?;
        let (next_schedule, _) = solve_schedule(&rt, cfg.lp_tol)?;
        if iter == 0 {
            eta_trace.push(maxmin_objective(&rt, &next_schedule)?);
        }
        let step = solve_trajectory_qcqp(s, &next_schedule, &trajectory, cfg.qcqp_tol, cfg.qcqp_feas_tol)?;
        if step.status == QcqpStatus::Fallback {
            fallbacks += 1;
        }
        trajectory = step.trajectory;
        schedule = next_schedule;
        let eta = maxmin_objective(&rate_table(s, &trajectory)?, &schedule)?;
        lb_trace.push(step.objective);
        let prev = *eta_trace.last().expect("seeded above");
        eta_trace.push(eta);
        if (eta - prev) / prev.max(1e-12) < cfg.epsilon {
            status = SolveStatus::Converged;
            break;
        }
    }

    finish_report(
        s,
        "proposed",
        (eta_trace, lb_trace),
        schedule,
        trajectory,
        status,
        fallbacks,
        cfg.tau,
        started,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{PhysicalParams, Point2};

    #[test]
    fn apportion_worked_example() {
        assert_eq!(apportion(&[0.69, 0.31], 1), vec![1, 0]);
        assert_eq!(apportion(&[0.69, 0.31], 10), vec![7, 3]);
        assert_eq!(apportion(&[0.69, 0.31], 100), vec![69, 31]);
    }

    #[test]
    fn apportion_ties_and_idle_time() {
        assert_eq!(apportion(&[0.5, 0.5], 1), vec![1, 0]);
        assert_eq!(apportion(&[0.25, 0.25], 2), vec![1, 0]);
        assert_eq!(apportion(&[0.0, 0.0, 0.0], 5), vec![0, 0, 0]);
        assert_eq!(apportion(&[0.2, 0.2, 0.2], 10), vec![2, 2, 2]);
    }

    #[test]
    fn binary_schedule_is_identity_on_binary_input() {
        let rt = RateTable::from_rows(&[vec![4.0, 2.0], vec![1.0, 3.0]]).unwrap();
        let a = Schedule::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        for tau in [1, 3, 10] {
            let (bin, eta) = binarize(&rt, &a, tau).unwrap();
            assert!(bin.is_binary());
            assert_eq!(bin.num_slots(), 2 * tau);
            assert!((eta - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn sub_slots_are_contiguous_by_user() {
        let rt = RateTable::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let a = Schedule::from_rows(&[vec![0.69], vec![0.31]]).unwrap();
        let (bin, _) = binarize(&rt, &a, 10).unwrap();
        assert_eq!(bin.row(0), &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(bin.row(1), &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn config_validation() {
        let bad = BcdConfig {
            tau: 0,
            ..BcdConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = BcdConfig {
            epsilon: 0.0,
            ..BcdConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn single_user_converges_to_hover() {
        let w = Point2::new(200.0, -100.0);
        let s = Scenario::new(vec![w], PhysicalParams::reference(60.0, 120)).unwrap();
        let free: Vec<Point2> = (0..119)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / 119.0;
                w + Point2::new(5.0 * th.cos(), 5.0 * th.sin())
            })
            .collect();
        let init = Trajectory::closed(free);
        let report = bcd_solve(&s, &init, &BcdConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::Converged);
        assert!(report.iterations <= 3, "{}", report.iterations);
        let hover = 10001f64.log2();
        assert!((report.eta_relaxed - hover).abs() < 1e-4, "{}", report.eta_relaxed);
        assert!(report.binary_gap.abs() < 1e-9);
    }

    #[test]
    fn huge_epsilon_stops_after_one_iteration() {
        let users = vec![Point2::new(0.0, 0.0), Point2::new(400.0, 300.0)];
        let s = Scenario::new(users, PhysicalParams::reference(30.0, 60)).unwrap();
        let init = Trajectory::hover(Point2::new(200.0, 150.0), 60);
        let cfg = BcdConfig {
            epsilon: 1e300,
            ..BcdConfig::default()
        };
        let report = bcd_solve(&s, &init, &cfg).unwrap();
        assert_eq!(report.iterations, 1);
        assert_eq!(report.status, SolveStatus::Converged);
        assert!(report.eta_trace[1] >= report.eta_trace[0] - TRACE_TOL);
    }
}
