//! Circular initialization, the two fixed-trajectory baselines and the
//! single-user rate upper bound.

use std::f64::consts::PI;
use std::time::Instant;

use crate::channel::{maxmin_objective, rate_at_dist2, rate_table, RateTable};
use crate::error::{Error, Result};
use crate::lp::solve_schedule;
use crate::optimizer::{binarize, finish_report, BcdConfig, SolveReport, SolveStatus};
use crate::scenario::{Point2, Scenario, Schedule, Trajectory, DEFAULT_FEAS_TOL};

/// Center and radius of a circular trajectory, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSpec {
    pub center: Point2,
    pub radius: f64,
}

/// Chord between consecutive waypoints of an `n`-slot circle.
pub fn circle_chord(radius: f64, num_slots: usize) -> f64 {
    if num_slots < 3 {
        return 0.0;
    }
    2.0 * radius * (PI / (num_slots - 1) as f64).sin()
}

/// Smallest slot count of at least `from` (and at least 3) for which a
/// circle of `radius` flown once per `period_s` respects the per-slot
/// travel cap. `None` when the circumference is beyond `v_max·period` and
/// no slot count works.
pub fn min_slots_for_circle(radius: f64, v_max_mps: f64, period_s: f64, from: usize) -> Option<usize> {
    let budget = v_max_mps * period_s;
    if 2.0 * PI * radius >= budget {
        return None;
    }
    let fits = |n: usize| circle_chord(radius, n) <= budget / n as f64;
    let from = from.max(3);
    // n·sin(π/(n−1)) peaks at n = 5 and decreases towards π afterwards.
    if let Some(n) = (from..8).find(|&n| fits(n)) {
        return Some(n);
    }
    let from = from.max(8);
    if fits(from) {
        return Some(from);
    }
    let mut hi = 2 * from;
    while !fits(hi) {
        hi *= 2;
    }
    let mut lo = from;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Waypoints of the circle, one lap per period, starting at angle zero.
/// Fails when a chord exceeds the per-slot travel cap.
pub fn circle_trajectory(s: &Scenario, spec: &CircleSpec) -> Result<Trajectory> {
    if !(spec.radius >= 0.0) || !spec.radius.is_finite() || !spec.center.is_finite() {
        return Err(Error::InvalidConfig(format!("bad circle radius {}", spec.radius)));
    }
    let n = s.num_slots();
    let s_max = s.s_max_m();
    let chord = circle_chord(spec.radius, n);
    if chord * chord > s_max * s_max + DEFAULT_FEAS_TOL {
        return Err(Error::CircleChordTooLong {
            chord_m: chord,
            s_max_m: s_max,
            min_slots: min_slots_for_circle(spec.radius, s.v_max_mps(), s.period_s(), n + 1),
        });
    }
    let free = (0..n - 1)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / (n - 1) as f64;
            spec.center + Point2::new(th.cos(), th.sin()) * spec.radius
        })
        .collect();
    Ok(Trajectory::closed(free))
}

/// Circle centered on the users with half their spread as radius, capped
/// so one lap fits the period at maximum speed, slot by slot.
pub fn default_circle(s: &Scenario) -> CircleSpec {
    let center = Point2::centroid(s.users());
    let spread = s.users().iter().map(|w| w.dist(center)).fold(0.0, f64::max);
    let mut r_max = s.v_max_mps() * s.period_s() / (2.0 * PI);
    let n = s.num_slots();
    if n >= 3 {
        r_max = r_max.min(s.s_max_m() / (2.0 * (PI / (n - 1) as f64).sin()));
    }
    CircleSpec {
        center,
        radius: r_max.min(spread / 2.0),
    }
}

pub fn circular_init(s: &Scenario) -> Result<(CircleSpec, Trajectory)> {
    let spec = default_circle(s);
    let t = circle_trajectory(s, &spec)?;
    Ok((spec, t))
}

/// `(1/K)·log2(1 + γ0/H²)`: every user served by a UAV hovering right
/// above it for a 1/K share of the time.
pub fn rate_upper_bound(s: &Scenario) -> f64 {
    rate_at_dist2(s.gamma0(), s.altitude_m(), 0.0) / s.num_users() as f64
}

fn fixed_trajectory_report(s: &Scenario, scheme: &str, t: Trajectory, cfg: &BcdConfig, started: Instant) -> Result<SolveReport> {
    let rt = rate_table(s, &t)?;
    let (schedule, _) = solve_schedule(&rt, cfg.lp_tol)?;
    let eta = maxmin_objective(&rt, &schedule)?;
    finish_report(
        s,
        scheme,
        (vec![eta], Vec::new()),
        schedule,
        t,
        SolveStatus::Converged,
        0,
        cfg.tau,
        started,
    )
}

/// UAV parked above the user centroid. The LP is solved on a single
/// slot and replicated, so η does not depend on the period or slot count.
pub fn static_uav_baseline(s: &Scenario, cfg: &BcdConfig) -> Result<SolveReport> {
    let started = Instant::now();
    cfg.validate()?;
    let center = Point2::centroid(s.users());
    let one = RateTable::at_waypoints(s, &[center]);
    let (single, _) = solve_schedule(&one, cfg.lp_tol)?;
    let eta = maxmin_objective(&one, &single)?;
    let (_, eta_bin) = binarize(&one, &single, cfg.tau)?;

    let n = s.num_slots();
    let rows: Vec<Vec<f64>> = (0..s.num_users()).map(|i| vec![single.get(i, 0); n]).collect();
    let schedule = Schedule::from_rows(&rows)?;
    let mut report = finish_report(
        s,
        "static",
        (vec![eta], Vec::new()),
        schedule,
        Trajectory::hover(center, n),
        SolveStatus::Converged,
        0,
        cfg.tau,
        started,
    )?;
    report.binary.eta = eta_bin;
    report.binary_gap = eta - eta_bin;
    Ok(report)
}

/// The circular initialization flown as is, with an optimized schedule.
pub fn circular_baseline(s: &Scenario, cfg: &BcdConfig) -> Result<SolveReport> {
    let started = Instant::now();
    cfg.validate()?;
    let (_, t) = circular_init(s)?;
    fixed_trajectory_report(s, "circular", t, cfg, started)
}
