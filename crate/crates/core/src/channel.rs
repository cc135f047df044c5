//! Line-of-sight channel and rate evaluation.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::scenario::{validate_trajectory, Point2, Scenario, Schedule, Trajectory, DEFAULT_FEAS_TOL};

/// Achievable rate in bps/Hz at squared horizontal distance `d2`.
#[inline]
pub fn rate_at_dist2(gamma0: f64, altitude_m: f64, d2: f64) -> f64 {
    (gamma0 / (altitude_m * altitude_m + d2)).ln_1p() / LN_2
}

/// Rate of user `user` when the UAV hovers at `q`.
pub fn slot_rate(s: &Scenario, q: Point2, user: usize) -> Result<f64> {
    let w = s.user(user)?;
    Ok(rate_at_dist2(s.gamma0(), s.altitude_m(), q.dist2(w)))
}

/// K×N per-slot rates, row-major by user.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    num_users: usize,
    num_slots: usize,
    rates: Vec<f64>,
}

impl RateTable {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let num_users = rows.len();
        let num_slots = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != num_slots) {
            return Err(Error::DimensionMismatch("ragged rate rows".into()));
        }
        let rates: Vec<f64> = rows.iter().flatten().copied().collect();
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidConfig("rates must be finite and non-negative".into()));
        }
        Ok(Self {
            num_users,
            num_slots,
            rates,
        })
    }

    /// Rates for arbitrary waypoints, without any feasibility check.
    pub fn at_waypoints(s: &Scenario, waypoints: &[Point2]) -> Self {
        let (g0, h) = (s.gamma0(), s.altitude_m());
        let rates = s
            .users()
            .iter()
            .flat_map(|&w| waypoints.iter().map(move |&q| rate_at_dist2(g0, h, q.dist2(w))))
            .collect();
        Self {
            num_users: s.num_users(),
            num_slots: waypoints.len(),
            rates,
        }
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn get(&self, user: usize, slot: usize) -> f64 {
        self.rates[user * self.num_slots + slot]
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.rates[user * self.num_slots..(user + 1) * self.num_slots]
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rates: self.rates.iter().map(|r| r * factor).collect(),
            ..self.clone()
        }
    }
}

/// Rate table for a feasible trajectory.
pub fn rate_table(s: &Scenario, t: &Trajectory) -> Result<RateTable> {
    validate_trajectory(s, t, DEFAULT_FEAS_TOL)?.into_result()?;
    Ok(RateTable::at_waypoints(s, t.waypoints()))
}

fn check_dims(rt: &RateTable, a: &Schedule) -> Result<()> {
    if rt.num_users() != a.num_users() || rt.num_slots() != a.num_slots() {
        return Err(Error::DimensionMismatch(format!(
            "rates {}x{} vs schedule {}x{}",
            rt.num_users(),
            rt.num_slots(),
            a.num_users(),
            a.num_slots()
        )));
    }
    Ok(())
}

/// Per-user average rate (1/N)·Σ_n α_i[n]·R_i[n].
pub fn user_average_rates(rt: &RateTable, a: &Schedule) -> Result<Vec<f64>> {
    check_dims(rt, a)?;
    let n = rt.num_slots() as f64;
    Ok((0..rt.num_users())
        .map(|i| {
            let total: f64 = rt.row(i).iter().zip(a.row(i)).map(|(r, al)| r * al).sum();
            total / n
        })
        .collect())
}

/// Minimum average rate over all users.
pub fn maxmin_objective(rt: &RateTable, a: &Schedule) -> Result<f64> {
    Ok(user_average_rates(rt, a)?
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}
