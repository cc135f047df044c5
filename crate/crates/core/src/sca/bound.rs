use std::f64::consts::LOG2_E;

use crate::channel::rate_at_dist2;
use crate::error::{Error, Result};
use crate::scenario::{Point2, Scenario, Schedule, Trajectory};

/// Concave quadratic under-estimator of every slot rate, tangent at an
/// anchor trajectory:
///
/// `R_lb(q) = B − A·(‖q − w_i‖² − ‖q_anchor[n] − w_i‖²)`
///
/// The rate is convex in the squared distance, so its first-order
/// expansion in that variable is a global lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaBound {
    users: Vec<Point2>,
    num_slots: usize,
    curvature: Vec<f64>,
    intercept: Vec<f64>,
    anchor_dist2: Vec<f64>,
    anchor: Trajectory,
}

/// Tangent bound coefficients around `anchor`.
pub fn build_bound(s: &Scenario, anchor: &Trajectory) -> Result<ScaBound> {
    let n = s.num_slots();
    if anchor.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: anchor.len(),
        });
    }
    let g0 = s.gamma0();
    let h = s.altitude_m();
    let h2 = h * h;
    let k = s.num_users();
    let mut curvature = Vec::with_capacity(k * n);
    let mut intercept = Vec::with_capacity(k * n);
    let mut anchor_dist2 = Vec::with_capacity(k * n);
    for &w in s.users() {
        for &q in anchor.waypoints() {
            let d = q.dist2(w);
            let base = h2 + d;
            curvature.push(g0 * LOG2_E / (base * (base + g0)));
            intercept.push(rate_at_dist2(g0, h, d));
            anchor_dist2.push(d);
        }
    }
    Ok(ScaBound {
        users: s.users().to_vec(),
        num_slots: n,
        curvature,
        intercept,
        anchor_dist2,
        anchor: anchor.clone(),
    })
}

impl ScaBound {
    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn anchor(&self) -> &Trajectory {
        &self.anchor
    }

    pub fn users(&self) -> &[Point2] {
        &self.users
    }

    fn idx(&self, i: usize, n: usize) -> Result<usize> {
        if i >= self.users.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.users.len(),
            });
        }
        if n >= self.num_slots {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.num_slots,
            });
        }
        Ok(i * self.num_slots + n)
    }

    /// Curvature coefficient A (bps/Hz per m²).
    pub fn curvature(&self, i: usize, n: usize) -> f64 {
        self.curvature[i * self.num_slots + n]
    }

    /// Intercept B, the exact rate at the anchor.
    pub fn intercept(&self, i: usize, n: usize) -> f64 {
        self.intercept[i * self.num_slots + n]
    }

    /// ‖q_anchor[n] − w_i‖².
    pub fn anchor_dist2(&self, i: usize, n: usize) -> f64 {
        self.anchor_dist2[i * self.num_slots + n]
    }

    /// Lower-bound rate of user `i` in slot `n` with the UAV at `q`.
    pub fn lower_bound_rate(&self, q: Point2, i: usize, n: usize) -> Result<f64> {
        let k = self.idx(i, n)?;
        Ok(self.eval(k, q.dist2(self.users[i])))
    }

    #[inline]
    fn eval(&self, k: usize, d2: f64) -> f64 {
        self.intercept[k] - self.curvature[k] * (d2 - self.anchor_dist2[k])
    }

    /// Gradient of the bound with respect to `q`.
    pub fn gradient(&self, q: Point2, i: usize, n: usize) -> Result<Point2> {
        let k = self.idx(i, n)?;
        Ok((q - self.users[i]) * (-2.0 * self.curvature[k]))
    }

    /// Per-user `(1/N)·Σ_n α_i[n]·R_lb` at the given waypoints.
    pub fn user_bounds(&self, a: &Schedule, waypoints: &[Point2]) -> Result<Vec<f64>> {
        if a.num_users() != self.users.len() || a.num_slots() != self.num_slots || waypoints.len() != self.num_slots {
            return Err(Error::DimensionMismatch("bound / schedule / trajectory sizes differ".into()));
        }
        let inv_n = 1.0 / self.num_slots as f64;
        Ok((0..self.users.len())
            .map(|i| {
                let w = self.users[i];
                let total: f64 = waypoints
                    .iter()
                    .enumerate()
                    .map(|(n, &q)| a.get(i, n) * self.eval(i * self.num_slots + n, q.dist2(w)))
                    .sum();
                total * inv_n
            })
            .collect())
    }

    /// min_i of [`ScaBound::user_bounds`]; equals the true max-min rate
    /// when evaluated at the anchor.
    pub fn objective(&self, a: &Schedule, waypoints: &[Point2]) -> Result<f64> {
        Ok(self
            .user_bounds(a, waypoints)?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }
}
