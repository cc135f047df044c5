//! Log-barrier Newton solver for the convex trajectory subproblem
//!
//! ```text
//! max η  s.t.  (1/N)·Σ_n α_i[n]·R_lb,i[n](q[n]) ≥ η   ∀i
//!              ‖q[n+1] − q[n]‖² ≤ S_max²             n = 1..N−1
//!              q[N] = q[1]
//! ```
//!
//! The closure equality is removed by optimizing the first N−1 waypoints
//! and aliasing the last one to the first. Positions are scaled by S_max
//! and centered on the user centroid so the travel constraints read
//! `‖Δu‖² ≤ 1`.
//!
//! The barrier Hessian is a cyclic block-tridiagonal part (travel
//! constraints plus the diagonal curvature of the rate constraints) and
//! one rank-one term per user. Ordering the cycle as `0, P−1, 1, P−2, ...`
//! turns the cyclic part into a band of half-width 5, so each Newton step
//! is a banded Cholesky plus a K×K Woodbury correction.

use super::banded::BandedSpd;
use super::bound::{build_bound, ScaBound};
use crate::error::{Error, Result};
use crate::scenario::{validate_trajectory, Point2, Scenario, Schedule, Trajectory};

pub const DEFAULT_QCQP_TOL: f64 = 1e-8;
pub const DEFAULT_QCQP_FEAS_TOL: f64 = 1e-6;

/// Schedule weights below this are left out of the constraint assembly.
const MIN_WEIGHT: f64 = 1e-12;
const BARRIER_GROWTH: f64 = 10.0;
const BARRIER_START: f64 = 1.0;
const ARMIJO: f64 = 0.25;
const BACKTRACK: f64 = 0.5;
const NEWTON_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 10_000;
const MAX_CENTERING: usize = 200;
/// Strict-interior margin on the scaled travel constraints.
const INTERIOR_MARGIN: f64 = 1e-8;
const MAX_CONTRACTION: f64 = 1e-3;
const ETA_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcqpStatus {
    Optimal,
    /// The solve failed or regressed; the anchor was returned unchanged.
    Fallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcqpSolution {
    pub trajectory: Trajectory,
    /// Lower-bound max-min rate at `trajectory`.
    pub objective: f64,
    /// Lower-bound max-min rate at the anchor (equal to the true one).
    pub anchor_objective: f64,
    pub status: QcqpStatus,
    pub newton_iters: usize,
    /// Worst travel-constraint excess in m² (≤ 0 when strictly feasible).
    pub max_constraint_violation: f64,
}

/// Point in the reduced variable space.
#[derive(Debug, Clone)]
struct Iterate {
    u: Vec<[f64; 2]>,
    eta: f64,
}

struct Problem {
    k: usize,
    p: usize,
    users: Vec<[f64; 2]>,
    /// K×P aggregated curvature weights in scaled units.
    coef: Vec<f64>,
    constant: Vec<f64>,
    edges: Vec<(usize, usize)>,
    /// Band position of each free node.
    pos: Vec<usize>,
}

const BAND: usize = 5;

fn band_positions(p: usize) -> Vec<usize> {
    let mut pos = vec![0; p];
    let (mut lo, mut hi) = (0usize, p);
    let mut next = 0;
    while lo < hi {
        pos[lo] = next;
        next += 1;
        lo += 1;
        if lo < hi {
            hi -= 1;
            pos[hi] = next;
            next += 1;
        }
    }
    pos
}

#[inline]
fn d2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

impl Problem {
    fn new(bound: &ScaBound, a: &Schedule, origin: Point2, scale: f64) -> Self {
        let k = bound.num_users();
        let n = bound.num_slots();
        let p = n - 1;
        let inv_n = 1.0 / n as f64;
        let users: Vec<[f64; 2]> = bound
            .users()
            .iter()
            .map(|&w| {
                let v = (w - origin) * (1.0 / scale);
                [v.x, v.y]
            })
            .collect();
        let mut coef = vec![0.0; k * p];
        let mut constant = vec![0.0; k];
        for i in 0..k {
            for slot in 0..n {
                let alpha = a.get(i, slot);
                if alpha < MIN_WEIGHT {
                    continue;
                }
                let node = if slot == p { 0 } else { slot };
                let curv = bound.curvature(i, slot);
                coef[i * p + node] += inv_n * alpha * curv * scale * scale;
                constant[i] += inv_n * alpha * (bound.intercept(i, slot) + curv * bound.anchor_dist2(i, slot));
            }
        }
        let edges = (0..p).map(|j| (j, (j + 1) % p)).filter(|(a, b)| a != b).collect();
        Self {
            k,
            p,
            users,
            coef,
            constant,
            edges,
            pos: band_positions(p),
        }
    }

    fn num_constraints(&self) -> usize {
        self.k + self.edges.len()
    }

    /// Rate constraint values f_i = η − value_i (≤ 0 when satisfied).
    fn rate_slacks(&self, x: &Iterate, out: &mut [f64]) {
        for (i, f) in out.iter_mut().enumerate() {
            let w = self.users[i];
            let spent: f64 = (0..self.p).map(|j| self.coef[i * self.p + j] * d2(x.u[j], w)).sum();
            *f = x.eta - self.constant[i] + spent;
        }
    }

    fn user_values(&self, x: &Iterate) -> Vec<f64> {
        let mut f = vec![0.0; self.k];
        self.rate_slacks(&Iterate { u: x.u.clone(), eta: 0.0 }, &mut f);
        f.iter().map(|v| -v).collect()
    }

    /// Travel constraint values g_e = ‖Δu‖² − 1.
    fn travel_slacks(&self, x: &Iterate, out: &mut [f64]) {
        for (g, &(a, b)) in out.iter_mut().zip(&self.edges) {
            *g = d2(x.u[b], x.u[a]) - 1.0;
        }
    }

    fn step(&self, x: &Iterate, dir: &Iterate, h: f64) -> Iterate {
        Iterate {
            u: x.u
                .iter()
                .zip(&dir.u)
                .map(|(u, d)| [u[0] + h * d[0], u[1] + h * d[1]])
                .collect(),
            eta: x.eta + h * dir.eta,
        }
    }
}

/// Gradient and Newton direction of the barrier function at one point.
struct NewtonSystem {
    grad_u: Vec<[f64; 2]>,
    grad_eta: f64,
    /// Cyclic part of the Hessian over the u block, in band order.
    m: BandedSpd,
    /// Rank-one factors: v_i over the u block, s_i on η.
    v: Vec<Vec<f64>>,
    s: Vec<f64>,
}

impl NewtonSystem {
    fn assemble(prob: &Problem, x: &Iterate, t: f64, f: &[f64], g: &[f64]) -> Self {
        let p = prob.p;
        let dim = 2 * p;
        let mut m = BandedSpd::zeros(dim, BAND);
        let mut grad_u = vec![[0.0; 2]; p];
        let mut grad_eta = -t;
        let mut v = vec![vec![0.0; dim]; prob.k];
        let mut s = vec![0.0; prob.k];
        let at = |node: usize, c: usize| 2 * prob.pos[node] + c;

        for i in 0..prob.k {
            let inv = 1.0 / -f[i];
            s[i] = inv;
            grad_eta += inv;
            let w = prob.users[i];
            for j in 0..p {
                let c = prob.coef[i * p + j];
                if c == 0.0 {
                    continue;
                }
                let gx = 2.0 * c * (x.u[j][0] - w[0]) * inv;
                let gy = 2.0 * c * (x.u[j][1] - w[1]) * inv;
                grad_u[j][0] += gx;
                grad_u[j][1] += gy;
                v[i][at(j, 0)] = gx;
                v[i][at(j, 1)] = gy;
                let h = 2.0 * c * inv;
                m.add(at(j, 0), at(j, 0), h);
                m.add(at(j, 1), at(j, 1), h);
            }
        }

        for (e, &(a, b)) in prob.edges.iter().enumerate() {
            let inv = 1.0 / -g[e];
            let d = [x.u[b][0] - x.u[a][0], x.u[b][1] - x.u[a][1]];
            let gv = [2.0 * d[0], 2.0 * d[1]];
            for c in 0..2 {
                grad_u[b][c] += gv[c] * inv;
                grad_u[a][c] -= gv[c] * inv;
            }
            let inv2 = inv * inv;
            for r in 0..2 {
                for c in 0..2 {
                    let outer = gv[r] * gv[c] * inv2 + if r == c { 2.0 * inv } else { 0.0 };
                    if r >= c {
                        m.add(at(a, r), at(a, c), outer);
                        m.add(at(b, r), at(b, c), outer);
                    }
                    m.add(at(b, r), at(a, c), -outer);
                }
            }
        }

        Self {
            grad_u,
            grad_eta,
            m,
            v,
            s,
        }
    }

    /// Solves `H d = −∇φ`; returns the direction and λ² = −∇φᵀd.
    fn direction(mut self, prob: &Problem) -> Option<(Iterate, f64)> {
        let p = prob.p;
        let k = prob.k;
        let dim = 2 * p;
        let ridge = 1e-14 * (1.0 + self.m.diag_max());
        for i in 0..dim {
            self.m.add(i, i, ridge);
        }
        self.m.factor().ok()?;

        let at = |node: usize, c: usize| 2 * prob.pos[node] + c;
        let mut rp = vec![0.0; dim];
        for j in 0..p {
            rp[at(j, 0)] = -self.grad_u[j][0];
            rp[at(j, 1)] = -self.grad_u[j][1];
        }
        let r_eta = -self.grad_eta;

        // Woodbury on the u block, Schur complement on η.
        let mut z0 = rp.clone();
        self.m.solve(&mut z0);
        let y: Vec<Vec<f64>> = self
            .v
            .iter()
            .map(|vi| {
                let mut yi = vi.clone();
                self.m.solve(&mut yi);
                yi
            })
            .collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut cap = vec![vec![0.0; k]; k];
        for r in 0..k {
            for c in 0..k {
                cap[r][c] = dot(&self.v[r], &y[c]) + if r == c { 1.0 } else { 0.0 };
            }
        }
        let a: Vec<f64> = self.v.iter().map(|vi| dot(vi, &z0)).collect();
        let ca = dense_spd_solve(&cap, &a)?;
        let cs = dense_spd_solve(&cap, &self.s)?;
        let denom = dot(&self.s, &cs);
        if !(denom > 0.0) {
            return None;
        }
        let d_eta = (r_eta - dot(&self.s, &ca)) / denom;
        let z: Vec<f64> = ca.iter().zip(&cs).map(|(x, y)| x + y * d_eta).collect();
        let mut du = z0;
        for (yi, zi) in y.iter().zip(&z) {
            for (d, yv) in du.iter_mut().zip(yi) {
                *d -= yv * zi;
            }
        }
        let dir = Iterate {
            u: (0..p).map(|j| [du[at(j, 0)], du[at(j, 1)]]).collect(),
            eta: d_eta,
        };
        // rp and r_eta hold −∇φ, so this is −∇φᵀd.
        let lambda2 = dot(&rp, &du) + r_eta * d_eta;
        if !lambda2.is_finite() || lambda2 < 0.0 {
            return None;
        }
        Some((dir, lambda2))
    }
}

/// Cholesky solve for a small dense SPD matrix.
fn dense_spd_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) {
            return None;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..n {
            let mut v = a[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k];
            }
            l[i][j] = v / l[j][j];
        }
    }
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[i][k] * x[k];
        }
        x[i] /= l[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            x[i] -= l[k][i] * x[k];
        }
        x[i] /= l[i][i];
    }
    Some(x)
}

/// Barrier value change φ(x_new) − φ(x_old), computed from slack ratios
/// so it stays accurate when t is large.
fn barrier_delta(t: f64, old: &Iterate, new: &Iterate, f_old: &[f64], f_new: &[f64], g_old: &[f64], g_new: &[f64]) -> f64 {
    let mut delta = -t * (new.eta - old.eta);
    for (a, b) in f_old.iter().zip(f_new) {
        delta -= (b / a).ln();
    }
    for (a, b) in g_old.iter().zip(g_new) {
        delta -= (b / a).ln();
    }
    delta
}

struct BarrierOutcome {
    x: Iterate,
    newton_iters: usize,
}

fn barrier_solve(prob: &Problem, start: Iterate, tol: f64) -> Option<BarrierOutcome> {
    let m = prob.num_constraints() as f64;
    let mut x = start;
    let mut t = BARRIER_START;
    let mut newton_iters = 0;
    let mut f = vec![0.0; prob.k];
    let mut g = vec![0.0; prob.edges.len()];
    let mut f_new = f.clone();
    let mut g_new = g.clone();

    loop {
        for _ in 0..MAX_CENTERING {
            if newton_iters >= MAX_NEWTON {
                return Some(BarrierOutcome { x, newton_iters });
            }
            prob.rate_slacks(&x, &mut f);
            prob.travel_slacks(&x, &mut g);
            let sys = NewtonSystem::assemble(prob, &x, t, &f, &g);
            let (dir, lambda2) = sys.direction(prob)?;
            newton_iters += 1;
            if lambda2 / 2.0 <= NEWTON_TOL {
                break;
            }
            let slope = -lambda2;
            let mut h = 1.0;
            let mut accepted = None;
            while h > 1e-20 {
                let cand = prob.step(&x, &dir, h);
                prob.rate_slacks(&cand, &mut f_new);
                prob.travel_slacks(&cand, &mut g_new);
                let interior = f_new.iter().chain(&g_new).all(|v| *v < 0.0);
                if interior && barrier_delta(t, &x, &cand, &f, &f_new, &g, &g_new) <= ARMIJO * h * slope {
                    accepted = Some(cand);
                    break;
                }
                h *= BACKTRACK;
            }
            match accepted {
                Some(cand) => x = cand,
                // No further progress at this precision.
                None => break,
            }
        }
        if m / t <= tol {
            return Some(BarrierOutcome { x, newton_iters });
        }
        t *= BARRIER_GROWTH;
    }
}

/// Solves the convex trajectory subproblem around `anchor` for a fixed
/// schedule. Never returns a trajectory whose lower-bound objective is
/// worse than the anchor's by more than `qcqp_tol`.
pub fn solve_trajectory_qcqp(
    s: &Scenario,
    a: &Schedule,
    anchor: &Trajectory,
    qcqp_tol: f64,
    qcqp_feas_tol: f64,
) -> Result<QcqpSolution> {
    let n = s.num_slots();
    if a.num_users() != s.num_users() || a.num_slots() != n {
        return Err(Error::DimensionMismatch(format!(
            "schedule is {}x{}, scenario needs {}x{}",
            a.num_users(),
            a.num_slots(),
            s.num_users(),
            n
        )));
    }
    validate_trajectory(s, anchor, qcqp_feas_tol)?.into_result()?;
    let bound = build_bound(s, anchor)?;
    let anchor_objective = bound.objective(a, anchor.waypoints())?;
    let fallback = |newton_iters| QcqpSolution {
        trajectory: anchor.clone(),
        objective: anchor_objective,
        anchor_objective,
        status: QcqpStatus::Fallback,
        newton_iters,
        max_constraint_violation: max_travel_excess(s, anchor),
    };

    let scale = s.s_max_m();
    let origin = Point2::centroid(s.users());
    let prob = Problem::new(&bound, a, origin, scale);

    let Some(start) = interior_start(&prob, anchor, origin, scale) else {
        return Ok(fallback(0));
    };
    let Some(out) = barrier_solve(&prob, start, qcqp_tol) else {
        return Ok(fallback(0));
    };

    let free: Vec<Point2> = out
        .x
        .u
        .iter()
        .map(|u| origin + Point2::new(u[0], u[1]) * scale)
        .collect();
    let trajectory = Trajectory::closed(free);
    let objective = bound.objective(a, trajectory.waypoints())?;
    let feasible = validate_trajectory(s, &trajectory, qcqp_feas_tol)?.is_feasible();
    if !feasible || !objective.is_finite() || objective < anchor_objective - qcqp_tol {
        return Ok(fallback(out.newton_iters));
    }
    Ok(QcqpSolution {
        max_constraint_violation: max_travel_excess(s, &trajectory),
        trajectory,
        objective,
        anchor_objective,
        status: QcqpStatus::Optimal,
        newton_iters: out.newton_iters,
    })
}

fn max_travel_excess(s: &Scenario, t: &Trajectory) -> f64 {
    let cap2 = s.s_max_m() * s.s_max_m();
    t.waypoints()
        .windows(2)
        .map(|w| w[0].dist2(w[1]) - cap2)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Contracts the anchor toward its centroid just enough to make every
/// travel constraint strictly feasible, then puts η slightly below the
/// smallest user value.
fn interior_start(prob: &Problem, anchor: &Trajectory, origin: Point2, scale: f64) -> Option<Iterate> {
    let p = prob.p;
    let mut u: Vec<[f64; 2]> = anchor.waypoints()[..p]
        .iter()
        .map(|&q| {
            let v = (q - origin) * (1.0 / scale);
            [v.x, v.y]
        })
        .collect();
    let worst = prob
        .edges
        .iter()
        .map(|&(a, b)| d2(u[a], u[b]))
        .fold(0.0_f64, f64::max);
    let limit = 1.0 - INTERIOR_MARGIN;
    if worst > limit {
        let factor = (limit / worst).sqrt();
        if 1.0 - factor > MAX_CONTRACTION {
            return None;
        }
        let c = u.iter().fold([0.0, 0.0], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
        let c = [c[0] / p as f64, c[1] / p as f64];
        for v in &mut u {
            v[0] = c[0] + factor * (v[0] - c[0]);
            v[1] = c[1] + factor * (v[1] - c[1]);
        }
    }
    let x = Iterate { u, eta: 0.0 };
    let values = prob.user_values(&x);
    let lowest = values.iter().copied().fold(f64::INFINITY, f64::min);
    Some(Iterate {
        eta: lowest - ETA_MARGIN,
        ..x
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scenario::PhysicalParams;

    #[test]
    fn band_order_keeps_cycle_neighbours_close() {
        for p in 1..40 {
            let pos = band_positions(p);
            let mut seen = pos.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..p).collect::<Vec<_>>());
            for j in 0..p {
                let a = pos[j];
                let b = pos[(j + 1) % p];
                assert!(a.abs_diff(b) <= 2, "p={p} j={j}");
            }
        }
    }

    fn small_problem() -> (Scenario, Schedule, Trajectory) {
        let users = vec![
            Point2::new(0.0, 0.0),
            Point2::new(300.0, 100.0),
            Point2::new(-150.0, 250.0),
        ];
        let s = Scenario::new(users, PhysicalParams::reference(40.0, 16)).unwrap();
        let n = s.num_slots();
        let mut rows = vec![vec![0.0; n]; 3];
        for slot in 0..n {
            rows[slot % 3][slot] = 0.7;
            rows[(slot + 1) % 3][slot] = 0.3;
        }
        let a = Schedule::from_rows(&rows).unwrap();
        let free: Vec<Point2> = (0..n - 1)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / (n - 1) as f64;
                Point2::new(60.0 * th.cos(), 60.0 * th.sin())
            })
            .collect();
        (s, a, Trajectory::closed(free))
    }

    /// Dense Hessian of the barrier, assembled independently of the
    /// band / Woodbury path.
    fn dense_hessian(prob: &Problem, x: &Iterate, f: &[f64], g: &[f64]) -> Vec<Vec<f64>> {
        let p = prob.p;
        let dim = 2 * p + 1;
        let mut h = vec![vec![0.0; dim]; dim];
        for i in 0..prob.k {
            let inv = 1.0 / -f[i];
            let mut grad = vec![0.0; dim];
            grad[2 * p] = 1.0;
            for j in 0..p {
                let c = prob.coef[i * p + j];
                grad[2 * j] = 2.0 * c * (x.u[j][0] - prob.users[i][0]);
                grad[2 * j + 1] = 2.0 * c * (x.u[j][1] - prob.users[i][1]);
                h[2 * j][2 * j] += 2.0 * c * inv;
                h[2 * j + 1][2 * j + 1] += 2.0 * c * inv;
            }
            for r in 0..dim {
                for c in 0..dim {
                    h[r][c] += grad[r] * grad[c] * inv * inv;
                }
            }
        }
        for (e, &(a, b)) in prob.edges.iter().enumerate() {
            let inv = 1.0 / -g[e];
            let mut grad = vec![0.0; dim];
            for c in 0..2 {
                let d = 2.0 * (x.u[b][c] - x.u[a][c]);
                grad[2 * b + c] += d;
                grad[2 * a + c] -= d;
            }
            for r in 0..dim {
                for c in 0..dim {
                    h[r][c] += grad[r] * grad[c] * inv * inv;
                }
            }
            for c in 0..2 {
                h[2 * a + c][2 * a + c] += 2.0 * inv;
                h[2 * b + c][2 * b + c] += 2.0 * inv;
                h[2 * a + c][2 * b + c] -= 2.0 * inv;
                h[2 * b + c][2 * a + c] -= 2.0 * inv;
            }
        }
        h
    }

    #[test]
    fn newton_system_is_positive_definite_and_matches_dense_solve() {
        let (s, a, anchor) = small_problem();
        let bound = build_bound(&s, &anchor).unwrap();
        let origin = Point2::centroid(s.users());
        let prob = Problem::new(&bound, &a, origin, s.s_max_m());
        let x = interior_start(&prob, &anchor, origin, s.s_max_m()).unwrap();
        let mut f = vec![0.0; prob.k];
        let mut g = vec![0.0; prob.edges.len()];
        prob.rate_slacks(&x, &mut f);
        prob.travel_slacks(&x, &mut g);
        assert!(f.iter().chain(&g).all(|v| *v < 0.0));

        let t = 3.0;
        let sys = NewtonSystem::assemble(&prob, &x, t, &f, &g);
        let mut grad = Vec::new();
        for gu in &sys.grad_u {
            grad.extend_from_slice(gu);
        }
        grad.push(sys.grad_eta);
        let (dir, lambda2) = sys.direction(&prob).unwrap();

        let h = dense_hessian(&prob, &x, &f, &g);
        let rhs: Vec<f64> = grad.iter().map(|v| -v).collect();
        // Cholesky succeeding certifies positive definiteness.
        let dense = dense_spd_solve(&h, &rhs).expect("Hessian must be positive definite");
        let mut flat = Vec::new();
        for du in &dir.u {
            flat.extend_from_slice(du);
        }
        flat.push(dir.eta);
        for (a, b) in flat.iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-7 * (1.0 + b.abs()), "{a} vs {b}");
        }
        let dense_l2: f64 = -grad.iter().zip(&dense).map(|(g, d)| g * d).sum::<f64>();
        assert!((lambda2 - dense_l2).abs() <= 1e-8 * (1.0 + dense_l2.abs()));
    }

    #[test]
    fn improves_on_the_anchor() {
        let (s, a, anchor) = small_problem();
        let sol = solve_trajectory_qcqp(&s, &a, &anchor, DEFAULT_QCQP_TOL, DEFAULT_QCQP_FEAS_TOL).unwrap();
        assert_eq!(sol.status, QcqpStatus::Optimal);
        assert!(sol.objective > sol.anchor_objective + 1e-3);
        assert!(sol.max_constraint_violation <= DEFAULT_QCQP_FEAS_TOL);
        assert_eq!(sol.trajectory.waypoints()[0], sol.trajectory.waypoints()[s.num_slots() - 1]);
    }

    #[test]
    fn rejects_mismatched_schedule() {
        let (s, _, anchor) = small_problem();
        let a = Schedule::zeros(2, s.num_slots());
        assert!(solve_trajectory_qcqp(&s, &a, &anchor, 1e-8, 1e-6).is_err());
    }
}
