use super::{Basis, LpSolution, LpStandardForm, LpStatus, ObjectiveSense, RowSense};
use crate::error::Result;

const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_RUN_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

struct Simplex {
    m: usize,
    n_struct: usize,
    /// Sparse columns: structural, then one slack per row, then artificials.
    cols: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    rhs: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    head: Vec<usize>,
    binv: Vec<f64>,
    tol: f64,
    iterations: usize,
    max_iters: usize,
    since_refactor: usize,
    bland: bool,
    degenerate_run: usize,
}

fn resting_state(lo: f64, hi: f64) -> (VarState, f64) {
    if lo.is_finite() {
        (VarState::AtLower, lo)
    } else if hi.is_finite() {
        (VarState::AtUpper, hi)
    } else {
        (VarState::Free, 0.0)
    }
}

impl Simplex {
    /// Structural and slack columns, everything nonbasic.
    fn skeleton(lp: &LpStandardForm, tol: f64, max_iters: usize) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in lp.rows.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        let mut lo = lp.lower.clone();
        let mut hi = lp.upper.clone();
        for (i, sense) in lp.senses.iter().enumerate() {
            cols.push(vec![(i, 1.0)]);
            let (l, h) = match sense {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
                RowSense::Eq => (0.0, 0.0),
            };
            lo.push(l);
            hi.push(h);
        }
        let mut cost: Vec<f64> = match lp.sense {
            ObjectiveSense::Minimize => lp.objective.clone(),
            ObjectiveSense::Maximize => lp.objective.iter().map(|c| -c).collect(),
        };
        cost.resize(n + m, 0.0);

        let mut x = vec![0.0; n + m];
        let mut state = vec![VarState::AtLower; n + m];
        for j in 0..n + m {
            let (st, v) = resting_state(lo[j], hi[j]);
            state[j] = st;
            x[j] = v;
        }
        Self {
            m,
            n_struct: n,
            cols,
            lo,
            hi,
            cost,
            rhs: lp.rhs.clone(),
            x,
            state,
            head: Vec::with_capacity(m),
            binv: vec![0.0; m * m],
            tol,
            iterations: 0,
            max_iters,
            since_refactor: 0,
            bland: false,
            degenerate_run: 0,
        }
    }

    /// Slack basis where possible, artificial columns elsewhere.
    fn cold_start(&mut self) -> bool {
        let residual = self.nonbasic_residual();
        let mut needs_phase_one = false;
        self.head.clear();
        for (i, &r) in residual.iter().enumerate() {
            let slack = self.n_struct + i;
            if r >= self.lo[slack] && r <= self.hi[slack] {
                self.state[slack] = VarState::Basic;
                self.x[slack] = r;
                self.head.push(slack);
            } else {
                let bound = r.clamp(self.lo[slack], self.hi[slack]);
                self.x[slack] = bound;
                self.state[slack] = if bound == self.lo[slack] {
                    VarState::AtLower
                } else {
                    VarState::AtUpper
                };
                let sign = if r > bound { 1.0 } else { -1.0 };
                let art = self.cols.len();
                self.cols.push(vec![(i, sign)]);
                self.lo.push(0.0);
                self.hi.push(f64::INFINITY);
                self.cost.push(0.0);
                self.x.push((r - bound).abs());
                self.state.push(VarState::Basic);
                self.head.push(art);
                needs_phase_one = true;
            }
        }
        let m = self.m;
        self.binv.iter_mut().for_each(|v| *v = 0.0);
        for (r, &j) in self.head.iter().enumerate() {
            self.binv[r * m + r] = 1.0 / self.cols[j][0].1;
        }
        needs_phase_one
    }

    fn warm_start(&mut self, basis: &Basis) -> bool {
        let total = self.n_struct + self.m;
        if basis.basic.len() != self.m || basis.basic.iter().any(|&j| j >= total) {
            return false;
        }
        let mut seen = vec![false; total];
        for &j in &basis.basic {
            if std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        for j in 0..total {
            let (st, v) = if seen[j] {
                (VarState::Basic, 0.0)
            } else if basis.at_upper.contains(&j) && self.hi[j].is_finite() {
                (VarState::AtUpper, self.hi[j])
            } else {
                resting_state(self.lo[j], self.hi[j])
            };
            self.state[j] = st;
            self.x[j] = v;
        }
        self.head = basis.basic.clone();
        if !self.refactor() {
            return false;
        }
        let slack = 10.0 * self.tol;
        self.head
            .iter()
            .all(|&j| self.x[j] >= self.lo[j] - slack && self.x[j] <= self.hi[j] + slack)
    }

    /// b − N·x_N over the nonbasic columns.
    fn nonbasic_residual(&self) -> Vec<f64> {
        let mut r = self.rhs.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                for &(i, a) in col {
                    r[i] -= a * self.x[j];
                }
            }
        }
        r
    }

    /// Rebuilds the basis inverse from scratch and recomputes basic values.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut b = vec![0.0; m * m];
        for (r, &j) in self.head.iter().enumerate() {
            for &(i, a) in &self.cols[j] {
                b[i * m + r] = a;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&a, &b2| b[a * m + c].abs().total_cmp(&b[b2 * m + c].abs()))
                .unwrap_or(c);
            if b[p * m + c].abs() < 1e-13 {
                return false;
            }
            if p != c {
                for k in 0..m {
                    b.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = b[c * m + c];
            for k in 0..m {
                b[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for r in 0..m {
                if r == c {
                    continue;
                }
                let f = b[r * m + c];
                if f != 0.0 {
                    for k in 0..m {
                        b[r * m + k] -= f * b[c * m + k];
                        inv[r * m + k] -= f * inv[c * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        let resid = self.nonbasic_residual();
        for r in 0..m {
            let v: f64 = (0..m).map(|k| self.binv[r * m + k] * resid[k]).sum();
            self.x[self.head[r]] = v;
        }
        self.since_refactor = 0;
        true
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for r in 0..m {
            let cb = self.cost[self.head[r]];
            if cb != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for (yk, b) in y.iter_mut().zip(row) {
                    *yk += cb * b;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        self.cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>()
    }

    /// Entering column and direction (+1 increase, −1 decrease).
    fn price(&self, y: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols.len() {
            let st = self.state[j];
            if st == VarState::Basic || self.lo[j] == self.hi[j] {
                continue;
            }
            let d = self.reduced_cost(j, y);
            let dir = match st {
                VarState::AtLower if d < -self.tol => 1.0,
                VarState::AtUpper if d > self.tol => -1.0,
                VarState::Free if d.abs() > self.tol => -d.signum(),
                _ => continue,
            };
            if self.bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, _, score)| d.abs() > score) {
                best = Some((j, dir, d.abs()));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut w = vec![0.0; m];
        for &(k, a) in &self.cols[j] {
            for (r, wr) in w.iter_mut().enumerate() {
                *wr += self.binv[r * m + k] * a;
            }
        }
        w
    }

    /// Step length and leaving row (`None` means a bound flip).
    fn ratio_test(&self, j: usize, dir: f64, w: &[f64]) -> Option<(f64, Option<usize>)> {
        let mut theta = self.hi[j] - self.lo[j];
        let mut leave: Option<usize> = None;
        let mut leave_mag = 0.0;
        for (r, &wr) in w.iter().enumerate() {
            let delta = dir * wr;
            let b = self.head[r];
            let lim = if delta > PIVOT_TOL && self.lo[b].is_finite() {
                (self.x[b] - self.lo[b]) / delta
            } else if delta < -PIVOT_TOL && self.hi[b].is_finite() {
                (self.hi[b] - self.x[b]) / -delta
            } else {
                continue;
            };
            let lim = lim.max(0.0);
            let window = 1e-12 * (1.0 + theta.abs().min(lim.abs()));
            let better = if lim < theta - window {
                true
            } else if lim <= theta + window && leave.is_some() {
                if self.bland {
                    b < self.head[leave.unwrap()]
                } else {
                    delta.abs() > leave_mag
                }
            } else {
                false
            };
            if better {
                theta = lim;
                leave = Some(r);
                leave_mag = delta.abs();
            }
        }
        if !theta.is_finite() {
            return None;
        }
        Some((theta, leave))
    }

    fn pivot(&mut self, j: usize, dir: f64, theta: f64, leave: Option<usize>, w: &[f64]) {
        if theta != 0.0 {
            self.x[j] += dir * theta;
            for (r, &wr) in w.iter().enumerate() {
                let b = self.head[r];
                self.x[b] -= dir * theta * wr;
            }
        }
        let Some(p) = leave else {
            self.state[j] = if dir > 0.0 {
                self.x[j] = self.hi[j];
                VarState::AtUpper
            } else {
                self.x[j] = self.lo[j];
                VarState::AtLower
            };
            return;
        };
        let out = self.head[p];
        if dir * w[p] > 0.0 {
            self.x[out] = self.lo[out];
            self.state[out] = VarState::AtLower;
        } else {
            self.x[out] = self.hi[out];
            self.state[out] = VarState::AtUpper;
        }
        self.state[j] = VarState::Basic;
        self.head[p] = j;

        let m = self.m;
        let piv = w[p];
        let (before, rest) = self.binv.split_at_mut(p * m);
        let (prow, after) = rest.split_at_mut(m);
        prow.iter_mut().for_each(|v| *v /= piv);
        for (r, chunk) in before.chunks_mut(m).enumerate() {
            let f = w[r];
            if f != 0.0 {
                chunk.iter_mut().zip(prow.iter()).for_each(|(v, pv)| *v -= f * pv);
            }
        }
        for (k, chunk) in after.chunks_mut(m).enumerate() {
            let f = w[p + 1 + k];
            if f != 0.0 {
                chunk.iter_mut().zip(prow.iter()).for_each(|(v, pv)| *v -= f * pv);
            }
        }
        self.since_refactor += 1;
    }

    fn run(&mut self) -> LpStatus {
        loop {
            if self.iterations >= self.max_iters {
                return LpStatus::IterationLimit;
            }
            if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
                // Singular after drift; fall back to the last good inverse.
                self.since_refactor = 0;
            }
            let y = self.duals();
            let Some((j, dir)) = self.price(&y) else {
                return LpStatus::Optimal;
            };
            let w = self.ftran(j);
            let Some((theta, leave)) = self.ratio_test(j, dir, &w) else {
                return LpStatus::Unbounded;
            };
            if theta <= 1e-12 {
                self.degenerate_run += 1;
                if self.degenerate_run > DEGENERATE_RUN_LIMIT {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
                self.bland = false;
            }
            self.pivot(j, dir, theta, leave, &w);
            self.iterations += 1;
        }
    }

    fn set_phase(&mut self, phase: Phase, lp: &LpStandardForm) {
        let total = self.n_struct + self.m;
        match phase {
            Phase::One => {
                self.cost.iter_mut().for_each(|c| *c = 0.0);
                for c in &mut self.cost[total..] {
                    *c = 1.0;
                }
            }
            Phase::Two => {
                for j in 0..self.n_struct {
                    self.cost[j] = match lp.sense {
                        ObjectiveSense::Minimize => lp.objective[j],
                        ObjectiveSense::Maximize => -lp.objective[j],
                    };
                }
                for j in total..self.cols.len() {
                    self.cost[j] = 0.0;
                    self.hi[j] = 0.0;
                    if self.state[j] != VarState::Basic {
                        self.x[j] = 0.0;
                        self.state[j] = VarState::AtLower;
                    }
                }
            }
        }
        self.bland = false;
        self.degenerate_run = 0;
    }

    fn infeasibility(&self) -> f64 {
        self.x[self.n_struct + self.m..].iter().sum()
    }

    fn max_dual_infeasibility(&self) -> f64 {
        let y = self.duals();
        let mut worst = 0.0_f64;
        for j in 0..self.n_struct + self.m {
            if self.state[j] == VarState::Basic || self.lo[j] == self.hi[j] {
                continue;
            }
            let d = self.reduced_cost(j, &y);
            let v = match self.state[j] {
                VarState::AtLower => -d,
                VarState::AtUpper => d,
                VarState::Free => d.abs(),
                VarState::Basic => 0.0,
            };
            worst = worst.max(v);
        }
        worst
    }

    fn into_solution(self, lp: &LpStandardForm, status: LpStatus) -> LpSolution {
        let values: Vec<f64> = self.x[..self.n_struct].to_vec();
        let total = self.n_struct + self.m;
        let basis = (status == LpStatus::Optimal && self.head.iter().all(|&j| j < total)).then(|| Basis {
            basic: self.head.clone(),
            at_upper: (0..total).filter(|&j| self.state[j] == VarState::AtUpper).collect(),
        });
        LpSolution {
            objective: lp.objective_at(&values),
            primal_residual: lp.primal_residual(&values),
            max_dual_infeasibility: self.max_dual_infeasibility(),
            iterations: self.iterations,
            status,
            values,
            basis,
        }
    }
}

fn finish(mut spx: Simplex, lp: &LpStandardForm) -> LpSolution {
    let status = spx.run();
    if status == LpStatus::Optimal {
        spx.refactor();
        // Polish after the final refactorization picks up drift.
        let status = spx.run();
        spx.refactor();
        return spx.into_solution(lp, status);
    }
    spx.into_solution(lp, status)
}

/// Solves `lp` from a slack / artificial starting basis.
pub fn solve_lp(lp: &LpStandardForm, lp_tol: f64, max_iters: usize) -> Result<LpSolution> {
    lp.validate()?;
    let mut spx = Simplex::skeleton(lp, lp_tol, max_iters);
    if spx.cold_start() {
        spx.set_phase(Phase::One, lp);
        let status = spx.run();
        if status == LpStatus::IterationLimit {
            return Ok(spx.into_solution(lp, status));
        }
        spx.refactor();
        let scale = 1.0 + lp.rhs.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        if spx.infeasibility() > 1e3 * lp_tol * scale {
            return Ok(spx.into_solution(lp, LpStatus::Infeasible));
        }
    }
    spx.set_phase(Phase::Two, lp);
    Ok(finish(spx, lp))
}

/// Like [`solve_lp`], but starts from `basis` when it is valid and primal
/// feasible for `lp`; otherwise falls back to a cold start.
pub fn solve_lp_warm(lp: &LpStandardForm, lp_tol: f64, max_iters: usize, basis: &Basis) -> Result<LpSolution> {
    lp.validate()?;
    let mut spx = Simplex::skeleton(lp, lp_tol, max_iters);
    if !spx.warm_start(basis) {
        return solve_lp(lp, lp_tol, max_iters);
    }
    spx.set_phase(Phase::Two, lp);
    Ok(finish(spx, lp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(
        sense: ObjectiveSense,
        c: Vec<f64>,
        rows: Vec<Vec<f64>>,
        senses: Vec<RowSense>,
        rhs: Vec<f64>,
        bounds: Vec<(f64, f64)>,
    ) -> LpStandardForm {
        LpStandardForm {
            sense,
            objective: c,
            rows,
            rhs,
            senses,
            lower: bounds.iter().map(|b| b.0).collect(),
            upper: bounds.iter().map(|b| b.1).collect(),
        }
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 -> (2, 6), 36
        let p = lp(
            ObjectiveSense::Maximize,
            vec![3.0, 5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![RowSense::Le; 3],
            vec![4.0, 12.0, 18.0],
            vec![(0.0, INF); 2],
        );
        let sol = solve_lp(&p, 1e-9, 100).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 36.0).abs() < 1e-9);
        assert!((sol.values[0] - 2.0).abs() < 1e-9 && (sol.values[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows_need_phase_one() {
        // min x + 2y, x + y = 3, x - y ≥ -1, x ≤ 1.5 -> x = 1.5, y = 1.5
        let p = lp(
            ObjectiveSense::Minimize,
            vec![1.0, 2.0],
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![RowSense::Eq, RowSense::Ge],
            vec![3.0, -1.0],
            vec![(0.0, 1.5), (0.0, INF)],
        );
        let sol = solve_lp(&p, 1e-9, 100).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 4.5).abs() < 1e-9, "{sol:?}");
        assert!(sol.primal_residual < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        let p = lp(
            ObjectiveSense::Minimize,
            vec![1.0],
            vec![vec![1.0]],
            vec![RowSense::Ge],
            vec![5.0],
            vec![(0.0, 2.0)],
        );
        assert_eq!(solve_lp(&p, 1e-9, 100).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let p = lp(
            ObjectiveSense::Maximize,
            vec![1.0, 1.0],
            vec![vec![1.0, -1.0]],
            vec![RowSense::Le],
            vec![1.0],
            vec![(0.0, INF), (0.0, INF)],
        );
        assert_eq!(solve_lp(&p, 1e-9, 100).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variable_and_negative_lower_bounds() {
        // max z, z ≤ x, z ≤ 2 - x, x in [-1, 1], z free -> z = 1
        let p = lp(
            ObjectiveSense::Maximize,
            vec![0.0, 1.0],
            vec![vec![-1.0, 1.0], vec![1.0, 1.0]],
            vec![RowSense::Le; 2],
            vec![0.0, 2.0],
            vec![(-1.0, 1.0), (-INF, INF)],
        );
        let sol = solve_lp(&p, 1e-9, 100).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_reports_incumbent() {
        let p = lp(
            ObjectiveSense::Maximize,
            vec![3.0, 5.0],
            vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            vec![RowSense::Le; 3],
            vec![4.0, 12.0, 18.0],
            vec![(0.0, INF); 2],
        );
        let sol = solve_lp(&p, 1e-9, 1).unwrap();
        assert_eq!(sol.status, LpStatus::IterationLimit);
        assert_eq!(sol.values.len(), 2);
        assert!(sol.primal_residual < 1e-9);
    }

    #[test]
    fn rejects_malformed_problem() {
        let mut p = lp(
            ObjectiveSense::Minimize,
            vec![1.0],
            vec![vec![1.0, 2.0]],
            vec![RowSense::Le],
            vec![1.0],
            vec![(0.0, 1.0)],
        );
        assert!(solve_lp(&p, 1e-9, 10).is_err());
        p.rows[0] = vec![f64::NAN];
        assert!(solve_lp(&p, 1e-9, 10).is_err());
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance under the largest-coefficient rule.
        let p = lp(
            ObjectiveSense::Minimize,
            vec![-0.75, 150.0, -0.02, 6.0],
            vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![RowSense::Le; 3],
            vec![0.0, 0.0, 1.0],
            vec![(0.0, INF); 4],
        );
        let sol = solve_lp(&p, 1e-9, 1000).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 0.05).abs() < 1e-9, "{}", sol.objective);
    }
}
