//! Max-min scheduling LP for a fixed trajectory.
//!
//! Variables are the slot shares α_i[n] (user-major, index `i·N + n`)
//! followed by the common rate level η.

use super::{solve_lp, LpSolution, LpStandardForm, LpStatus, ObjectiveSense, RowSense};
use crate::channel::RateTable;
use crate::error::{Error, Result};
use crate::scenario::Schedule;

/// `max η  s.t.  η ≤ (1/N)·Σ_n α_i[n]·R_i[n] ∀i,  Σ_i α_i[n] ≤ 1 ∀n,  0 ≤ α ≤ 1`.
pub fn build_scheduling_lp(rt: &RateTable) -> LpStandardForm {
    let k = rt.num_users();
    let n = rt.num_slots();
    let nv = k * n + 1;
    let eta = k * n;
    let inv_n = 1.0 / n as f64;

    let mut rows = Vec::with_capacity(k + n);
    for i in 0..k {
        let mut row = vec![0.0; nv];
        for (slot, &r) in rt.row(i).iter().enumerate() {
            row[i * n + slot] = -r * inv_n;
        }
        row[eta] = 1.0;
        rows.push(row);
    }
    for slot in 0..n {
        let mut row = vec![0.0; nv];
        for i in 0..k {
            row[i * n + slot] = 1.0;
        }
        rows.push(row);
    }

    let mut objective = vec![0.0; nv];
    objective[eta] = 1.0;
    let mut lower = vec![0.0; nv];
    let mut upper = vec![1.0; nv];
    lower[eta] = f64::NEG_INFINITY;
    upper[eta] = f64::INFINITY;

    let mut rhs = vec![0.0; k];
    rhs.extend(std::iter::repeat_n(1.0, n));
    LpStandardForm {
        sense: ObjectiveSense::Maximize,
        objective,
        rows,
        rhs,
        senses: vec![RowSense::Le; k + n],
        lower,
        upper,
    }
}

/// Reshapes an optimal solution into a K×N schedule, snapping round-off
/// within `lp_tol` onto 0 and 1.
pub fn extract_schedule(sol: &LpSolution, k: usize, n: usize, lp_tol: f64) -> Result<Schedule> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::NotOptimal(sol.status));
    }
    if sol.values.len() < k * n {
        return Err(Error::DimensionMismatch(format!(
            "{} LP values for a {k}x{n} schedule",
            sol.values.len()
        )));
    }
    let shares = sol.values[..k * n]
        .iter()
        .map(|&v| {
            let v = v.clamp(0.0, 1.0);
            if v <= lp_tol {
                0.0
            } else if v >= 1.0 - lp_tol {
                1.0
            } else {
                v
            }
        })
        .collect();
    let mut sched = Schedule::from_raw(k, n, shares);
    // Round-off can push a slot total slightly above one.
    for slot in 0..n {
        let total = sched.slot_total(slot);
        if total > 1.0 {
            for i in 0..k {
                sched.set(i, slot, sched.get(i, slot) / total);
            }
        }
    }
    Ok(sched)
}

/// Builds, solves and extracts in one go. Returns the schedule and the
/// LP objective η.
pub fn solve_schedule(rt: &RateTable, lp_tol: f64) -> Result<(Schedule, LpSolution)> {
    let lp = build_scheduling_lp(rt);
    let max_iters = 50 * lp.num_vars();
    let sol = solve_lp(&lp, lp_tol, max_iters)?;
    let sched = extract_schedule(&sol, rt.num_users(), rt.num_slots(), lp_tol)?;
    Ok((sched, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::maxmin_objective;
    use crate::lp::{solve_lp_warm, DEFAULT_LP_TOL};

    fn table(rows: &[Vec<f64>]) -> RateTable {
        RateTable::from_rows(rows).unwrap()
    }

    #[test]
    fn structure_counts() {
        let lp = build_scheduling_lp(&table(&[vec![3.0]]));
        assert_eq!(lp.num_vars(), 2);
        assert_eq!(lp.num_rows(), 2);

        let lp = build_scheduling_lp(&table(&vec![vec![1.0; 240]; 6]));
        assert_eq!(lp.num_vars(), 1441);
        assert_eq!(lp.num_rows(), 246);
    }

    #[test]
    fn zero_rates_give_zero() {
        let (_, sol) = solve_schedule(&table(&[vec![0.0; 3], vec![0.0; 3]]), DEFAULT_LP_TOL).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.objective.abs() < 1e-12);
    }

    #[test]
    fn starved_user_forces_zero() {
        let rt = table(&[vec![5.0, 4.0, 3.0], vec![0.0, 0.0, 0.0]]);
        let (_, sol) = solve_schedule(&rt, DEFAULT_LP_TOL).unwrap();
        assert!(sol.objective.abs() < 1e-12);
    }

    #[test]
    fn two_by_two_fractional_optimum() {
        // Giving slot 2 to user 2 and splitting slot 1 0.8 / 0.2 balances
        // both users at 1.6, above the best binary schedule (1.5).
        let rt = table(&[vec![4.0, 2.0], vec![1.0, 3.0]]);
        let (sched, sol) = solve_schedule(&rt, DEFAULT_LP_TOL).unwrap();
        assert!((sol.objective - 1.6).abs() < 1e-12, "{}", sol.objective);
        assert!((sched.get(0, 0) - 0.8).abs() < 1e-12);
        assert!((sched.get(1, 0) - 0.2).abs() < 1e-12);
        assert_eq!(sched.get(0, 1), 0.0);
        assert_eq!(sched.get(1, 1), 1.0);
    }

    #[test]
    fn symmetric_single_slot_splits_evenly() {
        let r = 7.5;
        let (sched, sol) = solve_schedule(&table(&[vec![r], vec![r]]), DEFAULT_LP_TOL).unwrap();
        assert!((sol.objective - r / 2.0).abs() < 1e-12);
        assert!((sched.get(0, 0) - 0.5).abs() < 1e-12);
        assert!((sched.get(1, 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn vertex_solution_is_binary() {
        let rt = table(&[vec![9.0, 1.0], vec![1.0, 9.0]]);
        let (sched, sol) = solve_schedule(&rt, DEFAULT_LP_TOL).unwrap();
        assert!((sol.objective - 4.5).abs() < 1e-12);
        assert!(sched.is_binary());
    }

    #[test]
    fn clipping_rule() {
        let sol = LpSolution {
            values: vec![1.0 + 3e-12, -2e-12, 0.0, 0.25, 0.0],
            objective: 0.0,
            status: LpStatus::Optimal,
            iterations: 0,
            primal_residual: 0.0,
            max_dual_infeasibility: 0.0,
            basis: None,
        };
        let s = extract_schedule(&sol, 2, 2, 1e-8).unwrap();
        assert_eq!(s.get(0, 0), 1.0);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(1, 1), 0.25);
    }

    #[test]
    fn extract_requires_optimal() {
        let sol = LpSolution {
            values: vec![0.0; 3],
            objective: 0.0,
            status: LpStatus::IterationLimit,
            iterations: 0,
            primal_residual: 0.0,
            max_dual_infeasibility: 0.0,
            basis: None,
        };
        assert!(matches!(
            extract_schedule(&sol, 1, 2, 1e-9),
            Err(Error::NotOptimal(LpStatus::IterationLimit))
        ));
    }

    #[test]
    fn objective_matches_recomputed_eta() {
        let rt = table(&[
            vec![3.0, 1.0, 4.0, 1.0],
            vec![5.0, 9.0, 2.0, 6.0],
            vec![5.0, 3.0, 5.0, 8.0],
        ]);
        let (sched, sol) = solve_schedule(&rt, DEFAULT_LP_TOL).unwrap();
        let eta = maxmin_objective(&rt, &sched).unwrap();
        assert!((eta - sol.objective).abs() <= 10.0 * DEFAULT_LP_TOL);
    }

    #[test]
    fn scaling_rates_scales_eta_and_keeps_basis() {
        let rt = table(&[
            vec![3.0, 1.0, 4.0, 1.0, 5.0],
            vec![5.0, 9.0, 2.0, 6.0, 5.0],
            vec![3.0, 5.0, 8.0, 9.0, 7.0],
        ]);
        let (sched, sol) = solve_schedule(&rt, DEFAULT_LP_TOL).unwrap();
        let lambda = 3.25;
        let scaled = build_scheduling_lp(&rt.scaled(lambda));
        let cold = solve_lp(&scaled, DEFAULT_LP_TOL, 10_000).unwrap();
        assert!((cold.objective - lambda * sol.objective).abs() < 1e-9);

        let warm = solve_lp_warm(&scaled, DEFAULT_LP_TOL, 10_000, sol.basis.as_ref().unwrap()).unwrap();
        assert_eq!(warm.status, LpStatus::Optimal);
        assert_eq!(warm.iterations, 0);
        assert!((warm.objective - lambda * sol.objective).abs() < 1e-9);
        let warm_sched = extract_schedule(&warm, 3, 5, DEFAULT_LP_TOL).unwrap();
        for i in 0..3 {
            for n in 0..5 {
                assert!((warm_sched.get(i, n) - sched.get(i, n)).abs() < 1e-9);
            }
        }
    }
}
