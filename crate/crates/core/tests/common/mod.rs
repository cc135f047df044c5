//! Independent reference computations shared by the test suites.
#![allow(dead_code)]

/// Max-min LP value through its dual, `min over λ in the simplex of
/// (1/N)·Σ_n max_i λ_i·R_i[n]`. The function is convex and piecewise
/// linear, so the minimum sits on a vertex of the arrangement formed by
/// the breakpoint planes `λ_i·R_i[n] = λ_j·R_j[n]` and the faces `λ_i = 0`.
pub fn maxmin_dual(rates: &[Vec<f64>]) -> f64 {
    let k = rates.len();
    let n = rates[0].len();
    let dual = |lambda: &[f64]| -> f64 {
        (0..n)
            .map(|s| (0..k).map(|i| lambda[i] * rates[i][s]).fold(0.0, f64::max))
            .sum::<f64>()
            / n as f64
    };
    let mut planes: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        let mut p = vec![0.0; k];
        p[i] = 1.0;
        planes.push(p);
        for j in i + 1..k {
            for s in 0..n {
                let mut p = vec![0.0; k];
                p[i] = rates[i][s];
                p[j] = -rates[j][s];
                planes.push(p);
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut pick = vec![0usize; k.saturating_sub(1)];
    choose(planes.len(), k - 1, 0, 0, &mut pick, &mut |sel| {
        let mut m: Vec<Vec<f64>> = sel.iter().map(|&p| planes[p].clone()).collect();
        let mut rhs = vec![0.0; k - 1];
        m.push(vec![1.0; k]);
        rhs.push(1.0);
        if let Some(lambda) = gauss(m, rhs) {
            if lambda.iter().all(|&l| l >= -1e-12) {
                let lambda: Vec<f64> = lambda.iter().map(|l| l.max(0.0)).collect();
                best = best.min(dual(&lambda));
            }
        }
    });
    best
}

fn choose(total: usize, want: usize, start: usize, depth: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if depth == want {
        f(&pick[..want]);
        return;
    }
    for c in start..total {
        pick[depth] = c;
        choose(total, want, c + 1, depth + 1, pick, f);
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..n {
                    a[r][j] -= f * a[c][j];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Best max-min value over schedules that give each slot to one user or
/// leave it idle.
pub fn best_binary(rates: &[Vec<f64>]) -> f64 {
    let k = rates.len();
    let n = rates[0].len();
    let mut best = 0.0f64;
    let mut owner = vec![0usize; n];
    loop {
        let mut per_user = vec![0.0; k];
        for (s, &o) in owner.iter().enumerate() {
            if o < k {
                per_user[o] += rates[o][s];
            }
        }
        best = best.max(per_user.iter().fold(f64::INFINITY, |a, &b| a.min(b)) / n as f64);
        let mut s = 0;
        loop {
            if s == n {
                return best;
            }
            owner[s] += 1;
            if owner[s] <= k {
                break;
            }
            owner[s] = 0;
            s += 1;
        }
    }
}

/// Shannon rate for a UAV at squared horizontal distance `d2`, computed
/// directly from the received SNR.
pub fn rate(gamma0: f64, h: f64, d2: f64) -> f64 {
    (1.0 + gamma0 / (h * h + d2)).log2()
}

#[test]
fn dual_oracle_hand_cases() {
    assert!((maxmin_dual(&[vec![4.0, 2.0], vec![1.0, 3.0]]) - 1.6).abs() < 1e-12);
    assert!((maxmin_dual(&[vec![7.5], vec![7.5]]) - 3.75).abs() < 1e-12);
    assert!((maxmin_dual(&[vec![3.0, 5.0]]) - 4.0).abs() < 1e-12);
    assert!((best_binary(&[vec![4.0, 2.0], vec![1.0, 3.0]]) - 1.5).abs() < 1e-12);
}
