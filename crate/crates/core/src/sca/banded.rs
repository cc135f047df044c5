/// Symmetric positive definite band matrix with in-place Cholesky.
///
/// Only the lower band is stored: entry `(i, j)` with `0 <= i - j <= bw`
/// lives at `data[i * (bw + 1) + (i - j)]`.
#[derive(Debug, Clone)]
pub(crate) struct BandedSpd {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSpd {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= j && i - j <= self.bw, "({i}, {j}) outside band {}", self.bw);
        i * (self.bw + 1) + (i - j)
    }

    /// Adds `v` to the symmetric pair `(i, j)` / `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let k = self.at(r, c);
        self.data[k] += v;
    }

    pub fn diag_max(&self) -> f64 {
        (0..self.n).map(|i| self.data[self.at(i, i)]).fold(0.0, f64::max)
    }

    /// Overwrites the band with its Cholesky factor. Fails on a
    /// non-positive pivot.
    pub fn factor(&mut self) -> Result<(), usize> {
        let bw = self.bw;
        for j in 0..self.n {
            let k0 = j.saturating_sub(bw);
            let mut d = self.data[self.at(j, j)];
            for k in k0..j {
                let l = self.data[self.at(j, k)];
                d -= l * l;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(j);
            }
            let d = d.sqrt();
            let jj = self.at(j, j);
            self.data[jj] = d;
            for i in j + 1..(j + bw + 1).min(self.n) {
                let mut v = self.data[self.at(i, j)];
                for k in i.saturating_sub(bw).max(k0)..j {
                    v -= self.data[self.at(i, k)] * self.data[self.at(j, k)];
                }
                let ij = self.at(i, j);
                self.data[ij] = v / d;
            }
        }
        Ok(())
    }

    /// Solves `L Lᵀ x = b` in place, after [`BandedSpd::factor`].
    pub fn solve(&self, b: &mut [f64]) {
        let bw = self.bw;
        for i in 0..self.n {
            let mut v = b[i];
            for k in i.saturating_sub(bw)..i {
                v -= self.data[self.at(i, k)] * b[k];
            }
            b[i] = v / self.data[self.at(i, i)];
        }
        for i in (0..self.n).rev() {
            let mut v = b[i];
            for k in i + 1..(i + bw + 1).min(self.n) {
                v -= self.data[self.at(k, i)] * b[k];
            }
            b[i] = v / self.data[self.at(i, i)];
        }
    }
}
