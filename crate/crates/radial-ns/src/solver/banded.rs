//! Banded LU factorisation with partial pivoting.

#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    /// Zero matrix of order `n` with `kl` sub- and `ku` super-diagonals.
    /// Storage leaves room for the `kl` extra super-diagonals created by
    /// row exchanges.
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.kl
    }

    pub fn upper(&self) -> usize {
        self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|x| *x = 0.0);
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Solve `A x = b` in place, destroying `A`. Returns `false` on a zero pivot.
    pub fn solve_in_place(&mut self, b: &mut [f64]) -> bool {
        let n = self.n;
        let kl = self.kl;
        let span = self.ku + self.kl;
        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let mut p = i;
            let mut best = self.get(i, i).abs();
            for r in i + 1..=last_row {
                let v = self.get(r, i).abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return false;
            }
            let last_col = (i + span).min(n - 1);
            if p != i {
                for c in i..=last_col {
                    let a = self.get(i, c);
                    let bb = self.get(p, c);
                    self.set(i, c, bb);
                    self.set(p, c, a);
                }
                b.swap(i, p);
            }
            let piv = self.get(i, i);
            for r in i + 1..=last_row {
                let f = self.get(r, i) / piv;
                if f == 0.0 {
                    continue;
                }
                self.set(r, i, 0.0);
                for c in i + 1..=last_col {
                    let v = self.get(r, c) - f * self.get(i, c);
                    self.set(r, c, v);
                }
                b[r] -= f * b[i];
            }
        }
        for i in (0..n).rev() {
            let last_col = (i + span).min(n - 1);
            let mut s = b[i];
            for c in i + 1..=last_col {
                s -= self.get(i, c) * b[c];
            }
            b[i] = s / self.get(i, i);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_against_dense_reference() {
        let n = 12;
        let (kl, ku) = (2, 3);
        let mut a = BandMatrix::zeros(n, kl, ku);
        let mut dense = vec![vec![0.0; n]; n];
        let mut seed = 7u64;
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = ((seed >> 33) as f64 / (1u64 << 31) as f64) - 0.5;
                // small diagonal forces pivoting
                let v = if i == j { 0.01 * v } else { v };
                a.set(i, j, v);
                dense[i][j] = v;
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() + 1.0).collect();
        let mut b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| dense[i][j] * x_true[j]).sum()).collect();
        assert!(a.solve_in_place(&mut b));
        for i in 0..n {
            assert!((b[i] - x_true[i]).abs() < 1e-9, "{i}: {} vs {}", b[i], x_true[i]);
        }
    }
}
