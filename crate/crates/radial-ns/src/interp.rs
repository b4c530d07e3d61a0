//! Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes)
//! and small helpers for linear lookups on sorted grids.

/// Index `i` with `xs[i] <= x < xs[i+1]`, clamped to `[0, len-2]`.
pub fn locate(xs: &[f64], x: f64) -> usize {
    let n = xs.len();
    debug_assert!(n >= 2);
    if x <= xs[0] {
        return 0;
    }
    if x >= xs[n - 1] {
        return n - 2;
    }
    match xs.binary_search_by(|p| p.partial_cmp(&x).expect("NaN in grid")) {
        Ok(i) => i.min(n - 2),
        Err(i) => i - 1,
    }
}

/// Piecewise-linear interpolation, constant beyond the ends.
pub fn linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = locate(xs, x);
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

#[derive(Debug, Clone)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    /// Build from strictly increasing `xs`. Slopes follow Fritsch-Carlson:
    /// weighted harmonic means in the interior, zeroed at local extrema,
    /// three-point one-sided estimates at the ends.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n, "pchip needs matching grids of length >= 2");
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = del[0];
            ds[1] = del[0];
        } else {
            for i in 1..n - 1 {
                if del[i - 1] * del[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    ds[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
                }
            }
            ds[0] = end_slope(h[0], h[1], del[0], del[1]);
            ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Pchip { xs, ys, ds }
    }

    /// Build with caller-supplied node derivatives (must keep monotonicity).
    pub fn with_slopes(xs: Vec<f64>, ys: Vec<f64>, ds: Vec<f64>) -> Self {
        assert!(xs.len() == ys.len() && ys.len() == ds.len() && xs.len() >= 2);
        Pchip { xs, ys, ds }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        d00 * self.ys[i] + d10 * self.ds[i] + d01 * self.ys[i + 1] + d11 * self.ds[i + 1]
    }

    /// Solve `eval(x) = y` for increasing data by bisection, stopping when
    /// the residual drops below `tol` or the bracket collapses.
    pub fn invert_increasing(&self, y: f64, tol: f64) -> f64 {
        let n = self.xs.len();
        if y <= self.ys[0] {
            return self.xs[0];
        }
        if y >= self.ys[n - 1] {
            return self.xs[n - 1];
        }
        let i = locate(&self.ys, y);
        let (mut lo, mut hi) = (self.xs[i], self.xs[i + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let r = self.eval(mid) - y;
            if r.abs() <= tol || mid <= lo || mid >= hi {
                return mid;
            }
            if r < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_lines() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let p = Pchip::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-14);
        }
        assert!((p.eval(0.35) - 1.7).abs() < 1e-14);
        assert!((p.deriv(0.35) - 2.0).abs() < 1e-12);
        let x = p.invert_increasing(1.9, 1e-14);
        assert!((x - 0.45).abs() < 1e-13);
    }

    #[test]
    fn stays_monotone_on_steps() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let ys = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 5.0, 5.0];
        let p = Pchip::new(xs, ys);
        let mut prev = -1.0;
        for i in 0..=700 {
            let v = p.eval(i as f64 * 0.01);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }
}
