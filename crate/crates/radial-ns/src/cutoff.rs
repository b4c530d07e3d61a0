//! Smooth step used for every cut-off in the pipeline: inner blending near
//! `r = a`, far-field truncation and the Eulerian extension.

/// `xi(z) = 1` for `z <= 0`, `0` for `z >= 1`, quintic in between with
/// `|xi'| <= 15/8`.
#[inline]
pub fn xi(z: f64) -> f64 {
    if z <= 0.0 {
        1.0
    } else if z >= 1.0 {
        0.0
    } else {
        let s = z * z * z * (10.0 - 15.0 * z + 6.0 * z * z);
        1.0 - s
    }
}

#[inline]
pub fn xi_prime(z: f64) -> f64 {
    if z <= 0.0 || z >= 1.0 {
        0.0
    } else {
        let w = z * (1.0 - z);
        -30.0 * w * w
    }
}

/// Cut-off `phi(r) = xi((2r - edge)/edge)`: 1 on `[0, edge/2]`, 0 beyond `edge`.
#[inline]
pub fn edge_cutoff(r: f64, edge: f64) -> f64 {
    xi((2.0 * r - edge) / edge)
}

#[inline]
pub fn edge_cutoff_dr(r: f64, edge: f64) -> f64 {
    2.0 / edge * xi_prime((2.0 * r - edge) / edge)
}

/// Inner blend `chi_a(r)`: 0 for `r <= a`, 1 for `r >= 2a`.
#[inline]
pub fn inner_blend(r: f64, a: f64) -> f64 {
    1.0 - xi(r / a - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_slope_bound() {
        assert_eq!(xi(-0.5), 1.0);
        assert_eq!(xi(0.0), 1.0);
        assert_eq!(xi(1.0), 0.0);
        assert_eq!(xi(3.0), 0.0);
        let mut max_slope = 0.0f64;
        for i in 0..=10_000 {
            let z = i as f64 / 10_000.0;
            max_slope = max_slope.max(xi_prime(z).abs());
            let h = 1e-6;
            if z > h && z < 1.0 - h {
                let fd = (xi(z + h) - xi(z - h)) / (2.0 * h);
                assert!((fd - xi_prime(z)).abs() < 1e-7);
            }
        }
        assert!(max_slope <= 2.0);
        assert_eq!(inner_blend(0.1, 0.1), 0.0);
        assert_eq!(inner_blend(0.2, 0.1), 1.0);
        assert_eq!(edge_cutoff(0.4, 1.0), 1.0);
        assert_eq!(edge_cutoff(1.0, 1.0), 0.0);
    }
}
