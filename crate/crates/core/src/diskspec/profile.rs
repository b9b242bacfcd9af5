use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{bessel::jn, RobinDiskMode};
use crate::quadrature::GaussRule;

const SERIES_TERMS: usize = 24;

/// Radial part `g` of the angular-order-one disk mode, `g(r) = J_1(x r)`
/// (or `g(r) = r` at `beta = -1`).
///
/// Internally `g(r) = r h(r^2)` where `h` is an even power series, which
/// makes `v(z) = h(|z|^2) z` cheap and smooth at the origin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialProfile {
    pub mode: RobinDiskMode,
    coeffs: Vec<f64>,
}

impl RadialProfile {
    pub fn new(mode: RobinDiskMode) -> Self {
        let mut coeffs = Vec::with_capacity(SERIES_TERMS);
        let q = -0.25 * mode.x * mode.x;
        let mut c = if mode.is_harmonic() { 1.0 } else { 0.5 * mode.x };
        for k in 0..SERIES_TERMS {
            coeffs.push(c);
            c *= q / ((k + 1) as f64 * (k + 2) as f64);
        }
        Self { mode, coeffs }
    }

    /// `h(s)` with `g(r) = r h(r^2)`.
    #[inline]
    pub fn h(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    #[inline]
    pub fn h_prime(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * s + k as f64 * c)
    }

    #[inline]
    pub fn g(&self, r: f64) -> f64 {
        r * self.h(r * r)
    }

    #[inline]
    pub fn g_prime(&self, r: f64) -> f64 {
        let s = r * r;
        self.h(s) + 2.0 * s * self.h_prime(s)
    }

    /// `v(z) = g(|z|) z / |z|`.
    #[inline]
    pub fn v(&self, z: C64) -> C64 {
        z * self.h(z.norm_sqr())
    }

    /// Dirichlet energy `2 pi int_0^1 (g'^2 + g^2/r^2) r dr` of `v`.
    pub fn dirichlet(&self) -> f64 {
        let rule = GaussRule::new(48, 0.0, 1.0);
        2.0 * std::f64::consts::PI
            * rule.integrate(|r| {
                let h = self.h(r * r);
                (self.g_prime(r).powi(2) + h * h) * r
            })
    }

    /// `int_D |v|^2 dA`.
    pub fn mass(&self) -> f64 {
        let rule = GaussRule::new(48, 0.0, 1.0);
        2.0 * std::f64::consts::PI * rule.integrate(|r| self.g(r).powi(2) * r)
    }

    /// `max_{[0,1]} g`: `g(1)` when `g` is increasing, else the interior peak.
    pub fn max_value(&self) -> f64 {
        if self.mode.beta <= 0.0 {
            return self.g(1.0);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.g_prime(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.g(0.5 * (lo + hi))
    }
}

/// `g(r)` evaluated directly from the Bessel function.
pub fn radial_g(profile: &RadialProfile, r: f64) -> f64 {
    if profile.mode.is_harmonic() {
        r
    } else {
        jn(1, profile.mode.x * r)
    }
}

pub fn radial_g_prime(profile: &RadialProfile, r: f64) -> f64 {
    if profile.mode.is_harmonic() {
        return 1.0;
    }
    let x = profile.mode.x;
    x * super::bessel_j1_prime(x * r)
}

pub fn eigenfunction_v(profile: &RadialProfile, z: C64) -> C64 {
    profile.v(z)
}

/// Rows `(beta, r, g(r))` over `r = 0, 1/(n-1), ..., 1` for each beta.
pub fn profile_table(betas: &[f64], n: usize) -> crate::Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::with_capacity(betas.len() * n);
    for &beta in betas {
        let profile = RadialProfile::new(super::disk_lambda2(beta)?);
        for i in 0..n {
            let r = i as f64 / (n.max(2) - 1) as f64;
            rows.push((beta, r, radial_g(&profile, r)));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::super::disk_lambda2;
    use super::*;
    use crate::complexgeo::ReflectionAxis;

    fn profile(beta: f64) -> RadialProfile {
        RadialProfile::new(disk_lambda2(beta).unwrap())
    }

    #[test]
    fn series_matches_bessel() {
        for k in 0..=20 {
            let p = profile(-1.0 + 0.1 * k as f64);
            for i in 0..=50 {
                let r = i as f64 / 50.0;
                assert!((p.g(r) - radial_g(&p, r)).abs() < 1e-13);
                assert!((p.g_prime(r) - radial_g_prime(&p, r)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn profile_examples() {
        let p = profile(1.0);
        assert_eq!(radial_g(&p, 0.0), 0.0);
        assert!((p.g_prime(1.0) + p.g(1.0)).abs() < 1e-10);
        assert!(p.g_prime(1.0) < 0.0);
        let h = profile(-1.0);
        for i in 0..=10 {
            let r = i as f64 / 10.0;
            assert_eq!(radial_g(&h, r), r);
            assert!((h.g(r) - r).abs() < 1e-15);
        }
    }

    #[test]
    fn positivity_and_shape() {
        for k in 0..=20 {
            let beta = -1.0 + 0.1 * k as f64;
            let p = profile(beta);
            assert!(p.g(1.0) > 0.0);
            let mut changes = 0;
            let mut prev = p.g_prime(0.0);
            for i in 1..1000 {
                let r = i as f64 / 999.0;
                assert!(p.g(r) > 0.0);
                let d = p.g_prime(r);
                if beta <= 0.0 {
                    assert!(d >= -1e-12, "beta {beta} r {r} g' {d}");
                }
                if (d > 0.0) != (prev > 0.0) {
                    changes += 1;
                }
                prev = d;
            }
            if beta > 0.0 {
                assert_eq!(changes, 1, "beta {beta}");
            }
        }
    }

    #[test]
    fn rayleigh_identity() {
        for k in 0..=20 {
            let beta = -1.0 + 0.1 * k as f64;
            let p = profile(beta);
            let lhs = p.dirichlet() + beta * 2.0 * std::f64::consts::PI * p.g(1.0).powi(2);
            let rhs = p.mode.lambda * p.mass();
            assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(rhs.abs()).max(1e-12), "{beta}");
        }
    }

    #[test]
    fn eigenfunction_values() {
        let p = profile(0.5);
        assert!(p.v(C64::new(1.0, 0.0)).re > 0.0);
        assert_eq!(p.v(C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
        let b = ReflectionAxis::from_angle(0.3);
        let z = C64::new(0.4, 0.2);
        assert!((p.v(b.reflect(z)) - b.reflect(p.v(z))).norm() < 1e-13);
        let z = C64::from_polar(0.7, 1.1);
        assert!((p.v(z) - C64::from_polar(radial_g(&p, 0.7), 1.1)).norm() < 1e-13);
    }

    #[test]
    fn max_value_bounds_profile() {
        for beta in [-1.0, -0.3, 0.0, 0.4, 1.0, 5.0] {
            let p = profile(beta);
            let m = p.max_value();
            for i in 0..=200 {
                assert!(p.g(i as f64 / 200.0) <= m + 1e-12);
            }
        }
    }

    #[test]
    fn table_shape() {
        let rows = profile_table(&[-1.0, -0.5, 0.0, 0.5, 1.0], 400).unwrap();
        assert_eq!(rows.len(), 2000);
        assert_eq!(rows[0], (-1.0, 0.0, 0.0));
        assert_eq!(rows[399].1, 1.0);
    }
}
