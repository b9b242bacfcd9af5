//! Robin spectrum of the unit disk: the boundary condition
//! `du/dr + beta u = 0` on the unit circle, with `beta = alpha / (4 pi)`
//! in the perimeter-normalized convention.

mod bessel;
mod profile;

pub use bessel::{bessel_j, bessel_j1_prime, J1_FIRST_ZERO};
pub use profile::{eigenfunction_v, profile_table, radial_g, radial_g_prime, RadialProfile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use bessel::{bessel_i, j2, jn};

const SCAN_CELLS: usize = 64;
const ROOT_TOL: f64 = 1e-12;

/// A disk Robin eigenpair of angular order `angular_order`:
/// `lambda = x^2`, radial part `J_m(x r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobinDiskMode {
    pub beta: f64,
    pub x: f64,
    pub lambda: f64,
    pub angular_order: u32,
}

impl RobinDiskMode {
    /// The harmonic mode `g(r) = r` at `beta = -1`.
    pub fn is_harmonic(&self) -> bool {
        self.beta == -1.0
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < -1.0 {
        Err(Error::BetaOutOfRange { beta })
    } else {
        Ok(())
    }
}

/// Bisection to `ROOT_TOL` on a bracket with a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Brackets of successive sign changes of `f` on `[lo, hi]` using `cells` cells.
fn sign_changes(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / cells as f64;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for k in 1..=cells {
        let b = if k == cells { hi } else { lo + k as f64 * h };
        let fb = f(b);
        if fa == 0.0 || (fa > 0.0) != (fb > 0.0) {
            out.push((a, b));
        }
        a = b;
        fa = fb;
    }
    out
}

/// Characteristic function `x J_1'(x) + beta J_1(x)` of angular order one.
pub fn characteristic_order1(beta: f64, x: f64) -> f64 {
    x * jn(0, x) + (beta - 1.0) * jn(1, x)
}

/// `lambda_2(D; beta)` with its root `x` in `(0, j_{1,1})`.
pub fn disk_lambda2(beta: f64) -> Result<RobinDiskMode> {
    check_beta(beta)?;
    if beta == -1.0 {
        return Ok(RobinDiskMode { beta, x: 0.0, lambda: 0.0, angular_order: 1 });
    }
    let f = |x: f64| characteristic_order1(beta, x);
    // f(x) ~ (1 + beta) x / 2 near zero, so start just off the origin
    let lo = 1e-9;
    let bracket = sign_changes(&f, lo, J1_FIRST_ZERO, SCAN_CELLS)
        .into_iter()
        .next()
        .unwrap_or((lo, J1_FIRST_ZERO));
    let x = bisect(f, bracket.0, bracket.1);
    Ok(RobinDiskMode { beta, x, lambda: x * x, angular_order: 1 })
}

/// First Robin eigenvalue of the disk; negative for `beta < 0`.
pub fn disk_lambda1(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    if beta > 0.0 {
        // x J_0'(x) + beta J_0(x) = beta J_0(x) - x J_1(x), root below j_{0,1}
        let f = |x: f64| beta * jn(0, x) - x * jn(1, x);
        let x = bisect(f, 0.0, 2.404_825_557_695_773);
        return Ok(x * x);
    }
    // u = I_0(y r): y I_1(y) + beta I_0(y) = 0 with y < 2 for beta >= -1
    let f = |y: f64| y * bessel_i(1, y) + beta * bessel_i(0, y);
    let y = bisect(f, 0.0, 2.0);
    Ok(-y * y)
}

/// Order-zero characteristic function `x J_0'(x) + beta J_0(x)`.
fn characteristic_order0(beta: f64, x: f64) -> f64 {
    beta * jn(0, x) - x * jn(1, x)
}

fn characteristic_order2(beta: f64, x: f64) -> f64 {
    let j2x = j2(x);
    let j2p = jn(1, x) - 2.0 / x * j2x;
    x * j2p + beta * j2x
}

/// `[lambda_1, lambda_2, lambda_3, lambda_4]` of the unit disk.
///
/// `lambda_2 = lambda_3` (angular order one has multiplicity two) and
/// `lambda_4` is the smaller of the first order-two eigenvalue and the
/// second radial order-zero eigenvalue.
pub fn disk_lambdas(beta: f64) -> Result<[f64; 4]> {
    check_beta(beta)?;
    let l1 = disk_lambda1(beta)?;
    let l2 = disk_lambda2(beta)?.lambda;

    let hi = 12.0;
    let f2 = |x: f64| characteristic_order2(beta, x);
    let order2 = sign_changes(&f2, 1e-3, hi, 4 * SCAN_CELLS)
        .first()
        .map(|&(a, b)| bisect(f2, a, b).powi(2));

    let f0 = |x: f64| characteristic_order0(beta, x);
    let roots0: Vec<f64> = sign_changes(&f0, 1e-6, hi, 4 * SCAN_CELLS)
        .into_iter()
        .map(|(a, b)| bisect(f0, a, b))
        .collect();
    // for beta > 0 the first positive root is the ground state itself
    let skip = usize::from(beta > 0.0);
    let order0 = roots0.get(skip).map(|x| x * x);

    let l4 = match (order2, order0) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::InvalidInput(format!("no fourth disk eigenvalue below {hi}^2 at beta {beta}")))
        }
    };
    Ok([l1, l2, l2, l4])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle_bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn lambda2_examples() {
        assert_eq!(disk_lambda2(-1.0).unwrap().lambda, 0.0);
        let neumann = disk_lambda2(0.0).unwrap();
        let x = oracle_bisect(bessel_j1_prime, 1.0, 3.0);
        assert!((neumann.x - x).abs() < 1e-11);
        assert!((neumann.x - 1.841_183_781_3).abs() < 1e-10);
        assert!((neumann.lambda - 3.389_957_7).abs() < 1e-6);
        let dirichlet = disk_lambda2(1e6).unwrap();
        let j11 = oracle_bisect(|x| jn(1, x), 3.0, 4.5);
        assert!((dirichlet.lambda - j11 * j11).abs() < 1e-3);
        assert!(disk_lambda2(-1.5).is_err());
    }

    #[test]
    fn characteristic_residual_and_monotonicity() {
        let mut prev = -1.0;
        for k in 0..=200 {
            let beta = -1.0 + 0.01 * k as f64;
            let m = disk_lambda2(beta).unwrap();
            if beta > -1.0 {
                let res = m.x * bessel_j1_prime(m.x) + beta * jn(1, m.x);
                assert!(res.abs() < 1e-10);
                assert!(m.x > 0.0 && m.x < J1_FIRST_ZERO);
                assert!(m.lambda > 0.0);
            }
            assert!((m.lambda - m.x * m.x).abs() < 1e-14);
            assert!(m.lambda > prev);
            prev = m.lambda;
        }
    }

    #[test]
    fn lambda1_examples() {
        assert_eq!(disk_lambda1(0.0).unwrap(), 0.0);
        let f = |x: f64| x * (-jn(1, x)) / jn(0, x) + 1.0;
        let a = oracle_bisect(f, 0.1, 2.3);
        let b = oracle_bisect(f, 0.5, 2.0);
        assert!((a - b).abs() < 1e-10);
        assert!((disk_lambda1(1.0).unwrap() - a * a).abs() < 1e-10);
        assert!(disk_lambda1(-0.5).unwrap() < 0.0);
        // small beta: lambda_1 ~ 2 beta (perimeter/area)
        assert!((disk_lambda1(1e-6).unwrap() / 2e-6 - 1.0).abs() < 1e-5);
        assert!((disk_lambda1(-1e-6).unwrap() / -2e-6 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn low_spectrum_ordering() {
        for k in 0..=20 {
            let beta = -1.0 + 0.1 * k as f64;
            let l = disk_lambdas(beta).unwrap();
            assert!(l[0] <= l[1] && l[1] == l[2] && l[2] <= l[3], "{beta}: {l:?}");
        }
        let n = disk_lambdas(0.0).unwrap();
        assert!((n[1] - 3.389_957_7).abs() < 1e-6);
        // Neumann: min(j'_{2,1}^2, j_{1,1}^2) = 3.0542^2
        assert!((n[3] - 3.054_236_928_2_f64.powi(2)).abs() < 1e-8);
    }
}
