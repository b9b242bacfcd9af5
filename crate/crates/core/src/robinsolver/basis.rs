//! Disk-orthonormal polynomial basis of Zernike type.
//!
//! Functions are `R_{m,n}(r) T_a(θ)` with `T_0 = 1/√(2π)`,
//! `T_{2m-1} = cos(mθ)/√π`, `T_{2m} = sin(mθ)/√π` and
//! `R_{m,n}(r) = √(2(2n+m+1)) r^m P_n^{(0,m)}(2r^2 - 1)`.
//! The global index of `(a, n)` is `a (N + 1) + n`.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct ModalBasis {
    pub radial_degree: usize,
    pub angular_order: usize,
    // per m: recurrence coefficients (A_n, B_n, C_n) for P_{n+1} = (A x + B) P_n - C P_{n-1}
    recurrence: Vec<Vec<(f64, f64, f64)>>,
    norms: Vec<Vec<f64>>,
}

/// Radial values and derivatives `R_{m,n}(r)`, `R'_{m,n}(r)` at one radius.
pub struct RadialValues {
    pub value: Vec<f64>,
    pub deriv: Vec<f64>,
}

impl ModalBasis {
    pub fn new(radial_degree: usize, angular_order: usize) -> Self {
        let mut recurrence = Vec::with_capacity(angular_order + 1);
        let mut norms = Vec::with_capacity(angular_order + 1);
        for m in 0..=angular_order {
            let b = m as f64;
            let mut rec = Vec::with_capacity(radial_degree);
            for n in 1..radial_degree {
                // Jacobi (alpha = 0, beta = b), step n -> n + 1
                let nf = n as f64;
                let s = 2.0 * nf + b;
                let den = 2.0 * (nf + 1.0) * (nf + b + 1.0) * s;
                let a = (s + 1.0) * (s + 2.0) * s / den;
                let bb = (s + 1.0) * (-b * b) / den;
                let c = 2.0 * nf * (nf + b) * (s + 2.0) / den;
                rec.push((a, bb, c));
            }
            recurrence.push(rec);
            norms.push((0..=radial_degree).map(|n| (2.0 * (2 * n + m + 1) as f64).sqrt()).collect());
        }
        Self { radial_degree, angular_order, recurrence, norms }
    }

    pub fn n_trig(&self) -> usize {
        2 * self.angular_order + 1
    }

    pub fn len(&self) -> usize {
        self.n_trig() * (self.radial_degree + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, trig: usize, n: usize) -> usize {
        trig * (self.radial_degree + 1) + n
    }

    /// Angular order of trig function `a`.
    #[inline]
    pub fn order_of(trig: usize) -> usize {
        trig.div_ceil(2)
    }

    /// `R_{m,n}(r)` and `R'_{m,n}(r)` for `n = 0..=N`.
    pub fn radial(&self, m: usize, r: f64) -> RadialValues {
        let nn = self.radial_degree + 1;
        let x = 2.0 * r * r - 1.0;
        let b = m as f64;
        let mut p = vec![0.0; nn];
        let mut dp = vec![0.0; nn];
        p[0] = 1.0;
        if nn > 1 {
            p[1] = 1.0 + (b + 2.0) * (x - 1.0) / 2.0;
            dp[1] = (b + 2.0) / 2.0;
        }
        for (k, &(a, bb, c)) in self.recurrence[m].iter().enumerate() {
            let n = k + 1;
            p[n + 1] = (a * x + bb) * p[n] - c * p[n - 1];
            dp[n + 1] = a * p[n] + (a * x + bb) * dp[n] - c * dp[n - 1];
        }
        let rm = r.powi(m as i32);
        let drm = if m == 0 { 0.0 } else { b * r.powi(m as i32 - 1) };
        let norms = &self.norms[m];
        let value = (0..nn).map(|n| norms[n] * rm * p[n]).collect();
        let deriv = (0..nn).map(|n| norms[n] * (drm * p[n] + rm * 4.0 * r * dp[n])).collect();
        RadialValues { value, deriv }
    }

    /// Values `T_a(θ)` for all trig functions at angle given by unit `e`.
    pub fn trig(&self, e: C64, out: &mut [f64]) {
        let c0 = 1.0 / (2.0 * PI).sqrt();
        let c1 = 1.0 / PI.sqrt();
        out[0] = c0;
        let mut em = C64::new(1.0, 0.0);
        for m in 1..=self.angular_order {
            em *= e;
            out[2 * m - 1] = c1 * em.re;
            out[2 * m] = c1 * em.im;
        }
    }

    /// All basis values at `z`, written to `out` (length [`len`](Self::len)).
    pub fn eval_all(&self, z: C64, out: &mut [f64]) {
        let r = z.norm();
        let e = if r > 0.0 { z / r } else { C64::new(1.0, 0.0) };
        let mut trig = vec![0.0; self.n_trig()];
        self.trig(e, &mut trig);
        let nn = self.radial_degree + 1;
        for m in 0..=self.angular_order {
            let rad = self.radial(m, r);
            let trigs: &[usize] = if m == 0 { &[0] } else { &[2 * m - 1, 2 * m] };
            for &a in trigs {
                let base = a * nn;
                for n in 0..nn {
                    out[base + n] = rad.value[n] * trig[a];
                }
            }
        }
    }

    /// `Σ_i coeffs_i φ_i(z)` for each coefficient vector.
    pub fn eval_expansions<const K: usize>(&self, z: C64, coeffs: [&[f64]; K]) -> [f64; K] {
        let r = z.norm();
        let e = if r > 0.0 { z / r } else { C64::new(1.0, 0.0) };
        let mut trig = vec![0.0; self.n_trig()];
        self.trig(e, &mut trig);
        let nn = self.radial_degree + 1;
        let mut acc = [0.0; K];
        for m in 0..=self.angular_order {
            // r^m underflows harmlessly; skip the recurrence when negligible
            if m > 0 && r.powi(m as i32) < 1e-30 {
                break;
            }
            let rad = self.radial(m, r);
            let trigs: &[usize] = if m == 0 { &[0] } else { &[2 * m - 1, 2 * m] };
            for &a in trigs {
                let base = a * nn;
                for (k, c) in coeffs.iter().enumerate() {
                    let s: f64 = rad.value.iter().zip(&c[base..base + nn]).map(|(v, w)| v * w).sum();
                    acc[k] += s * trig[a];
                }
            }
        }
        acc
    }
}
