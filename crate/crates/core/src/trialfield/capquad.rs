//! Quadrature on the disk adapted to a cap and its fold line.
//!
//! Nodes use polar coordinates about the origin, with angles measured from
//! the direction `-p`. A ray at relative angle `φ` with `|φ| < Δ`,
//! `cos Δ = 2t / (1 + t^2)`, crosses the geodesic at radius
//! `a(φ) = cos Δ / (cos φ + sqrt(cos^2 φ - cos^2 Δ))`. Three panels follow:
//! `φ ∈ [Δ, 2π - Δ]` (inside the cap), `|φ| < Δ, r < a(φ)` (inside the cap)
//! and `|φ| < Δ, r > a(φ)` (the complement). On the last two the angle is
//! `sin φ = sin Δ sin(πu/2)`, which makes `a` smooth in `u`, so every panel
//! carries a smooth integrand.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::TrialContext;
use crate::complexgeo::{cap_map_raw, mobius, tau_raw, CapParams};
use crate::quadrature::{gauss_legendre, periodic_trapezoid};

/// Node counts per panel: `angular` in the angle-like variable, `radial` along rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadLevel {
    pub angular: usize,
    pub radial: usize,
}

impl QuadLevel {
    pub const COARSE: Self = Self { angular: 12, radial: 10 };
    pub const MEDIUM: Self = Self { angular: 24, radial: 18 };
    pub const FINE: Self = Self { angular: 40, radial: 30 };

    pub fn refined(self) -> Self {
        Self { angular: self.angular * 3 / 2, radial: self.radial * 3 / 2 }
    }
}

/// Precomputed nodes `ξ_k` (the point fed to `v ∘ M_w`) and weights
/// `ω f_1 |Φ'|^2`, `ω f_★ |Φ'|^2`, `ω |Φ'|^2`.
#[derive(Debug, Clone)]
pub struct CapQuadrature {
    pub cap: CapParams,
    pub xi: Vec<C64>,
    pub w1: Vec<f64>,
    pub wstar: Vec<f64>,
    pub wmass: Vec<f64>,
}

struct Builder<'a> {
    ctx: &'a TrialContext,
    q: CapQuadrature,
}

impl Builder<'_> {
    fn push(&mut self, eta: C64, xi: C64, omega: f64) {
        if omega == 0.0 {
            return;
        }
        let [f1, fs] = self.ctx.basis.eval_expansions(eta, [&self.ctx.f1, &self.ctx.fstar]);
        let jw = self.ctx.domain.jacobian(eta) * omega;
        self.q.xi.push(xi);
        self.q.w1.push(f1 * jw);
        self.q.wstar.push(fs * jw);
        self.q.wmass.push(jw);
    }
}

impl CapQuadrature {
    pub fn new(ctx: &TrialContext, cap: CapParams, level: QuadLevel) -> Self {
        let cap = CapParams { p: cap.p, t: cap.t.clamp(0.0, 1.0) };
        let mut b = Builder {
            ctx,
            q: CapQuadrature { cap, xi: Vec::new(), w1: Vec::new(), wstar: Vec::new(), wmass: Vec::new() },
        };
        let (gr, wr) = gauss_legendre(level.radial);
        let (ga, wa) = gauss_legendre(level.angular);
        // map [-1, 1] rules onto [0, 1]
        let rad: Vec<(f64, f64)> = gr.iter().zip(&wr).map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w)).collect();

        if cap.is_full_disk() {
            let (th, wt) = periodic_trapezoid(2 * level.angular);
            for &theta in &th {
                let e = C64::from_polar(1.0, theta);
                for &(r, w) in &rad {
                    let eta = e * r;
                    b.push(eta, eta, w * wt * r);
                }
            }
            return b.q;
        }

        let p = cap.p.value();
        let t = cap.t;
        let cos_d = 2.0 * t / (1.0 + t * t);
        let sin_d = (1.0 - t * t) / (1.0 + t * t);
        let delta = cos_d.acos();
        let dir = -p;

        // panel A
        let half = PI - delta;
        for (&x, &wx) in ga.iter().zip(&wa) {
            let phi = PI + half * x;
            let e = dir * C64::from_polar(1.0, phi);
            for &(r, w) in &rad {
                let eta = e * r;
                b.push(eta, cap_map_raw(p, t, eta), half * wx * w * r);
            }
        }

        // panels B and C
        for (&u, &wu) in ga.iter().zip(&wa) {
            let (s, c) = (0.5 * PI * u).sin_cos();
            let sphi = sin_d * s;
            let cphi = (1.0 - sphi * sphi).sqrt();
            let dphi = 0.5 * PI * sin_d * c / cphi;
            let a = cos_d / (cphi + sin_d * c);
            let e = dir * C64::new(cphi, sphi);
            let wang = wu * dphi;
            if a > 0.0 {
                for &(s, w) in &rad {
                    let r = a * s;
                    let eta = e * r;
                    b.push(eta, cap_map_raw(p, t, eta), wang * a * w * r);
                }
            }
            for &(s, w) in &rad {
                let r = a + (1.0 - a) * s;
                let eta = e * r;
                b.push(eta, cap_map_raw(p, t, tau_raw(p, t, eta)), wang * (1.0 - a) * w * r);
            }
        }
        b.q
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// `(∫ u f_1 |Φ'|^2, ∫ u f_★ |Φ'|^2)` with `u = v ∘ M_w ∘ G_C ∘ F_C`.
    pub fn field(&self, ctx: &TrialContext, w: C64) -> (C64, C64) {
        if w.norm_sqr() >= 1.0 {
            let vw = ctx.profile.v(w / w.norm());
            let s1: f64 = self.w1.iter().sum();
            let s2: f64 = self.wstar.iter().sum();
            return (vw * s1, vw * s2);
        }
        let mut acc1 = C64::new(0.0, 0.0);
        let mut acc2 = C64::new(0.0, 0.0);
        for k in 0..self.xi.len() {
            let u = ctx.profile.v(mobius(w, self.xi[k]));
            acc1 += u * self.w1[k];
            acc2 += u * self.wstar[k];
        }
        (acc1, acc2)
    }

    /// `∫ |u|^2 |Φ'|^2`.
    pub fn mass(&self, ctx: &TrialContext, w: C64) -> f64 {
        self.xi
            .iter()
            .zip(&self.wmass)
            .map(|(&xi, &wm)| ctx.profile.v(mobius(w, xi)).norm_sqr() * wm)
            .sum()
    }

    /// `∫ g |Φ'|^2` for an arbitrary function of the original point; used by tests.
    pub fn total_weight(&self) -> f64 {
        self.wmass.iter().sum()
    }
}
