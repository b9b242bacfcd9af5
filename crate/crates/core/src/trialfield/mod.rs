//! Trial functions `u = v ∘ M_w ∘ G_C ∘ F_C` in disk coordinates, the
//! orthogonality field `V(w, p, t) = (<u, f_1>, <u, f_★>)`, the chart
//! `Ψ : (w, p) -> (a, b) ∈ S^3`, zero search and Rayleigh quotients.

mod capquad;
mod search;

pub use capquad::{CapQuadrature, QuadLevel};
pub use search::{find_zero, SearchConfig, SearchReport, ZeroCandidate};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::complexgeo::{cap_map_raw, fold_raw, CapParams, MoebiusParam, ReflectionAxis};
use crate::diskspec::{disk_lambda2, RadialProfile};
use crate::error::{Error, Result};
use crate::quadrature::periodic_trapezoid;
use crate::robinsolver::{fstar, DomainSpec, ModalBasis, SpectrumResult};

const BOUNDARY_NODES: usize = 1024;

/// Everything the field needs about one solved domain.
#[derive(Debug, Clone)]
pub struct TrialContext {
    pub domain: DomainSpec,
    pub basis: ModalBasis,
    pub f1: Vec<f64>,
    pub fstar: Vec<f64>,
    pub mean_f1: f64,
    pub rho: f64,
    pub alpha: f64,
    pub profile: RadialProfile,
    pub gmax: f64,
    pub lambda3: f64,
    pub convergence_estimate: f64,
}

impl TrialContext {
    /// Uses the disk mode with parameter `alpha / 4π`.
    pub fn new(domain: &DomainSpec, spectrum: &SpectrumResult) -> Result<Self> {
        Self::with_profile_beta(domain, spectrum, spectrum.alpha / (4.0 * PI))
    }

    /// Uses the disk mode with an explicit parameter `beta`.
    pub fn with_profile_beta(domain: &DomainSpec, spectrum: &SpectrumResult, beta: f64) -> Result<Self> {
        let profile = RadialProfile::new(disk_lambda2(beta)?);
        let gmax = profile.max_value();
        Ok(Self {
            domain: domain.clone(),
            basis: spectrum.basis(),
            f1: spectrum.f1().to_vec(),
            fstar: fstar(spectrum),
            mean_f1: spectrum.means[0],
            rho: spectrum.rho,
            alpha: spectrum.alpha,
            profile,
            gmax,
            lambda3: spectrum.lambdas[2],
            convergence_estimate: spectrum.convergence_estimate,
        })
    }

    /// `‖f_★‖ = sqrt(1 + ρ^2)` for orthonormal `f_1, f_2`.
    pub fn fstar_norm(&self) -> f64 {
        (1.0 + self.rho * self.rho).sqrt()
    }

    /// Normalization making residuals domain independent.
    pub fn residual_scale(&self) -> f64 {
        self.gmax * self.domain.area.sqrt() * self.fstar_norm().max(1.0)
    }

    pub fn kappa(&self) -> f64 {
        self.alpha / self.domain.perimeter
    }
}

/// Möbius parameter and cap of one trial function; `t = 1` means no fold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialParams {
    pub w: MoebiusParam,
    pub cap: CapParams,
}

/// Point `(a, b)` of `S^3` together with the cap parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereParam {
    pub a: C64,
    pub b: C64,
    pub t: f64,
}

impl SphereParam {
    pub fn new(a: C64, b: C64, t: f64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpherePoint(format!("|a|^2 + |b|^2 = {n}")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidSpherePoint(format!("t = {t} outside [0, 1]")));
        }
        Ok(Self { a, b, t })
    }

    pub fn as_r4(&self) -> [f64; 4] {
        [self.a.re, self.a.im, self.b.re, self.b.im]
    }

    pub fn from_r4(x: [f64; 4], t: f64) -> Self {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self { a: C64::new(x[0] / n, x[1] / n), b: C64::new(x[2] / n, x[3] / n), t }
    }

    /// `(w(a), p(b))`; `p` defaults to 1 when `b = 0`.
    pub fn params(&self) -> TrialParams {
        let w = w_of_a(self.a);
        let p = if self.b.norm() > 0.0 { ReflectionAxis::from_nonzero(self.b).expect("nonzero") } else { ReflectionAxis::from_angle(0.0) };
        TrialParams { w: MoebiusParam::new(w).expect("|w(a)| <= 1"), cap: CapParams { p, t: self.t } }
    }
}

/// `w(a) = a / sqrt(1 + sqrt(1 - |a|^2))`.
pub fn w_of_a(a: C64) -> C64 {
    let s = (1.0 - a.norm_sqr()).max(0.0).sqrt();
    let w = a / (1.0 + s).sqrt();
    if w.norm() > 1.0 {
        w / w.norm()
    } else {
        w
    }
}

/// `Ψ(w, p) = (sqrt(2 - |w|^2) w, (1 - |w|^2) p)`.
pub fn psi(w: MoebiusParam, p: ReflectionAxis) -> (C64, C64) {
    let w = w.value();
    let n = w.norm_sqr();
    ((2.0 - n).sqrt() * w, (1.0 - n) * p.value())
}

/// Inverse chart; fails for `b = 0` unless `|a| = 1`.
pub fn psi_inverse(a: C64, b: C64) -> Result<(MoebiusParam, Option<ReflectionAxis>)> {
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidSpherePoint(format!("|a|^2 + |b|^2 = {n}")));
    }
    let w = MoebiusParam::new(w_of_a(a))?;
    if b.norm() == 0.0 {
        if (a.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpherePoint("b = 0 with |a| != 1".into()));
        }
        return Ok((w, None));
    }
    Ok((w, Some(ReflectionAxis::from_nonzero(b)?)))
}

/// `(<u, f_1>, <u, f_★>)` in `L^2(Ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldValue {
    pub inner1: C64,
    pub inner2: C64,
}

impl VectorFieldValue {
    pub fn as_r4(&self) -> [f64; 4] {
        [self.inner1.re, self.inner1.im, self.inner2.re, self.inner2.im]
    }

    pub fn norm(&self) -> f64 {
        (self.inner1.norm_sqr() + self.inner2.norm_sqr()).sqrt()
    }
}

/// `u_{w,C}(ζ)` for `ζ` in the closed disk.
pub fn trial_eval(params: TrialParams, profile: &RadialProfile, zeta: C64) -> C64 {
    let w = params.w;
    if w.is_boundary() {
        return profile.v(w.value() / w.value().norm());
    }
    let cap = params.cap;
    let inner = if cap.is_full_disk() {
        zeta
    } else {
        let (p, t) = (cap.p.value(), cap.t);
        cap_map_raw(p, t, fold_raw(p, t, zeta))
    };
    profile.v(w.apply(inner))
}

/// `V(w, p, t)` with quadrature checked by one refinement step.
pub fn vector_field(params: TrialParams, ctx: &TrialContext) -> Result<VectorFieldValue> {
    vector_field_checked(params, ctx, QuadLevel::FINE, 1e-8)
}

/// `V` at `level`, failing when refinement changes it by more than
/// `tolerance` relative to [`TrialContext::residual_scale`].
pub fn vector_field_checked(params: TrialParams, ctx: &TrialContext, level: QuadLevel, tolerance: f64) -> Result<VectorFieldValue> {
    let eval = |lv: QuadLevel| {
        let q = CapQuadrature::new(ctx, params.cap, lv);
        let (inner1, inner2) = q.field(ctx, params.w.value());
        VectorFieldValue { inner1, inner2 }
    };
    let coarse = eval(level);
    let fine = eval(level.refined());
    let change = ((coarse.inner1 - fine.inner1).norm_sqr() + (coarse.inner2 - fine.inner2).norm_sqr()).sqrt() / ctx.residual_scale();
    if change > tolerance {
        return Err(Error::InaccurateQuadrature { change, tolerance });
    }
    Ok(fine)
}

/// `Ṽ(a, b, t) = V(w(a), p(b), t)` at a given quadrature level, unchecked.
pub fn sphere_field(sp: &SphereParam, ctx: &TrialContext, level: QuadLevel) -> VectorFieldValue {
    let params = sp.params();
    let q = CapQuadrature::new(ctx, params.cap, level);
    let (inner1, inner2) = q.field(ctx, params.w.value());
    VectorFieldValue { inner1, inner2 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayleighBreakdown {
    pub dirichlet: f64,
    pub boundary_term: f64,
    pub mass: f64,
    pub quotient: f64,
}

/// Rayleigh quotient of `u_{w,C}` on `Ω` with boundary coefficient `α / L`.
pub fn rayleigh(params: TrialParams, ctx: &TrialContext) -> Result<RayleighBreakdown> {
    rayleigh_at(params, ctx, QuadLevel::FINE)
}

pub fn rayleigh_at(params: TrialParams, ctx: &TrialContext, level: QuadLevel) -> Result<RayleighBreakdown> {
    let energy = ctx.profile.dirichlet();
    let dirichlet = if params.cap.is_full_disk() { energy } else { 2.0 * energy };
    let (th, wt) = periodic_trapezoid(BOUNDARY_NODES);
    let boundary_term = th
        .iter()
        .map(|&theta| {
            let e = C64::from_polar(1.0, theta);
            trial_eval(params, &ctx.profile, e).norm_sqr() * ctx.domain.phi_prime(e).norm()
        })
        .sum::<f64>()
        * wt;
    let q = CapQuadrature::new(ctx, params.cap, level);
    let mass = q.mass(ctx, params.w.value());
    let floor = 1e-12 * ctx.gmax * ctx.gmax * ctx.domain.area;
    if !(mass > floor) {
        return Err(Error::DegenerateTrial { mass });
    }
    Ok(RayleighBreakdown {
        dirichlet,
        boundary_term,
        mass,
        quotient: (dirichlet + ctx.kappa() * boundary_term) / mass,
    })
}

#[cfg(test)]
mod tests;
