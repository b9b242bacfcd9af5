use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::triangulation::{norm4, TriangulatedSphere, Vec4};
use super::{paired_degree, DegreeResult, DEFAULT_TARGET_SEED, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::trialfield::{sphere_field, QuadLevel, SphereParam, TrialContext};

/// A field `Ṽ(a, b, t)` on `S^3 × [0, 1]` with values in `R^4`.
pub trait SphereField: Sync {
    fn name(&self) -> String;

    /// Value and an estimate of its numerical error.
    fn eval(&self, x: Vec4, t: f64) -> (Vec4, f64);

    /// `|Ṽ|` below this counts as a sampled zero.
    fn zero_threshold(&self) -> f64;

    /// Whether `Ṽ(·, 0)` has the reflection symmetry, so that a nonvanishing
    /// `W_0` must have degree 1.
    fn w0_symmetric(&self) -> bool {
        false
    }
}

/// Outcome of the degree argument for `W_t = Ṽ(·, t) / |Ṽ(·, t)|`, `t ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Certificate {
    /// A triangulation vertex where `|Ṽ|` is below the zero threshold.
    ZeroLocatedBySampling { point: [f64; 4], t: f64, norm: f64 },
    /// `|Ṽ|` is within ten times its error estimate, so signs are unreliable.
    Indeterminate { point: [f64; 4], t: f64, norm: f64, error: f64 },
    /// `certifies` holds when both degrees are confident and either differ,
    /// which forces a zero of `Ṽ` for some `t` in `[0, 1]`, or `deg W_0 != 1`
    /// (`zero_at_t0`), which for a reflection-symmetric `W_0` forces a zero at `t = 0`.
    Degrees { w0: DegreeResult, w1: DegreeResult, zero_at_t0: bool, certifies: bool },
}

/// Degrees of `W_0` and `W_1` at `level` (re-checked at `level + 1`).
pub fn field_certificate(field: &dyn SphereField, level: u32) -> Result<Certificate> {
    if level >= MAX_LEVEL {
        return Err(Error::InvalidInput(format!("level {level} must be below {MAX_LEVEL}")));
    }
    let coarse = TriangulatedSphere::cached(level)?;
    let fine = TriangulatedSphere::cached(level + 1)?;
    let n_coarse = coarse.vertices().len();
    debug_assert_eq!(coarse.vertices(), &fine.vertices()[..n_coarse]);
    let mut degrees = Vec::with_capacity(2);
    for t in [0.0, 1.0] {
        let values: Vec<(Vec4, f64)> = fine.vertices().par_iter().map(|&x| field.eval(x, t)).collect();
        let (imin, &(vmin, _)) = values.iter().enumerate().min_by(|a, b| norm4(a.1 .0).total_cmp(&norm4(b.1 .0))).expect("vertices");
        let nmin = norm4(vmin);
        if nmin < field.zero_threshold() {
            return Ok(Certificate::ZeroLocatedBySampling { point: fine.vertices()[imin], t, norm: nmin });
        }
        if let Some((i, &(v, e))) = values.iter().enumerate().find(|(_, (v, e))| norm4(*v) < 10.0 * e) {
            return Ok(Certificate::Indeterminate { point: fine.vertices()[i], t, norm: norm4(v), error: e });
        }
        let images: Vec<Vec4> = values.iter().map(|(v, _)| v.map(|c| c / norm4(*v))).collect();
        let coarse_images = images[..n_coarse].to_vec();
        degrees.push(paired_degree(level, [(&coarse.complex, &coarse_images), (&fine.complex, &images)], DEFAULT_TARGET_SEED)?);
    }
    let w1 = degrees.pop().expect("two degrees");
    let w0 = degrees.pop().expect("two degrees");
    let zero_at_t0 = field.w0_symmetric() && w0.confident() && w0.value != 1;
    let certifies = zero_at_t0 || (w0.confident() && w1.confident() && w0.value != w1.value);
    Ok(Certificate::Degrees { w0, w1, zero_at_t0, certifies })
}

/// The orthogonality field of a solved domain, at the MEDIUM cap quadrature
/// with the FINE value as error reference.
pub struct TrialSphereField<'a> {
    pub ctx: &'a TrialContext,
    pub threshold: f64,
}

impl<'a> TrialSphereField<'a> {
    pub fn new(ctx: &'a TrialContext) -> Self {
        Self { ctx, threshold: 1e-6 * ctx.residual_scale() }
    }
}

impl SphereField for TrialSphereField<'_> {
    fn name(&self) -> String {
        "trial-field".into()
    }

    fn eval(&self, x: Vec4, t: f64) -> (Vec4, f64) {
        let sp = SphereParam::from_r4(x, t);
        let v = sphere_field(&sp, self.ctx, QuadLevel::FINE).as_r4();
        let m = sphere_field(&sp, self.ctx, QuadLevel::MEDIUM).as_r4();
        let err = norm4(std::array::from_fn(|k| v[k] - m[k]));
        (v, err)
    }

    fn zero_threshold(&self) -> f64 {
        self.threshold
    }

    fn w0_symmetric(&self) -> bool {
        true
    }
}

/// Certificate for the orthogonality field of a solved domain.
pub fn degree_certificate(ctx: &TrialContext, level: u32) -> Result<Certificate> {
    field_certificate(&TrialSphereField::new(ctx), level)
}

/// `Ṽ(a, b, t) = (a, (1 - t) b + t (s - |a|^2))` with `s > 0`: its only zero
/// is `a = 0, b = -1, t = 1 / (1 + s)`, `W_0` is the identity and `W_1`
/// depends on `a` alone.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedField {
    pub shift: f64,
}

impl ManufacturedField {
    pub fn zero(&self) -> (Vec4, f64) {
        ([0.0, 0.0, -1.0, 0.0], 1.0 / (1.0 + self.shift))
    }
}

impl SphereField for ManufacturedField {
    fn name(&self) -> String {
        format!("manufactured(shift={})", self.shift)
    }

    fn eval(&self, x: Vec4, t: f64) -> (Vec4, f64) {
        let a2 = x[0] * x[0] + x[1] * x[1];
        ([x[0], x[1], (1.0 - t) * x[2] + t * (self.shift - a2), (1.0 - t) * x[3]], 0.0)
    }

    fn zero_threshold(&self) -> f64 {
        1e-10
    }

    fn w0_symmetric(&self) -> bool {
        true
    }
}
