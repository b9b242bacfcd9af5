//! Complex-plane map algebra on the closed unit disk: Möbius self-maps,
//! line reflections, hyperbolic caps, the hyperbolic reflection and fold
//! attached to a cap, and the cap map from a cap onto the disk.
//!
//! Conventions. `M_w(z) = (z + w) / (z conj(w) + 1)`, which is the constant
//! `w` when `|w| = 1`. `R_p(z) = -p^2 conj(z)` reflects across the line
//! through the origin perpendicular to the unit vector `p`. The cap
//! `C_{p,t}` is `M_{-pt}` applied to the half-disk `{z : Re(z conj p) >= 0}`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack on `|w| <= 1` and `||p| - 1|`.
pub const UNIT_TOL: f64 = 1e-14;
/// Points this close to the geodesic count as inside the cap.
pub const CAP_SLACK: f64 = 1e-12;
/// Caps with `t` this close to one are treated as the whole disk.
pub const FULL_CAP_EPS: f64 = 1e-12;

/// Parameter `w` of the Möbius map `M_w`, `|w| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusParam(C64);

impl MoebiusParam {
    pub fn new(w: C64) -> Result<Self> {
        if !(w.re.is_finite() && w.im.is_finite()) || w.norm() > 1.0 + UNIT_TOL {
            return Err(Error::InvalidInput(format!("Möbius parameter |w| = {} > 1", w.norm())));
        }
        Ok(Self(w))
    }

    pub const fn origin() -> Self {
        Self(C64::new(0.0, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    /// `|w| = 1` up to [`UNIT_TOL`]; `M_w` is then constant.
    pub fn is_boundary(self) -> bool {
        self.0.norm() >= 1.0 - UNIT_TOL
    }

    pub fn apply(self, z: C64) -> C64 {
        mobius(self.0, z)
    }
}

/// Unit vector `p` perpendicular to a reflection line through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionAxis(C64);

impl ReflectionAxis {
    pub fn new(p: C64) -> Result<Self> {
        if !((p.norm() - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::InvalidInput(format!("axis |p| = {} is not 1", p.norm())));
        }
        Ok(Self(p))
    }

    /// Normalizes any nonzero `b` to `b / |b|`.
    pub fn from_nonzero(b: C64) -> Result<Self> {
        let n = b.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput("reflection axis from zero vector".into()));
        }
        Ok(Self(b / n))
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(C64::from_polar(1.0, theta))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    pub fn reflect(self, z: C64) -> C64 {
        reflect_raw(self.0, z)
    }
}

/// Cap parameters `(p, t)` with `t` in `[0, 1]`; `t = 1` is the whole disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapParams {
    pub p: ReflectionAxis,
    pub t: f64,
}

impl CapParams {
    pub fn new(p: ReflectionAxis, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!("cap parameter t = {t} outside [0, 1]")));
        }
        Ok(Self { p, t })
    }

    pub fn half_disk(p: ReflectionAxis) -> Self {
        Self { p, t: 0.0 }
    }

    pub fn is_full_disk(&self) -> bool {
        self.t >= 1.0 - FULL_CAP_EPS
    }

    fn require_proper(&self) -> Result<()> {
        if self.is_full_disk() {
            Err(Error::DegenerateCap { t: self.t })
        } else {
            Ok(())
        }
    }
}

/// Boundary data of a cap: the two corners on the unit circle, the pole
/// `p`, and the circle carrying the geodesic arc. A diameter (`t = 0`) has
/// `geodesic_radius = +inf` and `geodesic_center = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapGeometry {
    pub corner_minus: C64,
    pub corner_plus: C64,
    pub pole: C64,
    pub geodesic_center: C64,
    pub geodesic_radius: f64,
}

impl CapGeometry {
    pub fn is_diameter(&self) -> bool {
        self.geodesic_radius.is_infinite()
    }
}

#[inline]
pub(crate) fn mobius(w: C64, z: C64) -> C64 {
    if w.norm_sqr() >= 1.0 {
        return w;
    }
    (z + w) / (z * w.conj() + 1.0)
}

#[inline]
pub(crate) fn reflect_raw(p: C64, z: C64) -> C64 {
    -(p * p) * z.conj()
}

/// `M_w(z)`.
pub fn moebius_apply(w: MoebiusParam, z: C64) -> Result<C64> {
    if z.norm() > 1.0 + UNIT_TOL {
        return Err(Error::InvalidInput(format!("|z| = {} > 1", z.norm())));
    }
    let wv = w.value();
    if w.is_boundary() {
        return Ok(wv);
    }
    let den = z * wv.conj() + 1.0;
    if den.norm() < 1e-15 {
        return Err(Error::InvalidInput("Möbius denominator vanishes".into()));
    }
    Ok((z + wv) / den)
}

/// Inverse of `M_w`, which is `M_{-w}`.
pub fn moebius_inverse(w: MoebiusParam) -> Result<MoebiusParam> {
    if w.is_boundary() {
        return Err(Error::InvalidInput("M_w with |w| = 1 is constant and not invertible".into()));
    }
    Ok(MoebiusParam(-w.value()))
}

pub fn reflect(axis: ReflectionAxis, z: C64) -> C64 {
    axis.reflect(z)
}

/// `|M_{R_p(w)}(z) - (R_p ∘ M_w ∘ R_p)(z)|`.
pub fn conjugation_identity_residual(p: ReflectionAxis, w: MoebiusParam, z: C64) -> f64 {
    let lhs = mobius(p.reflect(w.value()), z);
    let rhs = p.reflect(mobius(w.value(), p.reflect(z)));
    (lhs - rhs).norm()
}

pub fn cap_geometry(cap: CapParams) -> Result<CapGeometry> {
    cap.require_proper()?;
    let p = cap.p.value();
    let shift = -p * cap.t;
    let ip = C64::i() * p;
    let corner_plus = mobius(shift, ip);
    let corner_minus = mobius(shift, -ip);
    let (geodesic_center, geodesic_radius) = if cap.t == 0.0 {
        (C64::new(0.0, 0.0), f64::INFINITY)
    } else {
        let t = cap.t;
        (-p * ((1.0 + t * t) / (2.0 * t)), (1.0 - t * t) / (2.0 * t))
    };
    Ok(CapGeometry {
        corner_minus,
        corner_plus,
        pole: p,
        geodesic_center,
        geodesic_radius,
    })
}

/// Membership in the closed cap, with [`CAP_SLACK`] at the geodesic.
pub fn cap_contains(cap: CapParams, z: C64) -> bool {
    if cap.is_full_disk() {
        return true;
    }
    cap_side(cap.p.value(), cap.t, z) >= -CAP_SLACK
}

/// `Re(conj(p) M_{pt}(z))`: positive inside the cap, zero on the geodesic.
#[inline]
pub(crate) fn cap_side(p: C64, t: f64, z: C64) -> f64 {
    (p.conj() * mobius(p * t, z)).re
}

#[inline]
pub(crate) fn tau_raw(p: C64, t: f64, z: C64) -> C64 {
    mobius(-p * t, reflect_raw(p, mobius(p * t, z)))
}

#[inline]
pub(crate) fn fold_raw(p: C64, t: f64, z: C64) -> C64 {
    if cap_side(p, t, z) >= -CAP_SLACK {
        z
    } else {
        tau_raw(p, t, z)
    }
}

/// `τ_C = M_{-pt} ∘ R_p ∘ M_{pt}`.
pub fn hyperbolic_reflect(cap: CapParams, z: C64) -> Result<C64> {
    cap.require_proper()?;
    Ok(tau_raw(cap.p.value(), cap.t, z))
}

/// Folds the disk onto the cap across its geodesic.
pub fn fold(cap: CapParams, z: C64) -> Result<C64> {
    cap.require_proper()?;
    Ok(fold_raw(cap.p.value(), cap.t, z))
}

/// Conformal map of the right half-disk onto the disk fixing `i`, `-i`, `1`.
///
/// Composite of `z -> ((i - z)/(i + z))^2` (half-disk to upper half-plane)
/// with the half-plane-to-disk map sending `0, ∞, -1` to `i, -i, 1`. Its
/// poles `1 ± √2` avoid the closed half-disk.
#[inline]
pub fn half_disk_cap_map(z: C64) -> C64 {
    let z2 = z * z;
    (1.0 - 2.0 * z - z2) / (z2 - 2.0 * z - 1.0)
}

/// Hyperbolic translation parameter along the pole axis applied after the
/// half-disk map: `2 artanh(s) = t ln 2`, so `s(0) = 0` and `s(1) = 1/3`.
#[inline]
pub fn cap_map_shift(t: f64) -> f64 {
    let e = 2f64.powf(t);
    (e - 1.0) / (e + 1.0)
}

#[inline]
pub(crate) fn cap_map_raw(p: C64, t: f64, z: C64) -> C64 {
    let pulled = p.conj() * mobius(p * t, z);
    let h = p * half_disk_cap_map(pulled);
    mobius(-p * t, mobius(p * cap_map_shift(t), h))
}

/// Cap map `G_C : C -> D`.
///
/// `G_{C_{p,t}} = M_{-pt} ∘ M_{p s(t)} ∘ (p H p̄) ∘ M_{pt}` where `H` is
/// [`half_disk_cap_map`] and `s` is [`cap_map_shift`]. At `t = 0` this is
/// the map fixing both corners and the pole; the extra translation makes
/// `G_C` tend to the identity as `t -> 1`.
pub fn cap_map(cap: CapParams, z: C64) -> Result<C64> {
    cap.require_proper()?;
    if z.norm() > 1.0 + CAP_SLACK || !cap_contains(cap, z) {
        return Err(Error::OutsideCap { re: z.re, im: z.im });
    }
    Ok(cap_map_raw(cap.p.value(), cap.t, z))
}

/// Images prescribed for `(corner_minus, corner_plus, pole)` under the cap
/// map. They equal the points themselves at `t = 0`.
pub fn cap_map_targets(cap: CapParams) -> Result<[C64; 3]> {
    cap.require_proper()?;
    let p = cap.p.value();
    let ip = C64::i() * p;
    let s = cap_map_shift(cap.t);
    let back = |q: C64| mobius(-p * cap.t, mobius(p * s, q));
    Ok([back(-ip), back(ip), p])
}

/// Largest distance between `G_C` at the three normalization points and
/// their prescribed images.
pub fn cap_map_normalization_residual(cap: CapParams) -> Result<f64> {
    let geo = cap_geometry(cap)?;
    let targets = cap_map_targets(cap)?;
    let pts = [geo.corner_minus, geo.corner_plus, geo.pole];
    Ok(pts
        .iter()
        .zip(targets.iter())
        .map(|(&z, &target)| (cap_map_raw(cap.p.value(), cap.t, z) - target).norm())
        .fold(0.0, f64::max))
}

/// `|G_{C_{-b,0}}(z) - (R_b ∘ G_{C_{b,0}} ∘ R_b)(z)|` for `z` in `C_{-b,0}`.
pub fn cap_map_equivariance_residual(b: C64, z: C64) -> Result<f64> {
    let axis = ReflectionAxis::from_nonzero(b)?;
    let minus = CapParams::half_disk(ReflectionAxis(-axis.value()));
    let plus = CapParams::half_disk(axis);
    let lhs = cap_map(minus, z)?;
    let rhs = axis.reflect(cap_map(plus, axis.reflect(z))?);
    Ok((lhs - rhs).norm())
}
