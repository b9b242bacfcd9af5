//! Multistart damped Newton for zeros of `Ṽ` on `S^3 × [0, 1]`.

use nalgebra::{Matrix4, Vector4, SVD};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{CapQuadrature, QuadLevel, SphereParam, TrialContext};
use crate::complexgeo::{CapParams, MoebiusParam, ReflectionAxis, FULL_CAP_EPS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub scan_radii: usize,
    pub scan_angles: usize,
    pub p_angles: usize,
    pub t_values: Vec<f64>,
    pub max_w_radius: f64,
    pub starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub fd_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            scan_radii: 17,
            scan_angles: 17,
            p_angles: 16,
            t_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            max_w_radius: 0.95,
            starts: 6,
            max_iterations: 40,
            tolerance: 1e-7,
            fd_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroCandidate {
    pub params: SphereParam,
    pub w: C64,
    pub p: C64,
    /// Scaled `|Ṽ|` at the working quadrature level.
    pub residual: f64,
    /// Scaled `|Ṽ|` at the next refinement level.
    pub residual_refined: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ZeroCandidate {
    pub fn case(&self) -> &'static str {
        if self.params.t >= 1.0 - FULL_CAP_EPS {
            "t=1"
        } else {
            "t<1"
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub best: ZeroCandidate,
    /// Distinct converged zeros, more than `1e-3` apart in the chart.
    pub zeros: Vec<ZeroCandidate>,
    pub starts_tried: usize,
}

struct Field<'a> {
    ctx: &'a TrialContext,
    scale: f64,
}

impl Field<'_> {
    fn eval(&self, x: &Vector4<f64>, t: f64, level: QuadLevel) -> Vector4<f64> {
        let sp = SphereParam::from_r4([x[0], x[1], x[2], x[3]], t.clamp(0.0, 1.0));
        let v = super::sphere_field(&sp, self.ctx, level);
        Vector4::from(v.as_r4()) / self.scale
    }
}

/// Orthonormal basis of the tangent space of `S^3` at `x`.
fn tangent_basis(x: &Vector4<f64>) -> [Vector4<f64>; 3] {
    let mut out: Vec<Vector4<f64>> = Vec::with_capacity(3);
    let mut cands: Vec<Vector4<f64>> = (0..4).map(|i| Vector4::ith(i, 1.0)).collect();
    cands.sort_by(|a, b| a.dot(x).abs().total_cmp(&b.dot(x).abs()));
    for e in cands {
        let mut v = e - x * x.dot(&e);
        for u in &out {
            v -= u * u.dot(&v);
        }
        let n = v.norm();
        if n > 1e-6 && out.len() < 3 {
            out.push(v / n);
        }
    }
    [out[0], out[1], out[2]]
}

fn stereo(xc: &Vector4<f64>, e: &[Vector4<f64>; 3], y: [f64; 3]) -> Vector4<f64> {
    let y2 = y.iter().map(|v| v * v).sum::<f64>();
    let tangent = e[0] * y[0] + e[1] * y[1] + e[2] * y[2];
    (xc * (1.0 - y2) + tangent * 2.0) / (1.0 + y2)
}

struct NewtonOutcome {
    x: Vector4<f64>,
    t: f64,
    residual: f64,
    iterations: usize,
}

fn newton(field: &Field, x0: Vector4<f64>, t0: f64, level: QuadLevel, cfg: &SearchConfig, target: f64) -> NewtonOutcome {
    let h = cfg.fd_step;
    let mut x = x0.normalize();
    let mut t = t0.clamp(0.0, 1.0);
    let mut f = field.eval(&x, t, level);
    let mut res = f.norm();
    let mut iterations = 0;
    while iterations < cfg.max_iterations && res > target {
        iterations += 1;
        let e = tangent_basis(&x);
        let mut jac = Matrix4::zeros();
        for i in 0..3 {
            let mut yp = [0.0; 3];
            yp[i] = h;
            let mut ym = [0.0; 3];
            ym[i] = -h;
            let fp = field.eval(&stereo(&x, &e, yp), t, level);
            let fm = field.eval(&stereo(&x, &e, ym), t, level);
            jac.set_column(i, &((fp - fm) / (2.0 * h)));
        }
        let (tl, th) = ((t - h).max(0.0), (t + h).min(1.0));
        let ft = (field.eval(&x, th, level) - field.eval(&x, tl, level)) / (th - tl);
        jac.set_column(3, &ft);

        let svd = SVD::new(jac, true, true);
        let eps = 1e-10 * svd.singular_values.max();
        let Ok(step) = svd.solve(&(-f), eps) else { break };
        let mut scale = 1.0;
        let ynorm = (step[0] * step[0] + step[1] * step[1] + step[2] * step[2]).sqrt();
        if ynorm > 0.5 {
            scale = 0.5 / ynorm;
        }
        let mut accepted = false;
        for _ in 0..14 {
            let xn = stereo(&x, &e, [scale * step[0], scale * step[1], scale * step[2]]).normalize();
            let tn = (t + scale * step[3]).clamp(0.0, 1.0);
            let fnew = field.eval(&xn, tn, level);
            if fnew.norm() < res {
                x = xn;
                t = tn;
                f = fnew;
                res = f.norm();
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    NewtonOutcome { x, t, residual: res, iterations }
}

fn candidate(field: &Field, x: Vector4<f64>, t: f64, residual: f64, iterations: usize, tol: f64) -> ZeroCandidate {
    let sp = SphereParam::from_r4([x[0], x[1], x[2], x[3]], t);
    let params = sp.params();
    let refined = field.eval(&x, t, QuadLevel::FINE.refined()).norm();
    let w = params.w.value();
    ZeroCandidate {
        params: sp,
        w,
        p: params.cap.p.value(),
        residual,
        residual_refined: refined,
        iterations,
        converged: residual < tol && refined < tol && w.norm() < 1.0,
    }
}

/// Coarse product-grid scan followed by Newton from diverse low-residual starts.
pub fn find_zero(ctx: &TrialContext, cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.scan_radii < 2 || cfg.scan_angles == 0 || cfg.p_angles == 0 || cfg.t_values.is_empty() || cfg.starts == 0 {
        return Err(Error::InvalidInput("empty search grid".into()));
    }
    let field = Field { ctx, scale: ctx.residual_scale() };
    let mut caps: Vec<(f64, f64)> = Vec::new();
    for &t in &cfg.t_values {
        if t >= 1.0 {
            caps.push((0.0, 1.0));
        } else {
            for j in 0..cfg.p_angles {
                caps.push((2.0 * PI * j as f64 / cfg.p_angles as f64, t));
            }
        }
    }
    let mut ws: Vec<C64> = vec![C64::new(0.0, 0.0)];
    for i in 1..cfg.scan_radii {
        let r = cfg.max_w_radius * i as f64 / (cfg.scan_radii - 1) as f64;
        for j in 0..cfg.scan_angles {
            ws.push(C64::from_polar(r, 2.0 * PI * j as f64 / cfg.scan_angles as f64));
        }
    }

    let mut scan: Vec<(f64, Vector4<f64>, f64)> = caps
        .par_iter()
        .flat_map_iter(|&(theta, t)| {
            let p = ReflectionAxis::from_angle(theta);
            let q = CapQuadrature::new(ctx, CapParams { p, t }, QuadLevel::COARSE);
            ws.iter()
                .map(|&w| {
                    let (v1, v2) = q.field(ctx, w);
                    let res = (v1.norm_sqr() + v2.norm_sqr()).sqrt() / field.scale;
                    let (a, b) = super::psi(MoebiusParam::new(w).expect("scan radius < 1"), p);
                    (res, Vector4::new(a.re, a.im, b.re, b.im), t)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    scan.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut starts: Vec<(Vector4<f64>, f64)> = Vec::new();
    for (_, x, t) in &scan {
        if starts.iter().all(|(y, s)| (x - y).norm() + (t - s).abs() > 0.25) {
            starts.push((*x, *t));
            if starts.len() == cfg.starts {
                break;
            }
        }
    }

    let mut results: Vec<ZeroCandidate> = starts
        .par_iter()
        .map(|&(x0, t0)| {
            let a = newton(&field, x0, t0, QuadLevel::MEDIUM, cfg, 1e-3 * cfg.tolerance);
            let b = newton(&field, a.x, a.t, QuadLevel::FINE, cfg, 1e-2 * cfg.tolerance);
            candidate(&field, b.x, b.t, b.residual, a.iterations + b.iterations, cfg.tolerance)
        })
        .collect();

    let mut zeros: Vec<ZeroCandidate> = Vec::new();
    for c in results.iter().filter(|c| c.converged) {
        let x = Vector4::from(c.params.as_r4());
        let distinct = zeros.iter().all(|z| (Vector4::from(z.params.as_r4()) - x).norm() + (z.params.t - c.params.t).abs() > 1e-3);
        if distinct {
            zeros.push(c.clone());
        }
    }
    results.sort_by(|a, b| (!a.converged).cmp(&!b.converged).then(a.residual.total_cmp(&b.residual)));
    let best = results.into_iter().next().ok_or_else(|| Error::InvalidInput("no search starts".into()))?;
    Ok(SearchReport { best, zeros, starts_tried: starts.len() })
}
