use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::maps::{join, reflect_pair, split};
use super::triangulation::{boundary_orientation, norm4, Complex, TriangulatedSphere, Vec4};
use super::{paired_degree, DegreeResult, DEFAULT_TARGET_SEED, MAX_LEVEL};
use crate::complexgeo::reflect_raw;
use crate::error::{Error, Result};

/// Smallest admissible `|φ|` at boundary vertices.
pub const BOUNDARY_MIN_NORM: f64 = 1e-6;
pub const INNER_RADIUS: f64 = 0.5;

/// A continuous map on a closed region of `R^4`.
pub trait RegionMap: Sync {
    fn eval(&self, x: Vec4) -> Vec4;
}

impl<F: Fn(Vec4) -> Vec4 + Sync> RegionMap for F {
    fn eval(&self, x: Vec4) -> Vec4 {
        self(x)
    }
}

/// Subregions of the closed unit 4-ball. The half-annuli are the parts of
/// `{1/2 < |x| < 1}` with `b_2 = x_4` positive or negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Ball { radius: f64 },
    UpperHalfAnnulus,
    LowerHalfAnnulus,
}

impl Region {
    /// Oriented triangulation of the boundary, outward normal first.
    pub fn boundary(self, level: u32) -> Result<Complex> {
        let sphere = TriangulatedSphere::cached(level)?;
        match self {
            Region::Ball { radius } => {
                if !(radius > 0.0) {
                    return Err(Error::InvalidInput(format!("ball radius {radius} must be positive")));
                }
                let vertices = sphere.vertices().iter().map(|v| v.map(|c| radius * c)).collect();
                Ok(Complex { vertices, cells: sphere.cells().to_vec() })
            }
            Region::UpperHalfAnnulus => Ok(half_annulus(&sphere.complex, 1.0, 1 << level)),
            Region::LowerHalfAnnulus => Ok(half_annulus(&sphere.complex, -1.0, 1 << level)),
        }
    }
}

/// Boundary of `{1/2 <= |x| <= 1, σ x_4 >= 0}`: outer and inner hemispheres
/// plus the flat shell in `x_4 = 0`, cut into `layers` prisms radially.
fn half_annulus(sphere: &Complex, sigma: f64, layers: usize) -> Complex {
    let side = |v: &Vec4| sigma * v[3] >= 0.0;
    let mut out = Complex::default();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let radius = |layer: usize| INNER_RADIUS + (1.0 - INNER_RADIUS) * layer as f64 / layers as f64;
    let mut vertex = |out: &mut Complex, v: usize, layer: usize| -> usize {
        *index.entry((v, layer)).or_insert_with(|| {
            out.vertices.push(sphere.vertices[v].map(|c| radius(layer) * c));
            out.vertices.len() - 1
        })
    };
    let push = |out: &mut Complex, mut cell: [usize; 4], normal: Vec4| {
        if boundary_orientation(normal, cell.map(|i| out.vertices[i])) < 0.0 {
            cell.swap(0, 1);
        }
        out.cells.push(cell);
    };
    let mut equator_faces = Vec::new();
    for cell in &sphere.cells {
        if !cell.iter().all(|&i| side(&sphere.vertices[i])) {
            continue;
        }
        for (layer, flip) in [(layers, 1.0), (0, -1.0)] {
            let c = cell.map(|i| vertex(&mut out, i, layer));
            let centroid: Vec4 = std::array::from_fn(|k| c.iter().map(|&i| out.vertices[i][k]).sum::<f64>() * flip);
            push(&mut out, c, centroid);
        }
        let on_equator: Vec<usize> = cell.iter().copied().filter(|&i| sphere.vertices[i][3] == 0.0).collect();
        if on_equator.len() == 3 {
            let mut f = [on_equator[0], on_equator[1], on_equator[2]];
            f.sort_unstable();
            equator_faces.push(f);
        }
    }
    let normal = [0.0, 0.0, 0.0, -sigma];
    for [a, b, c] in equator_faces {
        for j in 0..layers {
            let (a0, b0, c0) = (vertex(&mut out, a, j), vertex(&mut out, b, j), vertex(&mut out, c, j));
            let (a1, b1, c1) = (vertex(&mut out, a, j + 1), vertex(&mut out, b, j + 1), vertex(&mut out, c, j + 1));
            for cell in [[a0, b0, c0, c1], [a0, b0, b1, c1], [a0, a1, b1, c1]] {
                push(&mut out, cell, normal);
            }
        }
    }
    out
}

/// `d(φ, region, 0)`: degree of `φ/|φ|` on the oriented boundary, computed at
/// `level` and `level + 1`.
pub fn region_degree(map: &dyn RegionMap, region: Region, level: u32) -> Result<DegreeResult> {
    if level >= MAX_LEVEL {
        return Err(Error::InvalidInput(format!("level {level} must be below {MAX_LEVEL}")));
    }
    let coarse = region.boundary(level)?;
    let fine = region.boundary(level + 1)?;
    let ic = boundary_images(map, &coarse)?;
    let ifn = boundary_images(map, &fine)?;
    paired_degree(level, [(&coarse, &ic), (&fine, &ifn)], DEFAULT_TARGET_SEED)
}

fn boundary_images(map: &dyn RegionMap, complex: &Complex) -> Result<Vec<Vec4>> {
    use rayon::prelude::*;
    let raw: Vec<Vec4> = complex.vertices.par_iter().map(|&x| map.eval(x)).collect();
    let min_norm = raw.iter().map(|&v| norm4(v)).fold(f64::INFINITY, f64::min);
    if !(min_norm > BOUNDARY_MIN_NORM) {
        return Err(Error::BoundaryZero { min_norm });
    }
    Ok(raw.into_iter().map(|v| v.map(|c| c / norm4(v))).collect())
}

/// Seeded reflection-symmetric map on the 4-ball with a zero `z_0` in the
/// upper half-annulus and its mirror image in the lower one.
///
/// For `b_2 >= 0`: `ψ(x) = x(1 + κ x_4) - x_4 (1/z_{04} + κ) z_0 + ε x_4 |x - z_0|^2 G(x)`
/// with `|G| <= 1`; for `b_2 < 0`: `(R_b × R_b) ψ(R_b a, -b)`.
#[derive(Debug, Clone)]
pub struct HalfAnnulusSynthetic {
    pub z0: Vec4,
    pub kappa: f64,
    pub eps: f64,
    g: [[f64; 5]; 4],
}

impl HalfAnnulusSynthetic {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // a small z_04 inflates 1/z_04, and the mirror branch then needs far
        // finer meshes near b = 0 than level 3
        let dir = loop {
            let x: Vec4 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let n = norm4(x);
            if n > 1e-2 && n <= 1.0 && x[3] / n > 0.5 {
                break x.map(|c| c / n);
            }
        };
        let r = rng.gen_range(0.65..0.85);
        let z0 = dir.map(|c| r * c);
        let kappa = rng.gen_range(0.5..2.0);
        let g = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        Self { z0, kappa, eps: 0.05, g }
    }

    fn upper(&self, x: Vec4) -> Vec4 {
        let z = self.z0;
        let c = 1.0 / z[3] + self.kappa;
        let d2: f64 = (0..4).map(|k| (x[k] - z[k]).powi(2)).sum();
        let terms = [1.0, x[0], x[1], x[2], x[3]];
        let g = self.g.map(|row| 0.5 * row.iter().zip(terms).map(|(a, t)| a * t).sum::<f64>().tanh());
        std::array::from_fn(|k| x[k] * (1.0 + self.kappa * x[3]) - x[3] * c * z[k] + self.eps * x[3] * d2 * g[k])
    }
}

impl RegionMap for HalfAnnulusSynthetic {
    fn eval(&self, x: Vec4) -> Vec4 {
        if x[3] >= 0.0 {
            self.upper(x)
        } else {
            let (a, b) = split(x);
            let p = b / b.norm();
            reflect_pair(b, self.upper(join(reflect_raw(p, a), -b)))
        }
    }
}

/// Largest violation of `φ(R_b a, -b) = (R_b × R_b) φ(a, b)` over seeded points
/// of the annulus `{1/2 <= |x| <= 1}`.
pub fn region_refsym_residual(map: &dyn RegionMap, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    while taken < samples {
        let x: Vec4 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = norm4(x);
        if !(INNER_RADIUS..=1.0).contains(&n) || x[2].hypot(x[3]) < 1e-6 {
            continue;
        }
        taken += 1;
        let (a, b) = split(x);
        let p: C64 = b / b.norm();
        let lhs = map.eval(join(reflect_raw(p, a), -b));
        let rhs = reflect_pair(b, map.eval(x));
        worst = worst.max((0..4).map(|k| (lhs[k] - rhs[k]).powi(2)).sum::<f64>().sqrt());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_is_closed(c: &Complex) -> bool {
        let mut faces: HashMap<[usize; 3], i32> = HashMap::new();
        for cell in &c.cells {
            for i in 0..4 {
                let mut f: Vec<usize> = (0..4).filter(|&j| j != i).map(|j| cell[j]).collect();
                let mut sign = if i % 2 == 0 { 1 } else { -1 };
                for a in 0..3 {
                    for b in 0..2 - a {
                        if f[b] > f[b + 1] {
                            f.swap(b, b + 1);
                            sign = -sign;
                        }
                    }
                }
                *faces.entry([f[0], f[1], f[2]]).or_default() += sign;
            }
        }
        faces.values().all(|&s| s == 0)
    }

    #[test]
    fn boundaries_are_closed_cycles() {
        for region in [Region::Ball { radius: 0.5 }, Region::UpperHalfAnnulus, Region::LowerHalfAnnulus] {
            for level in 0..3 {
                assert!(cycle_is_closed(&region.boundary(level).unwrap()), "{region:?} level {level}");
            }
        }
    }

    #[test]
    fn half_annulus_vertices_stay_in_the_region() {
        let c = Region::LowerHalfAnnulus.boundary(2).unwrap();
        for v in &c.vertices {
            let n = norm4(*v);
            assert!(v[3] <= 0.0 && n > INNER_RADIUS - 1e-12 && n < 1.0 + 1e-12);
        }
    }

    #[test]
    fn identity_and_shift_on_small_ball() {
        let ball = Region::Ball { radius: 0.5 };
        assert_eq!(region_degree(&|x: Vec4| x, ball, 3).unwrap().value, 1);
        let shifted = |x: Vec4| [x[0] + 2.0, x[1], x[2], x[3]];
        assert_eq!(region_degree(&shifted, ball, 3).unwrap().value, 0);
    }

    #[test]
    fn identity_has_no_zero_in_the_half_annuli() {
        for r in [Region::UpperHalfAnnulus, Region::LowerHalfAnnulus] {
            let d = region_degree(&|x: Vec4| x, r, 2).unwrap();
            assert_eq!(d.value, 0);
            assert!(d.confident());
        }
    }

    #[test]
    fn translated_identity_has_degree_one_around_its_zero() {
        // zero at (0, 0, 0, 0.75) lies in the upper half-annulus only
        let f = |x: Vec4| [x[0], x[1], x[2], x[3] - 0.75];
        assert_eq!(region_degree(&f, Region::UpperHalfAnnulus, 3).unwrap().value, 1);
        assert_eq!(region_degree(&f, Region::LowerHalfAnnulus, 3).unwrap().value, 0);
        // orientation reversed
        let g = |x: Vec4| [-x[0], x[1], x[2], x[3] - 0.75];
        assert_eq!(region_degree(&g, Region::UpperHalfAnnulus, 3).unwrap().value, -1);
    }

    #[test]
    fn boundary_zero_is_reported() {
        let f = |x: Vec4| [x[0] - 1.0, x[1], x[2], x[3]];
        assert!(matches!(region_degree(&f, Region::Ball { radius: 1.0 }, 1), Err(Error::BoundaryZero { .. })));
    }

    #[test]
    fn synthetic_half_annulus_maps() {
        for seed in 0..3 {
            let m = HalfAnnulusSynthetic::new(seed);
            assert!(region_refsym_residual(&m, 400, seed) < 1e-12);
            let z = m.z0;
            assert!(norm4(m.eval(z)) < 1e-14);
            let up = region_degree(&m, Region::UpperHalfAnnulus, 3).unwrap();
            let down = region_degree(&m, Region::LowerHalfAnnulus, 3).unwrap();
            assert!(up.confident() && down.confident());
            assert_eq!(up.value, 1, "seed {seed}");
            assert_eq!(up.value + down.value, 0, "seed {seed}");
        }
    }
}
