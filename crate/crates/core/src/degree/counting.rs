use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::triangulation::{normalize4, Complex, Vec4};

/// Barycentric coordinates (normalized to unit 1-norm) closer to zero than
/// this make the target non-regular for the cell.
pub const BARY_TOL: f64 = 1e-8;
/// Image cells with smaller `|det|` (unit columns) are treated as flat. Their
/// cones have negligible solid angle, and for them the barycentric solve
/// only returns the near-null direction, so the regularity test is void.
pub const FLAT_DET: f64 = 1e-9;
/// Target draws before giving up.
pub const MAX_REDRAWS: usize = 16;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Count {
    pub value: i64,
    pub preimages: usize,
    pub min_det: Option<f64>,
    pub ambiguous: bool,
}

impl Count {
    fn merge(self, other: Count) -> Count {
        let min_det = match (self.min_det, other.min_det) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Count {
            value: self.value + other.value,
            preimages: self.preimages + other.preimages,
            min_det,
            ambiguous: self.ambiguous || other.ambiguous,
        }
    }
}

/// Signed count of cells whose image cone contains `y`. `images` are unit
/// vectors indexed like `complex.vertices`.
pub(crate) fn count_preimages(complex: &Complex, images: &[Vec4], y: Vec4) -> Count {
    let target = Vector4::from(y);
    complex
        .cells
        .par_iter()
        .map(|cell| {
            let m = Matrix4::from_fn(|r, c| images[cell[c]][r]);
            let det = m.determinant();
            if det.abs() < FLAT_DET {
                return Count::default();
            }
            let Some(mu) = m.lu().solve(&target) else {
                return Count::default();
            };
            let scale: f64 = mu.iter().map(|v| v.abs()).sum();
            let least = mu.iter().fold(f64::INFINITY, |a, &v| a.min(v / scale));
            if least > BARY_TOL {
                Count { value: det.signum() as i64, preimages: 1, min_det: Some(det.abs()), ambiguous: false }
            } else if least > -BARY_TOL {
                Count { ambiguous: true, ..Count::default() }
            } else {
                Count::default()
            }
        })
        .reduce(Count::default, Count::merge)
}

/// Seeded sequence of uniformly distributed targets on `S^3`.
pub(crate) struct TargetSequence {
    rng: ChaCha8Rng,
}

impl TargetSequence {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_target(&mut self) -> Vec4 {
        loop {
            let x: Vec4 = std::array::from_fn(|_| self.rng.gen_range(-1.0..1.0));
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2 > 1e-4 && r2 <= 1.0 {
                return normalize4(x);
            }
        }
    }
}
