//! Brouwer degrees of maps `S^3 -> S^3` and of maps on regions of the 4-ball,
//! by signed preimage counting at a seeded regular value.

mod certificate;
mod counting;
mod maps;
mod region;
mod triangulation;

pub use certificate::{degree_certificate, field_certificate, Certificate, ManufacturedField, SphereField, TrialSphereField};
pub use counting::{BARY_TOL, FLAT_DET, MAX_REDRAWS};
pub use maps::{
    refsym_residual, verify_refsym_degree, Antipodal, MAX_AMPLITUDE, REFSYM_TOL, Blend, ConstantMap, CoordinateFlips, Identity, MapFactory, MapOptions, MapRegistry, Reflection, RefsymSynthetic,
    SphereMap,
};
pub use region::{region_degree, region_refsym_residual, HalfAnnulusSynthetic, Region, RegionMap, BOUNDARY_MIN_NORM, INNER_RADIUS};
pub use triangulation::{Complex, TriangulatedSphere, MAX_LEVEL};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use counting::{count_preimages, TargetSequence};
use triangulation::{normalize4, Vec4};

/// Seed of the regular-value sequence used when none is given.
pub const DEFAULT_TARGET_SEED: u64 = 0x5eed_0003;

/// Degree computed at `level` and re-checked at `level + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub value: i64,
    pub value_next_level: i64,
    pub level: u32,
    pub regular_value: [f64; 4],
    pub preimage_count: usize,
    /// Smallest `|det|` of a unit-column image cell containing the target.
    pub min_jacobian_margin: Option<f64>,
    /// 2 when both levels agree, else 1.
    pub levels_agreeing: u32,
    pub redraws: usize,
}

impl DegreeResult {
    pub fn confident(&self) -> bool {
        self.levels_agreeing >= 2
    }
}

/// Degree of `map`, computed at `level` and `level + 1`.
pub fn sphere_degree(map: &dyn SphereMap, level: u32) -> Result<DegreeResult> {
    sphere_degree_seeded(map, level, DEFAULT_TARGET_SEED)
}

pub fn sphere_degree_seeded(map: &dyn SphereMap, level: u32, seed: u64) -> Result<DegreeResult> {
    if level >= MAX_LEVEL {
        return Err(Error::InvalidInput(format!("level {level} must be below {MAX_LEVEL}")));
    }
    let coarse = TriangulatedSphere::cached(level)?;
    let fine = TriangulatedSphere::cached(level + 1)?;
    // refinement appends vertices, so the coarse images are a prefix of the fine ones
    let ifn = images_on(&fine.complex, |x| map.eval(x));
    let ic = ifn[..coarse.vertices().len()].to_vec();
    paired_degree(level, [(&coarse.complex, &ic), (&fine.complex, &ifn)], seed)
}

pub(crate) fn images_on(complex: &Complex, f: impl Fn(Vec4) -> Vec4 + Sync) -> Vec<Vec4> {
    use rayon::prelude::*;
    complex.vertices.par_iter().map(|&x| normalize4(f(x))).collect()
}

/// Counts on two nested discretizations with a shared target.
pub(crate) fn paired_degree(level: u32, pair: [(&Complex, &Vec<Vec4>); 2], seed: u64) -> Result<DegreeResult> {
    let mut targets = TargetSequence::new(seed);
    for redraws in 0..MAX_REDRAWS {
        let y = targets.next_target();
        let a = count_preimages(pair[0].0, pair[0].1, y);
        if a.ambiguous {
            continue;
        }
        let b = count_preimages(pair[1].0, pair[1].1, y);
        if b.ambiguous {
            continue;
        }
        return Ok(DegreeResult {
            value: a.value,
            value_next_level: b.value,
            level,
            regular_value: y,
            preimage_count: a.preimages,
            min_jacobian_margin: a.min_det,
            levels_agreeing: if a.value == b.value { 2 } else { 1 },
            redraws,
        });
    }
    Err(Error::NonRegularValue { attempts: MAX_REDRAWS })
}
