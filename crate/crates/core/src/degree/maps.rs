use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::triangulation::{normalize4, Vec4};
use super::{sphere_degree_seeded, DegreeResult, DEFAULT_TARGET_SEED};
use crate::complexgeo::reflect_raw;
use crate::error::{Error, Result};

/// A continuous map `S^3 -> S^3`, written `(a, b) -> (c, d)` with `a, b, c, d`
/// complex.
pub trait SphereMap: Send + Sync {
    fn name(&self) -> String;

    /// Value before renormalization; must not vanish on `S^3`.
    fn eval_raw(&self, x: Vec4) -> Vec4;

    fn eval(&self, x: Vec4) -> Vec4 {
        normalize4(self.eval_raw(x))
    }

    /// Whether `φ(R_b a, -b) = (R_b × R_b) φ(a, b)` and `φ(a, 0) = (a, 0)` hold.
    fn claims_refsym(&self) -> bool {
        false
    }
}

pub(crate) fn split(x: Vec4) -> (C64, C64) {
    (C64::new(x[0], x[1]), C64::new(x[2], x[3]))
}

pub(crate) fn join(a: C64, b: C64) -> Vec4 {
    [a.re, a.im, b.re, b.im]
}

/// `R_b × R_b` applied to `(c, d)`; `b` must be nonzero.
pub(crate) fn reflect_pair(b: C64, x: Vec4) -> Vec4 {
    let p = b / b.norm();
    let (c, d) = split(x);
    join(reflect_raw(p, c), reflect_raw(p, d))
}

pub struct Identity;

impl SphereMap for Identity {
    fn name(&self) -> String {
        "identity".into()
    }
    fn eval_raw(&self, x: Vec4) -> Vec4 {
        x
    }
    fn claims_refsym(&self) -> bool {
        true
    }
}

/// `(a, b) -> (1, 0)`.
pub struct ConstantMap;

impl SphereMap for ConstantMap {
    fn name(&self) -> String {
        "constant".into()
    }
    fn eval_raw(&self, _: Vec4) -> Vec4 {
        [1.0, 0.0, 0.0, 0.0]
    }
}

/// `(a, b) -> (conj a, b)`.
pub struct Reflection;

impl SphereMap for Reflection {
    fn name(&self) -> String {
        "reflection".into()
    }
    fn eval_raw(&self, x: Vec4) -> Vec4 {
        [x[0], -x[1], x[2], x[3]]
    }
}

pub struct Antipodal;

impl SphereMap for Antipodal {
    fn name(&self) -> String {
        "antipodal".into()
    }
    fn eval_raw(&self, x: Vec4) -> Vec4 {
        x.map(|v| -v)
    }
}

/// `inner` composed with `count` coordinate sign flips, alternating between
/// domain (even steps) and range (odd steps), cycling through the coordinates.
pub struct CoordinateFlips {
    pub inner: Box<dyn SphereMap>,
    pub count: usize,
}

impl CoordinateFlips {
    fn masks(&self) -> ([bool; 4], [bool; 4]) {
        let mut domain = [false; 4];
        let mut range = [false; 4];
        for j in 0..self.count {
            let m = if j % 2 == 0 { &mut domain } else { &mut range };
            m[j % 4] = !m[j % 4];
        }
        (domain, range)
    }
}

impl SphereMap for CoordinateFlips {
    fn name(&self) -> String {
        format!("{}+{}flips", self.inner.name(), self.count)
    }
    fn eval_raw(&self, x: Vec4) -> Vec4 {
        let (domain, range) = self.masks();
        let xin: Vec4 = std::array::from_fn(|k| if domain[k] { -x[k] } else { x[k] });
        let y = self.inner.eval(xin);
        std::array::from_fn(|k| if range[k] { -y[k] } else { y[k] })
    }
}

/// `normalize((1 - s) φ + s φ')`.
pub struct Blend {
    pub first: Box<dyn SphereMap>,
    pub second: Box<dyn SphereMap>,
    pub s: f64,
}

impl SphereMap for Blend {
    fn name(&self) -> String {
        format!("blend({},{},{})", self.first.name(), self.second.name(), self.s)
    }
    fn eval_raw(&self, x: Vec4) -> Vec4 {
        let (p, q) = (self.first.eval(x), self.second.eval(x));
        std::array::from_fn(|k| (1.0 - self.s) * p[k] + self.s * q[k])
    }
    fn claims_refsym(&self) -> bool {
        self.first.claims_refsym() && self.second.claims_refsym()
    }
}

const EQ_TERMS: usize = 7;
const G_TERMS: usize = 9;
/// Bound on `|P_eq| / |b|` plus the bound on `|P_g| / |b|`.
const PERTURBATION_BOUND: f64 = 3.1214;
/// Largest amplitude for which the map provably does not vanish.
pub const MAX_AMPLITUDE: f64 = 0.95;

/// Seeded smooth map with the reflection symmetry.
///
/// `φ = normalize(T + ε/c · (P_eq + P_g))`: `T` rotates `a` and `b` by angles
/// odd under `(a, b) -> (R_b a, -b)`; `P_eq` is built from reflection
/// invariants; `P_g` is an arbitrary bounded field on `b_2 >= 0`, damped by
/// `b_2` and mirrored onto `b_2 < 0`. Every piece vanishes at `b = 0` except
/// `T`, which is the identity there, and `|P| <= ε|b|`, so `φ` never vanishes.
#[derive(Debug, Clone)]
pub struct RefsymSynthetic {
    pub seed: u64,
    pub amplitude: f64,
    twist: [f64; 2],
    eq: [[f64; EQ_TERMS]; 4],
    g: [[f64; G_TERMS]; 4],
}

impl RefsymSynthetic {
    pub fn new(seed: u64, amplitude: f64) -> Result<Self> {
        if !(0.0..=MAX_AMPLITUDE).contains(&amplitude) {
            return Err(Error::InvalidInput(format!("amplitude {amplitude} outside [0, {MAX_AMPLITUDE}]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let twist = [rng.gen_range(-4.0 * PI..4.0 * PI), rng.gen_range(-4.0 * PI..4.0 * PI)];
        let eq = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.5..1.5)));
        let g = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
        Ok(Self { seed, amplitude, twist, eq, g })
    }

    fn invariant_factors(&self, a: C64, b: C64) -> [f64; 4] {
        let ab = a * b.conj();
        let (u, v, nb, na) = (ab.re, ab.im * ab.im, b.norm_sqr(), a.norm_sqr());
        let terms = [1.0, u, v, nb, na, u * u, u * nb];
        self.eq.map(|c| c.iter().zip(terms).map(|(c, t)| c * t).sum::<f64>().tanh())
    }

    fn free_field(&self, x: Vec4) -> Vec4 {
        let terms = [1.0, x[0], x[1], x[2], x[3], x[0] * x[2], x[1] * x[3], x[0] * x[3], x[1] * x[2]];
        self.g.map(|c| 0.5 * c.iter().zip(terms).map(|(c, t)| c * t).sum::<f64>().tanh())
    }

    fn damped_free_field(&self, a: C64, b: C64) -> Vec4 {
        if b.im >= 0.0 {
            self.free_field(join(a, b)).map(|v| b.im * v)
        } else {
            let p = b / b.norm();
            let mirrored = self.free_field(join(reflect_raw(p, a), -b));
            reflect_pair(b, mirrored).map(|v| -b.im * v)
        }
    }
}

impl SphereMap for RefsymSynthetic {
    fn name(&self) -> String {
        format!("refsym-synthetic(seed={},amplitude={})", self.seed, self.amplitude)
    }

    fn eval_raw(&self, x: Vec4) -> Vec4 {
        let (a, b) = split(x);
        let s = (a * b.conj()).im;
        let rot = |k: usize| C64::from_polar(1.0, self.amplitude * self.twist[k] * s);
        let base = join(rot(0) * a, rot(1) * b);
        let f = self.invariant_factors(a, b);
        let ib = C64::i() * b;
        let peq = join(f[0] * b + s * f[1] * ib, f[2] * b + s * f[3] * ib);
        let pg = self.damped_free_field(a, b);
        let c = self.amplitude / PERTURBATION_BOUND;
        std::array::from_fn(|k| base[k] + c * (peq[k] + pg[k]))
    }

    fn claims_refsym(&self) -> bool {
        true
    }
}

/// Largest violation of the reflection symmetry and of `φ(a, 0) = (a, 0)`
/// over `samples` seeded points of `S^3`.
pub fn refsym_residual(map: &dyn SphereMap, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = loop {
            let x: Vec4 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2 > 1e-4 && r2 <= 1.0 && x[2] * x[2] + x[3] * x[3] > 1e-8 {
                break normalize4(x);
            }
        };
        let (a, b) = split(x);
        let p = b / b.norm();
        let lhs = map.eval(join(reflect_raw(p, a), -b));
        let rhs = reflect_pair(b, map.eval(x));
        worst = worst.max(dist(lhs, rhs));
        let a0 = a / a.norm();
        let e = [a0.re, a0.im, 0.0, 0.0];
        worst = worst.max(dist(map.eval(e), e));
    }
    worst
}

fn dist(x: Vec4, y: Vec4) -> f64 {
    (0..4).map(|k| (x[k] - y[k]).powi(2)).sum::<f64>().sqrt()
}

/// Tolerance on [`refsym_residual`] for maps claiming the symmetry.
pub const REFSYM_TOL: f64 = 1e-10;

/// Degree of the seeded synthetic reflection-symmetric map.
pub fn verify_refsym_degree(seed: u64, level: u32, amplitude: f64) -> Result<DegreeResult> {
    let map = RefsymSynthetic::new(seed, amplitude)?;
    let residual = refsym_residual(&map, 256, seed ^ 0x9e37_79b9);
    if residual > REFSYM_TOL {
        return Err(Error::SymmetryViolated { residual });
    }
    sphere_degree_seeded(&map, level, DEFAULT_TARGET_SEED.wrapping_add(seed))
}

/// Parameters handed to registry factories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapOptions {
    pub seed: u64,
    pub amplitude: f64,
    pub flips: usize,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self { seed: 0, amplitude: 0.45, flips: 1 }
    }
}

pub type MapFactory = Box<dyn Fn(&MapOptions) -> Result<Box<dyn SphereMap>> + Send + Sync>;

/// Named constructors for sphere maps.
pub struct MapRegistry {
    entries: BTreeMap<String, MapFactory>,
}

impl MapRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register("identity", Box::new(|_| Ok(Box::new(Identity))));
        r.register("constant", Box::new(|_| Ok(Box::new(ConstantMap))));
        r.register("reflection", Box::new(|_| Ok(Box::new(Reflection))));
        r.register("antipodal", Box::new(|_| Ok(Box::new(Antipodal))));
        r.register("identity-flipped", Box::new(|o| Ok(Box::new(CoordinateFlips { inner: Box::new(Identity), count: o.flips }))));
        r.register("refsym-synthetic", Box::new(|o| Ok(Box::new(RefsymSynthetic::new(o.seed, o.amplitude)?))));
        r.register(
            "refsym-flipped",
            Box::new(|o| Ok(Box::new(CoordinateFlips { inner: Box::new(RefsymSynthetic::new(o.seed, o.amplitude)?), count: o.flips }))),
        );
        r
    }

    pub fn register(&mut self, name: &str, factory: MapFactory) {
        self.entries.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn build(&self, name: &str, options: &MapOptions) -> Result<Box<dyn SphereMap>> {
        let factory = self.entries.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        factory(options)
    }
}

#[cfg(test)]
mod tests {
    use super::super::sphere_degree;
    use super::*;

    #[test]
    fn basic_maps() {
        let cases: [(&dyn SphereMap, i64); 4] = [(&Identity, 1), (&ConstantMap, 0), (&Reflection, -1), (&Antipodal, 1)];
        for (map, expected) in cases {
            let d = sphere_degree(map, 3).unwrap();
            assert_eq!(d.value, expected, "{}", map.name());
            assert!(d.confident(), "{}", map.name());
        }
    }

    #[test]
    fn flips_multiply_by_minus_one() {
        for k in 1..=5 {
            let m = CoordinateFlips { inner: Box::new(Identity), count: k };
            let expected = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(sphere_degree(&m, 2).unwrap().value, expected, "k = {k}");
            let s = CoordinateFlips { inner: Box::new(RefsymSynthetic::new(7, 0.45).unwrap()), count: k };
            assert_eq!(sphere_degree(&s, 3).unwrap().value, expected, "synthetic, k = {k}");
        }
    }

    #[test]
    fn synthetic_map_is_symmetric_and_nonvanishing() {
        for seed in 0..5 {
            let m = RefsymSynthetic::new(seed, MAX_AMPLITUDE).unwrap();
            assert!(refsym_residual(&m, 500, seed) < REFSYM_TOL);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..500 {
                let x = normalize4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
                let n: f64 = m.eval_raw(x).iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(n > 1.0 - MAX_AMPLITUDE - 1e-12);
            }
        }
    }

    #[test]
    fn zero_amplitude_is_identity() {
        let m = RefsymSynthetic::new(3, 0.0).unwrap();
        let x = normalize4([0.3, -0.2, 0.5, 0.7]);
        assert!(dist(m.eval(x), x) < 1e-15);
    }

    #[test]
    fn symmetry_check_detects_violation() {
        assert!(refsym_residual(&Reflection, 50, 1) > 0.1);
        assert!(refsym_residual(&Identity, 50, 1) < 1e-14);
    }

    #[test]
    fn twist_is_large() {
        // the map is far from the identity, so its degree is not forced by a straight-line homotopy
        let worst = (0..40)
            .map(|seed| {
                let m = RefsymSynthetic::new(seed, MAX_AMPLITUDE).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..400).map(|_| normalize4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))).map(|x| dist(m.eval(x), x)).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        assert!(worst > 1.5, "{worst}");
    }

    #[test]
    fn registry_round_trip() {
        let r = MapRegistry::standard();
        assert!(r.names().contains(&"refsym-synthetic"));
        let m = r.build("antipodal", &MapOptions::default()).unwrap();
        assert_eq!(m.eval([1.0, 0.0, 0.0, 0.0]), [-1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(r.build("nope", &MapOptions::default()), Err(Error::UnknownName(_))));
        assert!(r.build("refsym-synthetic", &MapOptions { amplitude: 1.5, ..Default::default() }).is_err());
    }

    #[test]
    fn homotopy_invariance_along_blend() {
        for s in [0.0, 0.5, 1.0] {
            let m = Blend { first: Box::new(RefsymSynthetic::new(1, 0.2).unwrap()), second: Box::new(RefsymSynthetic::new(2, 0.45).unwrap()), s };
            let sphere = super::super::TriangulatedSphere::cached(4).unwrap();
            let least = sphere.vertices().iter().map(|&x| super::super::triangulation::norm4(m.eval_raw(x))).fold(f64::INFINITY, f64::min);
            assert!(least > 0.05, "blend nearly vanishes: {least}");
            assert_eq!(sphere_degree(&m, 3).unwrap().value, 1, "s = {s}");
        }
    }
}
