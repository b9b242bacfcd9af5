use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::periodic_trapezoid;

const PERIMETER_NODES: usize = 512;

/// A simply connected domain `Ω = Φ(D)` with
/// `Φ(z) = s (z + c_2 z^2 + ... + c_K z^K)`.
///
/// `coeffs[0]` is `c_2`. The scale `s` is 1 unless the domain was built by
/// [`DomainSpec::scaled`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub coeffs: Vec<C64>,
    pub scale: f64,
    pub area: f64,
    pub perimeter: f64,
    pub univalence_margin: f64,
}

pub fn build_domain(coeffs: &[C64]) -> Result<DomainSpec> {
    DomainSpec::new(coeffs.to_vec(), 1.0)
}

impl DomainSpec {
    pub fn new(coeffs: Vec<C64>, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidInput(format!("domain scale {scale} must be positive")));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidInput("non-finite map coefficient".into()));
        }
        let margin = 1.0 - coeffs.iter().enumerate().map(|(i, c)| (i + 2) as f64 * c.norm()).sum::<f64>();
        if margin <= 0.0 {
            return Err(Error::NotUnivalent { margin });
        }
        let parseval = 1.0 + coeffs.iter().enumerate().map(|(i, c)| (i + 2) as f64 * c.norm_sqr()).sum::<f64>();
        let mut domain = Self {
            coeffs,
            scale,
            area: std::f64::consts::PI * scale * scale * parseval,
            perimeter: 0.0,
            univalence_margin: margin,
        };
        domain.perimeter = domain.perimeter_with(PERIMETER_NODES);
        Ok(domain)
    }

    pub fn disk() -> Self {
        Self::new(Vec::new(), 1.0).expect("identity map is univalent")
    }

    /// The same shape dilated by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.coeffs.clone(), self.scale * s)
    }

    /// Highest power `K` in `Φ`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn phi(&self, z: C64) -> C64 {
        let tail = self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| (acc + c) * z);
        self.scale * z * (tail + 1.0)
    }

    pub fn phi_prime(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * z + (i + 2) as f64 * c;
        }
        self.scale * (acc * z + 1.0)
    }

    /// Area density `|Φ'(z)|^2`.
    #[inline]
    pub fn jacobian(&self, z: C64) -> f64 {
        self.phi_prime(z).norm_sqr()
    }

    /// `∫ |Φ'(e^{iθ})| dθ` by the periodic trapezoid rule with `n` nodes.
    pub fn perimeter_with(&self, n: usize) -> f64 {
        let (nodes, w) = periodic_trapezoid(n);
        nodes.iter().map(|&th| self.phi_prime(C64::from_polar(1.0, th)).norm()).sum::<f64>() * w
    }
}

/// On-disk domain and solver request: `{coeffs: [[re, im], ...], alpha, N, M}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRecord {
    #[serde(default)]
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    pub alpha: f64,
    #[serde(rename = "N", default = "default_radial")]
    pub radial_degree: usize,
    #[serde(rename = "M", default = "default_angular")]
    pub angular_order: usize,
}

fn default_radial() -> usize {
    24
}

fn default_angular() -> usize {
    8
}

impl DomainRecord {
    pub fn domain(&self) -> Result<DomainSpec> {
        build_domain(&self.coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect::<Vec<_>>())
    }
}
