use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::basis::ModalBasis;
use super::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::quadrature::{periodic_trapezoid, GaussRule};

const BOUNDARY_NODES: usize = 2048;
/// Radial degree reduction used for the self-convergence estimate.
pub const RADIAL_STEP: usize = 4;
/// Angular order reduction used for the self-convergence estimate.
pub const ANGULAR_STEP: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha: f64,
    pub radial_degree: usize,
    pub angular_order: usize,
    /// Radial Gauss nodes; defaults to `2N + M + K + 4`.
    pub n_r: Option<usize>,
    /// Angular trapezoid nodes; defaults to `4M + 4K + 1`.
    pub n_theta: Option<usize>,
}

impl SolverConfig {
    pub fn new(alpha: f64, radial_degree: usize, angular_order: usize) -> Self {
        Self { alpha, radial_degree, angular_order, n_r: None, n_theta: None }
    }

    fn resolved(&self, domain: &DomainSpec) -> Result<(usize, usize)> {
        let (n, m, k) = (self.radial_degree, self.angular_order, domain.degree());
        if n < 8 || m < 4 {
            return Err(Error::InvalidInput(format!("need N >= 8 and M >= 4, got N = {n}, M = {m}")));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidInput("alpha must be finite".into()));
        }
        let n_r = self.n_r.unwrap_or(2 * n + m + k + 4);
        let n_theta = self.n_theta.unwrap_or(4 * m + 4 * k + 1);
        if n_r < 2 * n || n_theta < 4 * m + 1 {
            return Err(Error::InvalidInput(format!(
                "quadrature too coarse: n_r = {n_r} (need >= {}), n_theta = {n_theta} (need >= {})",
                2 * n,
                4 * m + 1
            )));
        }
        Ok((n_r, n_theta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub alpha: f64,
    pub radial_degree: usize,
    pub angular_order: usize,
    /// `λ_1 <= λ_2 <= λ_3 <= λ_4`.
    pub lambdas: [f64; 4],
    /// Mass-orthonormal coefficient vectors of `f_1..f_4`.
    pub eigvecs: Vec<Vec<f64>>,
    /// `∫_Ω f_k dA` for `k = 1..4`.
    pub means: [f64; 4],
    pub rho: f64,
    pub orthonormality_residual: f64,
    pub convergence_estimate: f64,
    pub eigen_residual: f64,
}

impl SpectrumResult {
    pub fn basis(&self) -> ModalBasis {
        ModalBasis::new(self.radial_degree, self.angular_order)
    }

    pub fn f1(&self) -> &[f64] {
        &self.eigvecs[0]
    }

    pub fn f2(&self) -> &[f64] {
        &self.eigvecs[1]
    }
}

/// `f_★ = f_2 - ρ f_1`, the mean-zero combination.
pub fn fstar(result: &SpectrumResult) -> Vec<f64> {
    result.f2().iter().zip(result.f1()).map(|(a, b)| a - result.rho * b).collect()
}

/// Stiffness, boundary and mass matrices of one domain in the full basis.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub basis: ModalBasis,
    pub perimeter: f64,
    pub area: f64,
    stiffness: DMatrix<f64>,
    boundary: DMatrix<f64>,
    mass: DMatrix<f64>,
}

impl Assembly {
    pub fn new(domain: &DomainSpec, radial_degree: usize, angular_order: usize, n_r: usize, n_theta: usize) -> Self {
        let basis = ModalBasis::new(radial_degree, angular_order);
        let nn = radial_degree + 1;
        let nt = basis.n_trig();
        let dim = basis.len();
        let mut stiffness = DMatrix::zeros(dim, dim);
        let mut mass = DMatrix::zeros(dim, dim);

        let rule = GaussRule::new(n_r, 0.0, 1.0);
        let (thetas, wt) = periodic_trapezoid(n_theta);
        let trig_at: Vec<Vec<f64>> = thetas
            .iter()
            .map(|&th| {
                let mut t = vec![0.0; nt];
                basis.trig(C64::from_polar(1.0, th), &mut t);
                t
            })
            .collect();

        for (&r, &wr) in rule.nodes.iter().zip(&rule.weights) {
            let radial: Vec<_> = (0..=angular_order).map(|m| basis.radial(m, r)).collect();

            for m in 0..=angular_order {
                let rv = &radial[m];
                let mf = (m * m) as f64;
                let trigs: &[usize] = if m == 0 { &[0] } else { &[2 * m - 1, 2 * m] };
                for &a in trigs {
                    for i in 0..nn {
                        for j in 0..=i {
                            let v = wr
                                * (rv.deriv[i] * rv.deriv[j] * r
                                    + if m == 0 { 0.0 } else { mf * rv.value[i] * rv.value[j] / r });
                            stiffness[(a * nn + i, a * nn + j)] += v;
                        }
                    }
                }
            }

            // angular weight matrix W[a][b] = ∫ T_a T_b |Φ'(r e^{iθ})|^2 dθ
            let mut w = vec![0.0; nt * nt];
            for (th, t) in thetas.iter().zip(&trig_at) {
                let jac = domain.jacobian(C64::from_polar(r, *th)) * wt;
                for a in 0..nt {
                    let ta = t[a] * jac;
                    for b in 0..=a {
                        w[a * nt + b] += ta * t[b];
                    }
                }
            }
            for a in 0..nt {
                let ra = &radial[ModalBasis::order_of(a)].value;
                for b in 0..=a {
                    let rb = &radial[ModalBasis::order_of(b)].value;
                    let wab = w[a * nt + b] * wr * r;
                    for i in 0..nn {
                        let ri = ra[i] * wab;
                        for j in 0..nn {
                            mass[(a * nn + i, b * nn + j)] += ri * rb[j];
                        }
                    }
                }
            }
        }

        // boundary: R_{m,n}(1) = norm, so only angular integrals of |Φ'| remain
        let (bth, bw) = periodic_trapezoid(BOUNDARY_NODES);
        let mut bang = vec![0.0; nt * nt];
        let mut t = vec![0.0; nt];
        for &th in &bth {
            let e = C64::from_polar(1.0, th);
            basis.trig(e, &mut t);
            let s = domain.phi_prime(e).norm() * bw;
            for a in 0..nt {
                for b in 0..=a {
                    bang[a * nt + b] += t[a] * t[b] * s;
                }
            }
        }
        let mut boundary = DMatrix::zeros(dim, dim);
        let ends: Vec<Vec<f64>> = (0..=angular_order).map(|m| basis.radial(m, 1.0).value).collect();
        for a in 0..nt {
            let ea = &ends[ModalBasis::order_of(a)];
            for b in 0..=a {
                let eb = &ends[ModalBasis::order_of(b)];
                for i in 0..nn {
                    for j in 0..nn {
                        boundary[(a * nn + i, b * nn + j)] = bang[a * nt + b] * ea[i] * eb[j];
                    }
                }
            }
        }

        symmetrize_lower(&mut stiffness);
        symmetrize_lower(&mut mass);
        symmetrize_lower(&mut boundary);
        Self {
            basis,
            perimeter: domain.perimeter,
            area: domain.area,
            stiffness,
            boundary,
            mass,
        }
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    pub fn boundary(&self) -> &DMatrix<f64> {
        &self.boundary
    }

    /// Basis indices retained when truncating to `(n, m)`.
    fn indices(&self, n: usize, m: usize) -> Vec<usize> {
        let mut idx = Vec::new();
        for a in 0..(2 * m + 1) {
            for k in 0..=n {
                idx.push(self.basis.index(a, k));
            }
        }
        idx
    }

    /// Generalized eigenpairs on the sub-basis `(n, m)`, ascending.
    fn eigen(&self, alpha: f64, n: usize, m: usize) -> Result<(Vec<f64>, DMatrix<f64>, Vec<usize>)> {
        let idx = self.indices(n, m);
        let kappa = alpha / self.perimeter;
        let a = DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
            self.stiffness[(idx[i], idx[j])] + kappa * self.boundary[(idx[i], idx[j])]
        });
        let b = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.mass[(idx[i], idx[j])]);
        let chol = b.cholesky().ok_or(Error::MassNotPositive { radial_degree: n, angular_order: m })?;
        let l = chol.l();
        // C = L^{-1} A L^{-T}
        let x = l
            .solve_lower_triangular(&a)
            .ok_or_else(|| Error::Eigensolve(format!("singular Cholesky factor (N = {n}, M = {m})")))?;
        let c = l
            .solve_lower_triangular(&x.transpose())
            .ok_or_else(|| Error::Eigensolve(format!("singular Cholesky factor (N = {n}, M = {m})")))?;
        let c = 0.5 * (&c + c.transpose());
        let eig = SymmetricEigen::try_new(c, 1e-14, 0)
            .ok_or_else(|| Error::Eigensolve(format!("symmetric eigensolve did not converge (N = {n}, M = {m})")))?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let y = DMatrix::from_fn(idx.len(), 4.min(order.len()), |i, k| eig.eigenvectors[(i, order[k])]);
        let vecs = l
            .transpose()
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Eigensolve("back substitution failed".into()))?;
        Ok((values, vecs, idx))
    }

    /// Full spectrum data at Robin parameter `alpha` (boundary coefficient `alpha / L`).
    pub fn solve(&self, alpha: f64) -> Result<SpectrumResult> {
        let (n, m) = (self.basis.radial_degree, self.basis.angular_order);
        let (values, vecs, _) = self.eigen(alpha, n, m)?;
        if values.len() < 4 {
            return Err(Error::Eigensolve("basis has fewer than four functions".into()));
        }
        let lambdas = [values[0], values[1], values[2], values[3]];

        let mut eigvecs: Vec<DVector<f64>> = (0..4).map(|k| vecs.column(k).into_owned()).collect();
        // ∫_Ω f dA = √π (Mass c)_0 since the constant basis function is 1/√π
        let mean_row = self.mass.row(0).transpose() * std::f64::consts::PI.sqrt();
        let mean = |v: &DVector<f64>| mean_row.dot(v);
        if mean(&eigvecs[0]) < 0.0 {
            eigvecs[0].neg_mut();
        }
        for v in eigvecs.iter_mut().skip(1) {
            let lead = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
            if lead < 0.0 {
                v.neg_mut();
            }
        }
        let means = [mean(&eigvecs[0]), mean(&eigvecs[1]), mean(&eigvecs[2]), mean(&eigvecs[3])];
        let norm_f1 = eigvecs[0].dot(&(&self.mass * &eigvecs[0])).sqrt();
        if means[0].abs() < 1e-10 * self.area.sqrt() * norm_f1 {
            return Err(Error::DegenerateGroundState { mean: means[0] });
        }
        let rho = means[1] / means[0];

        let kappa = alpha / self.perimeter;
        let a = &self.stiffness + kappa * &self.boundary;
        let mut ortho = 0.0f64;
        let mut resid = 0.0f64;
        for i in 0..4 {
            let mv = &self.mass * &eigvecs[i];
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                ortho = ortho.max((eigvecs[j].dot(&mv) - target).abs());
            }
            let av = &a * &eigvecs[i];
            let r = (&av - lambdas[i] * &mv).norm() / av.norm().max(1.0);
            resid = resid.max(r);
        }

        let mut convergence = 0.0f64;
        for (nn, mm) in [(n.saturating_sub(RADIAL_STEP), m), (n, m.saturating_sub(ANGULAR_STEP))] {
            if nn == 0 || mm == 0 {
                continue;
            }
            let (coarse, _, _) = self.eigen(alpha, nn, mm)?;
            for k in 0..3 {
                convergence = convergence.max((coarse[k] - values[k]).abs());
            }
        }

        Ok(SpectrumResult {
            alpha,
            radial_degree: n,
            angular_order: m,
            lambdas,
            eigvecs: eigvecs.iter().map(|v| v.as_slice().to_vec()).collect(),
            means,
            rho,
            orthonormality_residual: ortho,
            convergence_estimate: convergence,
            eigen_residual: resid,
        })
    }
}

fn symmetrize_lower(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            m[(j, i)] = m[(i, j)];
        }
    }
}

/// Assembles and solves in one step.
pub fn solve_spectrum(domain: &DomainSpec, config: &SolverConfig) -> Result<SpectrumResult> {
    let (n_r, n_theta) = config.resolved(domain)?;
    Assembly::new(domain, config.radial_degree, config.angular_order, n_r, n_theta).solve(config.alpha)
}

/// Assembly for repeated solves on one domain with varying `alpha`.
pub fn assemble(domain: &DomainSpec, config: &SolverConfig) -> Result<Assembly> {
    let (n_r, n_theta) = config.resolved(domain)?;
    Ok(Assembly::new(domain, config.radial_degree, config.angular_order, n_r, n_theta))
}
