use std::f64::consts::PI;

use robin_core::diskspec::{disk_lambda2, disk_lambdas};
use robin_core::robinsolver::*;
use robin_core::trialfield::{find_zero, rayleigh, SearchConfig, TrialContext};
use robin_core::C64;

#[test]
fn disk_galerkin_matches_bessel_roots() {
    for beta in [-1.0, -0.3, 0.0, 0.7, 1.0] {
        // boundary coefficient alpha / L = beta on the unit disk
        let r = solve_spectrum(&DomainSpec::disk(), &SolverConfig::new(2.0 * PI * beta, 24, 8)).unwrap();
        let exact = disk_lambdas(beta).unwrap();
        for k in 0..4 {
            assert!((r.lambdas[k] - exact[k]).abs() < 1e-8 * exact[k].abs().max(1.0), "beta {beta}, k {k}: {} vs {}", r.lambdas[k], exact[k]);
        }
    }
}

#[test]
fn eigenvalues_scale_with_the_domain() {
    let d = build_domain(&[C64::new(0.1, 0.05)]).unwrap();
    let cfg = SolverConfig::new(3.0, 20, 6);
    let a = solve_spectrum(&d, &cfg).unwrap();
    let b = solve_spectrum(&d.scaled(2.0).unwrap(), &cfg).unwrap();
    for k in 0..4 {
        assert!((a.lambdas[k] - 4.0 * b.lambdas[k]).abs() < 1e-9 * a.lambdas[k].abs().max(1.0));
    }
}

#[test]
fn trial_zero_beats_the_bound_on_a_perturbed_disk() {
    let beta = 0.4;
    let d = build_domain(&[C64::new(0.0, 0.0), C64::new(0.2, 0.0)]).unwrap();
    let s = solve_spectrum(&d, &SolverConfig::new(4.0 * PI * beta, 24, 8)).unwrap();
    let ctx = TrialContext::new(&d, &s).unwrap();
    let report = find_zero(&ctx, &SearchConfig::default()).unwrap();
    assert!(report.best.converged);
    let r = rayleigh(report.best.params.params(), &ctx).unwrap().quotient;
    let bound = 2.0 * PI * disk_lambda2(beta).unwrap().lambda;
    assert!(r >= s.lambdas[2] - 1e-6);
    assert!(r * d.area < bound);
}
