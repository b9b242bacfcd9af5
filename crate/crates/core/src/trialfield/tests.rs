use super::*;
use crate::complexgeo::{cap_map, fold};
use crate::quadrature::GaussRule;
use crate::robinsolver::{build_domain, solve_spectrum, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn context(coeffs: &[C64], alpha: f64) -> TrialContext {
    let d = build_domain(coeffs).unwrap();
    let s = solve_spectrum(&d, &SolverConfig::new(alpha, 14, 6)).unwrap();
    TrialContext::new(&d, &s).unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn psi_examples() {
    let (a, b) = psi(MoebiusParam::origin(), ReflectionAxis::new(C64::i()).unwrap());
    assert_eq!((a, b), (c(0.0, 0.0), C64::i()));
    let (a, b) = psi(MoebiusParam::new(c(0.6, 0.0)).unwrap(), ReflectionAxis::from_angle(0.0));
    assert!((a.re - 0.6 * 1.64f64.sqrt()).abs() < 1e-15 && (a.re - 0.768_375).abs() < 1e-6);
    assert!((b.re - 0.64).abs() < 1e-15);
    assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-15);
}

#[test]
fn psi_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let w = C64::from_polar(0.999 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
        let p = ReflectionAxis::from_angle(rng.gen_range(0.0..2.0 * PI));
        let (a, b) = psi(MoebiusParam::new(w).unwrap(), p);
        let (w2, p2) = psi_inverse(a, b).unwrap();
        assert!((w2.value() - w).norm() < 1e-13);
        assert!((p2.unwrap().value() - p.value()).norm() < 1e-13);
    }
    let (w, p) = psi_inverse(C64::from_polar(1.0, 0.4), c(0.0, 0.0)).unwrap();
    assert!(p.is_none() && (w.value() - C64::from_polar(1.0, 0.4)).norm() < 1e-15);
    assert!(psi_inverse(c(0.5, 0.0), c(0.0, 0.0)).is_err());
}

#[test]
fn trial_eval_examples() {
    let profile = RadialProfile::new(disk_lambda2(0.3).unwrap());
    let one = ReflectionAxis::from_angle(0.0);
    let full = TrialParams { w: MoebiusParam::origin(), cap: CapParams { p: one, t: 1.0 } };
    let z = c(0.3, -0.2);
    assert_eq!(trial_eval(full, &profile, z), profile.v(z));

    let half = TrialParams { w: MoebiusParam::origin(), cap: CapParams::half_disk(one) };
    let cap = CapParams::half_disk(one);
    let expect = profile.v(cap_map(cap, fold(cap, c(-0.5, 0.0)).unwrap()).unwrap());
    assert!((trial_eval(half, &profile, c(-0.5, 0.0)) - expect).norm() < 1e-15);

    let e = C64::from_polar(1.0, 1.2);
    let edge = TrialParams { w: MoebiusParam::new(e).unwrap(), cap: CapParams::new(one, 0.4).unwrap() };
    for zeta in [c(0.0, 0.0), c(0.5, 0.5), c(-0.9, 0.1)] {
        assert!((trial_eval(edge, &profile, zeta) - profile.g(1.0) * e).norm() < 1e-14);
    }
}

#[test]
fn quadrature_weights_integrate_density() {
    let ctx = context(&[c(0.15, 0.05), c(0.0, 0.0), c(0.05, 0.0)], 2.0);
    for t in [0.0, 0.3, 0.8, 0.99, 1.0] {
        let cap = CapParams { p: ReflectionAxis::from_angle(0.7), t };
        let q = CapQuadrature::new(&ctx, cap, QuadLevel::FINE);
        assert!((q.total_weight() - ctx.domain.area).abs() < 1e-10 * ctx.domain.area, "t {t}");
        let s1: f64 = q.w1.iter().sum();
        assert!((s1 - ctx.mean_f1).abs() < 1e-9 * ctx.mean_f1, "t {t}: {s1} {}", ctx.mean_f1);
        let s2: f64 = q.wstar.iter().sum();
        assert!(s2.abs() < 1e-9, "t {t}: {s2}");
    }
}

#[test]
fn quadrature_matches_brute_force_across_fold() {
    let ctx = context(&[], 0.0);
    let cap = CapParams::new(ReflectionAxis::from_angle(2.0), 0.45).unwrap();
    let q = CapQuadrature::new(&ctx, cap, QuadLevel::FINE);
    let smooth = |x: C64| x.re.exp() * (2.0 * x.im).cos() + x.norm_sqr();
    let fast: f64 = q.xi.iter().zip(&q.wmass).map(|(&x, w)| smooth(x) * w).sum();
    // midpoint polar grid; the integrand has a kink on the geodesic
    let f = |z: C64| {
        smooth(cap_map(cap, fold(cap, z).unwrap()).unwrap())
    };
    let rule = GaussRule::new(200, 0.0, 1.0);
    let n = 4000;
    let mut brute = 0.0;
    for (&r, &wr) in rule.nodes.iter().zip(&rule.weights) {
        for k in 0..n {
            let z = C64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / n as f64);
            brute += f(z) * r * wr * 2.0 * PI / n as f64;
        }
    }
    assert!((fast - brute).abs() < 1e-4, "{fast} {brute}");
}

#[test]
fn boundary_values_of_field() {
    let ctx = context(&[c(0.2, 0.0)], 1.5);
    for k in 0..4 {
        let e = C64::from_polar(1.0, 0.8 * k as f64);
        let params = TrialParams {
            w: MoebiusParam::new(e).unwrap(),
            cap: CapParams::new(ReflectionAxis::from_angle(k as f64), 0.2 * k as f64).unwrap(),
        };
        let v = vector_field(params, &ctx).unwrap();
        let expect = ctx.profile.g(1.0) * e * ctx.mean_f1;
        assert!((v.inner1 - expect).norm() < 1e-8 * expect.norm());
        assert!(v.inner2.norm() < 1e-8 * expect.norm());
    }
}

#[test]
fn full_cap_field_is_independent_of_p() {
    let ctx = context(&[c(0.0, 0.0), c(0.2, 0.0)], -3.0);
    let w = MoebiusParam::new(c(0.3, -0.1)).unwrap();
    let a = vector_field(TrialParams { w, cap: CapParams { p: ReflectionAxis::from_angle(0.3), t: 1.0 } }, &ctx).unwrap();
    let b = vector_field(TrialParams { w, cap: CapParams { p: ReflectionAxis::from_angle(2.9), t: 1.0 } }, &ctx).unwrap();
    assert!((a.inner1 - b.inner1).norm() + (a.inner2 - b.inner2).norm() < 1e-10 * a.norm());
}

#[test]
fn reflection_symmetry_at_half_disk_caps() {
    let ctx = context(&[c(0.12, 0.08), c(0.1, 0.0)], 4.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let sp = SphereParam::from_r4(x, 0.0);
        let rb = ReflectionAxis::from_nonzero(sp.b).unwrap();
        let mirrored = SphereParam { a: rb.reflect(sp.a), b: -sp.b, t: 0.0 };
        let lhs = sphere_field(&mirrored, &ctx, QuadLevel::FINE);
        let rhs = sphere_field(&sp, &ctx, QuadLevel::FINE);
        let diff = (lhs.inner1 - rb.reflect(rhs.inner1)).norm() + (lhs.inner2 - rb.reflect(rhs.inner2)).norm();
        assert!(diff < 1e-8 * ctx.residual_scale(), "{diff}");
    }
}

#[test]
fn rayleigh_of_exact_eigenfunction() {
    let d = build_domain(&[]).unwrap();
    for beta in [-0.5, 0.0, 0.7] {
        let s = solve_spectrum(&d, &SolverConfig::new(2.0 * PI * beta, 10, 4)).unwrap();
        let ctx = TrialContext::with_profile_beta(&d, &s, beta).unwrap();
        let params = TrialParams { w: MoebiusParam::origin(), cap: CapParams { p: ReflectionAxis::from_angle(0.0), t: 1.0 } };
        let r = rayleigh(params, &ctx).unwrap();
        let l2 = disk_lambda2(beta).unwrap().lambda;
        assert!((r.quotient - l2).abs() < 1e-8 * l2, "{beta}: {} {l2}", r.quotient);
    }
}

#[test]
fn folded_trial_doubles_energy() {
    let d = build_domain(&[]).unwrap();
    let s = solve_spectrum(&d, &SolverConfig::new(0.0, 10, 4)).unwrap();
    let ctx = TrialContext::new(&d, &s).unwrap();
    let params = TrialParams { w: MoebiusParam::origin(), cap: CapParams::half_disk(ReflectionAxis::from_angle(0.0)) };
    let r = rayleigh(params, &ctx).unwrap();
    assert_eq!(r.dirichlet, 2.0 * ctx.profile.dirichlet());
    assert!(r.quotient >= disk_lambda2(0.0).unwrap().lambda);
    // |u| = g(1) on the whole circle
    assert!((r.boundary_term - ctx.profile.g(1.0).powi(2) * 2.0 * PI).abs() < 1e-10);
}
