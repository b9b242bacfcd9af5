use std::f64::consts::PI;

use proptest::prelude::*;
use robin_core::complexgeo::*;
use robin_core::robinsolver::build_domain;
use robin_core::C64;

fn disk_point(max_r: f64) -> impl Strategy<Value = C64> {
    (0.0..1.0f64, 0.0..2.0 * PI).prop_map(move |(s, th)| C64::from_polar(max_r * s.sqrt(), th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn moebius_inverse_undoes_moebius(w in disk_point(0.95), z in disk_point(1.0)) {
        let m = MoebiusParam::new(w).unwrap();
        let back = moebius_apply(moebius_inverse(m).unwrap(), moebius_apply(m, z).unwrap()).unwrap();
        prop_assert!((back - z).norm() < 1e-12);
    }

    #[test]
    fn moebius_preserves_the_disk(w in disk_point(0.95), z in disk_point(0.999)) {
        let m = MoebiusParam::new(w).unwrap();
        prop_assert!(moebius_apply(m, z).unwrap().norm() < 1.0 + 1e-14);
    }

    #[test]
    fn fold_lands_in_its_cap(theta in 0.0..2.0 * PI, t in 0.0..0.95f64, z in disk_point(1.0)) {
        let cap = CapParams::new(ReflectionAxis::from_angle(theta), t).unwrap();
        let f = fold(cap, z).unwrap();
        prop_assert!(cap_contains(cap, f));
        prop_assert!((fold(cap, f).unwrap() - f).norm() < 1e-12);
    }

    #[test]
    fn reflection_is_an_isometric_involution(theta in 0.0..2.0 * PI, z in disk_point(1.0)) {
        let axis = ReflectionAxis::from_angle(theta);
        let r = reflect(axis, z);
        prop_assert!((r.norm() - z.norm()).abs() < 1e-15);
        prop_assert!((reflect(axis, r) - z).norm() < 1e-15);
    }

    #[test]
    fn domain_area_follows_parseval(c2 in disk_point(0.2), c3 in disk_point(0.15)) {
        let d = build_domain(&[c2, c3]).unwrap();
        let expected = PI * (1.0 + 2.0 * c2.norm_sqr() + 3.0 * c3.norm_sqr());
        prop_assert!((d.area - expected).abs() < 1e-12);
        // isoperimetric inequality
        prop_assert!(d.perimeter * d.perimeter >= 4.0 * PI * d.area * (1.0 - 1e-12));
    }
}
