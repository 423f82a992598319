use std::f64::consts::PI;

use proptest::prelude::*;

use cypol::algebra::Mat2;
use cypol::elements::{symmetry_check, tensor_transform, ElementKind, ElementMatrix2, DEFAULT_PHI_SAMPLES};
use cypol::hps::{coeff_from_point, hybrid_stokes, superselect, SpherePoint};
use cypol::modes::{check_rotation_law, g_operator, make_uab};
use cypol::pipeline::Element;
use cypol::render::ellipse_of;
use cypol::schmidt::{coeff_matrix, schmidt_of};
use cypol::{Coeff4, Sign, C64};

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn unit_coeff() -> impl Strategy<Value = Coeff4> {
    [complex(), complex(), complex(), complex()]
        .prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            Coeff4(v.map(|z| z / n))
        })
}

fn unit_pair() -> impl Strategy<Value = (C64, C64)> {
    (complex(), complex())
        .prop_filter("nonzero", |(a, b)| a.norm_sqr() + b.norm_sqr() > 1e-3)
        .prop_map(|(a, b)| {
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            (a / n, b / n)
        })
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn rotational(a: C64, b: C64, kind: ElementKind) -> ElementMatrix2 {
    ElementMatrix2::new(Mat2::new(a, b, -b, a), kind)
}

fn reflective(a: C64, b: C64, kind: ElementKind) -> ElementMatrix2 {
    ElementMatrix2::new(Mat2::new(a, b, b, -a), kind)
}

proptest! {
    #[test]
    fn stokes_of_pure_states_lie_on_the_sphere(f_r in complex(), f_a in complex(), s in sign()) {
        prop_assume!(f_r.norm_sqr() + f_a.norm_sqr() > 1e-6);
        let st = hybrid_stokes(f_r, f_a, s).unwrap();
        prop_assert!(st.purity_defect().abs() <= 1e-12 * st.s0 * st.s0);
    }

    #[test]
    fn rotations_compose(s in sign(), a in -PI..PI, b in -PI..PI) {
        let lhs = g_operator(s, a).then(&g_operator(s, b)).matrix;
        let rhs = g_operator(s, a + b).matrix;
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn sphere_modes_obey_their_rotation_law((a, b) in unit_pair(), s in sign()) {
        let c = make_uab(a, b, s).unwrap();
        let report = check_rotation_law(&c, s, &[0.3, 1.1, 2.9, -0.7]).unwrap();
        prop_assert!(report.max_residual < 1e-12);
    }

    #[test]
    fn schmidt_spectrum_is_bounded(c in unit_coeff()) {
        let r = schmidt_of(&c).unwrap();
        prop_assert!((r.lambda[0] + r.lambda[1] - 1.0).abs() < 1e-12);
        prop_assert!(r.lambda[0] >= r.lambda[1] && r.lambda[1] >= -1e-15);
        prop_assert!(r.k >= 1.0 - 1e-12 && r.k <= 2.0 + 1e-12);
        prop_assert!((r.reconstruct().0 - coeff_matrix(&c).0).norm() < 1e-10);
    }

    #[test]
    fn sphere_point_round_trips(theta in 0.01..(PI - 0.01), phi in 0.0..(2.0 * PI - 1e-6), s in sign()) {
        let p = SpherePoint::new(theta, phi, s).unwrap();
        let q = superselect(&coeff_from_point(&p)).component(s).point(s).unwrap();
        prop_assert!((q.theta - theta).abs() < 1e-9);
        let dphi = (q.phi - phi).rem_euclid(2.0 * PI);
        prop_assert!(dphi.min(2.0 * PI - dphi) < 1e-9);
    }

    #[test]
    fn superselection_weights_sum_to_one(c in unit_coeff()) {
        let sel = superselect(&c);
        prop_assert!((sel.plus.weight + sel.minus.weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotational_pairs_commute_with_rotations(a in complex(), b in complex(), p in complex(), q in complex()) {
        let t = tensor_transform(
            &rotational(a, b, ElementKind::Spatial),
            &rotational(p, q, ElementKind::Polarization),
        ).unwrap();
        let r = symmetry_check(&t, &DEFAULT_PHI_SAMPLES, 1e-9).unwrap();
        prop_assert!(r.kernel_residual_plus < 1e-10 && r.kernel_residual_minus < 1e-10);
    }

    #[test]
    fn reflective_pairs_annihilate_on_the_kernel(a in complex(), b in complex(), p in complex(), q in complex()) {
        let t = tensor_transform(
            &reflective(a, b, ElementKind::Spatial),
            &reflective(p, q, ElementKind::Polarization),
        ).unwrap();
        let r = symmetry_check(&t, &DEFAULT_PHI_SAMPLES, 1e-9).unwrap();
        prop_assert!(r.kernel_residual_plus < 1e-10 && r.kernel_residual_minus < 1e-10);
    }

    #[test]
    fn ellipses_stay_in_range(ex in complex(), ey in complex()) {
        prop_assume!(ex.norm_sqr() + ey.norm_sqr() > 1e-12);
        let (o, e) = ellipse_of(ex, ey);
        prop_assert!((0.0..PI).contains(&o));
        prop_assert!(e.abs() <= PI / 4.0 + 1e-12);
    }

    #[test]
    fn element_strings_round_trip(kind in 0usize..5, x in -10.0..10.0f64, y in -10.0..10.0f64, z in -1.0..1.0f64) {
        let e = match kind {
            0 => Element::Hwp(x),
            1 => Element::Qwp(x),
            2 => Element::SpatialRot(x),
            3 => Element::SpatialFlip(C64::new(x, 0.0), C64::new(y, 0.0)),
            _ => Element::SpatialFlip(C64::new(x, z), C64::new(y, -z)),
        };
        let back: Element = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
    }
}
