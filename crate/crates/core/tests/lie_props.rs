mod common;

use common::*;
use iffquant::lie::{
    build_conformal_algebra, build_conformal_algebra_with, build_projective_algebra,
    verify_structure, AlgebraKind, BuildOptions, GradedAlgebra,
};
use iffquant::linalg::{vec_add, vec_scale};
use iffquant::Error;
use proptest::prelude::*;

fn algebra(i: usize) -> GradedAlgebra {
    match i {
        0 => build_conformal_algebra(1, 2),
        1 => build_conformal_algebra(2, 1),
        2 => build_conformal_algebra(2, 2),
        3 => build_projective_algebra(2),
        _ => build_projective_algebra(3),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bracket_is_a_graded_lie_bracket(i in 0usize..5, seed in 0u64..10_000) {
        let g = algebra(i);
        let mut r = rng(seed);
        let x = random_vector(&mut r, g.dim(), 0.5);
        let y = random_vector(&mut r, g.dim(), 0.5);
        let z = random_vector(&mut r, g.dim(), 0.5);
        let c = random_scalar(&mut r);
        let br = |a: &[_], b: &[_]| g.bracket(a, b).unwrap();
        prop_assert_eq!(br(&x, &y), vec_scale(&br(&y, &x), &iffquant::scalar::int(-1)));
        prop_assert_eq!(br(&vec_add(&x, &vec_scale(&z, &c)), &y), vec_add(&br(&x, &y), &vec_scale(&br(&z, &y), &c)));
        let jac = vec_add(&vec_add(&br(&x, &br(&y, &z)), &br(&y, &br(&z, &x))), &br(&z, &br(&x, &y)));
        prop_assert!(jac.iter().all(|v| *v == iffquant::scalar::zero()));
        prop_assert_eq!(g.killing_form(&br(&x, &y), &z).unwrap(), g.killing_form(&x, &br(&y, &z)).unwrap());
        for a in [-1i8, 0, 1] {
            for b in [-1i8, 0, 1] {
                let p = br(&g.component(&x, a), &g.component(&y, b));
                prop_assert!((a + b).abs() > 1 && p.iter().all(|v| *v == iffquant::scalar::zero()) || g.is_in_grade(&p, a + b));
            }
        }
    }
}

#[test]
fn dimensions_and_reports() {
    for (i, (dim, d)) in [(10, 3), (10, 3), (15, 4), (8, 2), (15, 3)]
        .into_iter()
        .enumerate()
    {
        let g = algebra(i);
        assert_eq!((g.dim(), g.d()), (dim, d));
        assert_eq!(g.g0_dim(), 1 + g.h0_dim());
        let rep = verify_structure(&g);
        assert!(
            rep.all_passed(),
            "{:?}",
            rep.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
    }
}

#[test]
fn json_round_trip_is_exact() {
    for i in 0..5 {
        let g = algebra(i);
        let s = g.to_json();
        let back = GradedAlgebra::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
        assert_eq!(back.labels(), g.labels());
        assert!(verify_structure(&back).all_passed());
    }
}

#[test]
fn kind_strings_round_trip() {
    for s in ["conformal(1,2)", "conformal(3,1)", "projective(2)"] {
        let k: AlgebraKind = s.parse().unwrap();
        assert_eq!(k.to_string(), s);
    }
    assert!("conformal(0,0)"
        .parse::<AlgebraKind>()
        .and_then(|k| k.build())
        .is_err());
    assert!("affine(2)".parse::<AlgebraKind>().is_err());
}

#[test]
fn degenerate_inputs_are_rejected() {
    assert!(matches!(
        build_conformal_algebra(0, 0),
        Err(Error::DegenerateDimension(_))
    ));
    assert!(matches!(
        build_projective_algebra(0),
        Err(Error::DegenerateDimension(_))
    ));
}

#[test]
fn permuted_h0_basis_still_verifies() {
    let g = build_conformal_algebra_with(
        2,
        2,
        &BuildOptions {
            h0_order: Some(vec![5, 3, 1, 0, 2, 4]),
        },
    )
    .unwrap();
    assert!(verify_structure(&g).all_passed());
}
