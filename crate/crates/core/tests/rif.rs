mod common;

use common::*;
use shiftlab::agler::{scalar_symbol, Branch};
use shiftlab::fixtures;
use shiftlab::poly::{BivarPoly, UnivarPoly};
use shiftlab::rif::{
    exceptional_set, make_rif, slice_blaschke, theta_from_symbol, BlaschkeProduct, Rif, EXCEPTIONAL_TOL,
};
use shiftlab::{c64, Error, C64};

fn one() -> C64 {
    c64(1.0, 0.0)
}

fn zero() -> C64 {
    c64(0.0, 0.0)
}

fn monomial_rif() -> Rif {
    make_rif(BivarPoly::one(), 1, 1, one()).unwrap()
}

fn proportional(a: &BivarPoly, b: &BivarPoly, tol: f64) -> bool {
    let (i, j) = (0..=a.deg1)
        .flat_map(|i| (0..=a.deg2).map(move |j| (i, j)))
        .max_by(|x, y| a.get(x.0, x.1).norm().total_cmp(&a.get(y.0, y.1).norm()))
        .unwrap();
    let k = b.get(i, j) / a.get(i, j);
    (&a.scale(k) - b).max_abs() <= tol * b.max_abs()
}

#[test]
fn valid_examples() {
    let theta = fixtures::corner_singular().unwrap();
    assert_eq!((theta.m, theta.n), (1, 1));
    let fx = fixtures::deg21_fixture().unwrap();
    assert_eq!((fx.rif.m, fx.rif.n), (2, 1));
}

#[test]
fn interior_zero_is_a_stability_error() {
    let p = BivarPoly::from_terms(&[(0, 0, c64(-0.5, 0.0)), (1, 0, one())]);
    assert!(matches!(make_rif(p, 1, 0, one()), Err(Error::Stability { .. })));
}

#[test]
fn non_unimodular_constant_is_rejected() {
    assert!(matches!(make_rif(BivarPoly::one(), 1, 1, c64(0.5, 0.0)), Err(Error::Argument(_))));
}

#[test]
fn self_reflective_denominator_is_toral() {
    // p = 1 - z1 z2 has p~ = -p
    let p = BivarPoly::from_terms(&[(0, 0, one()), (1, 1, -one())]);
    assert!(matches!(make_rif(p, 1, 1, one()), Err(Error::Atorality)));
}

#[test]
fn eval_examples() {
    let theta = fixtures::corner_singular().unwrap();
    assert!(theta.eval(zero(), zero()).unwrap().norm() < 1e-15);
    assert!(matches!(theta.eval(one(), one()), Err(Error::SingularPoint { .. })));
    let v = monomial_rif().eval(c64(0.5, 0.0), c64(0.5, 0.0)).unwrap();
    assert!((v - c64(0.25, 0.0)).norm() < 1e-15);
}

#[test]
fn unimodular_on_torus_and_contractive_inside() {
    let mut rng = rng(3);
    let cases = [
        fixtures::corner_singular().unwrap(),
        fixtures::quadratic_symbol().unwrap(),
        fixtures::deg21_fixture().unwrap().rif,
    ];
    for theta in &cases {
        for _ in 0..200 {
            let (t1, t2) = (circle_point(&mut rng), circle_point(&mut rng));
            if theta.slice_root_distance(t2) < 1e-3 {
                continue;
            }
            assert!((theta.eval(t1, t2).unwrap().norm() - 1.0).abs() < 1e-10);
        }
        for (z1, z2) in bidisk_points(4, 500, 0.999) {
            assert!(theta.eval(z1, z2).unwrap().norm() <= 1.0 + 1e-10);
        }
    }
}

#[test]
fn slice_blaschke_examples() {
    let fx = fixtures::deg21_fixture().unwrap().rif;
    let b = slice_blaschke(&fx, one()).unwrap();
    let h = 0.5f64.sqrt();
    let mut z: Vec<f64> = b.zeros.iter().map(|a| a.re).collect();
    z.sort_by(f64::total_cmp);
    assert!((z[0] + h).abs() < 1e-12 && (z[1] - h).abs() < 1e-12);
    assert!(b.zeros.iter().all(|a| a.im.abs() < 1e-12));
    let shift = make_rif(BivarPoly::one(), 1, 0, one()).unwrap();
    let b = slice_blaschke(&shift, c64(0.0, 1.0)).unwrap();
    assert_eq!(b.zeros.len(), 1);
    assert!(b.zeros[0].norm() < 1e-15);
}

#[test]
fn slice_blaschke_matches_direct_evaluation() {
    let mut rng = rng(8);
    let cases = [
        fixtures::corner_singular().unwrap(),
        fixtures::quadratic_symbol().unwrap(),
        fixtures::deg21_fixture().unwrap().rif,
    ];
    for theta in &cases {
        for _ in 0..10 {
            let tau = circle_point(&mut rng);
            if theta.slice_root_distance(tau) < 1e-4 {
                continue;
            }
            let b = slice_blaschke(theta, tau).unwrap();
            assert_eq!(b.degree(), theta.m);
            for _ in 0..20 {
                let z = disk_point(&mut rng, 0.99);
                assert!((b.eval(z) - theta.eval(z, tau).unwrap()).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn slice_at_exceptional_point_is_an_error() {
    let theta = fixtures::corner_singular().unwrap();
    assert!(matches!(slice_blaschke(&theta, one()), Err(Error::ExceptionalPoint(_))));
}

#[test]
fn exceptional_set_examples() {
    let e = exceptional_set(&fixtures::corner_singular().unwrap(), 512, EXCEPTIONAL_TOL);
    assert_eq!(e.points.len(), 1);
    assert!((e.points[0] - one()).norm() < 1e-6);
    assert!(exceptional_set(&fixtures::deg21_fixture().unwrap().rif, 512, EXCEPTIONAL_TOL).is_empty());
    assert!(exceptional_set(&monomial_rif(), 512, EXCEPTIONAL_TOL).is_empty());
}

#[test]
fn theta_from_symbol_examples() {
    let theta = theta_from_symbol(&UnivarPoly::one(), &UnivarPoly::from_real(&[2.0, -1.0])).unwrap();
    let corner = fixtures::corner_singular().unwrap();
    assert!(proportional(&theta.p, &corner.p, 1e-14));
    assert_eq!((theta.m, theta.n), (1, 1));

    let shift = theta_from_symbol(&UnivarPoly::zero(), &UnivarPoly::one()).unwrap();
    assert_eq!((shift.m, shift.n), (1, 0));
    assert!((shift.eval(c64(0.3, 0.1), c64(0.2, 0.0)).unwrap() - c64(0.3, 0.1)).norm() < 1e-15);

    let (c, r) = (c64(0.2, -0.1), 0.3);
    let theta = theta_from_symbol(&UnivarPoly::new(vec![c, c64(r, 0.0)]), &UnivarPoly::one()).unwrap();
    let expected = BivarPoly::from_terms(&[(0, 0, one()), (1, 0, -c), (1, 1, c64(-r, 0.0))]);
    assert!(proportional(&theta.p, &expected, 1e-14));
    let sym = scalar_symbol(&theta).unwrap();
    assert!(same_rational(
        &sym,
        &shiftlab::rational::RationalScalar::poly(UnivarPoly::new(vec![c.conj(), c64(r, 0.0)])),
        1e-14
    ));
}

#[test]
fn theta_from_symbol_errors() {
    let big = theta_from_symbol(&UnivarPoly::constant(c64(1.5, 0.0)), &UnivarPoly::one());
    assert!(matches!(big, Err(Error::NotContractive(_))));
    let blaschke = theta_from_symbol(&UnivarPoly::from_real(&[0.0, 1.0]), &UnivarPoly::one());
    assert!(matches!(blaschke, Err(Error::Atorality)));
    let not_reduced = theta_from_symbol(&UnivarPoly::from_real(&[-0.5, 1.0]), &UnivarPoly::from_real(&[-1.0, 2.0]));
    assert!(not_reduced.is_err());
}

#[test]
fn symbol_synthesis_round_trip() {
    let mut rng = rng(21);
    for _ in 0..10 {
        let fd = random_deg11(&mut rng, Branch::MinusPlus);
        let theta = &fd.rif;
        let sym = scalar_symbol(theta).unwrap().conj_coeffs();
        let back = theta_from_symbol(&sym.num, &sym.den).unwrap();
        let pts = bidisk_points(9, 50, 0.95);
        let ratio = back.eval(pts[0].0, pts[0].1).unwrap() / theta.eval(pts[0].0, pts[0].1).unwrap();
        assert!((ratio.norm() - 1.0).abs() < 1e-9);
        for &(z1, z2) in &pts {
            let d = back.eval(z1, z2).unwrap() - ratio * theta.eval(z1, z2).unwrap();
            assert!(d.norm() < 1e-9);
        }
    }
}

#[test]
fn blaschke_matching_fixes_the_constant() {
    let z = vec![c64(0.3, 0.2), c64(-0.5, 0.1)];
    let target = BlaschkeProduct::new(z.clone(), C64::from_polar(1.0, 0.7)).unwrap();
    let found = BlaschkeProduct::matching(z, c64(0.1, 0.0), target.eval(c64(0.1, 0.0))).unwrap();
    assert!((found.lambda - target.lambda).norm() < 1e-14);
    assert!(BlaschkeProduct::new(vec![c64(1.0, 0.0)], one()).is_err());
}
