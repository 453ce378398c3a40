mod common;

use common::*;
use shiftlab::agler::{
    agler_residual, decompose, decompose_deg10, decompose_deg11, product_basis, scalar_symbol, Branch, Deg11Data,
    FactorDecomposition,
};
use shiftlab::fixtures;
use shiftlab::poly::BivarPoly;
use shiftlab::rif::{exceptional_set, make_rif, Rif, EXCEPTIONAL_TOL};
use shiftlab::{c64, Error, C64};

fn one() -> C64 {
    c64(1.0, 0.0)
}

fn zero() -> C64 {
    c64(0.0, 0.0)
}

fn poly_close(a: &BivarPoly, b: &BivarPoly, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

/// Largest defect of `(theta(z) - theta(0, z2)) / z1 = sum_j g2_j(z2) f_j(z)`.
fn expansion_defect(fd: &FactorDecomposition) -> f64 {
    bidisk_points(31, 20, 0.9)
        .into_iter()
        .map(|(z1, z2)| {
            let theta = &fd.rif;
            let lhs = (theta.eval(z1, z2).unwrap() - theta.eval(zero(), z2).unwrap()) / z1;
            let rhs: C64 = fd.g2.iter().zip(&fd.basis2).map(|(g, b)| g.eval(z2) * b.eval(z1, z2)).sum();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

fn check_suite(factors: &[FactorDecomposition]) {
    let pts = bidisk_points(77, 1000, 1.0);
    let res = agler_residual(factors, &pts).unwrap();
    assert!(res < 1e-9, "Agler residual {res}");
    let gram = gram_defect(factors);
    assert!(gram < 1e-6, "Gram defect {gram}");
}

#[test]
fn deg10_examples() {
    let fd = decompose_deg10(zero(), one()).unwrap();
    assert!(poly_close(&fd.basis2[0].numerator, &BivarPoly::one(), 0.0));
    assert!(fd.basis1.is_empty());
    assert!(fd.symbol1.entries[0][0].is_zero());
    assert!((fd.g2[0].eval(c64(0.3, 0.0)) - one()).norm() < 1e-15);

    let fd = decompose_deg10(c64(0.5, 0.0), one()).unwrap();
    let s = 3f64.sqrt() / 2.0;
    assert!((fd.basis2[0].eval(c64(0.2, 0.1), zero()) - c64(s, 0.0) / (one() - c64(0.1, 0.05))).norm() < 1e-15);
    assert!((fd.symbol1.eval(one())[(0, 0)] - c64(0.5, 0.0)).norm() < 1e-15);
    assert!(expansion_defect(&fd) < 1e-12);
    assert!(matches!(decompose_deg10(c64(1.0, 0.0), one()), Err(Error::Argument(_))));
}

#[test]
fn deg11_corner_data() {
    let (d, fd) = decompose_deg11(c64(2.0, 0.0), -one(), -one(), zero(), one(), Branch::MinusPlus).unwrap();
    assert!((d.a2 - 4.0).abs() < 1e-14);
    assert!((d.gamma2 - c64(-2.0, 0.0)).norm() < 1e-14);
    assert!((d.zeta2 + one()).norm() < 1e-14);
    assert!(d.b.abs() < 1e-12);
    let r2 = c64(2f64.sqrt(), 0.0);
    let expected = BivarPoly::from_terms(&[(0, 0, r2), (0, 1, -r2)]);
    assert!(poly_close(&d.q_plus, &expected, 1e-12) && poly_close(&d.q_minus, &expected, 1e-12));
    assert!(same_rational(&fd.symbol1.entries[0][0], &rat(&[1.0], &[2.0, -1.0]), 1e-14));
}

#[test]
fn deg11_product_blaschke_data() {
    let t = 0.4;
    let (d, fd) = decompose_deg11(one(), zero(), zero(), c64(-t, 0.0), one(), Branch::MinusPlus).unwrap();
    let k = 1.0 - t * t;
    assert!(d.gamma1.norm() < 1e-15 && d.gamma2.norm() < 1e-15);
    assert!((d.zeta1 - one()).norm() < 1e-15 && (d.zeta2 - one()).norm() < 1e-15);
    assert!((d.a1 - k).abs() < 1e-15 && (d.a2 - k).abs() < 1e-15 && (d.b - k).abs() < 1e-12);
    assert!(poly_close(&d.q_plus, &BivarPoly::constant(c64(k.sqrt(), 0.0)), 1e-12));
    assert!(poly_close(&d.q_minus, &BivarPoly::monomial(0, 1, c64(k.sqrt(), 0.0)), 1e-12));
    assert!(same_rational(&fd.symbol1.entries[0][0], &rat(&[0.0, t], &[1.0]), 1e-14));
}

#[test]
fn deg11_monomial_branches() {
    let (d, plus_minus) = decompose_deg11(one(), zero(), zero(), zero(), one(), Branch::PlusMinus).unwrap();
    assert!((d.b - 1.0).abs() < 1e-15);
    assert!(poly_close(&d.q_plus, &BivarPoly::one(), 1e-15));
    assert!(poly_close(&d.q_minus, &BivarPoly::monomial(0, 1, one()), 1e-15));
    assert!(poly_close(&plus_minus.basis2[0].numerator, &BivarPoly::monomial(0, 1, one()), 1e-15));
    let (_, minus_plus) = decompose_deg11(one(), zero(), zero(), zero(), one(), Branch::MinusPlus).unwrap();
    assert!(poly_close(&minus_plus.basis2[0].numerator, &BivarPoly::one(), 1e-15));
}

#[test]
fn deg11_invariants_on_random_samples() {
    let mut rng = rng(42);
    for _ in 0..30 {
        let (b, c, d, e) = random_deg11_coeffs(&mut rng);
        let data = Deg11Data::new(b, c, d, e).unwrap();
        let b2 = data.b * data.b;
        assert!((data.a1 * data.a1 - 4.0 * data.gamma1.norm_sqr() - b2).abs() < 1e-10);
        assert!((data.a2 * data.a2 - 4.0 * data.gamma2.norm_sqr() - b2).abs() < 1e-10);
        assert!(data.a1 - data.b >= -1e-12 && data.a2 - data.b >= -1e-12);
        for branch in [Branch::MinusPlus, Branch::PlusMinus] {
            let (_, fd) = decompose_deg11(b, c, d, e, circle_point(&mut rng), branch).unwrap();
            assert!(expansion_defect(&fd) < 1e-10);
        }
    }
}

#[test]
fn boundary_singularity_iff_b_vanishes() {
    let mut rng = rng(43);
    for _ in 0..10 {
        let (b, c, d, e) = random_deg11_coeffs(&mut rng);
        let data = Deg11Data::new(b, c, d, e).unwrap();
        let rif = make_rif(BivarPoly::from_terms(&[(0, 0, b), (1, 0, c), (0, 1, d), (1, 1, e)]), 1, 1, one()).unwrap();
        assert!(data.b > 1e-6);
        assert!(exceptional_set(&rif, 512, EXCEPTIONAL_TOL).is_empty());
        // rotating the variables of 2 - z1 - z2 keeps a torus zero
        let (a1, a2) = (circle_point(&mut rng), circle_point(&mut rng));
        let data = Deg11Data::new(c64(2.0, 0.0), -a1, -a2, zero()).unwrap();
        assert!(data.b < 1e-6);
        let rif =
            make_rif(BivarPoly::from_terms(&[(0, 0, c64(2.0, 0.0)), (1, 0, -a1), (0, 1, -a2)]), 1, 1, one()).unwrap();
        let e = exceptional_set(&rif, 512, EXCEPTIONAL_TOL);
        assert_eq!(e.points.len(), 1);
        assert!((e.points[0] - a2.conj()).norm() < 1e-6);
    }
}

#[test]
fn scalar_symbol_examples() {
    let s = scalar_symbol(&fixtures::corner_singular().unwrap()).unwrap();
    assert!(same_rational(&s, &rat(&[1.0], &[2.0, -1.0]), 1e-12));
    let s = scalar_symbol(&fixtures::quadratic_symbol().unwrap()).unwrap();
    assert!(same_rational(&s, &rat(&[1.0, 1.0], &[4.0, -3.0, 1.0]), 1e-12));
    let (c, r) = (c64(0.2, 0.0), 0.3);
    let s = scalar_symbol(&fixtures::affine_symbol(c, r).unwrap()).unwrap();
    assert!(same_rational(
        &s,
        &shiftlab::rational::RationalScalar::poly(shiftlab::poly::UnivarPoly::new(vec![c, c64(r, 0.0)])),
        1e-12
    ));
    let fx = fixtures::deg21_fixture().unwrap();
    assert!(matches!(scalar_symbol(&fx.rif), Err(Error::Argument(_))));
}

#[test]
fn scalar_symbol_is_contractive_inside() {
    let mut rng = rng(44);
    let mut cases: Vec<Rif> = vec![fixtures::corner_singular().unwrap(), fixtures::quadratic_symbol().unwrap()];
    cases.extend((0..5).map(|_| random_deg11(&mut rng, Branch::MinusPlus).rif));
    for theta in &cases {
        let s = scalar_symbol(theta).unwrap();
        for _ in 0..500 {
            assert!(s.eval(disk_point(&mut rng, 0.999)).norm() < 1.0);
        }
    }
}

#[test]
fn product_basis_of_shift_and_monomial() {
    let basis = product_basis(&fixtures::shift_times_monomial().unwrap(), 1).unwrap();
    assert_eq!(basis.len(), 2);
    let z = (c64(0.3, -0.2), c64(0.1, 0.6));
    assert!((basis[0].eval(z.0, z.1) - one()).norm() < 1e-15);
    assert!((basis[1].eval(z.0, z.1) - z.0 * z.1).norm() < 1e-15);
}

#[test]
fn product_basis_of_chain_is_takenaka_family() {
    let zeros = [c64(0.5, 0.0), c64(0.1, -0.3), c64(-0.2, 0.2)];
    let basis = product_basis(&fixtures::blaschke_chain(&zeros).unwrap(), 1).unwrap();
    let z = c64(0.35, 0.25);
    let mut prefix = one();
    for (k, &a) in zeros.iter().enumerate() {
        let expected = prefix * (1.0 - a.norm_sqr()).sqrt() / (one() - a.conj() * z);
        assert!((basis[k].eval(z, c64(0.7, 0.0)) - expected).norm() < 1e-14);
        prefix *= (z - a) / (one() - a.conj() * z);
    }
}

#[test]
fn product_basis_needs_nonempty_sides() {
    let chain = fixtures::blaschke_chain(&[c64(0.2, 0.0)]).unwrap();
    assert!(matches!(product_basis(&chain, 2), Err(Error::Argument(_))));
}

#[test]
fn decompose_dispatches_on_degree() {
    let fd = decompose(
        &make_rif(BivarPoly::from_terms(&[(0, 0, c64(2.0, 0.0)), (0, 1, -one())]), 0, 1, one()).unwrap(),
        Branch::MinusPlus,
    )
    .unwrap();
    assert!(fd.basis2.is_empty() && fd.basis1.len() == 1);
    let fx = fixtures::deg21_fixture().unwrap();
    assert!(decompose(&fx.rif, Branch::MinusPlus).is_err());
}

#[test]
fn identity_and_gram_on_corner_branches() {
    for branch in [Branch::MinusPlus, Branch::PlusMinus] {
        check_suite(&[decompose(&fixtures::corner_singular().unwrap(), branch).unwrap()]);
    }
}

#[test]
fn identity_and_gram_on_product_blaschke_branches() {
    for t in [0.3, 0.7] {
        for branch in [Branch::MinusPlus, Branch::PlusMinus] {
            check_suite(&[fixtures::product_blaschke_factor(c64(t, 0.0), branch).unwrap()]);
        }
    }
}

#[test]
fn identity_and_gram_on_deg21_fixture() {
    let fx = fixtures::deg21_fixture().unwrap();
    check_suite(std::slice::from_ref(&fx));
    assert!(expansion_defect(&fx) < 1e-10);
}

#[test]
fn identity_and_gram_on_random_factors_and_products() {
    let mut rng = rng(45);
    for k in 0..10 {
        let branch = if k % 2 == 0 { Branch::MinusPlus } else { Branch::PlusMinus };
        check_suite(&[random_deg11(&mut rng, branch)]);
    }
    for _ in 0..3 {
        check_suite(&random_product(&mut rng));
    }
}
