mod common;

use std::f64::consts::PI;

use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use shiftlab::agler::scalar_symbol;
use shiftlab::fixtures;
use shiftlab::hull::ConvexRegion;
use shiftlab::linalg::eigenvalues;
use shiftlab::numrange::{
    elliptical_range, finite_section_oracle, matrix_numrange, numerical_radius, openness_test, scalar_range,
    support_point, sweep_closure, tau_grid, OpennessStatus,
};
use shiftlab::symbol::{assemble_product_symbol, MatrixSymbol, SymbolVar};
use shiftlab::{c64, C64};

fn zero() -> C64 {
    c64(0.0, 0.0)
}

fn mat(rows: usize, v: &[C64]) -> DMatrix<C64> {
    DMatrix::from_row_slice(rows, rows, v)
}

fn circle_region(center: C64, radius: f64, n: usize) -> ConvexRegion {
    let pts: Vec<C64> = (0..n).map(|k| center + C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64)).collect();
    ConvexRegion::from_points(&pts, true)
}

fn phi_symbol(t: f64) -> MatrixSymbol {
    assemble_product_symbol(&fixtures::squared_product_blaschke(t).unwrap(), 1).unwrap()
}

fn psi_symbol(s: f64) -> MatrixSymbol {
    assemble_product_symbol(&fixtures::product_blaschke_times_monomial(s).unwrap(), 1).unwrap()
}

fn shift_monomial_symbol() -> MatrixSymbol {
    assemble_product_symbol(&fixtures::shift_times_monomial().unwrap(), 1).unwrap()
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = DMatrix<C64>> {
    proptest::collection::vec(complex(), n * n).prop_map(move |v| DMatrix::from_row_slice(n, n, &v))
}

/// Unitary from the QR factorisation of a matrix with entries in the unit square.
fn unitary_strategy(n: usize) -> impl Strategy<Value = DMatrix<C64>> {
    matrix_strategy(n).prop_map(move |a| (a + DMatrix::<C64>::identity(n, n) * c64(0.1, 0.0)).qr().q())
}

#[test]
fn numrange_examples() {
    let w = matrix_numrange(&mat(2, &[c64(1.0, 0.0), zero(), zero(), c64(0.0, 1.0)]), 256);
    assert!(w.contains(c64(0.5, 0.5), 1e-12));
    assert!(!w.contains(c64(0.5, 0.0), 1e-3));

    let nilpotent = mat(2, &[zero(), c64(1.0, 0.0), zero(), zero()]);
    assert!((numerical_radius(&nilpotent, 256) - 0.5).abs() < 1e-12);
    assert!(matrix_numrange(&nilpotent, 1024).hausdorff(&circle_region(zero(), 0.5, 1024)) < 1e-5);

    let herm = mat(2, &[c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(2.0, 0.0)]);
    let w = matrix_numrange(&herm, 256);
    assert!(w.contains(c64(1.0, 0.0), 1e-12) && w.contains(c64(3.0, 0.0), 1e-12));
    assert!(w.vertices.iter().all(|z| z.im.abs() < 1e-12 && z.re > 1.0 - 1e-12 && z.re < 3.0 + 1e-12));
}

#[test]
fn numrange_contains_random_quadratic_forms() {
    let mut rng = rng(60);
    for _ in 0..3 {
        let a = DMatrix::from_fn(3, 3, |_, _| disk_point(&mut rng, 1.0));
        let w = matrix_numrange(&a, 2048);
        for _ in 0..100_000 {
            let v = DVector::from_fn(3, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let v = &v / c64(v.norm(), 0.0);
            let z = (v.adjoint() * (&a * &v))[(0, 0)];
            assert!(w.contains(z, 1e-5), "quadratic form {z} outside");
        }
    }
}

#[test]
fn elliptical_range_examples() {
    let e = elliptical_range(&mat(2, &[zero(), c64(1.0, 0.0), zero(), zero()])).unwrap();
    assert!(e.center.norm() < 1e-15 && (e.semi_minor - 0.5).abs() < 1e-15 && (e.max_modulus() - 0.5).abs() < 1e-12);
    let e = elliptical_range(&mat(2, &[c64(1.0, 0.0), zero(), zero(), c64(-1.0, 0.0)])).unwrap();
    assert!(e.semi_minor.abs() < 1e-15 && (e.semi_major() - 1.0).abs() < 1e-15);
    assert!(elliptical_range(&DMatrix::<C64>::identity(3, 3)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn numrange_contains_eigenvalues(a in matrix_strategy(4)) {
        let w = matrix_numrange(&a, 1024);
        let scale = a.norm().max(1.0);
        for ev in eigenvalues(&a) {
            prop_assert!(w.contains(ev, 1e-5 * scale));
        }
    }

    #[test]
    fn numrange_is_unitarily_invariant(a in matrix_strategy(3), u in unitary_strategy(3)) {
        let b = &u * &a * u.adjoint();
        let (wa, wb) = (matrix_numrange(&a, 512), matrix_numrange(&b, 512));
        prop_assert!(wa.hausdorff(&wb) < 1e-9);
    }

    #[test]
    fn numrange_rotates_with_the_matrix(a in matrix_strategy(3), k in 0usize..512) {
        let r = C64::from_polar(1.0, 2.0 * PI * k as f64 / 512.0);
        let rotated: Vec<C64> = matrix_numrange(&a, 512).vertices.iter().map(|z| z * r).collect();
        let direct = matrix_numrange(&(&a * r), 512);
        prop_assert!(direct.hausdorff(&ConvexRegion::from_points(&rotated, false)) < 1e-9);
    }

    #[test]
    fn ellipse_matches_two_by_two_range(a in matrix_strategy(2)) {
        let e = elliptical_range(&a).unwrap();
        for k in 0..64 {
            let alpha = 2.0 * PI * k as f64 / 64.0;
            let r = C64::from_polar(1.0, alpha);
            let (_, h) = support_point(&a, alpha);
            prop_assert!(((r * e.support_point(alpha)).re - h).abs() < 1e-6);
        }
    }
}

#[test]
fn sweep_of_squared_product_blaschke_is_a_disk() {
    let w = sweep_closure(&phi_symbol(0.5), 512, 512);
    assert!((w.max_modulus() - 0.875).abs() < 1e-4);
    assert!(w.hausdorff(&circle_region(zero(), 0.875, 512)) < 1e-3);
}

#[test]
fn sweep_of_blaschke_times_monomial_is_a_disk() {
    let w = sweep_closure(&psi_symbol(0.75), 512, 512);
    assert!((w.max_modulus() - 0.875).abs() < 1e-4);
    assert!(w.hausdorff(&circle_region(zero(), 0.875, 512)) < 1e-3);
}

#[test]
fn sweep_of_constant_symbol_is_the_matrix_range() {
    let a = mat(2, &[c64(0.2, 0.1), c64(0.5, 0.0), zero(), c64(-0.3, 0.0)]);
    let m = MatrixSymbol::constant(&a, SymbolVar::ConjZ2);
    assert!(sweep_closure(&m, 16, 256).hausdorff(&matrix_numrange(&a, 256)) < 1e-12);
}

#[test]
fn scalar_range_of_corner_symbol() {
    let f = scalar_symbol(&fixtures::corner_singular().unwrap()).unwrap();
    let r = scalar_range(&f, 64);
    let center = c64(2.0 / 3.0, 0.0);
    assert!(r.boundary.iter().all(|w| ((w - center).norm() - 1.0 / 3.0).abs() < 1e-12));
    assert!((r.radius - 1.0).abs() < 1e-12);
    assert!(r.numrange.hausdorff(&circle_region(center, 1.0 / 3.0, 256)) < 1e-2);
    assert!(r.image.iter().all(|w| (w - center).norm() <= 1.0 / 3.0 + 1e-12));
}

#[test]
fn scalar_range_of_affine_symbol() {
    let (c, rr) = (c64(0.1, 0.2), 0.4);
    let f = scalar_symbol(&fixtures::affine_symbol(c, rr).unwrap()).unwrap();
    let r = scalar_range(&f, 32);
    assert!(r.boundary.iter().all(|w| ((w - c).norm() - rr).abs() < 1e-12));
    assert!((r.radius - (c.norm() + rr)).abs() < 1e-3);
}

#[test]
fn section_of_shift_monomial_symbol() {
    let cloud = finite_section_oracle(&shift_monomial_symbol(), 256, 64, 200, 7);
    assert!(cloud.radius >= 0.49 && cloud.radius <= 0.5 + 1e-12, "radius {}", cloud.radius);
}

#[test]
fn sections_lie_in_the_sweep() {
    let mut rng = rng(61);
    let mut cases = vec![phi_symbol(0.5), psi_symbol(0.75), shift_monomial_symbol()];
    cases.extend((0..3).map(|_| assemble_product_symbol(&random_product(&mut rng), 1).unwrap()));
    for m in &cases {
        let sweep = sweep_closure(m, 1024, 4096);
        let cloud = finite_section_oracle(m, 32, 64, 500, 3);
        for z in cloud.points() {
            assert!(sweep.contains(*z, 1e-6), "section point {z} outside");
        }
    }
}

#[test]
fn section_radius_grows_with_size() {
    let m = psi_symbol(0.75);
    let radii: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| finite_section_oracle(&m, n, 48, 0, 1).radius).collect();
    for w in radii.windows(2) {
        assert!(w[1] >= w[0] - 1e-12, "radii {radii:?}");
    }
    let last = radii[3];
    assert!((0.875 - 0.02..=0.875 + 1e-9).contains(&last), "radius {last}");
}

#[test]
fn openness_of_squared_product_blaschke() {
    let v = openness_test(&phi_symbol(0.7), 256, 256);
    assert_eq!(v.status, OpennessStatus::Open);
    assert!(v.witness.is_none() && v.margin > 0.0);
}

#[test]
fn constant_symbol_is_inconclusive() {
    let a = mat(2, &[c64(0.2, 0.1), c64(0.5, 0.0), zero(), c64(-0.3, 0.0)]);
    let v = openness_test(&MatrixSymbol::constant(&a, SymbolVar::ConjZ2), 64, 16);
    assert_eq!(v.status, OpennessStatus::Inconclusive);
}

#[test]
fn openness_witness_meets_every_disk() {
    let t = 0.3;
    let v = openness_test(&phi_symbol(t), 256, 256);
    assert_eq!(v.status, OpennessStatus::Inconclusive);
    let (alpha, beta) = v.witness.unwrap();
    let r = C64::from_polar(1.0, alpha);
    // W(M(tau)) is the disk with center t conj(tau) and radius (1 - t^2) / 2
    let radius = (1.0 - t * t) / 2.0;
    for tau in tau_grid(4096) {
        let center = tau.conj() * t;
        assert!(((r * center).im - beta).abs() <= radius + 1e-6);
    }
}
