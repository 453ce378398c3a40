#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftlab::agler::{decompose_deg10, decompose_deg11, product_numerators, Branch, FactorDecomposition};
use shiftlab::gram::gram_matrix;
use shiftlab::poly::{BivarPoly, UnivarPoly};
use shiftlab::rational::RationalScalar;
use shiftlab::{c64, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>())
}

pub fn circle_point(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())
}

pub fn bidisk_points(seed: u64, count: usize, radius: f64) -> Vec<(C64, C64)> {
    let mut r = rng(seed);
    (0..count).map(|_| (disk_point(&mut r, radius), disk_point(&mut r, radius))).collect()
}

/// Coefficients `(b, c, d, e)` of a stable degree-(1,1) denominator, from
/// the sufficient condition `|c| + |d| + |e| < |b|`.
pub fn random_deg11_coeffs(rng: &mut ChaCha8Rng) -> (C64, C64, C64, C64) {
    loop {
        let c = disk_point(rng, 0.6);
        let d = disk_point(rng, 0.6);
        let e = disk_point(rng, 0.6);
        let total = c.norm() + d.norm() + e.norm();
        if total < 0.95 && c.norm() > 0.05 && d.norm() > 0.05 {
            return (c64(1.0, 0.0), c, d, e);
        }
    }
}

pub fn random_deg11(rng: &mut ChaCha8Rng, branch: Branch) -> FactorDecomposition {
    let (b, c, d, e) = random_deg11_coeffs(rng);
    let lambda = circle_point(rng);
    decompose_deg11(b, c, d, e, lambda, branch).expect("sampled denominator is stable").1
}

/// Product of two or three random factors of degree (1,0) or (1,1).
pub fn random_product(rng: &mut ChaCha8Rng) -> Vec<FactorDecomposition> {
    let count = 2 + (rng.random::<f64>() < 0.5) as usize;
    (0..count)
        .map(|_| {
            if rng.random::<f64>() < 0.3 {
                decompose_deg10(disk_point(rng, 0.8), circle_point(rng)).unwrap()
            } else {
                let branch = if rng.random::<f64>() < 0.5 { Branch::MinusPlus } else { Branch::PlusMinus };
                random_deg11(rng, branch)
            }
        })
        .collect()
}

/// Whether two rational functions agree, by comparing `a.num b.den` and
/// `b.num a.den` coefficientwise after scaling by the largest coefficient.
pub fn same_rational(a: &RationalScalar, b: &RationalScalar, tol: f64) -> bool {
    let l = &a.num * &b.den;
    let r = &b.num * &a.den;
    let scale = l.max_abs().max(r.max_abs()).max(1e-300);
    (&l - &r).max_abs() <= tol * scale
}

pub fn rat(num: &[f64], den: &[f64]) -> RationalScalar {
    RationalScalar::new(UnivarPoly::from_real(num), UnivarPoly::from_real(den))
}

/// `max |G - I|` for the Gram matrix of both wandering bases of a product.
pub fn gram_defect(factors: &[FactorDecomposition]) -> f64 {
    let (den, q) = product_numerators(factors, 1, false).unwrap();
    let (_, r) = product_numerators(factors, 2, false).unwrap();
    let nums: Vec<BivarPoly> = q.into_iter().chain(r).map(|e| e.numerator).collect();
    let g = gram_matrix(&den, &nums);
    let k = nums.len();
    (g - DMatrix::<C64>::identity(k, k)).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c64(a, b))
}

pub fn bivar(max1: usize, max2: usize) -> impl Strategy<Value = BivarPoly> {
    (0..=max1, 0..=max2).prop_flat_map(|(d1, d2)| {
        proptest::collection::vec(complex(), (d1 + 1) * (d2 + 1))
            .prop_map(move |v| BivarPoly::from_grid(v.chunks(d2 + 1).map(|r| r.to_vec()).collect()))
    })
}

pub fn univar(max: usize) -> impl Strategy<Value = UnivarPoly> {
    proptest::collection::vec(complex(), 1..=max + 1).prop_map(UnivarPoly::new)
}

pub fn small_point() -> impl Strategy<Value = C64> {
    (0.0f64..0.99, 0.0f64..(2.0 * PI)).prop_map(|(r, a)| C64::from_polar(r, a))
}
