//! Named inner functions and decompositions used by the reproduction
//! scripts and the test suites.

use crate::agler::{decompose_deg10, decompose_deg11, Branch, FactorDecomposition};
use crate::poly::{BivarPoly, UnivarPoly};
use crate::rif::{make_rif, theta_from_symbol, Rif};
use crate::{c64, Result, C64};

fn one() -> C64 {
    c64(1.0, 0.0)
}

/// `(2 z1 z2 - z1 - z2) / (2 - z1 - z2)`, singular only at `(1, 1)`.
pub fn corner_singular() -> Result<Rif> {
    make_rif(BivarPoly::from_terms(&[(0, 0, c64(2.0, 0.0)), (1, 0, -one()), (0, 1, -one())]), 1, 1, one())
}

/// Degree-(1, 2) inner function with denominator `4 - z1 - 3 z2 - z1 z2 + z2^2`.
pub fn quadratic_symbol() -> Result<Rif> {
    let p = BivarPoly::from_terms(&[
        (0, 0, c64(4.0, 0.0)),
        (1, 0, -one()),
        (0, 1, c64(-3.0, 0.0)),
        (1, 1, -one()),
        (0, 2, one()),
    ]);
    make_rif(p, 1, 2, one())
}

/// Degree-(1, 1) inner function whose scalar symbol is `c + r u`; the
/// synthesis takes the analytic conjugate `conj(c) + r z2`.
pub fn affine_symbol(c: C64, r: f64) -> Result<Rif> {
    theta_from_symbol(&UnivarPoly::new(vec![c.conj(), c64(r, 0.0)]), &UnivarPoly::one())
}

/// Degree-(2, 1) function `(z1^2 z2 - 1/2) / (1 - z1^2 z2 / 2)` with the
/// hard-coded decomposition `q = {s, s z1}`, `r = {s z1^2}`, `s = sqrt(3)/2`.
pub fn deg21_fixture() -> Result<FactorDecomposition> {
    let p = BivarPoly::from_terms(&[(0, 0, one()), (2, 1, c64(-0.5, 0.0))]);
    let rif = make_rif(p, 2, 1, one())?;
    let s = c64(3f64.sqrt() / 2.0, 0.0);
    FactorDecomposition::from_bases(
        rif,
        vec![BivarPoly::constant(s), BivarPoly::monomial(1, 0, s)],
        vec![BivarPoly::monomial(2, 0, s)],
    )
}

/// Factor `(z1 z2 - a) / (1 - conj(a) z1 z2)` on the given branch.
pub fn product_blaschke_factor(a: C64, branch: Branch) -> Result<FactorDecomposition> {
    Ok(decompose_deg11(one(), C64::new(0.0, 0.0), C64::new(0.0, 0.0), -a.conj(), one(), branch)?.1)
}

/// Factors of `B(z1 z2)` for the Blaschke product with the given zeros.
pub fn blaschke_of_product(zeros: &[C64]) -> Result<Vec<FactorDecomposition>> {
    zeros.iter().map(|&a| product_blaschke_factor(a, Branch::MinusPlus)).collect()
}

/// Factors `(z1 - a_t) / (1 - conj(a_t) z1)` of a one-variable Blaschke product.
pub fn blaschke_chain(zeros: &[C64]) -> Result<Vec<FactorDecomposition>> {
    zeros.iter().map(|&a| decompose_deg10(a, one())).collect()
}

/// `theta_t^2` with `theta_t = (z1 z2 - t) / (1 - t z1 z2)`.
pub fn squared_product_blaschke(t: f64) -> Result<Vec<FactorDecomposition>> {
    blaschke_of_product(&[c64(t, 0.0), c64(t, 0.0)])
}

/// `theta_s z1 z2`, with the monomial factor using the basis `{z2}`.
pub fn product_blaschke_times_monomial(s: f64) -> Result<Vec<FactorDecomposition>> {
    Ok(vec![
        product_blaschke_factor(c64(s, 0.0), Branch::MinusPlus)?,
        product_blaschke_factor(C64::new(0.0, 0.0), Branch::PlusMinus)?,
    ])
}

/// `z1 * z1 z2` with the basis `{1, z1 z2}`.
pub fn shift_times_monomial() -> Result<Vec<FactorDecomposition>> {
    Ok(vec![
        decompose_deg10(C64::new(0.0, 0.0), one())?,
        product_blaschke_factor(C64::new(0.0, 0.0), Branch::PlusMinus)?,
    ])
}

/// The two factor orders `(z1, theta)` and `(theta, z1)` of `z1 theta`, for
/// `theta` from [`corner_singular`].
pub fn shift_times_corner() -> Result<(Vec<FactorDecomposition>, Vec<FactorDecomposition>)> {
    let z1 = decompose_deg10(C64::new(0.0, 0.0), one())?;
    let theta = crate::agler::decompose(&corner_singular()?, Branch::MinusPlus)?;
    Ok((vec![z1.clone(), theta.clone()], vec![theta, z1]))
}
