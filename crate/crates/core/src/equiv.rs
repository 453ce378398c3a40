//! Unitary equivalence of compressed-shift symbols: Blaschke-ratio
//! detection, the pointwise unitary `U(z2)` by Cramer's rule, and checks.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::agler::{product_numerators, FactorDecomposition};
use crate::linalg;
use crate::numrange::tau_grid;
use crate::poly::{BivarPoly, UnivarPoly};
use crate::rational::{RationalMatrix, RationalScalar};
use crate::rif::{BlaschkeProduct, Rif};
use crate::symbol::{assemble_product_symbol, MatrixSymbol};
use crate::toeplitz;
use crate::{Error, Result, C64};

/// Seed of the sample points used to fit the ratio constant.
pub const RATIO_SEED: u64 = 0x5eed_0001;
pub const RATIO_SAMPLES: usize = 200;
/// Tolerance for cancelling common Blaschke zeros.
const ZERO_MATCH_TOL: f64 = 1e-8;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn bidisk_samples(count: usize, seed: u64) -> Vec<(C64, C64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = move || C64::from_polar(0.95 * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>());
    (0..count).map(|_| (draw(), draw())).collect()
}

/// Outcome of a successful Blaschke-ratio test: `b1 * phi = b2 * theta`,
/// with `r1 p = c r2 q` where `r1 = q(0, .)`, `r2 = p(0, .)`.
#[derive(Clone, Debug)]
pub struct BlaschkeRatio {
    pub b1: BlaschkeProduct,
    pub b2: BlaschkeProduct,
    pub r1: UnivarPoly,
    pub r2: UnivarPoly,
    pub c: C64,
    /// Relative residual of the polynomial identity.
    pub residual: f64,
}

impl BlaschkeRatio {
    /// Inputs `(r1, r2, c)` for [`construct_u`], which expects the identity
    /// in the form `r1 q = c r2 p`.
    pub fn construction_data(&self) -> (UnivarPoly, UnivarPoly, C64) {
        (self.r2.clone(), self.r1.clone(), one() / self.c)
    }
}

/// `r~ / r` as a Blaschke product, for `r` without zeros in the closed disk.
fn reflection_ratio(r: &UnivarPoly) -> Result<BlaschkeProduct> {
    let r = r.normalized();
    let d = r.degree().unwrap_or(0);
    let roots = r.roots()?;
    let zeros: Vec<C64> = roots.iter().map(|z| one() / z.conj()).collect();
    let value = r.reflect(d)?.eval(one()) / r.eval(one());
    BlaschkeProduct::matching(zeros, one(), value)
}

fn times_monomial(b: &BlaschkeProduct, k: usize, gamma: C64) -> Result<BlaschkeProduct> {
    let mut zeros = b.zeros.clone();
    zeros.extend(std::iter::repeat_n(C64::new(0.0, 0.0), k));
    BlaschkeProduct::new(zeros, b.lambda * gamma)
}

/// Removes zeros shared by `b1` and `b2` and scales both so `b2` has
/// constant one.
fn cancel_common(b1: &BlaschkeProduct, b2: &BlaschkeProduct) -> Result<(BlaschkeProduct, BlaschkeProduct)> {
    let mut z1 = b1.zeros.clone();
    let mut z2 = Vec::new();
    for &a in &b2.zeros {
        match z1.iter().position(|&b| (a - b).norm() < ZERO_MATCH_TOL) {
            Some(k) => {
                z1.remove(k);
            }
            None => z2.push(a),
        }
    }
    let phase = b2.lambda.conj();
    Ok((BlaschkeProduct::new(z1, b1.lambda * phase)?, BlaschkeProduct::new(z2, one())?))
}

/// Tests whether `b1(z2) phi = b2(z2) theta` for one-variable Blaschke
/// products, via the identity `q(0, z2) p = c p(0, z2) q`.
pub fn blaschke_ratio_test(theta: &Rif, phi: &Rif, tol: f64) -> Result<Option<BlaschkeRatio>> {
    let (p, q) = (&theta.p, &phi.p);
    let r1 = q.z1_coeff(0).normalized();
    let r2 = p.z1_coeff(0).normalized();
    let pts = bidisk_samples(RATIO_SAMPLES, RATIO_SEED);
    let pairs: Vec<(C64, C64)> =
        pts.iter().map(|&(z1, z2)| (r1.eval(z2) * p.eval(z1, z2), r2.eval(z2) * q.eval(z1, z2))).collect();
    let den: f64 = pairs.iter().map(|(_, b)| b.norm_sqr()).sum();
    if den == 0.0 {
        return Ok(None);
    }
    let c = pairs.iter().map(|(a, b)| b.conj() * a).sum::<C64>() / den;
    let scale = pairs.iter().map(|(a, _)| a.norm()).fold(0.0, f64::max).max(1e-300);
    let residual = pairs.iter().map(|(a, b)| (a - c * b).norm()).fold(0.0, f64::max) / scale;
    if residual >= tol || c.norm() == 0.0 {
        return Ok(None);
    }
    let c1 = reflection_ratio(&r1)?;
    let c2 = reflection_ratio(&r2)?;
    let d1 = r1.degree().unwrap_or(0) + theta.n;
    let d2 = r2.degree().unwrap_or(0) + phi.n;
    let gamma = theta.lambda * c.conj() / (c * phi.lambda);
    let gamma = gamma / gamma.norm();
    let (b1, b2) = if d1 >= d2 {
        (times_monomial(&c2, d1 - d2, gamma)?, c1)
    } else {
        (c2, times_monomial(&c1, d2 - d1, gamma.conj())?)
    };
    let (b1, b2) = cancel_common(&b1, &b2)?;
    Ok(Some(BlaschkeRatio { b1, b2, r1, r2, c, residual }))
}

/// Largest relative defect of `b1(z2) phi(z) = b2(z2) theta(z)` on samples.
pub fn ratio_identity_defect(theta: &Rif, phi: &Rif, ratio: &BlaschkeRatio) -> f64 {
    bidisk_samples(64, RATIO_SEED ^ 1)
        .into_iter()
        .filter_map(|(z1, z2)| {
            let t = theta.eval(z1, z2).ok()?;
            let f = phi.eval(z1, z2).ok()?;
            Some((ratio.b1.eval(z2) * f - ratio.b2.eval(z2) * t).norm())
        })
        .fold(0.0, f64::max)
}

/// Pointwise unitary `U(z2)` with `t_j / q = sum_i U_ij(z2) q_i / p`.
///
/// Uses `r1 q = c r2 p`: the numerators `r2 q_i` and `r1 t_j / c` share a
/// denominator, so the `z1`-coefficient matrices satisfy `A U = B` and
/// each entry is a ratio of polynomial determinants.
pub fn construct_u(
    p: &BivarPoly,
    basis_q: &[BivarPoly],
    q: &BivarPoly,
    basis_t: &[BivarPoly],
    r1: &UnivarPoly,
    r2: &UnivarPoly,
    c: C64,
) -> Result<RationalMatrix> {
    let m = basis_q.len();
    if m == 0 || basis_t.len() != m {
        return Err(Error::arg("bases must be nonempty and of equal size"));
    }
    if c.norm() == 0.0 {
        return Err(Error::arg("ratio constant must be nonzero"));
    }
    let lhs = &BivarPoly::from_z2(r1) * q;
    let rhs = (&BivarPoly::from_z2(r2) * p).scale(c);
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1e-300);
    if (&lhs - &rhs).max_abs() > 1e-9 * scale {
        return Err(Error::Consistency("ratio identity r1 q = c r2 p does not hold".into()));
    }
    // shared factors of r1, r2 would reappear as repeated roots of det A
    let ratio = RationalScalar::new(r1.clone(), r2.clone()).reduced();
    let r2b = BivarPoly::from_z2(&ratio.den);
    let r1b = BivarPoly::from_z2(&ratio.num.scale(one() / c));
    let q_hat: Vec<BivarPoly> = basis_q.iter().map(|b| (&r2b * b).normalized()).collect();
    let t_hat: Vec<BivarPoly> = basis_t.iter().map(|b| (&r1b * b).normalized()).collect();
    if q_hat.iter().chain(&t_hat).any(|b| !b.is_zero() && b.deg1 >= m) {
        return Err(Error::arg("basis numerators must have z1-degree below the basis size"));
    }
    let a: Vec<Vec<UnivarPoly>> = (0..m).map(|k| q_hat.iter().map(|b| b.z1_coeff(k)).collect()).collect();
    let det_a = linalg::poly_det(&a);
    if det_a.is_zero() {
        return Err(Error::DegenerateBasis);
    }
    let mut entries = vec![vec![RationalScalar::zero(); m]; m];
    for (j, t) in t_hat.iter().enumerate() {
        for i in 0..m {
            let mut ai = a.clone();
            for (k, row) in ai.iter_mut().enumerate() {
                row[i] = t.z1_coeff(k);
            }
            entries[i][j] = RationalScalar::new(linalg::poly_det(&ai), det_a.clone()).reduced();
        }
    }
    Ok(RationalMatrix { entries })
}

/// Maximum defects of a pointwise similarity `M1(tau) = U(tau) M2(tau) U(tau)*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityReport {
    pub max_unitarity_defect: f64,
    pub max_similarity_defect: f64,
    /// Grid point of the largest similarity defect.
    pub tau_of_max: C64,
    pub pass: bool,
}

/// Checks unitarity of `U(tau)` and `M1(tau) = U(tau) M2(tau) U(tau)*` on
/// `grid` boundary points, in the spectral norm.
pub fn verify_similarity(
    m1: &MatrixSymbol,
    m2: &MatrixSymbol,
    u: &RationalMatrix,
    grid: usize,
    tol: f64,
) -> SimilarityReport {
    let m = m1.dim();
    if m2.dim() != m || u.dim() != m {
        return SimilarityReport {
            max_unitarity_defect: f64::INFINITY,
            max_similarity_defect: f64::INFINITY,
            tau_of_max: one(),
            pass: false,
        };
    }
    let id = DMatrix::<C64>::identity(m, m);
    let rows: Vec<(f64, f64, C64)> = tau_grid(grid)
        .into_par_iter()
        .map(|tau| {
            let ut = u.eval(tau);
            let unit = linalg::spectral_norm(&(&ut * ut.adjoint() - &id));
            let sim = linalg::spectral_norm(&(m1.eval(tau) - &ut * m2.eval(tau) * ut.adjoint()));
            let nan = |x: f64| if x.is_finite() { x } else { f64::INFINITY };
            (nan(unit), nan(sim), tau)
        })
        .collect();
    let max_unitarity_defect = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let (max_similarity_defect, tau_of_max) =
        rows.iter().fold((0.0, one()), |acc, r| if r.1 > acc.0 { (r.1, r.2) } else { acc });
    SimilarityReport {
        max_unitarity_defect,
        max_similarity_defect,
        tau_of_max,
        pass: max_unitarity_defect < tol && max_similarity_defect < tol,
    }
}

/// Bottleneck distance between two equal-size multisets: greedy nearest
/// neighbour, refined by exhaustive search for up to six points.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut greedy: f64 = 0.0;
    for &x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, &y)| (k, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        used[k] = true;
        greedy = greedy.max(d);
    }
    if a.len() > 6 {
        return greedy;
    }
    let mut perm: Vec<usize> = (0..a.len()).collect();
    let mut best = greedy;
    permute(&mut perm, 0, &mut |p| {
        let d = p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).fold(0.0, f64::max);
        best = best.min(d);
    });
    best
}

fn permute(p: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Whether `M1(tau)` and `M2(tau)` have matching eigenvalues at every grid point.
pub fn eigen_match_test(m1: &MatrixSymbol, m2: &MatrixSymbol, grid: usize, tol: f64) -> bool {
    m1.dim() == m2.dim()
        && tau_grid(grid).into_par_iter().all(|tau| {
            let e1 = linalg::eigenvalues(&m1.eval(tau));
            let e2 = linalg::eigenvalues(&m2.eval(tau));
            multiset_distance(&e1, &e2) < tol
        })
}

fn su2(theta: f64, xi: f64, eta: f64) -> DMatrix<C64> {
    let a = C64::from_polar(theta.cos(), xi);
    let b = C64::from_polar(theta.sin(), eta);
    DMatrix::from_row_slice(2, 2, &[a, b, -b.conj(), a.conj()])
}

/// Smallest similarity defect `max_tau |M1 - V M2 V*|` over constant 2x2
/// unitaries `V`, by a grid scan followed by pattern search. Returns the
/// defect and the minimiser.
pub fn best_constant_unitary(m1: &MatrixSymbol, m2: &MatrixSymbol, grid: usize) -> Result<(f64, DMatrix<C64>)> {
    if m1.dim() != 2 || m2.dim() != 2 {
        return Err(Error::arg("constant unitary search is implemented for 2x2 symbols"));
    }
    let pairs: Vec<(DMatrix<C64>, DMatrix<C64>)> =
        tau_grid(grid).into_iter().map(|t| (m1.eval(t), m2.eval(t))).collect();
    let defect = |x: [f64; 3]| {
        let v = su2(x[0], x[1], x[2]);
        pairs.iter().map(|(a, b)| linalg::frobenius(&(a - &v * b * v.adjoint()))).fold(0.0, f64::max)
    };
    let (nt, nphase) = (17, 24);
    let mut starts: Vec<(f64, [f64; 3])> = (0..nt)
        .flat_map(|i| (0..nphase).flat_map(move |j| (0..nphase).map(move |k| (i, j, k))))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j, k)| {
            let x = [
                0.5 * PI * i as f64 / (nt - 1) as f64,
                2.0 * PI * j as f64 / nphase as f64,
                2.0 * PI * k as f64 / nphase as f64,
            ];
            (defect(x), x)
        })
        .collect();
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let refined: Vec<(f64, [f64; 3])> = starts
        .into_iter()
        .take(8)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(mut f, mut x)| {
            let mut step = 0.2;
            while step > 1e-9 {
                let mut moved = false;
                for d in 0..3 {
                    for s in [step, -step] {
                        let mut y = x;
                        y[d] += s;
                        let fy = defect(y);
                        if fy < f {
                            f = fy;
                            x = y;
                            moved = true;
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            (f, x)
        })
        .collect();
    let (f, x) = refined.into_iter().fold((f64::INFINITY, [0.0; 3]), |acc, v| if v.0 < acc.0 { v } else { acc });
    Ok((f, su2(x[0], x[1], x[2])))
}

/// Norms comparing Toeplitz compressions on `blocks x blocks` sections.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzRelation {
    /// Frobenius norm of `P (T_U* T_M1 T_U) P - P T_M2 P`, an upper bound
    /// for the spectral norm.
    pub compression_defect: f64,
    /// Power-iteration lower bound for `|P (T_U T_M2 T_U*) P - P T_M1 P|`.
    pub reverse_defect: f64,
}

/// Compares `T_U* T_M1 T_U` with `T_M2` and `T_U T_M2 T_U*` with `T_M1`
/// for analytic `U` and symbols in `conj z2`.
pub fn toeplitz_relation(u: &RationalMatrix, m1: &MatrixSymbol, m2: &MatrixSymbol, blocks: usize) -> ToeplitzRelation {
    let uc = toeplitz::analytic_coefficients(u).coeffs;
    let c1 = toeplitz::symbol_coefficients(m1).coeffs;
    let c2 = toeplitz::symbol_coefficients(m2).coeffs;
    let m = u.dim();
    let pad = blocks + uc.len().max(c1.len());
    let tu_long = toeplitz::block_section(&uc, pad, false);
    let tu_cols = tu_long.columns(0, m * blocks).into_owned();
    let t1_long = toeplitz::block_section(&c1, pad, true);
    let t2 = toeplitz::block_section(&c2, blocks, true);
    let compressed = tu_cols.adjoint() * &t1_long * &tu_cols;
    let compression_defect = linalg::frobenius(&(compressed - &t2));
    // P T_U = P T_U P for lower-triangular T_U, so sections compose exactly
    let tu = toeplitz::block_section(&uc, blocks, false);
    let t1 = toeplitz::block_section(&c1, blocks, true);
    let reverse = &tu * &t2 * tu.adjoint() - t1;
    ToeplitzRelation { compression_defect, reverse_defect: linalg::spectral_norm_estimate(&reverse, 60) }
}

/// End-to-end comparison of two factorisations of inner functions,
/// using the `z1` symbols and `basis2` numerators.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub eigen_match: bool,
    pub ratio: Option<BlaschkeRatio>,
    pub u: Option<RationalMatrix>,
    pub similarity: Option<SimilarityReport>,
    pub symbol1: MatrixSymbol,
    pub symbol2: MatrixSymbol,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.eigen_match && self.similarity.as_ref().is_some_and(|s| s.pass)
    }
}

/// Runs eigenvalue screening, the ratio test, `construct_u` and
/// [`verify_similarity`] for two product factorisations.
pub fn compare_factorizations(
    first: &[FactorDecomposition],
    second: &[FactorDecomposition],
    grid: usize,
    tol: f64,
) -> Result<EquivalenceReport> {
    let symbol1 = assemble_product_symbol(first, 1)?;
    let symbol2 = assemble_product_symbol(second, 1)?;
    let eigen_match = eigen_match_test(&symbol1, &symbol2, grid.min(256), 1e-7);
    let rif1 = Rif::product(&first.iter().map(|f| f.rif.clone()).collect::<Vec<_>>())?;
    let rif2 = Rif::product(&second.iter().map(|f| f.rif.clone()).collect::<Vec<_>>())?;
    let ratio = blaschke_ratio_test(&rif1, &rif2, 1e-9)?;
    let mut report =
        EquivalenceReport { eigen_match, ratio: ratio.clone(), u: None, similarity: None, symbol1, symbol2 };
    let Some(ratio) = ratio else { return Ok(report) };
    if report.symbol1.dim() != report.symbol2.dim() {
        return Ok(report);
    }
    let (p, q_basis) = product_numerators(first, 1, true)?;
    let (q, t_basis) = product_numerators(second, 1, true)?;
    let qn: Vec<BivarPoly> = q_basis.into_iter().map(|b| b.numerator).collect();
    let tn: Vec<BivarPoly> = t_basis.into_iter().map(|b| b.numerator).collect();
    let (r1, r2, c) = ratio.construction_data();
    let u = construct_u(&p, &qn, &q, &tn, &r1, &r2, c)?;
    report.similarity = Some(verify_similarity(&report.symbol1, &report.symbol2, &u, grid, tol));
    report.u = Some(u);
    Ok(report)
}
