//! Complex univariate and bivariate polynomials.

use std::ops::{Add, Mul, Neg, Sub};

use crate::{linalg, Error, Result, C64};

/// Relative threshold below which trailing coefficients are treated as zero.
pub const NORMALIZE_TOL: f64 = 1e-13;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Polynomial in one variable, `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct UnivarPoly {
    pub coeffs: Vec<C64>,
}

impl UnivarPoly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        UnivarPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        UnivarPoly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        UnivarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        UnivarPoly { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: C64) -> Self {
        let mut coeffs = vec![zero(); k + 1];
        coeffs[k] = c;
        UnivarPoly { coeffs }
    }

    /// `lead * prod (x - r)`.
    pub fn from_roots(roots: &[C64], lead: C64) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = &p * &UnivarPoly::new(vec![-r, C64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == zero())
    }

    /// Copy with trailing coefficients below `NORMALIZE_TOL * max` removed.
    pub fn normalized(&self) -> Self {
        let cut = NORMALIZE_TOL * self.max_abs();
        let mut coeffs = self.coeffs.clone();
        while let Some(last) = coeffs.last() {
            if last.norm() <= cut {
                coeffs.pop();
            } else {
                break;
            }
        }
        UnivarPoly { coeffs }
    }

    /// Effective degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let n = self.normalized().coeffs.len();
        if n == 0 {
            None
        } else {
            Some(n - 1)
        }
    }

    /// Coefficient of `x^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_else(zero)
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        UnivarPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn scale(&self, c: C64) -> Self {
        UnivarPoly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Polynomial with conjugated coefficients, same variable.
    pub fn conj_coeffs(&self) -> Self {
        UnivarPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `x^d * conj(p(1/conj(x)))`; requires `d >= degree`.
    pub fn reflect(&self, d: usize) -> Result<Self> {
        let p = self.normalized();
        if p.coeffs.len() > d + 1 {
            return Err(Error::arg(format!("reflection degree {d} below polynomial degree {}", p.coeffs.len() - 1)));
        }
        let mut coeffs = vec![zero(); d + 1];
        for (k, c) in p.coeffs.iter().enumerate() {
            coeffs[d - k] = c.conj();
        }
        Ok(UnivarPoly { coeffs })
    }

    /// Synthetic division by `x - r`: returns quotient and remainder `p(r)`.
    pub fn deflate(&self, r: C64) -> (Self, C64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), zero());
        }
        let mut q = vec![zero(); n - 1];
        let mut acc = zero();
        for k in (0..n).rev() {
            acc = acc * r + self.coeffs[k];
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        (UnivarPoly::new(q), acc)
    }

    /// Euclidean division `self = q * d + rem`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let d = d.normalized();
        if d.is_zero() {
            return Err(Error::arg("division by the zero polynomial"));
        }
        let dn = d.coeffs.len() - 1;
        let lead = d.coeffs[dn];
        let mut rem = self.normalized().coeffs;
        if rem.len() <= dn {
            return Ok((Self::zero(), UnivarPoly::new(rem)));
        }
        let mut q = vec![zero(); rem.len() - dn];
        for k in (0..q.len()).rev() {
            let c = rem[k + dn] / lead;
            q[k] = c;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
        rem.truncate(dn);
        Ok((UnivarPoly::new(q), UnivarPoly::new(rem)))
    }

    /// All roots with multiplicity, from the eigenvalues of the balanced
    /// companion matrix, followed by a guarded Newton polish.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let p = self.normalized();
        if p.is_zero() {
            return Err(Error::arg("roots of the zero polynomial"));
        }
        let mut lo = 0;
        while p.coeffs[lo] == zero() {
            lo += 1;
        }
        let mut roots = vec![zero(); lo];
        let core = UnivarPoly::new(p.coeffs[lo..].to_vec());
        let d = core.coeffs.len() - 1;
        let found = match d {
            0 => Vec::new(),
            1 => vec![-core.coeffs[0] / core.coeffs[1]],
            2 => quadratic_roots(core.coeffs[2], core.coeffs[1], core.coeffs[0]).to_vec(),
            _ => {
                let lead = core.coeffs[d];
                let mut comp = nalgebra::DMatrix::from_element(d, d, zero());
                for i in 0..d {
                    comp[(i, d - 1)] = -core.coeffs[i] / lead;
                    if i > 0 {
                        comp[(i, i - 1)] = C64::new(1.0, 0.0);
                    }
                }
                linalg::eigenvalues(&comp)
            }
        };
        let dp = core.derivative();
        for r in found {
            roots.push(newton_polish(&core, &dp, r));
        }
        Ok(roots)
    }
}

#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN steps stop the iteration
fn newton_polish(p: &UnivarPoly, dp: &UnivarPoly, mut x: C64) -> C64 {
    let mut fx = p.eval(x).norm();
    for _ in 0..4 {
        let d = dp.eval(x);
        if d.norm() == 0.0 || fx == 0.0 {
            break;
        }
        let y = x - p.eval(x) / d;
        let fy = p.eval(y).norm();
        if !(fy < fx) {
            break;
        }
        x = y;
        fx = fy;
    }
    x
}

/// Roots of `a x^2 + b x + c` without cancellation.
pub fn quadratic_roots(a: C64, b: C64, c: C64) -> [C64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    let s = if (b.conj() * disc).re >= 0.0 { -b - disc } else { -b + disc };
    if s.norm() == 0.0 {
        return [zero(), zero()];
    }
    let r1 = s / (a * 2.0);
    let r2 = c * 2.0 / s;
    [r1, r2]
}

fn add_coeffs(a: &[C64], b: &[C64], sign: f64) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n).map(|k| a.get(k).copied().unwrap_or_else(zero) + b.get(k).copied().unwrap_or_else(zero) * sign).collect()
}

impl Add for &UnivarPoly {
    type Output = UnivarPoly;
    fn add(self, o: &UnivarPoly) -> UnivarPoly {
        UnivarPoly::new(add_coeffs(&self.coeffs, &o.coeffs, 1.0))
    }
}

impl Sub for &UnivarPoly {
    type Output = UnivarPoly;
    fn sub(self, o: &UnivarPoly) -> UnivarPoly {
        UnivarPoly::new(add_coeffs(&self.coeffs, &o.coeffs, -1.0))
    }
}

impl Neg for &UnivarPoly {
    type Output = UnivarPoly;
    fn neg(self) -> UnivarPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &UnivarPoly {
    type Output = UnivarPoly;
    fn mul(self, o: &UnivarPoly) -> UnivarPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return UnivarPoly::zero();
        }
        let mut out = vec![zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivarPoly::new(out)
    }
}

/// Selects one of the two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z1,
    Z2,
}

/// Polynomial in `z1, z2`; `coeffs[i][j]` multiplies `z1^i z2^j`.
///
/// The grid is always `(deg1 + 1) x (deg2 + 1)`; trailing zero rows or
/// columns are allowed until [`BivarPoly::normalized`] strips them.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarPoly {
    pub coeffs: Vec<Vec<C64>>,
    pub deg1: usize,
    pub deg2: usize,
}

impl BivarPoly {
    /// Zero polynomial on a `(deg1 + 1) x (deg2 + 1)` grid.
    pub fn zeros(deg1: usize, deg2: usize) -> Self {
        BivarPoly { coeffs: vec![vec![zero(); deg2 + 1]; deg1 + 1], deg1, deg2 }
    }

    pub fn constant(c: C64) -> Self {
        let mut p = Self::zeros(0, 0);
        p.coeffs[0][0] = c;
        p
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `c * z1^i z2^j`.
    pub fn monomial(i: usize, j: usize, c: C64) -> Self {
        let mut p = Self::zeros(i, j);
        p.coeffs[i][j] = c;
        p
    }

    /// Builds a polynomial from `(i, j, c)` triples; repeated indices add up.
    pub fn from_terms(terms: &[(usize, usize, C64)]) -> Self {
        let d1 = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let d2 = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut p = Self::zeros(d1, d2);
        for &(i, j, c) in terms {
            p.coeffs[i][j] += c;
        }
        p
    }

    /// Builds from a row-major grid; panics on ragged input.
    pub fn from_grid(coeffs: Vec<Vec<C64>>) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient grid");
        let cols = coeffs[0].len();
        assert!(cols > 0 && coeffs.iter().all(|r| r.len() == cols), "ragged coefficient grid");
        BivarPoly { deg1: coeffs.len() - 1, deg2: cols - 1, coeffs }
    }

    /// Polynomial in `z2` only.
    pub fn from_z2(p: &UnivarPoly) -> Self {
        let coeffs = if p.coeffs.is_empty() { vec![zero()] } else { p.coeffs.clone() };
        Self::from_grid(vec![coeffs])
    }

    /// Polynomial in `z1` only.
    pub fn from_z1(p: &UnivarPoly) -> Self {
        let coeffs = if p.coeffs.is_empty() { vec![zero()] } else { p.coeffs.clone() };
        Self::from_grid(coeffs.into_iter().map(|c| vec![c]).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or_else(zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| *c == zero())
    }

    /// Copy with trailing rows/columns below `NORMALIZE_TOL * max` stripped.
    pub fn normalized(&self) -> Self {
        let cut = NORMALIZE_TOL * self.max_abs();
        let mut d1 = self.deg1;
        while d1 > 0 && self.coeffs[d1].iter().all(|c| c.norm() <= cut) {
            d1 -= 1;
        }
        let mut d2 = self.deg2;
        while d2 > 0 && (0..=d1).all(|i| self.coeffs[i][d2].norm() <= cut) {
            d2 -= 1;
        }
        let coeffs = (0..=d1).map(|i| self.coeffs[i][..=d2].to_vec()).collect();
        BivarPoly { coeffs, deg1: d1, deg2: d2 }
    }

    /// Effective degree `(deg_z1, deg_z2)` after normalization.
    pub fn degree(&self) -> (usize, usize) {
        let n = self.normalized();
        (n.deg1, n.deg2)
    }

    /// Copy padded with zeros to a grid of at least `(d1 + 1) x (d2 + 1)`.
    pub fn padded(&self, d1: usize, d2: usize) -> Self {
        let mut p = Self::zeros(d1.max(self.deg1), d2.max(self.deg2));
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                p.coeffs[i][j] = c;
            }
        }
        p
    }

    pub fn eval(&self, z1: C64, z2: C64) -> C64 {
        self.coeffs.iter().rev().fold(zero(), |acc, row| acc * z1 + row.iter().rev().fold(zero(), |a, &c| a * z2 + c))
    }

    /// Fixes the variable `fixed` at `value`, leaving a polynomial in the other.
    pub fn slice(&self, fixed: Var, value: C64) -> UnivarPoly {
        match fixed {
            Var::Z2 => UnivarPoly::new(
                self.coeffs.iter().map(|row| row.iter().rev().fold(zero(), |a, &c| a * value + c)).collect(),
            ),
            Var::Z1 => UnivarPoly::new(
                (0..=self.deg2).map(|j| self.coeffs.iter().rev().fold(zero(), |a, row| a * value + row[j])).collect(),
            ),
        }
    }

    /// Coefficient of `z1^i` as a polynomial in `z2`.
    pub fn z1_coeff(&self, i: usize) -> UnivarPoly {
        match self.coeffs.get(i) {
            Some(row) => UnivarPoly::new(row.clone()),
            None => UnivarPoly::zero(),
        }
    }

    /// Coefficient of `z2^j` as a polynomial in `z1`.
    pub fn z2_coeff(&self, j: usize) -> UnivarPoly {
        if j > self.deg2 {
            return UnivarPoly::zero();
        }
        UnivarPoly::new(self.coeffs.iter().map(|row| row[j]).collect())
    }

    /// `z1^m z2^n conj(p(1/conj z1, 1/conj z2))`.
    pub fn reflect(&self, m: usize, n: usize) -> Result<Self> {
        let p = self.normalized();
        if p.deg1 > m || p.deg2 > n {
            return Err(Error::arg(format!(
                "reflection degrees ({m}, {n}) below polynomial degree ({}, {})",
                p.deg1, p.deg2
            )));
        }
        let p = p.padded(m, n);
        let mut out = Self::zeros(m, n);
        for i in 0..=m {
            for j in 0..=n {
                out.coeffs[i][j] = p.coeffs[m - i][n - j].conj();
            }
        }
        Ok(out)
    }

    /// `(p - p(0, z2)) / z1`.
    pub fn shift_adjoint_1(&self) -> Self {
        if self.deg1 == 0 {
            return Self::zeros(0, self.deg2);
        }
        BivarPoly { coeffs: self.coeffs[1..].to_vec(), deg1: self.deg1 - 1, deg2: self.deg2 }
    }

    /// `(p - p(z1, 0)) / z2`.
    pub fn shift_adjoint_2(&self) -> Self {
        self.transpose().shift_adjoint_1().transpose()
    }

    /// Exchanges the roles of `z1` and `z2`.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.deg2, self.deg1);
        for i in 0..=self.deg1 {
            for j in 0..=self.deg2 {
                out.coeffs[j][i] = self.coeffs[i][j];
            }
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        BivarPoly {
            coeffs: self.coeffs.iter().map(|r| r.iter().map(|&a| a * c).collect()).collect(),
            deg1: self.deg1,
            deg2: self.deg2,
        }
    }

    /// Multiplies by `z1^i z2^j`.
    pub fn shift_up(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zeros(self.deg1 + i, self.deg2 + j);
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                out.coeffs[a + i][b + j] = c;
            }
        }
        out
    }

    fn combine(&self, o: &Self, sign: f64) -> Self {
        let mut out = self.padded(o.deg1, o.deg2);
        for (i, row) in o.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                out.coeffs[i][j] += c * sign;
            }
        }
        out
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, o: &BivarPoly) -> BivarPoly {
        self.combine(o, 1.0)
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, o: &BivarPoly) -> BivarPoly {
        self.combine(o, -1.0)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, o: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zeros(self.deg1 + o.deg1, self.deg2 + o.deg2);
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a == zero() {
                    continue;
                }
                for (k, orow) in o.coeffs.iter().enumerate() {
                    for (l, &b) in orow.iter().enumerate() {
                        out.coeffs[i + k][j + l] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// Sylvester matrix of two univariate polynomials with formal degrees `da`, `db`.
fn sylvester(a: &UnivarPoly, da: usize, b: &UnivarPoly, db: usize) -> nalgebra::DMatrix<C64> {
    let n = da + db;
    let mut s = nalgebra::DMatrix::from_element(n, n, zero());
    for r in 0..db {
        for k in 0..=da {
            s[(r, r + k)] = a.coeff(da - k);
        }
    }
    for r in 0..da {
        for k in 0..=db {
            s[(db + r, r + k)] = b.coeff(db - k);
        }
    }
    s
}

/// Largest normalized modulus of the `z1`-resultant of `p` and `q` over
/// sample points of the unit circle in `z2`.
///
/// Each value is divided by the Hadamard-type bound `|a|^db |b|^da` of the
/// Sylvester determinant so the result is scale free.
fn resultant_profile(p: &BivarPoly, q: &BivarPoly) -> Option<f64> {
    let (p, q) = (p.normalized(), q.normalized());
    let (da, db) = (p.deg1, q.deg1);
    if da + db == 0 {
        return None;
    }
    // degree of the resultant in z2 is at most da*deg2(q) + db*deg2(p)
    let bound = da * q.deg2 + db * p.deg2;
    let nodes = 2 * bound + 8;
    let mut worst: f64 = 0.0;
    for k in 0..nodes {
        // offset of 1/pi keeps nodes away from special points like z2 = 1
        let t = 2.0 * std::f64::consts::PI * (k as f64 + std::f64::consts::FRAC_1_PI) / nodes as f64;
        let z2 = C64::from_polar(1.0, t);
        let a = p.slice(Var::Z2, z2);
        let b = q.slice(Var::Z2, z2);
        let det = linalg::det(&sylvester(&a, da, &b, db)).norm();
        let na = a.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let nb = b.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let scale = na.powi(db as i32) * nb.powi(da as i32);
        if scale > 0.0 {
            worst = worst.max(det / scale);
        }
    }
    Some(worst)
}

/// Detects a nontrivial common factor of `p` and `q`.
///
/// A common factor depending on `z1` makes the `z1`-resultant vanish
/// identically; one depending only on `z2` is caught by the `z2`-resultant.
/// A profile below `tol` on every node counts as identically zero.
pub fn common_factor_test(p: &BivarPoly, q: &BivarPoly, tol: f64) -> bool {
    let r1 = resultant_profile(p, q);
    let r2 = resultant_profile(&p.transpose(), &q.transpose());
    let vanish = |r: Option<f64>| matches!(r, Some(v) if v < tol);
    vanish(r1) || vanish(r2)
}

/// Univariate coprimality check by root matching: true when some root of
/// `b` is also a root of `a` within `tol` (relative residual).
pub fn univar_share_root(a: &UnivarPoly, b: &UnivarPoly, tol: f64) -> bool {
    let (a, b) = (a.normalized(), b.normalized());
    if a.is_zero() || b.is_zero() {
        return true;
    }
    let Ok(roots) = b.roots() else { return false };
    let scale = a.max_abs();
    roots.iter().any(|&r| {
        let w: f64 = (0..a.coeffs.len()).map(|k| r.norm().powi(k as i32)).sum();
        a.eval(r).norm() <= tol * scale * w
    })
}
