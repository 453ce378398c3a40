//! Matrix-valued symbols of compressed shifts.

use nalgebra::DMatrix;

use crate::agler::FactorDecomposition;
use crate::linalg;
use crate::poly::{BivarPoly, UnivarPoly};
use crate::rational::RationalScalar;
use crate::rif::{BlaschkeProduct, Rif};
use crate::{Error, Result, C64};

/// Which boundary variable the symbol variable `u` conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolVar {
    /// `u = conj(z2)`, symbols of the shift in `z1`.
    ConjZ2,
    /// `u = conj(z1)`, symbols of the shift in `z2`.
    ConjZ1,
}

impl SymbolVar {
    pub fn flipped(self) -> Self {
        match self {
            SymbolVar::ConjZ2 => SymbolVar::ConjZ1,
            SymbolVar::ConjZ1 => SymbolVar::ConjZ2,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SymbolVar::ConjZ2 => "conj_z2",
            SymbolVar::ConjZ1 => "conj_z1",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "conj_z2" => Some(SymbolVar::ConjZ2),
            "conj_z1" => Some(SymbolVar::ConjZ1),
            _ => None,
        }
    }
}

/// Square matrix of rational functions of `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSymbol {
    pub entries: Vec<Vec<RationalScalar>>,
    pub basis_labels: Vec<String>,
    pub variable: SymbolVar,
}

impl MatrixSymbol {
    pub fn new(entries: Vec<Vec<RationalScalar>>, basis_labels: Vec<String>, variable: SymbolVar) -> Result<Self> {
        let m = entries.len();
        if entries.iter().any(|r| r.len() != m) {
            return Err(Error::arg("symbol entries must form a square grid"));
        }
        if basis_labels.len() != m {
            return Err(Error::arg("one basis label per row is required"));
        }
        Ok(MatrixSymbol { entries, basis_labels, variable })
    }

    /// Symbol that does not depend on `u`.
    pub fn constant(a: &DMatrix<C64>, variable: SymbolVar) -> Self {
        let m = a.nrows();
        let entries = (0..m).map(|i| (0..m).map(|j| RationalScalar::constant(a[(i, j)])).collect()).collect();
        let basis_labels = (0..m).map(|i| format!("e{}", i + 1)).collect();
        MatrixSymbol { entries, basis_labels, variable }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Entrywise value at a point `u` of the closed disk.
    pub fn eval_u(&self, u: C64) -> DMatrix<C64> {
        let m = self.dim();
        DMatrix::from_fn(m, m, |i, j| self.entries[i][j].eval(u))
    }

    /// Value on the boundary at `tau`, i.e. at `u = conj(tau)`.
    pub fn eval(&self, tau: C64) -> DMatrix<C64> {
        self.eval_u(tau.conj())
    }

    /// Same entries read as a function of the other variable.
    pub fn swap_variables(&self) -> Self {
        MatrixSymbol { variable: self.variable.flipped(), ..self.clone() }
    }

    /// Smallest pole modulus over all entries.
    pub fn pole_modulus(&self) -> f64 {
        self.entries.iter().flatten().map(|e| e.pole_modulus()).fold(f64::INFINITY, f64::min)
    }
}

/// Entrywise evaluation at `u = conj(tau)`.
pub fn eval_symbol(m: &MatrixSymbol, tau: C64) -> DMatrix<C64> {
    m.eval(tau)
}

/// Eigenvalues of the symbol at `tau`, with multiplicity.
pub fn symbol_eigenvalues(m: &MatrixSymbol, tau: C64) -> Vec<C64> {
    linalg::eigenvalues(&m.eval(tau))
}

/// The RIF with `z1` and `z2` exchanged; its first symbol is the second symbol of `theta`.
pub fn swap_variables(theta: &Rif) -> Rif {
    theta.swap_variables()
}

/// Upper-triangular compressed-shift matrix of a one-variable Blaschke product.
pub fn takenaka_matrix(b: &BlaschkeProduct) -> DMatrix<C64> {
    let a = &b.zeros;
    let m = a.len();
    let rad: Vec<f64> = a.iter().map(|z| (1.0 - z.norm_sqr()).sqrt()).collect();
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            a[i]
        } else if j > i {
            let prod: C64 = a[i + 1..j].iter().map(|z| -z.conj()).product();
            prod * rad[i] * rad[j]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Block lower-triangular symbol of a product of factors.
///
/// `which = 1` assembles the symbol of the shift in `z1` from each factor's
/// `basis2`, `g2` and `symbol1`; `which = 2` does the same after exchanging
/// the variables.
pub fn assemble_product_symbol(factors: &[FactorDecomposition], which: u8) -> Result<MatrixSymbol> {
    match which {
        1 => assemble_first(factors),
        2 => {
            let swapped: Vec<FactorDecomposition> = factors.iter().map(|f| f.swapped()).collect();
            Ok(assemble_first(&swapped)?.swap_variables())
        }
        _ => Err(Error::arg("which must be 1 or 2")),
    }
}

fn assemble_first(factors: &[FactorDecomposition]) -> Result<MatrixSymbol> {
    if factors.is_empty() {
        return Err(Error::arg("no factors"));
    }
    if let Some(k) = factors.iter().position(|f| f.basis2.is_empty()) {
        return Err(Error::arg(format!("factor {} has no basis for the z1 shift", k + 1)));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.basis2.len()).collect();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut entries = vec![vec![RationalScalar::zero(); total]; total];
    // conj(theta_l(0, z2)) in u form
    let theta0: Vec<RationalScalar> = factors
        .iter()
        .map(|f| {
            let (n, d) = f.rif.at_z1_zero();
            RationalScalar::new(n, d).conj_coeffs().reduced()
        })
        .collect();
    // conj(f_i(0, z2)) for each factor's own basis
    let f0: Vec<Vec<RationalScalar>> = factors
        .iter()
        .map(|f| {
            f.basis2
                .iter()
                .map(|b| RationalScalar::new(b.numerator.z1_coeff(0), b.denominator.z1_coeff(0)).conj_coeffs())
                .collect()
        })
        .collect();
    for (s, fs) in factors.iter().enumerate() {
        for i in 0..sizes[s] {
            for j in 0..sizes[s] {
                entries[offsets[s] + i][offsets[s] + j] = fs.symbol1.entries[i][j].clone();
            }
        }
        for t in 0..s {
            let mut pre = RationalScalar::one();
            for th in &theta0[t + 1..s] {
                pre = (&pre * th).reduced();
            }
            for i in 0..sizes[s] {
                for j in 0..sizes[t] {
                    let g = factors[t].g2[j].conj_coeffs();
                    let e = &(&pre * &f0[s][i]) * &g;
                    entries[offsets[s] + i][offsets[t] + j] = e.reduced();
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(total);
    for (t, f) in factors.iter().enumerate() {
        for b in &f.basis2 {
            labels.push(if factors.len() == 1 { b.label.clone() } else { format!("factor{}:{}", t + 1, b.label) });
        }
    }
    MatrixSymbol::new(entries, labels, SymbolVar::ConjZ2)
}

/// Rational solution `x(z2)` of `A(z2) x = rhs(z2) / d(z2)` by Cramer's rule,
/// where column `j` of `A` holds the `z1` coefficients of `cols[j]`.
fn cramer_z1(cols: &[BivarPoly], rhs: &[BivarPoly], d: &UnivarPoly) -> Result<Vec<Vec<RationalScalar>>> {
    let m = cols.len();
    if cols.iter().any(|q| q.normalized().deg1 >= m.max(1)) {
        return Err(Error::arg("basis numerators must have z1-degree below the basis size"));
    }
    let a: Vec<Vec<UnivarPoly>> = (0..m).map(|k| cols.iter().map(|q| q.z1_coeff(k)).collect()).collect();
    let det_a = linalg::poly_det(&a);
    if det_a.is_zero() {
        return Err(Error::DegenerateBasis);
    }
    let den = &det_a * d;
    let mut out = Vec::with_capacity(rhs.len());
    for r in rhs {
        if r.normalized().deg1 >= m.max(1) && !r.normalized().is_zero() {
            return Err(Error::Consistency("right-hand side exceeds the basis z1-degree".into()));
        }
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let mut aj = a.clone();
            for (k, ak) in aj.iter_mut().enumerate() {
                ak[j] = r.z1_coeff(k);
            }
            row.push(RationalScalar::new(linalg::poly_det(&aj), den.clone()).reduced());
        }
        out.push(row);
    }
    Ok(out)
}

/// `(q p(0, z2) - q(0, z2) p) / z1`, numerator of `S*_{z1}(q / p)` over `p p(0, z2)`.
fn shifted_numerator(q: &BivarPoly, p: &BivarPoly) -> BivarPoly {
    let p0 = BivarPoly::from_z2(&p.z1_coeff(0));
    let q0 = BivarPoly::from_z2(&q.z1_coeff(0));
    (&(q * &p0) - &(&q0 * p)).shift_adjoint_1()
}

/// Coefficients `h[i][j](z2)` with `S*_{z1}(q_i / p) = sum_j h[i][j] q_j / p`.
pub fn shift_coefficients(p: &BivarPoly, nums: &[BivarPoly]) -> Result<Vec<Vec<RationalScalar>>> {
    let rhs: Vec<BivarPoly> = nums.iter().map(|q| shifted_numerator(q, p)).collect();
    cramer_z1(nums, &rhs, &p.z1_coeff(0))
}

/// Coefficients `g[j](z2)` with `S*_{z1} theta = sum_j g[j] q_j / p`.
pub fn theta_coefficients(theta: &Rif, nums: &[BivarPoly]) -> Result<Vec<RationalScalar>> {
    let rhs = shifted_numerator(&theta.p_tilde.scale(theta.lambda), &theta.p);
    let mut g = cramer_z1(nums, &[rhs], &theta.p.z1_coeff(0))?;
    Ok(g.remove(0))
}

/// Symbol of the shift in `z1` for the basis `{q_j / p}` of the `z2`-wandering
/// subspace: `M[i][j] = conj(h[i][j])`.
pub fn symbol_from_basis(p: &BivarPoly, nums: &[BivarPoly], labels: Vec<String>) -> Result<MatrixSymbol> {
    let h = shift_coefficients(p, nums)?;
    let entries = h.iter().map(|row| row.iter().map(|e| e.conj_coeffs()).collect()).collect();
    MatrixSymbol::new(entries, labels, SymbolVar::ConjZ2)
}

/// Largest deviation of `S*_{z1}(q_i/p) - sum_j h_ij q_j/p` over sample points.
pub fn shift_residual(p: &BivarPoly, nums: &[BivarPoly], h: &[Vec<RationalScalar>], samples: &[(C64, C64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for &(z1, z2) in samples {
        let pv = p.eval(z1, z2);
        let p0 = p.eval(C64::new(0.0, 0.0), z2);
        for (i, q) in nums.iter().enumerate() {
            let f = q.eval(z1, z2) / pv;
            let f0 = q.eval(C64::new(0.0, 0.0), z2) / p0;
            let lhs = (f - f0) / z1;
            let rhs: C64 = nums.iter().enumerate().map(|(j, qj)| h[i][j].eval(z2) * qj.eval(z1, z2) / pv).sum();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}
