//! Agler decomposition data for small-degree factors and their products.

use crate::poly::{BivarPoly, UnivarPoly};
use crate::rational::RationalScalar;
use crate::rif::{make_rif, Rif};
use crate::symbol::{self, MatrixSymbol, SymbolVar};
use crate::{c64, Error, Result, C64};

/// Which of the two orthogonal decompositions of a degree-(1,1) factor to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Branch {
    /// `basis1 = {r- / p}`, `basis2 = {q+ / p}`.
    #[default]
    MinusPlus,
    /// `basis1 = {r+ / p}`, `basis2 = {q- / p}`.
    PlusMinus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::MinusPlus => "minusplus",
            Branch::PlusMinus => "plusminus",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "minusplus" => Some(Branch::MinusPlus),
            "plusminus" => Some(Branch::PlusMinus),
            _ => None,
        }
    }
}

/// A rational basis function `numerator / denominator`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub numerator: BivarPoly,
    pub denominator: BivarPoly,
    pub label: String,
}

impl BasisElement {
    pub fn eval(&self, z1: C64, z2: C64) -> C64 {
        self.numerator.eval(z1, z2) / self.denominator.eval(z1, z2)
    }

    fn transpose(&self) -> Self {
        BasisElement {
            numerator: self.numerator.transpose(),
            denominator: self.denominator.transpose(),
            label: self.label.clone(),
        }
    }
}

/// Decomposition data of one factor: orthonormal bases of the two wandering
/// subspaces, the expansions of the backward shifts of `theta`, and symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorDecomposition {
    pub rif: Rif,
    /// Basis of the part seen by the shift in `z1` (size `m`).
    pub basis2: Vec<BasisElement>,
    /// Basis of the part seen by the shift in `z2` (size `n`).
    pub basis1: Vec<BasisElement>,
    /// `S*_{z1} theta = sum_j g2[j](z2) basis2[j]`.
    pub g2: Vec<RationalScalar>,
    /// `S*_{z2} theta = sum_i g1[i](z1) basis1[i]`.
    pub g1: Vec<RationalScalar>,
    pub symbol1: MatrixSymbol,
    pub symbol2: MatrixSymbol,
}

impl FactorDecomposition {
    /// The same data with `z1` and `z2` exchanged.
    pub fn swapped(&self) -> Self {
        FactorDecomposition {
            rif: self.rif.swap_variables(),
            basis2: self.basis1.iter().map(|b| b.transpose()).collect(),
            basis1: self.basis2.iter().map(|b| b.transpose()).collect(),
            g2: self.g1.clone(),
            g1: self.g2.clone(),
            symbol1: self.symbol2.swap_variables(),
            symbol2: self.symbol1.swap_variables(),
        }
    }

    /// Builds the decomposition from user-supplied basis numerators over `p`,
    /// solving for symbols and expansion coefficients by Cramer's rule.
    pub fn from_bases(rif: Rif, basis2: Vec<BivarPoly>, basis1: Vec<BivarPoly>) -> Result<Self> {
        if basis2.len() != rif.m || basis1.len() != rif.n {
            return Err(Error::arg(format!(
                "basis sizes ({}, {}) do not match degrees ({}, {})",
                basis2.len(),
                basis1.len(),
                rif.m,
                rif.n
            )));
        }
        let elems = |nums: &[BivarPoly], den: &BivarPoly, tag: &str| -> Vec<BasisElement> {
            nums.iter()
                .enumerate()
                .map(|(k, q)| BasisElement {
                    numerator: q.clone(),
                    denominator: den.clone(),
                    label: format!("{tag}{}", k + 1),
                })
                .collect()
        };
        let (symbol1, g2) = solve_side(&rif, &basis2, "q")?;
        let swapped = rif.swap_variables();
        let t1: Vec<BivarPoly> = basis1.iter().map(|r| r.transpose()).collect();
        let (s2, g1) = solve_side(&swapped, &t1, "r")?;
        Ok(FactorDecomposition {
            basis2: elems(&basis2, &rif.p, "q"),
            basis1: elems(&basis1, &rif.p, "r"),
            rif,
            g2,
            g1,
            symbol1,
            symbol2: s2.swap_variables(),
        })
    }
}

fn solve_side(rif: &Rif, nums: &[BivarPoly], tag: &str) -> Result<(MatrixSymbol, Vec<RationalScalar>)> {
    let labels: Vec<String> = (0..nums.len()).map(|k| format!("{tag}{}", k + 1)).collect();
    if nums.is_empty() {
        return Ok((MatrixSymbol::new(Vec::new(), Vec::new(), SymbolVar::ConjZ2)?, Vec::new()));
    }
    let sym = symbol::symbol_from_basis(&rif.p, nums, labels)?;
    let g = symbol::theta_coefficients(rif, nums)?;
    Ok((sym, g))
}

fn one() -> C64 {
    c64(1.0, 0.0)
}

fn empty_symbol(var: SymbolVar) -> MatrixSymbol {
    MatrixSymbol { entries: Vec::new(), basis_labels: Vec::new(), variable: var }
}

/// Decomposition of `lambda (z1 - a) / (1 - conj(a) z1)`.
pub fn decompose_deg10(a: C64, lambda: C64) -> Result<FactorDecomposition> {
    if a.norm() >= 1.0 {
        return Err(Error::arg(format!("|a| = {} is not below 1", a.norm())));
    }
    let p = BivarPoly::from_terms(&[(0, 0, one()), (1, 0, -a.conj())]);
    let rif = make_rif(p.clone(), 1, 0, lambda)?;
    let rad = (1.0 - a.norm_sqr()).sqrt();
    let basis2 =
        vec![BasisElement { numerator: BivarPoly::constant(c64(rad, 0.0)), denominator: p, label: "k_a".into() }];
    Ok(FactorDecomposition {
        rif,
        basis2,
        basis1: Vec::new(),
        g2: vec![RationalScalar::constant(lambda * rad)],
        g1: Vec::new(),
        symbol1: MatrixSymbol::new(vec![vec![RationalScalar::constant(a)]], vec!["k_a".into()], SymbolVar::ConjZ2)?,
        symbol2: empty_symbol(SymbolVar::ConjZ1),
    })
}

/// Decomposition of `lambda (z2 - a) / (1 - conj(a) z2)`.
pub fn decompose_deg01(a: C64, lambda: C64) -> Result<FactorDecomposition> {
    Ok(decompose_deg10(a, lambda)?.swapped())
}

/// Closed-form quantities of a degree-(1,1) denominator `b + c z1 + d z2 + e z1 z2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Deg11Data {
    pub a1: f64,
    pub a2: f64,
    pub gamma1: C64,
    pub gamma2: C64,
    pub zeta1: C64,
    pub zeta2: C64,
    pub b: f64,
    pub q_plus: BivarPoly,
    pub q_minus: BivarPoly,
    pub r_plus: BivarPoly,
    pub r_minus: BivarPoly,
}

fn clamped_sqrt(x: f64, scale: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x > -1e-12 * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("negative radicand {x}")))
    }
}

fn unit_or_one(z: C64) -> C64 {
    if z.norm() == 0.0 {
        one()
    } else {
        z / z.norm()
    }
}

impl Deg11Data {
    pub fn new(b: C64, c: C64, d: C64, e: C64) -> Result<Self> {
        let be = b.norm_sqr() - e.norm_sqr();
        let cd = c.norm_sqr() - d.norm_sqr();
        let a1 = be + cd;
        let a2 = be - cd;
        let gamma1 = b.conj() * c - d.conj() * e;
        let gamma2 = b.conj() * d - c.conj() * e;
        let zeta1 = unit_or_one(gamma1);
        let zeta2 = unit_or_one(gamma2);
        let scale = a1 * a1 + a2 * a2;
        let bb = clamped_sqrt(a1 * a1 - 4.0 * gamma1.norm_sqr(), scale)?;
        let lin = |a: f64, zeta: C64, sign: f64, var1: bool| -> Result<BivarPoly> {
            let c0 = clamped_sqrt((a + sign * bb) / 2.0, scale)?;
            let c1 = clamped_sqrt((a - sign * bb) / 2.0, scale)?;
            let (i, j) = if var1 { (1, 0) } else { (0, 1) };
            Ok(BivarPoly::from_terms(&[(0, 0, c64(c0, 0.0)), (i, j, zeta * c1)]))
        };
        Ok(Deg11Data {
            a1,
            a2,
            gamma1,
            gamma2,
            zeta1,
            zeta2,
            b: bb,
            q_plus: lin(a2, zeta2, 1.0, false)?,
            q_minus: lin(a2, zeta2, -1.0, false)?,
            r_plus: lin(a1, zeta1, 1.0, true)?,
            r_minus: lin(a1, zeta1, -1.0, true)?,
        })
    }
}

/// Decomposition of the degree-(1,1) RIF with denominator
/// `b + c z1 + d z2 + e z1 z2` on the chosen branch.
pub fn decompose_deg11(
    b: C64,
    c: C64,
    d: C64,
    e: C64,
    lambda: C64,
    branch: Branch,
) -> Result<(Deg11Data, FactorDecomposition)> {
    let p = BivarPoly::from_terms(&[(0, 0, b), (1, 0, c), (0, 1, d), (1, 1, e)]);
    let rif = make_rif(p.clone(), 1, 1, lambda)?;
    let data = Deg11Data::new(b, c, d, e)?;
    let (q_basis, q_other, r_basis, r_other) = match branch {
        Branch::MinusPlus => (&data.q_plus, &data.q_minus, &data.r_minus, &data.r_plus),
        Branch::PlusMinus => (&data.q_minus, &data.q_plus, &data.r_plus, &data.r_minus),
    };
    let (qs, rs) = match branch {
        Branch::MinusPlus => ("q+", "r-"),
        Branch::PlusMinus => ("q-", "r+"),
    };
    // g2 = lambda conj(zeta2) q_other(z2) / p(0, z2)
    let g2 = RationalScalar::new(q_other.z1_coeff(0).scale(lambda * data.zeta2.conj()), p.z1_coeff(0)).reduced();
    // g1 = lambda conj(zeta1) r_other(z1) / p(z1, 0)
    let g1 = RationalScalar::new(r_other.z2_coeff(0).scale(lambda * data.zeta1.conj()), p.z2_coeff(0)).reduced();
    let symbol1 =
        RationalScalar::new(UnivarPoly::new(vec![-c.conj(), -e.conj()]), UnivarPoly::new(vec![b.conj(), d.conj()]))
            .reduced();
    let symbol2 =
        RationalScalar::new(UnivarPoly::new(vec![-d.conj(), -e.conj()]), UnivarPoly::new(vec![b.conj(), c.conj()]))
            .reduced();
    let fd = FactorDecomposition {
        basis2: vec![BasisElement { numerator: q_basis.clone(), denominator: p.clone(), label: qs.into() }],
        basis1: vec![BasisElement { numerator: r_basis.clone(), denominator: p, label: rs.into() }],
        rif,
        g2: vec![g2],
        g1: vec![g1],
        symbol1: MatrixSymbol::new(vec![vec![symbol1]], vec![qs.into()], SymbolVar::ConjZ2)?,
        symbol2: MatrixSymbol::new(vec![vec![symbol2]], vec![rs.into()], SymbolVar::ConjZ1)?,
    };
    Ok((data, fd))
}

/// Picks the closed-form decomposition matching the degrees of `rif`.
pub fn decompose(rif: &Rif, branch: Branch) -> Result<FactorDecomposition> {
    let p = rif.p.normalized();
    match (rif.m, rif.n) {
        (1, 0) | (0, 1) => {
            let q = if rif.m == 1 { p.clone() } else { p.transpose() };
            let (b, c) = (q.get(0, 0), q.get(1, 0));
            // lambda (conj(b) z + conj(c)) / (b + c z) = lambda' (z - a) / (1 - conj(a) z)
            let a = -(c / b).conj();
            let lam = rif.lambda * b.conj() / b;
            let lam = lam / lam.norm();
            if rif.m == 1 {
                decompose_deg10(a, lam)
            } else {
                decompose_deg01(a, lam)
            }
        }
        (1, 1) => Ok(decompose_deg11(p.get(0, 0), p.get(1, 0), p.get(0, 1), p.get(1, 1), rif.lambda, branch)?.1),
        (m, n) => Err(Error::arg(format!("degree ({m}, {n}) needs a user-supplied basis"))),
    }
}

/// Symbol of the shift in `z1` for an RIF with `m = 1`, as a function of `u = conj(z2)`.
pub fn scalar_symbol(theta: &Rif) -> Result<RationalScalar> {
    if theta.m != 1 {
        return Err(Error::arg(format!("scalar symbol needs z1-degree 1, got {}", theta.m)));
    }
    let num = -&theta.p.z1_coeff(1);
    let den = theta.p.z1_coeff(0);
    Ok(RationalScalar::new(num, den).conj_coeffs().reduced())
}

/// Basis numerators over the common denominator `P = prod p_t` for a product.
///
/// `which = 1` uses each factor's `basis2`, `which = 2` its `basis1`.
/// With `strict`, a factor without basis elements on the requested side is
/// an error; otherwise it contributes nothing.
pub fn product_numerators(
    factors: &[FactorDecomposition],
    which: u8,
    strict: bool,
) -> Result<(BivarPoly, Vec<BasisElement>)> {
    if which != 1 && which != 2 {
        return Err(Error::arg("which must be 1 or 2"));
    }
    let mut total = BivarPoly::one();
    for f in factors {
        total = &total * &f.rif.p;
    }
    let mut out = Vec::new();
    let mut prefix = BivarPoly::one();
    for (t, f) in factors.iter().enumerate() {
        let basis = if which == 1 { &f.basis2 } else { &f.basis1 };
        if basis.is_empty() && strict {
            return Err(Error::arg(format!("factor {} has an empty basis on side {which}", t + 1)));
        }
        let mut rest = BivarPoly::one();
        for g in &factors[t + 1..] {
            rest = &rest * &g.rif.p;
        }
        for b in basis {
            // element numerators share the factor denominator p_t by construction
            let num = &(&prefix * &b.numerator) * &rest;
            let label = if factors.len() == 1 { b.label.clone() } else { format!("factor{}:{}", t + 1, b.label) };
            out.push(BasisElement { numerator: num, denominator: total.clone(), label });
        }
        prefix = &prefix * &f.rif.p_tilde.scale(f.rif.lambda);
    }
    Ok((total, out))
}

/// Ordered product basis with per-factor denominators `prod_{k <= t} p_k`.
pub fn product_basis(factors: &[FactorDecomposition], which: u8) -> Result<Vec<BasisElement>> {
    if which != 1 && which != 2 {
        return Err(Error::arg("which must be 1 or 2"));
    }
    let mut out = Vec::new();
    let mut prefix = BivarPoly::one();
    let mut den = BivarPoly::one();
    for (t, f) in factors.iter().enumerate() {
        let basis = if which == 1 { &f.basis2 } else { &f.basis1 };
        if basis.is_empty() {
            return Err(Error::arg(format!("factor {} has an empty basis on side {which}", t + 1)));
        }
        den = &den * &f.rif.p;
        for b in basis {
            let label = if factors.len() == 1 { b.label.clone() } else { format!("factor{}:{}", t + 1, b.label) };
            out.push(BasisElement { numerator: &prefix * &b.numerator, denominator: den.clone(), label });
        }
        prefix = &prefix * &f.rif.p_tilde.scale(f.rif.lambda);
    }
    Ok(out)
}

/// Largest relative Agler-identity residual
/// `|p|^2 - |p~|^2 - (1-|z1|^2) sum |q|^2 - (1-|z2|^2) sum |r|^2`
/// over the given points, for the product of `factors`.
pub fn agler_residual(factors: &[FactorDecomposition], points: &[(C64, C64)]) -> Result<f64> {
    let (p, q) = product_numerators(factors, 1, false)?;
    let (_, r) = product_numerators(factors, 2, false)?;
    let theta = Rif::product(&factors.iter().map(|f| f.rif.clone()).collect::<Vec<_>>())?;
    let mut worst: f64 = 0.0;
    for &(z1, z2) in points {
        let pv = p.eval(z1, z2).norm_sqr();
        let pt = theta.p_tilde.eval(z1, z2).norm_sqr();
        let sq: f64 = q.iter().map(|e| e.numerator.eval(z1, z2).norm_sqr()).sum();
        let sr: f64 = r.iter().map(|e| e.numerator.eval(z1, z2).norm_sqr()).sum();
        let res = pv - pt - (1.0 - z1.norm_sqr()) * sq - (1.0 - z2.norm_sqr()) * sr;
        let scale = p.max_abs().powi(2).max(1e-300);
        worst = worst.max(res.abs() / scale);
    }
    Ok(worst)
}
