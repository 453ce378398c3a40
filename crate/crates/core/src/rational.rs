//! One-variable rational functions and matrices of them.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::poly::UnivarPoly;
use crate::{Error, Result, C64};

/// Tolerance for cancelling a shared root of numerator and denominator.
pub const CANCEL_TOL: f64 = 1e-9;

/// Ratio `num / den` of univariate polynomials.
///
/// Symbols store functions of the conjugated boundary variable `u`;
/// [`RationalMatrix`] entries store analytic functions of `z2`. The type is
/// the same, only the reading of the variable differs.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalScalar {
    pub num: UnivarPoly,
    pub den: UnivarPoly,
}

impl RationalScalar {
    pub fn new(num: UnivarPoly, den: UnivarPoly) -> Self {
        RationalScalar { num, den }
    }

    pub fn poly(num: UnivarPoly) -> Self {
        RationalScalar { num, den: UnivarPoly::one() }
    }

    pub fn constant(c: C64) -> Self {
        Self::poly(UnivarPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::constant(C64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn is_zero(&self) -> bool {
        self.num.normalized().is_zero()
    }

    /// Conjugates every coefficient: `conj(h(z))` read as a function of `u = conj(z)`.
    pub fn conj_coeffs(&self) -> Self {
        RationalScalar { num: self.num.conj_coeffs(), den: self.den.conj_coeffs() }
    }

    pub fn scale(&self, c: C64) -> Self {
        RationalScalar { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Inverse; errors on the zero function.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::arg("reciprocal of the zero rational function"));
        }
        Ok(RationalScalar { num: self.den.clone(), den: self.num.clone() })
    }

    /// Cancels shared roots with [`CANCEL_TOL`] and rescales so the largest
    /// denominator coefficient has modulus one.
    pub fn reduced(&self) -> Self {
        self.reduced_with(CANCEL_TOL)
    }

    /// Cancels roots of the denominator at which the numerator vanishes to
    /// relative tolerance `tol`, by synthetic division of both.
    pub fn reduced_with(&self, tol: f64) -> Self {
        let mut num = self.num.normalized();
        let mut den = self.den.normalized();
        if num.is_zero() {
            return RationalScalar { num: UnivarPoly::zero(), den: UnivarPoly::one() };
        }
        if den.is_zero() {
            return RationalScalar { num, den };
        }
        let roots = den.roots().unwrap_or_default();
        for r in roots {
            if num.coeffs.len() <= 1 || den.coeffs.len() <= 1 {
                break;
            }
            let w: f64 = (0..num.coeffs.len()).map(|k| r.norm().powi(k as i32)).sum();
            if num.eval(r).norm() <= tol * num.max_abs() * w {
                let (qn, _) = num.deflate(r);
                let (qd, _) = den.deflate(r);
                num = qn.normalized();
                den = qd.normalized();
            }
        }
        let s = den.max_abs();
        if s > 0.0 {
            let inv = C64::new(1.0 / s, 0.0);
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RationalScalar { num, den }
    }

    /// Smallest modulus of a denominator root, `INFINITY` for polynomials.
    pub fn pole_modulus(&self) -> f64 {
        let den = self.den.normalized();
        match den.roots() {
            Ok(r) => r.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min),
            Err(_) => 0.0,
        }
    }
}

impl Add for &RationalScalar {
    type Output = RationalScalar;
    fn add(self, o: &RationalScalar) -> RationalScalar {
        if self.den == o.den {
            return RationalScalar::new(&self.num + &o.num, self.den.clone());
        }
        RationalScalar::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RationalScalar {
    type Output = RationalScalar;
    fn sub(self, o: &RationalScalar) -> RationalScalar {
        self + &(-o)
    }
}

impl Neg for &RationalScalar {
    type Output = RationalScalar;
    fn neg(self) -> RationalScalar {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &RationalScalar {
    type Output = RationalScalar;
    fn mul(self, o: &RationalScalar) -> RationalScalar {
        RationalScalar::new(&self.num * &o.num, &self.den * &o.den)
    }
}

/// Square matrix of rational functions of the analytic variable `z2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    pub entries: Vec<Vec<RationalScalar>>,
}

impl RationalMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn identity(m: usize) -> Self {
        let entries = (0..m)
            .map(|i| (0..m).map(|j| if i == j { RationalScalar::one() } else { RationalScalar::zero() }).collect())
            .collect();
        RationalMatrix { entries }
    }

    pub fn eval(&self, z: C64) -> DMatrix<C64> {
        let m = self.dim();
        DMatrix::from_fn(m, m, |i, j| self.entries[i][j].eval(z))
    }
}
