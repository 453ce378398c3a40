//! Block Toeplitz finite sections of rational matrix functions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rustfft::FftPlanner;

use crate::rational::RationalMatrix;
use crate::symbol::MatrixSymbol;
use crate::C64;

/// Quadrature points used for Taylor coefficients.
pub const QUADRATURE_POINTS: usize = 4096;

/// Taylor coefficients `F_0, F_1, ...` of a matrix function analytic on the
/// closed disk, by the trapezoid rule on `points` boundary samples.
///
/// Coefficients are kept up to the last index whose largest entry exceeds
/// `1e-16` times the overall largest; `tail` reports the largest entry in
/// the upper half of the spectrum as a check of geometric decay.
#[derive(Clone, Debug)]
pub struct TaylorCoefficients {
    pub coeffs: Vec<DMatrix<C64>>,
    pub tail: f64,
}

pub fn taylor_coefficients(f: impl Fn(C64) -> DMatrix<C64>, m: usize, points: usize) -> TaylorCoefficients {
    let samples: Vec<DMatrix<C64>> =
        (0..points).map(|k| f(C64::from_polar(1.0, 2.0 * PI * k as f64 / points as f64))).collect();
    let fft = FftPlanner::new().plan_fft_forward(points);
    let mut spectra = vec![vec![C64::new(0.0, 0.0); points]; m * m];
    for i in 0..m {
        for j in 0..m {
            let buf = &mut spectra[i * m + j];
            for (k, s) in samples.iter().enumerate() {
                buf[k] = s[(i, j)] / points as f64;
            }
            fft.process(buf);
        }
    }
    let size = |n: usize| (0..m * m).map(|e| spectra[e][n].norm()).fold(0.0, f64::max);
    let half = points / 2;
    let overall = (0..half).map(size).fold(0.0, f64::max);
    let tail = (half..points).map(size).fold(0.0, f64::max);
    let mut last = 0;
    for n in 0..half {
        if size(n) > 1e-16 * overall {
            last = n;
        }
    }
    let coeffs = (0..=last).map(|n| DMatrix::from_fn(m, m, |i, j| spectra[i * m + j][n])).collect();
    TaylorCoefficients { coeffs, tail }
}

/// Coefficients of the symbol as a function of `u`; the Toeplitz matrix of
/// the boundary function `tau -> M(conj tau)` has block `(i, j) = F_{j-i}`.
pub fn symbol_coefficients(sym: &MatrixSymbol) -> TaylorCoefficients {
    taylor_coefficients(|u| sym.eval_u(u), sym.dim(), QUADRATURE_POINTS)
}

/// Coefficients of an analytic matrix function of `z2`; its Toeplitz matrix
/// has block `(i, j) = U_{i-j}`.
pub fn analytic_coefficients(u: &RationalMatrix) -> TaylorCoefficients {
    taylor_coefficients(|z| u.eval(z), u.dim(), QUADRATURE_POINTS)
}

/// `N x N` block section from Taylor coefficients: block upper triangular
/// (`F_{j-i}`) for co-analytic symbols, lower (`F_{i-j}`) for analytic ones.
pub fn block_section(coeffs: &[DMatrix<C64>], blocks: usize, upper: bool) -> DMatrix<C64> {
    let m = coeffs.first().map(|c| c.nrows()).unwrap_or(0);
    let mut t = DMatrix::from_element(m * blocks, m * blocks, C64::new(0.0, 0.0));
    for i in 0..blocks {
        for j in 0..blocks {
            let k = if upper { j.checked_sub(i) } else { i.checked_sub(j) };
            if let Some(c) = k.and_then(|k| coeffs.get(k)) {
                t.view_mut((i * m, j * m), (m, m)).copy_from(c);
            }
        }
    }
    t
}

/// Section of the Toeplitz operator of a symbol.
pub fn symbol_section(sym: &MatrixSymbol, blocks: usize) -> DMatrix<C64> {
    block_section(&symbol_coefficients(sym).coeffs, blocks, true)
}
