//! Hardy-space inner products of rational functions on the bidisk.
//!
//! For `f = a / s` and `g = b / s` analytic on the closed bidisk except at
//! finitely many torus points, `<f, g>` is the average over `tau` of the
//! one-variable inner products of the slices `f(., tau)`, `g(., tau)`.
//! Each slice product is exact (power-series head plus a Stein-equation
//! tail); the outer average uses tanh-sinh quadrature on arcs split at
//! the points where a slice pole reaches the circle.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::poly::{BivarPoly, UnivarPoly, Var};
use crate::rif::boundary_slice_points;
use crate::C64;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Taylor coefficients `0..len` of `a / s`; requires `s(0) != 0`.
fn series(a: &UnivarPoly, s: &UnivarPoly, len: usize) -> Vec<C64> {
    let mut c = vec![zero(); len];
    for n in 0..len {
        let mut v = a.coeff(n);
        for i in 1..s.coeffs.len().min(n + 1) {
            v -= s.coeffs[i] * c[n - i];
        }
        c[n] = v / s.coeffs[0];
    }
    c
}

/// Gram matrix `<a_i / s, a_j / s>` in the Hardy space of the disk.
///
/// `s` must have all roots outside the closed disk.
pub fn h2_gram_1d(nums: &[UnivarPoly], s: &UnivarPoly) -> DMatrix<C64> {
    let s = s.normalized();
    let k = s.coeffs.len() - 1;
    let deg = nums.iter().map(|a| a.coeffs.len()).max().unwrap_or(1).saturating_sub(1);
    let head = deg + k + 1;
    let coeffs: Vec<Vec<C64>> = nums.iter().map(|a| series(a, &s, head)).collect();
    let r = nums.len();
    let mut g = DMatrix::from_fn(r, r, |i, j| (0..head - 1).map(|n| coeffs[i][n] * coeffs[j][n].conj()).sum::<C64>());
    if k == 0 {
        for i in 0..r {
            for j in 0..r {
                g[(i, j)] += coeffs[i][head - 1] * coeffs[j][head - 1].conj();
            }
        }
        return g;
    }
    // state x_n = (c_n, ..., c_{n-k+1}) evolves by the companion matrix A
    let mut a = DMatrix::from_element(k, k, zero());
    for i in 0..k {
        a[(0, i)] = -s.coeffs[i + 1] / s.coeffs[0];
        if i > 0 {
            a[(i, i - 1)] = C64::new(1.0, 0.0);
        }
    }
    // tail X = sum_j A^j x y* A*^j solves X = A X A* + x y*
    let kron = DMatrix::from_fn(k * k, k * k, |row, col| {
        let (ri, rj) = (row % k, row / k);
        let (ci, cj) = (col % k, col / k);
        let id = if row == col { C64::new(1.0, 0.0) } else { zero() };
        id - a[(ri, ci)] * a[(rj, cj)].conj()
    });
    let lu = kron.lu();
    let states: Vec<DVector<C64>> = coeffs.iter().map(|c| DVector::from_fn(k, |i, _| c[head - 1 - i])).collect();
    for i in 0..r {
        for j in 0..r {
            let rhs = DVector::from_fn(k * k, |idx, _| states[i][idx % k] * states[j][idx / k].conj());
            if let Some(x) = lu.solve(&rhs) {
                g[(i, j)] += x[0];
            }
        }
    }
    g
}

/// Abscissas and weights of tanh-sinh quadrature on `(a, b)`.
fn tanh_sinh(a: f64, b: f64, level: u32) -> Vec<(f64, f64)> {
    let h = 0.5f64.powi(level as i32);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut out = Vec::new();
    let kmax = (3.5 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let s = 0.5 * PI * t.sinh();
        let x = s.tanh();
        let w = half * h * 0.5 * PI * t.cosh() / s.cosh().powi(2);
        // nodes closer than this to an arc end add nothing measurable
        let gap = half * (1.0 - x.abs());
        if gap < 1e-12 || w < 1e-300 {
            continue;
        }
        out.push((mid + half * x, w));
    }
    out
}

/// Gram matrix `<n_i / den, n_j / den>` in the Hardy space of the bidisk.
pub fn gram_matrix(den: &BivarPoly, nums: &[BivarPoly]) -> DMatrix<C64> {
    let r = nums.len();
    let mut cuts: Vec<f64> =
        boundary_slice_points(den, 512, 1e-7).iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect();
    if cuts.is_empty() {
        cuts.push(0.0);
    }
    cuts.sort_by(f64::total_cmp);
    let mut total = DMatrix::from_element(r, r, zero());
    for (k, &a) in cuts.iter().enumerate() {
        let b = if k + 1 < cuts.len() { cuts[k + 1] } else { cuts[0] + 2.0 * PI };
        for (t, w) in tanh_sinh(a, b, 6) {
            let tau = C64::from_polar(1.0, t);
            let s = den.slice(Var::Z2, tau);
            let slices: Vec<UnivarPoly> = nums.iter().map(|q| q.slice(Var::Z2, tau)).collect();
            total += h2_gram_1d(&slices, &s) * C64::new(w / (2.0 * PI), 0.0);
        }
    }
    total
}
