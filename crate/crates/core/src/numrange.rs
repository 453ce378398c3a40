//! Numerical ranges of matrices and of matrix symbols.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::hull::ConvexRegion;
use crate::linalg;
use crate::rational::RationalScalar;
use crate::rif::ExceptionalSet;
use crate::symbol::MatrixSymbol;
use crate::toeplitz;
use crate::{Error, Result, C64};

pub const DEFAULT_TAU_GRID: usize = 2048;
pub const DEFAULT_ANGLES: usize = 1024;
pub const DEFAULT_ALPHA_GRID: usize = 1024;
/// Minimum infeasibility margin for reporting an open range.
pub const OPENNESS_MARGIN: f64 = 1e-7;

fn angle(k: usize, count: usize) -> f64 {
    2.0 * PI * k as f64 / count as f64
}

fn rotated_hermitian(a: &DMatrix<C64>, alpha: f64) -> DMatrix<C64> {
    let r = C64::from_polar(1.0, alpha);
    (a * r + a.adjoint() * r.conj()) * C64::new(0.5, 0.0)
}

fn quadratic_form(a: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    (v.adjoint() * (a * v))[(0, 0)]
}

/// Boundary point of `W(A)` maximising `Re(e^{i alpha} z)`, with that maximum.
pub fn support_point(a: &DMatrix<C64>, alpha: f64) -> (C64, f64) {
    let (lambda, v) = linalg::top_eigenpair(&rotated_hermitian(a, alpha));
    (quadratic_form(a, &v), lambda)
}

/// Boundary points of `W(A)` for `angles` uniformly spaced directions.
pub fn boundary_points(a: &DMatrix<C64>, angles: usize) -> Vec<C64> {
    (0..angles).map(|k| support_point(a, angle(k, angles)).0).collect()
}

/// Convex polygon inscribed in the numerical range of `a`.
pub fn matrix_numrange(a: &DMatrix<C64>, angles: usize) -> ConvexRegion {
    ConvexRegion::from_points(&boundary_points(a, angles.max(8)), false)
}

/// Numerical radius `max |z|` over `W(A)`, estimated on `angles` directions.
pub fn numerical_radius(a: &DMatrix<C64>, angles: usize) -> f64 {
    (0..angles).map(|k| support_point(a, angle(k, angles)).1).fold(f64::NEG_INFINITY, f64::max)
}

/// Filled ellipse described by its foci and minor semi-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipse {
    pub center: C64,
    pub focus1: C64,
    pub focus2: C64,
    pub semi_minor: f64,
}

impl Ellipse {
    pub fn semi_major(&self) -> f64 {
        (self.semi_minor.powi(2) + (self.focus1 - self.focus2).norm_sqr() / 4.0).sqrt()
    }

    fn axis(&self) -> C64 {
        let d = self.focus1 - self.focus2;
        if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        }
    }

    /// Boundary point maximising `Re(e^{i alpha} z)`.
    pub fn support_point(&self, alpha: f64) -> C64 {
        let (a, b) = (self.semi_major(), self.semi_minor);
        let e = self.axis();
        let w = C64::from_polar(1.0, alpha) * e;
        // maximise Re(w (a cos t + i b sin t)) over t
        let (x, y) = (w.re * a, -w.im * b);
        let r = (x * x + y * y).sqrt();
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (x / r, y / r) };
        self.center + e * C64::new(a * c, b * s)
    }

    /// Largest modulus over the ellipse.
    pub fn max_modulus(&self) -> f64 {
        let (a, b) = (self.semi_major(), self.semi_minor);
        let e = self.axis();
        let f = |t: f64| (self.center + e * C64::new(a * t.cos(), b * t.sin())).norm();
        let n = 4096;
        let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
        for k in 0..n {
            let t = angle(k, n);
            let v = f(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        let (mut lo, mut hi) = (best_t - 2.0 * PI / n as f64, best_t + 2.0 * PI / n as f64);
        for _ in 0..100 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) < f(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        best.max(f(0.5 * (lo + hi)))
    }
}

/// Numerical range of a 2x2 matrix as an ellipse with the eigenvalues as foci.
pub fn elliptical_range(a: &DMatrix<C64>) -> Result<Ellipse> {
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::arg("elliptical range needs a 2x2 matrix"));
    }
    let ev = linalg::eigenvalues(a);
    let trace: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let rad = trace - ev[0].norm_sqr() - ev[1].norm_sqr();
    if rad < -1e-12 * trace.max(1.0) {
        return Err(Error::Consistency(format!("negative minor-axis radicand {rad}")));
    }
    Ok(Ellipse { center: (ev[0] + ev[1]) * 0.5, focus1: ev[0], focus2: ev[1], semi_minor: 0.5 * rad.max(0.0).sqrt() })
}

/// Boundary grid `tau_k = e^{2 pi i k / grid}`.
pub fn tau_grid(grid: usize) -> Vec<C64> {
    (0..grid).map(|k| C64::from_polar(1.0, angle(k, grid))).collect()
}

/// Closure of the numerical range of the Toeplitz operator with symbol `m`:
/// the convex hull of the ranges of `m(tau)` over the boundary grid.
pub fn sweep_closure(m: &MatrixSymbol, tau_grid: usize, angles: usize) -> ConvexRegion {
    sweep_closure_skipping(m, tau_grid, angles, None)
}

/// As [`sweep_closure`], skipping grid points within `1e-6` of `skip`.
pub fn sweep_closure_skipping(
    m: &MatrixSymbol,
    grid: usize,
    angles: usize,
    skip: Option<&ExceptionalSet>,
) -> ConvexRegion {
    let taus: Vec<C64> = tau_grid(grid).into_iter().filter(|&t| skip.is_none_or(|e| !e.near(t, 1e-6))).collect();
    // per direction, keep the support point of largest support value
    let chunks: Vec<Vec<(f64, C64)>> = taus
        .par_chunks(32)
        .map(|chunk| {
            let mut best = vec![(f64::NEG_INFINITY, C64::new(0.0, 0.0)); angles];
            for &tau in chunk {
                let a = m.eval(tau);
                if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    continue;
                }
                for (k, slot) in best.iter_mut().enumerate() {
                    let (z, h) = support_point(&a, angle(k, angles));
                    if h > slot.0 {
                        *slot = (h, z);
                    }
                }
            }
            best
        })
        .collect();
    let mut best = vec![(f64::NEG_INFINITY, C64::new(0.0, 0.0)); angles];
    for chunk in chunks {
        for (slot, cand) in best.iter_mut().zip(chunk) {
            if cand.0 > slot.0 {
                *slot = cand;
            }
        }
    }
    let pts: Vec<C64> = best.into_iter().filter(|b| b.0.is_finite()).map(|b| b.1).collect();
    ConvexRegion::from_points(&pts, true)
}

/// Sampled image, numerical range and radius of a scalar symbol.
#[derive(Clone, Debug)]
pub struct ScalarRange {
    /// Values of `f` on concentric circles of the closed disk.
    pub image: Vec<C64>,
    /// Values on the unit circle only.
    pub boundary: Vec<C64>,
    pub numrange: ConvexRegion,
    /// Largest sampled modulus.
    pub radius: f64,
}

/// Samples `f` on `disk_grid + 1` circles (radius `k / disk_grid`) with
/// `4 * disk_grid` angles each, starting at angle zero.
pub fn scalar_range(f: &RationalScalar, disk_grid: usize) -> ScalarRange {
    let grid = disk_grid.max(16);
    let angles = 4 * grid;
    let mut image = Vec::with_capacity((grid + 1) * angles);
    let mut boundary = Vec::with_capacity(angles);
    for k in 0..=grid {
        let r = k as f64 / grid as f64;
        let count = if k == 0 { 1 } else { angles };
        for j in 0..count {
            let v = f.eval(C64::from_polar(r, angle(j, count)));
            image.push(v);
            if k == grid {
                boundary.push(v);
            }
        }
    }
    let radius = image.iter().map(|z| z.norm()).fold(0.0, f64::max);
    ScalarRange { numrange: ConvexRegion::from_points(&image, true), image, boundary, radius }
}

/// Points inside the numerical range of a finite section of `T_M`.
#[derive(Clone, Debug)]
pub struct SectionCloud {
    /// Support points of the section for each direction.
    pub boundary: Vec<C64>,
    /// Quadratic forms at seeded random unit vectors.
    pub samples: Vec<C64>,
    /// Numerical radius of the section over the sampled directions.
    pub radius: f64,
    /// Largest Taylor coefficient in the aliased half of the quadrature.
    pub quadrature_tail: f64,
}

impl SectionCloud {
    pub fn points(&self) -> impl Iterator<Item = &C64> {
        self.boundary.iter().chain(self.samples.iter())
    }
}

/// Numerical range of the `blocks x blocks` block section of `T_M`, plus
/// quadratic forms at `samples` random unit vectors drawn from `seed`.
pub fn finite_section_oracle(
    m: &MatrixSymbol,
    blocks: usize,
    angles: usize,
    samples: usize,
    seed: u64,
) -> SectionCloud {
    let coeffs = toeplitz::symbol_coefficients(m);
    let t = toeplitz::block_section(&coeffs.coeffs, blocks, true);
    let results: Vec<(C64, f64)> = (0..angles).into_par_iter().map(|k| support_point(&t, angle(k, angles))).collect();
    let radius = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let boundary = results.into_iter().map(|r| r.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = t.nrows();
    let samples = (0..samples)
        .map(|_| {
            let v = DVector::from_fn(n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let v = &v / C64::new(v.norm(), 0.0);
            quadratic_form(&t, &v)
        })
        .collect();
    SectionCloud { boundary, samples, radius, quadrature_tail: coeffs.tail }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpennessStatus {
    Open,
    Inconclusive,
}

/// Outcome of the transversal-line test.
#[derive(Clone, Debug, PartialEq)]
pub struct OpennessVerdict {
    pub status: OpennessStatus,
    /// For inconclusive results, a line `Im(e^{i alpha} w) = beta` meeting
    /// every sampled range.
    pub witness: Option<(f64, f64)>,
    /// Smallest over `alpha` of `max_tau min I - min_tau max I`; positive
    /// means no transversal exists in any sampled direction.
    pub margin: f64,
}

/// Searches for a straight line meeting `W(M(tau))` for every grid `tau`.
///
/// For each direction `alpha` in `[0, pi)` the projections of the ranges
/// onto the normal are the intervals spanned by the extreme eigenvalues of
/// `Im(e^{i alpha} M(tau))`; a common point of all intervals is a line.
pub fn openness_test(m: &MatrixSymbol, alpha_grid: usize, tau_grid_size: usize) -> OpennessVerdict {
    let mats: Vec<DMatrix<C64>> = tau_grid(tau_grid_size).into_iter().map(|t| m.eval(t)).collect();
    let per_alpha: Vec<(f64, f64, f64)> = (0..alpha_grid)
        .into_par_iter()
        .map(|k| {
            let alpha = PI * k as f64 / alpha_grid as f64;
            let r = C64::from_polar(1.0, alpha);
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for a in &mats {
                let x = a * r;
                let im = (&x - x.adjoint()) * C64::new(0.0, -0.5);
                let (l, h) = linalg::hermitian_extremes(&im);
                lo = lo.max(l);
                hi = hi.min(h);
            }
            (alpha, lo, hi)
        })
        .collect();
    let (alpha, lo, hi) =
        per_alpha.iter().copied().min_by(|a, b| (a.1 - a.2).total_cmp(&(b.1 - b.2))).expect("alpha grid is nonempty");
    let margin = lo - hi;
    if margin > OPENNESS_MARGIN {
        OpennessVerdict { status: OpennessStatus::Open, witness: None, margin }
    } else {
        OpennessVerdict { status: OpennessStatus::Inconclusive, witness: Some((alpha, 0.5 * (lo + hi))), margin }
    }
}
