//! Rational inner functions `theta = lambda * p~ / p` on the bidisk.

use std::f64::consts::PI;

use crate::poly::{common_factor_test, univar_share_root, BivarPoly, UnivarPoly, Var};
use crate::{Error, Result, C64};

/// Grids and tolerances used by [`make_rif_with`].
#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// Radii of the concentric circles carrying the fixed variable.
    pub radii: Vec<f64>,
    /// Angles per circle.
    pub angles: usize,
    /// A root of modulus below `1 - face_tol` counts as an interior zero.
    pub face_tol: f64,
    /// Tolerance of the resultant test for a common factor with `p~`.
    pub atoral_tol: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            radii: (0..=5).map(|k| 0.2 * k as f64).collect(),
            angles: 256,
            face_tol: 1e-9,
            atoral_tol: 1e-8,
        }
    }
}

/// Validated rational inner function `lambda * p~ / p` with `p~ = reflect(p, m, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rif {
    pub p: BivarPoly,
    pub p_tilde: BivarPoly,
    pub lambda: C64,
    pub m: usize,
    pub n: usize,
}

/// Validates and builds `lambda * reflect(p, m, n) / p` with default options.
pub fn make_rif(p: BivarPoly, m: usize, n: usize, lambda: C64) -> Result<Rif> {
    make_rif_with(p, m, n, lambda, &ValidationOptions::default())
}

/// Validates and builds an RIF: unimodular `lambda`, degree bounds,
/// stability on a sampling grid of the closed bidisk, and atorality.
pub fn make_rif_with(p: BivarPoly, m: usize, n: usize, lambda: C64, opts: &ValidationOptions) -> Result<Rif> {
    let rif = Rif::unchecked(p, m, n, lambda)?;
    check_stability(&rif.p, opts)?;
    if common_factor_test(&rif.p, &rif.p_tilde, opts.atoral_tol) {
        return Err(Error::Atorality);
    }
    Ok(rif)
}

fn check_stability(p: &BivarPoly, opts: &ValidationOptions) -> Result<()> {
    let scale = p.max_abs();
    if scale == 0.0 {
        return Err(Error::arg("zero denominator polynomial"));
    }
    for (fixed, poly) in [(Var::Z2, p.clone()), (Var::Z1, p.transpose())] {
        for &r in &opts.radii {
            let count = if r == 0.0 { 1 } else { opts.angles };
            for k in 0..count {
                let w = C64::from_polar(r, 2.0 * PI * k as f64 / count as f64);
                let s = poly.slice(Var::Z2, w).normalized();
                let at = |z: C64| match fixed {
                    Var::Z2 => Error::Stability { z1: z, z2: w },
                    Var::Z1 => Error::Stability { z1: w, z2: z },
                };
                if s.max_abs() <= 1e-14 * scale {
                    return Err(at(C64::new(0.0, 0.0)));
                }
                if let Some(z) = s.roots()?.into_iter().find(|z| z.norm() < 1.0 - opts.face_tol) {
                    return Err(at(z));
                }
            }
        }
    }
    Ok(())
}

impl Rif {
    /// Builds the RIF checking only `|lambda| = 1` and the degree bounds.
    pub fn unchecked(p: BivarPoly, m: usize, n: usize, lambda: C64) -> Result<Rif> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::arg(format!("|lambda| = {} is not 1", lambda.norm())));
        }
        let p_tilde = p.reflect(m, n)?;
        let p = p.padded(m, n);
        Ok(Rif { p, p_tilde, lambda, m, n })
    }

    /// Product of RIFs: denominators, unimodular constants and degrees multiply/add.
    pub fn product(factors: &[Rif]) -> Result<Rif> {
        let mut p = BivarPoly::one();
        let mut lambda = C64::new(1.0, 0.0);
        let (mut m, mut n) = (0, 0);
        for f in factors {
            p = &p * &f.p;
            lambda *= f.lambda;
            m += f.m;
            n += f.n;
        }
        Rif::unchecked(p, m, n, lambda)
    }

    /// `theta(z1, z2)`; errors where `p` vanishes.
    pub fn eval(&self, z1: C64, z2: C64) -> Result<C64> {
        let d = self.p.eval(z1, z2);
        if d.norm() < 1e-14 * self.p.max_abs() {
            return Err(Error::SingularPoint { z1, z2 });
        }
        Ok(self.lambda * self.p_tilde.eval(z1, z2) / d)
    }

    /// The same function with `z1` and `z2` exchanged.
    pub fn swap_variables(&self) -> Rif {
        Rif { p: self.p.transpose(), p_tilde: self.p_tilde.transpose(), lambda: self.lambda, m: self.n, n: self.m }
    }

    /// `theta(0, z2)` as a ratio of polynomials in `z2`.
    pub fn at_z1_zero(&self) -> (UnivarPoly, UnivarPoly) {
        (self.p_tilde.z1_coeff(0).scale(self.lambda), self.p.z1_coeff(0))
    }

    /// Distance of the nearest root of `p(., tau)` to the unit circle.
    pub fn slice_root_distance(&self, tau: C64) -> f64 {
        slice_root_distance(&self.p, tau)
    }
}

/// `lambda * prod (z - a_j) / (1 - conj(a_j) z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    pub zeros: Vec<C64>,
    pub lambda: C64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>, lambda: C64) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(Error::arg(format!("Blaschke zero {a} not inside the unit disk")));
        }
        if (lambda.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::arg("Blaschke constant is not unimodular"));
        }
        Ok(BlaschkeProduct { zeros, lambda })
    }

    pub fn one() -> Self {
        BlaschkeProduct { zeros: Vec::new(), lambda: C64::new(1.0, 0.0) }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.lambda * self.eval_monic(z)
    }

    fn eval_monic(&self, z: C64) -> C64 {
        self.zeros.iter().map(|&a| (z - a) / (C64::new(1.0, 0.0) - a.conj() * z)).product()
    }

    /// Product with the unimodular constant chosen so that `B(point) ~ value`.
    pub fn matching(zeros: Vec<C64>, point: C64, value: C64) -> Result<Self> {
        let mut b = BlaschkeProduct { zeros, lambda: C64::new(1.0, 0.0) };
        let base = b.eval_monic(point);
        if base.norm() == 0.0 {
            return Err(Error::arg("matching point is a zero of the product"));
        }
        let l = value / base;
        b.lambda = l / l.norm();
        Ok(b)
    }

    /// Numerator and denominator polynomials `lambda * prod(z - a)` and `prod(1 - conj(a) z)`.
    pub fn as_ratio(&self) -> (UnivarPoly, UnivarPoly) {
        let mut num = UnivarPoly::constant(self.lambda);
        let mut den = UnivarPoly::one();
        for &a in &self.zeros {
            num = &num * &UnivarPoly::new(vec![-a, C64::new(1.0, 0.0)]);
            den = &den * &UnivarPoly::new(vec![C64::new(1.0, 0.0), -a.conj()]);
        }
        (num, den)
    }
}

/// Default tolerance for closeness of a slice root to the unit circle.
pub const EXCEPTIONAL_TOL: f64 = 1e-7;

/// The slice `theta(., tau)` as a Blaschke product in `z1`.
pub fn slice_blaschke(theta: &Rif, tau: C64) -> Result<BlaschkeProduct> {
    slice_blaschke_with(theta, tau, EXCEPTIONAL_TOL)
}

/// As [`slice_blaschke`] with an explicit exceptional-set tolerance.
pub fn slice_blaschke_with(theta: &Rif, tau: C64, tol: f64) -> Result<BlaschkeProduct> {
    if theta.slice_root_distance(tau) <= tol {
        return Err(Error::ExceptionalPoint(tau));
    }
    let num = theta.p_tilde.slice(Var::Z2, tau);
    let zeros: Vec<C64> = num.roots()?.into_iter().filter(|z| z.norm() < 1.0).collect();
    let point = if num.eval(C64::new(0.0, 0.0)).norm() <= 1e-12 * num.max_abs() {
        C64::new(0.5, 0.0)
    } else {
        C64::new(0.0, 0.0)
    };
    BlaschkeProduct::matching(zeros, point, theta.eval(point, tau)?)
}

/// Points `tau` on the circle where `p(., tau)` has a root on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalSet {
    pub points: Vec<C64>,
    /// Each listed point has a slice root within this distance of the circle.
    pub tolerance: f64,
}

impl ExceptionalSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether `tau` lies within `radius` (arc-length proxy) of a listed point.
    pub fn near(&self, tau: C64, radius: f64) -> bool {
        self.points.iter().any(|&e| (e - tau).norm() <= radius)
    }
}

/// Golden-section minimisation of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Distance of the nearest root of `p(., tau)` to the unit circle.
pub fn slice_root_distance(p: &BivarPoly, tau: C64) -> f64 {
    let s = p.slice(Var::Z2, tau).normalized();
    match s.roots() {
        Ok(r) => r.iter().map(|z| (z.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min),
        Err(_) => 0.0,
    }
}

/// Points `tau` of the circle at which `p(., tau)` has a root within `tol`
/// of the circle, from a uniform grid of `grid` angles refined at each
/// local minimum by golden-section search and clustered at radius `1e-6`.
pub fn boundary_slice_points(p: &BivarPoly, grid: usize, tol: f64) -> Vec<C64> {
    let grid = grid.max(8);
    let h = 2.0 * PI / grid as f64;
    let dist = |t: f64| slice_root_distance(p, C64::from_polar(1.0, t));
    let d: Vec<f64> = (0..grid).map(|k| dist(k as f64 * h)).collect();
    let mut points: Vec<C64> = Vec::new();
    for k in 0..grid {
        let prev = d[(k + grid - 1) % grid];
        let next = d[(k + 1) % grid];
        if !(d[k] <= prev && d[k] <= next) || !d[k].is_finite() {
            continue;
        }
        let t0 = k as f64 * h;
        let (t, v) = golden_min(dist, t0 - h, t0 + h, 80);
        if v < tol {
            let z = C64::from_polar(1.0, t);
            if !points.iter().any(|&e| (e - z).norm() < 1e-6) {
                points.push(z);
            }
        }
    }
    points.sort_by(|a, b| a.arg().rem_euclid(2.0 * PI).total_cmp(&b.arg().rem_euclid(2.0 * PI)));
    points
}

/// Estimates the exceptional set of `theta` on a grid of `grid` angles.
pub fn exceptional_set(theta: &Rif, grid: usize, tol: f64) -> ExceptionalSet {
    ExceptionalSet { points: boundary_slice_points(&theta.p, grid, tol), tolerance: tol }
}

/// Builds a degree-`(1, n)` RIF whose scalar symbol is the conjugate of the
/// analytic function `f = f_num / f_den`, i.e. `conj(M(conj z)) = f(z)`.
///
/// The denominator is `p = f_den - z1 f_num`; `f = 0` gives `theta = z1`.
pub fn theta_from_symbol(f_num: &UnivarPoly, f_den: &UnivarPoly) -> Result<Rif> {
    let num = f_num.normalized();
    let den = f_den.normalized();
    if den.is_zero() {
        return Err(Error::arg("zero denominator"));
    }
    if num.is_zero() {
        return make_rif(BivarPoly::one(), 1, 0, C64::new(1.0, 0.0));
    }
    if num.coeffs.len() > 1 && den.coeffs.len() > 1 && univar_share_root(&num, &den, 1e-9) {
        return Err(Error::arg("symbol is not in lowest terms"));
    }
    if den.roots()?.iter().any(|r| r.norm() <= 1.0 + 1e-12) {
        return Err(Error::NotContractive(f64::INFINITY));
    }
    let f = |z: C64| num.eval(z) / den.eval(z);
    let mut interior: f64 = 0.0;
    for k in 0..20 {
        let r = k as f64 / 20.0;
        let count = if k == 0 { 1 } else { 256 };
        for a in 0..count {
            interior = interior.max(f(C64::from_polar(r, 2.0 * PI * a as f64 / count as f64)).norm());
        }
    }
    if interior >= 1.0 {
        return Err(Error::NotContractive(interior));
    }
    let (mut bmin, mut bmax) = (f64::INFINITY, 0f64);
    for a in 0..1024 {
        let v = f(C64::from_polar(1.0, 2.0 * PI * a as f64 / 1024.0)).norm();
        bmin = bmin.min(v);
        bmax = bmax.max(v);
    }
    if bmax > 1.0 + 1e-9 {
        return Err(Error::NotContractive(bmax));
    }
    if bmin >= 1.0 - 1e-9 {
        return Err(Error::Atorality);
    }
    let n = (num.coeffs.len() - 1).max(den.coeffs.len() - 1);
    let p = &BivarPoly::from_z2(&den) - &BivarPoly::from_z2(&num).shift_up(1, 0);
    make_rif(p, 1, n, C64::new(1.0, 0.0))
}
