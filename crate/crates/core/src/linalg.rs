//! Dense and banded complex linear algebra helpers.

use nalgebra::{DMatrix, DVector};
use rustfft::FftPlanner;

use crate::poly::{quadratic_roots, UnivarPoly};
use crate::C64;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Determinant by LU factorization.
pub fn det(a: &DMatrix<C64>) -> C64 {
    match a.nrows() {
        0 => C64::new(1.0, 0.0),
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        _ => a.clone().lu().determinant(),
    }
}

/// Parlett-Reinsch balancing by powers of two, in place.
pub fn balance(a: &mut DMatrix<C64>) {
    let n = a.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            let mut rr = r;
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if (cc + rr) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(a: &DMatrix<C64>) -> Vec<C64> {
    let n = a.nrows();
    match n {
        0 => Vec::new(),
        1 => vec![a[(0, 0)]],
        2 => {
            let tr = a[(0, 0)] + a[(1, 1)];
            let dt = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            quadratic_roots(C64::new(1.0, 0.0), -tr, dt).to_vec()
        }
        _ => {
            let mut b = a.clone();
            balance(&mut b);
            let schur = nalgebra::Schur::try_new(b.clone(), 1e-15, 10_000).unwrap_or_else(|| nalgebra::Schur::new(b));
            let (_, t) = schur.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
    }
}

/// `(A + A*) / 2`.
pub fn hermitian_part(a: &DMatrix<C64>) -> DMatrix<C64> {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Extreme eigenvalues `(min, max)` of a Hermitian matrix.
pub fn hermitian_extremes(h: &DMatrix<C64>) -> (f64, f64) {
    match h.nrows() {
        0 => (0.0, 0.0),
        1 => (h[(0, 0)].re, h[(0, 0)].re),
        2 => {
            let a = h[(0, 0)].re;
            let d = h[(1, 1)].re;
            let m = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + h[(0, 1)].norm_sqr()).sqrt();
            (m - r, m + r)
        }
        _ => {
            let ev = nalgebra::SymmetricEigen::new(h.clone()).eigenvalues;
            let lo = ev.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
    }
}

/// Below this size dense Hermitian eigensolvers are used directly.
const DENSE_LIMIT: usize = 96;

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
///
/// Large matrices with a narrow band (typical for Toeplitz sections of
/// rational symbols) use bisection on Cholesky success of `xI - H`
/// followed by inverse iteration, at cost `O(n w^2)` per step; wider bands
/// use Lanczos with full reorthogonalisation, whose Ritz vector always
/// yields a point of the numerical range.
pub fn top_eigenpair(h: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let n = h.nrows();
    if n == 2 {
        return top_eigenpair_2x2(h);
    }
    let w = bandwidth(h);
    if n <= DENSE_LIMIT || 3 * w > n {
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        let (k, _) =
            eig.eigenvalues
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        return (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned());
    }
    let band = Band::from_dense(h, w);
    if w > LANCZOS_BAND {
        band.top_eigenpair_lanczos()
    } else {
        band.top_eigenpair()
    }
}

/// Wider bands switch from bisection to Lanczos iteration.
const LANCZOS_BAND: usize = 24;
/// Krylov dimension of the Lanczos path.
const LANCZOS_STEPS: usize = 200;

fn top_eigenpair_2x2(h: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let (_, hi) = hermitian_extremes(h);
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    // (H - hi) v = 0; pick the better-conditioned of the two row solutions
    let v1 = DVector::from_vec(vec![b, C64::new(hi - a, 0.0)]);
    let v2 = DVector::from_vec(vec![C64::new(hi - d, 0.0), b.conj()]);
    let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
    let nv = v.norm();
    if nv == 0.0 {
        return (hi, DVector::from_vec(vec![C64::new(1.0, 0.0), zero()]));
    }
    (hi, v / C64::new(nv, 0.0))
}

/// Largest `|i - j|` with a nonzero entry.
pub fn bandwidth(h: &DMatrix<C64>) -> usize {
    let n = h.nrows();
    let mut w = 0;
    for j in 0..n {
        for i in (j + w + 1..n).rev() {
            if h[(i, j)] != zero() || h[(j, i)] != zero() {
                w = i - j;
                break;
            }
        }
    }
    w
}

/// Hermitian band matrix stored by lower diagonals: `lower[i][d] = H[i][i-d]`.
struct Band {
    n: usize,
    w: usize,
    lower: Vec<Vec<C64>>,
}

impl Band {
    fn from_dense(h: &DMatrix<C64>, w: usize) -> Self {
        let n = h.nrows();
        let lower = (0..n).map(|i| (0..=w.min(i)).map(|d| h[(i, i - d)]).collect()).collect();
        Band { n, w, lower }
    }

    fn get(&self, i: usize, j: usize) -> C64 {
        if i >= j {
            let d = i - j;
            if d <= self.w {
                return self.lower[i][d];
            }
            zero()
        } else {
            self.get(j, i).conj()
        }
    }

    /// Cholesky factor of `x I - H`, or `None` when it is not positive definite.
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN pivots count as failures
    fn shifted_cholesky(&self, x: f64) -> Option<Vec<Vec<C64>>> {
        let (n, w) = (self.n, self.w);
        let mut l: Vec<Vec<C64>> = (0..n).map(|i| vec![zero(); w.min(i) + 1]).collect();
        for i in 0..n {
            let j0 = i.saturating_sub(w);
            for j in j0..=i {
                let mut s = -self.get(i, j);
                if i == j {
                    s += x;
                }
                let k0 = j0.max(j.saturating_sub(w));
                for k in k0..j {
                    s -= l[i][i - k] * l[j][j - k].conj();
                }
                if i == j {
                    if !(s.re > 0.0) {
                        return None;
                    }
                    l[i][0] = C64::new(s.re.sqrt(), 0.0);
                } else {
                    l[i][i - j] = s / l[j][0];
                }
            }
        }
        Some(l)
    }

    fn solve(&self, l: &[Vec<C64>], b: &mut [C64]) {
        let (n, w) = (self.n, self.w);
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(w)..i {
                s -= l[i][i - k] * b[k];
            }
            b[i] = s / l[i][0];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..(i + w + 1).min(n) {
                s -= l[k][k - i].conj() * b[k];
            }
            b[i] = s / l[i][0];
        }
    }

    fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let (n, w) = (self.n, self.w);
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(w);
                let hi = (i + w + 1).min(n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    fn top_eigenpair(&self) -> (f64, DVector<C64>) {
        let n = self.n;
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let d = self.get(i, i).re;
            lo = lo.max(d);
            let off: f64 = (i.saturating_sub(self.w)..(i + self.w + 1).min(n))
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).norm())
                .sum();
            hi = hi.max(d + off);
        }
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        let mut bump = 1e-12 * scale;
        hi += bump;
        let mut factor = loop {
            if let Some(l) = self.shifted_cholesky(hi) {
                break l;
            }
            bump *= 2.0;
            hi += bump;
        };
        while hi - lo > 4e-15 * scale {
            let mid = 0.5 * (lo + hi);
            match self.shifted_cholesky(mid) {
                Some(l) => {
                    hi = mid;
                    factor = l;
                }
                None => lo = mid,
            }
        }
        let mut v: Vec<C64> =
            (0..n).map(|i| C64::new(1.0 + (0.37 * i as f64).sin(), (0.91 * i as f64).cos())).collect();
        for _ in 0..6 {
            self.solve(&factor, &mut v);
            let nv = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= nv);
        }
        let hv = self.matvec(&v);
        let lambda: f64 = v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum();
        (lambda, DVector::from_vec(v))
    }

    fn top_eigenpair_lanczos(&self) -> (f64, DVector<C64>) {
        let n = self.n;
        let steps = LANCZOS_STEPS.min(n);
        let mut q: Vec<Vec<C64>> = Vec::with_capacity(steps);
        let mut v: Vec<C64> =
            (0..n).map(|i| C64::new(1.0 + (0.37 * i as f64).sin(), (0.91 * i as f64).cos())).collect();
        let norm = |x: &[C64]| x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let nv = norm(&v);
        v.iter_mut().for_each(|c| *c /= nv);
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        for k in 0..steps {
            let mut w = self.matvec(&v);
            let a: f64 = v.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
            q.push(v);
            alpha.push(a);
            for _ in 0..2 {
                for qj in &q {
                    let c: C64 = qj.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    w.iter_mut().zip(qj).for_each(|(y, x)| *y -= c * x);
                }
            }
            let b = norm(&w);
            if k + 1 == steps || b < 1e-13 * alpha.iter().map(|x| x.abs()).fold(1e-300, f64::max) {
                break;
            }
            beta.push(b);
            v = w.into_iter().map(|c| c / b).collect();
        }
        let k = alpha.len();
        let t = nalgebra::DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i == j + 1 {
                beta[j]
            } else if j == i + 1 {
                beta[i]
            } else {
                0.0
            }
        });
        let eig = nalgebra::SymmetricEigen::new(t);
        let (top, _) =
            eig.eigenvalues
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        let y = eig.eigenvectors.column(top);
        let mut ritz = vec![zero(); n];
        for (j, qj) in q.iter().enumerate() {
            ritz.iter_mut().zip(qj).for_each(|(r, x)| *r += x * y[j]);
        }
        let nr = norm(&ritz);
        ritz.iter_mut().for_each(|c| *c /= nr);
        let hv = self.matvec(&ritz);
        let lambda: f64 = ritz.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum();
        (lambda, DVector::from_vec(ritz))
    }
}

/// Largest singular value by power iteration on `A* A`; a lower bound that
/// converges from below.
pub fn spectral_norm_estimate(a: &DMatrix<C64>, iters: usize) -> f64 {
    let n = a.ncols();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| C64::new(1.0 + (0.53 * i as f64).cos(), (0.29 * i as f64).sin()));
    let mut est = 0.0;
    for _ in 0..iters {
        let nv = v.norm();
        v /= C64::new(nv, 0.0);
        let av = a * &v;
        est = av.norm();
        v = a.adjoint() * av;
        if v.norm() == 0.0 {
            return 0.0;
        }
    }
    est
}

/// Frobenius norm, an upper bound for the spectral norm.
pub fn frobenius(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral norm of a small matrix via its singular values.
pub fn spectral_norm(a: &DMatrix<C64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Determinant of a square matrix of univariate polynomials, recovered by
/// evaluation at roots of unity and an inverse DFT.
pub fn poly_det(entries: &[Vec<UnivarPoly>]) -> UnivarPoly {
    let m = entries.len();
    if m == 0 {
        return UnivarPoly::one();
    }
    let deg = |p: &UnivarPoly| p.coeffs.len().saturating_sub(1);
    let by_cols: usize = (0..m).map(|j| (0..m).map(|i| deg(&entries[i][j])).max().unwrap_or(0)).sum();
    let by_rows: usize = entries.iter().map(|r| r.iter().map(deg).max().unwrap_or(0)).sum();
    let k = by_cols.min(by_rows) + 1;
    let mut values: Vec<C64> = (0..k)
        .map(|s| {
            let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / k as f64);
            let a = DMatrix::from_fn(m, m, |i, j| entries[i][j].eval(z));
            det(&a)
        })
        .collect();
    // values[s] = sum_j c_j w^{s j}; the forward FFT with w^{-1} inverts it
    let fft = FftPlanner::new().plan_fft_forward(k);
    fft.process(&mut values);
    let scale = 1.0 / k as f64;
    let mut coeffs: Vec<C64> = values.into_iter().map(|c| c * scale).collect();
    let cut = 1e-14 * coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in coeffs.iter_mut() {
        if c.norm() <= cut {
            *c = zero();
        }
    }
    UnivarPoly::new(coeffs).normalized()
}
