//! Planar convex polygons.

use crate::C64;

/// Counterclockwise convex polygon approximating a numerical range.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexRegion {
    pub vertices: Vec<C64>,
    /// Marks regions that approximate the closure of a set.
    pub is_closure: bool,
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull by Andrew's monotone chain; collinear points are dropped and
/// vertices closer than `1e-10` are merged.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= 1e-10);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

impl ConvexRegion {
    pub fn from_points(points: &[C64], is_closure: bool) -> Self {
        ConvexRegion { vertices: convex_hull(points), is_closure }
    }

    /// Largest modulus over the region.
    pub fn max_modulus(&self) -> f64 {
        self.vertices.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max Re(conj(d) z)` over the region for a unit direction `d`.
    pub fn support(&self, d: C64) -> f64 {
        self.vertices.iter().map(|z| (d.conj() * z).re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distance from `p` to the region, zero inside.
    pub fn distance(&self, p: C64) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => (p - v[0]).norm(),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| cross(v[i], v[(i + 1) % n], p) >= 0.0);
                if inside {
                    return 0.0;
                }
                (0..n).map(|i| segment_distance(p, v[i], v[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn contains(&self, p: C64, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Hausdorff distance between two convex regions.
    pub fn hausdorff(&self, other: &ConvexRegion) -> f64 {
        let one = self.vertices.iter().map(|&z| other.distance(z)).fold(0.0, f64::max);
        let two = other.vertices.iter().map(|&z| self.distance(z)).fold(0.0, f64::max);
        one.max(two)
    }

    /// Whether consecutive edges turn left throughout.
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let n = v.len();
        n < 3 || (0..n).all(|i| cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0.0)
    }
}
