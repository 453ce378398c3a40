//! JSON views of library results. Complex numbers are `[re, im]` pairs.

use nalgebra::DMatrix;
use serde::Serialize;
use shiftlab::equiv::{BlaschkeRatio, EquivalenceReport, SimilarityReport};
use shiftlab::hull::ConvexRegion;
use shiftlab::numrange::{OpennessStatus, OpennessVerdict, SectionCloud};
use shiftlab::rational::{RationalMatrix, RationalScalar};
use shiftlab::rif::BlaschkeProduct;
use shiftlab::symbol::MatrixSymbol;
use shiftlab::C64;

pub type Pair = [f64; 2];

pub fn pair(c: C64) -> Pair {
    [c.re, c.im]
}

pub fn pairs(cs: &[C64]) -> Vec<Pair> {
    cs.iter().map(|&c| pair(c)).collect()
}

pub fn matrix(a: &DMatrix<C64>) -> Vec<Vec<Pair>> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| pair(a[(i, j)])).collect()).collect()
}

#[derive(Serialize)]
pub struct Rational {
    pub num: Vec<Pair>,
    pub den: Vec<Pair>,
}

impl From<&RationalScalar> for Rational {
    fn from(r: &RationalScalar) -> Self {
        Rational { num: pairs(&r.num.coeffs), den: pairs(&r.den.coeffs) }
    }
}

fn rational_grid(entries: &[Vec<RationalScalar>]) -> Vec<Vec<Rational>> {
    entries.iter().map(|row| row.iter().map(Rational::from).collect()).collect()
}

#[derive(Serialize)]
pub struct Symbol {
    pub variable: &'static str,
    pub dim: usize,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Rational>>,
}

impl From<&MatrixSymbol> for Symbol {
    fn from(m: &MatrixSymbol) -> Self {
        Symbol {
            variable: m.variable.tag(),
            dim: m.dim(),
            labels: m.basis_labels.clone(),
            entries: rational_grid(&m.entries),
        }
    }
}

pub fn rational_matrix(u: &RationalMatrix) -> Vec<Vec<Rational>> {
    rational_grid(&u.entries)
}

#[derive(Serialize)]
pub struct Region {
    pub vertices: Vec<Pair>,
    pub max_modulus: f64,
}

impl From<&ConvexRegion> for Region {
    fn from(r: &ConvexRegion) -> Self {
        Region { vertices: pairs(&r.vertices), max_modulus: r.max_modulus() }
    }
}

#[derive(Serialize)]
pub struct Openness {
    pub status: &'static str,
    pub margin: f64,
    pub witness: Option<Witness>,
}

#[derive(Serialize)]
pub struct Witness {
    pub alpha: f64,
    pub beta: f64,
}

impl From<&OpennessVerdict> for Openness {
    fn from(v: &OpennessVerdict) -> Self {
        Openness {
            status: match v.status {
                OpennessStatus::Open => "open",
                OpennessStatus::Inconclusive => "inconclusive",
            },
            margin: v.margin,
            witness: v.witness.map(|(alpha, beta)| Witness { alpha, beta }),
        }
    }
}

#[derive(Serialize)]
pub struct Blaschke {
    pub zeros: Vec<Pair>,
    pub lambda: Pair,
}

impl From<&BlaschkeProduct> for Blaschke {
    fn from(b: &BlaschkeProduct) -> Self {
        Blaschke { zeros: pairs(&b.zeros), lambda: pair(b.lambda) }
    }
}

#[derive(Serialize)]
pub struct Ratio {
    pub b1: Blaschke,
    pub b2: Blaschke,
    pub c: Pair,
    pub residual: f64,
}

impl From<&BlaschkeRatio> for Ratio {
    fn from(r: &BlaschkeRatio) -> Self {
        Ratio { b1: (&r.b1).into(), b2: (&r.b2).into(), c: pair(r.c), residual: r.residual }
    }
}

#[derive(Serialize)]
pub struct Similarity {
    pub max_unitarity_defect: f64,
    pub max_similarity_defect: f64,
    pub tau_of_max: Pair,
    pub pass: bool,
}

impl From<&SimilarityReport> for Similarity {
    fn from(s: &SimilarityReport) -> Self {
        Similarity {
            max_unitarity_defect: s.max_unitarity_defect,
            max_similarity_defect: s.max_similarity_defect,
            tau_of_max: pair(s.tau_of_max),
            pass: s.pass,
        }
    }
}

#[derive(Serialize)]
pub struct Equivalence {
    pub pass: bool,
    pub eigen_match: bool,
    pub ratio: Option<Ratio>,
    pub u: Option<Vec<Vec<Rational>>>,
    pub similarity: Option<Similarity>,
    pub symbol1: Symbol,
    pub symbol2: Symbol,
}

impl From<&EquivalenceReport> for Equivalence {
    fn from(r: &EquivalenceReport) -> Self {
        Equivalence {
            pass: r.pass(),
            eigen_match: r.eigen_match,
            ratio: r.ratio.as_ref().map(Ratio::from),
            u: r.u.as_ref().map(rational_matrix),
            similarity: r.similarity.as_ref().map(Similarity::from),
            symbol1: (&r.symbol1).into(),
            symbol2: (&r.symbol2).into(),
        }
    }
}

#[derive(Serialize)]
pub struct Section {
    pub blocks: usize,
    pub radius: f64,
    pub quadrature_tail: f64,
    pub boundary_points: usize,
    pub samples: usize,
}

impl Section {
    pub fn new(blocks: usize, cloud: &SectionCloud) -> Self {
        Section {
            blocks,
            radius: cloud.radius,
            quadrature_tail: cloud.quadrature_tail,
            boundary_points: cloud.boundary.len(),
            samples: cloud.samples.len(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
