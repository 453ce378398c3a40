//! Line-oriented `shiftlab-v1` records.
//!
//! Every record starts with a `shiftlab-v1 <kind>` header. Blank lines and
//! lines starting with `#` are ignored. Numbers are written in scientific
//! notation with 17 significant digits, which round-trips every `f64`.
//!
//! ```text
//! shiftlab-v1 poly          shiftlab-v1 rif
//! size <deg1> <deg2>        degree <m> <n>
//! term <i> <j> <re> <im>    lambda <re> <im>
//!                           term <i> <j> <re> <im>
//!
//! shiftlab-v1 product       shiftlab-v1 symbol
//! factor <kind>             dim <m>
//!   (rif lines)             variable conj_z2|conj_z1
//!   basis2 <k> <i> <j> <re> <im>   label <k> <text>
//!   basis1 <k> <i> <j> <re> <im>   entry <i> <j> num <c...> den <c...>
//! end
//! ```
//!
//! A factor kind is `minusplus` or `plusminus` (decomposition branch) or
//! `explicit`, in which case the `basis2` and `basis1` lines give the basis
//! numerators term by term. Symbol entry coefficients are listed as
//! `re im` pairs in increasing degree; an empty list is the zero polynomial.

use shiftlab::agler::{decompose, Branch, FactorDecomposition};
use shiftlab::poly::{BivarPoly, UnivarPoly};
use shiftlab::rational::RationalScalar;
use shiftlab::rif::{make_rif, Rif};
use shiftlab::symbol::{MatrixSymbol, SymbolVar};
use shiftlab::{c64, C64};

use crate::CliError;

pub const HEADER: &str = "shiftlab-v1";

/// One factor of a product record.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSpec {
    pub rif: Rif,
    pub kind: FactorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FactorKind {
    Branch(Branch),
    Explicit { basis2: Vec<BivarPoly>, basis1: Vec<BivarPoly> },
}

impl FactorSpec {
    pub fn decompose(&self) -> shiftlab::Result<FactorDecomposition> {
        match &self.kind {
            FactorKind::Branch(b) => decompose(&self.rif, *b),
            FactorKind::Explicit { basis2, basis1 } => {
                FactorDecomposition::from_bases(self.rif.clone(), basis2.clone(), basis1.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Poly(BivarPoly),
    Rif(Rif),
    Product(Vec<FactorSpec>),
    Symbol(MatrixSymbol),
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex_pair(c: C64) -> String {
    format!("{} {}", num(c.re), num(c.im))
}

fn push_terms(out: &mut String, tag: &str, p: &BivarPoly) {
    for (i, row) in p.coeffs.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != c64(0.0, 0.0) {
                out.push_str(&format!("{tag} {i} {j} {}\n", complex_pair(c)));
            }
        }
    }
}

fn push_rif_body(out: &mut String, rif: &Rif) {
    out.push_str(&format!("degree {} {}\n", rif.m, rif.n));
    out.push_str(&format!("lambda {}\n", complex_pair(rif.lambda)));
    push_terms(out, "term", &rif.p);
}

pub fn emit_poly(p: &BivarPoly) -> String {
    let mut out = format!("{HEADER} poly\nsize {} {}\n", p.deg1, p.deg2);
    push_terms(&mut out, "term", p);
    out
}

pub fn emit_rif(rif: &Rif) -> String {
    let mut out = format!("{HEADER} rif\n");
    push_rif_body(&mut out, rif);
    out
}

pub fn emit_product(factors: &[FactorSpec]) -> String {
    let mut out = format!("{HEADER} product\n");
    for f in factors {
        match &f.kind {
            FactorKind::Branch(b) => out.push_str(&format!("factor {}\n", b.name())),
            FactorKind::Explicit { .. } => out.push_str("factor explicit\n"),
        }
        push_rif_body(&mut out, &f.rif);
        if let FactorKind::Explicit { basis2, basis1 } = &f.kind {
            for (k, q) in basis2.iter().enumerate() {
                push_terms(&mut out, &format!("basis2 {k}"), q);
            }
            for (k, r) in basis1.iter().enumerate() {
                push_terms(&mut out, &format!("basis1 {k}"), r);
            }
        }
        out.push_str("end\n");
    }
    out
}

fn coeff_words(p: &UnivarPoly) -> String {
    p.coeffs.iter().map(|&c| format!(" {}", complex_pair(c))).collect()
}

pub fn emit_symbol(m: &MatrixSymbol) -> String {
    let mut out = format!("{HEADER} symbol\ndim {}\nvariable {}\n", m.dim(), m.variable.tag());
    for (k, label) in m.basis_labels.iter().enumerate() {
        out.push_str(&format!("label {k} {label}\n"));
    }
    for (i, row) in m.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.push_str(&format!("entry {i} {j} num{} den{}\n", coeff_words(&e.num), coeff_words(&e.den)));
        }
    }
    out
}

pub fn emit(record: &Record) -> String {
    match record {
        Record::Poly(p) => emit_poly(p),
        Record::Rif(r) => emit_rif(r),
        Record::Product(f) => emit_product(f),
        Record::Symbol(s) => emit_symbol(s),
    }
}

struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::Parse(format!("line {}: {msg}", self.number))
    }

    fn expect_len(&self, n: usize) -> Result<(), CliError> {
        if self.words.len() == n {
            Ok(())
        } else {
            Err(self.err(format!("`{}` takes {} fields, found {}", self.words[0], n - 1, self.words.len() - 1)))
        }
    }

    fn usize_at(&self, k: usize) -> Result<usize, CliError> {
        self.words[k]
            .parse()
            .map_err(|_| self.err(format!("expected a non-negative integer, found `{}`", self.words[k])))
    }

    fn f64_at(&self, k: usize) -> Result<f64, CliError> {
        let x: f64 =
            self.words[k].parse().map_err(|_| self.err(format!("expected a number, found `{}`", self.words[k])))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.err("numbers must be finite"))
        }
    }

    fn complex_at(&self, k: usize) -> Result<C64, CliError> {
        Ok(c64(self.f64_at(k)?, self.f64_at(k + 1)?))
    }

    /// `(i, j, c)` from the five words starting at `k`.
    fn term_at(&self, k: usize) -> Result<(usize, usize, C64), CliError> {
        Ok((self.usize_at(k)?, self.usize_at(k + 1)?, self.complex_at(k + 2)?))
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(k, l)| Line { number: k + 1, words: l.split_whitespace().collect() })
        .filter(|l| !l.words.is_empty() && !l.words[0].starts_with('#'))
        .collect()
}

fn build_poly(terms: &[(usize, usize, C64)], size: Option<(usize, usize)>) -> BivarPoly {
    let p = BivarPoly::from_terms(terms);
    match size {
        Some((d1, d2)) => p.padded(d1, d2),
        None => p,
    }
}

#[derive(Default)]
struct RifLines {
    degree: Option<(usize, usize)>,
    lambda: Option<C64>,
    terms: Vec<(usize, usize, C64)>,
}

impl RifLines {
    /// Consumes a rif-body line; returns false for other keywords.
    fn take(&mut self, line: &Line) -> Result<bool, CliError> {
        match line.words[0] {
            "degree" => {
                line.expect_len(3)?;
                self.degree = Some((line.usize_at(1)?, line.usize_at(2)?));
            }
            "lambda" => {
                line.expect_len(3)?;
                self.lambda = Some(line.complex_at(1)?);
            }
            "term" => {
                line.expect_len(5)?;
                self.terms.push(line.term_at(1)?);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(self, at: usize) -> Result<Rif, CliError> {
        let (m, n) = self.degree.ok_or_else(|| CliError::Parse(format!("line {at}: missing `degree`")))?;
        let lambda = self.lambda.unwrap_or(c64(1.0, 0.0));
        if self.terms.is_empty() {
            return Err(CliError::Parse(format!("line {at}: denominator has no terms")));
        }
        Ok(make_rif(build_poly(&self.terms, None), m, n, lambda)?)
    }
}

fn parse_poly(body: &[Line]) -> Result<BivarPoly, CliError> {
    let mut size = None;
    let mut terms = Vec::new();
    for l in body {
        match l.words[0] {
            "size" => {
                l.expect_len(3)?;
                size = Some((l.usize_at(1)?, l.usize_at(2)?));
            }
            "term" => {
                l.expect_len(5)?;
                terms.push((l.number, l.term_at(1)?));
            }
            w => return Err(l.err(format!("unexpected `{w}` in a poly record"))),
        }
    }
    if let Some((d1, d2)) = size {
        if let Some((at, (i, j, _))) = terms.iter().find(|(_, t)| t.0 > d1 || t.1 > d2) {
            return Err(CliError::Parse(format!("line {at}: term ({i}, {j}) exceeds size ({d1}, {d2})")));
        }
    }
    let terms: Vec<_> = terms.into_iter().map(|(_, t)| t).collect();
    Ok(build_poly(&terms, size))
}

fn parse_rif(body: &[Line], at: usize) -> Result<Rif, CliError> {
    let mut r = RifLines::default();
    for l in body {
        if !r.take(l)? {
            return Err(l.err(format!("unexpected `{}` in a rif record", l.words[0])));
        }
    }
    r.finish(at)
}

fn collect_basis(terms: &[(usize, usize, usize, C64)]) -> Vec<BivarPoly> {
    let count = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
    (0..count)
        .map(|k| {
            let own: Vec<(usize, usize, C64)> = terms.iter().filter(|t| t.0 == k).map(|t| (t.1, t.2, t.3)).collect();
            build_poly(&own, None)
        })
        .collect()
}

fn parse_product(body: &[Line]) -> Result<Vec<FactorSpec>, CliError> {
    let mut factors = Vec::new();
    let mut k = 0;
    while k < body.len() {
        let head = &body[k];
        if head.words[0] != "factor" {
            return Err(head.err(format!("expected `factor`, found `{}`", head.words[0])));
        }
        head.expect_len(2)?;
        let branch = match head.words[1] {
            "explicit" => None,
            w => Some(Branch::from_name(w).ok_or_else(|| head.err(format!("unknown factor kind `{w}`")))?),
        };
        let mut r = RifLines::default();
        let (mut b2, mut b1) = (Vec::new(), Vec::new());
        k += 1;
        loop {
            let l = body.get(k).ok_or_else(|| head.err("factor is missing `end`"))?;
            k += 1;
            if l.words[0] == "end" {
                break;
            }
            if r.take(l)? {
                continue;
            }
            let store = match l.words[0] {
                "basis2" => &mut b2,
                "basis1" => &mut b1,
                w => return Err(l.err(format!("unexpected `{w}` in a factor"))),
            };
            if branch.is_some() {
                return Err(l.err("basis lines need `factor explicit`"));
            }
            l.expect_len(6)?;
            let (i, j, c) = l.term_at(2)?;
            store.push((l.usize_at(1)?, i, j, c));
        }
        let rif = r.finish(head.number)?;
        let kind = match branch {
            Some(b) => FactorKind::Branch(b),
            None => FactorKind::Explicit { basis2: collect_basis(&b2), basis1: collect_basis(&b1) },
        };
        factors.push(FactorSpec { rif, kind });
    }
    if factors.is_empty() {
        return Err(CliError::Parse("product record has no factors".into()));
    }
    Ok(factors)
}

fn parse_coeffs(line: &Line, words: &[&str]) -> Result<UnivarPoly, CliError> {
    if !words.len().is_multiple_of(2) {
        return Err(line.err("coefficient lists need an even number of values"));
    }
    let mut out = Vec::with_capacity(words.len() / 2);
    for pair in words.chunks(2) {
        let re: f64 = pair[0].parse().map_err(|_| line.err(format!("bad number `{}`", pair[0])))?;
        let im: f64 = pair[1].parse().map_err(|_| line.err(format!("bad number `{}`", pair[1])))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(line.err("numbers must be finite"));
        }
        out.push(c64(re, im));
    }
    Ok(UnivarPoly::new(out))
}

fn parse_symbol(body: &[Line], at: usize) -> Result<MatrixSymbol, CliError> {
    let mut dim = None;
    let mut variable = SymbolVar::ConjZ2;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut entries: Vec<Vec<Option<RationalScalar>>> = Vec::new();
    for l in body {
        match l.words[0] {
            "dim" => {
                l.expect_len(2)?;
                let m = l.usize_at(1)?;
                dim = Some(m);
                labels = vec![None; m];
                entries = vec![vec![None; m]; m];
            }
            "variable" => {
                l.expect_len(2)?;
                variable = SymbolVar::from_tag(l.words[1])
                    .ok_or_else(|| l.err(format!("unknown variable `{}`", l.words[1])))?;
            }
            "label" | "entry" if dim.is_none() => return Err(l.err("`dim` must come first")),
            "label" => {
                if l.words.len() < 3 {
                    return Err(l.err("`label` takes an index and a name"));
                }
                let k = l.usize_at(1)?;
                let slot = labels.get_mut(k).ok_or_else(|| l.err(format!("label index {k} out of range")))?;
                *slot = Some(l.words[2..].join(" "));
            }
            "entry" => {
                let find = |w: &str| l.words.iter().position(|x| *x == w);
                let (Some(n), Some(d)) = (find("num"), find("den")) else {
                    return Err(l.err("`entry` needs `num` and `den` lists"));
                };
                if l.words.len() < 3 || n != 3 || d < n {
                    return Err(l.err("expected `entry <i> <j> num ... den ...`"));
                }
                let (i, j) = (l.usize_at(1)?, l.usize_at(2)?);
                let value =
                    RationalScalar::new(parse_coeffs(l, &l.words[n + 1..d])?, parse_coeffs(l, &l.words[d + 1..])?);
                if value.den.is_zero() {
                    return Err(l.err("zero denominator"));
                }
                let slot = entries
                    .get_mut(i)
                    .and_then(|r| r.get_mut(j))
                    .ok_or_else(|| l.err(format!("entry ({i}, {j}) out of range")))?;
                *slot = Some(value);
            }
            w => return Err(l.err(format!("unexpected `{w}` in a symbol record"))),
        }
    }
    dim.ok_or_else(|| CliError::Parse(format!("line {at}: missing `dim`")))?;
    let labels = labels.into_iter().enumerate().map(|(k, l)| l.unwrap_or_else(|| format!("e{}", k + 1))).collect();
    let entries = entries
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.unwrap_or_else(RationalScalar::zero)).collect())
        .collect();
    Ok(MatrixSymbol::new(entries, labels, variable)?)
}

pub fn parse(text: &str) -> Result<Record, CliError> {
    let all = lines(text);
    let (head, body) = all.split_first().ok_or_else(|| CliError::Parse("empty input".into()))?;
    if head.words[0] != HEADER || head.words.len() != 2 {
        return Err(head.err(format!("expected header `{HEADER} <kind>`")));
    }
    match head.words[1] {
        "poly" => Ok(Record::Poly(parse_poly(body)?)),
        "rif" => Ok(Record::Rif(parse_rif(body, head.number)?)),
        "product" => Ok(Record::Product(parse_product(body)?)),
        "symbol" => Ok(Record::Symbol(parse_symbol(body, head.number)?)),
        k => Err(head.err(format!("unknown record kind `{k}`"))),
    }
}
