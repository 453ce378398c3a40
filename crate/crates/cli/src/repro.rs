//! Named reproduction scripts, each producing a JSON document that is
//! compared with `golden/<id>.json`.

use std::path::PathBuf;

use nalgebra::DMatrix;
use serde_json::{json, Value};
use shiftlab::agler::scalar_symbol;
use shiftlab::equiv::{best_constant_unitary, compare_factorizations, toeplitz_relation};
use shiftlab::fixtures;
use shiftlab::numrange::{
    finite_section_oracle, openness_test, scalar_range, sweep_closure, OpennessStatus, DEFAULT_ALPHA_GRID,
    DEFAULT_ANGLES, DEFAULT_TAU_GRID,
};
use shiftlab::rif::{exceptional_set, BlaschkeProduct, EXCEPTIONAL_TOL};
use shiftlab::symbol::{assemble_product_symbol, symbol_eigenvalues, takenaka_matrix, MatrixSymbol};
use shiftlab::{c64, C64};

use crate::report::{self, matrix, pair, pairs};
use crate::CliError;

pub const IDS: [&str; 9] = [
    "deg21-fixture",
    "blaschke-chain",
    "blaschke-z1z2",
    "z1-times-theta",
    "equiv-z1-theta",
    "equal-ranges",
    "closed-disk",
    "openness-phi",
    "scalar-disk",
];

/// Relative and absolute tolerance for numeric golden comparisons.
pub const GOLDEN_TOL: f64 = 1e-9;

pub fn golden_path(id: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden").join(format!("{id}.json"))
}

fn zeros_fixture() -> Vec<C64> {
    vec![c64(0.5, 0.0), c64(0.2, 0.3), c64(-0.4, -0.1)]
}

fn sorted(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn symbol_json(m: &MatrixSymbol) -> Value {
    serde_json::to_value(report::Symbol::from(m)).expect("symbol serializes")
}

fn phi(t: f64) -> Result<MatrixSymbol, CliError> {
    Ok(assemble_product_symbol(&fixtures::squared_product_blaschke(t)?, 1)?)
}

fn psi(s: f64) -> Result<MatrixSymbol, CliError> {
    Ok(assemble_product_symbol(&fixtures::product_blaschke_times_monomial(s)?, 1)?)
}

pub fn run(id: &str) -> Result<Value, CliError> {
    match id {
        "deg21-fixture" => deg21_fixture(),
        "blaschke-chain" => blaschke_chain(),
        "blaschke-z1z2" => blaschke_z1z2(),
        "z1-times-theta" => z1_times_theta(),
        "equiv-z1-theta" => equiv_z1_theta(),
        "equal-ranges" => equal_ranges(),
        "closed-disk" => closed_disk(),
        "openness-phi" => openness_phi(),
        "scalar-disk" => scalar_disk(),
        _ => Err(CliError::Validation(format!("unknown example `{id}`; known: {}", IDS.join(", ")))),
    }
}

fn deg21_fixture() -> Result<Value, CliError> {
    let fx = fixtures::deg21_fixture()?;
    let e = exceptional_set(&fx.rif, 512, EXCEPTIONAL_TOL);
    let m = assemble_product_symbol(std::slice::from_ref(&fx), 1)?;
    Ok(json!({
        "degree": [fx.rif.m, fx.rif.n],
        "exceptional_set": pairs(&e.points),
        "symbol": symbol_json(&m),
        "eigenvalues_at_one": pairs(&sorted(symbol_eigenvalues(&m, c64(1.0, 0.0)))),
    }))
}

fn blaschke_chain() -> Result<Value, CliError> {
    let zeros = zeros_fixture();
    let m = assemble_product_symbol(&fixtures::blaschke_chain(&zeros)?, 1)?;
    let t = takenaka_matrix(&BlaschkeProduct::new(zeros.clone(), c64(1.0, 0.0))?);
    let value = m.eval(c64(1.0, 0.0));
    Ok(json!({
        "zeros": pairs(&zeros),
        "symbol": matrix(&value),
        "takenaka": matrix(&t),
        "transpose_defect": max_diff(&value, &t.transpose()),
    }))
}

fn blaschke_z1z2() -> Result<Value, CliError> {
    let zeros = zeros_fixture();
    let m = assemble_product_symbol(&fixtures::blaschke_of_product(&zeros)?, 1)?;
    let t = takenaka_matrix(&BlaschkeProduct::new(zeros.clone(), c64(1.0, 0.0))?);
    let u = c64(0.3, -0.2);
    Ok(json!({
        "zeros": pairs(&zeros),
        "symbol": symbol_json(&m),
        "defect_vs_u_times_transpose": max_diff(&m.eval_u(u), &(t.transpose() * u)),
    }))
}

fn z1_times_theta() -> Result<Value, CliError> {
    let (first, second) = fixtures::shift_times_corner()?;
    Ok(json!({
        "first_order": symbol_json(&assemble_product_symbol(&first, 1)?),
        "second_order": symbol_json(&assemble_product_symbol(&second, 1)?),
    }))
}

fn equiv_z1_theta() -> Result<Value, CliError> {
    let (first, second) = fixtures::shift_times_corner()?;
    let rep = compare_factorizations(&first, &second, 512, 1e-10)?;
    let u = rep.u.as_ref().ok_or_else(|| CliError::Numerical("no unitary constructed".into()))?;
    let sim = rep.similarity.as_ref().ok_or_else(|| CliError::Numerical("similarity not checked".into()))?;
    let (constant_defect, _) = best_constant_unitary(&rep.symbol1, &rep.symbol2, 256)?;
    let rel = toeplitz_relation(u, &rep.symbol1, &rep.symbol2, 256);
    Ok(json!({
        "pass": rep.pass(),
        "u": report::rational_matrix(u),
        "u_at_zero": matrix(&u.eval(c64(0.0, 0.0))),
        "similarity_pass": sim.pass,
        "similarity_below_1e-10": sim.max_similarity_defect < 1e-10 && sim.max_unitarity_defect < 1e-10,
        "constant_unitary_defect": constant_defect,
        "compression_defect_below_1e-2": rel.compression_defect < 1e-2,
        "reverse_defect": rel.reverse_defect,
    }))
}

fn equal_ranges() -> Result<Value, CliError> {
    let mut rows = Vec::new();
    for t in [0.25, 0.5, 0.75] {
        let s = t * (2.0 - t);
        let a = sweep_closure(&phi(t)?, DEFAULT_TAU_GRID, DEFAULT_ANGLES);
        let b = sweep_closure(&psi(s)?, DEFAULT_TAU_GRID, DEFAULT_ANGLES);
        let predicted = t + (1.0 - t * t) / 2.0;
        rows.push(json!({
            "t": t,
            "predicted_radius": predicted,
            "s": s,
            "predicted_radius_s": (s + 1.0) / 2.0,
            "radius_phi": a.max_modulus(),
            "radius_psi": b.max_modulus(),
            "within_1e-5": (a.max_modulus() - predicted).abs() < 1e-5
                && (b.max_modulus() - predicted).abs() < 1e-5
                && a.hausdorff(&b) < 1e-5,
        }));
    }
    Ok(json!({ "rows": rows }))
}

fn closed_disk() -> Result<Value, CliError> {
    let m = assemble_product_symbol(&fixtures::shift_times_monomial()?, 1)?;
    let sweep = sweep_closure(&m, DEFAULT_TAU_GRID, DEFAULT_ANGLES);
    let cloud = finite_section_oracle(&m, 256, 64, 0, 1);
    Ok(json!({
        "sweep_radius": sweep.max_modulus(),
        "section_blocks": 256,
        "section_radius": cloud.radius,
    }))
}

fn openness_phi() -> Result<Value, CliError> {
    let mut rows = Vec::new();
    for t in [0.2, 0.4, 0.65, 0.7, 0.9] {
        let v = openness_test(&phi(t)?, DEFAULT_ALPHA_GRID, DEFAULT_TAU_GRID);
        rows.push(json!({
            "t": t,
            "status": if v.status == OpennessStatus::Open { "open" } else { "inconclusive" },
            "margin": v.margin,
            "witness": v.witness.map(|(a, b)| [a, b]),
        }));
    }
    Ok(json!({ "rows": rows }))
}

fn scalar_disk() -> Result<Value, CliError> {
    let f = scalar_symbol(&fixtures::corner_singular()?)?;
    let range = scalar_range(&f, 128);
    let center = c64(2.0 / 3.0, 0.0);
    let dist: Vec<f64> = range.boundary.iter().map(|w| (w - center).norm()).collect();
    Ok(json!({
        "center": pair(center),
        "boundary_min_distance": dist.iter().copied().fold(f64::INFINITY, f64::min),
        "boundary_max_distance": dist.iter().copied().fold(0.0, f64::max),
        "radius": range.radius,
    }))
}

/// Structural comparison with numeric tolerance; returns the path of the
/// first difference.
pub fn compare(got: &Value, want: &Value, path: &str) -> Result<(), String> {
    match (got, want) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap_or(f64::NAN), b.as_f64().unwrap_or(f64::NAN));
            if (a - b).abs() <= GOLDEN_TOL * (1.0 + b.abs()) {
                Ok(())
            } else {
                Err(format!("{path}: {a} vs {b}"))
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Err(format!("{path}: length {} vs {}", a.len(), b.len()));
            }
            a.iter().zip(b).enumerate().try_for_each(|(k, (x, y))| compare(x, y, &format!("{path}[{k}]")))
        }
        (Value::Object(a), Value::Object(b)) => {
            if a.len() != b.len() || a.keys().any(|k| !b.contains_key(k)) {
                return Err(format!("{path}: keys differ"));
            }
            a.iter().try_for_each(|(k, x)| compare(x, &b[k], &format!("{path}.{k}")))
        }
        _ if got == want => Ok(()),
        _ => Err(format!("{path}: {got} vs {want}")),
    }
}
