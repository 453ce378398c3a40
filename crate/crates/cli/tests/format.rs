use std::f64::consts::TAU;

use proptest::prelude::*;
use shiftlab::agler::Branch;
use shiftlab::poly::{BivarPoly, UnivarPoly};
use shiftlab::rational::RationalScalar;
use shiftlab::rif::make_rif;
use shiftlab::symbol::{MatrixSymbol, SymbolVar};
use shiftlab::{c64, fixtures, C64};
use shiftlab_cli::format::{emit, parse, FactorKind, FactorSpec, Record};
use shiftlab_cli::CliError;

fn complex() -> impl Strategy<Value = C64> {
    (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(a, b)| c64(a, b))
}

fn bivar() -> impl Strategy<Value = BivarPoly> {
    (0..4usize, 0..4usize).prop_flat_map(|(d1, d2)| {
        proptest::collection::vec(complex(), (d1 + 1) * (d2 + 1))
            .prop_map(move |v| BivarPoly::from_grid(v.chunks(d2 + 1).map(|r| r.to_vec()).collect()))
    })
}

/// `1 + a z1 + b z2` with `|a| + |b| < 1` has no zeros on the closed bidisk.
fn stable_rif() -> impl Strategy<Value = shiftlab::rif::Rif> {
    (0.05f64..0.45, 0.0f64..TAU, 0.05f64..0.45, 0.0f64..TAU, 0.0f64..TAU).prop_filter_map(
        "atoral",
        |(r1, a1, r2, a2, l)| {
            let p = BivarPoly::from_terms(&[
                (0, 0, c64(1.0, 0.0)),
                (1, 0, C64::from_polar(r1, a1)),
                (0, 1, C64::from_polar(r2, a2)),
            ]);
            make_rif(p, 1, 1, C64::from_polar(1.0, l)).ok()
        },
    )
}

fn rational() -> impl Strategy<Value = RationalScalar> {
    (proptest::collection::vec(complex(), 1..4), proptest::collection::vec(complex(), 1..3))
        .prop_map(|(n, d)| RationalScalar::new(UnivarPoly::new(n), UnivarPoly::new(d)))
}

fn symbol() -> impl Strategy<Value = MatrixSymbol> {
    (1..4usize, any::<bool>()).prop_flat_map(|(m, flip)| {
        proptest::collection::vec(rational(), m * m).prop_map(move |v| {
            let entries = v.chunks(m).map(|r| r.to_vec()).collect();
            let labels = (0..m).map(|k| format!("basis {k}")).collect();
            let var = if flip { SymbolVar::ConjZ1 } else { SymbolVar::ConjZ2 };
            MatrixSymbol::new(entries, labels, var).unwrap()
        })
    })
}

fn round_trip(r: &Record) -> Record {
    parse(&emit(r)).unwrap_or_else(|e| panic!("{e}\n{}", emit(r)))
}

proptest! {
    #[test]
    fn poly_records_round_trip(p in bivar()) {
        let r = Record::Poly(p);
        prop_assert_eq!(round_trip(&r), r);
    }

    #[test]
    fn rif_records_round_trip(rif in stable_rif()) {
        let r = Record::Rif(rif);
        prop_assert_eq!(round_trip(&r), r);
    }

    #[test]
    fn symbol_records_round_trip(m in symbol()) {
        let r = Record::Symbol(m);
        prop_assert_eq!(round_trip(&r), r);
    }
}

#[test]
fn product_records_round_trip() {
    let fx = fixtures::deg21_fixture().unwrap();
    let s = c64(3f64.sqrt() / 2.0, 0.0);
    let explicit = FactorSpec {
        rif: fx.rif.clone(),
        kind: FactorKind::Explicit {
            basis2: vec![BivarPoly::constant(s), BivarPoly::monomial(1, 0, s)],
            basis1: vec![BivarPoly::monomial(2, 0, s)],
        },
    };
    assert_eq!(explicit.decompose().unwrap(), fx);
    let branch = FactorSpec { rif: fixtures::corner_singular().unwrap(), kind: FactorKind::Branch(Branch::PlusMinus) };
    let r = Record::Product(vec![branch, explicit]);
    assert_eq!(round_trip(&r), r);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# leading\nshiftlab-v1 poly\n\nsize 1 0\n  # indented\nterm 0 0 1 0\nterm 1 0 0.5 -2\n";
    let want = BivarPoly::from_terms(&[(0, 0, c64(1.0, 0.0)), (1, 0, c64(0.5, -2.0))]);
    assert_eq!(parse(text).unwrap(), Record::Poly(want));
}

#[test]
fn malformed_records_are_parse_errors() {
    for text in [
        "",
        "shiftlab-v2 poly\n",
        "shiftlab-v1 widget\n",
        "shiftlab-v1 poly\nsize 1\n",
        "shiftlab-v1 poly\nsize 1 1\nterm 2 0 1 0\n",
        "shiftlab-v1 poly\nsize 1 1\nterm 0 0 one 0\n",
        "shiftlab-v1 rif\nlambda 1 0\nterm 0 0 1 0\n",
        "shiftlab-v1 product\nfactor minusplus\ndegree 1 0\nlambda 1 0\nterm 0 0 1 0\n",
        "shiftlab-v1 symbol\nentry 0 0 num 1 0 den 1 0\n",
    ] {
        match parse(text) {
            Err(CliError::Parse(msg)) => assert!(!msg.is_empty()),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn unstable_rif_records_fail_validation() {
    let text = "shiftlab-v1 rif\ndegree 1 0\nlambda 1 0\nterm 0 0 -0.5 0\nterm 1 0 1 0\n";
    assert!(matches!(parse(text), Err(CliError::Validation(_))));
}
