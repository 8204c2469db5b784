use std::collections::BTreeSet;

use super::*;
use crate::expr::{evaluate_exact, write_catalog_file, ExactEnv};

fn ids() -> BTreeSet<&'static str> {
    builtin_identities().iter().map(|r| r.id.as_str()).collect()
}

#[test]
fn builtin_parses_and_is_large() {
    let recs = builtin_identities();
    assert!(recs.len() >= 70, "{} records", recs.len());
    for g in Group::ALL {
        assert!(recs.iter().any(|r| r.group == g), "group {g} is empty");
    }
}

#[test]
fn every_label_is_covered() {
    let ids = ids();
    let folded: Vec<&str> = FOLDED_LABELS.iter().map(|(l, _)| *l).collect();
    for label in IN_SCOPE_LABELS {
        if let Some((_, host)) = FOLDED_LABELS.iter().find(|(l, _)| l == label) {
            assert!(ids.contains(host), "{label} folds into missing {host}");
        } else {
            assert!(ids.contains(label), "no record for {label}");
        }
    }
    // every record is either a label or a declared supplement
    for id in &ids {
        assert!(
            IN_SCOPE_LABELS.contains(id) || SUPPLEMENTARY_IDS.contains(id),
            "{id} is neither in scope nor supplementary"
        );
        assert!(!folded.contains(id));
    }
}

#[test]
fn anchors_carry_a_quote() {
    for r in builtin_identities() {
        let open = r.paper_anchor.find('"').unwrap_or_else(|| panic!("{}: no quote", r.id));
        let close = r.paper_anchor.rfind('"').unwrap();
        assert!(close > open + 1, "{}: empty quote", r.id);
    }
}

#[test]
fn grid_sizes() {
    let recs = builtin_identities();
    let n = |id: &str| find_identity(recs, id).unwrap().case_count();
    assert_eq!(n("Theorem4"), 60);
    assert_eq!(n("Theorem2"), 48);
    assert_eq!(n("Rkb"), 9);
    assert_eq!(n("ScJ1"), 13);
    assert_eq!(n("New3c"), 36);
    assert_eq!(instantiate_cases(find_identity(recs, "Theorem4").unwrap()).unwrap().len(), 60);
}

#[test]
fn kinds_and_floors_are_consistent() {
    for r in builtin_identities() {
        assert_eq!(r.kind == Kind::Exact, r.tol_class == TolClass::Exact, "{}", r.id);
        assert_eq!(r.kind == Kind::NegativeControl, r.expected_floor.is_some(), "{}", r.id);
    }
}

#[test]
fn exact_records_evaluate_in_rationals() {
    for r in builtin_identities().iter().filter(|r| r.kind == Kind::Exact) {
        for c in instantiate_cases(r).unwrap() {
            let mut env = ExactEnv::new();
            for (n, v) in &c.env {
                env.set(n, v.exact());
            }
            let l = evaluate_exact(&r.lhs, &env).unwrap_or_else(|e| panic!("{} {:?}: {e}", r.id, c.env));
            let rh = evaluate_exact(&r.rhs, &env).unwrap_or_else(|e| panic!("{} {:?}: {e}", r.id, c.env));
            assert_eq!(l, rh, "{} {:?}", r.id, c.env);
        }
    }
}

#[test]
fn cases_run_last_dimension_fastest_and_derive_q() {
    let r = find_identity(builtin_identities(), "Cor1").unwrap();
    let cs = instantiate_cases(r).unwrap();
    assert_eq!(cs.len(), 45);
    let text = |c: &TestCase, k: &str| c.env.iter().find(|(n, _)| n == k).unwrap().1.text.clone();
    assert_eq!(text(&cs[0], "a"), "1/2");
    assert_eq!(text(&cs[1], "a"), "1");
    assert_eq!(text(&cs[0], "q"), "3/8");
    assert_eq!(cs[0].env.iter().find(|(n, _)| n == "q").unwrap().1.value, 0.375);
    assert_eq!(text(&cs[5], "n"), "1");
}

#[test]
fn zero_rhs_is_absolute() {
    let r = find_identity(builtin_identities(), "Sx").unwrap();
    assert!(instantiate_cases(r).unwrap()[0].tol.absolute);
    let r = find_identity(builtin_identities(), "Cor1").unwrap();
    assert!(!instantiate_cases(r).unwrap()[0].tol.absolute);
}

#[test]
fn empty_dimension_is_rejected() {
    let mut r = find_identity(builtin_identities(), "Cor1").unwrap().clone();
    r.grid[0].1.clear();
    assert!(matches!(instantiate_cases(&r), Err(CatalogError::EmptyDimension { .. })));
    let mut r = find_identity(builtin_identities(), "Cor1").unwrap().clone();
    let d = r.grid[0].clone();
    r.grid.push(d);
    assert!(matches!(instantiate_cases(&r), Err(CatalogError::DuplicateName { .. })));
}

#[test]
fn export_round_trips() {
    let recs = builtin_identities();
    let text = write_catalog_file(recs);
    let back = parse_catalog_file(&text).unwrap();
    assert_eq!(back.as_slice(), recs);
}

#[test]
fn grid_value_forms() {
    assert_eq!(GridValue::parse("3/8").unwrap().value, 0.375);
    assert_eq!(GridValue::parse("-1.5").unwrap().value, -1.5);
    assert!(GridValue::parse("1/0").is_none());
    assert!(GridValue::parse("x").is_none());
    assert_eq!(Group::parse("c"), Some(Group::C));
    assert_eq!(Kind::parse("negative_control"), Some(Kind::NegativeControl));
    assert_eq!(TolClass::parse("med").unwrap().threshold(), 1e-8);
}
