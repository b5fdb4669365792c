mod common;

use std::collections::BTreeMap;

use common::small_models;
use inqlab::formula::substitute_standard;
use inqlab::io::{decode_algebra, decode_model};
use inqlab::team::{Model, TeamEvaluator};
use inqlab::{dnf, parse, Formula};
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        prop::sample::select(vec!["p", "q", "r", "dep", "x1"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        (0..5u8, inner.clone(), inner).prop_map(|(op, l, r)| match op {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            2 => Formula::imp(l, r),
            3 => Formula::tensor(l, r),
            _ => Formula::not(l),
        })
    })
}

/// Formulas over `p` and `q` only, small enough for exhaustive team checks.
fn small_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Bot), Just(Formula::atom("p")), Just(Formula::atom("q"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        (0..5u8, inner.clone(), inner).prop_map(|(op, l, r)| match op {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            2 => Formula::imp(l, r),
            3 => Formula::tensor(l, r),
            _ => Formula::not(l),
        })
    })
}

fn standard_formula() -> impl Strategy<Value = Formula> {
    small_formula().prop_filter("standard", Formula::is_standard)
}

fn supported_teams(m: &Model, phi: &Formula) -> Vec<bool> {
    let mut ev = TeamEvaluator::new(m, phi);
    m.frame()
        .full_team()
        .subsets()
        .map(|t| ev.supports(t).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(f in formula()) {
        prop_assume!(f.size() <= 40);
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn dnf_is_standard_and_equivalent(f in small_formula()) {
        let parts = dnf(&f);
        prop_assert!(parts.iter().all(Formula::is_standard));
        let joined = Formula::disj(parts).unwrap();
        for m in small_models(2, &["p", "q"]) {
            prop_assert_eq!(supported_teams(&m, &f), supported_teams(&m, &joined));
        }
    }

    #[test]
    fn standard_substitution_is_semantic(f in small_formula(), a in standard_formula(), b in standard_formula()) {
        let sigma: BTreeMap<String, Formula> = [("p".to_string(), a.clone()), ("q".to_string(), b.clone())].into();
        let g = substitute_standard(&f, &sigma).unwrap();
        for m in small_models(2, &["p", "q"]) {
            // move the truth sets of the substituents into a fresh model
            let frame = m.frame().clone();
            let truth_of = |s: &Formula| {
                let mut ev = TeamEvaluator::new(&m, s);
                inqlab::Team::from_worlds((0..frame.size()).filter(|&w| ev.supports(inqlab::Team::singleton(w)).unwrap()))
            };
            let shifted = Model::new(frame.clone(), [("p".to_string(), truth_of(&a)), ("q".to_string(), truth_of(&b))].into()).unwrap();
            prop_assert_eq!(supported_teams(&m, &g), supported_teams(&shifted, &f));
        }
    }

    #[test]
    fn parser_never_panics(s in "[a-z_|~&\\\\/()*;, ->]{0,40}") {
        let _ = parse(&s);
    }

    #[test]
    fn decoders_never_panic(s in "\\PC{0,120}") {
        let _ = decode_model(&s);
        let _ = decode_algebra(&s);
    }

    #[test]
    fn decoders_never_panic_on_near_json(
        worlds in prop::collection::vec("w[0-9]", 0..4),
        order in prop::collection::vec(("w[0-9]", "w[0-9]"), 0..4),
        elems in prop::collection::vec("[0-9a-c]", 0..5),
        leq in prop::collection::vec(("[0-9a-c]", "[0-9a-c]"), 0..6),
    ) {
        let model = serde_json::json!({"worlds": worlds, "order": order, "valuation": {}});
        let _ = decode_model(&model.to_string());
        let zero = elems.first().cloned().unwrap_or_default();
        let alg = serde_json::json!({"elements": elems, "leq": leq, "zero": zero});
        let _ = decode_algebra(&alg.to_string());
    }
}

#[test]
fn non_standard_substituent_is_rejected() {
    let sigma: BTreeMap<String, Formula> = [("p".to_string(), parse("q \\/ r").unwrap())].into();
    assert!(substitute_standard(&parse("p -> p").unwrap(), &sigma).is_err());
}
