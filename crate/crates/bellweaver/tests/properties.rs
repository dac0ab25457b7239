use std::collections::BTreeMap;

use bellweaver::expr::{parse_projector, parse_terms};
use bellweaver::formats::StateFile;
use bellweaver_core::modes::{Path, Pol, SingleModeLabel, TwoPhotonState};
use bellweaver_core::C64;
use proptest::prelude::*;

fn label() -> impl Strategy<Value = SingleModeLabel> {
    (0..4usize, any::<bool>(), -6..=6i32).prop_map(|(p, h, l)| SingleModeLabel::new(Path::ALL[p], if h { Pol::H } else { Pol::V }, l))
}

fn amplitude() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_filter("nonzero", |(re, im)| re.abs() + im.abs() > 1e-6).prop_map(|(re, im)| C64::new(re, im))
}

fn state() -> impl Strategy<Value = TwoPhotonState> {
    prop::collection::btree_map((label(), label()), amplitude(), 1..12).prop_map(TwoPhotonState::from_terms)
}

fn render(terms: &BTreeMap<i32, f64>) -> String {
    let mut out = String::new();
    for (k, (l, c)) in terms.iter().enumerate() {
        let sign = if *c < 0.0 { "-" } else if k > 0 { "+" } else { "" };
        out.push_str(&format!("{sign} {}*|{l}> ", c.abs()));
    }
    out
}

proptest! {
    #[test]
    fn state_files_round_trip_exactly(s in state()) {
        let text = serde_json::to_string(&StateFile::from_state(&s, None)).unwrap();
        let back: StateFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_state().unwrap(), s);
    }

    #[test]
    fn rendered_expressions_parse_back(terms in prop::collection::btree_map(-9..=9i32, (0.01..5.0f64, any::<bool>()), 1..6)) {
        let terms: BTreeMap<i32, f64> = terms.into_iter().map(|(l, (c, neg))| (l, if neg { -c } else { c })).collect();
        let parsed = parse_terms(&render(&terms)).unwrap();
        prop_assert_eq!(parsed.len(), terms.len());
        for ((l, c), (pl, pc)) in terms.iter().zip(&parsed) {
            prop_assert_eq!(l, pl);
            prop_assert_eq!(C64::new(*c, 0.0), *pc);
        }
    }

    #[test]
    fn projectors_are_normalized(terms in prop::collection::btree_map(-9..=9i32, (0.01..5.0f64, any::<bool>()), 1..6)) {
        let terms: BTreeMap<i32, f64> = terms.into_iter().map(|(l, (c, neg))| (l, if neg { -c } else { c })).collect();
        let p = parse_projector(&render(&terms), Path::C).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parser_never_panics(input in "[ |<>0-9i*+().e-]{0,24}") {
        if let Err(e) = parse_terms(&input) {
            prop_assert!(e.position >= 1 && e.position <= input.chars().count() + 1);
        }
    }
}
