use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subint_core::batch;
use subint_core::document::{read_document, write_document, ProofDocument};
use subint_core::generate::{detour_classes, hilbert_proof, nd_derivation, nd_with_detour, random_formula, HilbertConfig};
use subint_core::hilbert::check_hilbert;
use subint_core::normalize::segments;
use subint_core::translate::{hilbert_to_nd, nd_to_hilbert};
use subint_core::{
    check_nd, cut_measure, find_cuts, is_normal, normalize, parse, CutMeasure, Derivation, Formula, LogicSpec, NdRule,
};

fn preset(i: usize) -> (&'static str, LogicSpec) {
    LogicSpec::presets().swap_remove(i)
}

fn detoured(seed: u64, logic: &LogicSpec) -> Derivation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class = *detour_classes(logic).choose(&mut rng).unwrap();
    nd_with_detour(&mut rng, logic, class, 3, 0.2)
}

// Independent oracles, written against the rule table rather than the library helpers.

fn depth(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) | Formula::Bottom => 0,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + depth(a).max(depth(b)),
    }
}

fn major_index(r: NdRule) -> Option<usize> {
    match r {
        NdRule::AndE1 | NdRule::AndE2 | NdRule::OrE | NdRule::BotE => Some(0),
        NdRule::ImpE => Some(1),
        _ => None,
    }
}

fn ends_in_intro_or_or_e(d: &Derivation) -> bool {
    use NdRule::*;
    matches!(
        d.rule_id(),
        Some(
            AndI | OrI1 | OrI2 | ImpI | ImpI1 | ImpI2 | ImpIN | ImpIN2 | ImpIHatC | ImpIHatD | ImpIConj | ImpIDisj
                | ImpITrans | OrE
        )
    )
}

fn oracle_cuts(d: &Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
    if let Some(k) = d.rule_id().and_then(major_index) {
        let major = &d.premises()[k];
        if ends_in_intro_or_or_e(major) {
            let mut p = path.clone();
            p.push(k);
            out.push((p, depth(&major.conclusion) + 1));
        }
    }
    for (i, p) in d.premises().iter().enumerate() {
        path.push(i);
        oracle_cuts(p, path, out);
        path.pop();
    }
}

fn all_paths(d: &Derivation) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    d.visit(&mut |p, _| out.push(p.to_vec()));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formula_display_parses_back(seed: u64, size in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, size);
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn nd_document_round_trips(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let d = detoured(seed, &logic);
        let doc = ProofDocument::nd(logic, d);
        let back = read_document(&write_document(&doc)).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn hilbert_document_round_trips(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = hilbert_proof(&mut rng, &logic, HilbertConfig::default());
        let doc = ProofDocument::hilbert(logic, g.assumptions, g.proof);
        let back = read_document(&write_document(&doc)).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn cuts_match_oracle(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let d = detoured(seed, &logic);
        let mut expected = Vec::new();
        oracle_cuts(&d, &mut Vec::new(), &mut expected);
        let got: Vec<(Vec<usize>, usize)> = find_cuts(&d).into_iter().map(|c| (c.position, c.rank)).collect();
        prop_assert_eq!(&got, &expected);
        let top = expected.iter().map(|c| c.1).max().unwrap_or(0);
        prop_assert_eq!(cut_measure(&d).d, top);
        prop_assert_eq!(cut_measure(&d) == CutMeasure::default(), is_normal(&d));
    }

    #[test]
    fn segments_cover_every_occurrence(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let d = detoured(seed, &logic);
        let segs = segments(&d);
        for path in all_paths(&d) {
            let node = d.at(&path).unwrap();
            let n = segs.iter().filter(|s| s.positions.contains(&path)).count();
            // an OrE conclusion closes one segment per chain of minors above it
            if node.rule_id() == Some(NdRule::OrE) {
                prop_assert!(n >= 1, "{path:?}");
            } else {
                prop_assert_eq!(n, 1, "{:?}", path);
            }
        }
        for s in &segs {
            let formulas: BTreeSet<&Formula> = s.positions.iter().map(|p| &d.at(p).unwrap().conclusion).collect();
            prop_assert_eq!(formulas.len(), 1);
        }
    }

    #[test]
    fn normalization_preserves_judgment(seed: u64, i in 0usize..9) {
        let (name, logic) = preset(i);
        let d = detoured(seed, &logic);
        prop_assert!(check_nd(&d, &logic).accepted, "{name}: generated derivation rejected");
        let n = normalize(&d, &logic).unwrap();
        prop_assert!(is_normal(&n));
        prop_assert!(check_nd(&n, &logic).accepted);
        prop_assert_eq!(&n.conclusion, &d.conclusion);
        prop_assert!(n.open_assumptions().is_subset(&d.open_assumptions()));
    }

    #[test]
    fn normalization_is_idempotent(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let n = normalize(&detoured(seed, &logic), &logic).unwrap();
        prop_assert_eq!(normalize(&n, &logic).unwrap(), n);
    }

    #[test]
    fn translations_preserve_judgment(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = hilbert_proof(&mut rng, &logic, HilbertConfig::default());
        let allowed: BTreeSet<Formula> = g.assumptions.iter().cloned().collect();
        let d = hilbert_to_nd(&g.proof, &logic, &allowed).unwrap();
        prop_assert!(check_nd(&d, &logic).accepted);
        prop_assert_eq!(Some(&d.conclusion), g.proof.conclusion());
        prop_assert!(d.open_assumptions().is_subset(&allowed));
        let h = nd_to_hilbert(&d, &logic).unwrap();
        prop_assert!(check_hilbert(&h, &logic, &d.open_assumptions()).accepted);
        prop_assert_eq!(h.conclusion(), Some(&d.conclusion));
    }

    #[test]
    fn acceptance_is_monotone_in_available_rules(seed: u64, i in 0usize..9) {
        let (_, logic) = preset(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = nd_derivation(&mut rng, &logic, 2, 3, 0.2);
        let used = d.rules_used();
        for (name, other) in LogicSpec::presets() {
            if used.iter().all(|r| r.available_in(&other)) {
                prop_assert!(check_nd(&d, &other).accepted, "rejected in {}", name);
            }
        }
    }
}

#[test]
fn parallel_and_sequential_batches_agree() {
    for (_, logic) in LogicSpec::presets() {
        let ds: Vec<Derivation> = (0..24).map(|s| detoured(s, &logic)).collect();
        assert_eq!(batch::normalize_all(&ds, &logic), batch::normalize_all_sequential(&ds, &logic));
        let docs: Vec<ProofDocument> = ds.into_iter().map(|d| ProofDocument::nd(logic.clone(), d)).collect();
        let opts = Default::default();
        assert_eq!(batch::check_all(&docs, opts), batch::check_all_sequential(&docs, opts));
    }
}
