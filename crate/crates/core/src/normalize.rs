//! Cut detection, the (d, l) cut measure and the reduction driver.
//!
//! Reductions work on derivations whose discharge labels are canonical, so every
//! label names exactly one binder. Under that invariant a leaf carrying label `n`
//! can be replaced by any derivation without capture, and copies of a
//! subderivation may share labels because they sit in disjoint subtrees. Each
//! step canonicalizes its output again.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::logic::LogicSpec;
use crate::natded::{check_nd, Derivation, Inference, NdRule};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutOccurrence {
    pub position: Vec<usize>,
    pub formula: Formula,
    pub rank: usize,
}

/// A maximal run of occurrences of one formula linked through OrE minor premises,
/// listed from the top occurrence down.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Segment {
    pub positions: Vec<Vec<usize>>,
}

/// Lexicographically ordered pair of the cut rank `d` and `l`, the number of
/// introduction or OrE conclusions lying on segments that end in a cut of rank `d`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Serialize)]
pub struct CutMeasure {
    pub d: usize,
    pub l: usize,
}

impl fmt::Display for CutMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d, self.l)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Conversion {
    AndDetour,
    OrDetour,
    ImpDetour,
    Permutation,
    Congruence,
    CongruenceN,
    CongruenceN2,
    HatC,
    HatD,
    Conj,
    Disj,
    Trans,
}

impl Conversion {
    pub fn letter(self) -> char {
        match self {
            Conversion::AndDetour => 'a',
            Conversion::OrDetour => 'b',
            Conversion::ImpDetour => 'c',
            Conversion::Permutation => 'd',
            Conversion::Congruence => 'e',
            Conversion::CongruenceN => 'f',
            Conversion::CongruenceN2 => 'g',
            Conversion::HatC => 'h',
            Conversion::HatD => 'i',
            Conversion::Conj => 'j',
            Conversion::Disj => 'k',
            Conversion::Trans => 'l',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Conversion::AndDetour => "and-detour",
            Conversion::OrDetour => "or-detour",
            Conversion::ImpDetour => "imp-detour",
            Conversion::Permutation => "permutation",
            Conversion::Congruence => "congruence",
            Conversion::CongruenceN => "congruence-n",
            Conversion::CongruenceN2 => "congruence-n2",
            Conversion::HatC => "hat-c",
            Conversion::HatD => "hat-d",
            Conversion::Conj => "conj",
            Conversion::Disj => "disj",
            Conversion::Trans => "trans",
        }
    }
}

impl fmt::Display for Conversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.letter(), self.name())
    }
}

/// One reduction: where it happened, which conversion, and the measure around it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Step {
    pub position: Vec<usize>,
    pub conversion: Conversion,
    pub before: CutMeasure,
    pub after: CutMeasure,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pos: Vec<String> = self.position.iter().map(usize::to_string).collect();
        write!(
            f,
            "at [{}] {}: {} -> {}",
            pos.join("."),
            self.conversion,
            self.before,
            self.after
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Normalization {
    pub derivation: Derivation,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("derivation is not accepted: {0}")]
    Rejected(String),
    #[error("no reducible cut")]
    NoReducibleCut,
    #[error("stuck: no cut among {cuts} can be reduced")]
    Stuck { cuts: usize },
    #[error("kernel defect: step budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
}

/// True when every major premise of an elimination is an assumption or the
/// conclusion of an elimination other than OrE.
pub fn is_normal(d: &Derivation) -> bool {
    find_cuts(d).is_empty()
}

fn is_cut_source(d: &Derivation) -> bool {
    match d.rule_id() {
        Some(r) => r.is_introduction() || r == NdRule::OrE,
        None => false,
    }
}

/// Every major premise that is an introduction or OrE conclusion, in pre-order.
pub fn find_cuts(d: &Derivation) -> Vec<CutOccurrence> {
    let mut out = Vec::new();
    d.visit(&mut |path, node| {
        let Some(k) = node.rule_id().and_then(NdRule::major_premise) else {
            return;
        };
        let major = &node.premises()[k];
        if is_cut_source(major) {
            let mut position = path.to_vec();
            position.push(k);
            out.push(CutOccurrence {
                position,
                formula: major.conclusion.clone(),
                rank: major.conclusion.rank(),
            });
        }
    });
    out
}

/// All maximal segments, ordered by the pre-order position of their top.
pub fn segments(d: &Derivation) -> Vec<Segment> {
    let mut out = Vec::new();
    d.visit(&mut |path, node| {
        if node.rule_id() == Some(NdRule::OrE) {
            return;
        }
        let mut positions = vec![path.to_vec()];
        let mut cur = path.to_vec();
        while let Some((&last, parent)) = cur.split_last() {
            let is_minor = (last == 1 || last == 2) && d.at(parent).and_then(Derivation::rule_id) == Some(NdRule::OrE);
            if !is_minor {
                break;
            }
            cur = parent.to_vec();
            positions.push(cur.clone());
        }
        out.push(Segment { positions });
    });
    out
}

/// Introduction or OrE conclusions feeding the occurrence at `path` through OrE
/// minor premises, including the occurrence itself.
fn segment_sources(d: &Derivation, path: &[usize], into: &mut BTreeSet<Vec<usize>>) {
    let Some(node) = d.at(path) else { return };
    if !is_cut_source(node) {
        return;
    }
    into.insert(path.to_vec());
    if node.rule_id() == Some(NdRule::OrE) {
        for i in [1, 2] {
            let mut p = path.to_vec();
            p.push(i);
            segment_sources(d, &p, into);
        }
    }
}

pub fn cut_measure(d: &Derivation) -> CutMeasure {
    let cuts = find_cuts(d);
    let Some(top) = cuts.iter().map(|c| c.rank).max() else {
        return CutMeasure::default();
    };
    let mut seen = BTreeSet::new();
    for c in cuts.iter().filter(|c| c.rank == top) {
        segment_sources(d, &c.position, &mut seen);
    }
    CutMeasure {
        d: top,
        l: seen.len(),
    }
}

/// A derivation with each elimination's major premise listed first. Children
/// remember their index in the source tree so the view can be turned back.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MajorLeft {
    pub conclusion: Formula,
    pub rule: Option<NdRule>,
    pub labels: Vec<Option<u32>>,
    pub premises: Vec<(usize, MajorLeft)>,
}

impl MajorLeft {
    pub fn to_derivation(&self) -> Derivation {
        match self.rule {
            None => Derivation {
                conclusion: self.conclusion.clone(),
                inference: Inference::Assumption {
                    label: self.labels.first().copied().flatten(),
                },
            },
            Some(rule) => {
                let mut premises: Vec<_> = self.premises.iter().map(|(i, p)| (*i, p.to_derivation())).collect();
                premises.sort_by_key(|(i, _)| *i);
                Derivation::rule(
                    rule,
                    self.labels.clone(),
                    self.conclusion.clone(),
                    premises.into_iter().map(|(_, p)| p).collect(),
                )
            }
        }
    }

    /// Pre-order paths, in source-tree coordinates, visiting the view left to right.
    pub fn preorder_paths(&self) -> Vec<Vec<usize>> {
        fn go(v: &MajorLeft, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(path.clone());
            for (i, p) in &v.premises {
                path.push(*i);
                go(p, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for MajorLeft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(v: &MajorLeft, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let pad = "  ".repeat(indent);
            match v.rule {
                None => {
                    let label = v.labels.first().copied().flatten();
                    match label {
                        Some(l) => writeln!(f, "{pad}[{}]^{l}", v.conclusion),
                        None => writeln!(f, "{pad}[{}]", v.conclusion),
                    }
                }
                Some(rule) => {
                    writeln!(f, "{pad}{} by {rule}", v.conclusion)?;
                    for (_, p) in &v.premises {
                        go(p, indent + 1, f)?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

/// Presentation view placing major premises leftmost.
pub fn order_major_left(d: &Derivation) -> MajorLeft {
    match &d.inference {
        Inference::Assumption { label } => MajorLeft {
            conclusion: d.conclusion.clone(),
            rule: None,
            labels: vec![*label],
            premises: Vec::new(),
        },
        Inference::Rule {
            rule,
            labels,
            premises,
        } => {
            let mut order: Vec<usize> = (0..premises.len()).collect();
            if let Some(k) = rule.major_premise() {
                order.retain(|&i| i != k);
                order.insert(0, k);
            }
            MajorLeft {
                conclusion: d.conclusion.clone(),
                rule: Some(*rule),
                labels: labels.clone(),
                premises: order.into_iter().map(|i| (i, order_major_left(&premises[i]))).collect(),
            }
        }
    }
}

/// Replaces every leaf carrying `label` with `replacement`. Labels must be
/// canonical so the label identifies its binder.
fn subst(d: &Derivation, label: Option<u32>, replacement: &Derivation) -> Derivation {
    let Some(label) = label else {
        return d.clone();
    };
    match &d.inference {
        Inference::Assumption { label: Some(l) } if *l == label => replacement.clone(),
        Inference::Assumption { .. } => d.clone(),
        Inference::Rule {
            rule,
            labels,
            premises,
        } => Derivation::rule(
            *rule,
            labels.clone(),
            d.conclusion.clone(),
            premises.iter().map(|p| subst(p, Some(label), replacement)).collect(),
        ),
    }
}

fn imp_body(d: &Derivation) -> Option<(Option<u32>, &Derivation)> {
    match &d.inference {
        Inference::Rule {
            rule: NdRule::ImpI,
            labels,
            premises,
        } => Some((labels[0], &premises[0])),
        _ => None,
    }
}

/// Applies the conversion for the cut whose major premise sits at `cut`.
/// Returns `None` when the redex has no conversion.
fn convert(root: &Derivation, cut: &[usize]) -> Option<(Derivation, Conversion)> {
    let (_, elim_path) = cut.split_last()?;
    let elim = root.at(elim_path)?;
    let elim_rule = elim.rule_id()?;
    let k = elim_rule.major_premise()?;
    let major = &elim.premises()[k];
    let major_rule = major.rule_id()?;
    let mp = major.premises();
    let ml = major.labels();
    let concl = &elim.conclusion;

    let (new, conv) = match (elim_rule, major_rule) {
        (NdRule::AndE1, NdRule::AndI) => (mp[0].clone(), Conversion::AndDetour),
        (NdRule::AndE2, NdRule::AndI) => (mp[1].clone(), Conversion::AndDetour),
        (NdRule::OrE, NdRule::OrI1 | NdRule::OrI2) => {
            let i = if major_rule == NdRule::OrI1 { 1 } else { 2 };
            let body = &elim.premises()[i];
            (subst(body, elim.labels()[i - 1], &mp[0]), Conversion::OrDetour)
        }
        (NdRule::ImpE, NdRule::ImpI) => (subst(&mp[0], ml[0], &elim.premises()[0]), Conversion::ImpDetour),
        (_, NdRule::OrE) => {
            let push = |m: &Derivation| {
                let mut ps = elim.premises().to_vec();
                ps[k] = m.clone();
                Derivation::rule(elim_rule, elim.labels().to_vec(), concl.clone(), ps)
            };
            let new = Derivation::rule(
                NdRule::OrE,
                ml.to_vec(),
                concl.clone(),
                vec![mp[0].clone(), push(&mp[1]), push(&mp[2])],
            );
            (new, Conversion::Permutation)
        }
        (NdRule::ImpE, NdRule::ImpI1) => {
            // minor [A]^x D2 : B, D0 : [B] D  =>  [A]^x D2 ; D0 : D, then ImpI
            let (x, d2) = imp_body(&elim.premises()[0])?;
            let (a, _) = elim.premises()[0].conclusion.as_imp()?;
            (
                Derivation::imp_i(a.clone(), x, subst(&mp[0], ml[0], d2)),
                Conversion::Congruence,
            )
        }
        (NdRule::ImpE, NdRule::ImpI2) => {
            // minor [B]^x E : A, D1 : [D] B  =>  [D] D1 ; E : A, then ImpI
            let (x, e) = imp_body(&elim.premises()[0])?;
            let (dd, _) = concl.as_imp()?;
            (
                Derivation::imp_i(dd.clone(), ml[1], subst(e, x, &mp[1])),
                Conversion::Congruence,
            )
        }
        (NdRule::ImpE, NdRule::ImpIN) => {
            // labels bind A, D, C, B; minor [A]^x D4 : B
            let (x, d4) = imp_body(&elim.premises()[0])?;
            let (c, dd) = concl.as_imp()?;
            let fresh = root.max_label() + 1;
            let body = Derivation::or_e(
                mp[2].clone(),
                x,
                subst(&mp[3], ml[3], d4),
                Some(fresh),
                Derivation::hyp(dd.clone(), fresh),
            );
            (Derivation::imp_i(c.clone(), ml[2], body), Conversion::CongruenceN)
        }
        (NdRule::ImpE, NdRule::ImpIN2) => {
            // labels bind C, B; minor [A]^x D4 : B
            let (x, d4) = imp_body(&elim.premises()[0])?;
            let (c, dd) = concl.as_imp()?;
            let fresh = root.max_label() + 1;
            let body = Derivation::or_e(
                mp[0].clone(),
                x,
                subst(&mp[1], ml[1], d4),
                Some(fresh),
                Derivation::hyp(dd.clone(), fresh),
            );
            (Derivation::imp_i(c.clone(), ml[0], body), Conversion::CongruenceN2)
        }
        (NdRule::ImpE, NdRule::ImpIHatC) => {
            // minor [C]^y D1 : A, D0 : [A] B
            let (y, d1) = imp_body(&elim.premises()[0])?;
            let (c, _) = concl.as_imp()?;
            (
                Derivation::imp_i(c.clone(), y, subst(&mp[0], ml[0], d1)),
                Conversion::HatC,
            )
        }
        (NdRule::ImpE, NdRule::ImpIHatD) => {
            // minor [B]^y E : C, D0 : [A] B
            let (y, e) = imp_body(&elim.premises()[0])?;
            let (a, _) = concl.as_imp()?;
            (
                Derivation::imp_i(a.clone(), ml[0], subst(e, y, &mp[0])),
                Conversion::HatD,
            )
        }
        (NdRule::ImpE, NdRule::ImpIConj) => {
            let d2 = &elim.premises()[0];
            (
                Derivation::and_i(
                    Derivation::imp_e(d2.clone(), mp[0].clone()),
                    Derivation::imp_e(d2.clone(), mp[1].clone()),
                ),
                Conversion::Conj,
            )
        }
        (NdRule::ImpE, NdRule::ImpIDisj) => {
            let minor = &elim.premises()[0];
            let i = match minor.rule_id()? {
                NdRule::OrI1 => 0,
                NdRule::OrI2 => 1,
                _ => return None,
            };
            (
                Derivation::imp_e(minor.premises()[0].clone(), mp[i].clone()),
                Conversion::Disj,
            )
        }
        (NdRule::ImpE, NdRule::ImpITrans) => {
            let d2 = &elim.premises()[0];
            (
                Derivation::imp_e(Derivation::imp_e(d2.clone(), mp[0].clone()), mp[1].clone()),
                Conversion::Trans,
            )
        }
        _ => return None,
    };
    debug_assert_eq!(&new.conclusion, concl);
    Some((root.replace_at(elim_path, new).canonical_labels(), conv))
}

/// Cuts ordered for selection: highest rank first, then rightmost, where
/// rightmost means latest in a pre-order walk of the major-left view.
fn ordered_cuts(d: &Derivation) -> Vec<CutOccurrence> {
    let order = order_major_left(d).preorder_paths();
    let index = |p: &[usize]| order.iter().position(|q| q == p).unwrap_or(0);
    let mut cuts = find_cuts(d);
    cuts.sort_by_key(|c| (std::cmp::Reverse(c.rank), std::cmp::Reverse(index(&c.position))));
    cuts
}

fn precheck(d: &Derivation, logic: &LogicSpec) -> Result<(), NormalizeError> {
    let report = check_nd(d, logic);
    if report.accepted {
        Ok(())
    } else {
        let why = report
            .diagnostics
            .first()
            .map_or_else(|| "no conclusion".to_string(), |x| x.to_string());
        Err(NormalizeError::Rejected(why))
    }
}

fn step(d: &Derivation, logic: &LogicSpec) -> Result<(Derivation, Step), NormalizeError> {
    let cuts = ordered_cuts(d);
    if cuts.is_empty() {
        return Err(NormalizeError::NoReducibleCut);
    }
    let before = cut_measure(d);
    let mut fallback = None;
    for cut in &cuts {
        let Some((new, conversion)) = convert(d, &cut.position) else {
            continue;
        };
        if !check_nd(&new, logic).accepted {
            continue;
        }
        let after = cut_measure(&new);
        let mut position = cut.position.clone();
        position.pop();
        let s = Step {
            position,
            conversion,
            before,
            after,
        };
        if after < before {
            return Ok((new, s));
        }
        if fallback.is_none() {
            fallback = Some((new, s));
        }
    }
    fallback.ok_or(NormalizeError::Stuck { cuts: cuts.len() })
}

/// Performs one reduction on the rightmost reducible cut of highest rank, preferring
/// a redex whose reduction lowers the cut measure.
pub fn reduce_once(d: &Derivation, logic: &LogicSpec) -> Result<(Derivation, Step), NormalizeError> {
    precheck(d, logic)?;
    step(&d.canonical_labels(), logic)
}

/// Step budget for a derivation: 10 · node count · max rank.
pub fn step_budget(d: &Derivation) -> usize {
    10 * d.size() * d.max_rank().max(1)
}

pub fn normalize_traced(d: &Derivation, logic: &LogicSpec) -> Result<Normalization, NormalizeError> {
    precheck(d, logic)?;
    if is_normal(d) {
        return Ok(Normalization {
            derivation: d.clone(),
            steps: Vec::new(),
        });
    }
    let budget = step_budget(d);
    let mut cur = d.canonical_labels();
    let mut steps = Vec::new();
    while !is_normal(&cur) {
        if steps.len() >= budget {
            return Err(NormalizeError::BudgetExceeded { budget });
        }
        let (next, s) = step(&cur, logic)?;
        steps.push(s);
        cur = next;
    }
    Ok(Normalization {
        derivation: cur,
        steps,
    })
}

pub fn normalize(d: &Derivation, logic: &LogicSpec) -> Result<Derivation, NormalizeError> {
    normalize_traced(d, logic).map(|n| n.derivation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a(s: &str) -> Derivation {
        Derivation::assume(f(s))
    }

    fn wf() -> LogicSpec {
        LogicSpec::wf()
    }

    #[test]
    fn leaf_is_normal() {
        assert!(is_normal(&a("p")));
        assert_eq!(cut_measure(&a("p")), CutMeasure { d: 0, l: 0 });
    }

    #[test]
    fn and_detour_is_a_cut() {
        let d = Derivation::and_e1(Derivation::and_i(a("p"), a("q")));
        assert!(!is_normal(&d));
        let cuts = find_cuts(&d);
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].formula, f("p & q"));
        assert_eq!(cuts[0].rank, 2);
        assert_eq!(cut_measure(&d), CutMeasure { d: 2, l: 1 });
        let (out, s) = reduce_once(&d, &wf()).unwrap();
        assert_eq!(out, a("p"));
        assert_eq!(s.conversion, Conversion::AndDetour);
    }

    #[test]
    fn imp_e_on_assumption_is_normal() {
        let d = Derivation::imp_e(a("p"), a("p -> q"));
        assert!(is_normal(&d));
    }

    #[test]
    fn detour_through_or_e_has_length_two() {
        let ore = Derivation::or_e(
            a("r | s"),
            Some(1),
            Derivation::and_i(a("p"), a("q")),
            Some(2),
            a("p & q"),
        );
        let d = Derivation::and_e1(ore);
        assert_eq!(cut_measure(&d), CutMeasure { d: 2, l: 2 });
        let out = normalize_traced(&d, &wf()).unwrap();
        assert!(is_normal(&out.derivation));
        assert_eq!(out.steps[0].conversion, Conversion::Permutation);
        assert!(out.steps.iter().all(|s| s.after < s.before));
    }

    #[test]
    fn imp_detour_grafts_minor() {
        let body = Derivation::and_i(Derivation::hyp(f("p"), 1), Derivation::hyp(f("p"), 1));
        let d = Derivation::imp_e(a("p"), Derivation::imp_i(f("p"), Some(1), body));
        assert!(check_nd(&d, &wf()).accepted);
        let out = normalize(&d, &wf()).unwrap();
        assert_eq!(out, Derivation::and_i(a("p"), a("p")));
    }

    #[test]
    fn or_detour_selects_branch() {
        let d = Derivation::or_e(
            Derivation::or_i2(f("q"), a("p")),
            Some(1),
            Derivation::or_i2(f("p"), Derivation::hyp(f("q"), 1)),
            Some(2),
            Derivation::or_i1(Derivation::hyp(f("p"), 2), f("q")),
        );
        assert!(check_nd(&d, &wf()).accepted);
        let out = normalize(&d, &wf()).unwrap();
        assert_eq!(out, Derivation::or_i1(a("p"), f("q")));
    }

    #[test]
    fn nested_double_detour() {
        let inner = Derivation::and_e2(Derivation::and_i(a("a"), a("b")));
        let d = Derivation::and_e1(Derivation::and_i(inner, a("c")));
        let out = normalize(&d, &wf()).unwrap();
        assert_eq!(out, a("b"));
    }

    #[test]
    fn normal_input_is_returned_unchanged() {
        let d = Derivation::imp_i(f("p"), Some(7), Derivation::hyp(f("p"), 7));
        assert_eq!(normalize(&d, &wf()).unwrap(), d);
    }

    #[test]
    fn congruence_redex() {
        // ImpE(ImpI [a] a&a, ImpI1([a&a] a, [a] a&a))
        let aa = f("a");
        let dup = |l| Derivation::and_i(Derivation::hyp(aa.clone(), l), Derivation::hyp(aa.clone(), l));
        let d0 = Derivation::and_e1(Derivation::hyp(f("a & a"), 1));
        let ipi = Derivation::rule(
            NdRule::ImpI1,
            vec![Some(1), Some(2)],
            f("(a -> a & a) -> (a -> a)"),
            vec![d0, dup(2)],
        );
        let minor = Derivation::imp_i(aa.clone(), Some(3), dup(3));
        let d = Derivation::imp_e(minor, ipi);
        assert!(check_nd(&d, &wf()).accepted);
        let (once, s) = reduce_once(&d, &wf()).unwrap();
        assert_eq!(s.conversion, Conversion::Congruence);
        let expected = Derivation::imp_i(aa.clone(), Some(1), Derivation::and_e1(dup(1)));
        assert_eq!(once, expected);
        assert!(s.after < s.before);
        let out = normalize(&d, &wf()).unwrap();
        assert_eq!(out, Derivation::imp_i(aa.clone(), Some(1), Derivation::hyp(aa, 1)));
    }

    #[test]
    fn conj_redex() {
        let logic = LogicSpec::new([crate::logic::Extension::C]);
        let d0 = Derivation::imp_i(f("p"), Some(1), Derivation::or_i1(Derivation::hyp(f("p"), 1), f("q")));
        let d1 = Derivation::imp_i(f("p"), Some(2), Derivation::or_i2(f("q"), Derivation::hyp(f("p"), 2)));
        let conj = Derivation::rule(NdRule::ImpIConj, vec![], f("p -> (p | q) & (q | p)"), vec![d0.clone(), d1.clone()]);
        let d = Derivation::imp_e(a("p"), conj);
        assert!(check_nd(&d, &logic).accepted);
        let (once, s) = reduce_once(&d, &logic).unwrap();
        assert_eq!(s.conversion, Conversion::Conj);
        assert_eq!(
            once,
            Derivation::and_i(Derivation::imp_e(a("p"), d0), Derivation::imp_e(a("p"), d1)).canonical_labels()
        );
        assert!(is_normal(&normalize(&d, &logic).unwrap()));
    }

    // The three extension conversions below leave a new cut whose rank can
    // match or exceed the old one; the derivations still normalize.
    fn no_descent(d: &Derivation, logic: &LogicSpec, conversion: Conversion) -> Step {
        assert!(check_nd(d, logic).accepted);
        let (once, s) = reduce_once(d, logic).unwrap();
        assert_eq!(s.conversion, conversion);
        assert!(s.after >= s.before, "{s}");
        assert!(check_nd(&once, logic).accepted);
        let out = normalize(d, logic).unwrap();
        assert!(is_normal(&out));
        assert_eq!(out.conclusion, d.conclusion);
        s
    }

    fn dup(l: u32) -> Derivation {
        Derivation::imp_i(f("p"), Some(l), Derivation::and_i(Derivation::hyp(f("p"), l), Derivation::hyp(f("p"), l)))
    }

    fn fst(l: u32) -> Derivation {
        Derivation::imp_i(f("p & p"), Some(l), Derivation::and_e1(Derivation::hyp(f("p & p"), l)))
    }

    #[test]
    fn trans_can_raise_rank() {
        let logic = LogicSpec::new([crate::logic::Extension::I]);
        let trans = Derivation::rule(NdRule::ImpITrans, vec![], f("p -> p"), vec![dup(1), fst(2)]);
        let s = no_descent(&Derivation::imp_e(a("p"), trans), &logic, Conversion::Trans);
        assert_eq!((s.before, s.after), (CutMeasure { d: 2, l: 1 }, CutMeasure { d: 3, l: 2 }));
    }

    #[test]
    fn conj_can_keep_rank() {
        let logic = LogicSpec::new([crate::logic::Extension::C]);
        let conj = Derivation::rule(NdRule::ImpIConj, vec![], f("p & p -> p & p"), vec![fst(1), fst(2)]);
        let s = no_descent(&Derivation::imp_e(a("p & p"), conj), &logic, Conversion::Conj);
        assert_eq!((s.before, s.after), (CutMeasure { d: 3, l: 1 }, CutMeasure { d: 3, l: 2 }));
    }

    #[test]
    fn disj_can_keep_rank() {
        let logic = LogicSpec::new([crate::logic::Extension::D]);
        let disj = Derivation::rule(NdRule::ImpIDisj, vec![], f("p | p -> p & p"), vec![dup(1), dup(2)]);
        let s = no_descent(&Derivation::imp_e(Derivation::or_i1(a("p"), f("p")), disj), &logic, Conversion::Disj);
        assert_eq!((s.before, s.after), (CutMeasure { d: 3, l: 1 }, CutMeasure { d: 3, l: 1 }));
    }

    #[test]
    fn major_left_view_round_trips() {
        let d = Derivation::imp_e(a("p"), a("p -> q"));
        let v = order_major_left(&d);
        assert_eq!(v.premises[0].1.conclusion, f("p -> q"));
        assert_eq!(v.premises[0].0, 1);
        assert_eq!(v.to_derivation(), d);
        let leaf = a("p");
        assert_eq!(order_major_left(&leaf).to_derivation(), leaf);
    }

    #[test]
    fn segments_follow_or_minors() {
        let ore = Derivation::or_e(a("r | s"), Some(1), a("p"), Some(2), a("p"));
        let segs = segments(&ore);
        assert!(segs.contains(&Segment {
            positions: vec![vec![1], vec![]]
        }));
        assert!(segs.contains(&Segment {
            positions: vec![vec![0]]
        }));
        assert_eq!(segs.len(), 3);
    }
}
