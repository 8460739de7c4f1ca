//! Natural-deduction derivations for WF and its extensions.
//!
//! Assumption leaves carry an optional discharge label. A labelled leaf is bound
//! by the nearest ancestor that has a discharge slot with the same label covering
//! the branch the leaf sits in; anything left unbound is an open assumption.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::formula::Formula;
use crate::logic::{Extension, LogicSpec};
use crate::report::{CheckReport, Diagnostic, Location};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum NdRule {
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    ImpI1,
    ImpI2,
    BotE,
    ImpIN,
    ImpIN2,
    ImpIHatC,
    ImpIHatD,
    ImpIConj,
    ImpIDisj,
    ImpITrans,
}

impl NdRule {
    pub const ALL: [NdRule; 18] = [
        NdRule::AndI,
        NdRule::AndE1,
        NdRule::AndE2,
        NdRule::OrI1,
        NdRule::OrI2,
        NdRule::OrE,
        NdRule::ImpI,
        NdRule::ImpE,
        NdRule::ImpI1,
        NdRule::ImpI2,
        NdRule::BotE,
        NdRule::ImpIN,
        NdRule::ImpIN2,
        NdRule::ImpIHatC,
        NdRule::ImpIHatD,
        NdRule::ImpIConj,
        NdRule::ImpIDisj,
        NdRule::ImpITrans,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NdRule::AndI => "AndI",
            NdRule::AndE1 => "AndE1",
            NdRule::AndE2 => "AndE2",
            NdRule::OrI1 => "OrI1",
            NdRule::OrI2 => "OrI2",
            NdRule::OrE => "OrE",
            NdRule::ImpI => "ImpI",
            NdRule::ImpE => "ImpE",
            NdRule::ImpI1 => "ImpI1",
            NdRule::ImpI2 => "ImpI2",
            NdRule::BotE => "BotE",
            NdRule::ImpIN => "ImpIN",
            NdRule::ImpIN2 => "ImpIN2",
            NdRule::ImpIHatC => "ImpIHatC",
            NdRule::ImpIHatD => "ImpIHatD",
            NdRule::ImpIConj => "ImpIConj",
            NdRule::ImpIDisj => "ImpIDisj",
            NdRule::ImpITrans => "ImpITrans",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            NdRule::AndE1
            | NdRule::AndE2
            | NdRule::OrI1
            | NdRule::OrI2
            | NdRule::ImpI
            | NdRule::BotE
            | NdRule::ImpIHatC
            | NdRule::ImpIHatD => 1,
            NdRule::OrE => 3,
            NdRule::ImpIN => 4,
            _ => 2,
        }
    }

    /// For each discharge slot, the premises it reaches into.
    pub fn slots(self) -> &'static [&'static [usize]] {
        match self {
            NdRule::OrE => &[&[1], &[2]],
            NdRule::ImpI | NdRule::ImpIHatC | NdRule::ImpIHatD => &[&[0]],
            NdRule::ImpI1 | NdRule::ImpI2 => &[&[0], &[1]],
            // slots discharge A, D, C, B
            NdRule::ImpIN => &[&[0, 1], &[1], &[2, 3], &[3]],
            // slots discharge C, B
            NdRule::ImpIN2 => &[&[0, 1], &[1]],
            _ => &[],
        }
    }

    /// Index of the major premise, for elimination rules.
    pub fn major_premise(self) -> Option<usize> {
        match self {
            NdRule::AndE1 | NdRule::AndE2 | NdRule::OrE | NdRule::BotE => Some(0),
            NdRule::ImpE => Some(1),
            _ => None,
        }
    }

    pub fn is_elimination(self) -> bool {
        self.major_premise().is_some()
    }

    pub fn is_introduction(self) -> bool {
        !self.is_elimination()
    }

    pub fn available_in(self, logic: &LogicSpec) -> bool {
        match self {
            NdRule::ImpI1 | NdRule::ImpI2 => logic.has_basic_congruence_intro(),
            NdRule::ImpIN => logic.has(Extension::N),
            NdRule::ImpIN2 => logic.has(Extension::N2),
            NdRule::ImpIHatC => logic.has(Extension::CHat),
            NdRule::ImpIHatD => logic.has(Extension::DHat),
            NdRule::ImpIConj => logic.has(Extension::C),
            NdRule::ImpIDisj => logic.has(Extension::D),
            NdRule::ImpITrans => logic.has(Extension::I),
            _ => true,
        }
    }

    /// Checks the conclusion against the premises' conclusions and returns the
    /// formula each discharge slot binds.
    pub fn shape(self, conclusion: &Formula, premises: &[&Formula]) -> Result<Vec<Formula>, String> {
        if premises.len() != self.arity() {
            return Err(format!(
                "{} takes {} premises, got {}",
                self.name(),
                self.arity(),
                premises.len()
            ));
        }
        let mismatch = || {
            let ps: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
            format!(
                "shape mismatch: {} cannot conclude {conclusion} from [{}]",
                self.name(),
                ps.join("; ")
            )
        };
        let imp = |f: &Formula| f.as_imp().map(|(a, b)| (a.clone(), b.clone())).ok_or_else(mismatch);
        let check = |ok: bool| if ok { Ok(()) } else { Err(mismatch()) };
        let p = premises;
        match self {
            NdRule::AndI => {
                check(*conclusion == Formula::and(p[0].clone(), p[1].clone()))?;
                Ok(vec![])
            }
            NdRule::AndE1 => {
                check(matches!(p[0].as_and(), Some((a, _)) if a == conclusion))?;
                Ok(vec![])
            }
            NdRule::AndE2 => {
                check(matches!(p[0].as_and(), Some((_, b)) if b == conclusion))?;
                Ok(vec![])
            }
            NdRule::OrI1 => {
                check(matches!(conclusion.as_or(), Some((a, _)) if a == p[0]))?;
                Ok(vec![])
            }
            NdRule::OrI2 => {
                check(matches!(conclusion.as_or(), Some((_, b)) if b == p[0]))?;
                Ok(vec![])
            }
            NdRule::OrE => {
                let (a, b) = p[0].as_or().ok_or_else(mismatch)?;
                check(p[1] == conclusion && p[2] == conclusion)?;
                Ok(vec![a.clone(), b.clone()])
            }
            NdRule::ImpI => {
                let (a, b) = imp(conclusion)?;
                check(&b == p[0])?;
                Ok(vec![a])
            }
            NdRule::ImpE => {
                check(*p[1] == Formula::imp(p[0].clone(), conclusion.clone()))?;
                Ok(vec![])
            }
            NdRule::ImpI1 => {
                // (A->B)->(A->D) from [B]D, [D]B
                let (ab, ad) = imp(conclusion)?;
                let (a, b) = imp(&ab)?;
                let (a2, d) = imp(&ad)?;
                check(a == a2 && p[0] == &d && p[1] == &b)?;
                Ok(vec![b, d])
            }
            NdRule::ImpI2 => {
                // (B->A)->(D->A) from [B]D, [D]B
                let (ba, da) = imp(conclusion)?;
                let (b, a) = imp(&ba)?;
                let (d, a2) = imp(&da)?;
                check(a == a2 && p[0] == &d && p[1] == &b)?;
                Ok(vec![b, d])
            }
            NdRule::BotE => {
                check(*p[0] == Formula::Bottom)?;
                Ok(vec![])
            }
            NdRule::ImpIN => {
                // (A->B)->(C->D) from [A]C|B, [D]B, [C]A|D, [B]D
                let (ab, cd) = imp(conclusion)?;
                let (a, b) = imp(&ab)?;
                let (c, d) = imp(&cd)?;
                check(
                    *p[0] == Formula::or(c.clone(), b.clone())
                        && p[1] == &b
                        && *p[2] == Formula::or(a.clone(), d.clone())
                        && p[3] == &d,
                )?;
                Ok(vec![a, d, c, b])
            }
            NdRule::ImpIN2 => {
                // (A->B)->(C->D) from [C]A|D, [B]D
                let (ab, cd) = imp(conclusion)?;
                let (a, b) = imp(&ab)?;
                let (c, d) = imp(&cd)?;
                check(*p[0] == Formula::or(a, d.clone()) && p[1] == &d)?;
                Ok(vec![c, b])
            }
            NdRule::ImpIHatC => {
                // (C->A)->(C->B) from [A]B
                let (ca, cb) = imp(conclusion)?;
                let (c, a) = imp(&ca)?;
                let (c2, b) = imp(&cb)?;
                check(c == c2 && p[0] == &b)?;
                Ok(vec![a])
            }
            NdRule::ImpIHatD => {
                // (B->C)->(A->C) from [A]B
                let (bc, ac) = imp(conclusion)?;
                let (b, c) = imp(&bc)?;
                let (a, c2) = imp(&ac)?;
                check(c == c2 && p[0] == &b)?;
                Ok(vec![a])
            }
            NdRule::ImpIConj => {
                let (a, b) = imp(p[0])?;
                let (a2, c) = imp(p[1])?;
                check(a == a2 && *conclusion == Formula::imp(a, Formula::and(b, c)))?;
                Ok(vec![])
            }
            NdRule::ImpIDisj => {
                let (a, c) = imp(p[0])?;
                let (b, c2) = imp(p[1])?;
                check(c == c2 && *conclusion == Formula::imp(Formula::or(a, b), c))?;
                Ok(vec![])
            }
            NdRule::ImpITrans => {
                let (a, b) = imp(p[0])?;
                let (b2, c) = imp(p[1])?;
                check(b == b2 && *conclusion == Formula::imp(a, c))?;
                Ok(vec![])
            }
        }
    }

    /// Name of the side condition, for diagnostics.
    fn side_condition(self) -> &'static str {
        match self {
            NdRule::ImpI => "⋆",
            NdRule::ImpI1 | NdRule::ImpI2 => "†",
            _ => "only-assumption",
        }
    }
}

impl fmt::Display for NdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NdRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NdRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown natural-deduction rule {s:?}"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Inference {
    Assumption {
        label: Option<u32>,
    },
    Rule {
        rule: NdRule,
        /// One entry per discharge slot of the rule; `None` discharges nothing.
        labels: Vec<Option<u32>>,
        premises: Vec<Derivation>,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Derivation {
    pub conclusion: Formula,
    pub inference: Inference,
}

/// An assumption leaf not bound inside the derivation it was collected from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpenLeaf {
    pub path: Vec<usize>,
    pub formula: Formula,
    pub label: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CheckOptions {
    /// Require every ImpI to discharge at least one occurrence.
    pub strict_star: bool,
}

impl Derivation {
    pub fn assume(formula: Formula) -> Self {
        Derivation {
            conclusion: formula,
            inference: Inference::Assumption { label: None },
        }
    }

    pub fn hyp(formula: Formula, label: u32) -> Self {
        Derivation {
            conclusion: formula,
            inference: Inference::Assumption { label: Some(label) },
        }
    }

    pub fn rule(rule: NdRule, labels: Vec<Option<u32>>, conclusion: Formula, premises: Vec<Derivation>) -> Self {
        Derivation {
            conclusion,
            inference: Inference::Rule {
                rule,
                labels,
                premises,
            },
        }
    }

    pub fn and_i(left: Derivation, right: Derivation) -> Self {
        let c = Formula::and(left.conclusion.clone(), right.conclusion.clone());
        Self::rule(NdRule::AndI, vec![], c, vec![left, right])
    }

    /// # Panics
    /// If the premise is not a conjunction.
    pub fn and_e1(d: Derivation) -> Self {
        let c = d.conclusion.as_and().expect("and_e1 needs a conjunction").0.clone();
        Self::rule(NdRule::AndE1, vec![], c, vec![d])
    }

    /// # Panics
    /// If the premise is not a conjunction.
    pub fn and_e2(d: Derivation) -> Self {
        let c = d.conclusion.as_and().expect("and_e2 needs a conjunction").1.clone();
        Self::rule(NdRule::AndE2, vec![], c, vec![d])
    }

    pub fn or_i1(d: Derivation, right: Formula) -> Self {
        let c = Formula::or(d.conclusion.clone(), right);
        Self::rule(NdRule::OrI1, vec![], c, vec![d])
    }

    pub fn or_i2(left: Formula, d: Derivation) -> Self {
        let c = Formula::or(left, d.conclusion.clone());
        Self::rule(NdRule::OrI2, vec![], c, vec![d])
    }

    pub fn or_e(major: Derivation, l1: Option<u32>, m1: Derivation, l2: Option<u32>, m2: Derivation) -> Self {
        let c = m1.conclusion.clone();
        Self::rule(NdRule::OrE, vec![l1, l2], c, vec![major, m1, m2])
    }

    pub fn imp_i(antecedent: Formula, label: Option<u32>, d: Derivation) -> Self {
        let c = Formula::imp(antecedent, d.conclusion.clone());
        Self::rule(NdRule::ImpI, vec![label], c, vec![d])
    }

    /// # Panics
    /// If the major premise is not an implication.
    pub fn imp_e(minor: Derivation, major: Derivation) -> Self {
        let c = major.conclusion.as_imp().expect("imp_e needs an implication").1.clone();
        Self::rule(NdRule::ImpE, vec![], c, vec![minor, major])
    }

    pub fn bot_e(d: Derivation, conclusion: Formula) -> Self {
        Self::rule(NdRule::BotE, vec![], conclusion, vec![d])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.inference, Inference::Assumption { .. })
    }

    pub fn rule_id(&self) -> Option<NdRule> {
        match &self.inference {
            Inference::Rule { rule, .. } => Some(*rule),
            Inference::Assumption { .. } => None,
        }
    }

    pub fn premises(&self) -> &[Derivation] {
        match &self.inference {
            Inference::Rule { premises, .. } => premises,
            Inference::Assumption { .. } => &[],
        }
    }

    pub fn labels(&self) -> &[Option<u32>] {
        match &self.inference {
            Inference::Rule { labels, .. } => labels,
            Inference::Assumption { .. } => &[],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises().iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises().iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Largest formula rank occurring at any node.
    pub fn max_rank(&self) -> usize {
        self.premises()
            .iter()
            .map(Derivation::max_rank)
            .max()
            .unwrap_or(0)
            .max(self.conclusion.rank())
    }

    pub fn max_label(&self) -> u32 {
        let own = match &self.inference {
            Inference::Assumption { label } => label.unwrap_or(0),
            Inference::Rule { labels, .. } => labels.iter().flatten().copied().max().unwrap_or(0),
        };
        self.premises().iter().map(Derivation::max_label).fold(own, u32::max)
    }

    pub fn rules_used(&self) -> BTreeSet<NdRule> {
        let mut out = BTreeSet::new();
        self.visit(&mut |_, d| {
            if let Some(r) = d.rule_id() {
                out.insert(r);
            }
        });
        out
    }

    /// Pre-order visit with child-index paths.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&[usize], &'a Derivation)) {
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &'a Derivation)) {
            f(path, d);
            for (i, p) in d.premises().iter().enumerate() {
                path.push(i);
                go(p, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        let mut d = self;
        for &i in path {
            d = d.premises().get(i)?;
        }
        Some(d)
    }

    /// A copy with the subtree at `path` replaced.
    ///
    /// # Panics
    /// If `path` does not exist.
    pub fn replace_at(&self, path: &[usize], new: Derivation) -> Derivation {
        let Some((&first, rest)) = path.split_first() else {
            return new;
        };
        let mut out = self.clone();
        match &mut out.inference {
            Inference::Rule { premises, .. } => {
                premises[first] = premises[first].replace_at(rest, new);
            }
            Inference::Assumption { .. } => panic!("replace_at: path runs through a leaf"),
        }
        out
    }

    /// Leaves not bound by any discharge slot inside this derivation.
    pub fn open_leaves(&self) -> Vec<OpenLeaf> {
        let mut out = Vec::new();
        self.walk_open(&mut Vec::new(), &mut Vec::new(), &mut |path, leaf| {
            out.push(OpenLeaf {
                path: path.to_vec(),
                formula: leaf.conclusion.clone(),
                label: leaf_label(leaf),
            })
        });
        out
    }

    pub fn open_assumptions(&self) -> BTreeSet<Formula> {
        self.open_leaves().into_iter().map(|l| l.formula).collect()
    }

    fn walk_open(&self, path: &mut Vec<usize>, env: &mut Vec<u32>, f: &mut impl FnMut(&[usize], &Derivation)) {
        match &self.inference {
            Inference::Assumption { label } => {
                if label.is_none_or(|l| !env.contains(&l)) {
                    f(path, self);
                }
            }
            Inference::Rule {
                rule,
                labels,
                premises,
            } => {
                for (i, p) in premises.iter().enumerate() {
                    let before = env.len();
                    env.extend(covering_labels(*rule, labels, i));
                    path.push(i);
                    p.walk_open(path, env, f);
                    path.pop();
                    env.truncate(before);
                }
            }
        }
    }

    /// Rebuilds the tree, replacing each open leaf for which `f` returns a derivation.
    pub fn map_open_leaves(&self, f: &mut impl FnMut(&Formula, Option<u32>) -> Option<Derivation>) -> Derivation {
        self.map_open_inner(&mut Vec::new(), f)
    }

    fn map_open_inner(
        &self,
        env: &mut Vec<u32>,
        f: &mut impl FnMut(&Formula, Option<u32>) -> Option<Derivation>,
    ) -> Derivation {
        match &self.inference {
            Inference::Assumption { label } => {
                if label.is_none_or(|l| !env.contains(&l)) {
                    if let Some(new) = f(&self.conclusion, *label) {
                        return new;
                    }
                }
                self.clone()
            }
            Inference::Rule {
                rule,
                labels,
                premises,
            } => {
                let premises = premises
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let before = env.len();
                        env.extend(covering_labels(*rule, labels, i));
                        let out = p.map_open_inner(env, f);
                        env.truncate(before);
                        out
                    })
                    .collect();
                Derivation::rule(*rule, labels.clone(), self.conclusion.clone(), premises)
            }
        }
    }

    /// Renames every discharge label bound inside this derivation with `rename`,
    /// keeping each leaf attached to the same binder. Open leaves keep their label.
    pub fn rename_bound_labels(&self, rename: &mut impl FnMut(u32) -> u32) -> Derivation {
        fn go(d: &Derivation, env: &mut Vec<(u32, u32)>, rename: &mut impl FnMut(u32) -> u32) -> Derivation {
            match &d.inference {
                Inference::Assumption { label } => {
                    let label = label.map(|l| env.iter().rev().find(|(old, _)| *old == l).map_or(l, |(_, new)| *new));
                    Derivation {
                        conclusion: d.conclusion.clone(),
                        inference: Inference::Assumption { label },
                    }
                }
                Inference::Rule {
                    rule,
                    labels,
                    premises,
                } => {
                    let new_labels: Vec<Option<u32>> = labels.iter().map(|l| l.map(&mut *rename)).collect();
                    let premises = premises
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            let before = env.len();
                            for (slot, covers) in rule.slots().iter().enumerate() {
                                if let (true, Some(Some(old)), Some(Some(new))) =
                                    (covers.contains(&i), labels.get(slot), new_labels.get(slot))
                                {
                                    env.push((*old, *new));
                                }
                            }
                            let out = go(p, env, rename);
                            env.truncate(before);
                            out
                        })
                        .collect();
                    Derivation::rule(*rule, new_labels, d.conclusion.clone(), premises)
                }
            }
        }
        go(self, &mut Vec::new(), rename)
    }

    /// Numbers discharge slots 1, 2, ... in pre-order and drops labels from open
    /// leaves. Binding structure is unchanged.
    pub fn canonical_labels(&self) -> Derivation {
        let mut next = 0;
        let renamed = self.rename_bound_labels(&mut |_| {
            next += 1;
            next
        });
        renamed.map_open_leaves(&mut |f, label| label.map(|_| Derivation::assume(f.clone())))
    }

    /// Replaces every open leaf of formula `target` with a copy of `replacement`.
    /// Labels bound in `self` are shifted so that none can capture an open leaf of
    /// the replacement.
    pub fn graft(&self, target: &Formula, replacement: &Derivation) -> Derivation {
        self.graft_where(replacement, &mut |f, _| f == target)
    }

    /// Replaces the open leaves of `target` carrying `label`.
    pub fn graft_label(&self, target: &Formula, label: u32, replacement: &Derivation) -> Derivation {
        self.graft_where(replacement, &mut |f, l| f == target && l == Some(label))
    }

    fn graft_where(
        &self,
        replacement: &Derivation,
        select: &mut impl FnMut(&Formula, Option<u32>) -> bool,
    ) -> Derivation {
        let offset = replacement.max_label();
        let shifted = if offset == 0 {
            self.clone()
        } else {
            self.rename_bound_labels(&mut |l| l + offset)
        };
        shifted.map_open_leaves(&mut |f, l| select(f, l).then(|| replacement.clone()))
    }
}

fn leaf_label(d: &Derivation) -> Option<u32> {
    match d.inference {
        Inference::Assumption { label } => label,
        Inference::Rule { .. } => None,
    }
}

fn covering_labels<'a>(rule: NdRule, labels: &'a [Option<u32>], child: usize) -> impl Iterator<Item = u32> + 'a {
    rule.slots()
        .iter()
        .zip(labels.iter())
        .filter(move |(covers, _)| covers.contains(&child))
        .filter_map(|(_, l)| *l)
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::document::write_derivation(self))
    }
}

/// Checks `d` against the rules of `logic` and their discharge side conditions.
pub fn check_nd(d: &Derivation, logic: &LogicSpec) -> CheckReport {
    check_nd_with(d, logic, CheckOptions::default())
}

pub fn check_nd_with(d: &Derivation, logic: &LogicSpec, options: CheckOptions) -> CheckReport {
    let mut checker = Checker {
        logic,
        options,
        diagnostics: Vec::new(),
    };
    let open = checker.node(d, &mut Vec::new());
    let open_assumptions = open.into_iter().map(|l| l.formula).collect();
    CheckReport::new(Some(d.conclusion.clone()), open_assumptions, checker.diagnostics)
}

struct Checker<'a> {
    logic: &'a LogicSpec,
    options: CheckOptions,
    diagnostics: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn diag(&mut self, path: &[usize], message: String) {
        self.diagnostics.push(Diagnostic {
            location: Location::Node(path.to_vec()),
            message,
        });
    }

    /// Returns the leaves of `d` still open after the bindings inside `d`.
    fn node(&mut self, d: &Derivation, path: &mut Vec<usize>) -> Vec<OpenLeaf> {
        let (rule, labels, premises) = match &d.inference {
            Inference::Assumption { label } => {
                return vec![OpenLeaf {
                    path: path.clone(),
                    formula: d.conclusion.clone(),
                    label: *label,
                }]
            }
            Inference::Rule {
                rule,
                labels,
                premises,
            } => (*rule, labels, premises),
        };
        let mut child_open = Vec::with_capacity(premises.len());
        for (i, p) in premises.iter().enumerate() {
            path.push(i);
            child_open.push(self.node(p, path));
            path.pop();
        }

        if !rule.available_in(self.logic) {
            self.diag(path, format!("{rule} is not available in {}", self.logic));
        }
        let slots = rule.slots();
        if labels.len() != slots.len() {
            self.diag(
                path,
                format!("{rule} has {} discharge slots, got {} labels", slots.len(), labels.len()),
            );
            return child_open.into_iter().flatten().collect();
        }
        let named: Vec<u32> = labels.iter().flatten().copied().collect();
        if named.iter().collect::<BTreeSet<_>>().len() != named.len() {
            self.diag(path, format!("{rule} uses the same discharge label twice"));
        }
        let premise_formulas: Vec<&Formula> = premises.iter().map(|p| &p.conclusion).collect();
        let slot_formulas = match rule.shape(&d.conclusion, &premise_formulas) {
            Ok(fs) => Some(fs),
            Err(msg) => {
                self.diag(path, msg);
                None
            }
        };

        // Bind leaves, child by child.
        let mut bound_count = vec![0usize; slots.len()];
        let mut remaining: Vec<Vec<OpenLeaf>> = Vec::with_capacity(premises.len());
        for (i, leaves) in child_open.into_iter().enumerate() {
            let mut keep = Vec::new();
            for leaf in leaves {
                let slot = leaf.label.and_then(|l| {
                    (0..slots.len()).find(|&s| labels[s] == Some(l) && slots[s].contains(&i))
                });
                match slot {
                    Some(s) => {
                        bound_count[s] += 1;
                        if let Some(fs) = &slot_formulas {
                            if leaf.formula != fs[s] {
                                let label = leaf.label.unwrap();
                                self.diag(
                                    &leaf.path,
                                    format!(
                                        "label {label} discharges {} but the leaf is {}",
                                        fs[s], leaf.formula
                                    ),
                                );
                            }
                        }
                    }
                    None => keep.push(leaf),
                }
            }
            remaining.push(keep);
        }

        let describe = |leaves: &[OpenLeaf]| {
            let set: BTreeSet<String> = leaves.iter().map(|l| l.formula.to_string()).collect();
            set.into_iter().collect::<Vec<_>>().join(", ")
        };
        match rule {
            NdRule::ImpE => {
                if !remaining[1].is_empty() {
                    let msg = format!(
                        "restriction ‡ violated: major premise {} of ImpE rests on open assumptions {{{}}}",
                        premises[1].conclusion,
                        describe(&remaining[1])
                    );
                    self.diag(path, msg);
                }
            }
            NdRule::ImpI
            | NdRule::ImpI1
            | NdRule::ImpI2
            | NdRule::ImpIN
            | NdRule::ImpIN2
            | NdRule::ImpIHatC
            | NdRule::ImpIHatD => {
                for (i, rest) in remaining.iter().enumerate() {
                    if !rest.is_empty() {
                        let msg = format!(
                            "restriction {} violated: premise {} of {rule} has undischarged assumptions {{{}}}",
                            rule.side_condition(),
                            i + 1,
                            describe(rest)
                        );
                        self.diag(path, msg);
                    }
                }
                if rule == NdRule::ImpI && self.options.strict_star && bound_count[0] == 0 {
                    self.diag(path, "restriction ⋆ violated (strict): ImpI discharges nothing".to_string());
                }
            }
            _ => {}
        }
        remaining.into_iter().flatten().collect()
    }
}
