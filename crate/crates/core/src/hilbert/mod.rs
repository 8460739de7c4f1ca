//! Hilbert-style proofs for WF and its extensions.
//!
//! A proof is a list of justified lines. When assumptions are present only the
//! conjunction rule is unrestricted; modus ponens needs its implication premise to
//! be assumption-free and every other rule needs all of its premises to be.

mod builder;
mod deduction;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

pub use builder::{BuildError, HilbertBuilder};
pub(crate) use deduction::export_into;
pub use deduction::{
    assumption_order,
    weak_deduction_export, weak_deduction_export_with, weak_deduction_import, DeductionError,
};

use crate::formula::Formula;
use crate::logic::{Extension, LogicSpec};
use crate::report::{CheckReport, Diagnostic, Location};

pub type Instantiation = BTreeMap<String, Formula>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum SchemaId {
    Ax1,
    Ax2,
    Ax3,
    Ax4,
    Ax7,
    Ax8,
    Ax14,
    AxI,
    AxC,
    AxD,
    AxCHat,
    AxDHat,
}

impl SchemaId {
    pub const ALL: [SchemaId; 12] = [
        SchemaId::Ax1,
        SchemaId::Ax2,
        SchemaId::Ax3,
        SchemaId::Ax4,
        SchemaId::Ax7,
        SchemaId::Ax8,
        SchemaId::Ax14,
        SchemaId::AxI,
        SchemaId::AxC,
        SchemaId::AxD,
        SchemaId::AxCHat,
        SchemaId::AxDHat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::Ax1 => "Ax1",
            SchemaId::Ax2 => "Ax2",
            SchemaId::Ax3 => "Ax3",
            SchemaId::Ax4 => "Ax4",
            SchemaId::Ax7 => "Ax7",
            SchemaId::Ax8 => "Ax8",
            SchemaId::Ax14 => "Ax14",
            SchemaId::AxI => "AxI",
            SchemaId::AxC => "AxC",
            SchemaId::AxD => "AxD",
            SchemaId::AxCHat => "AxCHat",
            SchemaId::AxDHat => "AxDHat",
        }
    }

    fn source(self) -> &'static str {
        match self {
            SchemaId::Ax1 => "A -> A | B",
            SchemaId::Ax2 => "B -> A | B",
            SchemaId::Ax3 => "A & B -> A",
            SchemaId::Ax4 => "A & B -> B",
            SchemaId::Ax7 => "A & (B | C) -> A & B | A & C",
            SchemaId::Ax8 => "A -> A",
            SchemaId::Ax14 => "bot -> A",
            SchemaId::AxI => "(A -> B) & (B -> C) -> A -> C",
            SchemaId::AxC => "(A -> B) & (A -> C) -> A -> B & C",
            SchemaId::AxD => "(A -> C) & (B -> C) -> A | B -> C",
            SchemaId::AxCHat => "(A -> B & C) -> (A -> B) & (A -> C)",
            SchemaId::AxDHat => "(A | B -> C) -> (A -> C) & (B -> C)",
        }
    }

    /// Template with atoms `A`, `B`, `C` standing for metavariables.
    pub fn template(self) -> &'static Formula {
        static TEMPLATES: OnceLock<Vec<Formula>> = OnceLock::new();
        let all = TEMPLATES.get_or_init(|| {
            SchemaId::ALL
                .iter()
                .map(|s| crate::formula::parse(s.source()).expect("schema template"))
                .collect()
        });
        &all[SchemaId::ALL.iter().position(|s| *s == self).unwrap()]
    }

    pub fn required_extension(self) -> Option<Extension> {
        match self {
            SchemaId::AxI => Some(Extension::I),
            SchemaId::AxC => Some(Extension::C),
            SchemaId::AxD => Some(Extension::D),
            SchemaId::AxCHat => Some(Extension::CHat),
            SchemaId::AxDHat => Some(Extension::DHat),
            _ => None,
        }
    }

    pub fn available_in(self, logic: &LogicSpec) -> bool {
        self.required_extension().is_none_or(|e| logic.has(e))
    }

    pub fn metavariables(self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_atoms(self.template(), &mut out);
        out
    }

    pub fn instantiate(self, inst: &Instantiation) -> Option<Formula> {
        substitute(self.template(), inst)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom schema {s:?}"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum RuleId {
    /// `A, A->B / B`
    MP,
    /// `A / B->A`
    AF,
    /// `A->B, B->C / A->C`
    Trans,
    /// `A->B, A->C / A->B&C`
    ConjImp,
    /// `A->C, B->C / A|B->C`
    DisjImp,
    /// `A, B / A&B`
    Conj,
    /// `A<->B, C<->D / (A->C)<->(B->D)`
    Congr,
    /// `A->B|C, C->A|D, A&D->B, C&B->D / (A->B)<->(C->D)`
    RuleN,
    /// `C->A|D, C&B->D / (A->B)->(C->D)`
    RuleN2,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::MP,
        RuleId::AF,
        RuleId::Trans,
        RuleId::ConjImp,
        RuleId::DisjImp,
        RuleId::Conj,
        RuleId::Congr,
        RuleId::RuleN,
        RuleId::RuleN2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::MP => "MP",
            RuleId::AF => "AF",
            RuleId::Trans => "Trans",
            RuleId::ConjImp => "ConjImp",
            RuleId::DisjImp => "DisjImp",
            RuleId::Conj => "Conj",
            RuleId::Congr => "Congr",
            RuleId::RuleN => "RuleN",
            RuleId::RuleN2 => "RuleN2",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RuleId::AF => 1,
            RuleId::RuleN => 4,
            _ => 2,
        }
    }

    pub fn available_in(self, logic: &LogicSpec) -> bool {
        match self {
            RuleId::RuleN => logic.has(Extension::N),
            RuleId::RuleN2 => logic.has(Extension::N2),
            _ => true,
        }
    }

    /// Computes the conclusion licensed by the premises, or explains the mismatch.
    /// `AF` is the only rule whose conclusion is not determined by its premises;
    /// `af_antecedent` supplies the free formula.
    pub fn conclude(
        self,
        premises: &[&Formula],
        af_antecedent: Option<&Formula>,
    ) -> Result<Formula, String> {
        if premises.len() != self.arity() {
            return Err(format!(
                "{} takes {} premises, got {}",
                self.name(),
                self.arity(),
                premises.len()
            ));
        }
        let imp = |f: &Formula, what: &str| {
            f.as_imp()
                .map(|(a, b)| (a.clone(), b.clone()))
                .ok_or_else(|| format!("{} expects an implication as {what}, got {f}", self.name()))
        };
        let iff = |f: &Formula, what: &str| {
            f.as_iff()
                .map(|(a, b)| (a.clone(), b.clone()))
                .ok_or_else(|| format!("{} expects an equivalence as {what}, got {f}", self.name()))
        };
        match self {
            RuleId::MP => {
                let (a, b) = imp(premises[1], "major premise")?;
                if &a != premises[0] {
                    return Err(format!("MP minor premise {} does not match antecedent {a}", premises[0]));
                }
                Ok(b)
            }
            RuleId::AF => {
                let ante = af_antecedent.ok_or("AF needs the antecedent of its conclusion")?;
                Ok(Formula::imp(ante.clone(), premises[0].clone()))
            }
            RuleId::Trans => {
                let (a, b) = imp(premises[0], "first premise")?;
                let (b2, c) = imp(premises[1], "second premise")?;
                if b != b2 {
                    return Err(format!("Trans premises do not chain: {b} vs {b2}"));
                }
                Ok(Formula::imp(a, c))
            }
            RuleId::ConjImp => {
                let (a, b) = imp(premises[0], "first premise")?;
                let (a2, c) = imp(premises[1], "second premise")?;
                if a != a2 {
                    return Err(format!("ConjImp antecedents differ: {a} vs {a2}"));
                }
                Ok(Formula::imp(a, Formula::and(b, c)))
            }
            RuleId::DisjImp => {
                let (a, c) = imp(premises[0], "first premise")?;
                let (b, c2) = imp(premises[1], "second premise")?;
                if c != c2 {
                    return Err(format!("DisjImp consequents differ: {c} vs {c2}"));
                }
                Ok(Formula::imp(Formula::or(a, b), c))
            }
            RuleId::Conj => Ok(Formula::and(premises[0].clone(), premises[1].clone())),
            RuleId::Congr => {
                let (a, b) = iff(premises[0], "first premise")?;
                let (c, d) = iff(premises[1], "second premise")?;
                Ok(Formula::iff(Formula::imp(a, c), Formula::imp(b, d)))
            }
            RuleId::RuleN => {
                let (a, b_or_c) = imp(premises[0], "first premise")?;
                let (b, c) = b_or_c
                    .as_or()
                    .map(|(b, c)| (b.clone(), c.clone()))
                    .ok_or_else(|| format!("RuleN first premise must be A -> B | C, got {}", premises[0]))?;
                let (c2, a_or_d) = imp(premises[1], "second premise")?;
                let d = match a_or_d.as_or() {
                    Some((a2, d)) if *a2 == a && c2 == c => d.clone(),
                    _ => {
                        return Err(format!(
                            "RuleN second premise must be {c} -> {a} | D, got {}",
                            premises[1]
                        ))
                    }
                };
                let third = Formula::imp(Formula::and(a.clone(), d.clone()), b.clone());
                if premises[2] != &third {
                    return Err(format!("RuleN third premise must be {third}, got {}", premises[2]));
                }
                let fourth = Formula::imp(Formula::and(c.clone(), b.clone()), d.clone());
                if premises[3] != &fourth {
                    return Err(format!("RuleN fourth premise must be {fourth}, got {}", premises[3]));
                }
                Ok(Formula::iff(Formula::imp(a, b), Formula::imp(c, d)))
            }
            RuleId::RuleN2 => {
                let (c, a_or_d) = imp(premises[0], "first premise")?;
                let (a, d) = a_or_d
                    .as_or()
                    .map(|(a, d)| (a.clone(), d.clone()))
                    .ok_or_else(|| format!("RuleN2 first premise must be C -> A | D, got {}", premises[0]))?;
                let (cb, d2) = imp(premises[1], "second premise")?;
                let b = match cb.as_and() {
                    Some((c2, b)) if *c2 == c && d2 == d => b.clone(),
                    _ => {
                        return Err(format!(
                            "RuleN2 second premise must be {c} & B -> {d}, got {}",
                            premises[1]
                        ))
                    }
                };
                Ok(Formula::imp(Formula::imp(a, b), Formula::imp(c, d)))
            }
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown Hilbert rule {s:?}"))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Assumption,
    Axiom {
        schema: SchemaId,
        /// May be left empty; the checker then matches the schema itself.
        instantiation: Instantiation,
    },
    Rule {
        rule: RuleId,
        /// 0-based indices of earlier lines.
        premises: Vec<usize>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HilbertProof {
    pub lines: Vec<Line>,
}

impl HilbertProof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Per-line flag: does the line rest on an assumption?
    pub fn depends(&self) -> Vec<bool> {
        let mut out: Vec<bool> = Vec::with_capacity(self.lines.len());
        for line in &self.lines {
            let dep = match &line.justification {
                Justification::Assumption => true,
                Justification::Axiom { .. } => false,
                Justification::Rule { premises, .. } => {
                    premises.iter().any(|&p| out.get(p).copied().unwrap_or(false))
                }
            };
            out.push(dep);
        }
        out
    }

    /// Indices of the lines the conclusion transitively uses (including itself).
    pub fn cone(&self) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let Some(last) = self.lines.len().checked_sub(1) else {
            return seen;
        };
        let mut stack = vec![last];
        while let Some(i) = stack.pop() {
            if !seen.insert(i) {
                continue;
            }
            if let Justification::Rule { premises, .. } = &self.lines[i].justification {
                stack.extend(premises.iter().copied().filter(|&p| p < i));
            }
        }
        seen
    }

    /// Formulas of the assumption lines the conclusion rests on.
    pub fn used_assumptions(&self) -> BTreeSet<Formula> {
        self.cone()
            .into_iter()
            .filter(|&i| self.lines[i].justification == Justification::Assumption)
            .map(|i| self.lines[i].formula.clone())
            .collect()
    }

    /// Drops every line the conclusion does not use, renumbering premises.
    pub fn pruned(&self) -> HilbertProof {
        let cone = self.cone();
        let mut map = vec![usize::MAX; self.lines.len()];
        let mut lines = Vec::with_capacity(cone.len());
        for i in cone {
            map[i] = lines.len();
            let mut line = self.lines[i].clone();
            if let Justification::Rule { premises, .. } = &mut line.justification {
                for p in premises.iter_mut() {
                    *p = map[*p];
                }
            }
            lines.push(line);
        }
        HilbertProof { lines }
    }
}

fn collect_atoms(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(n) => {
            out.insert(n.clone());
        }
        Formula::Bottom => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
    }
}

fn substitute(template: &Formula, inst: &Instantiation) -> Option<Formula> {
    Some(match template {
        Formula::Atom(n) => inst.get(n)?.clone(),
        Formula::Bottom => Formula::Bottom,
        Formula::And(a, b) => Formula::and(substitute(a, inst)?, substitute(b, inst)?),
        Formula::Or(a, b) => Formula::or(substitute(a, inst)?, substitute(b, inst)?),
        Formula::Imp(a, b) => Formula::imp(substitute(a, inst)?, substitute(b, inst)?),
    })
}

fn match_into(template: &Formula, f: &Formula, inst: &mut Instantiation) -> bool {
    match (template, f) {
        (Formula::Atom(meta), _) => match inst.get(meta) {
            Some(bound) => bound == f,
            None => {
                inst.insert(meta.clone(), f.clone());
                true
            }
        },
        (Formula::Bottom, Formula::Bottom) => true,
        (Formula::And(ta, tb), Formula::And(a, b))
        | (Formula::Or(ta, tb), Formula::Or(a, b))
        | (Formula::Imp(ta, tb), Formula::Imp(a, b)) => {
            match_into(ta, a, inst) && match_into(tb, b, inst)
        }
        _ => false,
    }
}

/// First-order matching of a schema template against a formula.
pub fn match_schema(f: &Formula, schema: SchemaId) -> Option<Instantiation> {
    let mut inst = Instantiation::new();
    match_into(schema.template(), f, &mut inst).then_some(inst)
}

/// Checks every line of `proof` against `logic`, with the given assumption set.
pub fn check_hilbert(
    proof: &HilbertProof,
    logic: &LogicSpec,
    assumptions: &BTreeSet<Formula>,
) -> CheckReport {
    let mut diagnostics = Vec::new();
    let depends = proof.depends();
    for (i, line) in proof.lines.iter().enumerate() {
        let mut diag = |message: String| {
            diagnostics.push(Diagnostic {
                location: Location::Line(i + 1),
                message,
            })
        };
        match &line.justification {
            Justification::Assumption => {
                if !assumptions.contains(&line.formula) {
                    diag(format!("{} is not among the assumptions", line.formula));
                }
            }
            Justification::Axiom {
                schema,
                instantiation,
            } => {
                if !schema.available_in(logic) {
                    diag(format!("unknown schema in this logic: {schema} is not available in {logic}"));
                } else if match_schema(&line.formula, *schema).is_none() {
                    diag(format!("shape mismatch: {} is not an instance of {schema}", line.formula));
                } else if !instantiation.is_empty()
                    && schema.instantiate(instantiation).as_ref() != Some(&line.formula)
                {
                    diag(format!("shape mismatch: instantiation of {schema} does not produce {}", line.formula));
                }
            }
            Justification::Rule { rule, premises } => {
                if !rule.available_in(logic) {
                    diag(format!("{rule} is not available in {logic}"));
                    continue;
                }
                if let Some(&bad) = premises.iter().find(|&&p| p >= i) {
                    diag(format!("bad index: premise {} does not precede the line", bad + 1));
                    continue;
                }
                let formulas: Vec<&Formula> = premises.iter().map(|&p| &proof.lines[p].formula).collect();
                let af_ante = line.formula.as_imp().map(|(a, _)| a);
                match rule.conclude(&formulas, af_ante) {
                    Ok(expected) if expected == line.formula => {}
                    Ok(expected) => diag(format!("shape mismatch: {rule} yields {expected}, line states {}", line.formula)),
                    Err(msg) => {
                        diag(format!("shape mismatch: {msg}"));
                        continue;
                    }
                }
                match rule {
                    RuleId::Conj => {}
                    RuleId::MP => {
                        if depends[premises[1]] {
                            diag("restriction violated: MP major premise depends on assumptions".to_string());
                        }
                    }
                    _ => {
                        if let Some(&p) = premises.iter().find(|&&p| depends[p]) {
                            diag(format!(
                                "restriction violated: {rule} premise (line {}) depends on assumptions",
                                p + 1
                            ));
                        }
                    }
                }
            }
        }
    }
    if proof.lines.is_empty() {
        diagnostics.push(Diagnostic {
            location: Location::Line(0),
            message: "empty proof".to_string(),
        });
    }
    CheckReport::new(
        proof.conclusion().cloned(),
        proof.used_assumptions(),
        diagnostics,
    )
}
