//! The weak deduction theorem: `A1, ..., An ⊢ B` iff `⊢ A1 & ... & An -> B`.

use thiserror::Error;

use super::builder::{BuildError, HilbertBuilder};
use super::{HilbertProof, Justification, RuleId};
use crate::formula::Formula;
use crate::logic::LogicSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeductionError {
    #[error("proof has no assumptions to fold")]
    NoAssumptions,
    #[error("empty proof")]
    Empty,
    #[error("conclusion {0} is not an implication")]
    NotImplication(Formula),
    #[error("assumption {0} is missing from the requested order")]
    MissingAssumption(Formula),
    #[error("line {line}: {rule} applied to assumption-dependent premises")]
    Restricted { line: usize, rule: RuleId },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Assumption formulas of `proof` in order of first appearance.
pub fn assumption_order(proof: &HilbertProof) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for line in &proof.lines {
        if line.justification == Justification::Assumption && !out.contains(&line.formula) {
            out.push(line.formula.clone());
        }
    }
    out
}

/// Folds the assumptions of `proof`, in order of first appearance and associated
/// to the right, into the antecedent of a theorem.
pub fn weak_deduction_export(
    proof: &HilbertProof,
    logic: &LogicSpec,
) -> Result<HilbertProof, DeductionError> {
    let order = assumption_order(proof);
    if order.is_empty() {
        return Err(DeductionError::NoAssumptions);
    }
    weak_deduction_export_with(proof, logic, &order)
}

/// Like [`weak_deduction_export`] with `K = order[0] & (order[1] & ...)`. The order
/// must list every assumption of `proof` and may list more.
pub fn weak_deduction_export_with(
    proof: &HilbertProof,
    _logic: &LogicSpec,
    order: &[Formula],
) -> Result<HilbertProof, DeductionError> {
    if order.is_empty() {
        return Err(DeductionError::NoAssumptions);
    }
    let k = Formula::conj_right(order);
    let mut b = HilbertBuilder::new();
    let target = export_into(&mut b, proof, &k)?;
    Ok(b.finish(target))
}

/// Emits into `b` a theorem `k -> B` for the conclusion `B` of `proof`; every
/// assumption of `proof` must be a conjunct of `k`.
pub(crate) fn export_into(
    b: &mut HilbertBuilder,
    proof: &HilbertProof,
    k: &Formula,
) -> Result<usize, DeductionError> {
    if proof.lines.is_empty() {
        return Err(DeductionError::Empty);
    }
    let depends = proof.depends();
    // For theorem lines: the copied theorem. For dependent lines: `k -> L`.
    let mut index: Vec<usize> = Vec::with_capacity(proof.lines.len());
    for (i, line) in proof.lines.iter().enumerate() {
        let out = if !depends[i] {
            let justification = match &line.justification {
                Justification::Rule { rule, premises } => Justification::Rule {
                    rule: *rule,
                    premises: premises.iter().map(|&p| index[p]).collect(),
                },
                other => other.clone(),
            };
            b.push(line.formula.clone(), justification)
        } else {
            match &line.justification {
                Justification::Assumption => {
                    if !super::builder::contains_conjunct(k, &line.formula) {
                        return Err(DeductionError::MissingAssumption(line.formula.clone()));
                    }
                    b.project(k, &line.formula)?
                }
                Justification::Rule {
                    rule: RuleId::Conj,
                    premises,
                } => {
                    let l = k_imp(b, &depends, &index, premises[0], k);
                    let r = k_imp(b, &depends, &index, premises[1], k);
                    b.conj_imp(l, r)?
                }
                Justification::Rule {
                    rule: RuleId::MP,
                    premises,
                } if !depends[premises[1]] => {
                    let minor = k_imp(b, &depends, &index, premises[0], k);
                    b.trans(minor, index[premises[1]])?
                }
                Justification::Rule { rule, .. } => {
                    return Err(DeductionError::Restricted { line: i + 1, rule: *rule })
                }
                Justification::Axiom { .. } => unreachable!("axioms never depend"),
            }
        };
        index.push(out);
    }
    let last = proof.lines.len() - 1;
    Ok(k_imp(b, &depends, &index, last, k))
}

fn k_imp(b: &mut HilbertBuilder, depends: &[bool], index: &[usize], line: usize, k: &Formula) -> usize {
    if depends[line] {
        index[line]
    } else {
        b.af(index[line], k.clone())
    }
}

/// From `⊢ A -> B` to `A ⊢ B`.
pub fn weak_deduction_import(proof: &HilbertProof) -> Result<HilbertProof, DeductionError> {
    let conclusion = proof.conclusion().ok_or(DeductionError::Empty)?;
    let (a, _) = conclusion
        .as_imp()
        .ok_or_else(|| DeductionError::NotImplication(conclusion.clone()))?;
    let a = a.clone();
    let mut b = HilbertBuilder::new();
    let map = b.append(proof);
    let assumption = b.assume(a);
    let line = b.mp(assumption, *map.last().unwrap())?;
    Ok(b.finish(line))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::hilbert::{check_hilbert, SchemaId};
    use std::collections::BTreeSet;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn accepted_theorem(p: &HilbertProof, expected: &str) {
        let report = check_hilbert(p, &LogicSpec::wf(), &BTreeSet::new());
        assert!(report.accepted, "{report}");
        assert_eq!(report.conclusion, Some(f(expected)));
    }

    #[test]
    fn single_assumption_gives_identity() {
        let mut b = HilbertBuilder::new();
        let a = b.assume(f("A"));
        let p = b.finish(a);
        let out = weak_deduction_export(&p, &LogicSpec::wf()).unwrap();
        accepted_theorem(&out, "A -> A");
        assert_eq!(out.lines.len(), 1);
    }

    #[test]
    fn conj_of_assumption_with_itself() {
        let mut b = HilbertBuilder::new();
        let a = b.assume(f("A"));
        let c = b.conj(a, a);
        let p = b.finish(c);
        let out = weak_deduction_export(&p, &LogicSpec::wf()).unwrap();
        accepted_theorem(&out, "A -> A & A");
    }

    #[test]
    fn commuting_a_conjunction() {
        let mut b = HilbertBuilder::new();
        let ab = b.assume(f("A & B"));
        let ax4 = b.axiom(SchemaId::Ax4, f("A & B -> B")).unwrap();
        let ax3 = b.axiom(SchemaId::Ax3, f("A & B -> A")).unwrap();
        let y = b.mp(ab, ax4).unwrap();
        let x = b.mp(ab, ax3).unwrap();
        let c = b.conj(y, x);
        let p = b.finish(c);
        assert!(check_hilbert(&p, &LogicSpec::wf(), &[f("A & B")].into()).accepted);
        let out = weak_deduction_export(&p, &LogicSpec::wf()).unwrap();
        accepted_theorem(&out, "A & B -> B & A");
    }

    #[test]
    fn theorem_conclusion_with_assumptions() {
        let line = |text: &str, justification| crate::hilbert::Line {
            formula: f(text),
            justification,
        };
        let p = HilbertProof {
            lines: vec![
                line("p", Justification::Assumption),
                line("q", Justification::Assumption),
                line(
                    "r -> r",
                    Justification::Axiom {
                        schema: SchemaId::Ax8,
                        instantiation: Default::default(),
                    },
                ),
            ],
        };
        let out = weak_deduction_export(&p, &LogicSpec::wf()).unwrap();
        accepted_theorem(&out, "p & q -> r -> r");
    }

    #[test]
    fn import_examples() {
        for (schema, text, assumption, conclusion) in [
            (SchemaId::Ax8, "p -> p", "p", "p"),
            (SchemaId::Ax3, "p & q -> p", "p & q", "p"),
            (SchemaId::Ax14, "bot -> p", "bot", "p"),
        ] {
            let mut b = HilbertBuilder::new();
            let line = b.axiom(schema, f(text)).unwrap();
            let out = weak_deduction_import(&b.finish(line)).unwrap();
            let report = check_hilbert(&out, &LogicSpec::wf(), &[f(assumption)].into());
            assert!(report.accepted, "{report}");
            assert_eq!(report.conclusion, Some(f(conclusion)));
        }
    }

    #[test]
    fn import_rejects_non_implications() {
        let mut b = HilbertBuilder::new();
        let a = b.identity(&f("p"));
        let c = b.conj(a, a);
        assert!(matches!(
            weak_deduction_import(&b.finish(c)),
            Err(DeductionError::NotImplication(_))
        ));
    }
}
