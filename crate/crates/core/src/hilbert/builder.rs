use std::collections::HashMap;

use thiserror::Error;

use super::{match_schema, HilbertProof, Instantiation, Justification, Line, RuleId, SchemaId};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot build Hilbert line: {0}")]
pub struct BuildError(pub String);

/// Incremental construction of Hilbert proofs.
///
/// Shapes are validated as lines are added; the assumption restrictions are left
/// to [`super::check_hilbert`]. Identical theorems and assumptions are shared.
#[derive(Clone, Debug, Default)]
pub struct HilbertBuilder {
    lines: Vec<Line>,
    depends: Vec<bool>,
    theorems: HashMap<Formula, usize>,
    assumptions: HashMap<Formula, usize>,
}

impl HilbertBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn formula(&self, line: usize) -> &Formula {
        &self.lines[line].formula
    }

    pub fn depends(&self, line: usize) -> bool {
        self.depends[line]
    }

    /// Adds a line without shape validation. Premises must already exist.
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        let dep = match &justification {
            Justification::Assumption => {
                if let Some(&i) = self.assumptions.get(&formula) {
                    return i;
                }
                true
            }
            Justification::Axiom { .. } => false,
            Justification::Rule { premises, .. } => premises.iter().any(|&p| self.depends[p]),
        };
        if !dep {
            if let Some(&i) = self.theorems.get(&formula) {
                return i;
            }
        }
        let index = self.lines.len();
        if matches!(justification, Justification::Assumption) {
            self.assumptions.insert(formula.clone(), index);
        } else if !dep {
            self.theorems.insert(formula.clone(), index);
        }
        self.lines.push(Line {
            formula,
            justification,
        });
        self.depends.push(dep);
        index
    }

    pub fn assume(&mut self, formula: Formula) -> usize {
        self.push(formula, Justification::Assumption)
    }

    /// Adds `formula` as an instance of `schema`.
    pub fn axiom(&mut self, schema: SchemaId, formula: Formula) -> Result<usize, BuildError> {
        let instantiation = match_schema(&formula, schema)
            .ok_or_else(|| BuildError(format!("{formula} is not an instance of {schema}")))?;
        Ok(self.push(
            formula,
            Justification::Axiom {
                schema,
                instantiation,
            },
        ))
    }

    pub fn axiom_with(
        &mut self,
        schema: SchemaId,
        bindings: &[(&str, &Formula)],
    ) -> Result<usize, BuildError> {
        let inst: Instantiation = bindings
            .iter()
            .map(|(k, v)| (k.to_string(), (*v).clone()))
            .collect();
        let formula = schema
            .instantiate(&inst)
            .ok_or_else(|| BuildError(format!("incomplete instantiation of {schema}")))?;
        self.axiom(schema, formula)
    }

    pub fn rule(&mut self, rule: RuleId, premises: &[usize]) -> Result<usize, BuildError> {
        let formulas: Vec<&Formula> = premises.iter().map(|&p| &self.lines[p].formula).collect();
        let conclusion = rule.conclude(&formulas, None).map_err(BuildError)?;
        Ok(self.push(
            conclusion,
            Justification::Rule {
                rule,
                premises: premises.to_vec(),
            },
        ))
    }

    pub fn mp(&mut self, minor: usize, major: usize) -> Result<usize, BuildError> {
        self.rule(RuleId::MP, &[minor, major])
    }

    /// `line: B` gives `antecedent -> B`.
    pub fn af(&mut self, line: usize, antecedent: Formula) -> usize {
        let formula = Formula::imp(antecedent, self.lines[line].formula.clone());
        self.push(
            formula,
            Justification::Rule {
                rule: RuleId::AF,
                premises: vec![line],
            },
        )
    }

    pub fn trans(&mut self, first: usize, second: usize) -> Result<usize, BuildError> {
        self.rule(RuleId::Trans, &[first, second])
    }

    pub fn conj_imp(&mut self, first: usize, second: usize) -> Result<usize, BuildError> {
        self.rule(RuleId::ConjImp, &[first, second])
    }

    pub fn disj_imp(&mut self, first: usize, second: usize) -> Result<usize, BuildError> {
        self.rule(RuleId::DisjImp, &[first, second])
    }

    pub fn conj(&mut self, first: usize, second: usize) -> usize {
        let formula = Formula::and(
            self.lines[first].formula.clone(),
            self.lines[second].formula.clone(),
        );
        self.push(
            formula,
            Justification::Rule {
                rule: RuleId::Conj,
                premises: vec![first, second],
            },
        )
    }

    pub fn congr(&mut self, first: usize, second: usize) -> Result<usize, BuildError> {
        self.rule(RuleId::Congr, &[first, second])
    }

    /// `A -> A` by Ax8.
    pub fn identity(&mut self, a: &Formula) -> usize {
        self.axiom(SchemaId::Ax8, Formula::imp(a.clone(), a.clone()))
            .expect("identity is an Ax8 instance")
    }

    /// `A <-> A`, two copies of Ax8 joined by Conj.
    pub fn iff_refl(&mut self, a: &Formula) -> usize {
        let id = self.identity(a);
        self.conj(id, id)
    }

    /// Theorem `k -> target`, where `target` occurs in the conjunction tree of `k`.
    pub fn project(&mut self, k: &Formula, target: &Formula) -> Result<usize, BuildError> {
        if k == target {
            return Ok(self.identity(k));
        }
        let (left, right) = k
            .as_and()
            .ok_or_else(|| BuildError(format!("{target} is not a conjunct of {k}")))?;
        let (schema, side) = if contains_conjunct(left, target) {
            (SchemaId::Ax3, left)
        } else if contains_conjunct(right, target) {
            (SchemaId::Ax4, right)
        } else {
            return Err(BuildError(format!("{target} is not a conjunct of {k}")));
        };
        let step = self.axiom(schema, Formula::imp(k.clone(), side.clone()))?;
        if side == target {
            return Ok(step);
        }
        let rest = self.project(side, target)?;
        self.trans(step, rest)
    }

    /// Theorem `from -> to`, where every conjunct of `to` can be projected out of `from`.
    pub fn conj_intro(&mut self, from: &Formula, to: &Formula) -> Result<usize, BuildError> {
        if contains_conjunct(from, to) {
            return self.project(from, to);
        }
        let (left, right) = to
            .as_and()
            .ok_or_else(|| BuildError(format!("{to} cannot be assembled from {from}")))?;
        let l = self.conj_intro(from, left)?;
        let r = self.conj_intro(from, right)?;
        self.conj_imp(l, r)
    }

    /// Copies every line of `proof`, returning the new index of each line.
    pub fn append(&mut self, proof: &HilbertProof) -> Vec<usize> {
        let mut map = Vec::with_capacity(proof.lines.len());
        for line in &proof.lines {
            let justification = match &line.justification {
                Justification::Rule { rule, premises } => Justification::Rule {
                    rule: *rule,
                    premises: premises.iter().map(|&p| map[p]).collect(),
                },
                other => other.clone(),
            };
            map.push(self.push(line.formula.clone(), justification));
        }
        map
    }

    /// The proof of `conclusion`, keeping only the lines it uses.
    pub fn finish(&self, conclusion: usize) -> HilbertProof {
        HilbertProof {
            lines: self.lines[..=conclusion].to_vec(),
        }
        .pruned()
    }
}

/// Does `target` occur as a node of the conjunction tree of `k`?
pub(crate) fn contains_conjunct(k: &Formula, target: &Formula) -> bool {
    if k == target {
        return true;
    }
    match k.as_and() {
        Some((l, r)) => contains_conjunct(l, target) || contains_conjunct(r, target),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::hilbert::check_hilbert;
    use crate::logic::LogicSpec;
    use std::collections::BTreeSet;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn projections_and_assembly_check() {
        let mut b = HilbertBuilder::new();
        let k = f("a & (b & c)");
        let line = b.project(&k, &f("c")).unwrap();
        assert_eq!(b.formula(line), &f("a & (b & c) -> c"));
        let proof = b.finish(line);
        assert!(check_hilbert(&proof, &LogicSpec::wf(), &BTreeSet::new()).accepted);

        let mut b = HilbertBuilder::new();
        let line = b.conj_intro(&k, &f("c & (a & b)")).unwrap();
        assert_eq!(b.formula(line), &f("a & (b & c) -> c & (a & b)"));
        let proof = b.finish(line);
        assert!(check_hilbert(&proof, &LogicSpec::wf(), &BTreeSet::new()).accepted);
    }

    #[test]
    fn shares_repeated_theorems() {
        let mut b = HilbertBuilder::new();
        let x = b.identity(&f("p"));
        let y = b.identity(&f("p"));
        assert_eq!(x, y);
        let r = b.iff_refl(&f("p"));
        assert_eq!(b.formula(r), &f("p <-> p"));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut b = HilbertBuilder::new();
        assert!(b.axiom(SchemaId::Ax14, f("p -> q")).is_err());
        let x = b.identity(&f("p"));
        let y = b.identity(&f("q"));
        assert!(b.trans(x, y).is_err());
        assert!(b.project(&f("p & q"), &f("r")).is_err());
    }
}
