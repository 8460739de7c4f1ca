use std::collections::BTreeSet;

use super::{rejection, TranslateError};
use crate::formula::Formula;
use crate::hilbert::{check_hilbert, match_schema, HilbertProof, Justification, RuleId, SchemaId};
use crate::logic::{Extension, LogicSpec};
use crate::natded::{Derivation, NdRule};

type D = Derivation;

fn hyp(f: &Formula, label: u32) -> D {
    D::hyp(f.clone(), label)
}

/// Compiles a Hilbert proof into a natural-deduction derivation of the same
/// conclusion, whose open assumptions are among `assumptions`.
pub fn hilbert_to_nd(
    proof: &HilbertProof,
    logic: &LogicSpec,
    assumptions: &BTreeSet<Formula>,
) -> Result<Derivation, TranslateError> {
    let report = check_hilbert(proof, logic, assumptions);
    if !report.accepted {
        return Err(rejection(&report));
    }
    let mut nd: Vec<Option<D>> = vec![None; proof.lines.len()];
    // Only lines the conclusion uses are translated.
    for i in proof.cone() {
        let line = &proof.lines[i];
        let d = match &line.justification {
            Justification::Assumption => D::assume(line.formula.clone()),
            Justification::Axiom { schema, .. } => axiom_derivation(*schema, &line.formula)?,
            Justification::Rule { rule, premises } => {
                let ps: Vec<D> = premises
                    .iter()
                    .map(|&p| nd[p].clone().expect("premises precede"))
                    .collect();
                rule_derivation(*rule, ps, &line.formula, logic)?
            }
        };
        debug_assert_eq!(d.conclusion, line.formula);
        nd[i] = Some(d);
    }
    let last = nd.pop().flatten().ok_or_else(|| TranslateError::Internal("empty proof".into()))?;
    Ok(last.canonical_labels())
}

fn parts(f: &Formula, schema: SchemaId) -> Result<(Formula, Formula, Formula), TranslateError> {
    let m = match_schema(f, schema)
        .ok_or_else(|| TranslateError::Internal(format!("{f} is not an instance of {schema}")))?;
    let get = |k: &str| m.get(k).cloned().unwrap_or(Formula::Bottom);
    Ok((get("A"), get("B"), get("C")))
}

/// A closed derivation of an axiom instance.
pub fn axiom_derivation(schema: SchemaId, formula: &Formula) -> Result<Derivation, TranslateError> {
    let (a, b, c) = parts(formula, schema)?;
    let d = match schema {
        SchemaId::Ax1 => D::imp_i(a.clone(), Some(1), D::or_i1(hyp(&a, 1), b)),
        SchemaId::Ax2 => D::imp_i(b.clone(), Some(1), D::or_i2(a, hyp(&b, 1))),
        SchemaId::Ax3 => {
            let ab = Formula::and(a, b);
            D::imp_i(ab.clone(), Some(1), D::and_e1(hyp(&ab, 1)))
        }
        SchemaId::Ax4 => {
            let ab = Formula::and(a, b);
            D::imp_i(ab.clone(), Some(1), D::and_e2(hyp(&ab, 1)))
        }
        SchemaId::Ax7 => {
            let k = Formula::and(a.clone(), Formula::or(b.clone(), c.clone()));
            let ab = Formula::and(a.clone(), b.clone());
            let ac = Formula::and(a, c.clone());
            let left = D::or_i1(D::and_i(D::and_e1(hyp(&k, 1)), hyp(&b, 2)), ac.clone());
            let right = D::or_i2(ab, D::and_i(D::and_e1(hyp(&k, 1)), hyp(&c, 3)));
            D::imp_i(
                k.clone(),
                Some(1),
                D::or_e(D::and_e2(hyp(&k, 1)), Some(2), left, Some(3), right),
            )
        }
        SchemaId::Ax8 => D::imp_i(a.clone(), Some(1), hyp(&a, 1)),
        SchemaId::Ax14 => D::imp_i(Formula::Bottom, Some(1), D::bot_e(hyp(&Formula::Bottom, 1), a)),
        SchemaId::AxI | SchemaId::AxC | SchemaId::AxD => {
            let (ante, cons) = formula.as_imp().expect("schema is an implication");
            let rule = match schema {
                SchemaId::AxI => NdRule::ImpITrans,
                SchemaId::AxC => NdRule::ImpIConj,
                _ => NdRule::ImpIDisj,
            };
            let body = D::rule(
                rule,
                vec![],
                cons.clone(),
                vec![D::and_e1(hyp(ante, 1)), D::and_e2(hyp(ante, 1))],
            );
            D::imp_i(ante.clone(), Some(1), body)
        }
        SchemaId::AxCHat => {
            // (A -> B&C) -> (A->B) & (A->C)
            let bc = Formula::and(b.clone(), c.clone());
            let major = Formula::imp(a.clone(), bc.clone());
            let hat = |proj: D, target: &Formula| {
                D::rule(
                    NdRule::ImpIHatC,
                    vec![Some(1)],
                    Formula::imp(major.clone(), Formula::imp(a.clone(), target.clone())),
                    vec![proj],
                )
            };
            let left = D::imp_e(hyp(&major, 2), hat(D::and_e1(hyp(&bc, 1)), &b));
            let right = D::imp_e(hyp(&major, 2), hat(D::and_e2(hyp(&bc, 1)), &c));
            D::imp_i(major.clone(), Some(2), D::and_i(left, right))
        }
        SchemaId::AxDHat => {
            // (A|B -> C) -> (A->C) & (B->C)
            let ab = Formula::or(a.clone(), b.clone());
            let major = Formula::imp(ab.clone(), c.clone());
            let hat = |inj: D, source: &Formula| {
                D::rule(
                    NdRule::ImpIHatD,
                    vec![Some(1)],
                    Formula::imp(major.clone(), Formula::imp(source.clone(), c.clone())),
                    vec![inj],
                )
            };
            let left = D::imp_e(hyp(&major, 2), hat(D::or_i1(hyp(&a, 1), b.clone()), &a));
            let right = D::imp_e(hyp(&major, 2), hat(D::or_i2(a.clone(), hyp(&b, 1)), &b));
            D::imp_i(major.clone(), Some(2), D::and_i(left, right))
        }
    };
    Ok(d)
}

fn imp_parts(f: &Formula) -> Result<(Formula, Formula), TranslateError> {
    f.as_imp()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| TranslateError::Internal(format!("{f} is not an implication")))
}

fn rule_derivation(rule: RuleId, mut ps: Vec<D>, conclusion: &Formula, logic: &LogicSpec) -> Result<D, TranslateError> {
    Ok(match rule {
        RuleId::MP => {
            let major = ps.pop().unwrap();
            D::imp_e(ps.pop().unwrap(), major)
        }
        RuleId::AF => {
            let (ante, _) = imp_parts(conclusion)?;
            D::imp_i(ante, None, ps.pop().unwrap())
        }
        RuleId::Conj => {
            let right = ps.pop().unwrap();
            D::and_i(ps.pop().unwrap(), right)
        }
        RuleId::Trans => {
            let (a, _) = imp_parts(conclusion)?;
            let bc = ps.pop().unwrap();
            let ab = ps.pop().unwrap();
            D::imp_i(a.clone(), Some(1), D::imp_e(D::imp_e(hyp(&a, 1), ab), bc))
        }
        RuleId::ConjImp => {
            let (a, _) = imp_parts(conclusion)?;
            let ac = ps.pop().unwrap();
            let ab = ps.pop().unwrap();
            D::imp_i(
                a.clone(),
                Some(1),
                D::and_i(D::imp_e(hyp(&a, 1), ab), D::imp_e(hyp(&a, 1), ac)),
            )
        }
        RuleId::DisjImp => {
            let (ab, _) = imp_parts(conclusion)?;
            let (a, b) = ab.as_or().map(|(a, b)| (a.clone(), b.clone())).unwrap();
            let bc = ps.pop().unwrap();
            let ac = ps.pop().unwrap();
            D::imp_i(
                ab.clone(),
                Some(3),
                D::or_e(
                    hyp(&ab, 3),
                    Some(1),
                    D::imp_e(hyp(&a, 1), ac),
                    Some(2),
                    D::imp_e(hyp(&b, 2), bc),
                ),
            )
        }
        RuleId::Congr => {
            let p2 = ps.pop().unwrap();
            let p1 = ps.pop().unwrap();
            let (a, b) = iff_parts(&p1.conclusion)?;
            let (c, d) = iff_parts(&p2.conclusion)?;
            let ab = D::and_e1(p1.clone());
            let ba = D::and_e2(p1);
            let cd = D::and_e1(p2.clone());
            let dc = D::and_e2(p2);
            let fwd = congruence_half(logic, [&a, &b, &c, &d], [ab.clone(), ba.clone(), cd.clone(), dc.clone()])?;
            let bwd = congruence_half(logic, [&b, &a, &d, &c], [ba, ab, dc, cd])?;
            D::and_i(fwd, bwd)
        }
        RuleId::RuleN => {
            let p4 = ps.pop().unwrap();
            let p3 = ps.pop().unwrap();
            let p2 = ps.pop().unwrap();
            let p1 = ps.pop().unwrap();
            // A -> B|C, C -> A|D, A&D -> B, C&B -> D
            let (a, bc) = imp_parts(&p1.conclusion)?;
            let (b, c) = bc.as_or().map(|(b, c)| (b.clone(), c.clone())).unwrap();
            let (_, ad) = imp_parts(&p2.conclusion)?;
            let d = ad.as_or().unwrap().1.clone();
            let fwd = rule_n_half(&a, &b, &c, &d, &p1, &p2, &p3, &p4);
            let bwd = rule_n_half_converse(&a, &b, &c, &d, &p1, &p2, &p3, &p4);
            D::and_i(fwd, bwd)
        }
        RuleId::RuleN2 => {
            let p2 = ps.pop().unwrap();
            let p1 = ps.pop().unwrap();
            // C -> A|D, C&B -> D  /  (A->B) -> (C->D)
            let (c, _) = imp_parts(&p1.conclusion)?;
            let (cb, _) = imp_parts(&p2.conclusion)?;
            let b = cb.as_and().unwrap().1.clone();
            D::rule(
                NdRule::ImpIN2,
                vec![Some(1), Some(2)],
                conclusion.clone(),
                vec![
                    D::imp_e(hyp(&c, 1), p1),
                    D::imp_e(D::and_i(hyp(&c, 1), hyp(&b, 2)), p2),
                ],
            )
        }
    })
}

fn iff_parts(f: &Formula) -> Result<(Formula, Formula), TranslateError> {
    f.as_iff()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| TranslateError::Internal(format!("{f} is not an equivalence")))
}

/// `(A->C) -> (B->D)` from derivations of `A->B`, `B->A`, `C->D`, `D->C`, using
/// whichever implication-introduction rules `logic` offers.
pub fn congruence_half(logic: &LogicSpec, [a, b, c, d]: [&Formula; 4], [ab, ba, cd, dc]: [D; 4]) -> Result<D, TranslateError> {
    let ac = Formula::imp(a.clone(), c.clone());
    let bc = Formula::imp(b.clone(), c.clone());
    let bd = Formula::imp(b.clone(), d.clone());
    let goal = Formula::imp(ac.clone(), bd.clone());
    if logic.has_basic_congruence_intro() {
        // (A->C)->(B->C) by ImpI2, then (B->C)->(B->D) by ImpI1
        let first = D::rule(
            NdRule::ImpI2,
            vec![Some(1), Some(2)],
            Formula::imp(ac.clone(), bc.clone()),
            vec![D::imp_e(hyp(a, 1), ab), D::imp_e(hyp(b, 2), ba)],
        );
        let second = D::rule(
            NdRule::ImpI1,
            vec![Some(3), Some(4)],
            Formula::imp(bc, bd),
            vec![D::imp_e(hyp(c, 3), cd), D::imp_e(hyp(d, 4), dc)],
        );
        return Ok(D::imp_i(ac.clone(), Some(5), D::imp_e(D::imp_e(hyp(&ac, 5), first), second)));
    }
    if logic.has(Extension::I) {
        let ad = D::rule(
            NdRule::ImpITrans,
            vec![],
            Formula::imp(a.clone(), d.clone()),
            vec![hyp(&ac, 5), cd],
        );
        let body = D::rule(NdRule::ImpITrans, vec![], bd, vec![ba, ad]);
        return Ok(D::imp_i(ac, Some(5), body));
    }
    if logic.has(Extension::N) {
        // (A->C)->(B->D) with slots A, D, B, C
        return Ok(D::rule(
            NdRule::ImpIN,
            vec![Some(1), Some(2), Some(3), Some(4)],
            goal,
            vec![
                D::or_i1(D::imp_e(hyp(a, 1), ab), c.clone()),
                D::imp_e(hyp(d, 2), dc),
                D::or_i1(D::imp_e(hyp(b, 3), ba), d.clone()),
                D::imp_e(hyp(c, 4), cd),
            ],
        ));
    }
    if logic.has(Extension::N2) {
        // slots B, C
        return Ok(D::rule(
            NdRule::ImpIN2,
            vec![Some(1), Some(2)],
            goal,
            vec![D::or_i1(D::imp_e(hyp(b, 1), ba), d.clone()), D::imp_e(hyp(c, 2), cd)],
        ));
    }
    Err(TranslateError::Unavailable {
        rule: "Congr".into(),
        logic: logic.to_string(),
    })
}

/// `[x] ⊢ y | z` from a derivation of `x -> z | y`: the disjunction is commuted.
fn commuted(x: &Formula, y: &Formula, z: &Formula, imp: &D, label: u32) -> D {
    let zy = D::imp_e(hyp(x, label), imp.clone());
    D::or_e(
        zy,
        Some(5),
        D::or_i2(y.clone(), hyp(z, 5)),
        Some(6),
        D::or_i1(hyp(y, 6), z.clone()),
    )
}

/// `(A->B) -> (C->D)` by ImpIN from the four premises of rule N.
#[allow(clippy::too_many_arguments)]
fn rule_n_half(a: &Formula, b: &Formula, c: &Formula, d: &Formula, p1: &D, p2: &D, p3: &D, p4: &D) -> D {
    D::rule(
        NdRule::ImpIN,
        vec![Some(1), Some(2), Some(3), Some(4)],
        Formula::imp(Formula::imp(a.clone(), b.clone()), Formula::imp(c.clone(), d.clone())),
        vec![
            commuted(a, c, b, p1, 1),
            D::imp_e(D::and_i(hyp(a, 1), hyp(d, 2)), p3.clone()),
            D::imp_e(hyp(c, 3), p2.clone()),
            D::imp_e(D::and_i(hyp(c, 3), hyp(b, 4)), p4.clone()),
        ],
    )
}

/// `(C->D) -> (A->B)` by ImpIN, the rule's slots read as C, B, A, D.
#[allow(clippy::too_many_arguments)]
fn rule_n_half_converse(a: &Formula, b: &Formula, c: &Formula, d: &Formula, p1: &D, p2: &D, p3: &D, p4: &D) -> D {
    D::rule(
        NdRule::ImpIN,
        vec![Some(1), Some(2), Some(3), Some(4)],
        Formula::imp(Formula::imp(c.clone(), d.clone()), Formula::imp(a.clone(), b.clone())),
        vec![
            D::imp_e(hyp(c, 1), p2.clone()),
            D::imp_e(D::and_i(hyp(c, 1), hyp(b, 2)), p4.clone()),
            commuted(a, c, b, p1, 3),
            D::imp_e(D::and_i(hyp(a, 3), hyp(d, 4)), p3.clone()),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::hilbert::HilbertBuilder;
    use crate::natded::check_nd;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn every_axiom_template_checks() {
        let (a, b, c) = (f("p & q"), f("r"), f("s -> t"));
        let logic: LogicSpec = "WF+I+C+D+CHAT+DHAT".parse().unwrap();
        for schema in SchemaId::ALL {
            let inst = [("A", &a), ("B", &b), ("C", &c)]
                .into_iter()
                .filter(|(k, _)| schema.metavariables().contains(*k))
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            let formula = schema.instantiate(&inst).unwrap();
            let d = axiom_derivation(schema, &formula).unwrap();
            let report = check_nd(&d, &logic);
            assert!(report.accepted, "{schema}: {report}");
            assert_eq!(report.conclusion, Some(formula));
            assert!(report.open_assumptions.is_empty());
        }
    }

    #[test]
    fn ax3_is_one_step() {
        let d = axiom_derivation(SchemaId::Ax3, &f("p & q -> p")).unwrap();
        assert_eq!(d.rule_id(), Some(NdRule::ImpI));
        assert_eq!(d.premises()[0].rule_id(), Some(NdRule::AndE1));
    }

    #[test]
    fn trans_uses_the_template() {
        let mut b = HilbertBuilder::new();
        let x = b.axiom(SchemaId::Ax3, f("p & q -> p")).unwrap();
        let y = b.axiom(SchemaId::Ax1, f("p -> p | r")).unwrap();
        let t = b.trans(x, y).unwrap();
        let proof = b.finish(t);
        let d = hilbert_to_nd(&proof, &LogicSpec::wf(), &BTreeSet::new()).unwrap();
        assert_eq!(d.rule_id(), Some(NdRule::ImpI));
        let inner = &d.premises()[0];
        assert_eq!(inner.rule_id(), Some(NdRule::ImpE));
        assert_eq!(inner.premises()[0].rule_id(), Some(NdRule::ImpE));
        assert!(check_nd(&d, &LogicSpec::wf()).accepted);
    }

    #[test]
    fn congruence_in_every_preset() {
        let mut b = HilbertBuilder::new();
        let pp = b.iff_refl(&f("p & q"));
        let qq = b.iff_refl(&f("r"));
        let line = b.congr(pp, qq).unwrap();
        let proof = b.finish(line);
        for (name, logic) in LogicSpec::presets() {
            let d = hilbert_to_nd(&proof, &logic, &BTreeSet::new()).unwrap();
            let report = check_nd(&d, &logic);
            assert!(report.accepted, "{name}: {report}");
            assert_eq!(report.conclusion, proof.conclusion().cloned());
        }
    }
}
