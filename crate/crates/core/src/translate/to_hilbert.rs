use super::{rejection, TranslateError};
use crate::formula::Formula;
use crate::hilbert::{assumption_order, export_into, HilbertBuilder, HilbertProof, RuleId, SchemaId};
use crate::logic::LogicSpec;
use crate::natded::{check_nd, Derivation, NdRule};

/// Compiles an accepted derivation into a Hilbert proof of the same conclusion
/// from the derivation's open assumptions.
pub fn nd_to_hilbert(d: &Derivation, logic: &LogicSpec) -> Result<HilbertProof, TranslateError> {
    let report = check_nd(d, logic);
    if !report.accepted {
        return Err(rejection(&report));
    }
    let mut b = HilbertBuilder::new();
    let line = emit(d, &mut b)?;
    Ok(b.finish(line))
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}

/// Emits lines proving `d.conclusion` from the open leaves of `d`.
fn emit(d: &Derivation, b: &mut HilbertBuilder) -> Result<usize, TranslateError> {
    let Some(rule) = d.rule_id() else {
        return Ok(b.assume(d.conclusion.clone()));
    };
    let ps = d.premises();
    let c = &d.conclusion;
    let line = match rule {
        NdRule::AndI => {
            let l = emit(&ps[0], b)?;
            let r = emit(&ps[1], b)?;
            b.conj(l, r)
        }
        NdRule::AndE1 | NdRule::AndE2 | NdRule::OrI1 | NdRule::OrI2 | NdRule::BotE => {
            let schema = match rule {
                NdRule::AndE1 => SchemaId::Ax3,
                NdRule::AndE2 => SchemaId::Ax4,
                NdRule::OrI1 => SchemaId::Ax1,
                NdRule::OrI2 => SchemaId::Ax2,
                _ => SchemaId::Ax14,
            };
            let minor = emit(&ps[0], b)?;
            let ax = b.axiom(schema, imp(&ps[0].conclusion, c))?;
            b.mp(minor, ax)?
        }
        NdRule::ImpE => {
            let minor = emit(&ps[0], b)?;
            let major = emit(&ps[1], b)?;
            b.mp(minor, major)?
        }
        NdRule::ImpI => {
            let (a, _) = c.as_imp().unwrap();
            theorem_imp(&ps[0], a, b)?
        }
        NdRule::OrE => or_elim(d, b)?,
        NdRule::ImpI1 | NdRule::ImpI2 => {
            // slots bind B (premise 0, proving D) and D (premise 1, proving B)
            let (fb, fd) = (&ps[1].conclusion, &ps[0].conclusion);
            let bd = theorem_imp(&ps[0], fb, b)?;
            let db = theorem_imp(&ps[1], fd, b)?;
            let iff_bd = b.conj(bd, db);
            let (left, _) = c.as_imp().unwrap();
            let congr = if rule == NdRule::ImpI1 {
                let a = left.as_imp().unwrap().0;
                let refl = b.iff_refl(a);
                b.congr(refl, iff_bd)?
            } else {
                let a = left.as_imp().unwrap().1;
                let refl = b.iff_refl(a);
                b.congr(iff_bd, refl)?
            };
            first_half(congr, b)?
        }
        NdRule::ImpIN => {
            // (A->B)->(C->D) from [A]C|B, [A][D]B, [C]A|D, [C][B]D
            let (ab, cd) = c.as_imp().unwrap();
            let (fa, fb) = ab.as_imp().unwrap();
            let (fc, fd) = cd.as_imp().unwrap();
            let a_cb = theorem_imp(&ps[0], fa, b)?;
            let comm = commute(fc, fb, b)?;
            let p1 = b.trans(a_cb, comm)?;
            let p2 = theorem_imp(&ps[2], fc, b)?;
            let p3 = theorem_imp(&ps[1], &Formula::and(fa.clone(), fd.clone()), b)?;
            let p4 = theorem_imp(&ps[3], &Formula::and(fc.clone(), fb.clone()), b)?;
            let iff = b.rule(RuleId::RuleN, &[p1, p2, p3, p4])?;
            first_half(iff, b)?
        }
        NdRule::ImpIN2 => {
            // (A->B)->(C->D) from [C]A|D, [C][B]D
            let (ab, cd) = c.as_imp().unwrap();
            let fb = ab.as_imp().unwrap().1;
            let fc = cd.as_imp().unwrap().0;
            let p1 = theorem_imp(&ps[0], fc, b)?;
            let p2 = theorem_imp(&ps[1], &Formula::and(fc.clone(), fb.clone()), b)?;
            b.rule(RuleId::RuleN2, &[p1, p2])?
        }
        NdRule::ImpIHatC => {
            // (C->A)->(C->B) from [A]B
            let (ca, _) = c.as_imp().unwrap();
            let (fc, fa) = ca.as_imp().unwrap();
            let fb = &ps[0].conclusion;
            let a_b = theorem_imp(&ps[0], fa, b)?;
            let id = b.identity(fa);
            let a_ab = b.conj_imp(id, a_b)?;
            let ab_a = b.axiom(SchemaId::Ax3, imp(&Formula::and(fa.clone(), fb.clone()), fa))?;
            let iff = b.conj(a_ab, ab_a);
            let refl = b.iff_refl(fc);
            let congr = b.congr(refl, iff)?;
            let step = first_half(congr, b)?;
            let hat = b.axiom_with(SchemaId::AxCHat, &[("A", fc), ("B", fa), ("C", fb)])?;
            let chain = b.trans(step, hat)?;
            let pair = Formula::and(imp(fc, fa), imp(fc, fb));
            let proj = b.axiom(SchemaId::Ax4, imp(&pair, &imp(fc, fb)))?;
            b.trans(chain, proj)?
        }
        NdRule::ImpIHatD => {
            // (B->C)->(A->C) from [A]B
            let (bc, ac) = c.as_imp().unwrap();
            let (fb, fc) = bc.as_imp().unwrap();
            let fa = ac.as_imp().unwrap().0;
            let a_b = theorem_imp(&ps[0], fa, b)?;
            let ab = Formula::or(fa.clone(), fb.clone());
            let b_ab = b.axiom(SchemaId::Ax2, imp(fb, &ab))?;
            let id = b.identity(fb);
            let ab_b = b.disj_imp(a_b, id)?;
            let iff = b.conj(b_ab, ab_b);
            let refl = b.iff_refl(fc);
            let congr = b.congr(iff, refl)?;
            let step = first_half(congr, b)?;
            let hat = b.axiom_with(SchemaId::AxDHat, &[("A", fa), ("B", fb), ("C", fc)])?;
            let chain = b.trans(step, hat)?;
            let pair = Formula::and(imp(fa, fc), imp(fb, fc));
            let proj = b.axiom(SchemaId::Ax3, imp(&pair, &imp(fa, fc)))?;
            b.trans(chain, proj)?
        }
        NdRule::ImpIConj | NdRule::ImpIDisj | NdRule::ImpITrans => {
            let schema = match rule {
                NdRule::ImpIConj => SchemaId::AxC,
                NdRule::ImpIDisj => SchemaId::AxD,
                _ => SchemaId::AxI,
            };
            let l = emit(&ps[0], b)?;
            let r = emit(&ps[1], b)?;
            let both = b.conj(l, r);
            let ax = b.axiom(schema, imp(b.formula(both), c))?;
            b.mp(both, ax)?
        }
    };
    if b.formula(line) != c {
        return Err(TranslateError::Internal(format!(
            "{rule} produced {} instead of {c}",
            b.formula(line)
        )));
    }
    Ok(line)
}

/// From a line proving `X <-> Y`, a line proving `X -> Y`.
fn first_half(iff: usize, b: &mut HilbertBuilder) -> Result<usize, TranslateError> {
    let f = b.formula(iff).clone();
    let (x, _) = f.as_and().unwrap();
    let ax = b.axiom(SchemaId::Ax3, imp(&f, x))?;
    Ok(b.mp(iff, ax)?)
}

/// Theorem `x | y -> y | x`.
fn commute(x: &Formula, y: &Formula, b: &mut HilbertBuilder) -> Result<usize, TranslateError> {
    let yx = Formula::or(y.clone(), x.clone());
    let l = b.axiom(SchemaId::Ax2, imp(x, &yx))?;
    let r = b.axiom(SchemaId::Ax1, imp(y, &yx))?;
    Ok(b.disj_imp(l, r)?)
}

/// Theorem `t -> X` for a subderivation `sub` of `X` whose open assumptions are
/// conjuncts of `t`.
fn theorem_imp(sub: &Derivation, t: &Formula, b: &mut HilbertBuilder) -> Result<usize, TranslateError> {
    let mut inner = HilbertBuilder::new();
    let line = emit(sub, &mut inner)?;
    let proof = inner.finish(line);
    let order = assumption_order(&proof);
    if order.is_empty() {
        let map = b.append(&proof);
        return Ok(b.af(*map.last().unwrap(), t.clone()));
    }
    let k = Formula::conj_right(&order);
    let k_x = export_into(b, &proof, &k)?;
    if &k == t {
        return Ok(k_x);
    }
    let t_k = b.conj_intro(t, &k)?;
    Ok(b.trans(t_k, k_x)?)
}

/// `G & (A|B) -> C`, where `G` collects the assumptions of the minor premises
/// that this OrE does not discharge, then modus ponens.
fn or_elim(d: &Derivation, b: &mut HilbertBuilder) -> Result<usize, TranslateError> {
    let ps = d.premises();
    let labels = d.labels();
    let (fa, fb) = ps[0].conclusion.as_or().unwrap();
    let c = &d.conclusion;
    let mut g: Vec<Formula> = Vec::new();
    for (minor, label, own) in [(&ps[1], labels[0], fa), (&ps[2], labels[1], fb)] {
        for leaf in minor.open_leaves() {
            let discharged = label.is_some() && leaf.label == label && &leaf.formula == own;
            if !discharged && !g.contains(&leaf.formula) {
                g.push(leaf.formula);
            }
        }
    }
    let major = emit(&ps[0], b)?;
    if g.is_empty() {
        let ac = theorem_imp(&ps[1], fa, b)?;
        let bc = theorem_imp(&ps[2], fb, b)?;
        let abc = b.disj_imp(ac, bc)?;
        return Ok(b.mp(major, abc)?);
    }
    let kg = Formula::conj_right(&g);
    let ka = Formula::and(kg.clone(), fa.clone());
    let kb = Formula::and(kg.clone(), fb.clone());
    let ac = theorem_imp(&ps[1], &ka, b)?;
    let bc = theorem_imp(&ps[2], &kb, b)?;
    let disj = b.disj_imp(ac, bc)?;
    let dist = b.axiom(
        SchemaId::Ax7,
        imp(&Formula::and(kg.clone(), ps[0].conclusion.clone()), &Formula::or(ka, kb)),
    )?;
    let whole = b.trans(dist, disj)?;
    debug_assert_eq!(b.formula(whole).as_imp().map(|(_, x)| x), Some(c));
    let mut k_line = b.assume(g.last().unwrap().clone());
    for f in g.iter().rev().skip(1) {
        let a = b.assume(f.clone());
        k_line = b.conj(a, k_line);
    }
    let premise = b.conj(k_line, major);
    Ok(b.mp(premise, whole)?)
}
