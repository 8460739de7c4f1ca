//! Random proofs for property tests, the acceptance suite and benchmarks.
//!
//! Everything is driven by a caller-supplied RNG so runs are reproducible from a
//! seed. Generated objects are accepted by construction; callers that need a hard
//! guarantee should still run the checker.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::Formula;
use crate::hilbert::{check_hilbert, HilbertBuilder, HilbertProof, RuleId, SchemaId};
use crate::logic::{Extension, LogicSpec};
use crate::natded::{Derivation, NdRule};
use crate::normalize::Conversion;

const ATOMS: [&str; 4] = ["p", "q", "r", "s"];

pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        if rng.gen_bool(0.05) {
            return Formula::Bottom;
        }
        return Formula::atom(*ATOMS.choose(rng).unwrap());
    }
    let l = random_formula(rng, depth - 1);
    let r = random_formula(rng, depth - 1);
    match rng.gen_range(0..3) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        _ => Formula::imp(l, r),
    }
}

/// A generated Hilbert proof together with the assumptions it was checked against.
#[derive(Clone, Debug)]
pub struct GeneratedHilbert {
    pub assumptions: Vec<Formula>,
    pub proof: HilbertProof,
}

#[derive(Clone, Copy, Debug)]
pub struct HilbertConfig {
    /// Number of assumptions introduced (at most).
    pub assumptions: usize,
    /// Number of rule applications.
    pub steps: usize,
    /// Force the conclusion to rest on at least one assumption.
    pub dependent: bool,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        HilbertConfig {
            assumptions: 2,
            steps: 6,
            dependent: false,
        }
    }
}

fn helper_axiom(b: &mut HilbertBuilder, schema: SchemaId, bindings: &[(&str, &Formula)]) -> usize {
    b.axiom_with(schema, bindings)
        .expect("helper axioms use complete instantiations")
}

/// Forward-chaining Hilbert proof using the rules of `logic`.
pub fn hilbert_proof<R: Rng + ?Sized>(rng: &mut R, logic: &LogicSpec, config: HilbertConfig) -> GeneratedHilbert {
    let mut b = HilbertBuilder::new();
    let mut assumptions = Vec::new();
    for _ in 0..config.assumptions {
        let f = random_formula(rng, 2);
        if !assumptions.contains(&f) {
            assumptions.push(f.clone());
        }
        b.assume(f);
    }
    let schemas: Vec<SchemaId> = SchemaId::ALL.into_iter().filter(|s| s.available_in(logic)).collect();
    let rules: Vec<RuleId> = RuleId::ALL.into_iter().filter(|r| r.available_in(logic)).collect();
    let mut last = if b.is_empty() {
        random_axiom(rng, &mut b, &schemas)
    } else {
        rng.gen_range(0..b.len())
    };
    for _ in 0..config.steps {
        let rule = *rules.choose(rng).unwrap();
        if let Some(line) = apply_rule(rng, &mut b, rule, last) {
            last = line;
        } else {
            last = random_axiom(rng, &mut b, &schemas);
        }
    }
    if config.dependent && !b.depends(last) && !assumptions.is_empty() {
        let a = b.assume(assumptions.choose(rng).unwrap().clone());
        last = if rng.gen_bool(0.5) { b.conj(last, a) } else { b.conj(a, last) };
    }
    let proof = b.finish(last);
    debug_assert!(check_hilbert(&proof, logic, &assumptions.iter().cloned().collect()).accepted);
    GeneratedHilbert { assumptions, proof }
}

fn random_axiom<R: Rng + ?Sized>(rng: &mut R, b: &mut HilbertBuilder, schemas: &[SchemaId]) -> usize {
    let schema = *schemas.choose(rng).unwrap();
    let inst: Vec<(String, Formula)> = schema
        .metavariables()
        .into_iter()
        .map(|v| (v, random_formula(rng, 1)))
        .collect();
    let bindings: Vec<(&str, &Formula)> = inst.iter().map(|(k, v)| (k.as_str(), v)).collect();
    helper_axiom(b, schema, &bindings)
}

/// Applies `rule` with `last` among its premises where the shape allows, adding
/// helper axioms for the remaining premises.
fn apply_rule<R: Rng + ?Sized>(rng: &mut R, b: &mut HilbertBuilder, rule: RuleId, last: usize) -> Option<usize> {
    let x = b.formula(last).clone();
    let theorem = !b.depends(last);
    let extra = random_formula(rng, 1);
    match rule {
        RuleId::MP => {
            // last as minor, with an axiom major premise
            let major = match rng.gen_range(0..3) {
                0 => helper_axiom(b, SchemaId::Ax1, &[("A", &x), ("B", &extra)]),
                1 => helper_axiom(b, SchemaId::Ax2, &[("A", &extra), ("B", &x)]),
                _ => match x.as_and() {
                    Some((l, r)) => helper_axiom(b, SchemaId::Ax4, &[("A", l), ("B", r)]),
                    None => helper_axiom(b, SchemaId::Ax8, &[("A", &x)]),
                },
            };
            b.mp(last, major).ok()
        }
        RuleId::Conj => {
            let other = rng.gen_range(0..b.len());
            Some(if rng.gen_bool(0.5) { b.conj(last, other) } else { b.conj(other, last) })
        }
        RuleId::AF => theorem.then(|| b.af(last, extra)),
        RuleId::Trans => {
            let (_, c) = x.as_imp().filter(|_| theorem)?;
            let c = c.clone();
            let next = helper_axiom(b, SchemaId::Ax1, &[("A", &c), ("B", &extra)]);
            b.trans(last, next).ok()
        }
        RuleId::ConjImp => {
            let (a, _) = x.as_imp().filter(|_| theorem)?;
            let a = a.clone();
            let other = helper_axiom(b, SchemaId::Ax1, &[("A", &a), ("B", &extra)]);
            b.conj_imp(last, other).ok()
        }
        RuleId::DisjImp => {
            let (_, c) = x.as_imp().filter(|_| theorem)?;
            let c = c.clone();
            let id = b.identity(&c);
            b.disj_imp(last, id).ok()
        }
        RuleId::Congr => {
            let left = if x.as_iff().is_some() && theorem {
                last
            } else {
                b.iff_refl(&x)
            };
            let right = b.iff_refl(&extra);
            b.congr(left, right).ok()
        }
        RuleId::RuleN => {
            let a = x;
            let p1 = helper_axiom(b, SchemaId::Ax1, &[("A", &a), ("B", &a)]);
            let p3 = helper_axiom(b, SchemaId::Ax3, &[("A", &a), ("B", &a)]);
            b.rule(RuleId::RuleN, &[p1, p1, p3, p3]).ok()
        }
        RuleId::RuleN2 => {
            let (c, bb) = (x, extra);
            let p1 = helper_axiom(b, SchemaId::Ax1, &[("A", &c), ("B", &bb)]);
            let p2 = helper_axiom(b, SchemaId::Ax4, &[("A", &c), ("B", &bb)]);
            b.rule(RuleId::RuleN2, &[p1, p2]).ok()
        }
    }
}

/// Detour classes whose redex can be built from the rules of `logic`.
pub fn detour_classes(logic: &LogicSpec) -> Vec<Conversion> {
    let mut out = vec![
        Conversion::AndDetour,
        Conversion::OrDetour,
        Conversion::ImpDetour,
        Conversion::Permutation,
    ];
    if logic.has_basic_congruence_intro() {
        out.push(Conversion::Congruence);
    }
    let ext = [
        (Extension::N, Conversion::CongruenceN),
        (Extension::N2, Conversion::CongruenceN2),
        (Extension::CHat, Conversion::HatC),
        (Extension::DHat, Conversion::HatD),
        (Extension::C, Conversion::Conj),
        (Extension::D, Conversion::Disj),
        (Extension::I, Conversion::Trans),
    ];
    out.extend(ext.into_iter().filter(|(e, _)| logic.has(*e)).map(|(_, c)| c));
    out
}

/// Hypotheses in scope: formula and the label that binds it (`None` for open
/// assumptions of the whole derivation).
type Ctx = Vec<(Formula, Option<u32>)>;

struct NdGen<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    classes: Vec<Conversion>,
    intros: Vec<NdRule>,
    inject: f64,
    next: u32,
}

fn leaf(f: &Formula, label: Option<u32>) -> Derivation {
    match label {
        Some(l) => Derivation::hyp(f.clone(), l),
        None => Derivation::assume(f.clone()),
    }
}

impl<R: Rng + ?Sized> NdGen<'_, R> {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    fn formula(&mut self) -> Formula {
        random_formula(self.rng, 2)
    }

    fn gen(&mut self, ctx: &Ctx, depth: usize) -> Derivation {
        if depth == 0 {
            return self.base(ctx);
        }
        if self.rng.gen_bool(self.inject) {
            let class = *self.classes.choose(self.rng).unwrap();
            return self.detour(class, ctx, depth - 1);
        }
        match self.rng.gen_range(0..7) {
            0 => self.base(ctx),
            1 => Derivation::and_i(self.gen(ctx, depth - 1), self.gen(ctx, depth - 1)),
            2 => {
                let d = self.gen(ctx, depth - 1);
                let x = self.formula();
                if self.rng.gen_bool(0.5) {
                    Derivation::or_i1(d, x)
                } else {
                    Derivation::or_i2(x, d)
                }
            }
            3 => {
                let a = self.antecedent(ctx);
                self.imp_i(a, depth - 1)
            }
            4 => self.or_e_on_hyp(ctx, depth - 1).unwrap_or_else(|| self.base(ctx)),
            _ => match self.intros.choose(self.rng).copied() {
                Some(rule) => self.extension_intro(rule, depth - 1),
                None => self.base(ctx),
            },
        }
    }

    fn antecedent(&mut self, ctx: &Ctx) -> Formula {
        if !ctx.is_empty() && self.rng.gen_bool(0.3) {
            ctx.choose(self.rng).unwrap().0.clone()
        } else {
            self.formula()
        }
    }

    /// A hypothesis, possibly projected through AndE, or `A -> A` when nothing is in scope.
    fn base(&mut self, ctx: &Ctx) -> Derivation {
        let Some((f, l)) = ctx.choose(self.rng).cloned() else {
            let a = self.formula();
            let l = self.fresh();
            return Derivation::imp_i(a.clone(), Some(l), Derivation::hyp(a, l));
        };
        let mut d = leaf(&f, l);
        while d.conclusion.as_and().is_some() && self.rng.gen_bool(0.5) {
            d = if self.rng.gen_bool(0.5) {
                Derivation::and_e1(d)
            } else {
                Derivation::and_e2(d)
            };
        }
        if d.conclusion == Formula::Bottom && self.rng.gen_bool(0.5) {
            let x = self.formula();
            d = Derivation::bot_e(d, x);
        }
        d
    }

    /// `ImpI` over a body that may use only the new hypothesis.
    fn imp_i(&mut self, a: Formula, depth: usize) -> Derivation {
        let l = self.fresh();
        let body = self.gen(&vec![(a.clone(), Some(l))], depth);
        Derivation::imp_i(a, Some(l), body)
    }

    fn or_e_on_hyp(&mut self, ctx: &Ctx, depth: usize) -> Option<Derivation> {
        let (f, l) = ctx.iter().filter(|(f, _)| f.as_or().is_some()).collect::<Vec<_>>().choose(self.rng).cloned()?.clone();
        let (a, b) = f.as_or().map(|(a, b)| (a.clone(), b.clone()))?;
        let (l1, l2) = (self.fresh(), self.fresh());
        let mut c1 = ctx.clone();
        c1.push((a, Some(l1)));
        let m1 = self.gen(&c1, depth);
        let mut c2 = ctx.clone();
        c2.push((b, Some(l2)));
        let m2 = prove(&m1.conclusion, &c2, 3, &mut self.next)?;
        Some(Derivation::or_e(leaf(&f, l), Some(l1), m1, Some(l2), m2))
    }

    /// A formula `d` together with `[b]^lb d` and `[d]^ld b`.
    fn pair(&mut self, b: &Formula, lb: u32, ld: u32, depth: usize) -> (Formula, Derivation, Derivation) {
        let forward = self.gen(&vec![(b.clone(), Some(lb))], depth);
        let d = forward.conclusion.clone();
        if let Some(back) = prove(b, &vec![(d.clone(), Some(ld))], 3, &mut self.next) {
            return (d, forward, back);
        }
        let d = Formula::and(b.clone(), b.clone());
        let forward = Derivation::and_i(Derivation::hyp(b.clone(), lb), Derivation::hyp(b.clone(), lb));
        let back = Derivation::and_e1(Derivation::hyp(d.clone(), ld));
        (d, forward, back)
    }

    /// A derivation of `c` from `[x]^l`, preferring a random `x`, falling back to `x = c`.
    fn consequent_from(&mut self, c: &Formula, l: u32) -> (Formula, Derivation) {
        let x = if self.rng.gen_bool(0.5) {
            Formula::and(c.clone(), self.formula())
        } else {
            self.formula()
        };
        match prove(c, &vec![(x.clone(), Some(l))], 3, &mut self.next) {
            Some(d) => (x, d),
            None => (c.clone(), Derivation::hyp(c.clone(), l)),
        }
    }

    /// The closed extension introductions, with no elimination below them.
    fn extension_intro(&mut self, rule: NdRule, depth: usize) -> Derivation {
        match rule {
            NdRule::ImpI1 | NdRule::ImpI2 => {
                let (a, b) = (self.formula(), self.formula());
                let (lb, ld) = (self.fresh(), self.fresh());
                let (d, d0, d1) = self.pair(&b, lb, ld, depth);
                let concl = if rule == NdRule::ImpI1 {
                    Formula::imp(Formula::imp(a.clone(), b), Formula::imp(a, d))
                } else {
                    Formula::imp(Formula::imp(b, a.clone()), Formula::imp(d, a))
                };
                Derivation::rule(rule, vec![Some(lb), Some(ld)], concl, vec![d0, d1])
            }
            NdRule::ImpIN => {
                let ab = self.formula_pair_b();
                self.imp_in(ab, depth).1
            }
            NdRule::ImpIN2 => {
                let ab = self.formula_pair_b();
                self.imp_in2(ab, depth).1
            }
            NdRule::ImpIHatC => {
                let (c, a) = (self.formula(), self.formula());
                let la = self.fresh();
                let d0 = self.gen(&vec![(a.clone(), Some(la))], depth);
                let b = d0.conclusion.clone();
                let concl = Formula::imp(Formula::imp(c.clone(), a), Formula::imp(c, b));
                Derivation::rule(rule, vec![Some(la)], concl, vec![d0])
            }
            NdRule::ImpIHatD => {
                let (a, c) = (self.formula(), self.formula());
                let la = self.fresh();
                let d0 = self.gen(&vec![(a.clone(), Some(la))], depth);
                let b = d0.conclusion.clone();
                let concl = Formula::imp(Formula::imp(b, c.clone()), Formula::imp(a, c));
                Derivation::rule(rule, vec![Some(la)], concl, vec![d0])
            }
            NdRule::ImpIConj => {
                let a = self.formula();
                self.imp_i_conj(a, depth)
            }
            NdRule::ImpIDisj => self.imp_i_disj(0, depth).1,
            NdRule::ImpITrans => {
                let a = self.formula();
                self.imp_i_trans(a, depth)
            }
            _ => unreachable!("not an extension introduction"),
        }
    }

    fn formula_pair_b(&mut self) -> (Formula, Formula) {
        (self.formula(), self.formula())
    }

    /// `(A->B)->(C->D)` by ImpIN for the given `A`, `B`. Returns `C`.
    fn imp_in(&mut self, (a, b): (Formula, Formula), depth: usize) -> (Formula, Derivation) {
        let (la, ld, lc, lb) = (self.fresh(), self.fresh(), self.fresh(), self.fresh());
        let (d, d_bd, d_db) = self.pair(&b, lb, ld, depth);
        // child0 needs A |- C | B, so C must follow from A alone
        let c = if self.rng.gen_bool(0.5) {
            a.clone()
        } else {
            Formula::and(a.clone(), a.clone())
        };
        let child0 = prove(&Formula::or(c.clone(), b.clone()), &vec![(a.clone(), Some(la))], 3, &mut self.next);
        let child2 = prove(&Formula::or(a.clone(), d.clone()), &vec![(c.clone(), Some(lc))], 3, &mut self.next);
        let (child0, child2) = (child0.expect("C is A or A & A"), child2.expect("C is A or A & A"));
        let concl = Formula::imp(Formula::imp(a, b), Formula::imp(c.clone(), d));
        let node = Derivation::rule(
            NdRule::ImpIN,
            vec![Some(la), Some(ld), Some(lc), Some(lb)],
            concl,
            vec![child0, d_db, child2, d_bd],
        );
        (c, node)
    }

    /// `(A->B)->(C->D)` by ImpIN2 for the given `A`, `B`.
    fn imp_in2(&mut self, (a, b): (Formula, Formula), depth: usize) -> (Formula, Derivation) {
        let (lc, lb, ld) = (self.fresh(), self.fresh(), self.fresh());
        let (d, d_bd, _) = self.pair(&b, lb, ld, depth);
        let c = if self.rng.gen_bool(0.5) {
            a.clone()
        } else {
            Formula::and(self.formula(), a.clone())
        };
        let child0 = prove(&Formula::or(a.clone(), d.clone()), &vec![(c.clone(), Some(lc))], 3, &mut self.next)
            .expect("C is A or X & A");
        let concl = Formula::imp(Formula::imp(a, b), Formula::imp(c.clone(), d));
        let node = Derivation::rule(NdRule::ImpIN2, vec![Some(lc), Some(lb)], concl, vec![child0, d_bd]);
        (c, node)
    }

    fn imp_i_conj(&mut self, a: Formula, depth: usize) -> Derivation {
        let d0 = self.imp_i(a.clone(), depth);
        let d1 = self.imp_i(a.clone(), depth);
        let (b, c) = (imp_consequent(&d0), imp_consequent(&d1));
        Derivation::rule(
            NdRule::ImpIConj,
            vec![],
            Formula::imp(a, Formula::and(b, c)),
            vec![d0, d1],
        )
    }

    /// `A1|A2 -> C` by ImpIDisj where `A_{side+1}` is generated freely.
    /// Returns the other disjunct.
    fn imp_i_disj(&mut self, side: usize, depth: usize) -> (Formula, Derivation) {
        let ai = self.formula();
        self.imp_i_disj_with(ai, side, depth)
    }

    fn imp_i_disj_with(&mut self, ai: Formula, side: usize, depth: usize) -> (Formula, Derivation) {
        let di = self.imp_i(ai.clone(), depth);
        let c = imp_consequent(&di);
        let l = self.fresh();
        let (x, body) = self.consequent_from(&c, l);
        let dx = Derivation::imp_i(x.clone(), Some(l), body);
        let (d1, d2, a1, a2) = if side == 0 {
            (di, dx, ai, x.clone())
        } else {
            (dx, di, x.clone(), ai)
        };
        let concl = Formula::imp(Formula::or(a1, a2), c);
        (x, Derivation::rule(NdRule::ImpIDisj, vec![], concl, vec![d1, d2]))
    }

    fn imp_i_trans(&mut self, a: Formula, depth: usize) -> Derivation {
        let d0 = self.imp_i(a.clone(), depth);
        let b = imp_consequent(&d0);
        let d1 = self.imp_i(b, depth);
        let c = imp_consequent(&d1);
        Derivation::rule(NdRule::ImpITrans, vec![], Formula::imp(a, c), vec![d0, d1])
    }

    /// A redex of the given conversion class whose open assumptions come from `ctx`.
    fn detour(&mut self, class: Conversion, ctx: &Ctx, depth: usize) -> Derivation {
        match class {
            Conversion::AndDetour => {
                let pair = Derivation::and_i(self.gen(ctx, depth), self.gen(ctx, depth));
                if self.rng.gen_bool(0.5) {
                    Derivation::and_e1(pair)
                } else {
                    Derivation::and_e2(pair)
                }
            }
            Conversion::OrDetour => {
                let g = self.gen(ctx, depth);
                let ai = g.conclusion.clone();
                let li = self.fresh();
                let mut ci = ctx.clone();
                ci.push((ai.clone(), Some(li)));
                let mi = self.gen(&ci, depth);
                let lo = self.fresh();
                let (x, mo) = self.consequent_from_ctx(&mi.conclusion, ctx, lo);
                if self.rng.gen_bool(0.5) {
                    Derivation::or_e(Derivation::or_i1(g, x), Some(li), mi, Some(lo), mo)
                } else {
                    Derivation::or_e(Derivation::or_i2(x, g), Some(lo), mo, Some(li), mi)
                }
            }
            Conversion::ImpDetour => {
                let minor = self.gen(ctx, depth);
                let a = minor.conclusion.clone();
                Derivation::imp_e(minor, self.imp_i(a, depth))
            }
            Conversion::Permutation => self.permutation(ctx, depth),
            Conversion::Congruence => {
                let (lb, ld) = (self.fresh(), self.fresh());
                if self.rng.gen_bool(0.5) {
                    let a = self.formula();
                    let minor = self.imp_i(a.clone(), depth);
                    let b = imp_consequent(&minor);
                    let (d, d0, d1) = self.pair(&b, lb, ld, depth);
                    let concl = Formula::imp(Formula::imp(a.clone(), b), Formula::imp(a, d));
                    let major = Derivation::rule(NdRule::ImpI1, vec![Some(lb), Some(ld)], concl, vec![d0, d1]);
                    Derivation::imp_e(minor, major)
                } else {
                    let b = self.formula();
                    let minor = self.imp_i(b.clone(), depth);
                    let a = imp_consequent(&minor);
                    let (d, d0, d1) = self.pair(&b, lb, ld, depth);
                    let concl = Formula::imp(Formula::imp(b, a.clone()), Formula::imp(d, a));
                    let major = Derivation::rule(NdRule::ImpI2, vec![Some(lb), Some(ld)], concl, vec![d0, d1]);
                    Derivation::imp_e(minor, major)
                }
            }
            Conversion::CongruenceN | Conversion::CongruenceN2 => {
                let a = self.formula();
                let minor = self.imp_i(a.clone(), depth);
                let b = imp_consequent(&minor);
                let major = if class == Conversion::CongruenceN {
                    self.imp_in((a, b), depth).1
                } else {
                    self.imp_in2((a, b), depth).1
                };
                Derivation::imp_e(minor, major)
            }
            Conversion::HatC => {
                let c = self.formula();
                let minor = self.imp_i(c.clone(), depth);
                let a = imp_consequent(&minor);
                let la = self.fresh();
                let d0 = self.gen(&vec![(a.clone(), Some(la))], depth);
                let b = d0.conclusion.clone();
                let concl = Formula::imp(Formula::imp(c.clone(), a), Formula::imp(c, b));
                Derivation::imp_e(minor, Derivation::rule(NdRule::ImpIHatC, vec![Some(la)], concl, vec![d0]))
            }
            Conversion::HatD => {
                let a = self.formula();
                let la = self.fresh();
                let d0 = self.gen(&vec![(a.clone(), Some(la))], depth);
                let b = d0.conclusion.clone();
                let minor = self.imp_i(b.clone(), depth);
                let c = imp_consequent(&minor);
                let concl = Formula::imp(Formula::imp(b, c.clone()), Formula::imp(a, c));
                Derivation::imp_e(minor, Derivation::rule(NdRule::ImpIHatD, vec![Some(la)], concl, vec![d0]))
            }
            Conversion::Conj => {
                let minor = self.gen(ctx, depth);
                let a = minor.conclusion.clone();
                let major = self.imp_i_conj(a, depth);
                Derivation::imp_e(minor, major)
            }
            Conversion::Disj => {
                let g = self.gen(ctx, depth);
                let side = self.rng.gen_range(0..2);
                let (x, major) = self.imp_i_disj_with(g.conclusion.clone(), side, depth);
                let minor = if side == 0 {
                    Derivation::or_i1(g, x)
                } else {
                    Derivation::or_i2(x, g)
                };
                Derivation::imp_e(minor, major)
            }
            Conversion::Trans => {
                let minor = self.gen(ctx, depth);
                let a = minor.conclusion.clone();
                let major = self.imp_i_trans(a, depth);
                Derivation::imp_e(minor, major)
            }
        }
    }

    /// Like `consequent_from` with the surrounding hypotheses also in scope.
    fn consequent_from_ctx(&mut self, c: &Formula, ctx: &Ctx, l: u32) -> (Formula, Derivation) {
        let x = self.formula();
        let mut cx = ctx.clone();
        cx.push((x.clone(), Some(l)));
        match prove(c, &cx, 3, &mut self.next) {
            Some(d) => (x, d),
            None => (c.clone(), Derivation::hyp(c.clone(), l)),
        }
    }

    /// An elimination whose major premise is an OrE conclusion.
    fn permutation(&mut self, ctx: &Ctx, depth: usize) -> Derivation {
        match self.rng.gen_range(0..3) {
            0 => {
                let ore = self.or_e_conj(ctx, depth);
                if self.rng.gen_bool(0.5) {
                    Derivation::and_e1(ore)
                } else {
                    Derivation::and_e2(ore)
                }
            }
            1 => {
                // OrE over an OrE concluding P | Q
                let g = self.gen(ctx, depth);
                let (l1, lp, lq, l2) = (self.fresh(), self.fresh(), self.fresh(), self.fresh());
                let mut c1 = ctx.clone();
                c1.push((g.conclusion.clone(), Some(l1)));
                let p_der = self.gen(&c1, depth);
                let p = p_der.conclusion.clone();
                let mut cp = ctx.clone();
                cp.push((p.clone(), Some(lp)));
                let n1 = self.gen(&cp, depth);
                let (q, n2) = self.consequent_from_ctx(&n1.conclusion, ctx, lq);
                let pq = Formula::or(p, q.clone());
                let inner = Derivation::or_e(
                    Derivation::or_i1(g, pq.clone()),
                    Some(l1),
                    Derivation::or_i1(p_der, q),
                    Some(l2),
                    Derivation::hyp(pq, l2),
                );
                Derivation::or_e(inner, Some(lp), n1, Some(lq), n2)
            }
            _ => {
                // ImpE over a closed OrE concluding an implication
                let minor = self.gen(ctx, depth);
                let a = minor.conclusion.clone();
                let g = self.gen(&Vec::new(), depth);
                let x = self.formula();
                let body = self.imp_i(a, depth);
                let (l1, l2) = (self.fresh(), self.fresh());
                let ore = Derivation::or_e(Derivation::or_i1(g, x), Some(l1), body.clone(), Some(l2), body);
                Derivation::imp_e(minor, ore)
            }
        }
    }

    /// An OrE concluding a conjunction, on a disjunctive hypothesis when one is
    /// in scope and the second branch can be closed, otherwise on an OrI.
    fn or_e_conj(&mut self, ctx: &Ctx, depth: usize) -> Derivation {
        let (l1, l2) = (self.fresh(), self.fresh());
        let disj: Vec<_> = ctx.iter().filter(|(f, _)| f.as_or().is_some()).cloned().collect();
        if let Some((f, l)) = disj.choose(self.rng).cloned() {
            let (a1, a2) = f.as_or().map(|(a, b)| (a.clone(), b.clone())).unwrap();
            let mut c1 = ctx.clone();
            c1.push((a1, Some(l1)));
            let m1 = Derivation::and_i(self.gen(&c1, depth), self.gen(&c1, depth));
            let mut c2 = ctx.clone();
            c2.push((a2, Some(l2)));
            if let Some(m2) = prove(&m1.conclusion, &c2, 3, &mut self.next) {
                return Derivation::or_e(leaf(&f, l), Some(l1), m1, Some(l2), m2);
            }
        }
        let g = self.gen(ctx, depth);
        let mut c1 = ctx.clone();
        c1.push((g.conclusion.clone(), Some(l1)));
        let m1 = Derivation::and_i(self.gen(&c1, depth), self.gen(&c1, depth));
        let t = m1.conclusion.clone();
        Derivation::or_e(Derivation::or_i1(g, t.clone()), Some(l1), m1, Some(l2), Derivation::hyp(t, l2))
    }
}

fn imp_consequent(d: &Derivation) -> Formula {
    d.conclusion.as_imp().expect("implication").1.clone()
}

/// Small goal-directed search. ImpI bodies see only their own hypothesis so the
/// result respects the discharge restrictions of every logic.
pub(crate) fn prove(goal: &Formula, ctx: &Ctx, depth: usize, next: &mut u32) -> Option<Derivation> {
    if let Some((f, l)) = ctx.iter().find(|(f, _)| f == goal) {
        return Some(leaf(f, *l));
    }
    if let Some((f, l)) = ctx.iter().find(|(f, _)| *f == Formula::Bottom) {
        return Some(Derivation::bot_e(leaf(f, *l), goal.clone()));
    }
    for (f, l) in ctx {
        if let Some(d) = project(leaf(f, *l), goal) {
            return Some(d);
        }
    }
    if depth == 0 {
        return None;
    }
    match goal {
        Formula::And(a, b) => {
            let da = prove(a, ctx, depth - 1, next)?;
            let db = prove(b, ctx, depth - 1, next)?;
            return Some(Derivation::and_i(da, db));
        }
        Formula::Or(a, b) => {
            if let Some(d) = prove(a, ctx, depth - 1, next) {
                return Some(Derivation::or_i1(d, (**b).clone()));
            }
            if let Some(d) = prove(b, ctx, depth - 1, next) {
                return Some(Derivation::or_i2((**a).clone(), d));
            }
        }
        Formula::Imp(a, b) => {
            *next += 1;
            let l = *next;
            if let Some(body) = prove(b, &vec![((**a).clone(), Some(l))], depth - 1, next) {
                return Some(Derivation::imp_i((**a).clone(), Some(l), body));
            }
        }
        _ => {}
    }
    for (i, (f, l)) in ctx.iter().enumerate() {
        let Some((a, b)) = f.as_or() else { continue };
        let rest: Ctx = ctx.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
        *next += 2;
        let (l1, l2) = (*next - 1, *next);
        let mut c1 = rest.clone();
        c1.push((a.clone(), Some(l1)));
        let mut c2 = rest;
        c2.push((b.clone(), Some(l2)));
        let (Some(m1), Some(m2)) = (prove(goal, &c1, depth - 1, next), prove(goal, &c2, depth - 1, next)) else {
            continue;
        };
        return Some(Derivation::or_e(leaf(f, *l), Some(l1), m1, Some(l2), m2));
    }
    None
}

fn project(d: Derivation, goal: &Formula) -> Option<Derivation> {
    if &d.conclusion == goal {
        return Some(d);
    }
    d.conclusion.as_and()?;
    project(Derivation::and_e1(d.clone()), goal).or_else(|| project(Derivation::and_e2(d), goal))
}

fn gen_for<'a, R: Rng + ?Sized>(rng: &'a mut R, logic: &'a LogicSpec, inject: f64) -> NdGen<'a, R> {
    let intros = [
        NdRule::ImpI1,
        NdRule::ImpI2,
        NdRule::ImpIN,
        NdRule::ImpIN2,
        NdRule::ImpIHatC,
        NdRule::ImpIHatD,
        NdRule::ImpIConj,
        NdRule::ImpIDisj,
        NdRule::ImpITrans,
    ]
    .into_iter()
    .filter(|r| r.available_in(logic))
    .collect();
    NdGen {
        rng,
        classes: detour_classes(logic),
        intros,
        inject,
        next: 0,
    }
}

/// A random derivation from up to `assumptions` open assumptions. Each
/// construction step is a detour of a random available class with probability
/// `inject`.
pub fn nd_derivation<R: Rng + ?Sized>(
    rng: &mut R,
    logic: &LogicSpec,
    assumptions: usize,
    depth: usize,
    inject: f64,
) -> Derivation {
    let mut g = gen_for(rng, logic, inject);
    let ctx: Ctx = (0..assumptions).map(|_| (g.formula(), None)).collect();
    g.gen(&ctx, depth).canonical_labels()
}

/// A random derivation containing at least one redex of `class`, possibly
/// under further structure and with further random detours.
pub fn nd_with_detour<R: Rng + ?Sized>(
    rng: &mut R,
    logic: &LogicSpec,
    class: Conversion,
    depth: usize,
    inject: f64,
) -> Derivation {
    let mut g = gen_for(rng, logic, inject);
    let mut ctx: Ctx = (0..g.rng.gen_range(0..3)).map(|_| (g.formula(), None)).collect();
    if class == Conversion::Permutation && g.rng.gen_bool(0.5) {
        let (a, b) = (g.formula(), g.formula());
        ctx.push((Formula::or(a, b), None));
    }
    let redex = g.detour(class, &ctx, depth);
    let out = match g.rng.gen_range(0..3) {
        0 => redex,
        1 => {
            let other = g.gen(&ctx, depth);
            Derivation::and_i(redex, other)
        }
        _ => {
            let x = g.formula();
            Derivation::or_i2(x, redex)
        }
    };
    out.canonical_labels()
}
