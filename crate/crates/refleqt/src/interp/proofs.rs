use std::collections::BTreeSet;

use super::translation::Translation;
use crate::calculus::derive::{chain, ex_elim, forall_mono, gen_under_hyps, instantiate_many};
use crate::calculus::{Axiom, Proof, Rule, Theory};
use crate::error::{Error, Result};
use crate::syntax::{alpha_eq, alpha_key, substitute, Formula, Term, Var};

/// Result of translating a proof: a target skeleton whose obligation leaves
/// are theory leaves carrying the listed sentences.
#[derive(Clone, Debug)]
pub struct TranslatedProof {
    pub skeleton: Proof,
    pub obligations: Vec<Formula>,
}

struct Translator<'a> {
    t: &'a Translation,
    obligations: Vec<Formula>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

impl Translator<'_> {
    fn dom(&self, v: &Var) -> Option<Formula> {
        self.t.domain_at(&Term::Var(v.clone()))
    }

    fn hyps(&self, vs: &BTreeSet<Var>) -> Vec<Formula> {
        vs.iter().filter_map(|v| self.dom(v)).collect()
    }

    /// `δ(v1) ∧ … ∧ δ(vk) → body`, or `body` when nothing relativizes.
    fn stmt(&self, vs: &BTreeSet<Var>, body: Formula) -> Formula {
        match Formula::conj(self.hyps(vs)) {
            Some(h) => Formula::imp(h, body),
            None => body,
        }
    }

    fn taut_to(&self, premises: Vec<Proof>, goal: Formula) -> Result<Proof> {
        let shown = goal.to_string();
        chain(premises, goal).ok_or_else(|| malformed(format!("translation step failed to assemble: {shown}")))
    }

    fn obligation(&mut self, s: Formula) -> Proof {
        if !self.obligations.iter().any(|o| alpha_eq(o, &s)) {
            self.obligations.push(s.clone());
        }
        Proof::axiom(s)
    }

    /// The universal closure of `goal` as an obligation, instantiated back
    /// at the free variables.
    fn closed_obligation(&mut self, fv: &BTreeSet<Var>, goal: Formula) -> Proof {
        let vars: Vec<Term> = fv.iter().cloned().map(Term::Var).collect();
        let leaf = self.obligation(Formula::all_many(&fv.iter().cloned().collect::<Vec<_>>(), goal));
        instantiate_many(leaf, &vars)
    }

    /// Discharges `x` from the context of `p: H(U) → C` using `∃x δ(x)`.
    fn drop_var(&mut self, x: &Var, u: &BTreeSet<Var>, p: Proof, c: &Formula) -> Result<Proof> {
        let Some(dx) = self.dom(x) else { return Ok(p) };
        let mut rest = u.clone();
        rest.remove(x);
        let inner = self.stmt(&rest, c.clone());
        let curried = self.taut_to(vec![p], Formula::imp(dx.clone(), inner.clone()))?;
        let elim = ex_elim(x, curried);
        let nonempty = self.obligation(Formula::ex(x.clone(), dx));
        Ok(Proof::mp(nonempty, elim))
    }

    /// Proof of `H(fv(A)) → A^t` for the conclusion A of `p`.
    fn proof(&mut self, p: &Proof) -> Result<Proof> {
        let a = &p.conclusion;
        let at = self.t.translate(a)?;
        let fv = a.free_vars();
        let goal = self.stmt(&fv, at.clone());
        match &p.rule {
            Rule::ModusPonens => {
                let minor = self.proof(&p.premises[0])?;
                let major = self.proof(&p.premises[1])?;
                let mut u = fv.clone();
                u.extend(p.premises[0].conclusion.free_vars());
                let wide = self.taut_to(vec![minor, major], self.stmt(&u, at.clone()))?;
                self.narrow(wide, u, &fv, &at)
            }
            Rule::Generalization(v) => {
                let inner = self.proof(&p.premises[0])?;
                let body = self.t.translate(&p.premises[0].conclusion)?;
                let rel = match self.dom(v) {
                    Some(d) => Formula::imp(d, body),
                    None => body,
                };
                let hs: Vec<Formula> = Formula::conj(self.hyps(&fv)).into_iter().collect();
                let curried = self.taut_to(vec![inner], Formula::imps(hs.clone(), rel))?;
                let g = gen_under_hyps(v, &hs, curried);
                self.taut_to(vec![g], goal)
            }
            Rule::Theory => Ok(self.closed_obligation(&fv, goal)),
            Rule::Computation => Err(Error::OutOfFragment("computation leaves do not translate".into())),
            Rule::Logical(ax) => self.logical(ax, a, &at, &fv, goal),
        }
    }

    /// Narrows a proof of `H(u) → C` to `H(fv) → C`.
    fn narrow(&mut self, mut p: Proof, mut u: BTreeSet<Var>, fv: &BTreeSet<Var>, c: &Formula) -> Result<Proof> {
        let extra: Vec<Var> = u.difference(fv).cloned().collect();
        for x in extra {
            p = self.drop_var(&x, &u, p, c)?;
            u.remove(&x);
        }
        Ok(p)
    }

    fn logical(&mut self, ax: &Axiom, a: &Formula, at: &Formula, fv: &BTreeSet<Var>, goal: Formula) -> Result<Proof> {
        let relativized = self.t.domain.is_some();
        match ax {
            Axiom::Taut | Axiom::K | Axiom::S | Axiom::N => self.taut_to(vec![], goal),
            Axiom::ForallElim(s) | Axiom::ExIntro(s) => {
                let Term::Var(y) = s else {
                    return Err(Error::OutOfFragment(format!("instantiation by non-variable {s}")));
                };
                let Formula::Imp(l, r) = at else { unreachable!("checked scheme shape") };
                let (quant, is_all) = if matches!(ax, Axiom::ForallElim(_)) { (l, true) } else { (r, false) };
                let inst = match &**quant {
                    Formula::All(x, b) | Formula::Ex(x, b) => substitute(b, x, s),
                    other => return Err(malformed(format!("unexpected translated quantifier {other}"))),
                };
                let leaf_f = if is_all {
                    Formula::imp((**quant).clone(), inst)
                } else {
                    Formula::imp(inst, (**quant).clone())
                };
                let leaf = Proof::logical(ax.clone(), leaf_f);
                let mut u = fv.clone();
                u.insert(y.clone());
                let wide = self.taut_to(vec![leaf], self.stmt(&u, at.clone()))?;
                self.narrow(wide, u, fv, at)
            }
            Axiom::ForallDist if relativized => {
                let Formula::Imp(l, _) = a else { unreachable!() };
                let Formula::All(x, _) = &**l else { unreachable!() };
                let Formula::Imp(tl, _) = at else { unreachable!() };
                let Formula::All(_, dab) = &**tl else { unreachable!() };
                let Formula::Imp(d, ab) = &**dab else { unreachable!() };
                let Formula::Imp(ta, tb) = &**ab else { unreachable!() };
                let (d, ta, tb) = ((**d).clone(), (**ta).clone(), (**tb).clone());
                let da = Formula::imp(d.clone(), ta);
                let db = Formula::imp(d.clone(), tb);
                let step = Proof::logical(
                    Axiom::Taut,
                    Formula::imp((**dab).clone(), Formula::imp(da.clone(), db.clone())),
                );
                let m1 = forall_mono(x, step);
                let m2 = Proof::logical(
                    Axiom::ForallDist,
                    Formula::imp(
                        Formula::all(x.clone(), Formula::imp(da.clone(), db.clone())),
                        Formula::imp(Formula::all(x.clone(), da), Formula::all(x.clone(), db)),
                    ),
                );
                self.taut_to(vec![m1, m2], goal)
            }
            Axiom::VacuousGen if relativized => {
                let Formula::Imp(_, r) = a else { unreachable!() };
                let Formula::All(x, _) = &**r else { unreachable!() };
                let Formula::Imp(bt, _) = at else { unreachable!() };
                let d = self.dom(x).expect("relativized");
                let weak = Proof::logical(
                    Axiom::Taut,
                    Formula::imp((**bt).clone(), Formula::imp(d, (**bt).clone())),
                );
                let mono = forall_mono(x, weak);
                let vac = Proof::logical(
                    Axiom::VacuousGen,
                    Formula::imp((**bt).clone(), Formula::all(x.clone(), (**bt).clone())),
                );
                self.taut_to(vec![vac, mono], goal)
            }
            Axiom::ExDef if relativized => {
                let (ex_side, _) = match a {
                    Formula::Imp(l, r) if matches!(**l, Formula::Ex(..)) => (l, r),
                    Formula::Imp(l, r) => (r, l),
                    _ => unreachable!(),
                };
                let Formula::Ex(x, _) = &**ex_side else { unreachable!() };
                let tex = self.t.translate(ex_side)?;
                let Formula::Ex(_, c) = &tex else { unreachable!() };
                let Formula::And(d, bt) = &**c else { unreachable!() };
                let c = (**c).clone();
                let rel_neg = Formula::imp((**d).clone(), Formula::not((**bt).clone()));
                let nc = Formula::not(c.clone());
                let fwd = Proof::logical(
                    Axiom::ExDef,
                    Formula::imp(tex.clone(), Formula::not(Formula::all(x.clone(), nc.clone()))),
                );
                let bwd = Proof::logical(
                    Axiom::ExDef,
                    Formula::imp(Formula::not(Formula::all(x.clone(), nc.clone())), tex.clone()),
                );
                let m1 = forall_mono(x, Proof::logical(Axiom::Taut, Formula::imp(rel_neg.clone(), nc.clone())));
                let m2 = forall_mono(x, Proof::logical(Axiom::Taut, Formula::imp(nc, rel_neg)));
                self.taut_to(vec![fwd, bwd, m1, m2], goal)
            }
            Axiom::EqRefl | Axiom::Leibniz { .. } if self.t.equality.is_some() => Ok(self.closed_obligation(fv, goal)),
            Axiom::Leibniz { var, body, left, right } => {
                let tb = self.t.translate(body)?;
                let leaf = Proof::logical(
                    Axiom::Leibniz { var: var.clone(), body: tb.clone(), left: left.clone(), right: right.clone() },
                    Formula::imp(
                        Formula::eq(left.clone(), right.clone()),
                        Formula::imp(substitute(&tb, var, left), substitute(&tb, var, right)),
                    ),
                );
                self.taut_to(vec![leaf], goal)
            }
            Axiom::BallDef | Axiom::BexDef => {
                Err(Error::OutOfFragment("bounded quantifiers do not translate between relational signatures".into()))
            }
            _ => {
                let leaf = Proof::logical(ax.clone(), at.clone());
                self.taut_to(vec![leaf], goal)
            }
        }
    }
}

/// Translates a proof step by step. The skeleton proves `(conclusion)^t`
/// relativized to its free variables once each obligation leaf is replaced
/// by a target proof.
pub fn translate_proof(t: &Translation, p: &Proof) -> Result<TranslatedProof> {
    let mut tr = Translator { t, obligations: Vec::new() };
    let skeleton = tr.proof(p)?;
    Ok(TranslatedProof { skeleton, obligations: tr.obligations })
}

/// Replaces obligation leaves by discharge proofs (matched up to
/// α-equivalence). Returns the assembled proof and the obligations left
/// without a discharge.
pub fn assemble(tp: &TranslatedProof, discharges: &[Proof], host: &Theory) -> (Proof, Vec<Formula>) {
    let mut missing = Vec::new();
    let mut out = tp.skeleton.clone();
    let keys: Vec<String> = tp.obligations.iter().map(alpha_key).collect();
    fill(&mut out, &keys, discharges, host, &mut missing);
    missing.dedup_by(|a, b| alpha_eq(a, b));
    (out, missing)
}

fn fill(p: &mut Proof, keys: &[String], discharges: &[Proof], host: &Theory, missing: &mut Vec<Formula>) {
    if p.rule == Rule::Theory && keys.contains(&alpha_key(&p.conclusion)) {
        if let Some(d) = discharges.iter().find(|d| alpha_eq(&d.conclusion, &p.conclusion)) {
            *p = d.clone();
        } else if !host.recognize_axiom(&p.conclusion) {
            missing.push(p.conclusion.clone());
        }
        return;
    }
    for q in &mut p.premises {
        fill(q, keys, discharges, host, missing);
    }
}
