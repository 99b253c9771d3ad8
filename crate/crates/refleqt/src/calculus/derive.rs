//! Derived rules over the Hilbert calculus. Every function returns a proof
//! object built from the primitive steps, so the checker stays the only
//! trusted component.

use std::collections::HashSet;

use super::proof::{Axiom, Proof};
use super::taut::is_tautology;
use crate::syntax::{all_vars, fresh_var, substitute, Formula, Term, Var};

/// Proof of `goal` from proofs of `premises` when
/// `p1 → … → pn → goal` is a tautology.
pub fn chain(premises: Vec<Proof>, goal: Formula) -> Option<Proof> {
    let hyps: Vec<Formula> = premises.iter().map(|p| p.conclusion.clone()).collect();
    let t = Formula::imps(hyps, goal);
    if !is_tautology(&t) {
        return None;
    }
    let mut acc = Proof::logical(Axiom::Taut, t);
    for p in premises {
        acc = Proof::mp(p, acc);
    }
    Some(acc)
}

/// Like [`chain`] but panics when the implication is not a tautology.
pub fn chain_ok(premises: Vec<Proof>, goal: Formula) -> Proof {
    let shown = goal.to_string();
    chain(premises, goal).unwrap_or_else(|| panic!("not a tautological consequence: {shown}"))
}

/// Generalizes over `vars`, outermost first.
pub fn gen_all(vars: &[Var], p: Proof) -> Proof {
    vars.iter().rev().fold(p, |acc, v| Proof::gen(v.clone(), acc))
}

/// Universal closure of the conclusion, matching [`Formula::closure`].
pub fn close(p: Proof) -> Proof {
    let vars: Vec<Var> = p.conclusion.free_vars().into_iter().collect();
    gen_all(&vars, p)
}

/// From `⊢ ∀x A` conclude `⊢ A[x:=t]`.
pub fn instantiate(p: Proof, t: &Term) -> Proof {
    let Formula::All(x, a) = &p.conclusion else {
        panic!("instantiate on non-universal {}", p.conclusion)
    };
    let inst = substitute(a, x, t);
    let ax = Proof::logical(Axiom::ForallElim(t.clone()), Formula::imp(p.conclusion.clone(), inst));
    Proof::mp(p, ax)
}

/// Instantiates leading universals in order.
pub fn instantiate_many(p: Proof, ts: &[Term]) -> Proof {
    ts.iter().fold(p, instantiate)
}

/// From `⊢ A → B` conclude `⊢ ∀x A → ∀x B`.
pub fn forall_mono(x: &Var, p: Proof) -> Proof {
    let Formula::Imp(a, b) = &p.conclusion else { panic!("forall_mono on non-implication") };
    let (a, b) = ((**a).clone(), (**b).clone());
    let g = Proof::gen(x.clone(), p);
    let dist = Proof::logical(
        Axiom::ForallDist,
        Formula::imp(
            g.conclusion.clone(),
            Formula::imp(Formula::all(x.clone(), a), Formula::all(x.clone(), b)),
        ),
    );
    Proof::mp(g, dist)
}

/// From `⊢ H → A` with `x ∉ FV(H)` conclude `⊢ H → ∀x A`.
pub fn gen_under_hyp(x: &Var, p: Proof) -> Proof {
    let Formula::Imp(h, a) = &p.conclusion else { panic!("gen_under_hyp on non-implication") };
    let (h, a) = ((**h).clone(), (**a).clone());
    assert!(!h.free_vars().contains(x), "{x} free in hypothesis");
    let all_h = Formula::all(x.clone(), h.clone());
    let mono = forall_mono(x, p);
    let vac = Proof::logical(Axiom::VacuousGen, Formula::imp(h.clone(), all_h));
    chain_ok(vec![vac, mono], Formula::imp(h, Formula::all(x.clone(), a)))
}

/// From `⊢ h1 → … → hn → A` with `x` free in no `hi` conclude
/// `⊢ h1 → … → hn → ∀x A`.
pub fn gen_under_hyps(x: &Var, hyps: &[Formula], p: Proof) -> Proof {
    let Some(h) = Formula::conj(hyps.to_vec()) else { return Proof::gen(x.clone(), p) };
    let body = strip_imps(&p.conclusion, hyps.len());
    let curried = chain_ok(vec![p], Formula::imp(h.clone(), body.clone()));
    let g = gen_under_hyp(x, curried);
    chain_ok(vec![g], Formula::imps(hyps.to_vec(), Formula::all(x.clone(), body)))
}

fn strip_imps(f: &Formula, n: usize) -> Formula {
    let mut cur = f;
    for _ in 0..n {
        match cur {
            Formula::Imp(_, b) => cur = b,
            _ => panic!("expected {n} hypotheses in {f}"),
        }
    }
    cur.clone()
}

/// From `⊢ A → C` with `x ∉ FV(C)` conclude `⊢ ∃x A → C`.
pub fn ex_elim(x: &Var, p: Proof) -> Proof {
    let Formula::Imp(a, c) = &p.conclusion else { panic!("ex_elim on non-implication") };
    let (a, c) = ((**a).clone(), (**c).clone());
    assert!(!c.free_vars().contains(x), "{x} free in conclusion");
    let (na, nc) = (Formula::not(a.clone()), Formula::not(c.clone()));
    let contra = chain_ok(vec![p], Formula::imp(nc.clone(), na.clone()));
    let mono = forall_mono(x, contra);
    let vac = Proof::logical(Axiom::VacuousGen, Formula::imp(nc.clone(), Formula::all(x.clone(), nc)));
    let ex = Formula::ex(x.clone(), a);
    let def = Proof::logical(
        Axiom::ExDef,
        Formula::imp(ex.clone(), Formula::not(Formula::all(x.clone(), na))),
    );
    chain_ok(vec![vac, mono, def], Formula::imp(ex, c))
}

/// From `⊢ A[x:=t]` conclude `⊢ ∃x A`.
pub fn ex_intro(x: &Var, a: &Formula, t: &Term, p: Proof) -> Proof {
    let ex = Formula::ex(x.clone(), a.clone());
    let ax = Proof::logical(Axiom::ExIntro(t.clone()), Formula::imp(p.conclusion.clone(), ex));
    Proof::mp(p, ax)
}

/// `⊢ t = t`.
pub fn refl(t: &Term) -> Proof {
    Proof::logical(Axiom::EqRefl, Formula::eq(t.clone(), t.clone()))
}

fn fresh_for(ts: &[&Term]) -> Var {
    let mut avoid = HashSet::new();
    for t in ts {
        crate::syntax::term_vars(t, &mut avoid);
    }
    fresh_var(&Var::new("z"), &avoid)
}

/// `⊢ l = r → (body[v:=l] → body[v:=r])`.
pub fn leibniz(v: &Var, body: &Formula, l: &Term, r: &Term) -> Proof {
    let f = Formula::imp(
        Formula::eq(l.clone(), r.clone()),
        Formula::imp(substitute(body, v, l), substitute(body, v, r)),
    );
    Proof::logical(Axiom::Leibniz { var: v.clone(), body: body.clone(), left: l.clone(), right: r.clone() }, f)
}

/// `⊢ a = b → b = a`.
pub fn symm(a: &Term, b: &Term) -> Proof {
    let z = fresh_for(&[a, b]);
    let l = leibniz(&z, &Formula::eq(Term::Var(z.clone()), a.clone()), a, b);
    let goal = Formula::imp(Formula::eq(a.clone(), b.clone()), Formula::eq(b.clone(), a.clone()));
    chain_ok(vec![refl(a), l], goal)
}

/// `⊢ a = b → b = c → a = c`.
pub fn trans(a: &Term, b: &Term, c: &Term) -> Proof {
    let z = fresh_for(&[a, b, c]);
    let l = leibniz(&z, &Formula::eq(a.clone(), Term::Var(z.clone())), b, c);
    let goal = Formula::imps(
        vec![Formula::eq(a.clone(), b.clone()), Formula::eq(b.clone(), c.clone())],
        Formula::eq(a.clone(), c.clone()),
    );
    chain_ok(vec![l], goal)
}

/// Proof of a formula that follows from `lemmas` by propositional logic,
/// the equality axioms over the terms it mentions, and existential or
/// universal introduction. Goals of the shape `∀x (H → B)` are proved by
/// generalizing under their hypotheses; an existential goal is tried with
/// each candidate witness.
pub struct Prover {
    /// Proved sentences, instantiated with candidate terms on demand.
    pub lemmas: Vec<Proof>,
    /// Extra witnesses tried for existential goals.
    pub witnesses: Vec<Term>,
}

impl Prover {
    pub fn new(lemmas: Vec<Proof>) -> Prover {
        Prover { lemmas, witnesses: vec![Term::zero()] }
    }

    /// Proof of `goal`, a formula whose free variables are read
    /// universally.
    pub fn prove(&self, goal: &Formula) -> Option<Proof> {
        self.under(&[], goal)
    }

    /// Proof of `h1 → … → hn → goal`.
    fn under(&self, hyps: &[Formula], goal: &Formula) -> Option<Proof> {
        match goal {
            Formula::All(x, a) => {
                let mut avoid = HashSet::new();
                for h in hyps {
                    all_vars(h, &mut avoid);
                }
                all_vars(goal, &mut avoid);
                if hyps.iter().any(|h| h.free_vars().contains(x)) {
                    let y = fresh_var(x, &avoid);
                    let body = substitute(a, x, &Term::Var(y.clone()));
                    let p = self.under(hyps, &Formula::all(y.clone(), body))?;
                    return chain(vec![p], Formula::imps(hyps.to_vec(), goal.clone()));
                }
                let p = self.under(hyps, a)?;
                Some(gen_under_hyps(x, hyps, p))
            }
            Formula::Imp(h, b) => {
                let mut hs = hyps.to_vec();
                hs.push((**h).clone());
                self.under(&hs, b)
            }
            Formula::Ex(x, a) => {
                for t in self.candidates(hyps, goal) {
                    let inst = substitute(a, x, &t);
                    if let Some(p) = self.under(hyps, &inst) {
                        let ax = Proof::logical(Axiom::ExIntro(t.clone()), Formula::imp(inst, goal.clone()));
                        if let Some(q) = lift_mp(hyps, p, ax) {
                            return Some(q);
                        }
                    }
                }
                None
            }
            Formula::And(a, b) if has_quantifier(goal) => {
                let pa = self.under(hyps, a)?;
                let pb = self.under(hyps, b)?;
                chain(vec![pa, pb], Formula::imps(hyps.to_vec(), goal.clone()))
            }
            _ => self.equational(hyps, goal),
        }
    }

    fn candidates(&self, hyps: &[Formula], goal: &Formula) -> Vec<Term> {
        let mut vs = HashSet::new();
        for h in hyps {
            all_vars(h, &mut vs);
        }
        for v in goal.free_vars() {
            vs.insert(v);
        }
        let mut vs: Vec<Var> = vs.into_iter().collect();
        vs.sort();
        let mut out: Vec<Term> = vs.into_iter().map(Term::Var).collect();
        for w in &self.witnesses {
            if !out.contains(w) {
                out.push(w.clone());
            }
        }
        out
    }

    fn terms(&self, hyps: &[Formula], goal: &Formula) -> Vec<Term> {
        let mut out = Vec::new();
        let mut push = |t: &Term| {
            if !out.contains(t) {
                out.push(t.clone());
            }
        };
        for f in hyps.iter().chain(std::iter::once(goal)) {
            visit_atoms(f, &mut |a| match a {
                Formula::Eq(l, r) => {
                    push(l);
                    push(r);
                }
                Formula::Atom(_, args) => args.iter().for_each(&mut push),
                _ => {}
            });
        }
        out
    }

    fn equational(&self, hyps: &[Formula], goal: &Formula) -> Option<Proof> {
        let target = Formula::imps(hyps.to_vec(), goal.clone());
        if is_tautology(&target) {
            return Some(Proof::logical(Axiom::Taut, target));
        }
        let terms = self.terms(hyps, goal);
        let mut facts: Vec<Proof> = Vec::new();
        for l in &self.lemmas {
            facts.extend(instances(l, &terms));
        }
        if let Some(p) = chain(facts.clone(), target.clone()) {
            return Some(p);
        }
        for a in &terms {
            facts.push(refl(a));
            for b in &terms {
                if a != b {
                    facts.push(symm(a, b));
                }
            }
        }
        if let Some(p) = chain(facts.clone(), target.clone()) {
            return Some(p);
        }
        let mut atoms = Vec::new();
        for f in hyps.iter().chain(std::iter::once(goal)) {
            visit_atoms(f, &mut |a| {
                if matches!(a, Formula::Atom(..)) && !atoms.contains(a) {
                    atoms.push(a.clone());
                }
            });
        }
        for a in &atoms {
            for b in &atoms {
                facts.extend(congruence_path(a, b));
            }
        }
        for a in &terms {
            for b in &terms {
                facts.extend(function_congruence(a, b));
            }
        }
        if let Some(p) = chain(facts.clone(), target.clone()) {
            return Some(p);
        }
        for a in &terms {
            for b in &terms {
                for c in &terms {
                    if a != b && b != c && a != c {
                        facts.push(trans(a, b, c));
                    }
                }
            }
        }
        chain(facts, target)
    }
}

fn has_quantifier(f: &Formula) -> bool {
    match f {
        Formula::All(..) | Formula::Ex(..) | Formula::BAll(..) | Formula::BEx(..) => true,
        Formula::Not(a) => has_quantifier(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => has_quantifier(a) || has_quantifier(b),
        _ => false,
    }
}

fn visit_atoms(f: &Formula, out: &mut impl FnMut(&Formula)) {
    match f {
        Formula::Eq(..) | Formula::Atom(..) => out(f),
        Formula::Not(a) => visit_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            visit_atoms(a, out);
            visit_atoms(b, out);
        }
        _ => {}
    }
}

/// Lifts modus ponens under hypotheses: from `⊢ H → A` and `⊢ A → B`
/// conclude `⊢ H → B`.
fn lift_mp(hyps: &[Formula], p: Proof, ax: Proof) -> Option<Proof> {
    let Formula::Imp(_, b) = &ax.conclusion else { return None };
    let goal = Formula::imps(hyps.to_vec(), (**b).clone());
    chain(vec![p, ax], goal)
}

/// Instances of a universally quantified lemma at all tuples of `terms`.
fn instances(lemma: &Proof, terms: &[Term]) -> Vec<Proof> {
    let mut depth = 0;
    let mut cur = &lemma.conclusion;
    while let Formula::All(_, a) = cur {
        depth += 1;
        cur = a;
    }
    if depth == 0 {
        return vec![lemma.clone()];
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; depth];
    if terms.is_empty() {
        return out;
    }
    loop {
        let ts: Vec<Term> = idx.iter().map(|&i| terms[i].clone()).collect();
        out.push(instantiate_many(lemma.clone(), &ts));
        let mut k = 0;
        loop {
            if k == depth {
                return out;
            }
            idx[k] += 1;
            if idx[k] < terms.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Leibniz steps rewriting `a = R(s…)` into `b = R(t…)` one argument at
/// a time, left to right.
fn congruence_path(a: &Formula, b: &Formula) -> Vec<Proof> {
    let (Formula::Atom(r, ss), Formula::Atom(r2, ts)) = (a, b) else { return Vec::new() };
    if r != r2 || ss.len() != ts.len() || a == b {
        return Vec::new();
    }
    let mut refs: Vec<&Term> = ss.iter().collect();
    refs.extend(ts.iter());
    let z = fresh_for(&refs);
    let mut cur = ss.clone();
    let mut out = Vec::new();
    for i in 0..ss.len() {
        if cur[i] == ts[i] {
            continue;
        }
        let mut body_args = cur.clone();
        body_args[i] = Term::Var(z.clone());
        out.push(leibniz(&z, &Formula::atom(r, body_args), &ss[i], &ts[i]));
        cur[i] = ts[i].clone();
    }
    out
}

/// Steps proving `f(s…) = f(t…)` from the argument equations.
fn function_congruence(a: &Term, b: &Term) -> Vec<Proof> {
    let (Term::App(f, ss), Term::App(g, ts)) = (a, b) else { return Vec::new() };
    if f != g || ss.len() != ts.len() || a == b {
        return Vec::new();
    }
    let z = fresh_for(&[a, b]);
    let mut cur = ss.clone();
    let mut out = vec![refl(a)];
    for i in 0..ss.len() {
        if cur[i] == ts[i] {
            continue;
        }
        let mut hole = cur.clone();
        hole[i] = Term::Var(z.clone());
        out.push(leibniz(&z, &Formula::eq(a.clone(), Term::App(f.clone(), hole)), &ss[i], &ts[i]));
        cur[i] = ts[i].clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, Theory};
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::arithmetic("a").with_relation("P", 1).with_relation("R", 2)
    }

    fn p(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    fn checks(pr: &Proof) {
        let th = Theory::finite("a", sig(), vec![]);
        let v = check_proof(pr, &th);
        assert!(v.accepted, "{v}");
    }

    #[test]
    fn identity_derivation() {
        let a = p("(P x)");
        let aa = Formula::imp(a.clone(), a.clone());
        let s = Proof::logical(
            Axiom::S,
            Formula::imp(
                Formula::imp(a.clone(), Formula::imp(aa.clone(), a.clone())),
                Formula::imp(Formula::imp(a.clone(), aa.clone()), aa.clone()),
            ),
        );
        let k1 = Proof::logical(Axiom::K, Formula::imp(a.clone(), Formula::imp(aa.clone(), a.clone())));
        let k2 = Proof::logical(Axiom::K, Formula::imp(a.clone(), aa.clone()));
        let pr = Proof::mp(k2, Proof::mp(k1, s));
        assert_eq!(pr.conclusion, aa);
        checks(&pr);
    }

    #[test]
    fn equality_lemmas_check() {
        let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
        checks(&symm(&x, &y));
        checks(&trans(&x, &y, &z));
    }

    #[test]
    fn quantifier_rules_check() {
        let base = Proof::logical(Axiom::Taut, p("(-> (P x) (P x))"));
        let e = ex_elim(&Var::new("x"), Proof::logical(Axiom::Taut, p("(-> (and (P x) (P y)) (P y))")));
        checks(&e);
        checks(&gen_under_hyp(&Var::new("y"), Proof::logical(Axiom::Taut, p("(-> (P x) (or (P x) (P y)))"))));
        checks(&close(base));
    }

    #[test]
    fn prover_handles_isomorphism_shapes() {
        let pr = Prover::new(vec![]);
        for s in [
            "(all x (all y (-> (and (P x) (= x y)) (and (P x) (P y)))))",
            "(all x (-> (P x) (ex y (and (P y) (and (P x) (= x y))))))",
            "(all x (all y (all v (-> (and (= x y) (= x v)) (= y v)))))",
            "(all x (all y (all u (all v (-> (and (= x u) (= y v)) (iff (R x y) (R u v)))))))",
            "(ex x (= x x))",
        ] {
            let proof = pr.prove(&p(s)).unwrap_or_else(|| panic!("no proof of {s}"));
            assert_eq!(proof.conclusion, p(s));
            checks(&proof);
        }
        assert!(pr.prove(&p("(all x (all y (= x y)))")).is_none());
    }
}
