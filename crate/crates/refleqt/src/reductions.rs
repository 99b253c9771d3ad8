//! Proof transformers: small-reflection reduction, truth elimination and
//! empirical size-bound certification.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::calculus::derive::{chain, chain_ok, ex_elim, instantiate, instantiate_many, leibniz, refl};
use crate::calculus::{
    check_proof, decode_proof, eval_closed_decidable, eval_term, proof_size, Axiom, Family, Proof, Rule, Theory,
};
use crate::error::{Error, Result};
use crate::interp::{RelDef, Translation};
use crate::schemas::{
    coherence_axiom, instantiate as inst_phi, sc_instance, small_reflection_instance, tarski_truth_definition,
    utb_instance,
};
use crate::syntax::{
    alpha_eq, match_instance, numeral, replace_atoms, substitute, Formula, Term, Var, PROOF_PREFIX, SUBST_NUMERAL,
    TRUTH,
};

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

/// A small-reflection leaf `Proof_τ(a, c) → ψ` split into its parts.
struct SrLeaf {
    proof_term: Term,
    consequent: Formula,
    /// The term b with ψ = φ(b), when the code is written `sbn(⌜φ⌝, b)`.
    arg: Option<Term>,
}

fn split_sr_leaf(s: &Formula, theory: &str, phi: &Formula) -> Option<SrLeaf> {
    let Formula::Imp(l, psi) = s else { return None };
    let Formula::Atom(pred, args) = &**l else { return None };
    if pred.strip_prefix(PROOF_PREFIX) != Some(theory) || args.len() != 2 {
        return None;
    }
    let arg = match &args[1] {
        Term::App(f, xs) if f == SUBST_NUMERAL && xs.len() == 2 => match &xs[0] {
            Term::Quote(q) if **q == *phi => Some(xs[1].clone()),
            _ => return None,
        },
        Term::Quote(_) => None,
        _ => return None,
    };
    Some(SrLeaf { proof_term: args[0].clone(), consequent: (**psi).clone(), arg })
}

/// τ-proof of a closed small-reflection instance `Proof_τ(a, c) → ψ`. If a
/// evaluates to the code of a checking τ-proof of the sentence coded by c,
/// that proof is spliced in; otherwise the antecedent is refuted by a
/// computation axiom.
fn prove_sr_leaf(tau: &Theory, phi: &Formula, s: &Formula) -> Result<Proof> {
    let leaf = split_sr_leaf(s, &tau.name, phi).ok_or_else(|| malformed(format!("not a small-reflection instance: {s}")))?;
    let Formula::Imp(ante, _) = s else { unreachable!() };
    if eval_closed_decidable(ante, tau)? {
        let code = eval_term(&leaf.proof_term)?;
        let inner = decode_proof(&code).ok_or_else(|| malformed("proof code does not decode"))?;
        let body = if alpha_eq(&inner.conclusion, &leaf.consequent) {
            inner
        } else {
            let b = leaf.arg.clone().ok_or_else(|| malformed("quoted small-reflection code mismatch"))?;
            let n = numeral(&eval_term(&b)?);
            let v = phi.free_vars().into_iter().next().ok_or_else(|| malformed("φ has no free variable"))?;
            let eq = Proof::computation(Formula::eq(n.clone(), b.clone()));
            let step = leibniz(&v, phi, &n, &b);
            Proof::mp(inner, Proof::mp(eq, step))
        };
        Ok(chain_ok(vec![body], s.clone()))
    } else {
        let refute = Proof::computation(Formula::not((**ante).clone()));
        Ok(chain_ok(vec![refute], s.clone()))
    }
}

/// τ-proof of `Proof_τ(n̄₁, ⌜φ(ṅ₂)⌝) → φ(n̄₂)` with the code written as
/// `sbn(⌜φ⌝, n̄₂)`.
pub fn prove_small_reflection_instance(tau: &Theory, phi: &Formula, n1: &BigUint, n2: &BigUint) -> Result<Proof> {
    let s = small_reflection_instance(&tau.name, phi, numeral(n1), numeral(n2));
    prove_sr_leaf(tau, phi, &s)
}

fn small_reflection_family(tp: &Theory) -> Option<(&Arc<Theory>, &Formula, &Option<Translation>)> {
    tp.families.iter().find_map(|f| match f {
        Family::SmallReflection { theory, phi, nat, .. } => Some((theory, phi, nat)),
        _ => None,
    })
}

fn strip_domain_guard<'a>(s: &'a Formula, nat: &Option<Translation>) -> &'a Formula {
    let Some(domain) = nat.as_ref().and_then(|n| n.domain.as_ref()) else { return s };
    if let Formula::Imp(g, core) = s {
        if let Some(Some(c)) = match_instance(&domain.body, &domain.params[0], g) {
            if c.is_closed() {
                return core;
            }
        }
    }
    s
}

/// Rewrites a proof over τ′ = τ + small reflection for φ into a τ-proof of
/// the same sentence.
pub fn reduce_small_reflection_proof(p: &Proof, tau_prime: &Theory) -> Result<Proof> {
    let (tau, phi, nat) = small_reflection_family(tau_prime)
        .ok_or_else(|| malformed(format!("{} has no small-reflection family", tau_prime.name)))?;
    reduce_with(p, tau, phi, nat)
}

fn reduce_with(p: &Proof, tau: &Theory, phi: &Formula, nat: &Option<Translation>) -> Result<Proof> {
    if p.rule == Rule::Theory {
        let s = &p.conclusion;
        if tau.recognize_axiom(s) {
            return Ok(p.clone());
        }
        let core = strip_domain_guard(s, nat);
        let proof = prove_sr_leaf(tau, phi, core)?;
        return Ok(if std::ptr::eq(core, s) { proof } else { chain_ok(vec![proof], s.clone()) });
    }
    let premises = p.premises.iter().map(|q| reduce_with(q, tau, phi, nat)).collect::<Result<Vec<_>>>()?;
    Ok(Proof { conclusion: p.conclusion.clone(), rule: p.rule.clone(), premises })
}

fn truth_arg(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Atom(p, args) if p == TRUTH && args.len() == 1 => match &args[0] {
            Term::App(s, xs) if s == SUBST_NUMERAL && !xs.is_empty() => match &xs[0] {
                Term::Quote(q) => Some(q),
                _ => None,
            },
            _ => None,
        },
        Formula::Atom(..) | Formula::Eq(..) => None,
        Formula::Not(a) | Formula::All(_, a) | Formula::Ex(_, a) | Formula::BAll(_, _, a) | Formula::BEx(_, _, a) => {
            truth_arg(a)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => truth_arg(a).or_else(|| truth_arg(b)),
    }
}

#[derive(Clone, Debug)]
enum TruthLeaf {
    Utb(Formula),
    Sc(Formula),
}

fn classify_truth_leaf(s: &Formula, tau: &Theory, nat: Option<&Translation>) -> Option<TruthLeaf> {
    let psi = truth_arg(s)?;
    if utb_instance(psi, nat).is_ok_and(|i| alpha_eq(&i, s)) {
        return Some(TruthLeaf::Utb(psi.clone()));
    }
    if sc_instance(&tau.name, psi, nat).is_ok_and(|i| alpha_eq(&i, s)) {
        return Some(TruthLeaf::Sc(psi.clone()));
    }
    None
}

fn truth_leaves(p: &Proof, tau: &Theory, nat: Option<&Translation>, out: &mut Vec<TruthLeaf>) {
    if p.rule == Rule::Theory {
        if let Some(l) = classify_truth_leaf(&p.conclusion, tau, nat) {
            out.push(l);
        }
    }
    for q in &p.premises {
        truth_leaves(q, tau, nat, out);
    }
}

struct Eliminator<'a> {
    tau: &'a Theory,
    nat: Option<&'a Translation>,
    psis: Vec<Formula>,
    def: RelDef,
}

impl Eliminator<'_> {
    fn replace(&self, f: &Formula) -> Formula {
        replace_atoms(f, TRUTH, &self.def.params, &self.def.body)
    }

    /// The disjuncts of 𝔗(t).
    fn disjuncts(&self, t: &Term) -> Vec<Formula> {
        let mut out = Vec::new();
        let mut cur = self.def.apply(std::slice::from_ref(t));
        for _ in 1..self.psis.len() {
            match cur {
                Formula::Or(a, b) => {
                    out.push(*a);
                    cur = *b;
                }
                other => panic!("truth definition is not a disjunction: {other}"),
            }
        }
        out.push(cur);
        out
    }

    /// Splits `∀x [δ(x) →] body` into x and the matrix.
    fn open<'f>(&self, s: &'f Formula) -> Result<(Var, &'f Formula)> {
        match s {
            Formula::All(x, m) => Ok((x.clone(), m)),
            other => Err(malformed(format!("expected a universal truth axiom, got {other}"))),
        }
    }

    fn index(&self, psi: &Formula) -> usize {
        self.psis.iter().position(|q| q == psi).expect("collected formula")
    }

    /// `ψₖ(x) ↔ 𝔗(⌜ψₖ(ẋ)⌝)` pieces for the UTB instance of ψₖ.
    fn utb_proof(&self, psi: &Formula, target: &Formula) -> Result<Proof> {
        let (x, matrix) = self.open(target)?;
        let xt = Term::Var(x.clone());
        let code = crate::schemas::sbn(psi, vec![xt.clone()]);
        let ds = self.disjuncts(&code);
        let mut facts = Vec::new();
        for (i, d) in ds.iter().enumerate() {
            let Formula::Ex(y, body) = d else { return Err(malformed("disjunct is not existential")) };
            let coh = Proof::axiom(coherence_axiom(psi, &self.psis[i]));
            let inst = instantiate_many(coh, &[xt.clone(), Term::Var(y.clone())]);
            let inst = chain_ok(vec![inst], Formula::imp((**body).clone(), inst_phi(psi, &xt)));
            facts.push(ex_elim(y, inst));
        }
        let k = self.index(psi);
        facts.push(self.intro(&ds[k], &xt)?);
        let m = chain(facts, matrix.clone()).ok_or_else(|| malformed(format!("cannot assemble {target}")))?;
        Ok(Proof::gen(x, m))
    }

    /// `∃y (c = ⌜ψ(ẏ)⌝ ∧ ψ(y))` from `ψ(x)` at y := x.
    fn intro(&self, d: &Formula, xt: &Term) -> Result<Proof> {
        let Formula::Ex(y, body) = d else { return Err(malformed("disjunct is not existential")) };
        let at_x = substitute(body, y, xt);
        let Formula::And(eq, rest) = &at_x else { return Err(malformed("disjunct has unexpected shape")) };
        let Formula::Eq(l, _) = &**eq else { return Err(malformed("disjunct has unexpected shape")) };
        let ex = Proof::logical(Axiom::ExIntro(xt.clone()), Formula::imp(at_x.clone(), d.clone()));
        Ok(chain_ok(vec![refl(l), ex], Formula::imp((**rest).clone(), d.clone())))
    }

    fn sc_proof(&self, phi: &Formula, target: &Formula) -> Result<Proof> {
        let closure = phi.closure();
        if !self.tau.schemata.iter().any(|sc| sc.matches(&closure)) {
            return Err(Error::NotEliminable(format!(
                "inclusion axiom for {phi} is not an instance of a schema of {}",
                self.tau.name
            )));
        }
        let (x, matrix) = self.open(target)?;
        let xt = Term::Var(x.clone());
        let holds = match &closure {
            Formula::All(..) if !phi.is_sentence() => instantiate(Proof::axiom(closure.clone()), &xt),
            _ => Proof::axiom(closure.clone()),
        };
        let code = crate::schemas::sbn(phi, vec![xt.clone()]);
        let ds = self.disjuncts(&code);
        let intro = self.intro(&ds[self.index(phi)], &xt)?;
        let m = chain(vec![holds, intro], matrix.clone()).ok_or_else(|| malformed(format!("cannot assemble {target}")))?;
        Ok(Proof::gen(x, m))
    }

    fn proof(&self, p: &Proof) -> Result<Proof> {
        let conclusion = self.replace(&p.conclusion);
        if p.rule == Rule::Theory {
            if let Some(kind) = classify_truth_leaf(&p.conclusion, self.tau, self.nat) {
                let out = match kind {
                    TruthLeaf::Utb(psi) => self.utb_proof(&psi, &conclusion)?,
                    TruthLeaf::Sc(phi) => self.sc_proof(&phi, &conclusion)?,
                };
                debug_assert!(alpha_eq(&out.conclusion, &conclusion));
                return Ok(out);
            }
            return Ok(Proof::axiom(conclusion));
        }
        let rule = match &p.rule {
            Rule::Logical(Axiom::Leibniz { var, body, left, right }) => Rule::Logical(Axiom::Leibniz {
                var: var.clone(),
                body: self.replace(body),
                left: left.clone(),
                right: right.clone(),
            }),
            r => r.clone(),
        };
        let premises = p.premises.iter().map(|q| self.proof(q)).collect::<Result<Vec<_>>>()?;
        Ok(Proof { conclusion, rule, premises })
    }
}

/// Turns a proof over a UTB⁻/SC truth theory with a T-free conclusion into
/// a proof over its base τ: T is replaced by a truth definition for the
/// finitely many formulas the proof's truth axioms mention, and each truth
/// axiom by a τ-proof of its translation.
pub fn eliminate_truth(p: &Proof, truth_theory: &Theory, tau: &Theory) -> Result<Proof> {
    if p.conclusion.mentions_predicate(TRUTH) {
        return Err(Error::NotEliminable(format!("conclusion mentions {TRUTH}: {}", p.conclusion)));
    }
    let nat = truth_theory.nat.as_ref();
    let mut leaves = Vec::new();
    truth_leaves(p, tau, nat, &mut leaves);
    let mut psis: Vec<Formula> = Vec::new();
    for l in leaves {
        let f = match l {
            TruthLeaf::Utb(f) | TruthLeaf::Sc(f) => f,
        };
        if !psis.contains(&f) {
            psis.push(f);
        }
    }
    let def = if psis.is_empty() {
        let x = Var::new("x");
        RelDef::new(vec![x.clone()], Formula::eq(Term::Var(x.clone()), Term::Var(x)))
    } else {
        tarski_truth_definition(&psis)?
    };
    Eliminator { tau, nat, psis, def }.proof(p)
}

/// A polynomial with natural coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial(pub Vec<u64>);

impl Polynomial {
    pub fn eval(&self, n: u64) -> u128 {
        self.0.iter().rev().fold(0u128, |acc, c| acc.saturating_mul(n as u128).saturating_add(*c as u128))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(i, c)| **c != 0 || *i == 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*n"),
                _ => format!("{c}*n^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transformer {
    Identity,
    SmallReflection,
    TruthElimination,
}

/// A claimed reduction of `source` proofs to `target` proofs within a
/// size bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionWitness {
    pub source: Arc<Theory>,
    pub target: Arc<Theory>,
    pub transformer: Transformer,
    pub bound: Polynomial,
    pub provenance: String,
}

impl ReductionWitness {
    pub fn apply(&self, p: &Proof) -> Result<Proof> {
        match self.transformer {
            Transformer::Identity => Ok(p.clone()),
            Transformer::SmallReflection => reduce_small_reflection_proof(p, &self.source),
            Transformer::TruthElimination => {
                let base = self.source.families.iter().find_map(|f| match f {
                    Family::ScInclusion { base, .. } => Some(base.clone()),
                    _ => None,
                });
                eliminate_truth(p, &self.source, base.as_deref().unwrap_or(&self.target))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundVerdict {
    WithinBound,
    Violated(usize),
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    /// `(input size, output size)`; output is `None` where the transformer
    /// failed or its output did not check.
    pub samples: Vec<(u64, Option<u64>)>,
    pub bound: Polynomial,
    pub verdict: BoundVerdict,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bound: {}", self.bound)?;
        writeln!(f, "{:>5} {:>12} {:>12} {:>14}", "#", "input", "output", "bound")?;
        for (i, (n, m)) in self.samples.iter().enumerate() {
            let out = m.map_or("fail".to_string(), |m| m.to_string());
            writeln!(f, "{i:>5} {n:>12} {out:>12} {:>14}", self.bound.eval(*n))?;
        }
        match self.verdict {
            BoundVerdict::WithinBound => write!(f, "within-bound"),
            BoundVerdict::Violated(i) => write!(f, "violated at sample {i}"),
        }
    }
}

/// Runs the transformer over the corpus and checks every output against
/// the target and the claimed bound.
pub fn certify_bound(w: &ReductionWitness, corpus: &[Proof]) -> BoundReport {
    let mut samples = Vec::new();
    let mut verdict = BoundVerdict::WithinBound;
    for (i, p) in corpus.iter().enumerate() {
        let n = proof_size(p);
        let out = w.apply(p).ok().filter(|q| {
            alpha_eq(&q.conclusion, &p.conclusion) && check_proof(q, &w.target).accepted
        });
        let m = out.map(|q| proof_size(&q));
        let ok = m.is_some_and(|m| (m as u128) <= w.bound.eval(n));
        if !ok && verdict == BoundVerdict::WithinBound {
            verdict = BoundVerdict::Violated(i);
        }
        samples.push((n, m));
    }
    BoundReport { samples, bound: w.bound.clone(), verdict }
}
