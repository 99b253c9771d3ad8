//! Generators for consistency statements, reflection instances, the
//! small-reflection re-axiomatization and the truth theories over a base.

use std::collections::HashSet;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::calculus::{Family, Theory};
use crate::error::{Error, Result};
use crate::interp::{RelDef, Translation};
use crate::syntax::{
    alpha_key, all_vars, fresh_var, numeral, proof_predicate, axiom_predicate, substitute, Formula, Term, Var,
    SUBST_NUMERAL, TRUTH,
};

/// `name` if unused, else its smallest unused serial variant.
pub fn pick_var(name: &str, avoid: &HashSet<Var>) -> Var {
    let v = Var::new(name);
    if avoid.contains(&v) {
        fresh_var(&v, avoid)
    } else {
        v
    }
}

fn vars_of(fs: &[&Formula]) -> HashSet<Var> {
    let mut out = HashSet::new();
    for f in fs {
        all_vars(f, &mut out);
    }
    out
}

pub fn zero_eq_one() -> Formula {
    Formula::eq(Term::zero(), Term::succ(Term::zero()))
}

pub fn proof_atom(theory: &str, p: Term, x: Term) -> Formula {
    Formula::atom(&proof_predicate(theory), vec![p, x])
}

pub fn axiom_atom(theory: &str, x: Term) -> Formula {
    Formula::atom(&axiom_predicate(theory), vec![x])
}

pub fn truth_atom(x: Term) -> Formula {
    Formula::atom(TRUTH, vec![x])
}

/// `sbn(⌜φ⌝, args…)`: the code of φ with its free variables, in sorted
/// order, replaced by the numerals of `args`.
pub fn sbn(phi: &Formula, args: Vec<Term>) -> Term {
    let mut all = vec![Term::quote(phi.clone())];
    all.extend(args);
    Term::app(SUBST_NUMERAL, all)
}

/// `Prov_σ(t) = ∃p Proof_σ(p, t)`.
pub fn prov(theory: &str, t: Term) -> Formula {
    let mut avoid = HashSet::new();
    crate::syntax::term_vars(&t, &mut avoid);
    let p = pick_var("p", &avoid);
    Formula::ex(p.clone(), proof_atom(theory, Term::Var(p), t))
}

/// The unique free variable of φ.
pub fn single_free_var(phi: &Formula) -> Result<Var> {
    let fv = phi.free_vars();
    if fv.len() != 1 {
        return Err(Error::Arity(format!("expected exactly one free variable in {phi}, found {}", fv.len())));
    }
    Ok(fv.into_iter().next().unwrap())
}

pub fn at_most_one_free_var(phi: &Formula) -> Result<()> {
    let n = phi.free_vars().len();
    if n > 1 {
        return Err(Error::Arity(format!("expected at most one free variable in {phi}, found {n}")));
    }
    Ok(())
}

/// φ with its free variable (if any) replaced by `t`.
pub fn instantiate(phi: &Formula, t: &Term) -> Formula {
    match phi.free_vars().into_iter().next() {
        Some(v) => substitute(phi, &v, t),
        None => phi.clone(),
    }
}

fn has_arithmetic(t: &Theory) -> Result<()> {
    if t.signature.arithmetic || t.nat.is_some() {
        Ok(())
    } else {
        Err(Error::MissingArithmetization(t.name.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReflectionKind {
    Con,
    ConBounded(u64),
    Rfn,
    Ufn,
    UfnN(Translation),
}

/// `¬∃p Proof_τ(p, ⌜0=1⌝)`, or with `∃p ≤ n̄` when bounded.
pub fn gen_consistency(tau: &Theory, bound: Option<u64>) -> Result<Formula> {
    has_arithmetic(tau)?;
    let p = Var::new("p");
    let body = proof_atom(&tau.name, Term::Var(p.clone()), Term::quote(zero_eq_one()));
    Ok(Formula::not(match bound {
        None => Formula::ex(p, body),
        Some(n) => Formula::bex(p, numeral(&n.into()), body),
    }))
}

/// `Prov_τ(⌜φ⌝) → φ` for a sentence φ.
pub fn rfn_instance(theory: &str, phi: &Formula) -> Result<Formula> {
    if !phi.is_sentence() {
        return Err(Error::Arity(format!("local reflection needs a sentence, got {phi}")));
    }
    Ok(Formula::imp(prov(theory, Term::quote(phi.clone())), phi.clone()))
}

/// `∀x (Prov_τ(⌜φ(ẋ)⌝) → φ(x))`.
pub fn ufn_instance(theory: &str, phi: &Formula) -> Result<Formula> {
    let v = single_free_var(phi)?;
    let x = pick_var("x", &vars_of(&[phi]));
    let xt = Term::Var(x.clone());
    Ok(Formula::all(
        x,
        Formula::imp(prov(theory, sbn(phi, vec![xt.clone()])), substitute(phi, &v, &xt)),
    ))
}

/// `(∀x:N)(Prov_τ(⌜φ(ẋ)⌝)^N → φ(x))`: quantifiers over x and over proofs
/// relativized to δ_N.
pub fn ufn_n_instance(theory: &str, nat: &Translation, phi: &Formula) -> Result<Formula> {
    let Some(domain) = &nat.domain else {
        return ufn_instance(theory, phi);
    };
    let v = single_free_var(phi)?;
    let mut avoid = vars_of(&[phi, &domain.body]);
    let x = pick_var("x", &avoid);
    avoid.insert(x.clone());
    let p = pick_var("p", &avoid);
    let xt = Term::Var(x.clone());
    let pt = Term::Var(p.clone());
    let prov_n = Formula::ex(
        p,
        Formula::and(domain.apply(std::slice::from_ref(&pt)), proof_atom(theory, pt, sbn(phi, vec![xt.clone()]))),
    );
    Ok(Formula::all(
        x,
        Formula::imp(domain.apply(std::slice::from_ref(&xt)), Formula::imp(prov_n, substitute(phi, &v, &xt))),
    ))
}

pub fn gen_reflection_instance(kind: &ReflectionKind, tau: &Theory, phi: &Formula) -> Result<Formula> {
    has_arithmetic(tau)?;
    match kind {
        ReflectionKind::Con => gen_consistency(tau, None),
        ReflectionKind::ConBounded(n) => gen_consistency(tau, Some(*n)),
        ReflectionKind::Rfn => rfn_instance(&tau.name, phi),
        ReflectionKind::Ufn => ufn_instance(&tau.name, phi),
        ReflectionKind::UfnN(nat) => ufn_n_instance(&tau.name, nat, phi),
    }
}

/// `Proof_τ(a, ⌜φ(ḃ)⌝) → φ(b)` with the code written as `sbn(⌜φ⌝, b)`.
pub fn small_reflection_instance(theory: &str, phi: &Formula, a: Term, b: Term) -> Formula {
    Formula::imp(proof_atom(theory, a, sbn(phi, vec![b.clone()])), instantiate(phi, &b))
}

/// The same instance at numerals, with the code written as a quotation.
pub fn small_reflection_instance_quoted(theory: &str, phi: &Formula, n1: &num_bigint::BigUint, n2: &num_bigint::BigUint) -> Formula {
    let b = numeral(n2);
    let inst = instantiate(phi, &b);
    Formula::imp(proof_atom(theory, numeral(n1), Term::quote(inst.clone())), inst)
}

/// `[δ(y) →] (Proof_τ(fst y, ⌜φ(snd y)⌝) → φ(snd y))`, the paired template
/// whose numeral instances the small-reflection theory adds.
pub fn small_reflection_template(theory: &str, phi: &Formula, y: &Var, nat: Option<&Translation>) -> Formula {
    let yt = Term::Var(y.clone());
    let core = small_reflection_instance(
        theory,
        phi,
        Term::app("fst", vec![yt.clone()]),
        Term::app("snd", vec![yt.clone()]),
    );
    match nat.and_then(|n| n.domain_at(&yt)) {
        Some(d) => Formula::imp(d, core),
        None => core,
    }
}

/// Name of the small-reflection theory for τ and φ.
pub fn small_reflection_name(tau: &str, phi: &Formula) -> String {
    let digest = Sha256::digest(alpha_key(phi).as_bytes());
    format!("{tau}+sr[{}]", &hex::encode(digest)[..8])
}

/// τ′: τ plus every small-reflection instance for φ.
pub fn gen_small_reflection_theory(tau: &Arc<Theory>, phi: &Formula) -> Result<Theory> {
    has_arithmetic(tau)?;
    let var = single_free_var(phi)?;
    Ok(Theory {
        name: small_reflection_name(&tau.name, phi),
        signature: tau.signature.clone(),
        axioms: Vec::new(),
        schemata: Vec::new(),
        families: vec![
            Family::Includes(tau.clone()),
            Family::SmallReflection { theory: tau.clone(), phi: phi.clone(), var, nat: tau.nat.clone() },
        ],
        nat: tau.nat.clone(),
    })
}

fn guard(nat: Option<&Translation>, x: &Term, body: Formula) -> Formula {
    match nat.and_then(|n| n.domain_at(x)) {
        Some(d) => Formula::imp(d, body),
        None => body,
    }
}

/// `(∀x:N)(T⌜A(ẋ)⌝ ↔ A(x))`; for a sentence A the quantifier is vacuous.
pub fn utb_instance(a: &Formula, nat: Option<&Translation>) -> Result<Formula> {
    at_most_one_free_var(a)?;
    let x = pick_var("x", &vars_of(&[a]));
    let xt = Term::Var(x.clone());
    let body = Formula::iff(truth_atom(sbn(a, vec![xt.clone()])), instantiate(a, &xt));
    Ok(Formula::all(x, guard(nat, &xt, body)))
}

/// `(∀x:N)(τ(⌜φ(ẋ)⌝) → T⌜φ(ẋ)⌝)` for an axiom template φ of `base`.
pub fn sc_instance(base: &str, phi: &Formula, nat: Option<&Translation>) -> Result<Formula> {
    at_most_one_free_var(phi)?;
    let x = pick_var("x", &vars_of(&[phi]));
    let xt = Term::Var(x.clone());
    let code = sbn(phi, vec![xt.clone()]);
    let body = Formula::imp(axiom_atom(base, code.clone()), truth_atom(code));
    Ok(Formula::all(x, guard(nat, &xt, body)))
}

/// `∀x⃗ (T⌜P(ẋ⃗)⌝ ↔ P(x⃗))` for a primitive P given as an atomic formula
/// whose arguments are distinct variables.
pub fn ct_primitive(atom: &Formula) -> Formula {
    let vars: Vec<Var> = atom.free_vars().into_iter().collect();
    let mut avoid = vars_of(&[atom]);
    let xs: Vec<Var> = vars
        .iter()
        .map(|v| {
            let x = pick_var(&format!("x{}", v.name), &avoid);
            avoid.insert(x.clone());
            x
        })
        .collect();
    let args: Vec<Term> = xs.iter().cloned().map(Term::Var).collect();
    let map = vars.iter().cloned().zip(args.iter().cloned()).collect();
    let inst = crate::syntax::subst_formula(atom, &map);
    Formula::all_many(&xs, Formula::iff(truth_atom(sbn(atom, args)), inst))
}

/// `T⌜¬φ⌝ ↔ ¬T⌜φ⌝` for a sentence φ.
pub fn ct_neg(phi: &Formula) -> Formula {
    Formula::iff(
        truth_atom(Term::quote(Formula::not(phi.clone()))),
        Formula::not(truth_atom(Term::quote(phi.clone()))),
    )
}

/// `T⌜φ ∧ ψ⌝ ↔ (T⌜φ⌝ ∧ T⌜ψ⌝)` for sentences φ, ψ.
pub fn ct_and(phi: &Formula, psi: &Formula) -> Formula {
    Formula::iff(
        truth_atom(Term::quote(Formula::and(phi.clone(), psi.clone()))),
        Formula::and(truth_atom(Term::quote(phi.clone())), truth_atom(Term::quote(psi.clone()))),
    )
}

/// `T⌜∀v φ⌝ ↔ ∀x T⌜φ(ẋ/v)⌝` for φ with at most v free.
pub fn ct_all(v: &Var, phi: &Formula) -> Formula {
    let x = pick_var("x", &vars_of(&[phi]));
    let xt = Term::Var(x.clone());
    Formula::iff(
        truth_atom(Term::quote(Formula::all(v.clone(), phi.clone()))),
        Formula::all(x, truth_atom(sbn(phi, vec![xt]))),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruthKind {
    Utb,
    Sc,
    Ct,
}

/// UTB⁻, SC or CT⁻ over `base`; the signature adds T.
pub fn gen_truth_theory(kind: TruthKind, base: &Arc<Theory>) -> Result<Theory> {
    let nat = base.nat.clone().ok_or_else(|| Error::MissingInterpretation(base.name.clone()))?;
    // The base schemata range over the extended language.
    let mut families = base.families.clone();
    let mut axioms = base.axioms.clone();
    let suffix = match kind {
        TruthKind::Utb => {
            families.push(Family::Utb { nat: Some(nat.clone()) });
            "utb"
        }
        TruthKind::Sc => {
            families.push(Family::Utb { nat: Some(nat.clone()) });
            families.push(Family::ScInclusion { base: base.clone(), nat: Some(nat.clone()) });
            "sc"
        }
        TruthKind::Ct => {
            let sig = &base.signature;
            let mut prims: Vec<Formula> = sig
                .relations
                .iter()
                .map(|(r, a)| {
                    Formula::atom(r, (0..*a).map(|i| Term::var(&format!("v{i}"))).collect())
                })
                .collect();
            prims.push(Formula::eq(Term::var("v0"), Term::var("v1")));
            if sig.arithmetic {
                prims.push(Formula::atom(crate::syntax::LEQ, vec![Term::var("v0"), Term::var("v1")]));
            }
            axioms.extend(prims.iter().map(ct_primitive));
            families.extend([Family::CtNeg, Family::CtAnd, Family::CtAll]);
            "ct"
        }
    };
    Ok(Theory {
        name: format!("{}+{suffix}", base.name),
        signature: base.signature.clone().with_truth(),
        axioms,
        schemata: base.schemata.clone(),
        families,
        nat: Some(nat),
    })
}

/// 𝔗(x) = ⋁ᵢ ∃y (x = ⌜ψᵢ(ẏ)⌝ ∧ ψᵢ(y)), returned with its parameter x.
pub fn tarski_truth_definition(psis: &[Formula]) -> Result<RelDef> {
    if psis.is_empty() {
        return Err(Error::EmptyList);
    }
    let refs: Vec<&Formula> = psis.iter().collect();
    let mut avoid = vars_of(&refs);
    let x = pick_var("x", &avoid);
    avoid.insert(x.clone());
    let y = pick_var("y", &avoid);
    let yt = Term::Var(y.clone());
    let disjuncts = psis
        .iter()
        .map(|psi| {
            Formula::ex(
                y.clone(),
                Formula::and(Formula::eq(Term::Var(x.clone()), sbn(psi, vec![yt.clone()])), instantiate(psi, &yt)),
            )
        })
        .collect();
    Ok(RelDef::new(vec![x], Formula::disj(disjuncts).unwrap()))
}

/// `∀x∀y ((⌜ψ_k(ẋ)⌝ = ⌜ψ_i(ẏ)⌝ ∧ ψ_i(y)) → ψ_k(x))`: equal codes name the
/// same sentence.
pub fn coherence_axiom(psi_k: &Formula, psi_i: &Formula) -> Formula {
    let mut avoid = vars_of(&[psi_k, psi_i]);
    let x = pick_var("x", &avoid);
    avoid.insert(x.clone());
    let y = pick_var("y", &avoid);
    let (xt, yt) = (Term::Var(x.clone()), Term::Var(y.clone()));
    Formula::all(
        x,
        Formula::all(
            y,
            Formula::imp(
                Formula::and(
                    Formula::eq(sbn(psi_k, vec![xt.clone()]), sbn(psi_i, vec![yt.clone()])),
                    instantiate(psi_i, &yt),
                ),
                instantiate(psi_k, &xt),
            ),
        ),
    )
}
