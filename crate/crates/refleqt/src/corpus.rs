//! Deterministic generators of valid proofs, used by tests, the
//! acceptance suite and the CLI fuzz mode.

use num_bigint::BigUint;

use crate::calculus::derive::{chain, chain_ok, ex_elim, forall_mono, gen_all, instantiate, instantiate_many, refl};
use crate::calculus::{eval_closed_decidable, Axiom, Family, Proof, Theory};
use crate::schemas::{
    axiom_atom, instantiate as inst_phi, sbn, sc_instance, small_reflection_instance, utb_instance,
};
use crate::syntax::{alpha_eq, numeral, numeral_u64, parse_formula, substitute, Formula, Term, Var};
use crate::theories::induction_schema;

fn v(name: &str) -> Term {
    Term::var(name)
}

fn var(name: &str) -> Var {
    Var::new(name)
}

/// Proofs over the toy successor theory (axioms in the order of
/// [`crate::theories::successor_theory`]).
pub fn successor_proofs(th: &Theory, n: usize) -> Vec<Proof> {
    let ax: Vec<Proof> = th.axioms.iter().cloned().map(Proof::axiom).collect();
    let names = ["a", "b", "c", "d"];
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < n {
        let (p, q, r) = (names[k % 4], names[(k + 1) % 4], names[(k + 2) % 4]);
        let proof = match k % 10 {
            0..=3 => ax[k % 4].clone(),
            4 => {
                let inst = instantiate_many(ax[2].clone(), &[v(p), v(q), v(r)]);
                gen_all(&[var(p), var(q), var(r)], inst)
            }
            5 => {
                let inst = instantiate_many(ax[3].clone(), &[v(p), v(q), v(q)]);
                let goal = inst.conclusion.clone();
                let weakened = chain_ok(vec![inst], goal);
                gen_all(&[var(q), var(p)], weakened)
            }
            6 => {
                let goal = Formula::and(ax[0].conclusion.clone(), ax[2].conclusion.clone());
                chain_ok(vec![ax[0].clone(), ax[2].clone()], goal)
            }
            7 => {
                // Z(p) → ¬ Sc(q, p), from the second axiom.
                let inst = instantiate_many(ax[1].clone(), &[v(p), v(q)]);
                let zp = Formula::atom("Z", vec![v(p)]);
                let sc = Formula::atom("Sc", vec![v(q), v(p)]);
                let goal = Formula::imp(zp, Formula::not(sc));
                let eq = refl(&v(p));
                gen_all(&[var(p), var(q)], chain_ok(vec![eq, inst], goal))
            }
            8 => {
                // ∃x Z(x) → ∃x Z(x) ∨ Sc(p, p), then closed.
                let ex = ax[0].conclusion.clone();
                let goal = Formula::or(ex.clone(), Formula::atom("Sc", vec![v(p), v(p)]));
                gen_all(&[var(p)], chain_ok(vec![ax[0].clone()], goal))
            }
            _ => {
                // ∃y Sc(p, y) → (∀z (Sc(p, z) → z = z)), by existential elimination.
                let scy = Formula::atom("Sc", vec![v(p), v("y")]);
                let body = Formula::all(
                    var("z"),
                    Formula::imp(Formula::atom("Sc", vec![v(p), v("z")]), Formula::eq(v("z"), v("z"))),
                );
                let refl_z = gen_all(&[var("z")], chain_ok(vec![refl(&v("z"))], Formula::imp(
                    Formula::atom("Sc", vec![v(p), v("z")]),
                    Formula::eq(v("z"), v("z")),
                )));
                let inner = chain_ok(vec![refl_z], Formula::imp(scy, body));
                gen_all(&[var(p)], ex_elim(&var("y"), inner))
            }
        };
        out.push(proof);
        k += 1;
    }
    out
}

/// The textbook derivation of `A → A` from K and S.
pub fn identity_proof(a: &Formula) -> Proof {
    let aa = Formula::imp(a.clone(), a.clone());
    let s = Proof::logical(
        Axiom::S,
        Formula::imp(
            Formula::imp(a.clone(), Formula::imp(aa.clone(), a.clone())),
            Formula::imp(Formula::imp(a.clone(), aa.clone()), aa.clone()),
        ),
    );
    let k1 = Proof::logical(Axiom::K, Formula::imp(a.clone(), Formula::imp(aa.clone(), a.clone())));
    let k2 = Proof::logical(Axiom::K, Formula::imp(a.clone(), aa));
    Proof::mp(k2, Proof::mp(k1, s))
}

/// One-variable arithmetic formulas in `x` used by the generated corpora.
pub const ARITH_FORMULAS: &[&str] = &[
    "(= (+ x 0) x)",
    "(<= 0 x)",
    "(= (* x 0) 0)",
    "(not (= (S x) 0))",
    "(= (fst (pair x x)) x)",
];

/// One-variable formulas sampled for reflection pipelines.
pub const REFLECTION_FORMULAS: &[&str] = &[
    "(= (+ x 0) x)",
    "(= (* x 0) 0)",
    "(not (= (S x) 0))",
    "(= (fst (pair x x)) x)",
    "(= (snd (pair x x)) x)",
    "(= x x)",
    "(or (= x 0) (not (= x 0)))",
    "(<= x x)",
    "(<= 0 x)",
    "(ex z (= (+ z 0) x))",
    "(not (= (S (S x)) 0))",
    "(-> (= x 0) (= (S x) (S 0)))",
];

fn arith_formulas(th: &Theory) -> Vec<Formula> {
    ARITH_FORMULAS.iter().map(|t| parse_formula(t, &th.signature).expect("corpus formula parses")).collect()
}

/// τ-proof of `x + 0 = x` at the numeral `k`, padded with `pad` extra
/// conjunction steps so spliced subproofs vary in size.
pub fn addition_unit_proof(tau: &Theory, k: u64, pad: usize) -> Proof {
    let unit = Proof::axiom(tau.axioms[2].clone());
    let mut p = instantiate(unit.clone(), &numeral_u64(k));
    for _ in 0..pad {
        let goal = p.conclusion.clone();
        p = chain_ok(vec![p, unit.clone()], goal);
    }
    p
}

/// Finite axioms of `th` and of the presentations it includes.
pub fn finite_axioms(th: &Theory) -> Vec<Formula> {
    let mut out = th.axioms.clone();
    for f in &th.families {
        if let Family::Includes(t) = f {
            out.extend(finite_axioms(t));
        }
    }
    out
}

/// A τ-proof concluding exactly `φ(k̄)`: reflexivity, a tautology, or a
/// finite axiom with every leading universal instantiated at k̄.
pub fn instance_proof(tau: &Theory, phi: &Formula, k: u64, pad: usize) -> Option<Proof> {
    let n = numeral_u64(k);
    let target = inst_phi(phi, &n);
    let mut found = match &target {
        Formula::Eq(a, b) if a == b => Some(refl(a)),
        _ => chain(Vec::new(), target.clone()),
    };
    if found.is_none() {
        found = finite_axioms(tau).into_iter().find_map(|ax| {
            let mut p = Proof::axiom(ax);
            while !alpha_eq(&p.conclusion, &target) && matches!(p.conclusion, Formula::All(..)) {
                p = instantiate(p, &n);
            }
            alpha_eq(&p.conclusion, &target).then_some(p)
        });
    }
    let mut p = found?;
    for _ in 0..pad {
        p = chain_ok(vec![p, refl(&Term::zero())], target.clone());
    }
    if p.conclusion != target {
        p = chain_ok(vec![p], target);
    }
    Some(p)
}

/// Proofs over `sr`, a small-reflection extension of τ for φ, each using
/// family leaves: spliced and refuted antecedents, non-numeral arguments,
/// and reflection consequences. Spliced leaves need [`instance_proof`] to
/// find inner proofs; otherwise refuted leaves stand in.
pub fn small_reflection_proofs(sr: &Theory, n: usize) -> Vec<Proof> {
    let Some((tau, phi, nat)) = sr.families.iter().find_map(|f| match f {
        Family::SmallReflection { theory, phi, nat, .. } => Some((theory.clone(), phi.clone(), nat.clone())),
        _ => None,
    }) else {
        panic!("{} has no small-reflection family", sr.name)
    };
    let leaf = |a: Term, b: Term| {
        let core = small_reflection_instance(&tau.name, &phi, a, b.clone());
        Proof::axiom(match nat.as_ref().and_then(|t| t.domain_at(&b)) {
            Some(g) => Formula::imp(g, core),
            None => core,
        })
    };
    // Code of a proof of φ(k̄) if one is found, else a number coding no proof.
    let code = |k: u64, pad: usize| match instance_proof(&tau, &phi, k, pad) {
        Some(p) => numeral(&p.code()),
        None => numeral_u64(k + 2),
    };
    let mut out = Vec::new();
    let mut k = 0u64;
    while out.len() < n {
        let m = k / 5;
        let proof = match k % 5 {
            0 => leaf(code(m, (m % 3) as usize), numeral_u64(m)),
            1 => {
                // Antecedent false: the number is no proof, or proves φ at another argument.
                let a = if m % 2 == 0 { numeral(&BigUint::from(m + 2)) } else { code(m + 1, 0) };
                leaf(a, numeral_u64(m))
            }
            2 => {
                let l = leaf(code(m, 1), numeral_u64(m));
                let (guard, core) = match &l.conclusion {
                    Formula::Imp(g, c) if nat.as_ref().is_some_and(|t| t.domain.is_some()) => {
                        (Some((**g).clone()), (**c).clone())
                    }
                    c => (None, c.clone()),
                };
                let Formula::Imp(ante, concl) = &core else { unreachable!() };
                let goal = match guard {
                    Some(g) => Formula::imp(g, (**concl).clone()),
                    None => (**concl).clone(),
                };
                // A reflection consequence when the antecedent holds.
                if eval_closed_decidable(ante, &tau).unwrap_or(false) {
                    chain_ok(vec![Proof::computation((**ante).clone()), l], goal)
                } else {
                    l
                }
            }
            3 => {
                let l1 = leaf(code(m, 0), numeral_u64(m));
                let l2 = leaf(code(m + 1, 0), numeral_u64(m + 1));
                let goal = Formula::and(l1.conclusion.clone(), l2.conclusion.clone());
                chain_ok(vec![l1, l2], goal)
            }
            _ => {
                // The argument is a successor term rather than a numeral.
                let j = m % 4;
                let b = (0..j).fold(Term::zero(), |t, _| Term::succ(t));
                leaf(code(j, 0), b)
            }
        };
        out.push(proof);
        k += 1;
    }
    out
}

fn utb_at(psi: &Formula, nat: Option<&crate::interp::Translation>, t: &Term) -> Proof {
    instantiate(Proof::axiom(utb_instance(psi, nat).expect("one free variable")), t)
}

/// Proofs of T-free sentences over an SC truth theory whose base is an
/// arithmetic presentation with the induction schema and no number guard.
pub fn truth_proofs(sc: &Theory, n: usize) -> Vec<Proof> {
    let base = sc
        .families
        .iter()
        .find_map(|f| match f {
            Family::ScInclusion { base, .. } => Some(base.clone()),
            _ => None,
        })
        .expect("SC family");
    let nat = None;
    let psis = arith_formulas(&base);
    let x = Var::new("x");
    let ind = induction_schema();
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < n {
        let psi = &psis[(k / 5) % psis.len()];
        let other = &psis[(k / 5 + 1) % psis.len()];
        let xt = Term::Var(x.clone());
        let proof = match k % 5 {
            0 | 1 => {
                // From SC and UTB for an induction axiom φ: Ax(⌜φ⌝) → φ.
                let phi = ind.instance(psi, &[x.clone()]);
                let sc_ax = Proof::axiom(sc_instance(&base.name, &phi, nat).unwrap());
                let utb = Proof::axiom(utb_instance(&phi, nat).unwrap());
                let Formula::All(v, _) = &sc_ax.conclusion else { unreachable!() };
                let vt = Term::Var(v.clone());
                let (s1, u1) = (instantiate(sc_ax.clone(), &vt), instantiate(utb.clone(), &vt));
                let ax = axiom_atom(&base.name, sbn(&phi, vec![vt.clone()]));
                if k % 5 == 0 {
                    Proof::gen(v.clone(), chain_ok(vec![s1, u1], Formula::imp(ax, phi.clone())))
                } else {
                    let zero = Term::zero();
                    let at0 = substitute(&ax, v, &zero);
                    let (s0, u0) = (instantiate(sc_ax, &zero), instantiate(utb, &zero));
                    chain_ok(vec![Proof::computation(at0), s0, u0], phi)
                }
            }
            2 => {
                // Induction for the truth predicate transferred to ψ.
                let code = |t: &Term| sbn(psi, vec![t.clone()]);
                let t_of = |t: &Term| Formula::atom(crate::syntax::TRUTH, vec![code(t)]);
                let v = Var::new("v");
                let vt = Term::Var(v.clone());
                let t_ind = ind.instance(&t_of(&vt), &[v.clone()]);
                let t_ind_p = Proof::axiom(t_ind.clone());
                let u0 = utb_at(psi, nat, &Term::zero());
                let (uv, usv) = (utb_at(psi, nat, &vt), utb_at(psi, nat, &Term::succ(vt.clone())));
                let psi_v = substitute(psi, &x, &vt);
                let psi_sv = substitute(psi, &x, &Term::succ(vt.clone()));
                let step_imp = Formula::imp(
                    Formula::imp(psi_v.clone(), psi_sv.clone()),
                    Formula::imp(t_of(&vt), t_of(&Term::succ(vt.clone()))),
                );
                let step = forall_mono(&v, chain_ok(vec![uv.clone(), usv], step_imp));
                let concl = forall_mono(&v, chain_ok(vec![uv], Formula::imp(t_of(&vt), psi_v.clone())));
                let goal = ind.instance(psi, &[x.clone()]);
                chain_ok(vec![u0, step, t_ind_p, concl], goal)
            }
            3 => {
                // Two UTB instances, used to commute a conjunction.
                let (a, b) = (utb_at(psi, nat, &xt), utb_at(other, nat, &xt));
                let (pa, pb) = (psi.clone(), other.clone());
                let goal = Formula::imp(Formula::and(pa.clone(), pb.clone()), Formula::and(pb, pa));
                Proof::gen(x.clone(), chain_ok(vec![a, b], goal))
            }
            _ => {
                // ψ at a numeral from its UTB instance and an equivalent T-free fact.
                let m = numeral_u64((k / 5) as u64);
                let u = utb_at(psi, nat, &m);
                let goal = Formula::imp(substitute(psi, &x, &m), substitute(psi, &x, &m));
                chain_ok(vec![u], goal)
            }
        };
        out.push(proof);
        k += 1;
    }
    out
}
