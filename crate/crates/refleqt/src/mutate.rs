//! Single-node proof mutations for robustness testing.
//!
//! Every mutation changes one node so that some inference no longer holds:
//! conclusion edits are applied only where a parent inference, or the node's
//! own premises, pin the conclusion down.

use std::collections::HashSet;
use std::fmt;

use crate::calculus::{Proof, Rule};
use crate::schemas::pick_var;
use crate::syntax::{all_vars, alpha_eq, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    /// Conclusion `A` becomes `¬A`.
    Negate,
    /// The first term argument `t` becomes `S(t)`.
    PerturbTerm,
    /// The two premises of a modus ponens trade places.
    SwapPremises,
    /// A generalization names a fresh variable instead of its own.
    RenameGenVar,
    /// A modus ponens node is replaced by its major premise.
    KeepMajor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub path: Vec<usize>,
    pub kind: MutationKind,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let loc: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{:?} at [{}]", self.kind, loc.join("."))
    }
}

fn perturb_term(f: &Formula) -> Option<Formula> {
    let bump = |args: &[Term]| -> Option<Vec<Term>> {
        let mut out = args.to_vec();
        let first = out.first_mut()?;
        *first = Term::succ(first.clone());
        Some(out)
    };
    match f {
        Formula::Atom(p, args) => bump(args).map(|a| Formula::Atom(p.clone(), a)),
        Formula::Eq(a, b) => Some(Formula::Eq(Term::succ(a.clone()), b.clone())),
        Formula::Not(a) => perturb_term(a).map(Formula::not),
        Formula::All(v, a) => perturb_term(a).map(|a| Formula::all(v.clone(), a)),
        Formula::Ex(v, a) => perturb_term(a).map(|a| Formula::ex(v.clone(), a)),
        Formula::BAll(v, t, a) => perturb_term(a).map(|a| Formula::ball(v.clone(), t.clone(), a)),
        Formula::BEx(v, t, a) => perturb_term(a).map(|a| Formula::bex(v.clone(), t.clone(), a)),
        Formula::And(a, b) => perturb_term(a).map(|a| Formula::and(a, (**b).clone())),
        Formula::Or(a, b) => perturb_term(a).map(|a| Formula::or(a, (**b).clone())),
        Formula::Imp(a, b) => perturb_term(a).map(|a| Formula::imp(a, (**b).clone())),
    }
}

fn has_term(f: &Formula) -> bool {
    perturb_term(f).is_some()
}

/// Every applicable mutation, in preorder.
pub fn mutations(p: &Proof) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (path, node) in p.nodes() {
        let pinned = !path.is_empty() || !node.premises.is_empty();
        let mut push = |kind| out.push(Mutation { path: path.clone(), kind });
        if pinned {
            push(MutationKind::Negate);
            if has_term(&node.conclusion) {
                push(MutationKind::PerturbTerm);
            }
        }
        match node.rule {
            Rule::ModusPonens => {
                push(MutationKind::SwapPremises);
                if !path.is_empty() {
                    push(MutationKind::KeepMajor);
                }
            }
            Rule::Generalization(_) => push(MutationKind::RenameGenVar),
            _ => {}
        }
    }
    out
}

/// Applies `m` to a copy of `p`. Panics if `m` was not produced by
/// `mutations(p)`.
pub fn apply_mutation(p: &Proof, m: &Mutation) -> Proof {
    let mut out = p.clone();
    let node = out.node_mut(&m.path);
    match m.kind {
        MutationKind::Negate => node.conclusion = Formula::not(node.conclusion.clone()),
        MutationKind::PerturbTerm => {
            node.conclusion = perturb_term(&node.conclusion).expect("mutation applies to a formula with a term")
        }
        MutationKind::SwapPremises => node.premises.swap(0, 1),
        MutationKind::RenameGenVar => {
            let Rule::Generalization(v) = &node.rule else { panic!("not a generalization") };
            let mut avoid = HashSet::new();
            all_vars(&node.conclusion, &mut avoid);
            avoid.insert(v.clone());
            node.rule = Rule::Generalization(pick_var(&v.name, &avoid));
        }
        MutationKind::KeepMajor => *node = node.premises[1].clone(),
    }
    out
}

/// Same shape, rules and α-equal conclusions at every node.
pub fn alpha_equal_proofs(a: &Proof, b: &Proof) -> bool {
    a.rule == b.rule
        && a.premises.len() == b.premises.len()
        && alpha_eq(&a.conclusion, &b.conclusion)
        && a.premises.iter().zip(&b.premises).all(|(x, y)| alpha_equal_proofs(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, Axiom, Theory};
    use crate::syntax::{parse_formula, Signature, Var};

    #[test]
    fn every_mutation_of_a_small_proof_is_rejected() {
        let sig = Signature::arithmetic("t").with_relation("P", 1);
        let th = Theory::finite("t", sig.clone(), vec![parse_formula("(P 0)", &sig).unwrap()]);
        let f = |s: &str| parse_formula(s, &sig).unwrap();
        let leaf = Proof::axiom(f("(P 0)"));
        let k = Proof::logical(Axiom::K, f("(-> (P 0) (-> (= x x) (P 0)))"));
        let p = Proof::gen(Var::new("x"), Proof::mp(leaf, k));
        assert!(check_proof(&p, &th).accepted);
        let ms = mutations(&p);
        assert_eq!(ms.len(), 11);
        for m in &ms {
            let q = apply_mutation(&p, m);
            assert!(!alpha_equal_proofs(&p, &q), "{m}");
            assert!(!check_proof(&q, &th).accepted, "{m}");
        }
    }
}
