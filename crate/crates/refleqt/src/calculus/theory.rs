use std::borrow::Cow;
use std::sync::Arc;

use crate::interp::Translation;
use crate::ordinal::Ordinal;
use crate::schemas::{
    coherence_axiom, ct_all, ct_and, ct_neg, sc_instance, small_reflection_template, ufn_instance, ufn_n_instance,
    utb_instance, rfn_instance, instantiate,
};
use crate::syntax::{
    alpha_eq, match_instance, numeral_value, replace_atoms, substitute, Formula, Signature, Term, Var, PROOF_PREFIX,
    SUBST_NUMERAL, TRUTH,
};

/// Name of the second-order placeholder in schema templates.
pub const PLACEHOLDER: &str = "?P";

/// An axiom schema: a template mentioning the placeholder `?P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub template: Formula,
}

fn placeholder_arity(f: &Formula) -> Option<usize> {
    match f {
        Formula::Atom(p, args) if p == PLACEHOLDER => Some(args.len()),
        Formula::Atom(..) | Formula::Eq(..) => None,
        Formula::Not(a) | Formula::All(_, a) | Formula::Ex(_, a) | Formula::BAll(_, _, a) | Formula::BEx(_, _, a) => {
            placeholder_arity(a)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            placeholder_arity(a).or_else(|| placeholder_arity(b))
        }
    }
}

impl Schema {
    pub fn new(name: &str, template: Formula) -> Schema {
        Schema { name: name.into(), template }
    }

    /// Arity of the placeholder; 0 if it does not occur.
    pub fn arity(&self) -> usize {
        placeholder_arity(&self.template).unwrap_or(0)
    }

    /// Universal closure of the template with `?P(t⃗)` replaced by `ψ[params := t⃗]`.
    pub fn instance(&self, psi: &Formula, params: &[Var]) -> Formula {
        replace_atoms(&self.template, PLACEHOLDER, params, psi).closure()
    }

    /// True iff `s` is a universal closure of an instance of the template.
    pub fn matches(&self, s: &Formula) -> bool {
        let mut body = s;
        let mut peeled: Vec<Var> = Vec::new();
        loop {
            if let Some((params, psi)) = extract(&self.template, body, &mut Vec::new(), &mut Vec::new()) {
                let inst = replace_atoms(&self.template, PLACEHOLDER, &params, &psi);
                if inst.free_vars().iter().all(|v| peeled.contains(v))
                    && alpha_eq(&Formula::all_many(&peeled, inst), s)
                {
                    return true;
                }
            }
            match body {
                Formula::All(v, b) => {
                    peeled.push(v.clone());
                    body = b;
                }
                _ => return false,
            }
        }
    }
}

/// Walks template and candidate in parallel to the first placeholder
/// occurrence whose arguments are distinct template-bound variables, and
/// reads off the candidate subformula there as ψ over the matching
/// candidate variables.
fn extract(t: &Formula, c: &Formula, tb: &mut Vec<Var>, cb: &mut Vec<Var>) -> Option<(Vec<Var>, Formula)> {
    if let Formula::Atom(p, args) = t {
        if p != PLACEHOLDER {
            return None;
        }
        let mut params = Vec::new();
        for a in args {
            let Term::Var(x) = a else { return None };
            let i = tb.iter().rposition(|b| b == x)?;
            let y = cb[i].clone();
            if params.contains(&y) {
                return None;
            }
            params.push(y);
        }
        return Some((params, c.clone()));
    }
    match (t, c) {
        (Formula::Not(a), Formula::Not(b)) => extract(a, b, tb, cb),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => {
            extract(a1, b1, tb, cb).or_else(|| extract(a2, b2, tb, cb))
        }
        (Formula::All(x, a), Formula::All(y, b))
        | (Formula::Ex(x, a), Formula::Ex(y, b))
        | (Formula::BAll(x, _, a), Formula::BAll(y, _, b))
        | (Formula::BEx(x, _, a), Formula::BEx(y, _, b)) => {
            tb.push(x.clone());
            cb.push(y.clone());
            let r = extract(a, b, tb, cb);
            tb.pop();
            cb.pop();
            r
        }
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filter {
    All,
    Even,
}

/// Generated axiom families, each with a decidable membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Every axiom of another presentation.
    Includes(Arc<Theory>),
    /// `Prov_σ(⌜φ⌝) → φ` for sentences φ.
    Rfn(Arc<Theory>),
    /// `∀x (Prov_σ(⌜φ(ẋ)⌝) → φ(x))`.
    Ufn(Arc<Theory>),
    /// The same relativized to δ_N.
    UfnN { theory: Arc<Theory>, nat: Translation },
    /// `Proof_τ(a, ⌜φ(ḃ)⌝) → φ(b)` for closed a, b, optionally guarded by δ_N.
    SmallReflection { theory: Arc<Theory>, phi: Formula, var: Var, nat: Option<Translation> },
    /// `(∀x:N)(T⌜A(ẋ)⌝ ↔ A(x))` for T-free A.
    Utb { nat: Option<Translation> },
    /// `(∀x:N)(τ(⌜φ(ẋ)⌝) → T⌜φ(ẋ)⌝)` where `∀v φ(v)` is a base axiom.
    ScInclusion { base: Arc<Theory>, nat: Option<Translation> },
    CtNeg,
    CtAnd,
    CtAll,
    /// RFN^α(base): base axioms plus tagged uniform-reflection instances.
    Tower { base: Arc<Theory>, level: Ordinal },
    /// `template[var := n̄]` for numerals n passing the filter.
    Instances { template: Formula, var: Var, filter: Filter },
    /// Substitution-coherence facts about coded formulas; see `coherence_axiom`.
    Coherence,
}

/// A decidable axiom recognizer over a signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Formula>,
    pub schemata: Vec<Schema>,
    pub families: Vec<Family>,
    /// The base interpretation N of arithmetic, if any.
    pub nat: Option<Translation>,
}

fn quotes(f: &Formula) -> Vec<&Formula> {
    fn term<'a>(t: &'a Term, out: &mut Vec<&'a Formula>) {
        match t {
            Term::Quote(q) => out.push(q),
            Term::App(_, args) => args.iter().for_each(|a| term(a, out)),
            _ => {}
        }
    }
    fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
        match f {
            Formula::Atom(_, args) => args.iter().for_each(|a| term(a, out)),
            Formula::Eq(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::Not(a) | Formula::All(_, a) | Formula::Ex(_, a) => walk(a, out),
            Formula::BAll(_, t, a) | Formula::BEx(_, t, a) => {
                term(t, out);
                walk(a, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

fn first_proof_predicate(f: &Formula) -> Option<&str> {
    match f {
        Formula::Atom(p, _) if p.starts_with(PROOF_PREFIX) => Some(&p[PROOF_PREFIX.len()..]),
        Formula::Atom(..) | Formula::Eq(..) => None,
        Formula::Not(a) | Formula::All(_, a) | Formula::Ex(_, a) | Formula::BAll(_, _, a) | Formula::BEx(_, _, a) => {
            first_proof_predicate(a)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            first_proof_predicate(a).or_else(|| first_proof_predicate(b))
        }
    }
}

fn at_most_one_free(f: &Formula) -> bool {
    f.free_vars().len() <= 1
}

/// Name of RFN^β(base); level 0 is the base itself.
pub fn tower_name(base: &str, level: &Ordinal) -> String {
    if level.is_zero() {
        base.to_string()
    } else {
        format!("{base}@{}", level.compact())
    }
}

/// Level encoded in a tower theory name over `base`.
pub fn tower_level(base: &str, name: &str) -> Option<Ordinal> {
    if name == base {
        return Some(Ordinal::zero());
    }
    let rest = name.strip_prefix(base)?.strip_prefix('@')?;
    Ordinal::parse(rest).ok().filter(|o| !o.is_zero() && o.compact() == rest)
}

/// The presentation RFN^α(τ).
pub fn rfn_tower_presentation(base: &Arc<Theory>, level: &Ordinal) -> Theory {
    Theory {
        name: tower_name(&base.name, level),
        signature: base.signature.clone(),
        axioms: Vec::new(),
        schemata: Vec::new(),
        families: vec![Family::Tower { base: base.clone(), level: level.clone() }],
        nat: base.nat.clone(),
    }
}

/// Splits off a `δ_N(c) →` guard with closed c.
fn strip_guard<'a>(s: &'a Formula, nat: Option<&Translation>) -> &'a Formula {
    let Some(domain) = nat.and_then(|n| n.domain.as_ref()) else { return s };
    if let Formula::Imp(g, core) = s {
        if let Some(Some(c)) = match_instance(&domain.body, &domain.params[0], g) {
            if c.is_closed() {
                return core;
            }
        }
    }
    s
}

impl Family {
    pub fn recognizes(&self, s: &Formula) -> bool {
        match self {
            Family::Includes(t) => t.recognize_axiom(s),
            Family::Rfn(t) => quotes(s)
                .into_iter()
                .any(|q| rfn_instance(&t.name, q).is_ok_and(|inst| alpha_eq(&inst, s))),
            Family::Ufn(t) => quotes(s)
                .into_iter()
                .any(|q| ufn_instance(&t.name, q).is_ok_and(|inst| alpha_eq(&inst, s))),
            Family::UfnN { theory, nat } => quotes(s)
                .into_iter()
                .any(|q| ufn_n_instance(&theory.name, nat, q).is_ok_and(|inst| alpha_eq(&inst, s))),
            Family::SmallReflection { theory, phi, var, nat } => {
                small_reflection_member(&theory.name, phi, var, strip_guard(s, nat.as_ref()))
            }
            Family::Utb { nat } => quotes(s).into_iter().any(|a| {
                at_most_one_free(a)
                    && !a.mentions_predicate(TRUTH)
                    && utb_instance(a, nat.as_ref()).is_ok_and(|inst| alpha_eq(&inst, s))
            }),
            Family::ScInclusion { base, nat } => quotes(s).into_iter().any(|phi| {
                at_most_one_free(phi)
                    && sc_instance(&base.name, phi, nat.as_ref()).is_ok_and(|inst| alpha_eq(&inst, s))
                    && base.recognize_axiom(&phi.closure())
            }),
            Family::CtNeg => match quotes(s).first() {
                Some(Formula::Not(phi)) => {
                    phi.is_sentence() && !phi.mentions_predicate(TRUTH) && alpha_eq(&ct_neg(phi), s)
                }
                _ => false,
            },
            Family::CtAnd => match quotes(s).first() {
                Some(Formula::And(a, b)) => {
                    a.is_sentence()
                        && b.is_sentence()
                        && !a.mentions_predicate(TRUTH)
                        && !b.mentions_predicate(TRUTH)
                        && alpha_eq(&ct_and(a, b), s)
                }
                _ => false,
            },
            Family::CtAll => match quotes(s).first() {
                Some(Formula::All(v, phi)) => {
                    phi.free_vars().iter().all(|w| w == v)
                        && !phi.mentions_predicate(TRUTH)
                        && alpha_eq(&ct_all(v, phi), s)
                }
                _ => false,
            },
            Family::Tower { base, level } => {
                if base.recognize_axiom(s) {
                    return true;
                }
                let Some(name) = first_proof_predicate(s) else { return false };
                let Some(beta) = tower_level(&base.name, name) else { return false };
                let admitted = if level.is_successor() {
                    level.pred().as_ref() == Some(&beta)
                } else {
                    level.is_limit() && beta < *level
                };
                admitted
                    && quotes(s)
                        .into_iter()
                        .any(|q| ufn_instance(name, q).is_ok_and(|inst| alpha_eq(&inst, s)))
            }
            Family::Instances { template, var, filter } => match match_instance(template, var, s) {
                Some(Some(t)) => match numeral_value(&t) {
                    Some(n) => *filter == Filter::All || !n.bit(0),
                    None => false,
                },
                _ => false,
            },
            Family::Coherence => {
                let qs = quotes(s);
                qs.len() >= 2
                    && at_most_one_free(qs[0])
                    && at_most_one_free(qs[1])
                    && alpha_eq(&coherence_axiom(qs[0], qs[1]), s)
            }
        }
    }

    /// Certifies, by inspecting the family, that `phi(n̄)` is a member for
    /// every numeral n (`phi` has the single free variable `y`).
    fn covers_numeral_instances(&self, phi: &Formula, y: &Var) -> bool {
        match self {
            Family::Includes(t) => t.all_numeral_instances(phi),
            Family::SmallReflection { theory, phi: body, nat, .. } => {
                alpha_eq(&small_reflection_template(&theory.name, body, y, nat.as_ref()), phi)
            }
            Family::Instances { template, var, filter: Filter::All } => {
                alpha_eq(&substitute(template, var, &Term::Var(y.clone())), phi)
            }
            _ => false,
        }
    }

    /// Presentations this family refers to.
    fn theories(&self) -> Vec<&Arc<Theory>> {
        match self {
            Family::Includes(t) | Family::Rfn(t) | Family::Ufn(t) => vec![t],
            Family::UfnN { theory, .. } | Family::SmallReflection { theory, .. } => vec![theory],
            Family::ScInclusion { base, .. } | Family::Tower { base, .. } => vec![base],
            _ => Vec::new(),
        }
    }
}

fn small_reflection_member(theory: &str, phi: &Formula, var: &Var, s: &Formula) -> bool {
    let Formula::Imp(l, psi) = s else { return false };
    let Formula::Atom(pred, args) = &**l else { return false };
    if pred.strip_prefix(PROOF_PREFIX) != Some(theory) || args.len() != 2 || !args[0].is_closed() {
        return false;
    }
    let b = match &args[1] {
        Term::App(f, xs) if f == SUBST_NUMERAL && xs.len() == 2 => match &xs[0] {
            Term::Quote(q) if **q == *phi => xs[1].clone(),
            _ => return false,
        },
        Term::Quote(theta) => match match_instance(phi, var, psi) {
            Some(Some(b)) if alpha_eq(theta, psi) => b,
            _ => return false,
        },
        _ => return false,
    };
    b.is_closed() && alpha_eq(psi, &instantiate(phi, &b))
}

impl Theory {
    /// A presentation with only finite axioms.
    pub fn finite(name: &str, signature: Signature, axioms: Vec<Formula>) -> Theory {
        Theory { name: name.into(), signature, axioms, schemata: Vec::new(), families: Vec::new(), nat: None }
    }

    pub fn recognize_axiom(&self, s: &Formula) -> bool {
        if !s.is_sentence() || self.signature.check_formula(s).is_err() {
            return false;
        }
        self.axioms.iter().any(|a| alpha_eq(a, s))
            || self.schemata.iter().any(|sc| sc.matches(s))
            || self.families.iter().any(|f| f.recognizes(s))
    }

    /// True iff the presentation certifies that `phi(n̄)` is an axiom for
    /// every numeral n, by family inspection rather than enumeration.
    pub fn all_numeral_instances(&self, phi: &Formula) -> bool {
        let fv = phi.free_vars();
        if fv.len() != 1 {
            return false;
        }
        let y = fv.into_iter().next().unwrap();
        self.families.iter().any(|f| f.covers_numeral_instances(phi, &y))
    }

    /// Finds the presentation called `name` among this one and those it
    /// refers to; tower levels are built on demand.
    pub fn lookup(&self, name: &str) -> Option<Cow<'_, Theory>> {
        if self.name == name {
            return Some(Cow::Borrowed(self));
        }
        for f in &self.families {
            if let Family::Tower { base, .. } = f {
                if let Some(level) = tower_level(&base.name, name) {
                    return Some(Cow::Owned(rfn_tower_presentation(base, &level)));
                }
            }
            for t in f.theories() {
                if let Some(found) = t.lookup(name) {
                    return Some(found);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::arithmetic("a").with_relation(PLACEHOLDER, 1)
    }

    fn induction() -> Schema {
        let t = parse_formula(
            "(-> (and (?P 0) (all x (-> (?P x) (?P (S x))))) (all x (?P x)))",
            &sig(),
        )
        .unwrap();
        Schema::new("ind", t)
    }

    #[test]
    fn schema_instances_recognized() {
        let ind = induction();
        let a = Signature::arithmetic("a");
        let psi = parse_formula("(<= y (+ y z))", &a).unwrap();
        let inst = ind.instance(&psi, &[Var::new("y")]);
        assert!(ind.matches(&inst));
        let other = parse_formula("(all z (-> (= z z) (= z z)))", &a).unwrap();
        assert!(!ind.matches(&other));
    }

    #[test]
    fn tower_names_round_trip() {
        let w = Ordinal::parse("w^(w^1*1)*1 + 2").unwrap();
        let name = tower_name("base", &w);
        assert_eq!(tower_level("base", &name), Some(w));
        assert_eq!(tower_level("base", "base"), Some(Ordinal::zero()));
        assert_eq!(tower_level("base", "other@1"), None);
    }
}
