use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::syntax::{subst_formula, Formula, Signature, Term, Var};

/// A formula with named parameters, used for δ and for relation images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelDef {
    pub params: Vec<Var>,
    pub body: Formula,
}

impl RelDef {
    pub fn new(params: Vec<Var>, body: Formula) -> RelDef {
        RelDef { params, body }
    }

    pub fn apply(&self, args: &[Term]) -> Formula {
        let map: BTreeMap<Var, Term> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        subst_formula(&self.body, &map)
    }
}

/// A relative translation: a domain formula δ and a map from source
/// relations to target formulas. `domain: None` means no relativization;
/// `equality: None` means `=` is translated to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub name: String,
    pub source: Signature,
    pub target: Signature,
    pub domain: Option<RelDef>,
    pub relations: BTreeMap<String, RelDef>,
    pub equality: Option<RelDef>,
}

fn params(n: usize) -> Vec<Var> {
    (0..n).map(|i| Var::new(format!("v{i}"))).collect()
}

impl Translation {
    /// Maps every relation of `sig` to itself without relativizing.
    pub fn identity(sig: &Signature) -> Translation {
        let relations = sig
            .relations
            .iter()
            .map(|(r, a)| {
                let ps = params(*a);
                let body = Formula::atom(r, ps.iter().cloned().map(Term::Var).collect());
                (r.clone(), RelDef::new(ps, body))
            })
            .collect();
        Translation {
            name: format!("id[{}]", sig.name),
            source: sig.clone(),
            target: sig.clone(),
            domain: None,
            relations,
            equality: None,
        }
    }

    /// δ(x) for a term x; `None` when the translation does not relativize.
    pub fn domain_at(&self, t: &Term) -> Option<Formula> {
        self.domain.as_ref().map(|d| d.apply(std::slice::from_ref(t)))
    }

    pub fn relation_image(&self, r: &str, args: &[Term]) -> Result<Formula> {
        if let Some(def) = self.relations.get(r) {
            if def.params.len() != args.len() {
                return Err(Error::Arity(format!("relation {r} mapped with {} parameters", def.params.len())));
            }
            return Ok(def.apply(args));
        }
        match (self.source.relation_arity(r), self.target.relation_arity(r)) {
            (Some(a), Some(b)) if a == args.len() && b == a => Ok(Formula::Atom(r.into(), args.to_vec())),
            (None, _) => Err(Error::SignatureMismatch(format!("relation {r} not in source {}", self.source.name))),
            _ => Err(Error::SignatureMismatch(format!("relation {r} has no image under {}", self.name))),
        }
    }

    fn check_term(&self, t: &Term) -> Result<()> {
        self.source.check_term(t).map_err(Error::SignatureMismatch)?;
        self.target.check_term(t).map_err(Error::SignatureMismatch)
    }

    /// Checks that δ and all relation images are formulas of the target with
    /// matching arities.
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = &self.domain {
            if d.params.len() != 1 {
                return Err(Error::Arity(format!("domain of {} must be unary", self.name)));
            }
            self.target.check_formula(&d.body).map_err(Error::SignatureMismatch)?;
        }
        if let Some(e) = &self.equality {
            if e.params.len() != 2 {
                return Err(Error::Arity(format!("equality image of {} must be binary", self.name)));
            }
            self.target.check_formula(&e.body).map_err(Error::SignatureMismatch)?;
        }
        for (r, def) in &self.relations {
            match self.source.relation_arity(r) {
                Some(a) if a == def.params.len() => {}
                Some(a) => return Err(Error::Arity(format!("{r} has arity {a}, image takes {}", def.params.len()))),
                None => return Err(Error::SignatureMismatch(format!("{r} is not a source relation"))),
            }
            self.target.check_formula(&def.body).map_err(Error::SignatureMismatch)?;
        }
        Ok(())
    }

    /// `f^t`: atoms mapped, connectives kept, quantifiers relativized to δ.
    pub fn translate(&self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Atom(r, args) => {
                args.iter().try_for_each(|a| self.check_term(a))?;
                self.relation_image(r, args)?
            }
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)?;
                match &self.equality {
                    Some(e) => e.apply(&[a.clone(), b.clone()]),
                    None => f.clone(),
                }
            }
            Formula::Not(a) => Formula::not(self.translate(a)?),
            Formula::And(a, b) => Formula::and(self.translate(a)?, self.translate(b)?),
            Formula::Or(a, b) => Formula::or(self.translate(a)?, self.translate(b)?),
            Formula::Imp(a, b) => Formula::imp(self.translate(a)?, self.translate(b)?),
            Formula::All(x, a) => {
                let body = self.translate(a)?;
                let x_t = Term::Var(x.clone());
                match self.domain_at(&x_t) {
                    Some(d) => Formula::all(x.clone(), Formula::imp(d, body)),
                    None => Formula::all(x.clone(), body),
                }
            }
            Formula::Ex(x, a) => {
                let body = self.translate(a)?;
                let x_t = Term::Var(x.clone());
                match self.domain_at(&x_t) {
                    Some(d) => Formula::ex(x.clone(), Formula::and(d, body)),
                    None => Formula::ex(x.clone(), body),
                }
            }
            Formula::BAll(x, t, a) => {
                self.check_term(t)?;
                let body = self.translate(a)?;
                match self.domain_at(&Term::Var(x.clone())) {
                    Some(d) => Formula::ball(x.clone(), t.clone(), Formula::imp(d, body)),
                    None => Formula::ball(x.clone(), t.clone(), body),
                }
            }
            Formula::BEx(x, t, a) => {
                self.check_term(t)?;
                let body = self.translate(a)?;
                match self.domain_at(&Term::Var(x.clone())) {
                    Some(d) => Formula::bex(x.clone(), t.clone(), Formula::and(d, body)),
                    None => Formula::bex(x.clone(), t.clone(), body),
                }
            }
        })
    }
}

pub fn translate_formula(t: &Translation, f: &Formula) -> Result<Formula> {
    t.translate(f)
}

/// `t2 ∘ t1`: first t1, then t2.
pub fn compose(t2: &Translation, t1: &Translation) -> Result<Translation> {
    if t1.target.relations != t2.source.relations || t1.target.arithmetic != t2.source.arithmetic {
        return Err(Error::SignatureMismatch(format!(
            "target of {} is not the source of {}",
            t1.name, t2.name
        )));
    }
    let lift = |d: &RelDef| -> Result<RelDef> { Ok(RelDef::new(d.params.clone(), t2.translate(&d.body)?)) };
    let domain = match (&t2.domain, &t1.domain) {
        (None, None) => None,
        (Some(d2), None) => Some(d2.clone()),
        (d2, Some(d1)) => {
            let inner = lift(d1)?;
            Some(match d2 {
                None => inner,
                Some(d2) => {
                    let x = Term::Var(inner.params[0].clone());
                    RelDef::new(inner.params.clone(), Formula::and(d2.apply(std::slice::from_ref(&x)), inner.body))
                }
            })
        }
    };
    let relations = t1
        .source
        .relations
        .iter()
        .map(|(r, a)| {
            let ps = params(*a);
            let args: Vec<Term> = ps.iter().cloned().map(Term::Var).collect();
            let body = t2.translate(&t1.relation_image(r, &args)?)?;
            Ok((r.clone(), RelDef::new(ps, body)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let equality = match &t1.equality {
        Some(e) => Some(lift(e)?),
        None => t2.equality.clone(),
    };
    Ok(Translation {
        name: format!("{}.{}", t2.name, t1.name),
        source: t1.source.clone(),
        target: t2.target.clone(),
        domain,
        relations,
        equality,
    })
}

/// Normal form used to compare translations: conjunctions re-associated to
/// the right and `(A ∧ B) → C` curried to `A → (B → C)`.
pub fn normal_form(f: &Formula) -> Formula {
    fn conjuncts(f: &Formula, out: &mut Vec<Formula>) {
        match f {
            Formula::And(a, b) => {
                conjuncts(a, out);
                conjuncts(b, out);
            }
            other => out.push(normal_form(other)),
        }
    }
    match f {
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(normal_form(a)),
        Formula::And(..) => {
            let mut parts = Vec::new();
            conjuncts(f, &mut parts);
            Formula::conj(parts).expect("nonempty")
        }
        Formula::Or(a, b) => Formula::or(normal_form(a), normal_form(b)),
        Formula::Imp(a, b) => {
            let mut hyps = Vec::new();
            conjuncts(a, &mut hyps);
            Formula::imps(hyps, normal_form(b))
        }
        Formula::All(x, a) => Formula::all(x.clone(), normal_form(a)),
        Formula::Ex(x, a) => Formula::ex(x.clone(), normal_form(a)),
        Formula::BAll(x, t, a) => Formula::ball(x.clone(), t.clone(), normal_form(a)),
        Formula::BEx(x, t, a) => Formula::bex(x.clone(), t.clone(), normal_form(a)),
    }
}
