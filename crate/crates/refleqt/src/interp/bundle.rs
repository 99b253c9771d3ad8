use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::translation::{compose, RelDef, Translation};
use crate::calculus::{check_proof, Proof, Theory, Verdict};
use crate::error::{Error, Result};
use crate::schemas::pick_var;
use crate::syntax::{all_vars, alpha_eq, Formula, Signature, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleKind {
    Identity,
    Isomorphism,
    Retract,
    BiInterpretation,
    Adequacy,
}

/// Translations, witness formulas and discharge proofs for one
/// equivalence claim. Expected shapes, by kind:
/// - identity: translations `[τ, σ]` with the same source and target;
/// - isomorphism: `[τ, σ]` and one witness `I(x, y)`;
/// - retract: `[τ: T→W, σ: W→T]` and a witness between `σ∘τ` and `id_T`;
/// - bi-interpretation: as retract, plus a witness between `id_W` and `τ∘σ`;
/// - adequacy: `[N, M, F, G]` with `N: S→τ`, `M: S→τ′`, `F: τ→τ′`, `G: τ′→τ`.
#[derive(Clone, Debug)]
pub struct WitnessBundle {
    pub kind: BundleKind,
    pub translations: Vec<Translation>,
    pub witnesses: Vec<RelDef>,
    /// Discharge proofs keyed by obligation label.
    pub discharges: BTreeMap<String, Proof>,
}

/// A sentence to be proved in the theory over signature `host`.
#[derive(Clone, Debug, PartialEq)]
pub struct Obligation {
    pub label: String,
    pub host: String,
    pub sentence: Formula,
}

struct Names {
    avoid: HashSet<Var>,
}

impl Names {
    fn new(defs: &[&RelDef]) -> Names {
        let mut avoid = HashSet::new();
        for d in defs {
            all_vars(&d.body, &mut avoid);
            avoid.extend(d.params.iter().cloned());
        }
        Names { avoid }
    }

    fn var(&mut self, base: &str) -> Var {
        let v = pick_var(base, &self.avoid);
        self.avoid.insert(v.clone());
        v
    }

    fn vars(&mut self, base: &str, n: usize) -> Vec<Var> {
        (0..n).map(|i| self.var(&format!("{base}{}", i + 1))).collect()
    }
}

fn tv(v: &Var) -> Term {
    Term::Var(v.clone())
}

fn domain_def(t: &Translation) -> RelDef {
    t.domain.clone().unwrap_or_else(|| {
        let x = Var::new("x");
        RelDef::new(vec![x.clone()], Formula::eq(tv(&x), tv(&x)))
    })
}

fn equality_def(t: &Translation) -> RelDef {
    t.equality.clone().unwrap_or_else(|| {
        let (x, y) = (Var::new("x"), Var::new("y"));
        RelDef::new(vec![x.clone(), y.clone()], Formula::eq(tv(&x), tv(&y)))
    })
}

fn image(t: &Translation, r: &str, args: &[Var]) -> Result<Formula> {
    t.relation_image(r, &args.iter().map(tv).collect::<Vec<_>>())
}

fn same_shape(a: &Signature, b: &Signature) -> bool {
    a.relations == b.relations && a.arithmetic == b.arithmetic
}

fn ill_typed(msg: impl Into<String>) -> Error {
    Error::IllTypedBundle(msg.into())
}

/// Obligations that τ and σ (both T → W) are identical.
pub fn identity_obligations(tau: &Translation, sigma: &Translation) -> Result<Vec<Obligation>> {
    if !same_shape(&tau.source, &sigma.source) || !same_shape(&tau.target, &sigma.target) {
        return Err(ill_typed(format!("{} and {} differ in source or target", tau.name, sigma.name)));
    }
    let (dt, ds) = (domain_def(tau), domain_def(sigma));
    let mut names = Names::new(&[&dt, &ds]);
    let host = tau.target.name.clone();
    let x = names.var("x");
    let mut out = vec![Obligation {
        label: "domain".into(),
        host: host.clone(),
        sentence: Formula::all(x.clone(), Formula::iff(dt.apply(&[tv(&x)]), ds.apply(&[tv(&x)]))),
    }];
    for (r, arity) in &tau.source.relations {
        let xs = names.vars("x", *arity);
        let guard = Formula::conj(xs.iter().map(|v| dt.apply(&[tv(v)])).collect());
        let body = Formula::iff(image(tau, r, &xs)?, image(sigma, r, &xs)?);
        let body = match guard {
            Some(g) => Formula::imp(g, body),
            None => body,
        };
        out.push(Obligation { label: format!("rel {r}"), host: host.clone(), sentence: Formula::all_many(&xs, body) });
    }
    Ok(out)
}

/// The isomorphism conditions (1)–(7) for `I` between τ and σ (both
/// T → W), with (7) expanded per relation symbol of T.
pub fn isomorphism_obligations(tau: &Translation, sigma: &Translation, i: &RelDef) -> Result<Vec<Obligation>> {
    if !same_shape(&tau.source, &sigma.source) || !same_shape(&tau.target, &sigma.target) {
        return Err(ill_typed(format!("{} and {} differ in source or target", tau.name, sigma.name)));
    }
    if i.params.len() != 2 {
        return Err(ill_typed("an isomorphism witness takes exactly two arguments"));
    }
    let (dt, ds, et, es) = (domain_def(tau), domain_def(sigma), equality_def(tau), equality_def(sigma));
    let mut names = Names::new(&[&dt, &ds, &et, &es, i]);
    let host = tau.target.name.clone();
    let (x, y, u, v) = (names.var("x"), names.var("y"), names.var("u"), names.var("v"));
    let iv = |a: &Var, b: &Var| i.apply(&[tv(a), tv(b)]);
    let dtv = |a: &Var| dt.apply(&[tv(a)]);
    let dsv = |a: &Var| ds.apply(&[tv(a)]);
    let mut conds = vec![
        Formula::all_many(&[x.clone(), y.clone()], Formula::imp(iv(&x, &y), Formula::and(dtv(&x), dsv(&y)))),
        Formula::all(
            x.clone(),
            Formula::imp(dtv(&x), Formula::ex(y.clone(), Formula::and(dsv(&y), iv(&x, &y)))),
        ),
        Formula::all(
            y.clone(),
            Formula::imp(dsv(&y), Formula::ex(x.clone(), Formula::and(dtv(&x), iv(&x, &y)))),
        ),
        Formula::all_many(
            &[x.clone(), y.clone(), u.clone(), v.clone()],
            Formula::imp(
                Formula::conj(vec![iv(&x, &y), et.apply(&[tv(&x), tv(&u)]), es.apply(&[tv(&y), tv(&v)])]).unwrap(),
                iv(&u, &v),
            ),
        ),
        Formula::all_many(
            &[x.clone(), y.clone(), v.clone()],
            Formula::imp(Formula::and(iv(&x, &y), iv(&x, &v)), es.apply(&[tv(&y), tv(&v)])),
        ),
        Formula::all_many(
            &[x.clone(), y.clone(), u.clone()],
            Formula::imp(Formula::and(iv(&x, &y), iv(&u, &y)), et.apply(&[tv(&x), tv(&u)])),
        ),
    ];
    let mut labels: Vec<String> = (1..=6).map(|k| format!("({k})")).collect();
    for (r, arity) in &tau.source.relations {
        let xs = names.vars("x", *arity);
        let ys = names.vars("y", *arity);
        let pairs = Formula::conj(xs.iter().zip(&ys).map(|(a, b)| iv(a, b)).collect());
        let body = Formula::iff(image(tau, r, &xs)?, image(sigma, r, &ys)?);
        let body = match pairs {
            Some(p) => Formula::imp(p, body),
            None => body,
        };
        let mut all = xs.clone();
        all.extend(ys);
        conds.push(Formula::all_many(&all, body));
        labels.push(format!("(7) {r}"));
    }
    Ok(labels
        .into_iter()
        .zip(conds)
        .map(|(label, sentence)| Obligation { label, host: host.clone(), sentence })
        .collect())
}

fn relabel(prefix: &str, obs: Vec<Obligation>) -> Vec<Obligation> {
    obs.into_iter().map(|o| Obligation { label: format!("{prefix} {}", o.label), ..o }).collect()
}

fn retract_obligations(tau: &Translation, sigma: &Translation, i: &RelDef) -> Result<Vec<Obligation>> {
    let round = compose(sigma, tau)?;
    isomorphism_obligations(&round, &Translation::identity(&tau.source), i)
}

/// Every obligation the bundle's kind generates.
pub fn witness_obligations(b: &WitnessBundle) -> Result<Vec<Obligation>> {
    let ts = &b.translations;
    let need = |n: usize, w: usize| -> Result<()> {
        if ts.len() != n || b.witnesses.len() != w {
            return Err(ill_typed(format!(
                "{:?} bundle needs {n} translations and {w} witnesses, found {} and {}",
                b.kind,
                ts.len(),
                b.witnesses.len()
            )));
        }
        Ok(())
    };
    match b.kind {
        BundleKind::Identity => {
            need(2, 0)?;
            identity_obligations(&ts[0], &ts[1])
        }
        BundleKind::Isomorphism => {
            need(2, 1)?;
            isomorphism_obligations(&ts[0], &ts[1], &b.witnesses[0])
        }
        BundleKind::Retract => {
            need(2, 1)?;
            retract_obligations(&ts[0], &ts[1], &b.witnesses[0])
        }
        BundleKind::BiInterpretation => {
            need(2, 2)?;
            let mut out = relabel("source:", retract_obligations(&ts[0], &ts[1], &b.witnesses[0])?);
            let back = compose(&ts[0], &ts[1])?;
            let id_w = Translation::identity(&ts[1].source);
            out.extend(relabel("target:", isomorphism_obligations(&id_w, &back, &b.witnesses[1])?));
            Ok(out)
        }
        BundleKind::Adequacy => {
            need(4, 0)?;
            let (n, m, f, g) = (&ts[0], &ts[1], &ts[2], &ts[3]);
            let mut out = relabel("F.N=M:", identity_obligations(&compose(f, n)?, m)?);
            out.extend(relabel("G.M=N:", identity_obligations(&compose(g, m)?, n)?));
            Ok(out)
        }
    }
}

/// Checks that every obligation has a discharge proof of exactly that
/// sentence which checks in the host presentation over its signature.
/// The failing step names the first obligation without one.
pub fn check_bundle(b: &WitnessBundle, hosts: &[&Theory]) -> Verdict {
    let obs = match witness_obligations(b) {
        Ok(o) => o,
        Err(e) => return Verdict::reject(Vec::new(), e.to_string()),
    };
    for (k, ob) in obs.iter().enumerate() {
        let Some(host) = hosts.iter().find(|h| h.signature.name == ob.host).or(hosts.first()) else {
            return Verdict::reject(vec![k], format!("no host for obligation {}", ob.label));
        };
        let Some(p) = b.discharges.get(&ob.label) else {
            return Verdict::reject(vec![k], format!("obligation {} has no discharge proof", ob.label));
        };
        if !alpha_eq(&p.conclusion, &ob.sentence) {
            return Verdict::reject(vec![k], format!("discharge for {} proves a different sentence", ob.label));
        }
        let v = check_proof(p, host);
        if !v.accepted {
            return Verdict::reject(vec![k], format!("discharge for {} fails: {v}", ob.label));
        }
    }
    Verdict::accept()
}
