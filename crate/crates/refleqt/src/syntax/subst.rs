use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write;

use super::{Formula, Term, Var};

pub(super) fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

fn term_free(t: &Term, bound: &[Var], out: &mut BTreeSet<Var>) {
    match t {
        Term::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        Term::Const(_) | Term::Quote(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| term_free(a, bound, out)),
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Atom(_, args) => args.iter().for_each(|a| term_free(a, bound, out)),
        Formula::Eq(a, b) => {
            term_free(a, bound, out);
            term_free(b, bound, out);
        }
        Formula::Not(a) => collect_free(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::All(v, a) | Formula::Ex(v, a) => {
            bound.push(v.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
        Formula::BAll(v, t, a) | Formula::BEx(v, t, a) => {
            term_free(t, bound, out);
            bound.push(v.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
    }
}

pub fn term_vars(t: &Term, out: &mut HashSet<Var>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Const(_) | Term::Quote(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| term_vars(a, out)),
    }
}

/// Every variable occurring in `f`, free or bound.
pub fn all_vars(f: &Formula, out: &mut HashSet<Var>) {
    match f {
        Formula::Atom(_, args) => args.iter().for_each(|a| term_vars(a, out)),
        Formula::Eq(a, b) => {
            term_vars(a, out);
            term_vars(b, out);
        }
        Formula::Not(a) => all_vars(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            all_vars(a, out);
            all_vars(b, out);
        }
        Formula::All(v, a) | Formula::Ex(v, a) => {
            out.insert(v.clone());
            all_vars(a, out);
        }
        Formula::BAll(v, t, a) | Formula::BEx(v, t, a) => {
            out.insert(v.clone());
            term_vars(t, out);
            all_vars(a, out);
        }
    }
}

/// Smallest-serial variant of `base` not in `avoid`.
pub fn fresh_var(base: &Var, avoid: &HashSet<Var>) -> Var {
    let mut serial = base.serial.max(1);
    loop {
        let v = Var::with_serial(base.name.clone(), serial);
        if !avoid.contains(&v) {
            return v;
        }
        serial += 1;
    }
}

pub fn subst_term(t: &Term, map: &BTreeMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) | Term::Quote(_) => t.clone(),
        Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| subst_term(a, map)).collect()),
    }
}

/// Simultaneous capture-avoiding substitution. Bound variables are renamed
/// only when a substituted term would otherwise be captured.
pub fn subst_formula(f: &Formula, map: &BTreeMap<Var, Term>) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| subst_term(a, map)).collect()),
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, map), subst_term(b, map)),
        Formula::Not(a) => Formula::not(subst_formula(a, map)),
        Formula::And(a, b) => Formula::and(subst_formula(a, map), subst_formula(b, map)),
        Formula::Or(a, b) => Formula::or(subst_formula(a, map), subst_formula(b, map)),
        Formula::Imp(a, b) => Formula::imp(subst_formula(a, map), subst_formula(b, map)),
        Formula::All(v, a) => {
            let (v, a) = subst_binder(v, a, map);
            Formula::All(v, Box::new(a))
        }
        Formula::Ex(v, a) => {
            let (v, a) = subst_binder(v, a, map);
            Formula::Ex(v, Box::new(a))
        }
        Formula::BAll(v, t, a) => {
            let t = subst_term(t, map);
            let (v, a) = subst_binder(v, a, map);
            Formula::BAll(v, t, Box::new(a))
        }
        Formula::BEx(v, t, a) => {
            let t = subst_term(t, map);
            let (v, a) = subst_binder(v, a, map);
            Formula::BEx(v, t, Box::new(a))
        }
    }
}

fn subst_binder(v: &Var, body: &Formula, map: &BTreeMap<Var, Term>) -> (Var, Formula) {
    let body_free = free_vars(body);
    let mut inner: BTreeMap<Var, Term> = map
        .iter()
        .filter(|(k, _)| *k != v && body_free.contains(*k))
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect();
    if inner.is_empty() {
        return (v.clone(), body.clone());
    }
    let mut range_vars = HashSet::new();
    inner.values().for_each(|t| term_vars(t, &mut range_vars));
    if !range_vars.contains(v) {
        return (v.clone(), subst_formula(body, &inner));
    }
    let mut avoid = range_vars;
    all_vars(body, &mut avoid);
    avoid.extend(inner.keys().cloned());
    let fresh = fresh_var(v, &avoid);
    inner.insert(v.clone(), Term::Var(fresh.clone()));
    (fresh, subst_formula(body, &inner))
}

/// `f[v := t]`, capture-avoiding.
pub fn substitute(f: &Formula, v: &Var, t: &Term) -> Formula {
    let mut map = BTreeMap::new();
    map.insert(v.clone(), t.clone());
    subst_formula(f, &map)
}

/// Replaces every atom `pred(args)` by `body[params := args]`.
pub fn replace_atoms(f: &Formula, pred: &str, params: &[Var], body: &Formula) -> Formula {
    let rec = |g: &Formula| replace_atoms(g, pred, params, body);
    match f {
        Formula::Atom(p, args) if p == pred && args.len() == params.len() => {
            let map: BTreeMap<Var, Term> = params.iter().cloned().zip(args.iter().cloned()).collect();
            subst_formula(body, &map)
        }
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => Formula::not(rec(a)),
        Formula::And(a, b) => Formula::and(rec(a), rec(b)),
        Formula::Or(a, b) => Formula::or(rec(a), rec(b)),
        Formula::Imp(a, b) => Formula::imp(rec(a), rec(b)),
        Formula::All(v, a) => rebind(v, a, body, params, |v, a| Formula::All(v, Box::new(rec(&a)))),
        Formula::Ex(v, a) => rebind(v, a, body, params, |v, a| Formula::Ex(v, Box::new(rec(&a)))),
        Formula::BAll(v, t, a) => {
            rebind(v, a, body, params, |v, a| Formula::BAll(v, t.clone(), Box::new(rec(&a))))
        }
        Formula::BEx(v, t, a) => {
            rebind(v, a, body, params, |v, a| Formula::BEx(v, t.clone(), Box::new(rec(&a))))
        }
    }
}

/// Renames binder `v` away from the free variables of the replacement body.
fn rebind(
    v: &Var,
    a: &Formula,
    body: &Formula,
    params: &[Var],
    k: impl FnOnce(Var, Formula) -> Formula,
) -> Formula {
    let body_free: BTreeSet<Var> = free_vars(body).into_iter().filter(|x| !params.contains(x)).collect();
    if !body_free.contains(v) {
        return k(v.clone(), a.clone());
    }
    let mut avoid: HashSet<Var> = body_free.into_iter().collect();
    all_vars(a, &mut avoid);
    let fresh = fresh_var(v, &avoid);
    let renamed = substitute(a, v, &Term::Var(fresh.clone()));
    k(fresh, renamed)
}

/// Structural equality up to renaming of bound variables. Quotations are
/// compared literally.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha_formula(a, b, &mut Vec::new(), &mut Vec::new())
}

fn var_eq(x: &Var, y: &Var, l: &[Var], r: &[Var]) -> bool {
    let i = l.iter().rposition(|v| v == x);
    let j = r.iter().rposition(|v| v == y);
    match (i, j) {
        (Some(i), Some(j)) => i == j,
        (None, None) => x == y,
        _ => false,
    }
}

fn alpha_term(a: &Term, b: &Term, l: &[Var], r: &[Var]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => var_eq(x, y, l, r),
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Quote(x), Term::Quote(y)) => x == y,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, l, r))
        }
        _ => false,
    }
}

fn alpha_formula(a: &Formula, b: &Formula, l: &mut Vec<Var>, r: &mut Vec<Var>) -> bool {
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, l, r))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => alpha_term(a1, b1, l, r) && alpha_term(a2, b2, l, r),
        (Formula::Not(x), Formula::Not(y)) => alpha_formula(x, y, l, r),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => {
            alpha_formula(a1, b1, l, r) && alpha_formula(a2, b2, l, r)
        }
        (Formula::All(x, fa), Formula::All(y, fb)) | (Formula::Ex(x, fa), Formula::Ex(y, fb)) => {
            l.push(x.clone());
            r.push(y.clone());
            let ok = alpha_formula(fa, fb, l, r);
            l.pop();
            r.pop();
            ok
        }
        (Formula::BAll(x, s, fa), Formula::BAll(y, t, fb)) | (Formula::BEx(x, s, fa), Formula::BEx(y, t, fb)) => {
            if !alpha_term(s, t, l, r) {
                return false;
            }
            l.push(x.clone());
            r.push(y.clone());
            let ok = alpha_formula(fa, fb, l, r);
            l.pop();
            r.pop();
            ok
        }
        _ => false,
    }
}

/// Finds `t` with `pattern[v := t] ≡α target`, matching free occurrences
/// of `v`. Returns `Some(None)` when `v` does not occur free and the two are
/// α-equivalent; `None` when they do not match. Matched terms may not
/// mention variables bound in `target`.
pub fn match_instance(pattern: &Formula, v: &Var, target: &Formula) -> Option<Option<Term>> {
    let mut m = Matcher { v, binding: None };
    if m.formula(pattern, target, &mut Vec::new(), &mut Vec::new()) {
        Some(m.binding)
    } else {
        None
    }
}

struct Matcher<'a> {
    v: &'a Var,
    binding: Option<Term>,
}

impl Matcher<'_> {
    fn term(&mut self, a: &Term, b: &Term, l: &[Var], r: &[Var]) -> bool {
        match (a, b) {
            (Term::Var(x), _) if x == self.v && !l.contains(x) => {
                let mut vs = HashSet::new();
                term_vars(b, &mut vs);
                if vs.iter().any(|w| r.contains(w)) {
                    return false;
                }
                match &self.binding {
                    Some(t) => t == b,
                    None => {
                        self.binding = Some(b.clone());
                        true
                    }
                }
            }
            (Term::Var(x), Term::Var(y)) => var_eq(x, y, l, r),
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Quote(x), Term::Quote(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.term(x, y, l, r))
            }
            _ => false,
        }
    }

    fn formula(&mut self, a: &Formula, b: &Formula, l: &mut Vec<Var>, r: &mut Vec<Var>) -> bool {
        match (a, b) {
            (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
                p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.term(x, y, l, r))
            }
            (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => self.term(a1, b1, l, r) && self.term(a2, b2, l, r),
            (Formula::Not(x), Formula::Not(y)) => self.formula(x, y, l, r),
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => {
                self.formula(a1, b1, l, r) && self.formula(a2, b2, l, r)
            }
            (Formula::All(x, fa), Formula::All(y, fb)) | (Formula::Ex(x, fa), Formula::Ex(y, fb)) => {
                l.push(x.clone());
                r.push(y.clone());
                let ok = self.formula(fa, fb, l, r);
                l.pop();
                r.pop();
                ok
            }
            (Formula::BAll(x, s, fa), Formula::BAll(y, t, fb)) | (Formula::BEx(x, s, fa), Formula::BEx(y, t, fb)) => {
                if !self.term(s, t, l, r) {
                    return false;
                }
                l.push(x.clone());
                r.push(y.clone());
                let ok = self.formula(fa, fb, l, r);
                l.pop();
                r.pop();
                ok
            }
            _ => false,
        }
    }
}

/// Canonical string with bound variables replaced by binder depth; two
/// formulas have equal keys iff they are α-equivalent.
pub fn alpha_key(f: &Formula) -> String {
    let mut out = String::new();
    key_formula(f, &mut Vec::new(), &mut out);
    out
}

fn key_term(t: &Term, bound: &[Var], out: &mut String) {
    match t {
        Term::Var(v) => match bound.iter().rposition(|b| b == v) {
            Some(i) => {
                let _ = write!(out, "#{i}");
            }
            None => {
                let _ = write!(out, "{v}");
            }
        },
        Term::Const(c) => out.push_str(c),
        Term::Quote(q) => {
            let _ = write!(out, "(quote {q})");
        }
        Term::App(g, args) => {
            out.push('(');
            out.push_str(g);
            for a in args {
                out.push(' ');
                key_term(a, bound, out);
            }
            out.push(')');
        }
    }
}

fn key_formula(f: &Formula, bound: &mut Vec<Var>, out: &mut String) {
    match f {
        Formula::Atom(p, args) => {
            out.push('(');
            out.push_str(p);
            for a in args {
                out.push(' ');
                key_term(a, bound, out);
            }
            out.push(')');
        }
        Formula::Eq(a, b) => {
            out.push_str("(= ");
            key_term(a, bound, out);
            out.push(' ');
            key_term(b, bound, out);
            out.push(')');
        }
        Formula::Not(a) => {
            out.push_str("(not ");
            key_formula(a, bound, out);
            out.push(')');
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            out.push_str(match f {
                Formula::And(..) => "(and ",
                Formula::Or(..) => "(or ",
                _ => "(-> ",
            });
            key_formula(a, bound, out);
            out.push(' ');
            key_formula(b, bound, out);
            out.push(')');
        }
        Formula::All(v, a) | Formula::Ex(v, a) => {
            out.push_str(if matches!(f, Formula::All(..)) { "(all " } else { "(ex " });
            bound.push(v.clone());
            key_formula(a, bound, out);
            bound.pop();
            out.push(')');
        }
        Formula::BAll(v, t, a) | Formula::BEx(v, t, a) => {
            out.push_str(if matches!(f, Formula::BAll(..)) { "(ball " } else { "(bex " });
            key_term(t, bound, out);
            out.push(' ');
            bound.push(v.clone());
            key_formula(a, bound, out);
            bound.pop();
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::relational("t", &[("P", 2), ("Q", 1)]).with_relation("P1", 1)
    }

    fn p(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    #[test]
    fn forced_renaming() {
        let f = p("(all y (P x y))");
        let g = substitute(&f, &Var::new("x"), &Term::var("y"));
        assert_eq!(g.to_string(), "(all y.1 (P y y.1))");
    }

    #[test]
    fn closed_term_substitution() {
        let s = Signature::arithmetic("a").with_relation("P1", 1);
        let f = parse_formula("(P1 x)", &s).unwrap();
        let g = substitute(&f, &Var::new("x"), &Term::zero());
        assert_eq!(g.to_string(), "(P1 0)");
    }

    #[test]
    fn bound_occurrence_untouched() {
        let f = p("(all x (P1 x))");
        let g = substitute(&f, &Var::new("x"), &Term::var("t"));
        assert_eq!(g, f);
    }

    #[test]
    fn no_renaming_without_capture() {
        let f = p("(all y (P x y))");
        let g = substitute(&f, &Var::new("x"), &Term::var("z"));
        assert_eq!(g.to_string(), "(all y (P z y))");
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&p("(all x (Q x))"), &p("(all y (Q y))")));
        assert!(!alpha_eq(&p("(all x (Q x))"), &p("(all y (Q x))")));
        assert!(!alpha_eq(&p("(all x (all y (P x y)))"), &p("(all y (all x (P x y)))")));
        assert_eq!(alpha_key(&p("(ex u (P u z))")), alpha_key(&p("(ex w (P w z))")));
    }

    #[test]
    fn atom_replacement_avoids_capture() {
        // replacing Q(t) by ∃x P(x, t) under a binder for x
        let body = p("(ex x (P x z))");
        let f = p("(all x (Q x))");
        let g = replace_atoms(&f, "Q", &[Var::new("z")], &body);
        assert!(alpha_eq(&g, &p("(all w (ex x (P x w)))")));
    }
}
