//! First-order terms and formulas, signatures, substitution and the
//! bounded-quantifier classification.

mod classify;
mod numeral;
mod subst;
mod text;

use std::fmt;

pub use classify::{classify_formula, BoundedClass};
pub use numeral::{numeral, numeral_u64, numeral_value};
pub use subst::{alpha_eq, alpha_key, fresh_var, replace_atoms, subst_formula, subst_term, substitute};
pub use subst::{all_vars, match_instance, term_vars};
pub use text::{parse_formula, parse_formula_lenient, parse_formula_lenient_sexp, parse_formula_sexp, parse_term_lenient_sexp, parse_term, parse_term_sexp, print_formula};

/// A variable: an identifier plus a serial. Serial 0 prints as the bare name,
/// any other serial as `name.serial`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub serial: u32,
}

impl Var {
    pub fn new(name: impl Into<String>) -> Var {
        Var { name: name.into(), serial: 0 }
    }

    pub fn with_serial(name: impl Into<String>, serial: u32) -> Var {
        Var { name: name.into(), serial }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.serial == 0 {
            f.write_str(&self.name)
        } else {
            write!(f, "{}.{}", self.name, self.serial)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(String),
    App(String, Vec<Term>),
    /// Gödel quotation: a closed term denoting the code of the quoted formula.
    Quote(Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn zero() -> Term {
        Term::Const("0".into())
    }

    pub fn succ(t: Term) -> Term {
        Term::App("S".into(), vec![t])
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    pub fn quote(f: Formula) -> Term {
        Term::Quote(Box::new(f))
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Quote(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn free_var_set(&self) -> std::collections::BTreeSet<Var> {
        let mut out = std::collections::HashSet::new();
        subst::term_vars(self, &mut out);
        out.into_iter().collect()
    }

    /// Number of function/constant/variable occurrences.
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Quote(f) => 1 + f.symbol_count(),
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    All(Var, Box<Formula>),
    Ex(Var, Box<Formula>),
    /// `∀x ≤ t. φ`; the bound `t` lies outside the scope of `x`.
    BAll(Var, Term, Box<Formula>),
    BEx(Var, Term, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `a ↔ b`, written as the conjunction of both implications.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn all(v: Var, f: Formula) -> Formula {
        Formula::All(v, Box::new(f))
    }

    pub fn ex(v: Var, f: Formula) -> Formula {
        Formula::Ex(v, Box::new(f))
    }

    pub fn ball(v: Var, bound: Term, f: Formula) -> Formula {
        Formula::BAll(v, bound, Box::new(f))
    }

    pub fn bex(v: Var, bound: Term, f: Formula) -> Formula {
        Formula::BEx(v, bound, Box::new(f))
    }

    /// Right-nested conjunction; `None` for an empty list.
    pub fn conj(parts: Vec<Formula>) -> Option<Formula> {
        let mut iter = parts.into_iter().rev();
        let last = iter.next()?;
        Some(iter.fold(last, |acc, f| Formula::and(f, acc)))
    }

    /// Right-nested disjunction; `None` for an empty list.
    pub fn disj(parts: Vec<Formula>) -> Option<Formula> {
        let mut iter = parts.into_iter().rev();
        let last = iter.next()?;
        Some(iter.fold(last, |acc, f| Formula::or(f, acc)))
    }

    /// `h1 → (h2 → … → c)`.
    pub fn imps(hyps: Vec<Formula>, concl: Formula) -> Formula {
        hyps.into_iter().rev().fold(concl, |acc, h| Formula::imp(h, acc))
    }

    /// Universal closure over `vars`, outermost first.
    pub fn all_many(vars: &[Var], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::all(v.clone(), acc))
    }

    pub fn free_vars(&self) -> std::collections::BTreeSet<Var> {
        subst::free_vars(self)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Universal closure over free variables in sorted order.
    pub fn closure(&self) -> Formula {
        let vars: Vec<Var> = self.free_vars().into_iter().collect();
        Formula::all_many(&vars, self.clone())
    }

    pub fn symbol_count(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
            Formula::Eq(a, b) => 1 + a.symbol_count() + b.symbol_count(),
            Formula::Not(a) => 1 + a.symbol_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.symbol_count() + b.symbol_count()
            }
            Formula::All(_, a) | Formula::Ex(_, a) => 2 + a.symbol_count(),
            Formula::BAll(_, t, a) | Formula::BEx(_, t, a) => {
                2 + t.symbol_count() + a.symbol_count()
            }
        }
    }

    /// True if the predicate symbol `pred` occurs anywhere outside quotations.
    pub fn mentions_predicate(&self, pred: &str) -> bool {
        match self {
            Formula::Atom(p, _) => p == pred,
            Formula::Eq(..) => false,
            Formula::Not(a) => a.mentions_predicate(pred),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.mentions_predicate(pred) || b.mentions_predicate(pred)
            }
            Formula::All(_, a) | Formula::Ex(_, a) | Formula::BAll(_, _, a) | Formula::BEx(_, _, a) => {
                a.mentions_predicate(pred)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => f.write_str(c),
            Term::App(g, args) => {
                write!(f, "({g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Term::Quote(q) => write!(f, "(quote {q})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) => {
                if args.is_empty() {
                    return f.write_str(p);
                }
                write!(f, "({p}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Imp(a, b) => write!(f, "(-> {a} {b})"),
            Formula::All(v, a) => write!(f, "(all {v} {a})"),
            Formula::Ex(v, a) => write!(f, "(ex {v} {a})"),
            Formula::BAll(v, t, a) => write!(f, "(ball {v} {t} {a})"),
            Formula::BEx(v, t, a) => write!(f, "(bex {v} {t} {a})"),
        }
    }
}

/// Arity of a function symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Fixed(usize),
    /// At least this many arguments.
    AtLeast(usize),
}

impl Arity {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Arity::Fixed(k) => k == n,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

/// Symbols of the bounded-arithmetic profile.
pub const ARITH_FUNCTIONS: &[(&str, usize)] =
    &[("S", 1), ("+", 2), ("*", 2), ("len", 1), ("#", 2), ("half", 1)];
/// Coding functions available with the arithmetic profile. `sbn` is variadic.
pub const CODING_FUNCTIONS: &[(&str, usize)] = &[("pair", 2), ("fst", 1), ("snd", 1)];
pub const SUBST_NUMERAL: &str = "sbn";
pub const LEQ: &str = "<=";
pub const TRUTH: &str = "T";
pub const COMMIT_I: &str = "I";
pub const COMMIT_J: &str = "J";
pub const PROOF_PREFIX: &str = "Proof:";
pub const AXIOM_PREFIX: &str = "Ax:";

pub fn proof_predicate(theory: &str) -> String {
    format!("{PROOF_PREFIX}{theory}")
}

pub fn axiom_predicate(theory: &str) -> String {
    format!("{AXIOM_PREFIX}{theory}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub name: String,
    pub relations: Vec<(String, usize)>,
    pub functions: Vec<(String, usize)>,
    pub constants: Vec<String>,
    pub arithmetic: bool,
    pub truth: bool,
    pub commitment: bool,
}

impl Signature {
    pub fn relational(name: &str, relations: &[(&str, usize)]) -> Signature {
        Signature {
            name: name.into(),
            relations: relations.iter().map(|(r, a)| (r.to_string(), *a)).collect(),
            functions: Vec::new(),
            constants: Vec::new(),
            arithmetic: false,
            truth: false,
            commitment: false,
        }
    }

    /// The arithmetic profile: 0, S, +, ×, ≤, |·|, #, ⌊x/2⌋ plus coding symbols.
    pub fn arithmetic(name: &str) -> Signature {
        Signature { arithmetic: true, ..Signature::relational(name, &[]) }
    }

    pub fn with_truth(mut self) -> Signature {
        self.truth = true;
        self
    }

    pub fn with_commitment(mut self) -> Signature {
        self.commitment = true;
        self
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Signature {
        self.relations.push((name.into(), arity));
        self
    }

    pub fn is_constant(&self, name: &str) -> bool {
        (self.arithmetic && name == "0") || self.constants.iter().any(|c| c == name)
    }

    pub fn function_arity(&self, name: &str) -> Option<Arity> {
        if self.arithmetic {
            if let Some((_, a)) = ARITH_FUNCTIONS.iter().chain(CODING_FUNCTIONS).find(|(f, _)| *f == name) {
                return Some(Arity::Fixed(*a));
            }
            if name == SUBST_NUMERAL {
                return Some(Arity::AtLeast(1));
            }
        }
        self.functions.iter().find(|(f, _)| f == name).map(|(_, a)| Arity::Fixed(*a))
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        if self.arithmetic {
            if name == LEQ {
                return Some(2);
            }
            if name.len() > PROOF_PREFIX.len() && name.starts_with(PROOF_PREFIX) {
                return Some(2);
            }
            if name.len() > AXIOM_PREFIX.len() && name.starts_with(AXIOM_PREFIX) {
                return Some(1);
            }
        }
        if self.truth && name == TRUTH {
            return Some(1);
        }
        if self.commitment && name == COMMIT_I {
            return Some(1);
        }
        if self.commitment && name == COMMIT_J {
            return Some(2);
        }
        self.relations.iter().find(|(r, _)| r == name).map(|(_, a)| *a)
    }

    /// Every symbol name declared explicitly or by profile flags, with duplicates.
    fn declared_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        names.extend(self.relations.iter().map(|(r, _)| r.clone()));
        names.extend(self.functions.iter().map(|(f, _)| f.clone()));
        names.extend(self.constants.iter().cloned());
        if self.arithmetic {
            names.push("0".into());
            names.push(LEQ.into());
            names.push(SUBST_NUMERAL.into());
            names.extend(ARITH_FUNCTIONS.iter().chain(CODING_FUNCTIONS).map(|(f, _)| f.to_string()));
        }
        if self.truth {
            names.push(TRUTH.into());
        }
        if self.commitment {
            names.push(COMMIT_I.into());
            names.push(COMMIT_J.into());
        }
        names
    }

    /// Checks that symbol names are pairwise distinct.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = std::collections::HashSet::new();
        for n in self.declared_names() {
            if !seen.insert(n.clone()) {
                return Err(format!("symbol {n} declared twice in signature {}", self.name));
            }
        }
        Ok(())
    }

    /// Smallest signature containing both.
    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        for r in &other.relations {
            if !out.relations.contains(r) {
                out.relations.push(r.clone());
            }
        }
        for f in &other.functions {
            if !out.functions.contains(f) {
                out.functions.push(f.clone());
            }
        }
        for c in &other.constants {
            if !out.constants.contains(c) {
                out.constants.push(c.clone());
            }
        }
        out.arithmetic |= other.arithmetic;
        out.truth |= other.truth;
        out.commitment |= other.commitment;
        out
    }

    /// Checks every symbol of `f` against this signature.
    pub fn check_formula(&self, f: &Formula) -> Result<(), String> {
        match f {
            Formula::Atom(p, args) => {
                match self.relation_arity(p) {
                    Some(a) if a == args.len() => {}
                    Some(a) => return Err(format!("relation {p} expects {a} arguments, got {}", args.len())),
                    None => return Err(format!("unknown relation {p}")),
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Not(a) => self.check_formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::All(_, a) | Formula::Ex(_, a) => self.check_formula(a),
            Formula::BAll(_, t, a) | Formula::BEx(_, t, a) => {
                if !self.arithmetic {
                    return Err("bounded quantifier outside arithmetic profile".into());
                }
                self.check_term(t)?;
                self.check_formula(a)
            }
        }
    }

    pub fn check_term(&self, t: &Term) -> Result<(), String> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) if self.is_constant(c) => Ok(()),
            Term::Const(c) => Err(format!("unknown constant {c}")),
            Term::App(g, args) => {
                match self.function_arity(g) {
                    Some(a) if a.admits(args.len()) => {}
                    Some(_) => return Err(format!("function {g} applied to {} arguments", args.len())),
                    None => return Err(format!("unknown function {g}")),
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            // quoted formulas are data; their symbols are checked when decoded
            Term::Quote(_) => {
                if self.arithmetic {
                    Ok(())
                } else {
                    Err("quotation outside arithmetic profile".into())
                }
            }
        }
    }
}
