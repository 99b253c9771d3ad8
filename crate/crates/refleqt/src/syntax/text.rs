use num_bigint::BigUint;

use super::numeral::numeral;
use super::{Formula, Signature, Term, Var};
use crate::error::{ParseError, ParseErrorKind};
use crate::sexp::{read_one, Sexp};

const KEYWORDS: &[&str] = &["=", "not", "and", "or", "->", "iff", "all", "ex", "ball", "bex", "quote"];

/// Identifier with an optional `.serial` suffix.
fn parse_var(s: &str) -> Option<Var> {
    let (name, serial) = match s.split_once('.') {
        Some((n, digits)) => {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            (n, digits.parse().ok()?)
        }
        None => (s, 0),
    };
    let mut chars = name.chars();
    let first = chars.next()?;
    if !(first.is_ascii_alphabetic() || first == '_') {
        return None;
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
        return None;
    }
    if KEYWORDS.contains(&name) {
        return None;
    }
    Some(Var::with_serial(name, serial))
}

struct Reader<'a> {
    sig: &'a Signature,
    /// Accept unknown function heads inside quotations.
    permissive: bool,
}

fn unknown(pos: usize, what: &str) -> ParseError {
    ParseError::new(ParseErrorKind::UnknownSymbol, pos, format!("unknown symbol {what}"))
}

fn arity(pos: usize, msg: String) -> ParseError {
    ParseError::new(ParseErrorKind::Arity, pos, msg)
}

impl Reader<'_> {
    fn term(&self, s: &Sexp) -> Result<Term, ParseError> {
        match s {
            Sexp::Atom { text, pos } => {
                if text.bytes().all(|b| b.is_ascii_digit()) {
                    let n: BigUint = text.parse().map_err(|_| ParseError::lexical(*pos, "bad numeral"))?;
                    return Ok(numeral(&n));
                }
                if self.sig.is_constant(text) {
                    return Ok(Term::Const(text.clone()));
                }
                if let Some(v) = parse_var(text) {
                    return Ok(Term::Var(v));
                }
                Err(unknown(*pos, text))
            }
            Sexp::List { items, pos } => {
                let (head, args) = match items.split_first() {
                    Some((Sexp::Atom { text, .. }, args)) => (text.as_str(), args),
                    _ => return Err(ParseError::malformed(*pos, "term application needs a symbol head")),
                };
                if head == "quote" {
                    if args.len() != 1 {
                        return Err(arity(*pos, "quote takes exactly one formula".into()));
                    }
                    let inner = Reader { sig: self.sig, permissive: true };
                    return Ok(Term::quote(inner.formula(&args[0])?));
                }
                match self.sig.function_arity(head) {
                    Some(a) if a.admits(args.len()) => {}
                    Some(a) => {
                        return Err(arity(*pos, format!("function {head} ({a:?}) given {} arguments", args.len())))
                    }
                    None if self.permissive && !KEYWORDS.contains(&head) && !args.is_empty() => {}
                    None => return Err(unknown(items[0].pos(), head)),
                }
                let args = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App(head.to_string(), args))
            }
        }
    }

    fn binder(&self, s: &Sexp) -> Result<Var, ParseError> {
        match s {
            Sexp::Atom { text, pos } => {
                parse_var(text).ok_or_else(|| ParseError::malformed(*pos, format!("{text} is not a variable")))
            }
            Sexp::List { pos, .. } => Err(ParseError::malformed(*pos, "expected a variable")),
        }
    }

    fn formula(&self, s: &Sexp) -> Result<Formula, ParseError> {
        let (items, pos) = match s {
            Sexp::Atom { text, pos } => {
                return match self.sig.relation_arity(text) {
                    Some(0) => Ok(Formula::Atom(text.clone(), Vec::new())),
                    Some(a) => Err(arity(*pos, format!("relation {text} expects {a} arguments"))),
                    None if self.permissive && parse_var(text).is_some() => {
                        Ok(Formula::Atom(text.clone(), Vec::new()))
                    }
                    None => Err(unknown(*pos, text)),
                };
            }
            Sexp::List { items, pos } => (items, *pos),
        };
        let (head, args) = match items.split_first() {
            Some((Sexp::Atom { text, .. }, args)) => (text.as_str(), args),
            Some(_) => return Err(ParseError::malformed(pos, "formula needs a symbol head")),
            None => return Err(ParseError::malformed(pos, "empty formula")),
        };
        let need = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(arity(pos, format!("{head} takes {n} arguments, got {}", args.len())))
            }
        };
        match head {
            "=" => {
                need(2)?;
                Ok(Formula::eq(self.term(&args[0])?, self.term(&args[1])?))
            }
            "not" => {
                need(1)?;
                Ok(Formula::not(self.formula(&args[0])?))
            }
            "and" | "or" => {
                if args.len() < 2 {
                    return Err(arity(pos, format!("{head} takes at least 2 arguments")));
                }
                let parts = args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(if head == "and" { Formula::conj(parts) } else { Formula::disj(parts) }.unwrap())
            }
            "->" => {
                need(2)?;
                Ok(Formula::imp(self.formula(&args[0])?, self.formula(&args[1])?))
            }
            "iff" => {
                need(2)?;
                Ok(Formula::iff(self.formula(&args[0])?, self.formula(&args[1])?))
            }
            "all" | "ex" => {
                need(2)?;
                let v = self.binder(&args[0])?;
                let body = self.formula(&args[1])?;
                Ok(if head == "all" { Formula::all(v, body) } else { Formula::ex(v, body) })
            }
            "ball" | "bex" => {
                need(3)?;
                if !self.sig.arithmetic && !self.permissive {
                    return Err(unknown(items[0].pos(), head));
                }
                let v = self.binder(&args[0])?;
                let bound = self.term(&args[1])?;
                let body = self.formula(&args[2])?;
                Ok(if head == "ball" { Formula::ball(v, bound, body) } else { Formula::bex(v, bound, body) })
            }
            "quote" => Err(ParseError::malformed(pos, "quote is a term, not a formula")),
            _ => {
                match self.sig.relation_arity(head) {
                    Some(a) if a == args.len() => {}
                    Some(a) => {
                        return Err(arity(pos, format!("relation {head} expects {a} arguments, got {}", args.len())))
                    }
                    None if self.permissive => {}
                    None => return Err(unknown(items[0].pos(), head)),
                }
                let args = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(Formula::Atom(head.to_string(), args))
            }
        }
    }
}

pub fn parse_formula_sexp(s: &Sexp, sig: &Signature) -> Result<Formula, ParseError> {
    Reader { sig, permissive: false }.formula(s)
}

pub fn parse_term_sexp(s: &Sexp, sig: &Signature) -> Result<Term, ParseError> {
    Reader { sig, permissive: false }.term(s)
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_formula_sexp(&read_one(text)?, sig)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    parse_term_sexp(&read_one(text)?, sig)
}

/// Parses with every unknown symbol accepted at the arity it is used with.
/// Used when reading decoded codes, whose signature is not known up front.
pub fn parse_formula_lenient(text: &str) -> Result<Formula, ParseError> {
    let sig = Signature::arithmetic("lenient").with_truth().with_commitment();
    Reader { sig: &sig, permissive: true }.formula(&read_one(text)?)
}

pub fn parse_term_lenient_sexp(s: &Sexp) -> Result<Term, ParseError> {
    let sig = Signature::arithmetic("lenient").with_truth().with_commitment();
    Reader { sig: &sig, permissive: true }.term(s)
}

pub fn parse_formula_lenient_sexp(s: &Sexp) -> Result<Formula, ParseError> {
    let sig = Signature::arithmetic("lenient").with_truth().with_commitment();
    Reader { sig: &sig, permissive: true }.formula(s)
}

/// Canonical text. Numerals are printed in expanded form.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arith() -> Signature {
        Signature::arithmetic("a").with_relation("P", 1)
    }

    #[test]
    fn round_trip() {
        let sig = arith();
        for src in [
            "(all x (-> (P x) (ex y (<= x (+ y y)))))",
            "(ball x.2 (len y) (= x.2 (sbn (quote (P z)) 0)))",
            "(not (= (S 0) 0))",
        ] {
            let f = parse_formula(src, &sig).unwrap();
            assert_eq!(print_formula(&f), src);
            assert_eq!(parse_formula(&print_formula(&f), &sig).unwrap(), f);
        }
    }

    #[test]
    fn numerals_expand() {
        let f = parse_formula("(= 2 x)", &arith()).unwrap();
        assert_eq!(print_formula(&f), "(= (* (+ (S 0) (S 0)) (S 0)) x)");
    }

    #[test]
    fn errors_carry_kind_and_position() {
        let sig = arith();
        let e = parse_formula("(P x y)", &sig).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Arity);
        let e = parse_formula("(and (P x) (Zork x))", &sig).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol);
        assert_eq!(e.pos, 12);
        let e = parse_formula("(all x (P x)", &sig).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Lexical);
        assert_eq!(e.pos, 12);
    }

    #[test]
    fn quotes_accept_foreign_symbols() {
        let f = parse_formula("(Proof:t x (quote (R y)))", &arith()).unwrap();
        assert!(matches!(f, Formula::Atom(..)));
    }
}
