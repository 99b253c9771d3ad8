use std::fmt;

use num_bigint::BigUint;

use crate::codec::TABLE;
use crate::error::{ParseError, ParseErrorKind};
use crate::sexp::{read_one, Sexp};
use crate::syntax::{
    parse_formula_lenient_sexp, parse_formula_sexp, parse_term_lenient_sexp, parse_term_sexp, Formula, Signature, Term, Var};

/// Logical axiom schemes of the Hilbert calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// Any propositional tautology, atoms compared up to α-equivalence.
    Taut,
    /// `A → (B → A)`
    K,
    /// `(A → (B → C)) → ((A → B) → (A → C))`
    S,
    /// `(¬B → ¬A) → (A → B)`
    N,
    /// `∀x φ → φ[x := t]`
    ForallElim(Term),
    /// `φ[x := t] → ∃x φ`
    ExIntro(Term),
    /// `∀x (A → B) → (∀x A → ∀x B)`
    ForallDist,
    /// `A → ∀x A` with x not free in A
    VacuousGen,
    /// `t = t`
    EqRefl,
    /// `s = t → (φ[z := s] → φ[z := t])`
    Leibniz { var: Var, body: Formula, left: Term, right: Term },
    /// `∃x φ ↔ ¬∀x ¬φ`, either direction
    ExDef,
    /// `(∀x ≤ t) φ ↔ ∀x (x ≤ t → φ)`, either direction
    BallDef,
    /// `(∃x ≤ t) φ ↔ ∃x (x ≤ t ∧ φ)`, either direction
    BexDef,
}

impl Axiom {
    pub fn tag(&self) -> &'static str {
        match self {
            Axiom::Taut => "taut",
            Axiom::K => "k",
            Axiom::S => "s",
            Axiom::N => "n",
            Axiom::ForallElim(_) => "all-elim",
            Axiom::ExIntro(_) => "ex-intro",
            Axiom::ForallDist => "all-dist",
            Axiom::VacuousGen => "vac-gen",
            Axiom::EqRefl => "eq-refl",
            Axiom::Leibniz { .. } => "leibniz",
            Axiom::ExDef => "ex-def",
            Axiom::BallDef => "ball-def",
            Axiom::BexDef => "bex-def",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Logical(Axiom),
    Theory,
    Computation,
    /// Premises: `A`, then `A → conclusion`.
    ModusPonens,
    Generalization(Var),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub conclusion: Formula,
    pub rule: Rule,
    pub premises: Vec<Proof>,
}

impl Proof {
    pub fn logical(ax: Axiom, conclusion: Formula) -> Proof {
        Proof { conclusion, rule: Rule::Logical(ax), premises: Vec::new() }
    }

    pub fn axiom(conclusion: Formula) -> Proof {
        Proof { conclusion, rule: Rule::Theory, premises: Vec::new() }
    }

    pub fn computation(conclusion: Formula) -> Proof {
        Proof { conclusion, rule: Rule::Computation, premises: Vec::new() }
    }

    /// From `minor: A` and `major: A → B`, conclude `B`. Panics if `major`
    /// is not an implication.
    pub fn mp(minor: Proof, major: Proof) -> Proof {
        let conclusion = match &major.conclusion {
            Formula::Imp(_, b) => (**b).clone(),
            other => panic!("modus ponens major premise is not an implication: {other}"),
        };
        Proof { conclusion, rule: Rule::ModusPonens, premises: vec![minor, major] }
    }

    pub fn gen(v: Var, premise: Proof) -> Proof {
        let conclusion = Formula::all(v.clone(), premise.conclusion.clone());
        Proof { conclusion, rule: Rule::Generalization(v), premises: vec![premise] }
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Proof::node_count).sum::<usize>()
    }

    /// Every node in preorder together with its path of premise indices.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Proof)> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a Proof, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Proof)>) {
            out.push((path.clone(), p));
            for (i, q) in p.premises.iter().enumerate() {
                path.push(i);
                walk(q, path, out);
                path.pop();
            }
        }
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn node_mut(&mut self, path: &[usize]) -> &mut Proof {
        let mut p = self;
        for &i in path {
            p = &mut p.premises[i];
        }
        p
    }

    /// Leaves that cite the theory.
    pub fn theory_leaves(&self) -> Vec<&Formula> {
        self.nodes()
            .into_iter()
            .filter(|(_, p)| p.rule == Rule::Theory)
            .map(|(_, p)| &p.conclusion)
            .collect()
    }

    /// Canonical text: `(ax F)`, `(comp F)`, `(mp F P Q)`, `(gen x F P)`,
    /// `(log tag [args] F)`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Gödel code of the canonical text.
    pub fn code(&self) -> BigUint {
        TABLE.encode_text(&self.to_text()).expect("canonical text is printable ASCII")
    }
}

/// Bit length of the proof's code.
pub fn proof_size(p: &Proof) -> u64 {
    p.code().bits()
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.conclusion;
        match &self.rule {
            Rule::Theory => write!(f, "(ax {c})"),
            Rule::Computation => write!(f, "(comp {c})"),
            Rule::ModusPonens => write!(f, "(mp {c} {} {})", self.premises[0], self.premises[1]),
            Rule::Generalization(v) => write!(f, "(gen {v} {c} {})", self.premises[0]),
            Rule::Logical(ax) => {
                write!(f, "(log {}", ax.tag())?;
                match ax {
                    Axiom::ForallElim(t) | Axiom::ExIntro(t) => write!(f, " {t}")?,
                    Axiom::Leibniz { var, body, left, right } => write!(f, " {var} {body} {left} {right}")?,
                    _ => {}
                }
                write!(f, " {c})")
            }
        }
    }
}

struct ProofReader<'a> {
    sig: Option<&'a Signature>,
}

impl ProofReader<'_> {
    fn formula(&self, s: &Sexp) -> Result<Formula, ParseError> {
        match self.sig {
            Some(sig) => parse_formula_sexp(s, sig),
            None => parse_formula_lenient_sexp(s),
        }
    }

    fn term(&self, s: &Sexp) -> Result<Term, ParseError> {
        match self.sig {
            Some(sig) => parse_term_sexp(s, sig),
            None => parse_term_lenient_sexp(s),
        }
    }

    fn var(&self, s: &Sexp) -> Result<Var, ParseError> {
        match self.term(s)? {
            Term::Var(v) => Ok(v),
            _ => Err(ParseError::malformed(s.pos(), "expected a variable")),
        }
    }

    fn proof(&self, s: &Sexp) -> Result<Proof, ParseError> {
        let items = s.list().ok_or_else(|| ParseError::malformed(s.pos(), "proof step must be a list"))?;
        let head = s.head().ok_or_else(|| ParseError::malformed(s.pos(), "proof step needs a label"))?;
        let args = &items[1..];
        let need = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(ParseError::new(
                    ParseErrorKind::Arity,
                    s.pos(),
                    format!("step {head} takes {n} arguments, got {}", args.len()),
                ))
            }
        };
        match head {
            "ax" | "comp" => {
                need(1)?;
                let c = self.formula(&args[0])?;
                Ok(if head == "ax" { Proof::axiom(c) } else { Proof::computation(c) })
            }
            "mp" => {
                need(3)?;
                Ok(Proof {
                    conclusion: self.formula(&args[0])?,
                    rule: Rule::ModusPonens,
                    premises: vec![self.proof(&args[1])?, self.proof(&args[2])?],
                })
            }
            "gen" => {
                need(3)?;
                Ok(Proof {
                    conclusion: self.formula(&args[1])?,
                    rule: Rule::Generalization(self.var(&args[0])?),
                    premises: vec![self.proof(&args[2])?],
                })
            }
            "log" => {
                let tag = args.first().and_then(Sexp::atom).ok_or_else(|| {
                    ParseError::malformed(s.pos(), "log step needs an axiom scheme name")
                })?;
                let rest = &args[1..];
                let want = |n: usize| {
                    if rest.len() == n {
                        Ok(())
                    } else {
                        Err(ParseError::new(
                            ParseErrorKind::Arity,
                            s.pos(),
                            format!("scheme {tag} takes {n} arguments, got {}", rest.len()),
                        ))
                    }
                };
                let ax = match tag {
                    "taut" => Axiom::Taut,
                    "k" => Axiom::K,
                    "s" => Axiom::S,
                    "n" => Axiom::N,
                    "all-dist" => Axiom::ForallDist,
                    "vac-gen" => Axiom::VacuousGen,
                    "eq-refl" => Axiom::EqRefl,
                    "ex-def" => Axiom::ExDef,
                    "ball-def" => Axiom::BallDef,
                    "bex-def" => Axiom::BexDef,
                    "all-elim" | "ex-intro" => {
                        want(2)?;
                        let t = self.term(&rest[0])?;
                        let ax = if tag == "all-elim" { Axiom::ForallElim(t) } else { Axiom::ExIntro(t) };
                        return Ok(Proof::logical(ax, self.formula(&rest[1])?));
                    }
                    "leibniz" => {
                        want(5)?;
                        let ax = Axiom::Leibniz {
                            var: self.var(&rest[0])?,
                            body: self.formula(&rest[1])?,
                            left: self.term(&rest[2])?,
                            right: self.term(&rest[3])?,
                        };
                        return Ok(Proof::logical(ax, self.formula(&rest[4])?));
                    }
                    other => {
                        return Err(ParseError::new(
                            ParseErrorKind::UnknownSymbol,
                            args[0].pos(),
                            format!("unknown axiom scheme {other}"),
                        ))
                    }
                };
                want(1)?;
                Ok(Proof::logical(ax, self.formula(&rest[0])?))
            }
            other => Err(ParseError::new(
                ParseErrorKind::UnknownSymbol,
                items[0].pos(),
                format!("unknown proof step {other}"),
            )),
        }
    }
}

/// Reads a proof whose formulas are over `sig`.
pub fn parse_proof(text: &str, sig: &Signature) -> Result<Proof, ParseError> {
    ProofReader { sig: Some(sig) }.proof(&read_one(text)?)
}

/// Reads a proof accepting any symbols; the checker validates them later.
pub fn parse_proof_lenient(text: &str) -> Result<Proof, ParseError> {
    ProofReader { sig: None }.proof(&read_one(text)?)
}

/// The proof coded by `c`, if its code is the code of a canonical proof text.
pub fn decode_proof(c: &BigUint) -> Option<Proof> {
    let text = TABLE.decode_text(c)?;
    let p = parse_proof_lenient(&text).ok()?;
    (p.to_text() == text).then_some(p)
}
