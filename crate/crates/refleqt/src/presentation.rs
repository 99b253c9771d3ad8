//! Text files for theory presentations and translations.
//!
//! A presentation is one form
//! `(theory NAME (signature ...) (axiom F)* (schema NAME F)* (family ...)* (nat TR)?)`.
//! Theories referenced by families are written inline or as the name of a
//! built-in presentation (`ari`, `arin`, `succ`). Witness bundles are JSON
//! files naming translation, witness and proof files by relative path.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::calculus::{parse_proof_lenient, Family, Filter, Schema, Theory};
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::interp::{BundleKind, RelDef, Translation, WitnessBundle};
use crate::ordinal::Ordinal;
use crate::sexp::{read_one, Sexp};
use crate::syntax::{parse_formula_lenient_sexp, parse_term_lenient_sexp, Formula, Signature, Term, Var};
use crate::theories;

type PResult<T> = std::result::Result<T, ParseError>;

/// The built-in presentation with this name.
pub fn builtin(name: &str) -> Option<Arc<Theory>> {
    match name {
        theories::ARITHMETIC => Some(theories::arithmetic()),
        theories::ARITHMETIC_NAT => Some(theories::arithmetic_nat()),
        theories::SUCCESSOR => Some(theories::successor_theory()),
        _ => None,
    }
}

fn atom(s: &str) -> Sexp {
    Sexp::new_atom(s)
}

fn list(items: Vec<Sexp>) -> Sexp {
    Sexp::new_list(items)
}

fn formula_sexp(f: &Formula) -> Sexp {
    read_one(&f.to_string()).expect("printed formulas read back")
}

fn signature_sexp(sig: &Signature) -> Sexp {
    let mut items = vec![atom("signature"), atom(&sig.name)];
    for (flag, on) in [("arithmetic", sig.arithmetic), ("truth", sig.truth), ("commitment", sig.commitment)] {
        if on {
            items.push(atom(flag));
        }
    }
    for (r, a) in &sig.relations {
        items.push(list(vec![atom("rel"), atom(r), atom(&a.to_string())]));
    }
    for (f, a) in &sig.functions {
        items.push(list(vec![atom("fun"), atom(f), atom(&a.to_string())]));
    }
    for c in &sig.constants {
        items.push(list(vec![atom("const"), atom(c)]));
    }
    list(items)
}

fn reldef_sexp(head: &str, name: Option<&str>, d: &RelDef) -> Sexp {
    let mut items = vec![atom(head)];
    if let Some(n) = name {
        items.push(atom(n));
    }
    items.push(list(d.params.iter().map(|v| atom(&v.to_string())).collect()));
    items.push(formula_sexp(&d.body));
    list(items)
}

fn translation_sexp(t: &Translation) -> Sexp {
    let mut items = vec![
        atom("translation"),
        atom(&t.name),
        list(vec![atom("source"), signature_sexp(&t.source)]),
        list(vec![atom("target"), signature_sexp(&t.target)]),
    ];
    if let Some(d) = &t.domain {
        items.push(reldef_sexp("domain", None, d));
    }
    if let Some(e) = &t.equality {
        items.push(reldef_sexp("equality", None, e));
    }
    for (r, d) in &t.relations {
        items.push(reldef_sexp("rel", Some(r), d));
    }
    list(items)
}

fn theory_ref_sexp(t: &Arc<Theory>) -> Sexp {
    match builtin(&t.name) {
        Some(b) if *b == **t => atom(&t.name),
        _ => theory_sexp(t),
    }
}

fn family_sexp(f: &Family) -> Sexp {
    let with_nat = |mut items: Vec<Sexp>, nat: &Option<Translation>| {
        if let Some(n) = nat {
            items.push(translation_sexp(n));
        }
        list(items)
    };
    match f {
        Family::Includes(t) => list(vec![atom("includes"), theory_ref_sexp(t)]),
        Family::Rfn(t) => list(vec![atom("rfn"), theory_ref_sexp(t)]),
        Family::Ufn(t) => list(vec![atom("ufn"), theory_ref_sexp(t)]),
        Family::UfnN { theory, nat } => {
            list(vec![atom("ufn-n"), theory_ref_sexp(theory), translation_sexp(nat)])
        }
        Family::SmallReflection { theory, phi, var, nat } => with_nat(
            vec![atom("small-reflection"), theory_ref_sexp(theory), atom(&var.to_string()), formula_sexp(phi)],
            nat,
        ),
        Family::Utb { nat } => with_nat(vec![atom("utb")], nat),
        Family::ScInclusion { base, nat } => with_nat(vec![atom("sc"), theory_ref_sexp(base)], nat),
        Family::CtNeg => list(vec![atom("ct-neg")]),
        Family::CtAnd => list(vec![atom("ct-and")]),
        Family::CtAll => list(vec![atom("ct-all")]),
        Family::Tower { base, level } => {
            list(vec![atom("tower"), theory_ref_sexp(base), atom(&level.compact())])
        }
        Family::Instances { template, var, filter } => list(vec![
            atom("instances"),
            atom(&var.to_string()),
            formula_sexp(template),
            atom(match filter {
                Filter::All => "all",
                Filter::Even => "even",
            }),
        ]),
        Family::Coherence => list(vec![atom("coherence")]),
    }
}

fn theory_sexp(t: &Theory) -> Sexp {
    let mut items = vec![atom("theory"), atom(&t.name), signature_sexp(&t.signature)];
    items.extend(t.axioms.iter().map(|a| list(vec![atom("axiom"), formula_sexp(a)])));
    items.extend(
        t.schemata.iter().map(|s| list(vec![atom("schema"), atom(&s.name), formula_sexp(&s.template)])),
    );
    items.extend(t.families.iter().map(|f| list(vec![atom("family"), family_sexp(f)])));
    if let Some(n) = &t.nat {
        items.push(list(vec![atom("nat"), translation_sexp(n)]));
    }
    list(items)
}

/// Canonical text, one top-level clause per line.
pub fn print_theory(t: &Theory) -> String {
    let Sexp::List { items, .. } = theory_sexp(t) else { unreachable!() };
    let mut out = format!("({} {}", items[0], items[1]);
    for item in &items[2..] {
        out.push_str("\n  ");
        out.push_str(&item.to_string());
    }
    out.push_str(")\n");
    out
}

pub fn print_translation(t: &Translation) -> String {
    format!("{}\n", translation_sexp(t))
}

fn malformed(s: &Sexp, msg: impl Into<String>) -> ParseError {
    ParseError::malformed(s.pos(), msg)
}

fn items<'a>(s: &'a Sexp, head: &str, min: usize) -> PResult<&'a [Sexp]> {
    match s.list() {
        Some(items) if s.head() == Some(head) && items.len() > min => Ok(&items[1..]),
        Some(_) if s.head() == Some(head) => Err(malformed(s, format!("{head} needs at least {min} arguments"))),
        _ => Err(malformed(s, format!("expected ({head} ...)"))),
    }
}

fn symbol(s: &Sexp) -> PResult<&str> {
    s.atom().ok_or_else(|| malformed(s, "expected a symbol"))
}

fn number(s: &Sexp) -> PResult<usize> {
    symbol(s)?.parse().map_err(|_| malformed(s, "expected a natural number"))
}

fn var(s: &Sexp) -> PResult<Var> {
    match parse_term_lenient_sexp(s)? {
        Term::Var(v) => Ok(v),
        _ => Err(malformed(s, "expected a variable")),
    }
}

fn formula(s: &Sexp) -> PResult<Formula> {
    parse_formula_lenient_sexp(s)
}

fn checked(s: &Sexp, sig: &Signature) -> PResult<Formula> {
    let f = formula(s)?;
    sig.check_formula(&f).map_err(|m| ParseError::new(ParseErrorKind::UnknownSymbol, s.pos(), m))?;
    Ok(f)
}

fn read_signature(s: &Sexp) -> PResult<Signature> {
    let args = items(s, "signature", 1)?;
    let mut sig = Signature::relational(symbol(&args[0])?, &[]);
    for a in &args[1..] {
        match (a.atom(), a.head()) {
            (Some("arithmetic"), _) => sig.arithmetic = true,
            (Some("truth"), _) => sig.truth = true,
            (Some("commitment"), _) => sig.commitment = true,
            (_, Some("rel")) => {
                let xs = items(a, "rel", 2)?;
                sig.relations.push((symbol(&xs[0])?.to_string(), number(&xs[1])?));
            }
            (_, Some("fun")) => {
                let xs = items(a, "fun", 2)?;
                sig.functions.push((symbol(&xs[0])?.to_string(), number(&xs[1])?));
            }
            (_, Some("const")) => sig.constants.push(symbol(&items(a, "const", 1)?[0])?.to_string()),
            _ => return Err(malformed(a, "unknown signature clause")),
        }
    }
    sig.validate().map_err(|m| malformed(s, m))?;
    Ok(sig)
}

fn read_reldef(params: &Sexp, body: &Sexp, sig: &Signature) -> PResult<RelDef> {
    let ps = params.list().ok_or_else(|| malformed(params, "expected a parameter list"))?;
    Ok(RelDef::new(ps.iter().map(var).collect::<PResult<_>>()?, checked(body, sig)?))
}

fn read_translation(s: &Sexp) -> PResult<Translation> {
    let args = items(s, "translation", 3)?;
    let name = symbol(&args[0])?.to_string();
    let source = read_signature(&items(&args[1], "source", 1)?[0])?;
    let target = read_signature(&items(&args[2], "target", 1)?[0])?;
    let mut t = Translation { name, source, target, domain: None, relations: BTreeMap::new(), equality: None };
    for a in &args[3..] {
        match a.head() {
            Some("domain") => {
                let xs = items(a, "domain", 2)?;
                t.domain = Some(read_reldef(&xs[0], &xs[1], &t.target)?);
            }
            Some("equality") => {
                let xs = items(a, "equality", 2)?;
                t.equality = Some(read_reldef(&xs[0], &xs[1], &t.target)?);
            }
            Some("rel") => {
                let xs = items(a, "rel", 3)?;
                t.relations.insert(symbol(&xs[0])?.to_string(), read_reldef(&xs[1], &xs[2], &t.target)?);
            }
            _ => return Err(malformed(a, "unknown translation clause")),
        }
    }
    t.validate().map_err(|e| malformed(s, e.to_string()))?;
    Ok(t)
}

fn read_theory_ref(s: &Sexp) -> PResult<Arc<Theory>> {
    match s.atom() {
        Some(name) => builtin(name).ok_or_else(|| malformed(s, format!("unknown built-in theory {name}"))),
        None => Ok(Arc::new(read_theory(s)?)),
    }
}

fn optional_nat(args: &[Sexp], at: usize) -> PResult<Option<Translation>> {
    args.get(at).map(read_translation).transpose()
}

fn read_family(s: &Sexp) -> PResult<Family> {
    let head = s.head().ok_or_else(|| malformed(s, "expected a family form"))?;
    let args = items(s, head, 0)?;
    let need = |n: usize| -> PResult<()> {
        if args.len() < n {
            return Err(malformed(s, format!("{head} needs {n} arguments")));
        }
        Ok(())
    };
    Ok(match head {
        "includes" | "rfn" | "ufn" | "ufn-n" | "sc" | "tower" => {
            need(1)?;
            let t = read_theory_ref(&args[0])?;
            match head {
                "includes" => Family::Includes(t),
                "rfn" => Family::Rfn(t),
                "ufn" => Family::Ufn(t),
                "ufn-n" => {
                    need(2)?;
                    Family::UfnN { theory: t, nat: read_translation(&args[1])? }
                }
                "sc" => Family::ScInclusion { base: t, nat: optional_nat(args, 1)? },
                _ => {
                    need(2)?;
                    let level = Ordinal::parse(symbol(&args[1])?).map_err(|e| malformed(&args[1], e.to_string()))?;
                    Family::Tower { base: t, level }
                }
            }
        }
        "small-reflection" => {
            need(3)?;
            Family::SmallReflection {
                theory: read_theory_ref(&args[0])?,
                var: var(&args[1])?,
                phi: formula(&args[2])?,
                nat: optional_nat(args, 3)?,
            }
        }
        "utb" => Family::Utb { nat: optional_nat(args, 0)? },
        "ct-neg" => Family::CtNeg,
        "ct-and" => Family::CtAnd,
        "ct-all" => Family::CtAll,
        "coherence" => Family::Coherence,
        "instances" => {
            need(3)?;
            let filter = match symbol(&args[2])? {
                "all" => Filter::All,
                "even" => Filter::Even,
                _ => return Err(malformed(&args[2], "filter is all or even")),
            };
            Family::Instances { var: var(&args[0])?, template: formula(&args[1])?, filter }
        }
        other => return Err(malformed(s, format!("unknown family {other}"))),
    })
}

fn read_theory(s: &Sexp) -> PResult<Theory> {
    let args = items(s, "theory", 2)?;
    let name = symbol(&args[0])?.to_string();
    let signature = read_signature(&args[1])?;
    let mut t = Theory {
        name,
        signature,
        axioms: Vec::new(),
        schemata: Vec::new(),
        families: Vec::new(),
        nat: None,
    };
    for a in &args[2..] {
        match a.head() {
            Some("axiom") => {
                let f = checked(&items(a, "axiom", 1)?[0], &t.signature)?;
                t.axioms.push(f);
            }
            Some("schema") => {
                let xs = items(a, "schema", 2)?;
                t.schemata.push(Schema::new(symbol(&xs[0])?, formula(&xs[1])?));
            }
            Some("family") => t.families.push(read_family(&items(a, "family", 1)?[0])?),
            Some("nat") => t.nat = Some(read_translation(&items(a, "nat", 1)?[0])?),
            _ => return Err(malformed(a, "unknown theory clause")),
        }
    }
    Ok(t)
}

/// Reads a presentation file, or resolves a bare built-in name.
pub fn parse_theory(text: &str) -> PResult<Theory> {
    let s = read_one(text)?;
    match s.atom() {
        Some(name) => builtin(name)
            .map(|t| (*t).clone())
            .ok_or_else(|| malformed(&s, format!("unknown built-in theory {name}"))),
        None => read_theory(&s),
    }
}

pub fn parse_translation(text: &str) -> PResult<Translation> {
    read_translation(&read_one(text)?)
}

/// Reads a file, mapping I/O failures to `Error::Io`.
pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

/// A presentation from a file, or a built-in name when no such file exists.
pub fn load_theory(spec: &str, dir: &Path) -> Result<Theory> {
    let path = dir.join(spec);
    if !path.exists() {
        if let Some(t) = builtin(spec) {
            return Ok((*t).clone());
        }
    }
    Ok(parse_theory(&read_file(&path)?)?)
}

#[derive(Debug, Deserialize)]
struct WitnessEntry {
    params: Vec<String>,
    formula: Option<String>,
    file: Option<String>,
}

/// JSON layout of a witness bundle; paths are relative to the bundle file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    kind: BundleKind,
    translations: Vec<String>,
    #[serde(default)]
    witnesses: Vec<WitnessEntry>,
    #[serde(default)]
    hosts: Vec<String>,
    #[serde(default)]
    discharges: BTreeMap<String, String>,
}

/// Loads a bundle and the host presentations it names.
pub fn load_bundle(path: &Path) -> Result<(WitnessBundle, Vec<Theory>)> {
    let text = read_file(path)?;
    let file: BundleFile = serde_json::from_str(&text)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let translations = file
        .translations
        .iter()
        .map(|t| Ok(parse_translation(&read_file(&dir.join(t))?)?))
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = Vec::new();
    for w in &file.witnesses {
        let text = match (&w.formula, &w.file) {
            (Some(f), None) => f.clone(),
            (None, Some(p)) => read_file(&dir.join(p))?,
            _ => return Err(Error::Malformed("a witness needs exactly one of formula and file".into())),
        };
        let params = w
            .params
            .iter()
            .map(|p| match parse_term_lenient_sexp(&read_one(p)?)? {
                Term::Var(v) => Ok(v),
                _ => Err(Error::Malformed(format!("witness parameter {p} is not a variable"))),
            })
            .collect::<Result<Vec<_>>>()?;
        witnesses.push(RelDef::new(params, formula(&read_one(&text)?)?));
    }
    let mut discharges = BTreeMap::new();
    for (label, p) in &file.discharges {
        discharges.insert(label.clone(), parse_proof_lenient(&read_file(&dir.join(p))?)?);
    }
    let hosts = file.hosts.iter().map(|h| load_theory(h, dir)).collect::<Result<Vec<_>>>()?;
    Ok((WitnessBundle { kind: file.kind, translations, witnesses, discharges }, hosts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemas::{gen_small_reflection_theory, gen_truth_theory, TruthKind};
    use crate::syntax::parse_formula;

    #[test]
    fn builtins_round_trip() {
        for t in [theories::arithmetic(), theories::arithmetic_nat(), theories::successor_theory()] {
            let text = print_theory(&t);
            assert_eq!(parse_theory(&text).unwrap(), *t);
            assert_eq!(parse_theory(&t.name).unwrap(), *t);
        }
    }

    #[test]
    fn generated_round_trip() {
        let tau = theories::arithmetic_nat();
        let phi = parse_formula("(= (+ x 0) x)", &tau.signature).unwrap();
        let sr = gen_small_reflection_theory(&tau, &phi).unwrap();
        assert_eq!(parse_theory(&print_theory(&sr)).unwrap(), sr);
        let sc = gen_truth_theory(TruthKind::Sc, &tau).unwrap();
        assert_eq!(parse_theory(&print_theory(&sc)).unwrap(), sc);
        let ct = gen_truth_theory(TruthKind::Ct, &theories::arithmetic()).unwrap();
        assert_eq!(parse_theory(&print_theory(&ct)).unwrap(), ct);
    }

    #[test]
    fn translation_round_trip() {
        let t = theories::successor_into_arithmetic();
        assert_eq!(parse_translation(&print_translation(&t)).unwrap(), t);
    }

    #[test]
    fn unknown_symbol_in_axiom_is_positioned() {
        let e = parse_theory("(theory t (signature t (rel P 1)) (axiom (Q x)))").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol);
        assert_eq!(e.pos, 41);
    }
}
