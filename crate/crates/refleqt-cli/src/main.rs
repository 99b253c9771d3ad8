use std::cmp::Ordering;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use refleqt::calculus::{check_proof, parse_proof, parse_proof_lenient, proof_size, Proof, Theory};
use refleqt::codec::{code_length, concat_codes, formula_code, subst_codes, TABLE};
use refleqt::interp::{check_bundle, compose, translate_proof, witness_obligations};
use refleqt::mutate::{alpha_equal_proofs, apply_mutation, mutations};
use refleqt::ordinal::{compare_notations, Ordinal};
use refleqt::presentation::{load_bundle, load_theory, parse_translation, print_theory, print_translation, read_file};
use refleqt::progressions::{commitments_at_stage, run_script};
use refleqt::reductions::{
    certify_bound, eliminate_truth, reduce_small_reflection_proof, BoundVerdict, Polynomial, ReductionWitness,
    Transformer,
};
use refleqt::schemas::{gen_reflection_instance, gen_small_reflection_theory, gen_truth_theory, ReflectionKind, TruthKind};
use refleqt::syntax::{classify_formula, numeral, numeral_value, parse_formula, parse_formula_lenient, Formula};
use refleqt::{corpus, Error};

const STACK_BYTES: usize = 256 << 20;

#[derive(Parser)]
#[command(name = "refleqt", version, about = "Arithmetized syntax, proof checking and reflection tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gödel codes of strings and numerals.
    #[command(subcommand)]
    Codec(CodecCmd),
    /// Parse an input and print its canonical form.
    Parse {
        input: String,
        #[arg(long = "as", value_enum, default_value = "formula")]
        kind: InputKind,
        #[arg(long)]
        theory: Option<String>,
    },
    /// Check a proof against a presentation.
    Check {
        proof: PathBuf,
        #[arg(long)]
        theory: String,
        /// Check this many random single-node mutants instead.
        #[arg(long)]
        mutants: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate reflection sentences and derived presentations.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        formula: Option<String>,
        #[arg(long)]
        theory: String,
        #[arg(long)]
        translation: Option<PathBuf>,
        /// Proof-code bound for `con`.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Translations, compositions and witness bundles.
    #[command(subcommand)]
    Interp(InterpCmd),
    /// Proof transformations and their size certificates.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Ordinal notations, reflection towers and commitment scripts.
    #[command(subcommand)]
    Prog(ProgCmd),
}

#[derive(Subcommand)]
enum CodecCmd {
    Encode { text: String },
    Decode { code: String },
    Length { code: String },
    Concat { left: String, right: String },
    /// Replace occurrences of the string coded by PATTERN in SOURCE.
    Subst { source: String, replacement: String, pattern: String },
    Numeral { n: String },
    /// Value of a dyadic numeral term.
    Value { term: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKind {
    Formula,
    Proof,
    Theory,
    Translation,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Con,
    Rfn,
    Ufn,
    UfnN,
    Smallref,
    Utb,
    Sc,
    Ct,
}

#[derive(Subcommand)]
enum InterpCmd {
    Translate {
        input: String,
        #[arg(long)]
        translation: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Compose translations given in application order.
    Compose {
        #[arg(long = "translation", num_args = 1, required = true)]
        translations: Vec<PathBuf>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    Obligations {
        #[arg(long)]
        bundle: PathBuf,
    },
    Check {
        #[arg(long)]
        bundle: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CertifyKind {
    Smallref,
    TruthElim,
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Eliminate small-reflection leaves; `--theory` is the small-reflection presentation.
    Smallref {
        proof: PathBuf,
        #[arg(long)]
        theory: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Eliminate the truth predicate from an SC proof over `--theory`.
    TruthElim {
        proof: PathBuf,
        #[arg(long)]
        theory: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Run a transformer over a generated corpus and check its size bound.
    Certify {
        #[arg(value_enum)]
        kind: CertifyKind,
        formula: Option<String>,
        #[arg(long)]
        theory: String,
        /// Polynomial coefficients from the constant term up, comma separated.
        #[arg(long, default_value = "0,0,0,1")]
        bound: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum ProgCmd {
    Cmp { left: String, right: String },
    /// Print RFN^ALPHA(τ), or decide whether SENTENCE is one of its axioms.
    Tower {
        alpha: String,
        sentence: Option<String>,
        #[arg(long)]
        theory: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    RunScript {
        script: PathBuf,
        #[arg(long)]
        theory: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

/// Accepted or rejected; errors are reported separately.
enum Outcome {
    Accepted,
    Rejected,
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Accepted
    } else {
        Outcome::Rejected
    }
}

fn text_or_file(arg: &str) -> anyhow::Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(read_file(path)?)
    } else {
        Ok(arg.to_string())
    }
}

fn theory(spec: &str) -> anyhow::Result<Arc<Theory>> {
    Ok(Arc::new(load_theory(spec, Path::new("."))?))
}

fn formula_in(th: &Theory, arg: &str) -> anyhow::Result<Formula> {
    Ok(parse_formula(text_or_file(arg)?.trim(), &th.signature)?)
}

fn proof_in(th: &Theory, path: &Path) -> anyhow::Result<Proof> {
    Ok(parse_proof(&read_file(path)?, &th.signature)?)
}

fn natural(s: &str) -> anyhow::Result<BigUint> {
    s.trim().parse().map_err(|_| Error::Malformed(format!("not a natural number: {s}")).into())
}

fn emit(o: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match o {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn codec(cmd: CodecCmd) -> anyhow::Result<Outcome> {
    match cmd {
        CodecCmd::Encode { text } => println!("{}", TABLE.encode_text(&text)?),
        CodecCmd::Decode { code } => match TABLE.decode_text(&natural(&code)?) {
            Some(t) => println!("{t}"),
            None => {
                println!("no text has code {code}");
                return Ok(Outcome::Rejected);
            }
        },
        CodecCmd::Length { code } => println!("{}", code_length(&natural(&code)?)),
        CodecCmd::Concat { left, right } => println!("{}", concat_codes(&natural(&left)?, &natural(&right)?)),
        CodecCmd::Subst { source, replacement, pattern } => {
            println!("{}", subst_codes(&natural(&source)?, &natural(&replacement)?, &natural(&pattern)?)?)
        }
        CodecCmd::Numeral { n } => println!("{}", numeral(&natural(&n)?)),
        CodecCmd::Value { term } => {
            let f = parse_formula_lenient(&format!("(= {term} 0)"))?;
            let Formula::Eq(t, _) = f else { unreachable!() };
            let v = numeral_value(&t).ok_or_else(|| Error::NotANumeral(term.clone()))?;
            println!("{v}");
        }
    }
    Ok(Outcome::Accepted)
}

fn parse(input: &str, kind: InputKind, theory_spec: Option<&str>) -> anyhow::Result<Outcome> {
    let text = text_or_file(input)?;
    let th = theory_spec.map(theory).transpose()?;
    match kind {
        InputKind::Formula => {
            let f = match &th {
                Some(t) => parse_formula(text.trim(), &t.signature)?,
                None => parse_formula_lenient(text.trim())?,
            };
            let free: Vec<String> = f.free_vars().iter().map(|v| v.to_string()).collect();
            println!("{f}");
            println!("code: {}", formula_code(&f));
            println!("class: {}", classify_formula(&f));
            println!("free: {}", free.join(" "));
        }
        InputKind::Proof => {
            let p = match &th {
                Some(t) => parse_proof(&text, &t.signature)?,
                None => parse_proof_lenient(&text)?,
            };
            println!("{p}");
            println!("conclusion: {}", p.conclusion);
            println!("nodes: {}", p.node_count());
            println!("size: {}", proof_size(&p));
        }
        InputKind::Theory => print!("{}", print_theory(&refleqt::presentation::parse_theory(&text)?)),
        InputKind::Translation => print!("{}", print_translation(&parse_translation(&text)?)),
    }
    Ok(Outcome::Accepted)
}

fn check(path: &Path, theory_spec: &str, mutants: Option<usize>, seed: u64) -> anyhow::Result<Outcome> {
    let th = theory(theory_spec)?;
    let p = proof_in(&th, path)?;
    let v = check_proof(&p, &th);
    println!("{v}");
    let Some(n) = mutants else { return Ok(verdict(v.accepted)) };
    if !v.accepted {
        return Ok(Outcome::Rejected);
    }
    let mut all = mutations(&p);
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut false_accepts = 0;
    let mut tried = 0;
    for m in all.iter().take(n) {
        let q = apply_mutation(&p, m);
        if alpha_equal_proofs(&p, &q) {
            continue;
        }
        tried += 1;
        if check_proof(&q, &th).accepted {
            false_accepts += 1;
            println!("accepted mutant: {m}");
        }
    }
    println!("mutants: {tried} rejected: {} accepted: {false_accepts}", tried - false_accepts);
    Ok(verdict(false_accepts == 0))
}

fn gen(
    kind: GenKind,
    formula: Option<&str>,
    theory_spec: &str,
    translation: Option<&Path>,
    bound: Option<u64>,
    o: &Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let tau = theory(theory_spec)?;
    let phi = || -> anyhow::Result<Formula> {
        let arg = formula.ok_or_else(|| Error::Malformed("this generator needs a formula".into()))?;
        formula_in(&tau, arg)
    };
    let sentence = |k: ReflectionKind, phi: Formula| -> anyhow::Result<String> {
        Ok(format!("{}\n", gen_reflection_instance(&k, &tau, &phi)?))
    };
    let text = match kind {
        GenKind::Con => {
            let k = bound.map_or(ReflectionKind::Con, ReflectionKind::ConBounded);
            sentence(k, Formula::eq(refleqt::syntax::Term::zero(), refleqt::syntax::Term::zero()))?
        }
        GenKind::Rfn => sentence(ReflectionKind::Rfn, phi()?)?,
        GenKind::Ufn => sentence(ReflectionKind::Ufn, phi()?)?,
        GenKind::UfnN => {
            let nat = match translation {
                Some(p) => parse_translation(&read_file(p)?)?,
                None => tau.nat.clone().ok_or_else(|| Error::MissingInterpretation(tau.name.clone()))?,
            };
            sentence(ReflectionKind::UfnN(nat), phi()?)?
        }
        GenKind::Smallref => print_theory(&gen_small_reflection_theory(&tau, &phi()?)?),
        GenKind::Utb => print_theory(&gen_truth_theory(TruthKind::Utb, &tau)?),
        GenKind::Sc => print_theory(&gen_truth_theory(TruthKind::Sc, &tau)?),
        GenKind::Ct => print_theory(&gen_truth_theory(TruthKind::Ct, &tau)?),
    };
    emit(o, &text)?;
    Ok(Outcome::Accepted)
}

fn interp(cmd: InterpCmd) -> anyhow::Result<Outcome> {
    match cmd {
        InterpCmd::Translate { input, translation, o } => {
            let t = parse_translation(&read_file(&translation)?)?;
            let text = text_or_file(&input)?;
            match parse_proof(&text, &t.source) {
                Ok(p) => {
                    let tp = translate_proof(&t, &p)?;
                    let mut out = format!("{}\n", tp.skeleton);
                    for ob in &tp.obligations {
                        out.push_str(&format!("; obligation {ob}\n"));
                    }
                    emit(&o, &out)?;
                }
                Err(_) => {
                    let f = parse_formula(text.trim(), &t.source)?;
                    emit(&o, &format!("{}\n", t.translate(&f)?))?;
                }
            }
        }
        InterpCmd::Compose { translations, o } => {
            let mut ts = translations.iter().map(|p| -> anyhow::Result<_> { Ok(parse_translation(&read_file(p)?)?) });
            let mut acc = ts.next().ok_or(Error::EmptyList)??;
            for t in ts {
                acc = compose(&t?, &acc)?;
            }
            emit(&o, &print_translation(&acc))?;
        }
        InterpCmd::Obligations { bundle } => {
            let (b, _) = load_bundle(&bundle)?;
            for ob in witness_obligations(&b)? {
                println!("{} [{}]: {}", ob.label, ob.host, ob.sentence);
            }
        }
        InterpCmd::Check { bundle } => {
            let (b, hosts) = load_bundle(&bundle)?;
            if hosts.is_empty() {
                bail!(Error::Malformed("the bundle names no host presentation".into()));
            }
            let refs: Vec<&Theory> = hosts.iter().collect();
            let v = check_bundle(&b, &refs);
            println!("{v}");
            return Ok(verdict(v.accepted));
        }
    }
    Ok(Outcome::Accepted)
}

fn polynomial(text: &str) -> anyhow::Result<Polynomial> {
    let coeffs = text
        .split(',')
        .map(|c| c.trim().parse::<u64>().map_err(|_| Error::Malformed(format!("bad coefficient {c}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial(coeffs))
}

fn reduce(cmd: ReduceCmd) -> anyhow::Result<Outcome> {
    match cmd {
        ReduceCmd::Smallref { proof, theory: spec, o } => {
            let sr = theory(&spec)?;
            let p = proof_in(&sr, &proof)?;
            let q = reduce_small_reflection_proof(&p, &sr)?;
            eprintln!("size {} -> {}", proof_size(&p), proof_size(&q));
            emit(&o, &format!("{q}\n"))?;
        }
        ReduceCmd::TruthElim { proof, theory: spec, o } => {
            let tau = theory(&spec)?;
            let sc = gen_truth_theory(TruthKind::Sc, &tau)?;
            let p = proof_in(&sc, &proof)?;
            let q = eliminate_truth(&p, &sc, &tau)?;
            eprintln!("size {} -> {}", proof_size(&p), proof_size(&q));
            emit(&o, &format!("{q}\n"))?;
        }
        ReduceCmd::Certify { kind, formula, theory: spec, bound, count } => {
            let tau = theory(&spec)?;
            let bound = polynomial(&bound)?;
            let (source, transformer, proofs) = match kind {
                CertifyKind::Smallref => {
                    let arg = formula.ok_or_else(|| Error::Malformed("smallref certification needs a formula".into()))?;
                    let sr = Arc::new(gen_small_reflection_theory(&tau, &formula_in(&tau, &arg)?)?);
                    let proofs = corpus::small_reflection_proofs(&sr, count);
                    (sr, Transformer::SmallReflection, proofs)
                }
                CertifyKind::TruthElim => {
                    let sc = Arc::new(gen_truth_theory(TruthKind::Sc, &tau)?);
                    let proofs = corpus::truth_proofs(&sc, count);
                    (sc, Transformer::TruthElimination, proofs)
                }
            };
            let w = ReductionWitness {
                source,
                target: tau.clone(),
                transformer,
                bound,
                provenance: "command line".into(),
            };
            let report = certify_bound(&w, &proofs);
            println!("{report}");
            return Ok(verdict(report.verdict == BoundVerdict::WithinBound));
        }
    }
    Ok(Outcome::Accepted)
}

fn prog(cmd: ProgCmd) -> anyhow::Result<Outcome> {
    match cmd {
        ProgCmd::Cmp { left, right } => {
            let word = match compare_notations(&Ordinal::parse(&left)?, &Ordinal::parse(&right)?) {
                Ordering::Less => "less",
                Ordering::Equal => "equal",
                Ordering::Greater => "greater",
            };
            println!("{word}");
        }
        ProgCmd::Tower { alpha, sentence, theory: spec, o } => {
            let tau = theory(&spec)?;
            let level = Ordinal::parse(&alpha)?;
            let tower = refleqt::calculus::rfn_tower_presentation(&tau, &level);
            match sentence {
                None => emit(&o, &print_theory(&tower))?,
                Some(s) => {
                    let f = formula_in(&tower, &s)?;
                    let member = tower.recognize_axiom(&f);
                    println!("{}", if member { "axiom" } else { "not an axiom" });
                    return Ok(verdict(member));
                }
            }
        }
        ProgCmd::RunScript { script, theory: spec, o } => {
            let tau = theory(&spec)?;
            let text = read_file(&script)?;
            let st = run_script(&tau, &text)?;
            for step in &st.log {
                println!("{step}");
            }
            for j in &st.j_facts {
                println!("{j}");
            }
            if o.is_some() {
                emit(&o, &print_theory(&commitments_at_stage(&tau, &Ordinal::zero(), &text)?))?;
            }
        }
    }
    Ok(Outcome::Accepted)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Codec(c) => codec(c),
        Command::Parse { input, kind, theory } => parse(&input, kind, theory.as_deref()),
        Command::Check { proof, theory, mutants, seed } => check(&proof, &theory, mutants, seed),
        Command::Gen { kind, formula, theory, translation, bound, o } => {
            gen(kind, formula.as_deref(), &theory, translation.as_deref(), bound, &o)
        }
        Command::Interp(c) => interp(c),
        Command::Reduce(c) => reduce(c),
        Command::Prog(c) => prog(c),
    }
}

/// Failed rule premises and refused transformations count as rejections;
/// everything else is malformed input.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Premise(_) | Error::NotEliminable(_) | Error::UnregisteredWitness(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || run(cli))
        .expect("spawn worker thread");
    match worker.join() {
        Ok(Ok(Outcome::Accepted)) => ExitCode::SUCCESS,
        Ok(Ok(Outcome::Rejected)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => {
            eprintln!("{}", anyhow!("internal error"));
            ExitCode::from(2)
        }
    }
}
