//! Acceptance suite: one pass/fail line per criterion, with pinned limits.
//! Runs without the test harness so the lines always reach the output.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dm_less, notations, sample_sentences, template_from_reflection};
use refleqt::calculus::derive::Prover;
use refleqt::calculus::{check_proof, rfn_tower_presentation, tower_name, Proof, Theory};
use refleqt::codec::{code_length, concat_codes, decode_formula, decode_string, encode_string, max_code, term_code};
use refleqt::corpus::{small_reflection_proofs, successor_proofs, truth_proofs, REFLECTION_FORMULAS};
use refleqt::interp::{
    assemble, check_bundle, identity_obligations, isomorphism_obligations, translate_proof, witness_obligations,
    BundleKind, RelDef, WitnessBundle,
};
use refleqt::mutate::{alpha_equal_proofs, apply_mutation, mutations};
use refleqt::ordinal::{compare_notations, Ordinal};
use refleqt::progressions::{commitments_at_stage, cubic_bound, reflection_instance, run_script};
use refleqt::reductions::{certify_bound, eliminate_truth, BoundVerdict, ReductionWitness, Transformer};
use refleqt::schemas::{gen_small_reflection_theory, gen_truth_theory, ufn_instance, TruthKind};
use refleqt::syntax::{numeral, numeral_value, parse_formula, Formula, Term, Var};
use refleqt::theories::{arithmetic, arithmetic_nat, successor_into_arithmetic, successor_theory, NAT_PREDICATE};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn formula(tau: &Theory, s: &str) -> Formula {
    parse_formula(s, &tau.signature).unwrap()
}

fn bits(v: u64, n: u32) -> String {
    (0..n).rev().map(|i| if v >> i & 1 == 1 { 'b' } else { 'a' }).collect()
}

/// Strings enumerated in shortlex order must receive consecutive codes.
fn codec_exactness() -> Check {
    let mut index: u64 = 0;
    for n in 0..=14u32 {
        for v in 0..(1u64 << n) {
            let s = bits(v, n);
            let c = encode_string(&s).map_err(|e| e.to_string())?;
            ensure(c == BigUint::from(index), || format!("{s} coded {c}, expected {index}"))?;
            ensure(decode_string(&c) == s, || format!("{s} does not round-trip"))?;
            let (lo, hi) = ((1u64 << n) - 1, (1u64 << (n + 1)) - 2);
            ensure((lo..=hi).contains(&index), || format!("{s} outside band [{lo}, {hi}]"))?;
            index += 1;
        }
        ensure(index == (1u64 << (n + 1)) - 1, || format!("{index} strings up to length {n}"))?;
    }
    Ok(format!("{index} strings, 0 failures"))
}

fn growth_bounds() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (n1, n2) = (rng.gen_range(0..48u32), rng.gen_range(0..48u32));
        let (s1, s2) = (bits(rng.gen::<u64>() >> (64 - n1.max(1)), n1), bits(rng.gen::<u64>() >> (64 - n2.max(1)), n2));
        let c = concat_codes(&encode_string(&s1).unwrap(), &encode_string(&s2).unwrap());
        ensure(code_length(&c) == u64::from(n1 + n2), || format!("length of {s1}^{s2}"))?;
        ensure(decode_string(&c) == format!("{s1}{s2}"), || format!("concat of {s1} and {s2}"))?;
    }
    let mut worst: f64 = 0.0;
    for n in 0..=100_000u64 {
        let t = numeral(&BigUint::from(n));
        let limit = 8.0 * ((n + 2) as f64).log2();
        let size = t.symbol_count() as f64;
        ensure(size <= limit, || format!("numeral {n} has {size} symbols, limit {limit:.1}"))?;
        ensure(numeral_value(&t) == Some(BigUint::from(n)), || format!("numeral {n} does not evaluate back"))?;
        worst = worst.max(size / limit);
    }
    let n = 1u32 << 16;
    let mut unary = Term::zero();
    for _ in 0..n {
        unary = Term::succ(unary);
    }
    let dyadic = numeral(&BigUint::from(n));
    let ratio = term_code(&unary).bits() as f64 / term_code(&dyadic).bits() as f64;
    ensure(ratio >= 100.0, || format!("unary/dyadic ratio {ratio:.1}"))?;
    Ok(format!("1000 concat pairs exact, max symbols/limit {worst:.2}, unary/dyadic ratio {ratio:.0} at 2^16"))
}

fn truth_elimination() -> Check {
    let tau = arithmetic();
    let sc = gen_truth_theory(TruthKind::Sc, &tau).map_err(|e| e.to_string())?;
    let corpus = truth_proofs(&sc, 20);
    ensure(corpus.len() >= 20, || format!("corpus has {} proofs", corpus.len()))?;
    let mut ok = 0;
    for (i, p) in corpus.iter().enumerate() {
        let v = check_proof(p, &sc);
        ensure(v.accepted, || format!("SC proof {i} does not check: {v}"))?;
        let q = eliminate_truth(p, &sc, &tau).map_err(|e| format!("proof {i}: {e}"))?;
        ensure(q.conclusion == p.conclusion, || format!("proof {i} changed its conclusion"))?;
        let v = check_proof(&q, &tau);
        ensure(v.accepted, || format!("output {i} does not check in {}: {v}", tau.name))?;
        ok += 1;
    }
    Ok(format!("{ok}/{} outputs check in {}", corpus.len(), tau.name))
}

fn pipeline(tau: &Arc<Theory>, count: usize) -> Result<usize, String> {
    let mut ok = 0;
    for text in &REFLECTION_FORMULAS[..count] {
        let phi = formula(tau, text);
        let script = format!("seed\nref-small {text}\ninv-small {text}\n");
        let st = run_script(tau, &script).map_err(|e| format!("{text}: {e}"))?;
        let goal = reflection_instance(tau, &phi).map_err(|e| e.to_string())?;
        ensure(st.has_j(&st.i_theory_name(), &goal), || format!("{goal} not committed"))?;
        ok += 1;
    }
    Ok(ok)
}

fn small_reflection_inclusion() -> Check {
    let tau = arithmetic();
    let ok = pipeline(&tau, 10)?;
    let phi = formula(&tau, REFLECTION_FORMULAS[0]);
    let sr = Arc::new(gen_small_reflection_theory(&tau, &phi).map_err(|e| e.to_string())?);
    let corpus = small_reflection_proofs(&sr, 50);
    ensure(corpus.len() == 50, || format!("family has {} proofs", corpus.len()))?;
    let w = ReductionWitness {
        source: sr,
        target: tau.clone(),
        transformer: Transformer::SmallReflection,
        bound: cubic_bound(),
        provenance: "acceptance".into(),
    };
    let report = certify_bound(&w, &corpus);
    ensure(report.verdict == BoundVerdict::WithinBound, || format!("{report}"))?;
    let worst = report.samples.iter().filter_map(|(n, m)| m.map(|m| m as f64 / (*n as f64).powi(3))).fold(0.0, f64::max);
    Ok(format!("{ok}/10 instances committed; 50/50 reductions within n^3 (max ratio {worst:.2e})"))
}

fn interpretations() -> Check {
    let src = successor_theory();
    let ari = arithmetic();
    let t = successor_into_arithmetic();
    let prover = Prover::new(ari.axioms.iter().take(2).cloned().map(Proof::axiom).collect());
    let run = || -> Result<Vec<Proof>, String> {
        let mut out = Vec::new();
        for (i, p) in successor_proofs(&src, 20).iter().enumerate() {
            let tp = translate_proof(&t, p).map_err(|e| format!("proof {i}: {e}"))?;
            let discharges = tp
                .obligations
                .iter()
                .map(|o| prover.prove(o).ok_or_else(|| format!("cannot discharge {o}")))
                .collect::<Result<Vec<_>, _>>()?;
            let (assembled, missing) = assemble(&tp, &discharges, &ari);
            ensure(missing.is_empty(), || format!("proof {i} leaves obligations open"))?;
            let v = check_proof(&assembled, &ari);
            ensure(v.accepted, || format!("assembled proof {i}: {v}"))?;
            out.push(assembled);
        }
        Ok(out)
    };
    let first = run()?;
    ensure(first.len() == 20, || format!("{} source proofs", first.len()))?;
    ensure(run()? == first, || "assembly is not deterministic".into())?;
    let relations = t.source.relations.len();
    let id = identity_obligations(&t, &t).map_err(|e| e.to_string())?;
    ensure(id.len() == 1 + relations, || format!("identity gives {} obligations", id.len()))?;
    let (x, y) = (Var::new("x"), Var::new("y"));
    let broken = RelDef::new(vec![x, y], formula(&ari, "(and (= x x) (= y y))"));
    let iso = isomorphism_obligations(&t, &t, &broken).map_err(|e| e.to_string())?;
    ensure(iso.len() == 6 + relations, || format!("isomorphism gives {} obligations", iso.len()))?;
    let mut b = WitnessBundle {
        kind: BundleKind::Isomorphism,
        translations: vec![t.clone(), t.clone()],
        witnesses: vec![broken],
        discharges: Default::default(),
    };
    for ob in witness_obligations(&b).map_err(|e| e.to_string())? {
        if let Some(p) = prover.prove(&ob.sentence) {
            b.discharges.insert(ob.label, p);
        }
    }
    let v = check_bundle(&b, &[&ari]);
    let (path, reason) = v.failing_step.clone().ok_or("broken witness accepted")?;
    ensure(path == vec![4] && reason.contains("(5)"), || format!("broken witness: {v}"))?;
    Ok(format!(
        "20/20 assembled proofs check; identity {} and isomorphism {} obligations; broken witness fails at (5)",
        id.len(),
        iso.len()
    ))
}

fn relativized_inclusion() -> Check {
    let tau = arithmetic_nat();
    let phi = formula(&tau, REFLECTION_FORMULAS[0]);
    let goal = reflection_instance(&tau, &phi).map_err(|e| e.to_string())?;
    ensure(goal.mentions_predicate(NAT_PREDICATE), || format!("{goal} is not relativized"))?;
    let ok = pipeline(&tau, 10)?;
    Ok(format!("{ok}/10 relativized instances committed"))
}

fn progressions() -> Check {
    let all = notations(1 << 12);
    let mut pairs = 0u64;
    for a in &all {
        for b in &all {
            let oracle = if dm_less(a, b) {
                Ordering::Less
            } else if dm_less(b, a) {
                Ordering::Greater
            } else {
                Ordering::Equal
            };
            ensure(compare_notations(a, b) == oracle, || format!("{a} vs {b}"))?;
            pairs += 1;
        }
    }
    let tau = arithmetic();
    let t0 = rfn_tower_presentation(&tau, &Ordinal::zero());
    let limit = max_code();
    for c in 0..=limit {
        if let Some(f) = decode_formula(&BigUint::from(c)) {
            ensure(t0.recognize_axiom(&f) == tau.recognize_axiom(&f), || format!("level 0 differs on {f}"))?;
        }
    }
    for f in sample_sentences() {
        ensure(t0.recognize_axiom(&f) == tau.recognize_axiom(&f), || format!("level 0 differs on {f}"))?;
    }
    let text = REFLECTION_FORMULAS[0];
    let phi = formula(&tau, text);
    let script = format!("reflect {text}\n");
    let s1 = Arc::new(commitments_at_stage(&tau, &Ordinal::zero(), &script).map_err(|e| e.to_string())?);
    let inst0 = ufn_instance(&tau.name, &phi).map_err(|e| e.to_string())?;
    let t1 = rfn_tower_presentation(&tau, &Ordinal::nat(1));
    for a in &s1.axioms {
        let proof = if t1.recognize_axiom(a) { Proof::axiom(a.clone()) } else { template_from_reflection(&inst0, a) };
        let v = check_proof(&proof, &t1);
        ensure(v.accepted && &proof.conclusion == a, || format!("stage-1 fact {a}: {v}"))?;
    }
    let s2 = commitments_at_stage(&s1, &Ordinal::nat(1), &script).map_err(|e| e.to_string())?;
    let inst1 = ufn_instance(&s1.name, &phi).map_err(|e| e.to_string())?;
    ensure(s2.axioms.contains(&inst1), || "second stage misses the reflection instance".into())?;
    let t2 = rfn_tower_presentation(&tau, &Ordinal::nat(2));
    let counterpart = ufn_instance(&tower_name(&tau.name, &Ordinal::nat(1)), &phi).map_err(|e| e.to_string())?;
    let v = check_proof(&Proof::axiom(counterpart.clone()), &t2);
    ensure(v.accepted, || format!("{counterpart}: {v}"))?;
    Ok(format!(
        "{pairs} notation pairs agree; level 0 agrees on codes <= {limit}; two-stage instance checks in {}",
        t2.name
    ))
}

fn mutation_robustness() -> Check {
    let ari = arithmetic();
    let sc = Arc::new(gen_truth_theory(TruthKind::Sc, &ari).map_err(|e| e.to_string())?);
    let sr = Arc::new(gen_small_reflection_theory(&ari, &formula(&ari, REFLECTION_FORMULAS[0])).map_err(|e| e.to_string())?);
    let succ = successor_theory();
    let mut corpus: Vec<(Proof, Arc<Theory>)> = Vec::new();
    let truth = truth_proofs(&sc, 20);
    for p in &truth {
        let q = eliminate_truth(p, &sc, &ari).map_err(|e| e.to_string())?;
        corpus.push((q, ari.clone()));
    }
    corpus.extend(truth.into_iter().map(|p| (p, sc.clone())));
    corpus.extend(small_reflection_proofs(&sr, 10).into_iter().map(|p| (p, sr.clone())));
    corpus.extend(successor_proofs(&succ, 20).into_iter().map(|p| (p, succ.clone())));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut tried, mut benign) = (0, 0);
    for (i, (p, th)) in corpus.iter().enumerate() {
        let v = check_proof(p, th);
        ensure(v.accepted, || format!("corpus proof {i}: {v}"))?;
        let mut ms = mutations(p);
        ms.shuffle(&mut rng);
        for m in ms.iter().take(12) {
            let q = apply_mutation(p, m);
            if alpha_equal_proofs(p, &q) {
                benign += 1;
                continue;
            }
            tried += 1;
            ensure(!check_proof(&q, th).accepted, || format!("false accept: proof {i}, {m}"))?;
        }
    }
    ensure(tried >= 500, || format!("only {tried} mutations"))?;
    Ok(format!("{tried} mutations over {} proofs, 0 false accepts, {benign} benign skipped", corpus.len()))
}

fn main() {
    type Criterion = (&'static str, Option<u64>, fn() -> Check);
    let criteria: [Criterion; 8] = [
        ("codec exactness", Some(5), codec_exactness),
        ("growth bounds", Some(10), growth_bounds),
        ("truth elimination", Some(30), truth_elimination),
        ("small-reflection inclusion", Some(60), small_reflection_inclusion),
        ("interpretation engine", None, interpretations),
        ("relativized reflection coverage", None, relativized_inclusion),
        ("progressions", None, progressions),
        ("mutation robustness", None, mutation_robustness),
    ];
    let worker = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || {
            let mut failed = 0;
            for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
                let start = Instant::now();
                let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
                let elapsed = start.elapsed();
                let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
                let budget = limit.map_or(String::new(), |s| format!(" < {s}s"));
                let (status, detail) = match result {
                    Ok(_) if over => ("FAIL", "time limit exceeded".to_string()),
                    Ok(d) => ("PASS", d),
                    Err(e) => ("FAIL", e),
                };
                if status == "FAIL" {
                    failed += 1;
                }
                println!("criterion {} {name}: {status} [{:.2}s{budget}] {detail}", k + 1, elapsed.as_secs_f64());
            }
            failed
        })
        .expect("spawn worker");
    let failed = worker.join().expect("acceptance worker");
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
