use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use refleqt::calculus::derive::Prover;
use refleqt::calculus::{Proof, Theory};
use refleqt::corpus::{small_reflection_proofs, truth_proofs};
use refleqt::interp::{witness_obligations, BundleKind, RelDef, WitnessBundle};
use refleqt::presentation::{print_theory, print_translation};
use refleqt::schemas::{gen_small_reflection_theory, gen_truth_theory, TruthKind};
use refleqt::syntax::{parse_formula, Var};
use refleqt::theories::{arithmetic, successor_into_arithmetic};
use tempfile::TempDir;

fn refleqt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refleqt")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn write_proof(dir: &Path, name: &str, p: &Proof) -> String {
    write(dir, name, &format!("{p}\n"));
    name.to_string()
}

#[test]
fn cmp_prints_less() {
    let dir = TempDir::new().unwrap();
    let o = refleqt(&["prog", "cmp", "w^1*2+3", "w^2*1"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "less\n");
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ari = arithmetic();
    let good = Proof::axiom(ari.axioms[2].clone());
    write_proof(dir.path(), "good.sexp", &good);
    let o = refleqt(&["check", "good.sexp", "--theory", "ari"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o), "accepted\n");

    let bad = Proof::axiom(parse_formula("(= 0 (S 0))", &ari.signature).unwrap());
    write_proof(dir.path(), "bad.sexp", &bad);
    let o = refleqt(&["check", "bad.sexp", "--theory", "ari"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("rejected at step []"));

    write(dir.path(), "broken.sexp", "(ax (= 0 0)");
    let o = refleqt(&["check", "broken.sexp", "--theory", "ari"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 0"));

    let o = refleqt(&["check", "missing.sexp", "--theory", "ari"], dir.path());
    assert_eq!(code(&o), 2);
    let o = refleqt(&["check", "good.sexp", "--theory", "ari", "--unknown"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn truth_elimination_pipeline() {
    let dir = TempDir::new().unwrap();
    let ari = arithmetic();
    let sc = gen_truth_theory(TruthKind::Sc, &ari).unwrap();
    write(dir.path(), "tau.thy", &print_theory(&ari));
    for (i, p) in truth_proofs(&sc, 5).iter().enumerate() {
        let src = write_proof(dir.path(), &format!("sc{i}.sexp"), p);
        let out = format!("out{i}.sexp");
        let o = refleqt(&["reduce", "truth-elim", &src, "--theory", "tau.thy", "-o", &out], dir.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let o = refleqt(&["check", &out, "--theory", "tau.thy"], dir.path());
        assert_eq!(code(&o), 0, "proof {i}: {}", stdout(&o));
    }
}

#[test]
fn small_reflection_pipeline() {
    let dir = TempDir::new().unwrap();
    let phi = "(= (+ x 0) x)";
    let o = refleqt(&["gen", "smallref", phi, "--theory", "ari", "-o", "sr.thy"], dir.path());
    assert_eq!(code(&o), 0);
    let ari = arithmetic();
    let sr = gen_small_reflection_theory(&ari, &parse_formula(phi, &ari.signature).unwrap()).unwrap();
    for (i, p) in small_reflection_proofs(&sr, 5).iter().enumerate() {
        let src = write_proof(dir.path(), &format!("sr{i}.sexp"), p);
        let o = refleqt(&["check", &src, "--theory", "sr.thy"], dir.path());
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        let out = format!("out{i}.sexp");
        let o = refleqt(&["reduce", "smallref", &src, "--theory", "sr.thy", "-o", &out], dir.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let o = refleqt(&["check", &out, "--theory", "ari"], dir.path());
        assert_eq!(code(&o), 0, "proof {i}: {}", stdout(&o));
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    for out in ["a.thy", "b.thy"] {
        let o = refleqt(&["gen", "sc", "--theory", "arin", "-o", out], dir.path());
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(dir.path().join("a.thy")).unwrap();
    let b = std::fs::read(dir.path().join("b.thy")).unwrap();
    assert_eq!(a, b);
    let args = ["reduce", "certify", "smallref", "(= (* x 0) 0)", "--theory", "ari", "--count", "5"];
    let one = refleqt(&args, dir.path());
    let two = refleqt(&args, dir.path());
    assert_eq!(code(&one), 0, "{}", stdout(&one));
    assert_eq!(one.stdout, two.stdout);
    assert!(stdout(&one).ends_with("within-bound\n"));
}

#[test]
fn linear_bound_is_reported_violated() {
    let dir = TempDir::new().unwrap();
    let args =
        ["reduce", "certify", "smallref", "(= (* x 0) 0)", "--theory", "ari", "--count", "5", "--bound", "0,1"];
    let o = refleqt(&args, dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violated at sample"));
}

fn broken_bundle(dir: &Path) {
    let t = successor_into_arithmetic();
    write(dir, "t.tr", &print_translation(&t));
    let (x, y) = (Var::new("x"), Var::new("y"));
    let b = WitnessBundle {
        kind: BundleKind::Isomorphism,
        translations: vec![t.clone(), t.clone()],
        witnesses: vec![RelDef::new(vec![x, y], parse_formula("(and (= x x) (= y y))", &t.target).unwrap())],
        discharges: Default::default(),
    };
    let ari: Arc<Theory> = arithmetic();
    let prover = Prover::new(ari.axioms.iter().take(2).cloned().map(Proof::axiom).collect());
    let mut discharges = serde_json::Map::new();
    for (k, ob) in witness_obligations(&b).unwrap().into_iter().enumerate() {
        if let Some(p) = prover.prove(&ob.sentence) {
            let name = write_proof(dir, &format!("d{k}.sexp"), &p);
            discharges.insert(ob.label, name.into());
        }
    }
    let json = serde_json::json!({
        "kind": "isomorphism",
        "translations": ["t.tr", "t.tr"],
        "witnesses": [{"params": ["x", "y"], "formula": "(and (= x x) (= y y))"}],
        "hosts": ["ari"],
        "discharges": discharges,
    });
    write(dir, "bundle.json", &serde_json::to_string_pretty(&json).unwrap());
}

#[test]
fn broken_bundle_is_rejected_at_condition_five() {
    let dir = TempDir::new().unwrap();
    broken_bundle(dir.path());
    let o = refleqt(&["interp", "obligations", "--bundle", "bundle.json"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 6 + 2);
    let o = refleqt(&["interp", "check", "--bundle", "bundle.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("rejected at step [4]"), "{}", stdout(&o));
    assert!(stdout(&o).contains("(5)"));
}

#[test]
fn translate_and_compose() {
    let dir = TempDir::new().unwrap();
    let t = successor_into_arithmetic();
    write(dir.path(), "t.tr", &print_translation(&t));
    let o = refleqt(&["interp", "translate", "(all x (Z x))", "--translation", "t.tr"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(all x (-> (= x x) (= x 0)))\n");
    let id = refleqt::interp::Translation::identity(&t.target);
    write(dir.path(), "id.tr", &print_translation(&id));
    let o = refleqt(&["interp", "compose", "--translation", "t.tr", "--translation", "id.tr"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("(translation "));
}

#[test]
fn mutation_fuzzing_finds_no_false_accepts() {
    let dir = TempDir::new().unwrap();
    let ari = arithmetic();
    let sc = gen_truth_theory(TruthKind::Sc, &ari).unwrap();
    let p = &truth_proofs(&sc, 1)[0];
    write(dir.path(), "sc.thy", &print_theory(&sc));
    write_proof(dir.path(), "p.sexp", p);
    let o = refleqt(&["check", "p.sexp", "--theory", "sc.thy", "--mutants", "40", "--seed", "7"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("accepted: 0"));
}

#[test]
fn run_script_and_codec() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s.ic", "seed\nreflect (= (+ x 0) x)\n");
    let o = refleqt(&["prog", "run-script", "s.ic", "--theory", "ari", "-o", "stage.thy"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("J(ari+I) ∋ (all x"));
    assert!(dir.path().join("stage.thy").exists());
    write(dir.path(), "bad.ic", "fly\n");
    let o = refleqt(&["prog", "run-script", "bad.ic", "--theory", "ari"], dir.path());
    assert_eq!(code(&o), 2);

    let o = refleqt(&["codec", "concat", "3", "4"], dir.path());
    assert_eq!(stdout(&o), "16\n");
    let enc = stdout(&refleqt(&["codec", "encode", "(= x x)"], dir.path()));
    let o = refleqt(&["codec", "decode", enc.trim()], dir.path());
    assert_eq!(stdout(&o), "(= x x)\n");
}
