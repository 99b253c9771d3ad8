//! The implicit-commitment engine IC_α: an audited ledger of I-facts and
//! J-facts grown by the base rule, (REF), (INV) and closure under
//! provable implication.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::calculus::derive::{chain_ok, ex_elim, gen_under_hyp, instantiate_many, leibniz, symm};
use crate::calculus::{check_proof, Family, Proof, Theory};
use crate::corpus::small_reflection_proofs;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::reductions::{certify_bound, BoundVerdict, Polynomial, ReductionWitness, Transformer};
use crate::schemas::{
    gen_small_reflection_theory, instantiate as inst_phi, pick_var, sbn, single_free_var,
    small_reflection_template, ufn_instance, ufn_n_instance,
};
use crate::syntax::{all_vars, alpha_eq, parse_formula, substitute, Formula, Term};

/// Size of the corpus a script certifies a small-reflection witness on.
pub const SCRIPT_CORPUS: usize = 10;

/// The frozen bound for small-reflection reductions: output ≤ input³.
pub fn cubic_bound() -> Polynomial {
    Polynomial(vec![0, 0, 0, 1])
}

fn premise(msg: impl Into<String>) -> Error {
    Error::Premise(msg.into())
}

fn pairing_axiom(tau: &Theory, text: &str) -> Result<Proof> {
    let ax = parse_formula(text, &tau.signature)?;
    if !tau.recognize_axiom(&ax) {
        return Err(premise(format!("{} lacks the axiom {ax}", tau.name)));
    }
    Ok(Proof::axiom(ax))
}

/// The uniform reflection instance for φ over τ, relativized to δ_N when
/// τ's number domain is a proper predicate.
pub fn reflection_instance(tau: &Theory, phi: &Formula) -> Result<Formula> {
    match &tau.nat {
        Some(nat) if nat.domain.is_some() => ufn_n_instance(&tau.name, nat, phi),
        _ => ufn_instance(&tau.name, phi),
    }
}

/// `∀y S(y)` for the paired small-reflection template S of φ over τ,
/// together with a τ-proof of `∀y S(y) → R` where R is
/// [`reflection_instance`]. The proof instantiates y at `pair(p, x)` and
/// rewrites with the projection axioms.
pub fn reflection_from_template(tau: &Theory, phi: &Formula) -> Result<(Formula, Proof)> {
    let v = single_free_var(phi)?;
    let goal = reflection_instance(tau, phi)?;
    let nat = tau.nat.as_ref().filter(|n| n.domain.is_some());
    let Formula::All(x, body) = &goal else { unreachable!() };
    let (guard_x, rest) = match (nat, &**body) {
        (Some(_), Formula::Imp(g, r)) => (Some((**g).clone()), &**r),
        (_, r) => (None, r),
    };
    let Formula::Imp(prov, phi_x) = rest else { unreachable!() };
    let Formula::Ex(p, inner) = &**prov else { unreachable!() };

    let mut avoid = HashSet::new();
    all_vars(&goal, &mut avoid);
    all_vars(phi, &mut avoid);
    avoid.insert(v.clone());
    let y = pick_var("y", &avoid);
    avoid.insert(y.clone());
    let z = pick_var("z", &avoid);
    let template = small_reflection_template(&tau.name, phi, &y, nat);
    let all_t = Formula::all(y.clone(), template.clone());

    let (xt, pt, zt) = (Term::Var(x.clone()), Term::Var(p.clone()), Term::Var(z.clone()));
    let pair = Term::app("pair", vec![pt.clone(), xt.clone()]);
    let (fst, snd) = (Term::app("fst", vec![pair.clone()]), Term::app("snd", vec![pair.clone()]));
    let at_pair = Proof::logical(
        crate::calculus::Axiom::ForallElim(pair.clone()),
        Formula::imp(all_t.clone(), substitute(&template, &y, &pair)),
    );
    let e1 = instantiate_many(pairing_axiom(tau, "(all x (all y (= (fst (pair x y)) x)))")?, &[pt.clone(), xt.clone()]);
    let e2 = instantiate_many(pairing_axiom(tau, "(all x (all y (= (snd (pair x y)) y)))")?, &[pt.clone(), xt.clone()]);
    let proof_at = |a: &Term, b: &Term| crate::schemas::proof_atom(&tau.name, a.clone(), sbn(phi, vec![b.clone()]));
    let l1 = leibniz(&z, &proof_at(&zt, &xt), &pt, &fst);
    let l2 = leibniz(&z, &proof_at(&fst, &zt), &xt, &snd);
    let l3 = leibniz(&z, &inst_phi(phi, &zt), &snd, &xt);
    let mut premises = vec![at_pair, e1, symm(&fst, &pt), e2, symm(&snd, &xt), l1, l2, l3];
    if nat.is_some() {
        let closed = pairing_axiom(tau, "(all x (all y (-> (and (Nat x) (Nat y)) (Nat (pair x y)))))")?;
        premises.push(instantiate_many(closed, &[pt.clone(), xt.clone()]));
    }
    let tail = match &guard_x {
        Some(g) => Formula::imp(g.clone(), (**phi_x).clone()),
        None => (**phi_x).clone(),
    };
    let open = chain_ok(premises, Formula::imp((**inner).clone(), Formula::imp(all_t.clone(), tail.clone())));
    let elim = ex_elim(p, open);
    let body_proof = chain_ok(vec![elim], Formula::imp(all_t.clone(), (**body).clone()));
    let proof = gen_under_hyp(x, body_proof);
    debug_assert!(alpha_eq(&proof.conclusion, &Formula::imp(all_t.clone(), goal)));
    Ok((all_t, proof))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JFact {
    pub theory: String,
    pub sentence: Formula,
}

impl fmt::Display for JFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({}) ∋ {}", self.theory, self.sentence)
    }
}

/// One applied rule with everything needed to replay it.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// Base or limit rule: a proof in the presentation admitted at `level`.
    Admit { level: Ordinal, proof: Proof },
    /// (REF): every numeral instance of `template` is a σ-axiom.
    Ref { theory: Arc<Theory>, template: Formula },
    /// Closure of 𝒥(σ) under σ-provable implication.
    Derive { theory: String, proof: Proof },
    Register { witness: ReductionWitness, corpus: Vec<Proof> },
    /// (INV) through a registered witness.
    Inv { witness: String },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Admit { level, proof } => write!(f, "admit@{level} {}", proof.conclusion),
            Step::Ref { theory, template } => write!(f, "ref {} {template}", theory.name),
            Step::Derive { theory, proof } => write!(f, "derive {theory} {}", proof.conclusion),
            Step::Register { witness, corpus } => {
                write!(f, "register {} on {} proofs", witness_key(witness), corpus.len())
            }
            Step::Inv { witness } => write!(f, "inv {witness}"),
        }
    }
}

pub fn witness_key(w: &ReductionWitness) -> String {
    format!("{}->{}", w.source.name, w.target.name)
}

/// State of IC_α over a base presentation τ.
#[derive(Clone, Debug, PartialEq)]
pub struct ICState {
    pub base: Arc<Theory>,
    pub stage: Ordinal,
    /// Presentations whose proofs admit sentences into I, by level.
    pub admission: BTreeMap<Ordinal, Arc<Theory>>,
    pub i_facts: Vec<Formula>,
    pub j_facts: Vec<JFact>,
    pub witnesses: BTreeMap<String, ReductionWitness>,
    /// Presentations J-facts refer to, by name.
    pub theories: BTreeMap<String, Arc<Theory>>,
    pub log: Vec<Step>,
}

/// IC_0: sentences with a checking τ-proof enter I.
pub fn ic_base(tau: &Arc<Theory>) -> ICState {
    ICState::new(tau, Ordinal::zero(), BTreeMap::from([(Ordinal::zero(), tau.clone())]))
}

/// IC_λ for a limit λ: sentences with a checking τ_{β+1}-proof enter I, for
/// each provided β ≺ λ.
pub fn ic_limit(tau: &Arc<Theory>, lambda: &Ordinal, stages: Vec<(Ordinal, Arc<Theory>)>) -> Result<ICState> {
    if !lambda.is_limit() {
        return Err(Error::NotLimit(lambda.to_string()));
    }
    if let Some((beta, _)) = stages.iter().find(|(b, _)| b >= lambda) {
        return Err(premise(format!("stage {beta} is not below {lambda}")));
    }
    Ok(ICState::new(tau, lambda.clone(), stages.into_iter().collect()))
}

impl ICState {
    fn new(tau: &Arc<Theory>, stage: Ordinal, admission: BTreeMap<Ordinal, Arc<Theory>>) -> ICState {
        ICState {
            base: tau.clone(),
            stage,
            admission,
            i_facts: Vec::new(),
            j_facts: Vec::new(),
            witnesses: BTreeMap::new(),
            theories: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    pub fn i_theory_name(&self) -> String {
        format!("{}+I", self.base.name)
    }

    /// τ together with the current I-facts.
    pub fn i_theory(&self) -> Arc<Theory> {
        Arc::new(Theory {
            name: self.i_theory_name(),
            signature: self.base.signature.clone(),
            axioms: self.i_facts.clone(),
            schemata: Vec::new(),
            families: vec![Family::Includes(self.base.clone())],
            nat: self.base.nat.clone(),
        })
    }

    pub fn has_j(&self, theory: &str, s: &Formula) -> bool {
        self.j_facts.iter().any(|j| j.theory == theory && alpha_eq(&j.sentence, s))
    }

    fn add_j(&mut self, theory: &str, s: Formula) {
        if !self.has_j(theory, &s) {
            self.j_facts.push(JFact { theory: theory.into(), sentence: s });
        }
    }

    fn theory(&self, name: &str) -> Result<Arc<Theory>> {
        if name == self.i_theory_name() {
            return Ok(self.i_theory());
        }
        self.theories.get(name).cloned().ok_or_else(|| Error::UnknownTheory(name.into()))
    }

    /// Base/limit rule: admits the conclusion of a proof that checks in the
    /// presentation registered at `level`.
    pub fn admit(&mut self, level: &Ordinal, proof: Proof) -> Result<()> {
        if !self.stage.is_zero() && level >= &self.stage {
            return Err(premise(format!("stage {level} is not below {}", self.stage)));
        }
        let th = self
            .admission
            .get(level)
            .ok_or_else(|| premise(format!("no presentation admitted at stage {level}")))?;
        let v = check_proof(&proof, th);
        if !v.accepted {
            return Err(premise(format!("admission proof does not check in {}: {v}", th.name)));
        }
        if !proof.conclusion.is_sentence() {
            return Err(premise(format!("{} is not a sentence", proof.conclusion)));
        }
        if !self.i_facts.iter().any(|f| alpha_eq(f, &proof.conclusion)) {
            self.i_facts.push(proof.conclusion.clone());
        }
        self.log.push(Step::Admit { level: level.clone(), proof });
        Ok(())
    }

    /// (REF): from "every numeral instance of φ is a σ-axiom", ∀y φ ∈ 𝒥(σ).
    pub fn apply_ref(&mut self, sigma: &Arc<Theory>, template: &Formula) -> Result<()> {
        if !sigma.all_numeral_instances(template) {
            return Err(premise(format!("{} does not certify every numeral instance of {template}", sigma.name)));
        }
        let y = single_free_var(template)?;
        self.theories.insert(sigma.name.clone(), sigma.clone());
        self.add_j(&sigma.name, Formula::all(y, template.clone()));
        self.log.push(Step::Ref { theory: sigma.clone(), template: template.clone() });
        Ok(())
    }

    /// From A ∈ 𝒥(σ) and a σ-proof of A → B, B ∈ 𝒥(σ).
    pub fn apply_derive(&mut self, theory: &str, proof: Proof) -> Result<()> {
        let Formula::Imp(a, b) = &proof.conclusion else {
            return Err(premise(format!("derivation concludes no implication: {}", proof.conclusion)));
        };
        if !self.has_j(theory, a) {
            return Err(premise(format!("{a} is not in J({theory})")));
        }
        let th = self.theory(theory)?;
        let v = check_proof(&proof, &th);
        if !v.accepted {
            return Err(premise(format!("derivation does not check in {theory}: {v}")));
        }
        let b = (**b).clone();
        self.add_j(theory, b);
        self.log.push(Step::Derive { theory: theory.into(), proof });
        Ok(())
    }

    /// Registers a witness after certifying it on `corpus`, whose proofs
    /// must check in the source.
    pub fn register_witness(&mut self, witness: ReductionWitness, corpus: Vec<Proof>) -> Result<String> {
        if corpus.is_empty() {
            return Err(Error::EmptyList);
        }
        if let Some(i) = corpus.iter().position(|p| !check_proof(p, &witness.source).accepted) {
            return Err(premise(format!("corpus proof {i} does not check in {}", witness.source.name)));
        }
        let report = certify_bound(&witness, &corpus);
        if let BoundVerdict::Violated(i) = report.verdict {
            return Err(premise(format!("witness {} violates its bound at sample {i}", witness_key(&witness))));
        }
        let key = witness_key(&witness);
        self.theories.insert(witness.source.name.clone(), witness.source.clone());
        self.theories.insert(witness.target.name.clone(), witness.target.clone());
        self.witnesses.insert(key.clone(), witness.clone());
        self.log.push(Step::Register { witness, corpus });
        Ok(key)
    }

    /// (INV): from σ ≤ σ′, 𝒥(σ) ⊆ 𝒥(σ′).
    pub fn apply_inv(&mut self, key: &str) -> Result<()> {
        let w = self.witnesses.get(key).ok_or_else(|| Error::UnregisteredWitness(key.into()))?;
        let (src, dst) = (w.source.name.clone(), w.target.name.clone());
        let moved: Vec<Formula> =
            self.j_facts.iter().filter(|j| j.theory == src).map(|j| j.sentence.clone()).collect();
        for s in moved {
            self.add_j(&dst, s);
        }
        self.log.push(Step::Inv { witness: key.into() });
        Ok(())
    }

    /// Re-applies the log to a fresh state with the same admission rule.
    pub fn replay(&self) -> Result<ICState> {
        let mut st = ICState::new(&self.base, self.stage.clone(), self.admission.clone());
        for step in &self.log {
            st.apply(step.clone())?;
        }
        Ok(st)
    }

    fn apply(&mut self, step: Step) -> Result<()> {
        match step {
            Step::Admit { level, proof } => self.admit(&level, proof),
            Step::Ref { theory, template } => self.apply_ref(&theory, &template),
            Step::Derive { theory, proof } => self.apply_derive(&theory, proof),
            Step::Register { witness, corpus } => self.register_witness(witness, corpus).map(|_| ()),
            Step::Inv { witness } => self.apply_inv(&witness),
        }
    }

    /// Admits every finite axiom of τ by its one-leaf proof.
    pub fn seed(&mut self) -> Result<()> {
        let level = self.admission.keys().next().cloned().ok_or(Error::EmptyList)?;
        let th = self.admission[&level].clone();
        for ax in th.axioms.clone() {
            self.admit(&level, Proof::axiom(ax))?;
        }
        Ok(())
    }

    /// (REF) on the small-reflection theory τ′ for φ, then the derivation of
    /// the uniform reflection instance for φ in 𝒥(τ′).
    pub fn ref_small(&mut self, phi: &Formula) -> Result<Arc<Theory>> {
        let sr = Arc::new(gen_small_reflection_theory(&self.base, phi)?);
        let (all_t, proof) = reflection_from_template(&self.base, phi)?;
        let Formula::All(_, template) = &all_t else { unreachable!() };
        self.apply_ref(&sr, template)?;
        self.apply_derive(&sr.name, proof)?;
        Ok(sr)
    }

    /// Registers the small-reflection witness τ′ ≤ I-theory, certified on a
    /// generated corpus, and applies (INV) with it.
    pub fn inv_small(&mut self, phi: &Formula) -> Result<()> {
        let sr = Arc::new(gen_small_reflection_theory(&self.base, phi)?);
        let witness = ReductionWitness {
            source: sr.clone(),
            target: self.i_theory(),
            transformer: Transformer::SmallReflection,
            bound: cubic_bound(),
            provenance: format!("small reflection for {phi}"),
        };
        let corpus = small_reflection_proofs(&sr, SCRIPT_CORPUS);
        let key = self.register_witness(witness, corpus)?;
        self.apply_inv(&key)
    }
}

/// Runs a line-oriented script from IC_0 over τ. Commands: `seed`,
/// `ref-small <formula>`, `inv-small <formula>`, `reflect <formula>` (both
/// of the former); `#` starts a comment.
pub fn run_script(tau: &Arc<Theory>, script: &str) -> Result<ICState> {
    let mut st = ic_base(tau);
    for (n, line) in script.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (cmd, arg) = line.split_once(char::is_whitespace).map_or((line, ""), |(c, a)| (c, a.trim()));
        let formula = || -> Result<Formula> {
            if arg.is_empty() {
                return Err(Error::Malformed(format!("line {}: {cmd} needs a formula", n + 1)));
            }
            Ok(parse_formula(arg, &tau.signature)?)
        };
        let at = |e: Error| match e {
            Error::Malformed(m) => Error::Malformed(m),
            e => Error::Premise(format!("line {}: {e}", n + 1)),
        };
        match cmd {
            "seed" => st.seed().map_err(at)?,
            "ref-small" => st.ref_small(&formula()?).map(|_| ()).map_err(at)?,
            "inv-small" => st.inv_small(&formula()?).map_err(at)?,
            "reflect" => {
                let phi = formula()?;
                st.ref_small(&phi).map_err(at)?;
                st.inv_small(&phi).map_err(at)?;
            }
            other => return Err(Error::Malformed(format!("line {}: unknown command {other}", n + 1))),
        }
    }
    Ok(st)
}

/// Name of the finite stage presentation produced at α.
pub fn stage_name(base: &str, alpha: &Ordinal) -> String {
    format!("{base}+J{}", alpha.succ().compact())
}

/// τ plus the sentences s with (I-theory, s) ∈ 𝒥 after running `script`:
/// a finite under-approximation of τ_{α+1}.
pub fn commitments_at_stage(tau: &Arc<Theory>, alpha: &Ordinal, script: &str) -> Result<Theory> {
    let st = run_script(tau, script)?;
    let name = st.i_theory_name();
    let mut axioms: Vec<Formula> = Vec::new();
    for j in st.j_facts.iter().filter(|j| j.theory == name) {
        if !axioms.iter().any(|a| alpha_eq(a, &j.sentence)) {
            axioms.push(j.sentence.clone());
        }
    }
    Ok(Theory {
        name: stage_name(&tau.name, alpha),
        signature: tau.signature.clone(),
        axioms,
        schemata: Vec::new(),
        families: vec![Family::Includes(tau.clone())],
        nat: tau.nat.clone(),
    })
}
