use std::collections::HashMap;

use varisat::{ExtendFormula, Lit, Solver};

use crate::syntax::{alpha_key, Formula};

/// Most distinct propositional atoms a tautology check will consider.
pub const MAX_ATOMS: usize = 1 << 12;

enum Prop {
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
}

fn skeleton(f: &Formula, atoms: &mut HashMap<String, usize>) -> Prop {
    match f {
        Formula::Not(a) => Prop::Not(Box::new(skeleton(a, atoms))),
        Formula::And(a, b) => Prop::And(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        Formula::Or(a, b) => Prop::Or(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        Formula::Imp(a, b) => Prop::Imp(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        other => {
            let n = atoms.len();
            Prop::Var(*atoms.entry(alpha_key(other)).or_insert(n))
        }
    }
}

fn encode(p: &Prop, atoms: &[Lit], solver: &mut Solver) -> Lit {
    match p {
        Prop::Var(i) => atoms[*i],
        Prop::Not(a) => !encode(a, atoms, solver),
        Prop::And(a, b) | Prop::Or(a, b) | Prop::Imp(a, b) => {
            let mut la = encode(a, atoms, solver);
            let lb = encode(b, atoms, solver);
            let g = solver.new_lit();
            if let Prop::Imp(..) = p {
                la = !la;
            }
            if let Prop::And(..) = p {
                solver.add_clause(&[!g, la]);
                solver.add_clause(&[!g, lb]);
                solver.add_clause(&[g, !la, !lb]);
            } else {
                solver.add_clause(&[!g, la, lb]);
                solver.add_clause(&[g, !la]);
                solver.add_clause(&[g, !lb]);
            }
            g
        }
    }
}

/// True iff `f` is a propositional tautology when every maximal
/// non-connective subformula is read as an atom (α-equivalent atoms are
/// identified). Formulas with more than `MAX_ATOMS` atoms are rejected.
pub fn is_tautology(f: &Formula) -> bool {
    let mut atoms = HashMap::new();
    let p = skeleton(f, &mut atoms);
    if atoms.len() > MAX_ATOMS {
        return false;
    }
    let mut solver = Solver::new();
    let lits: Vec<Lit> = (0..atoms.len()).map(|_| solver.new_lit()).collect();
    let root = encode(&p, &lits, &mut solver);
    solver.add_clause(&[!root]);
    !solver.solve().expect("solver without proof output cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn t(s: &str) -> bool {
        let sig = Signature::relational("t", &[("P", 1), ("Q", 1)]);
        is_tautology(&parse_formula(s, &sig).unwrap())
    }

    #[test]
    fn classic_tautologies() {
        assert!(t("(-> (P x) (P x))"));
        assert!(t("(or (P x) (not (P x)))"));
        assert!(t("(-> (-> (not (Q x)) (not (P x))) (-> (P x) (Q x)))"));
        assert!(t("(-> (all y (P y)) (all z (P z)))"));
        assert!(!t("(-> (P x) (Q x))"));
        assert!(!t("(-> (P x) (P y))"));
    }
}
