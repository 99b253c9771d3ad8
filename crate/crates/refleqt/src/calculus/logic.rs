use super::proof::Axiom;
use super::taut::is_tautology;
use crate::syntax::{alpha_eq, substitute, Formula, Term, Var, LEQ};

fn leq(x: &Var, t: &Term) -> Formula {
    Formula::atom(LEQ, vec![Term::Var(x.clone()), t.clone()])
}

fn both_ways(f: &Formula, expect: impl Fn(&Formula) -> Option<Formula>) -> bool {
    let Formula::Imp(a, b) = f else { return false };
    match (expect(a), expect(b)) {
        (Some(e), _) if alpha_eq(&e, b) => true,
        (_, Some(e)) => alpha_eq(&e, a),
        _ => false,
    }
}

/// Checks that `f` is an instance of the logical axiom scheme `ax`.
pub fn check_logical(ax: &Axiom, f: &Formula) -> Result<(), String> {
    let ok = match ax {
        Axiom::Taut => is_tautology(f),
        Axiom::K => matches!(f, Formula::Imp(a, r) if matches!(&**r, Formula::Imp(_, a2) if alpha_eq(a, a2))),
        Axiom::S => match f {
            Formula::Imp(l, r) => match (&**l, &**r) {
                (Formula::Imp(a, bc), Formula::Imp(ab, ac)) => match (&**bc, &**ab, &**ac) {
                    (Formula::Imp(b, c), Formula::Imp(a2, b2), Formula::Imp(a3, c2)) => {
                        alpha_eq(a, a2) && alpha_eq(a, a3) && alpha_eq(b, b2) && alpha_eq(c, c2)
                    }
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
        Axiom::N => match f {
            Formula::Imp(l, r) => match (&**l, &**r) {
                (Formula::Imp(nb, na), Formula::Imp(a, b)) => {
                    alpha_eq(nb, &Formula::not((**b).clone())) && alpha_eq(na, &Formula::not((**a).clone()))
                }
                _ => false,
            },
            _ => false,
        },
        Axiom::ForallElim(t) => match f {
            Formula::Imp(l, r) => match &**l {
                Formula::All(x, phi) => alpha_eq(r, &substitute(phi, x, t)),
                _ => false,
            },
            _ => false,
        },
        Axiom::ExIntro(t) => match f {
            Formula::Imp(l, r) => match &**r {
                Formula::Ex(x, phi) => alpha_eq(l, &substitute(phi, x, t)),
                _ => false,
            },
            _ => false,
        },
        Axiom::ForallDist => match f {
            Formula::Imp(l, _) => match &**l {
                Formula::All(x, body) => match &**body {
                    Formula::Imp(a, b) => {
                        let expect = Formula::imp(
                            (**l).clone(),
                            Formula::imp(
                                Formula::all(x.clone(), (**a).clone()),
                                Formula::all(x.clone(), (**b).clone()),
                            ),
                        );
                        alpha_eq(f, &expect)
                    }
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        },
        Axiom::VacuousGen => match f {
            Formula::Imp(a, r) => match &**r {
                Formula::All(x, a2) => !a.free_vars().contains(x) && alpha_eq(a, a2),
                _ => false,
            },
            _ => false,
        },
        Axiom::EqRefl => matches!(f, Formula::Eq(a, b) if a == b),
        Axiom::Leibniz { var, body, left, right } => {
            let expect = Formula::imp(
                Formula::eq(left.clone(), right.clone()),
                Formula::imp(substitute(body, var, left), substitute(body, var, right)),
            );
            alpha_eq(f, &expect)
        }
        Axiom::ExDef => both_ways(f, |side| match side {
            Formula::Ex(x, phi) => {
                Some(Formula::not(Formula::all(x.clone(), Formula::not((**phi).clone()))))
            }
            _ => None,
        }),
        Axiom::BallDef => both_ways(f, |side| match side {
            Formula::BAll(x, t, phi) if !t.free_var_set().contains(x) => {
                Some(Formula::all(x.clone(), Formula::imp(leq(x, t), (**phi).clone())))
            }
            _ => None,
        }),
        Axiom::BexDef => both_ways(f, |side| match side {
            Formula::BEx(x, t, phi) if !t.free_var_set().contains(x) => {
                Some(Formula::ex(x.clone(), Formula::and(leq(x, t), (**phi).clone())))
            }
            _ => None,
        }),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("not an instance of logical scheme {}", ax.tag()))
    }
}
