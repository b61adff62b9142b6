use std::collections::BTreeSet;

use super::eval::{eval, Env};
use super::fixpoint::lfp_equations;
use super::model::{all_valuations, KripkeModel, StateSet};
use crate::axioms::{Axiom, Implication, Rule};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signatures};

/// Largest `|states| · |variables|` enumerated by default.
pub const DEFAULT_BUDGET: usize = 20;

/// `FLATFIX_BUDGET` if set to a number, [`DEFAULT_BUDGET`] otherwise.
pub fn budget_from_env() -> usize {
    std::env::var("FLATFIX_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .map(|b: usize| b.min(40))
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Valuation of the schematic variables and a state where the
    /// implication (the conclusion, for rules) fails.
    Invalid {
        assignment: Env,
        state: usize,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn schematic_vars<'a>(imps: impl IntoIterator<Item = &'a Implication>) -> BTreeSet<String> {
    imps.into_iter()
        .flat_map(|i| i.lhs.free_vars().into_iter().chain(i.rhs.free_vars()))
        .collect()
}

fn within_budget(m: &KripkeModel, vars: usize, budget: usize) -> Result<()> {
    let needed = m.size() * vars;
    if needed > budget {
        Err(Error::Budget { needed, budget })
    } else {
        Ok(())
    }
}

fn failure(
    m: &KripkeModel,
    env: &Env,
    imp: &Implication,
    sigs: &Signatures,
) -> Result<Option<usize>> {
    let lhs = eval(m, env, &imp.lhs, sigs)?;
    let rhs = eval(m, env, &imp.rhs, sigs)?;
    Ok(lhs.first_outside(rhs))
}

/// Validity of `lhs -> rhs` on the frame of `m`: every valuation of its free
/// variables is tried.
pub fn check_axiom(
    m: &KripkeModel,
    axiom: &Axiom,
    sigs: &Signatures,
    budget: usize,
) -> Result<Verdict> {
    check_implication(m, &axiom.implication(), sigs, budget)
}

pub fn check_implication(
    m: &KripkeModel,
    imp: &Implication,
    sigs: &Signatures,
    budget: usize,
) -> Result<Verdict> {
    let vars = schematic_vars([imp]);
    within_budget(m, vars.len(), budget)?;
    for env in all_valuations(m.size(), &vars) {
        if let Some(state) = failure(m, &env, imp, sigs)? {
            return Ok(Verdict::Invalid {
                assignment: env,
                state,
            });
        }
    }
    Ok(Verdict::Valid)
}

/// Validity of a rule on the frame of `m`: every valuation making all
/// premises globally true makes the conclusion globally true.
pub fn check_rule(
    m: &KripkeModel,
    rule: &Rule,
    sigs: &Signatures,
    budget: usize,
) -> Result<Verdict> {
    let vars = schematic_vars(rule.premises.iter().chain([&rule.conclusion]));
    within_budget(m, vars.len(), budget)?;
    'valuations: for env in all_valuations(m.size(), &vars) {
        for p in &rule.premises {
            if failure(m, &env, p, sigs)?.is_some() {
                continue 'valuations;
            }
        }
        if let Some(state) = failure(m, &env, &rule.conclusion, sigs)? {
            return Ok(Verdict::Invalid {
                assignment: env,
                state,
            });
        }
    }
    Ok(Verdict::Valid)
}

/// Rule check for rules shaped `{σ_Q -> y_Q}_Q / χ -> y_S` with distinct
/// variables `y_Q` occurring positively in the `σ_Q`.
///
/// The valuations satisfying the premises are exactly the prefixpoints of the
/// system `y_Q = σ_Q`, so the rule holds iff `χ` is below the `y_S` component
/// of its least solution. Only the remaining variables are enumerated.
pub fn check_rule_lfp(
    m: &KripkeModel,
    rule: &Rule,
    sigs: &Signatures,
    budget: usize,
) -> Result<Verdict> {
    let mut ys = Vec::new();
    let mut terms = Vec::new();
    for p in &rule.premises {
        match &p.rhs {
            Formula::Var(y) if !ys.contains(y) => {
                ys.push(y.clone());
                terms.push(p.lhs.clone());
            }
            _ => {
                return Err(Error::System(
                    "premise right-hand sides must be distinct variables".into(),
                ))
            }
        }
    }
    let target = match &rule.conclusion.rhs {
        Formula::Var(y) => ys
            .iter()
            .position(|v| v == y)
            .ok_or_else(|| Error::System(format!("conclusion variable `{y}` has no premise")))?,
        _ => {
            return Err(Error::System(
                "conclusion right-hand side must be a variable".into(),
            ))
        }
    };
    let mut params = schematic_vars(rule.premises.iter().chain([&rule.conclusion]));
    for y in &ys {
        params.remove(y);
    }
    within_budget(m, params.len(), budget)?;
    for env in all_valuations(m.size(), &params) {
        let (sol, _) = lfp_equations(m, &env, &ys, &terms, sigs)?;
        let mut full = env.clone();
        for (y, s) in ys.iter().zip(&sol) {
            full.insert(y.clone(), *s);
        }
        let chi = eval(m, &full, &rule.conclusion.lhs, sigs)?;
        if let Some(state) = chi.first_outside(sol[target]) {
            return Ok(Verdict::Invalid {
                assignment: full,
                state,
            });
        }
    }
    Ok(Verdict::Valid)
}

/// Whether `f` is true at every state under every valuation of its free
/// variables.
pub fn is_valid_formula(
    m: &KripkeModel,
    f: &Formula,
    sigs: &Signatures,
    budget: usize,
) -> Result<bool> {
    let imp = Implication {
        lhs: Formula::Top,
        rhs: f.clone(),
    };
    Ok(check_implication(m, &imp, sigs, budget)?.is_valid())
}

/// Whether the truth sets of `f` and `g` agree under every valuation.
pub fn equivalent_on(
    m: &KripkeModel,
    f: &Formula,
    g: &Formula,
    sigs: &Signatures,
    budget: usize,
) -> Result<bool> {
    let vars: BTreeSet<String> = f.free_vars().into_iter().chain(g.free_vars()).collect();
    within_budget(m, vars.len(), budget)?;
    for env in all_valuations(m.size(), &vars) {
        if eval(m, &env, f, sigs)? != eval(m, &env, g, sigs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truth sets agree at the model's own valuation.
pub fn agree_at(
    m: &KripkeModel,
    env: &Env,
    f: &Formula,
    g: &Formula,
    sigs: &Signatures,
) -> Result<Option<StateSet>> {
    let a = eval(m, env, f, sigs)?;
    let b = eval(m, env, g, sigs)?;
    Ok(if a == b {
        None
    } else {
        Some(StateSet(a.0 ^ b.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::kozen_park;
    use crate::syntax::{parse, Action};

    fn chain(n: usize) -> KripkeModel {
        let a = Action::new("a");
        let mut m = KripkeModel::new(n).unwrap();
        for i in 0..n - 1 {
            m.add_edge(&a, i, i + 1);
        }
        m
    }

    #[test]
    fn kozen_park_is_valid() {
        let sigs = Signatures::load("delta(x; p) := p | <a>x").unwrap();
        let kp = kozen_park(sigs.get("delta").unwrap());
        let m = chain(3);
        assert_eq!(
            check_axiom(&m, &kp.axioms[0], &sigs, 20).unwrap(),
            Verdict::Valid
        );
        assert_eq!(
            check_rule(&m, &kp.rules[0], &sigs, 20).unwrap(),
            Verdict::Valid
        );
        assert_eq!(
            check_rule_lfp(&m, &kp.rules[0], &sigs, 20).unwrap(),
            Verdict::Valid
        );
    }

    #[test]
    fn greatest_fixpoint_reading_fails_the_rule() {
        let sigs = Signatures::new();
        let a = Action::new("a");
        let mut m = KripkeModel::new(1).unwrap();
        m.add_edge(&a, 0, 0);
        let rule = Rule {
            name: "bad".into(),
            premises: vec![Implication {
                lhs: parse("<a>y", &sigs).unwrap(),
                rhs: Formula::var("y"),
            }],
            conclusion: Implication {
                lhs: Formula::Top,
                rhs: Formula::var("y"),
            },
        };
        assert!(!check_rule(&m, &rule, &sigs, 20).unwrap().is_valid());
        assert!(!check_rule_lfp(&m, &rule, &sigs, 20).unwrap().is_valid());
    }

    #[test]
    fn counterexample_and_budget() {
        let sigs = Signatures::new();
        let ax = Axiom {
            name: "t".into(),
            lhs: Formula::var("p"),
            rhs: parse("<a>p", &sigs).unwrap(),
        };
        match check_axiom(&chain(2), &ax, &sigs, 20).unwrap() {
            Verdict::Invalid { assignment, state } => assert!(assignment["p"].contains(state)),
            Verdict::Valid => panic!("reflexivity axiom holds on a chain"),
        }
        assert!(matches!(
            check_axiom(&chain(30), &ax, &sigs, 20),
            Err(Error::Budget {
                needed: 30,
                budget: 20
            })
        ));
    }

    #[test]
    fn equivalence() {
        let sigs = Signatures::new();
        let m = chain(3);
        let f = parse("<a>p", &sigs).unwrap();
        assert!(equivalent_on(&m, &f, &parse("nab a {p, T}", &sigs).unwrap(), &sigs, 20).unwrap());
        assert!(!equivalent_on(&m, &f, &parse("[a]p", &sigs).unwrap(), &sigs, 20).unwrap());
        assert!(is_valid_formula(&m, &parse("p | ~p", &sigs).unwrap(), &sigs, 20).unwrap());
    }
}
