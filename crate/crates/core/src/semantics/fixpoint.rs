use std::collections::BTreeSet;

use super::eval::{eval, Env};
use super::model::{KripkeModel, StateSet};
use crate::eqsystem::ModalSystem;
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signatures};

/// Approximants `c_0 = ⊥, c_{n+1} = f(c_n)` up to the first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxTrace<T> {
    pub stages: Vec<T>,
    /// Index of the first stage equal to its successor.
    pub converged_at: usize,
}

/// Least fixpoint of `γ` in `x` by Kleene iteration from the empty set.
pub fn lfp_formula(
    m: &KripkeModel,
    env: &Env,
    gamma: &Formula,
    x: &str,
    sigs: &Signatures,
) -> Result<(StateSet, ApproxTrace<StateSet>)> {
    let bound = m.size() + 1;
    let mut env = env.clone();
    let mut stages = vec![StateSet::EMPTY];
    for round in 0..=bound {
        let current = *stages.last().unwrap();
        env.insert(x.to_string(), current);
        let next = eval(m, &env, gamma, sigs)?;
        if next == current {
            return Ok((
                current,
                ApproxTrace {
                    stages,
                    converged_at: round,
                },
            ));
        }
        if !current.is_subset(next) {
            return Err(Error::NonMonotone(round + 1));
        }
        stages.push(next);
    }
    Err(Error::NoConvergence(bound))
}

/// `c_0, …, c_rounds` for `γ` in `x`, without stopping at convergence.
pub fn approximants(
    m: &KripkeModel,
    env: &Env,
    gamma: &Formula,
    x: &str,
    sigs: &Signatures,
    rounds: usize,
) -> Result<Vec<StateSet>> {
    let mut env = env.clone();
    let mut out = vec![StateSet::EMPTY];
    for _ in 0..rounds {
        env.insert(x.to_string(), *out.last().unwrap());
        out.push(eval(m, &env, gamma, sigs)?);
    }
    Ok(out)
}

/// One simultaneous application of the equations `vars[i] = terms[i]`.
pub fn apply_equations(
    m: &KripkeModel,
    env: &Env,
    vars: &[String],
    terms: &[Formula],
    point: &[StateSet],
    sigs: &Signatures,
) -> Result<Vec<StateSet>> {
    let mut env = env.clone();
    for (v, s) in vars.iter().zip(point) {
        env.insert(v.clone(), *s);
    }
    terms.iter().map(|t| eval(m, &env, t, sigs)).collect()
}

/// `T^0(⊥), …, T^rounds(⊥)` for a system given as parallel slices.
pub fn system_approximants(
    m: &KripkeModel,
    env: &Env,
    vars: &[String],
    terms: &[Formula],
    sigs: &Signatures,
    rounds: usize,
) -> Result<Vec<Vec<StateSet>>> {
    let mut out = vec![vec![StateSet::EMPTY; vars.len()]];
    for _ in 0..rounds {
        let next = apply_equations(m, env, vars, terms, out.last().unwrap(), sigs)?;
        out.push(next);
    }
    Ok(out)
}

/// Least solution of the equations by simultaneous Kleene iteration.
pub fn lfp_equations(
    m: &KripkeModel,
    env: &Env,
    vars: &[String],
    terms: &[Formula],
    sigs: &Signatures,
) -> Result<(Vec<StateSet>, ApproxTrace<Vec<StateSet>>)> {
    let bound = m.size() * vars.len() + 1;
    let mut stages = vec![vec![StateSet::EMPTY; vars.len()]];
    for round in 0..=bound {
        let current = stages.last().unwrap();
        let next = apply_equations(m, env, vars, terms, current, sigs)?;
        if next == *current {
            let sol = next;
            return Ok((
                sol,
                ApproxTrace {
                    stages,
                    converged_at: round,
                },
            ));
        }
        if current.iter().zip(&next).any(|(c, n)| !c.is_subset(*n)) {
            return Err(Error::NonMonotone(round + 1));
        }
        stages.push(next);
    }
    Err(Error::NoConvergence(bound))
}

/// Least solution of a modal system, in the order of its variables.
pub fn lfp_system(
    m: &KripkeModel,
    env: &Env,
    sys: &ModalSystem,
    sigs: &Signatures,
) -> Result<(Vec<StateSet>, ApproxTrace<Vec<StateSet>>)> {
    let terms: Vec<Formula> = sys.vars.iter().map(|z| sys.terms[z].clone()).collect();
    lfp_equations(m, env, &sys.vars, &terms, sigs)
}

/// `ι(a)(y_S) = ⋂_{z ∈ S} a_z`, for subsets given as index sets into `a`.
pub fn iota(a: &[StateSet], subsets: &[BTreeSet<usize>]) -> Vec<StateSet> {
    subsets
        .iter()
        .map(|s| {
            s.iter()
                .fold(StateSet(u64::MAX), |acc, i| acc.intersection(a[*i]))
        })
        .map(|s| if s.0 == u64::MAX { StateSet::EMPTY } else { s })
        .collect()
}

/// Intersection of all prefixpoints of `γ` in `x`, by enumerating every
/// subset of states.
pub fn least_prefixpoint_brute(
    m: &KripkeModel,
    env: &Env,
    gamma: &Formula,
    x: &str,
    sigs: &Signatures,
) -> Result<StateSet> {
    assert!(m.size() <= 16, "brute force limited to 16 states");
    let mut env = env.clone();
    let mut acc = m.all();
    for code in 0u64..1 << m.size() {
        let candidate = StateSet(code);
        env.insert(x.to_string(), candidate);
        if eval(m, &env, gamma, sigs)?.is_subset(candidate) {
            acc = acc.intersection(candidate);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Action};

    fn two_cycle() -> KripkeModel {
        let a = Action::new("a");
        let mut m = KripkeModel::new(2).unwrap();
        m.add_edge(&a, 0, 1);
        m.add_edge(&a, 1, 1);
        m.set_prop("p", StateSet::singleton(0));
        m
    }

    #[test]
    fn identity_and_constant() {
        let sigs = Signatures::new();
        let m = two_cycle();
        let (v, _) = lfp_formula(&m, &Env::new(), &Formula::var("x"), "x", &sigs).unwrap();
        assert_eq!(v, StateSet::EMPTY);
        let (v, tr) = lfp_formula(&m, &Env::new(), &Formula::Top, "x", &sigs).unwrap();
        assert_eq!(v, m.all());
        assert_eq!(tr.converged_at, 1);
    }

    #[test]
    fn first_example_matches_brute_force() {
        let sigs = Signatures::new();
        let g = parse("(p & [a]x) | (~p & <a>(x & <a>x))", &sigs).unwrap();
        let m = two_cycle();
        let (v, tr) = lfp_formula(&m, &Env::new(), &g, "x", &sigs).unwrap();
        assert_eq!(
            v,
            least_prefixpoint_brute(&m, &Env::new(), &g, "x", &sigs).unwrap()
        );
        assert!(tr.stages.windows(2).all(|w| w[0].is_subset(w[1])));
    }

    #[test]
    fn negative_occurrence_detected() {
        let sigs = Signatures::new();
        let g = parse("~x", &sigs).unwrap();
        assert!(matches!(
            lfp_formula(&two_cycle(), &Env::new(), &g, "x", &sigs),
            Err(Error::NonMonotone(_))
        ));
    }

    #[test]
    fn iota_intersects() {
        let a = [StateSet(0b011), StateSet(0b110)];
        let subsets = vec![[0].into(), [1].into(), [0, 1].into()];
        assert_eq!(iota(&a, &subsets), vec![a[0], a[1], StateSet(0b010)]);
        assert_eq!(
            iota(&[StateSet::EMPTY; 2], &subsets),
            vec![StateSet::EMPTY; 3]
        );
    }
}
