use std::collections::BTreeMap;

use super::fixpoint::lfp_formula;
use super::model::{KripkeModel, StateSet};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signatures};

/// Assignment of state sets to variables, consulted before the model's own
/// valuation.
pub type Env = BTreeMap<String, StateSet>;

/// Truth set of `f`. Fixpoint connectives are evaluated by Kleene iteration
/// of their bodies.
pub fn eval(m: &KripkeModel, env: &Env, f: &Formula, sigs: &Signatures) -> Result<StateSet> {
    Ok(match f {
        Formula::Top => m.all(),
        Formula::Bot => StateSet::EMPTY,
        Formula::Var(v) => match env.get(v).or_else(|| m.valuation.get(v)) {
            Some(s) => *s,
            None => return Err(Error::Unassigned(v.clone())),
        },
        Formula::Neg(g) => eval(m, env, g, sigs)?.complement(m.size()),
        Formula::And(gs) => {
            let mut acc = m.all();
            for g in gs {
                acc = acc.intersection(eval(m, env, g, sigs)?);
            }
            acc
        }
        Formula::Or(gs) => {
            let mut acc = StateSet::EMPTY;
            for g in gs {
                acc = acc.union(eval(m, env, g, sigs)?);
            }
            acc
        }
        Formula::Diamond(a, g) => m.diamond(a, eval(m, env, g, sigs)?),
        Formula::Boxed(a, g) => m.boxed(a, eval(m, env, g, sigs)?),
        Formula::Nabla(a, set) => {
            let mut union = StateSet::EMPTY;
            let mut acc = m.all();
            for g in set {
                let v = eval(m, env, g, sigs)?;
                union = union.union(v);
                acc = acc.intersection(m.diamond(a, v));
            }
            acc.intersection(m.boxed(a, union))
        }
        Formula::Sharp(name, args) => {
            let sig = sigs
                .get(name)
                .ok_or_else(|| Error::UnknownConnective(name.clone()))?;
            if sig.arity() != args.len() {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: sig.arity(),
                    got: args.len(),
                });
            }
            let mut inner = Env::new();
            for (p, arg) in sig.params.iter().zip(args) {
                inner.insert(p.clone(), eval(m, env, arg, sigs)?);
            }
            lfp_formula(m, &inner, &sig.body, &sig.x, sigs)?.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Action};

    fn chain() -> KripkeModel {
        let a = Action::new("a");
        let mut m = KripkeModel::new(3).unwrap();
        m.add_edge(&a, 0, 1);
        m.add_edge(&a, 1, 2);
        m.set_prop("p", StateSet::singleton(2));
        m
    }

    #[test]
    fn cover_on_isolated_state() {
        let mut m = KripkeModel::new(1).unwrap();
        m.add_action(&Action::new("a"));
        let sigs = Signatures::new();
        let f = |t| eval(&m, &Env::new(), &parse(t, &sigs).unwrap(), &sigs).unwrap();
        assert_eq!(f("nab a {}"), StateSet::singleton(0));
        assert_eq!(f("nab a {T}"), StateSet::EMPTY);
    }

    #[test]
    fn reachability_connective_on_chain() {
        let sigs = Signatures::load("delta(x; p) := p | <a>x").unwrap();
        let f = parse("sharp delta(p)", &sigs).unwrap();
        assert_eq!(
            eval(&chain(), &Env::new(), &f, &sigs).unwrap(),
            StateSet(0b111)
        );
    }

    #[test]
    fn unassigned_variable() {
        let sigs = Signatures::new();
        let f = parse("q", &sigs).unwrap();
        assert_eq!(
            eval(&chain(), &Env::new(), &f, &sigs),
            Err(Error::Unassigned("q".into()))
        );
    }

    #[test]
    fn environment_shadows_valuation() {
        let sigs = Signatures::new();
        let env: Env = [("p".to_string(), StateSet::singleton(0))].into();
        let f = parse("<a>p", &sigs).unwrap();
        assert_eq!(eval(&chain(), &env, &f, &sigs).unwrap(), StateSet::EMPTY);
    }
}
