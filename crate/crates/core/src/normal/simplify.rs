use std::collections::BTreeSet;

use crate::syntax::{Action, Formula, Literal};

/// Cover arithmetic on an arbitrary formula, applied bottom-up:
///
/// * `nab_a Φ` with `F ∈ Φ` is `F`;
/// * a conjunction with complementary literals, with `F`, or with both
///   `nab_a {}` and `nab_a Φ` for non-empty `Φ` is `F`;
/// * `F` disjuncts are dropped;
/// * duplicate elements and disjuncts are merged.
pub fn nabla_simplify(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Var(_) => f.clone(),
        Formula::Neg(g) => Formula::not(nabla_simplify(g)),
        Formula::Diamond(a, g) => Formula::dia(a, nabla_simplify(g)),
        Formula::Boxed(a, g) => Formula::boxed(a, nabla_simplify(g)),
        Formula::Sharp(n, args) => {
            Formula::Sharp(n.clone(), args.iter().map(nabla_simplify).collect())
        }
        Formula::Nabla(a, set) => {
            let elems: Vec<Formula> = set.iter().map(nabla_simplify).collect();
            if elems.contains(&Formula::Bot) {
                Formula::Bot
            } else {
                Formula::nabla(a, elems)
            }
        }
        Formula::Or(gs) => {
            Formula::or(gs.iter().map(nabla_simplify).filter(|g| *g != Formula::Bot))
        }
        Formula::And(gs) => {
            let parts = Formula::and(gs.iter().map(nabla_simplify));
            if conjunction_is_false(&parts) {
                Formula::Bot
            } else {
                parts
            }
        }
    }
}

fn conjunction_is_false(f: &Formula) -> bool {
    let conjuncts = f.conjuncts();
    if conjuncts.contains(&&Formula::Bot) {
        return true;
    }
    let lits: BTreeSet<Literal> = conjuncts
        .iter()
        .filter_map(|c| Literal::from_formula(c))
        .collect();
    if lits.iter().any(|l| lits.contains(&l.complement())) {
        return true;
    }
    let mut empty: BTreeSet<&Action> = BTreeSet::new();
    let mut nonempty: BTreeSet<&Action> = BTreeSet::new();
    for c in &conjuncts {
        if let Formula::Nabla(a, set) = c {
            if set.is_empty() {
                empty.insert(a);
            } else {
                nonempty.insert(a);
            }
        }
    }
    empty.intersection(&nonempty).next().is_some()
}
