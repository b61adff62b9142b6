use std::collections::BTreeSet;

use crate::syntax::{analysis::occurs_unguarded, Formula, Signatures};

/// Drops the disjuncts of `γ` that conjoin a bare `x`.
///
/// `γ` is put in disjunctive normal form over the atoms `x`, literals and
/// maximal modal subformulas; the disjuncts containing `x` itself form the
/// `x & γ1` part and the rest is returned as `γ2`. Both formulas have the
/// same prefixpoints. A guarded input is returned unchanged.
pub fn guard_split(gamma: &Formula, x: &str) -> Formula {
    if !occurs_unguarded(gamma, x, &Signatures::new()) {
        return gamma.clone();
    }
    let bare = Formula::var(x);
    Formula::or(
        boolean_dnf(gamma, true)
            .into_iter()
            .filter(|conj| !conj.contains(&bare))
            .map(Formula::and),
    )
}

/// DNF at the Boolean level; modal subformulas and their negations are
/// atoms.
fn boolean_dnf(f: &Formula, positive: bool) -> BTreeSet<BTreeSet<Formula>> {
    let unit = |atom: Formula| [[atom].into()].into();
    match f {
        Formula::Top | Formula::Bot => {
            if (*f == Formula::Top) == positive {
                [BTreeSet::new()].into()
            } else {
                BTreeSet::new()
            }
        }
        Formula::Neg(g) => boolean_dnf(g, !positive),
        Formula::And(gs) | Formula::Or(gs) => {
            let conjunctive = matches!(f, Formula::And(_)) == positive;
            if conjunctive {
                let mut acc: BTreeSet<BTreeSet<Formula>> = [BTreeSet::new()].into();
                for g in gs {
                    let part = boolean_dnf(g, positive);
                    acc = acc
                        .iter()
                        .flat_map(|a| part.iter().map(move |b| a.union(b).cloned().collect()))
                        .collect();
                }
                acc
            } else {
                gs.iter().flat_map(|g| boolean_dnf(g, positive)).collect()
            }
        }
        atom => {
            if positive {
                unit(atom.clone())
            } else {
                unit(Formula::not(atom.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn split(text: &str) -> String {
        guard_split(&parse(text, &Signatures::new()).unwrap(), "x").to_string()
    }

    #[test]
    fn bare_disjunct_is_absorbed() {
        assert_eq!(split("x | <a>x"), "<a>x");
    }

    #[test]
    fn guarded_input_is_identity() {
        assert_eq!(split("<a>x"), "<a>x");
        assert_eq!(split("p | (q & [a]x)"), "p | (q & [a]x)");
    }

    #[test]
    fn everything_conjoined_with_x() {
        assert_eq!(split("(x & p) | (x & <a>x)"), "F");
        assert_eq!(split("x & (p | <a>x)"), "F");
    }

    #[test]
    fn mixed_disjuncts() {
        assert_eq!(split("(x & p) | q | ~~<a>x"), "q | <a>x");
    }
}
