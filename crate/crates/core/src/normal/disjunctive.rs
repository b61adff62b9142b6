//! Disjunctive formulas: conjunction appears only inside special conjunctions.

use std::collections::BTreeSet;

use super::cover::{dnf_meet, Arith, Meet, SpecialConjunction};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Literal};

/// A disjunction of special conjunctions whose cover arguments are again
/// disjunctive. The empty disjunction is `F`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disj(pub BTreeSet<SpecialConjunction<Disj>>);

impl Disj {
    pub fn bot() -> Self {
        Disj(BTreeSet::new())
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or(self.0.iter().map(|sc| sc.to_formula_with(Disj::to_formula)))
    }
}

impl Meet for Disj {
    fn top() -> Self {
        Disj([SpecialConjunction::default()].into())
    }

    fn is_top(&self) -> bool {
        self.0.len() == 1
            && self
                .0
                .iter()
                .next()
                .is_some_and(SpecialConjunction::is_empty)
    }

    fn meet(&self, other: &Self, arith: Arith) -> Self {
        Disj(dnf_meet(&self.0, &other.0, arith))
    }
}

/// Disjunctive form of a formula in the cover fragment, computed with the
/// default conjunction law.
pub fn to_disjunctive(f: &Formula) -> Result<Formula> {
    Ok(disj(f, Arith::default())?.to_formula())
}

pub fn disj(f: &Formula, arith: Arith) -> Result<Disj> {
    Ok(match f {
        Formula::Top => Disj::top(),
        Formula::Bot => Disj::bot(),
        Formula::Var(_) | Formula::Neg(_) => match Literal::from_formula(f) {
            Some(l) => Disj([SpecialConjunction::literal(l)].into()),
            None => return Err(Error::Fragment("cover-modality fragment")),
        },
        Formula::And(gs) => {
            let mut acc = Disj::top();
            for g in gs {
                acc = acc.meet(&disj(g, arith)?, arith);
                if acc.0.is_empty() {
                    break;
                }
            }
            acc
        }
        Formula::Or(gs) => {
            let mut out = BTreeSet::new();
            for g in gs {
                out.extend(disj(g, arith)?.0);
            }
            Disj(out)
        }
        Formula::Nabla(a, set) => {
            let elems = set
                .iter()
                .map(|g| disj(g, arith))
                .collect::<Result<BTreeSet<_>>>()?;
            // a cover with a false argument is false
            if elems.iter().any(|e| e.0.is_empty()) {
                Disj::bot()
            } else {
                Disj([SpecialConjunction::cover(a.clone(), elems)].into())
            }
        }
        Formula::Diamond(..) | Formula::Boxed(..) => {
            return Err(Error::Fragment("cover-modality fragment"))
        }
        Formula::Sharp(..) => return Err(Error::SharpNode),
    })
}

/// Recognizer for the disjunctive grammar.
pub fn is_disjunctive(f: &Formula) -> bool {
    f.disjuncts().into_iter().all(is_special_conjunction)
}

fn is_special_conjunction(f: &Formula) -> bool {
    let mut seen = BTreeSet::new();
    f.conjuncts().into_iter().all(|c| match c {
        Formula::Nabla(a, set) => seen.insert(a.clone()) && set.iter().all(is_disjunctive),
        other => Literal::from_formula(other).is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signatures};

    fn d(text: &str) -> String {
        let f = to_disjunctive(&parse(text, &Signatures::new()).unwrap()).unwrap();
        assert!(is_disjunctive(&f), "{f}");
        f.to_string()
    }

    #[test]
    fn singleton_covers_meet() {
        assert_eq!(d("nab a {p} & nab a {q}"), "nab a {p & q}");
    }

    #[test]
    fn empty_cover_against_nonempty() {
        assert_eq!(d("nab a {p, q} & nab a {}"), "F");
    }

    #[test]
    fn classical_distribution() {
        assert_eq!(d("p & (q | nab a {x})"), "(p & q) | (p & nab a {x})");
    }

    #[test]
    fn conjunction_inside_cover_is_normalised() {
        assert_eq!(d("nab a {p & (q | r)}"), "nab a {(p & q) | (p & r)}");
        assert!(!is_disjunctive(
            &parse("nab a {p & (q | r)}", &Signatures::new()).unwrap()
        ));
    }

    #[test]
    fn distinct_actions_stay_apart() {
        assert_eq!(d("nab a {p} & nab b {q}"), "nab a {p} & nab b {q}");
    }
}
