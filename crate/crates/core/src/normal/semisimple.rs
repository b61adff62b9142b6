//! Semi-simple terms: disjunctions of special conjunctions whose cover
//! arguments are conjunctions of system variables.

use std::collections::{BTreeMap, BTreeSet};

use super::cover::{dnf_meet, Arith, Meet, SpecialConjunction};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Literal};

/// Conjunction of system variables; the empty conjunction is `T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarConj(pub BTreeSet<String>);

impl VarConj {
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.0.iter().map(Formula::var))
    }
}

impl Meet for VarConj {
    fn top() -> Self {
        VarConj::default()
    }

    fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    fn meet(&self, other: &Self, _: Arith) -> Self {
        VarConj(self.0.union(&other.0).cloned().collect())
    }
}

pub type SemiSimple = BTreeSet<SpecialConjunction<VarConj>>;

pub fn semisimple_to_formula(t: &SemiSimple) -> Formula {
    Formula::or(t.iter().map(|sc| sc.to_formula_with(VarConj::to_formula)))
}

/// Reads a semi-simple term over the system variables `vars`.
pub fn parse_semisimple(f: &Formula, vars: &BTreeSet<String>) -> Result<SemiSimple> {
    let not_semisimple = || Error::SystemKind("semi-simple");
    let mut out = SemiSimple::new();
    for d in f.disjuncts() {
        let mut sc = SpecialConjunction::<VarConj>::default();
        for c in d.conjuncts() {
            match c {
                Formula::Nabla(a, set) => {
                    let elems = set
                        .iter()
                        .map(|e| var_conj(e, vars).ok_or_else(not_semisimple))
                        .collect::<Result<BTreeSet<_>>>()?;
                    if sc.covers.insert(a.clone(), elems).is_some() {
                        return Err(not_semisimple());
                    }
                }
                other => match Literal::from_formula(other) {
                    Some(l) if !vars.contains(&l.var) => {
                        sc.literals.insert(l);
                    }
                    _ => return Err(not_semisimple()),
                },
            }
        }
        out.insert(sc);
    }
    Ok(out)
}

fn var_conj(f: &Formula, vars: &BTreeSet<String>) -> Option<VarConj> {
    let mut out = BTreeSet::new();
    for c in f.conjuncts() {
        match c {
            Formula::Var(v) if vars.contains(v) => {
                out.insert(v.clone());
            }
            _ => return None,
        }
    }
    Some(VarConj(out))
}

/// Semi-simple term equivalent to the conjunction of `terms`, obtained by
/// distributing the conjunction over the disjuncts and applying the cover
/// conjunction law per action. An empty list yields `T`.
pub fn merge_semisimple(terms: &[SemiSimple], arith: Arith) -> SemiSimple {
    let mut acc: SemiSimple = [SpecialConjunction::default()].into();
    for t in terms {
        acc = dnf_meet(&acc, t, arith);
    }
    acc
}

/// Replaces every non-empty conjunction `⋀S` in a cover argument by
/// `rename(S)`, giving a simple term.
pub fn to_simple(t: &SemiSimple, rename: impl Fn(&BTreeSet<String>) -> String) -> Formula {
    let elem = |v: &VarConj| {
        if v.0.is_empty() {
            Formula::Top
        } else {
            Formula::var(rename(&v.0))
        }
    };
    Formula::or(t.iter().map(|sc| sc.to_formula_with(elem)))
}

/// Conjunctions of system variables occurring as cover arguments.
pub fn argument_sets(t: &SemiSimple) -> BTreeSet<BTreeSet<String>> {
    t.iter()
        .flat_map(|sc| sc.covers.values().flatten())
        .filter(|v| !v.0.is_empty())
        .map(|v| v.0.clone())
        .collect()
}

/// `{ z ↦ t_z }` read as semi-simple terms.
pub fn parse_terms(
    terms: &BTreeMap<String, Formula>,
    vars: &BTreeSet<String>,
) -> Result<BTreeMap<String, SemiSimple>> {
    terms
        .iter()
        .map(|(z, t)| Ok((z.clone(), parse_semisimple(t, vars)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signatures};

    fn vars(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn term(text: &str, zs: &BTreeSet<String>) -> SemiSimple {
        parse_semisimple(&parse(text, &Signatures::new()).unwrap(), zs).unwrap()
    }

    #[test]
    fn fourth_example_merge() {
        let zs = vars(&["z_g", "z_4"]);
        let g = term(
            "(p & nab a {}) | (p & nab a {z_g}) | (~p & nab a {T, z_g & z_4})",
            &zs,
        );
        let four = term("nab a {T, z_g}", &zs);
        let merged = merge_semisimple(&[g, four], Arith::default());
        assert_eq!(
            semisimple_to_formula(&merged),
            parse(
                "(p & nab a {z_g}) | (~p & nab a {T, z_g, z_g & z_4})",
                &Signatures::new()
            )
            .unwrap()
        );
    }

    #[test]
    fn unary_merge_is_identity() {
        let zs = vars(&["z1", "z2"]);
        let t = term("(p & nab a {z1, z2}) | nab a {T}", &zs);
        assert_eq!(
            merge_semisimple(std::slice::from_ref(&t), Arith::default()),
            t
        );
    }

    #[test]
    fn first_and_third_of_three() {
        let zs = vars(&["z1", "z2", "z3"]);
        let z1 = term(
            "(p & q & nab a {z1 & z2, z1 & z3}) | (p & ~q & nab a {z2})",
            &zs,
        );
        let z3 = term("nab a {z2 & z3}", &zs);
        let merged = merge_semisimple(&[z1, z3], Arith::default());
        assert_eq!(
            semisimple_to_formula(&merged).to_string(),
            "(p & q & nab a {z1 & z2 & z3}) | (p & ~q & nab a {z2 & z3})"
        );
    }

    #[test]
    fn rejects_non_semisimple() {
        let zs = vars(&["z"]);
        for text in ["<a>z", "z & nab a {z}", "nab a {z | p}", "nab a {p}"] {
            assert!(
                parse_semisimple(&parse(text, &Signatures::new()).unwrap(), &zs).is_err(),
                "{text}"
            );
        }
    }

    #[test]
    fn simple_renaming() {
        let zs = vars(&["z1", "z2"]);
        let t = term("nab a {T, z1 & z2, z2}", &zs);
        let out = to_simple(&t, |s| {
            format!("y_{}", s.iter().map(|v| &v[1..]).collect::<String>())
        });
        assert_eq!(out.to_string(), "nab a {T, y_12, y_2}");
    }
}
