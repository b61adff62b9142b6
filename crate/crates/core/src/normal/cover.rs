//! Special conjunctions `⋀Λ ∧ ⋀_j nab_j Φ_j` and the conjunction law for cover
//! modalities, generic over the element type of the cover sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Action, Formula, Literal};

/// Element of a cover set that supports conjunction.
pub trait Meet: Ord + Clone {
    fn top() -> Self;
    fn is_top(&self) -> bool;
    fn meet(&self, other: &Self, arith: Arith) -> Self;
}

/// `⋀ literals ∧ ⋀_{j ∈ dom covers} nab_j covers[j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpecialConjunction<E> {
    pub literals: BTreeSet<Literal>,
    pub covers: BTreeMap<Action, BTreeSet<E>>,
}

impl<E> Default for SpecialConjunction<E> {
    fn default() -> Self {
        SpecialConjunction {
            literals: BTreeSet::new(),
            covers: BTreeMap::new(),
        }
    }
}

impl<E: Ord + Clone> SpecialConjunction<E> {
    pub fn literal(l: Literal) -> Self {
        SpecialConjunction {
            literals: [l].into(),
            covers: BTreeMap::new(),
        }
    }

    pub fn cover(a: Action, elems: BTreeSet<E>) -> Self {
        SpecialConjunction {
            literals: BTreeSet::new(),
            covers: [(a, elems)].into(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty() && self.covers.is_empty()
    }

    /// Contains a literal together with its complement.
    pub fn is_contradictory(&self) -> bool {
        self.literals
            .iter()
            .any(|l| l.positive && self.literals.contains(&l.complement()))
    }

    pub fn to_formula_with(&self, elem: impl Fn(&E) -> Formula) -> Formula {
        let lits = self.literals.iter().map(Literal::to_formula);
        let covers = self
            .covers
            .iter()
            .map(|(a, set)| Formula::nabla(a, set.iter().map(&elem)));
        Formula::and(lits.chain(covers))
    }
}

/// Options for the cover conjunction law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arith {
    /// When both cover sets contain `T`, `nab Φ ∧ nab Ψ` is `nab (Φ ∪ Ψ)`.
    pub top_union: bool,
}

impl Default for Arith {
    fn default() -> Self {
        Arith { top_union: true }
    }
}

/// `nab Φ ∧ nab Ψ ≡ ⋁_{R full} nab {φ ∧ ψ | (φ, ψ) ∈ R}`; returns the
/// distinct argument sets of the disjunction (empty when no full relation
/// exists).
pub fn cover_meet<E: Meet>(phi: &BTreeSet<E>, psi: &BTreeSet<E>, arith: Arith) -> Vec<BTreeSet<E>> {
    if phi.is_empty() || psi.is_empty() {
        return if phi.is_empty() && psi.is_empty() {
            vec![BTreeSet::new()]
        } else {
            Vec::new()
        };
    }
    if arith.top_union && phi.iter().any(E::is_top) && psi.iter().any(E::is_top) {
        return vec![phi.union(psi).cloned().collect()];
    }
    let left: Vec<&E> = phi.iter().collect();
    let right: Vec<&E> = psi.iter().collect();
    let products: Vec<Vec<E>> = left
        .iter()
        .map(|l| right.iter().map(|r| l.meet(r, arith)).collect())
        .collect();
    let full = (1u64 << right.len()) - 1;
    // Each left element picks a non-empty set of partners; states are
    // deduplicated on (coverage of the right side, image so far).
    let mut states: BTreeSet<(u64, BTreeSet<E>)> = [(0, BTreeSet::new())].into();
    for row in &products {
        let mut next = BTreeSet::new();
        for (covered, image) in &states {
            for mask in 1..=full {
                let mut img = image.clone();
                for (j, e) in row.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        img.insert(e.clone());
                    }
                }
                next.insert((covered | mask, img));
            }
        }
        states = next;
    }
    let out: BTreeSet<BTreeSet<E>> = states
        .into_iter()
        .filter(|(covered, _)| *covered == full)
        .map(|(_, img)| img)
        .collect();
    out.into_iter().collect()
}

/// Conjunction of two special conjunctions as a disjunction of special
/// conjunctions. Contradictory literal sets are dropped.
pub fn conj_meet<E: Meet>(
    a: &SpecialConjunction<E>,
    b: &SpecialConjunction<E>,
    arith: Arith,
) -> Vec<SpecialConjunction<E>> {
    let literals: BTreeSet<Literal> = a.literals.union(&b.literals).cloned().collect();
    let mut partial: Vec<BTreeMap<Action, BTreeSet<E>>> = vec![BTreeMap::new()];
    let actions: BTreeSet<&Action> = a.covers.keys().chain(b.covers.keys()).collect();
    for act in actions {
        let options = match (a.covers.get(act), b.covers.get(act)) {
            (Some(x), Some(y)) => cover_meet(x, y, arith),
            (Some(x), None) | (None, Some(x)) => vec![x.clone()],
            (None, None) => unreachable!(),
        };
        let mut next = Vec::new();
        for base in &partial {
            for opt in &options {
                let mut m = base.clone();
                m.insert(act.clone(), opt.clone());
                next.push(m);
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|covers| SpecialConjunction {
            literals: literals.clone(),
            covers,
        })
        .filter(|sc| !sc.is_contradictory())
        .collect()
}

/// Conjunction of two disjunctions of special conjunctions.
pub fn dnf_meet<E: Meet>(
    a: &BTreeSet<SpecialConjunction<E>>,
    b: &BTreeSet<SpecialConjunction<E>>,
    arith: Arith,
) -> BTreeSet<SpecialConjunction<E>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.extend(conj_meet(x, y, arith));
        }
    }
    out
}
