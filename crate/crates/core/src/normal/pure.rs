//! Pure cover formulas (every special conjunction mentions every action) and
//! the pure ∇/x variant that keeps the fixpoint variable apart from the
//! literals.

use std::collections::{BTreeMap, BTreeSet};

use super::cover::{Arith, SpecialConjunction};
use super::disjunctive::{disj, Disj};
use crate::error::{Error, Result};
use crate::syntax::{Action, Formula, Literal};

/// `T | x | nab_Λ Φ | x & nab_Λ Φ`, where `nab_Λ Φ` is a special conjunction
/// with one cover per declared action and literals not mentioning `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PureNablaX {
    Top,
    X,
    Conj {
        with_x: bool,
        body: SpecialConjunction<PureNablaX>,
    },
}

impl PureNablaX {
    pub fn to_formula(&self, x: &str) -> Formula {
        match self {
            PureNablaX::Top => Formula::Top,
            PureNablaX::X => Formula::var(x),
            PureNablaX::Conj { with_x, body } => {
                let sc = body.to_formula_with(|e| e.to_formula(x));
                if *with_x {
                    Formula::and([Formula::var(x), sc])
                } else {
                    sc
                }
            }
        }
    }

    pub fn body(&self) -> Option<&SpecialConjunction<PureNablaX>> {
        match self {
            PureNablaX::Conj { body, .. } => Some(body),
            _ => None,
        }
    }

    pub fn mentions_x(&self) -> bool {
        match self {
            PureNablaX::Top => false,
            PureNablaX::X => true,
            PureNablaX::Conj { with_x, body } => {
                *with_x || body.covers.values().flatten().any(PureNablaX::mentions_x)
            }
        }
    }

    /// Every occurrence of `x` lies under a cover.
    pub fn is_guarded(&self) -> bool {
        matches!(
            self,
            PureNablaX::Top | PureNablaX::Conj { with_x: false, .. }
        )
    }
}

/// Largest number of disjuncts produced while lifting one special
/// conjunction to pure form.
pub const PURE_LIMIT: usize = 1 << 14;

/// A disjunction of pure ∇/x-formulas.
pub type PureDisjunction = BTreeSet<PureNablaX>;

pub fn render_pure(d: &PureDisjunction, x: &str) -> Formula {
    Formula::or(d.iter().map(|t| t.to_formula(x)))
}

/// Lifts a disjunctive formula to a disjunction of pure formulas over
/// `actions`. When `x` is given, literals on `x` are kept outside the special
/// conjunctions.
pub fn purify(d: &Disj, actions: &BTreeSet<Action>, x: Option<&str>) -> Result<PureDisjunction> {
    let mut out = BTreeSet::new();
    for sc in &d.0 {
        out.extend(purify_conj(sc, actions, x)?);
    }
    Ok(out)
}

fn purify_conj(
    sc: &SpecialConjunction<Disj>,
    actions: &BTreeSet<Action>,
    x: Option<&str>,
) -> Result<Vec<PureNablaX>> {
    let mut literals = sc.literals.clone();
    let mut with_x = false;
    if let Some(x) = x {
        if literals.contains(&Literal::neg(x)) {
            return Err(Error::NotPositive(x.to_string()));
        }
        with_x = literals.remove(&Literal::pos(x));
    }
    if literals.is_empty() && sc.covers.is_empty() {
        return Ok(vec![if with_x {
            PureNablaX::X
        } else {
            PureNablaX::Top
        }]);
    }
    if let Some(a) = sc.covers.keys().find(|a| !actions.contains(a)) {
        return Err(Error::UndeclaredAction(a.to_string()));
    }
    let mut partial: Vec<BTreeMap<Action, BTreeSet<PureNablaX>>> = vec![BTreeMap::new()];
    for a in actions {
        let options: Vec<BTreeSet<PureNablaX>> = match sc.covers.get(a) {
            // T = nab {T} | nab {}
            None => vec![[PureNablaX::Top].into(), BTreeSet::new()],
            Some(elems) => {
                let mut lifted = Vec::new();
                for e in elems {
                    lifted.push(purify(e, actions, x)?);
                }
                push_disjunctions_out(&lifted)?
            }
        };
        if partial.len() * options.len() > PURE_LIMIT {
            return Err(Error::TooLarge(PURE_LIMIT));
        }
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for base in &partial {
            for opt in &options {
                let mut m = base.clone();
                m.insert(a.clone(), opt.clone());
                next.push(m);
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|covers| PureNablaX::Conj {
            with_x,
            body: SpecialConjunction {
                literals: literals.clone(),
                covers,
            },
        })
        .collect())
}

/// `nab (Φ ∪ {⋁Ψ}) = ⋁_{∅ ⊂ Ψ' ⊆ Ψ} nab (Φ ∪ Ψ')`, applied to every argument;
/// returns the argument sets of the resulting disjunction.
pub fn push_disjunctions_out<E: Ord + Clone>(args: &[BTreeSet<E>]) -> Result<Vec<BTreeSet<E>>> {
    let mut acc: BTreeSet<BTreeSet<E>> = [BTreeSet::new()].into();
    for alternatives in args {
        let alts: Vec<&E> = alternatives.iter().collect();
        if alts.is_empty() {
            return Ok(Vec::new());
        }
        if alts.len() >= 20 || acc.len() << alts.len() > PURE_LIMIT {
            return Err(Error::TooLarge(PURE_LIMIT));
        }
        let mut next = BTreeSet::new();
        for base in &acc {
            for mask in 1u64..(1u64 << alts.len()) {
                let mut set = base.clone();
                for (i, e) in alts.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        set.insert((*e).clone());
                    }
                }
                next.insert(set);
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().collect())
}

/// Disjunction of pure cover formulas over all of `actions`.
pub fn to_pure_disjunction(f: &Formula, actions: &BTreeSet<Action>) -> Result<Formula> {
    let d = disj(f, Arith::default())?;
    let pure = purify(&d, actions, None)?;
    Ok(render_pure(&pure, ""))
}

/// Pure ∇/x form of a cover-fragment formula in which `x` is positive and
/// guarded.
pub fn to_pure_nbx(f: &Formula, x: &str, actions: &BTreeSet<Action>) -> Result<PureDisjunction> {
    let d = disj(f, Arith::default())?;
    let pure = purify(&d, actions, Some(x))?;
    if !pure.iter().all(PureNablaX::is_guarded) {
        return Err(Error::Unguarded(x.to_string()));
    }
    Ok(pure)
}

/// Recognizer for disjunctions of pure cover formulas over `actions`.
pub fn is_pure_disjunction(f: &Formula, actions: &BTreeSet<Action>) -> bool {
    f.disjuncts().into_iter().all(|d| is_pure(d, actions, None))
}

/// Recognizer for disjunctions of pure ∇/x-formulas over `actions`.
pub fn is_pure_nbx_disjunction(f: &Formula, x: &str, actions: &BTreeSet<Action>) -> bool {
    f.disjuncts()
        .into_iter()
        .all(|d| is_pure(d, actions, Some(x)))
}

fn is_pure(f: &Formula, actions: &BTreeSet<Action>, x: Option<&str>) -> bool {
    if *f == Formula::Top {
        return true;
    }
    let mut covered = BTreeSet::new();
    let mut bare_x = false;
    for c in f.conjuncts() {
        match c {
            Formula::Var(v) if Some(v.as_str()) == x => bare_x = true,
            Formula::Nabla(a, set) => {
                if !covered.insert(a.clone()) || !set.iter().all(|e| is_pure(e, actions, x)) {
                    return false;
                }
            }
            other => match Literal::from_formula(other) {
                Some(l) if Some(l.var.as_str()) != x => {}
                _ => return false,
            },
        }
    }
    let only_x = bare_x && f.conjuncts().len() == 1;
    only_x || covered == *actions
}
