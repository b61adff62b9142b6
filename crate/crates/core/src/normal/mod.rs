//! Normal forms for the cover modality and the preprocessing of fixpoint
//! bodies.

pub mod cover;
pub mod disjunctive;
pub mod guard;
pub mod nabla;
pub mod pure;
pub mod semisimple;
pub mod simplify;

use std::collections::BTreeSet;

pub use cover::{cover_meet, Arith, Meet, SpecialConjunction};
pub use disjunctive::{is_disjunctive, to_disjunctive, Disj};
pub use guard::guard_split;
pub use nabla::to_nabla;
pub use pure::{
    is_pure_disjunction, is_pure_nbx_disjunction, render_pure, to_pure_disjunction, to_pure_nbx,
    PureDisjunction, PureNablaX,
};
pub use semisimple::{merge_semisimple, SemiSimple, VarConj};
pub use simplify::nabla_simplify;

use crate::error::{Error, Result};
use crate::syntax::{analysis::polarity, Action, Formula, Polarity, SharpSignature, Signatures};

/// Result of preprocessing a fixpoint body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preprocessed {
    pub x: String,
    /// Body with the unguarded `x & …` disjuncts removed.
    pub guarded: Formula,
    pub pure: PureDisjunction,
}

impl Preprocessed {
    pub fn formula(&self) -> Formula {
        render_pure(&self.pure, &self.x)
    }
}

/// Guard split, cover form and pure ∇/x form of `γ`, over `actions`.
pub fn preprocess(gamma: &Formula, x: &str, actions: &BTreeSet<Action>) -> Result<Preprocessed> {
    match polarity(gamma, x, &Signatures::new()) {
        Polarity::Positive | Polarity::Absent => {}
        _ => return Err(Error::NotPositive(x.to_string())),
    }
    let guarded = guard_split(gamma, x);
    let pure = to_pure_nbx(&to_nabla(&guarded)?, x, actions)?;
    Ok(Preprocessed {
        x: x.to_string(),
        guarded,
        pure,
    })
}

/// Actions of the body, unless a larger set is declared.
pub fn actions_for(sig: &SharpSignature, declared: Option<&BTreeSet<Action>>) -> BTreeSet<Action> {
    let mut acts = sig.body.actions();
    if let Some(d) = declared {
        acts.extend(d.iter().cloned());
    }
    acts
}

pub fn preprocess_signature(
    sig: &SharpSignature,
    declared: Option<&BTreeSet<Action>>,
) -> Result<Preprocessed> {
    preprocess(&sig.body, &sig.x, &actions_for(sig, declared))
}
