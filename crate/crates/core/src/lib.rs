//! Axiomatization synthesis for flat modal fixpoint connectives.
//!
//! A connective `sharp γ(p1, …, pn)` denotes the least fixpoint of a modal
//! formula `γ(x, p1, …, pn)` in which `x` is positive. The crate rewrites `γ`
//! into cover-modality normal form, represents it as a system of equations,
//! simulates that system by a simple one through the subset construction,
//! and reads off the axioms and rules of the two axiom systems. Every step can
//! be checked on finite Kripke models.

pub mod axioms;
pub mod check;
pub mod classify;
pub mod cli;
pub mod eqsystem;
pub mod error;
pub mod normal;
pub mod pipeline;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
