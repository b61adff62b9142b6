//! Finite Kripke models: evaluation, fixpoint iteration and validity checks.

pub mod eval;
pub mod fixpoint;
pub mod model;
pub mod validity;

pub use eval::{eval, Env};
pub use fixpoint::{
    approximants, iota, least_prefixpoint_brute, lfp_equations, lfp_formula, lfp_system,
    system_approximants, ApproxTrace,
};
pub use model::{all_frames, all_models, all_valuations, random_model, KripkeModel, StateSet};
pub use validity::{
    agree_at, budget_from_env, check_axiom, check_implication, check_rule, check_rule_lfp,
    equivalent_on, is_valid_formula, Verdict, DEFAULT_BUDGET,
};
