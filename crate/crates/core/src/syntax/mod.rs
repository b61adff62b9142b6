//! Formula syntax: AST, surface parser/printer, connective signatures and
//! static analysis.

pub mod analysis;
pub mod formula;
pub mod parse;
pub mod signature;

pub use analysis::{analyze, Analysis, Polarity};
pub use formula::{Action, Formula, FormulaSet, Literal};
pub use parse::{parse, render};
pub use signature::{SharpSignature, Signatures};
