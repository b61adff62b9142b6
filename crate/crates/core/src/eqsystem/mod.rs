//! Systems of equations: the representation `T_γ` of a preprocessed fixpoint
//! body and its simulation `T⁺` by the subset construction.

pub mod represent;
pub mod simulate;
pub mod system;

pub use represent::{build_system, relevant_subformulas, RelevantSubformulas, Representation};
pub use simulate::{nonempty_subsets, simulate, subset_tag, unfold, SimulateOptions, Simulation};
pub use system::{classify_system, ModalSystem, SystemKind};
