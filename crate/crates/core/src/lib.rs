//! Fuzzy logic programs under approximation fixpoint theory: exact rational
//! truth values, program syntax, the symmetric and ultimate approximators,
//! Kripke-Kleene, well-founded and stable semantics, the approximate
//! well-founded operator on approximate interpretations, and stratification.

pub mod connectives;
pub mod error;
pub mod fixpoint;
pub mod lattice;
pub mod ls;
pub mod number;
pub mod random;
pub mod semantics;
pub mod strata;
pub mod syntax;
pub mod ultimate;

pub use connectives::{Aggregator, ConnectiveFamily, Family, Registry};
pub use error::{Error, Result};
pub use fixpoint::{ConvergencePolicy, FixpointResult, Mode, Status};
pub use lattice::{Atom, Interpretation, InterpretationPair, Signature};
pub use number::{Number, TruthValue};
pub use syntax::{parse_program, Formula, Polarity, Program, Rule};
