//! Functional observability, functional detectability and structural
//! functional observability of linear systems, with minimal sensor placement.
//!
//! * [`numeric`]: rank policy, observability matrices, eigenstructure, ordered
//!   Schur subspaces and an exact prime-field rank.
//! * [`functional`]: numeric predicates on `(A, C, F)`.
//! * [`structural`]: pattern triples, dynamic graphs and SFO.
//! * [`placement`]: greedy and exhaustive sensor selection and the closed-form
//!   minimal design for diagonalizable systems.
//! * [`cli`]: file formats and report assembly behind the `funcobs` binary.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod functional;
pub mod numeric;
pub mod placement;
pub mod structural;

pub use error::{Error, Result};
pub use functional::{analyze, FunctionalReport, SystemTriple};
pub use numeric::{RankPolicy, RealMatrix};
pub use structural::{is_sfo, PatternMatrix, PatternTriple, SfoReport};
