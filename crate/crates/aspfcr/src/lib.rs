//! Answer set programming with partial, non-Herbrand functions and
//! consistency-restoring rules.
//!
//! Programs are built from regular atoms and from t-atoms, comparisons such
//! as `f(X) = 3` or `cost(a) < cost(b)` between terms that may mention
//! partial function symbols. A function application evaluates to a value
//! only when the model assigns it one; everything built on an unassigned
//! application is undefined, and a t-atom over an undefined operand is
//! simply false. Consistency-restoring rules (`head :+ body.`) express
//! defaults of last resort: a minimal set of them is turned into regular
//! rules exactly when the program would otherwise have no answer sets.
//!
//! The pipeline is [`parser`] → [`grounder`] → [`solver`] (or [`crsolver`]
//! when cr-rules are present), with [`semantics`] holding the model-side
//! definitions (interpretations, satisfaction, reducts, fixpoints) the
//! solvers are built on. [`cli`] wires the pipeline to the command line.

pub mod cli;
pub mod crsolver;
pub mod grounder;
pub mod parser;
pub mod semantics;
pub mod solver;
pub mod syntax;

pub use crsolver::{abductive_supports, solve_cr, CrAnswer, CrOutput};
pub use grounder::{ground, ground_with, GroundError, GroundOptions, GroundProgram};
pub use parser::{parse, ParseError};
pub use semantics::{is_answer_set, EvalError, SeedSet, Value};
pub use solver::{check_model, oracle_solve, solve, SolveLimits, SolveOutput, Verdict};
pub use syntax::Program;
