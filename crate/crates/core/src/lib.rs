//! Integrated patient-to-room and nurse-to-patient assignment for hospital
//! wards.
//!
//! The crate covers the full workflow around the problem: the JSON data model
//! ([`model`]), exact scoring ([`eval`]), a greedy day-by-day construction
//! ([`heuristic`]), linear-model export for external solvers ([`lp`]), nurse
//! rostering ([`roster`]), random instance generation ([`instgen`]) and an
//! exhaustive solver for tiny instances ([`oracle`]).

pub mod bench;
pub mod error;
pub mod eval;
pub mod heuristic;
pub mod instgen;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod random;
pub mod report;
pub mod roster;

pub use error::{ModelError, SolveError};
pub use eval::{check_feasibility, eval_total, evaluate, FeasibilityReport, ObjectiveBreakdown};
pub use model::{Assignment, Instance, Solution, Ward};
