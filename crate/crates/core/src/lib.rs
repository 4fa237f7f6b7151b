//! Approximation algorithms for the multiple-depot split delivery vehicle
//! routing problem (MD-SDVRP).
//!
//! The crate is organised bottom-up:
//!
//! * [`instance`] holds the data model, the text format, the random
//!   generator and the feasibility checker.
//! * [`graphprims`] has the exact combinatorial building blocks: perfect
//!   matching, min-cost max-flow, Eulerian tours, shortcutting, the
//!   depot-rooted spanning forest and the mod-Q cycle cover.
//! * [`mdtsp`] wraps the multiple-depot TSP black box.
//! * [`partition`] splits cycles into capacity-respecting paths and tours.
//! * [`transform`] turns a cycle cover into a feasible routing.
//! * [`solvers`] has the end-to-end algorithms.
//! * [`oracle`] solves tiny instances exactly and audits ratios.
//!
//! All costs are fixed-point integers (see [`instance::COST_SCALE`]) and
//! every comparison is exact.

pub mod error;
pub mod graphprims;
pub mod instance;
pub mod mdtsp;
pub mod oracle;
pub mod partition;
pub mod rational;
pub mod report;
pub mod solvers;
pub mod transform;

pub use error::{Error, Result};
pub use instance::{AuditReport, Cost, Instance, Solution, Tour};
pub use rational::Rational;
pub use solvers::{SolverKind, SolverResult};

