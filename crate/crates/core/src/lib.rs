//! Order acceptance and scheduling in a capacitated job shop.
//!
//! Every job visits all machines in its own order, each operation draws a
//! fixed number of capacity units from its machine for a fixed number of
//! dates, and the goal is to start as many jobs as possible between their
//! release and due dates without exceeding any machine capacity.
//!
//! The crate is `no_std` (it only needs `alloc`). File formats, the command
//! line and wall-clock timing live in the `capjob` crate.
//!
//! Layout:
//! - [`instance`]: problem data, operation time windows, occupancy periods.
//! - [`solution`]: acceptance flags and start dates.
//! - [`generator`]: seeded random benchmark instances.
//! - [`model`] and [`lp`]: the time-indexed MIP and its LP text export.
//! - [`validator`]: independent feasibility checking.
//! - [`bound`], [`exact`], [`heuristic`]: solvers.
#![no_std]

extern crate alloc;

pub mod bound;
pub mod exact;
pub mod generator;
pub mod heuristic;
pub mod instance;
pub mod lp;
pub mod model;
pub mod profile;
pub mod solution;
pub mod validator;

pub use bound::upper_bound_aggregate;
pub use exact::{solve_exact, solve_exact_with_clock, Clock, SearchLimits, SolveReport};
pub use generator::{generate_instance, CapFactor, GenParams, IntRange};
pub use heuristic::{improve_local_search, solve_greedy, solve_heuristic, HeuristicConfig, JobOrdering};
pub use instance::{compute_time_windows, occupancy_periods, Date, DateRange, Instance, InstanceError, Job, TimeWindows};
pub use lp::{export_lp, LpExport};
pub use model::{build_model, decode_assignment, DecodeError, MipModel};
pub use profile::CapacityProfile;
pub use solution::{throughput, Solution};
pub use validator::{validate_schedule, ValidationReport, Violation, ViolationKind};
