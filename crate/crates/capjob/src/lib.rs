//! File formats, solver runs, experiment grids and the `capjob` command line
//! on top of `capjob-core`.

pub mod bench;
pub mod grid;
pub mod io;
pub mod results;

pub use bench::{run_grid, summarize, BenchOptions, Column, Stats, Summary};
pub use grid::{instance_id, Cell, GridSpec};
pub use io::{read_solution, solution_from_json, solution_to_json, write_solution, FileError, InstanceFile, Meta};
pub use results::{
    read_rows, read_rows_from, run_solver, ExperimentRow, RowWriter, SolveOutcome, SolverKind, SolverSettings,
    StdClock, CSV_COLUMNS, CSV_VERSION_LINE,
};
