//! Running a solver on one instance and the CSV record it produces.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use capjob_core::exact::relative_gap;
use capjob_core::{
    improve_local_search, solve_exact_with_clock, solve_greedy, upper_bound_aggregate, Clock, HeuristicConfig,
    Instance, SearchLimits, Solution, TimeWindows,
};
use serde::{Deserialize, Serialize};

use crate::io::Meta;

/// First line of every results file. Bump the version when columns change.
pub const CSV_VERSION_LINE: &str = "# capjob-results v1";

pub const CSV_COLUMNS: [&str; 15] = [
    "instance_id",
    "n",
    "m",
    "w",
    "f",
    "job_shop",
    "seed",
    "solver",
    "throughput",
    "upper_bound",
    "gap",
    "acceptance_rate",
    "runtime_ms",
    "optimal",
    "node_count",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "greedy")]
    Greedy,
    #[serde(rename = "greedy+ls")]
    GreedyLs,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Exact => "exact",
            SolverKind::Greedy => "greedy",
            SolverKind::GreedyLs => "greedy+ls",
        }
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "greedy" => Ok(SolverKind::Greedy),
            "greedy+ls" | "greedy-ls" | "ls" => Ok(SolverKind::GreedyLs),
            _ => Err(format!("unknown solver '{s}' (expected exact, greedy or greedy+ls)")),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolverSettings {
    pub limits: SearchLimits,
    pub heuristic: HeuristicConfig,
}

/// Wall-clock time since construction.
pub struct StdClock(Instant);

impl StdClock {
    pub fn start() -> Self {
        StdClock(Instant::now())
    }
}

impl Clock for StdClock {
    fn elapsed_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub solution: Solution,
    pub upper_bound: usize,
    pub optimal: bool,
    pub nodes: Option<u64>,
    pub runtime_ms: f64,
}

impl SolveOutcome {
    pub fn throughput(&self) -> usize {
        self.solution.throughput()
    }
}

/// Runs `kind`. Heuristic runs report the aggregate bound as their upper bound.
pub fn run_solver(instance: &Instance, windows: &TimeWindows, kind: SolverKind, settings: &SolverSettings) -> SolveOutcome {
    let clock = StdClock::start();
    let (solution, upper_bound, nodes) = match kind {
        SolverKind::Exact => {
            let report = solve_exact_with_clock(instance, windows, &settings.limits, &clock);
            (report.solution, report.upper_bound, Some(report.nodes))
        }
        SolverKind::Greedy => {
            (solve_greedy(instance, windows, &settings.heuristic), upper_bound_aggregate(instance, windows), None)
        }
        SolverKind::GreedyLs => {
            let start = solve_greedy(instance, windows, &settings.heuristic);
            let improved = improve_local_search(instance, windows, &start, &settings.heuristic);
            (improved, upper_bound_aggregate(instance, windows), None)
        }
    };
    let runtime_ms = clock.elapsed_secs() * 1000.0;
    let optimal = solution.throughput() == upper_bound;
    SolveOutcome { solution, upper_bound, optimal, nodes, runtime_ms }
}

/// One benchmark record. Column order is fixed by field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub w: Option<u32>,
    pub f: Option<f64>,
    pub job_shop: bool,
    pub seed: Option<u64>,
    pub solver: String,
    pub throughput: usize,
    pub upper_bound: usize,
    pub gap: f64,
    pub acceptance_rate: f64,
    pub runtime_ms: f64,
    pub optimal: bool,
    pub node_count: Option<u64>,
}

impl ExperimentRow {
    pub fn new(instance_id: &str, instance: &Instance, meta: Option<&Meta>, solver: SolverKind, outcome: &SolveOutcome) -> Self {
        let n = instance.num_jobs();
        let throughput = outcome.throughput();
        ExperimentRow {
            instance_id: instance_id.to_string(),
            n,
            m: instance.num_machines(),
            w: meta.map(|m| m.window),
            f: meta.map(|m| m.cap_factor),
            job_shop: meta.map(|m| m.job_shop).unwrap_or(false),
            seed: meta.map(|m| m.seed),
            solver: solver.name().to_string(),
            throughput,
            upper_bound: outcome.upper_bound,
            gap: relative_gap(outcome.upper_bound, throughput),
            acceptance_rate: if n == 0 { 0.0 } else { throughput as f64 / n as f64 },
            runtime_ms: outcome.runtime_ms,
            optimal: outcome.optimal,
            node_count: outcome.nodes,
        }
    }

    /// Row recorded when a solve panics: nothing accepted, bound `n`.
    pub fn failed(instance_id: &str, instance: &Instance, meta: Option<&Meta>, solver: SolverKind) -> Self {
        let n = instance.num_jobs();
        ExperimentRow {
            instance_id: instance_id.to_string(),
            n,
            m: instance.num_machines(),
            w: meta.map(|m| m.window),
            f: meta.map(|m| m.cap_factor),
            job_shop: meta.map(|m| m.job_shop).unwrap_or(false),
            seed: meta.map(|m| m.seed),
            solver: format!("{}:failed", solver.name()),
            throughput: 0,
            upper_bound: n,
            gap: relative_gap(n, 0),
            acceptance_rate: 0.0,
            runtime_ms: 0.0,
            optimal: false,
            node_count: None,
        }
    }

    pub fn is_failed(&self) -> bool {
        self.solver.ends_with(":failed")
    }
}

/// CSV sink writing the version line and header before the first row.
pub struct RowWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl RowWriter<File> {
    /// Appends to `path`, writing the version line and header if the file is new or empty.
    pub fn append(path: &Path) -> std::io::Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let fresh = file.metadata()?.len() == 0;
        if fresh {
            writeln!(file, "{CSV_VERSION_LINE}")?;
        }
        let inner = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        Ok(RowWriter { inner })
    }

    pub fn create(path: &Path) -> std::io::Result<Self> {
        if path.exists() {
            std::fs::remove_file(path)?;
        }
        Self::append(path)
    }
}

impl<W: Write> RowWriter<W> {
    pub fn from_writer(mut w: W) -> std::io::Result<Self> {
        writeln!(w, "{CSV_VERSION_LINE}")?;
        Ok(RowWriter { inner: csv::WriterBuilder::new().has_headers(true).from_writer(w) })
    }

    pub fn write(&mut self, row: &ExperimentRow) -> csv::Result<()> {
        self.inner.serialize(row)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.inner.into_inner().map_err(|e| e.into_error()).expect("flush results")
    }
}

pub fn read_rows<R: std::io::Read>(reader: R) -> csv::Result<Vec<ExperimentRow>> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader).deserialize().collect()
}

pub fn read_rows_from(path: &Path) -> csv::Result<Vec<ExperimentRow>> {
    read_rows(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use capjob_core::{compute_time_windows, Job};

    fn pair() -> Instance {
        let job = Job { release: 1, due: 6, route: vec![0], proc_time: vec![5], cap_usage: vec![1] };
        Instance::new(1, vec![job.clone(), job], vec![1]).unwrap()
    }

    #[test]
    fn exact_row_on_unit_pair() {
        let inst = pair();
        let win = compute_time_windows(&inst);
        let out = run_solver(&inst, &win, SolverKind::Exact, &SolverSettings::default());
        let row = ExperimentRow::new("pair", &inst, None, SolverKind::Exact, &out);
        assert_eq!(row.throughput, 1);
        assert!(row.optimal);
        assert_eq!(row.gap, 0.0);
        assert_eq!(row.acceptance_rate, 0.5);
        assert!(row.node_count.is_some());
    }

    #[test]
    fn csv_header_and_roundtrip() {
        let inst = pair();
        let win = compute_time_windows(&inst);
        let mut w = RowWriter::from_writer(Vec::new()).unwrap();
        let mut rows = Vec::new();
        for kind in [SolverKind::Exact, SolverKind::Greedy, SolverKind::GreedyLs] {
            let out = run_solver(&inst, &win, kind, &SolverSettings::default());
            let row = ExperimentRow::new("pair", &inst, None, kind, &out);
            w.write(&row).unwrap();
            rows.push(row);
        }
        rows.push(ExperimentRow::failed("pair", &inst, None, SolverKind::Exact));
        w.write(rows.last().unwrap()).unwrap();
        let bytes = w.into_inner();
        let text = String::from_utf8(bytes.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_VERSION_LINE));
        assert_eq!(lines.next(), Some(CSV_COLUMNS.join(",").as_str()));
        assert_eq!(read_rows(&bytes[..]).unwrap(), rows);
        assert!(rows[3].is_failed());
    }

    #[test]
    fn solver_names() {
        for kind in [SolverKind::Exact, SolverKind::Greedy, SolverKind::GreedyLs] {
            assert_eq!(kind.name().parse::<SolverKind>().unwrap(), kind);
        }
        assert!("cplex".parse::<SolverKind>().is_err());
    }
}
