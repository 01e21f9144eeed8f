//! Grid execution and the summary tables folded from result rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use capjob_core::{compute_time_windows, generate_instance, CapFactor};

use crate::grid::{Cell, GridSpec};
use crate::io::{InstanceFile, Meta};
use crate::results::{run_solver, ExperimentRow, SolverKind, SolverSettings};

#[derive(Clone, Debug, Default)]
pub struct BenchOptions {
    /// Number of worker threads; 0 and 1 both mean sequential.
    pub workers: usize,
    /// Where to write the generated instances, if anywhere.
    pub instances_dir: Option<PathBuf>,
}

fn solve_cell(cell: &Cell, solvers: &[SolverKind], settings: &SolverSettings, opts: &BenchOptions) -> Vec<ExperimentRow> {
    let instance = generate_instance(&cell.params).expect("grid cells are validated up front");
    let meta = Meta::from_params(&cell.params);
    if let Some(dir) = &opts.instances_dir {
        let file = InstanceFile { instance: instance.clone(), meta: Some(meta.clone()) };
        if let Err(e) = file.write(&dir.join(format!("{}.json", cell.id))) {
            eprintln!("warning: {e}");
        }
    }
    let windows = compute_time_windows(&instance);
    solvers
        .iter()
        .map(|&kind| {
            match catch_unwind(AssertUnwindSafe(|| run_solver(&instance, &windows, kind, settings))) {
                Ok(outcome) => ExperimentRow::new(&cell.id, &instance, Some(&meta), kind, &outcome),
                Err(_) => ExperimentRow::failed(&cell.id, &instance, Some(&meta), kind),
            }
        })
        .collect()
}

/// Runs every solver on every grid instance. `sink` sees each row as soon as
/// it is produced, in completion order; the returned rows are in grid order.
pub fn run_grid(spec: &GridSpec, opts: &BenchOptions, mut sink: impl FnMut(&ExperimentRow)) -> Vec<ExperimentRow> {
    let cells = spec.cells();
    let settings = spec.settings();
    let mut slots: Vec<Option<Vec<ExperimentRow>>> = vec![None; cells.len()];
    let workers = opts.workers.clamp(1, cells.len().max(1));
    if workers == 1 {
        for (k, cell) in cells.iter().enumerate() {
            let rows = solve_cell(cell, &spec.solvers, &settings, opts);
            rows.iter().for_each(&mut sink);
            slots[k] = Some(rows);
        }
    } else {
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                let tx = tx.clone();
                let (next, cells, settings) = (&next, &cells, &settings);
                scope.spawn(move || loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    let Some(cell) = cells.get(k) else { break };
                    let rows = solve_cell(cell, &spec.solvers, settings, opts);
                    if tx.send((k, rows)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for (k, rows) in rx {
                rows.iter().for_each(&mut sink);
                slots[k] = Some(rows);
            }
        });
    }
    slots.into_iter().flat_map(|s| s.expect("every cell produces rows")).collect()
}

/// Column of the capacity-factor table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    Factor(CapFactor),
    JobShop,
}

impl Column {
    fn of(row: &ExperimentRow) -> Option<Column> {
        if row.job_shop {
            Some(Column::JobShop)
        } else {
            row.f.and_then(CapFactor::from_f64).map(Column::Factor)
        }
    }

    fn label(self) -> String {
        match self {
            Column::Factor(f) => f.to_string(),
            Column::JobShop => "js".to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub failed: usize,
    pub optimal: usize,
    pub mean_acceptance: f64,
    pub mean_gap: f64,
    pub mean_runtime_ms: f64,
}

#[derive(Default)]
struct Acc {
    count: usize,
    failed: usize,
    optimal: usize,
    acceptance: f64,
    gap: f64,
    runtime: f64,
}

impl Acc {
    fn add(&mut self, row: &ExperimentRow) {
        self.count += 1;
        self.failed += usize::from(row.is_failed());
        self.optimal += usize::from(row.optimal);
        self.acceptance += row.acceptance_rate;
        self.gap += row.gap;
        self.runtime += row.runtime_ms;
    }

    fn finish(&self) -> Stats {
        let c = self.count.max(1) as f64;
        Stats {
            count: self.count,
            failed: self.failed,
            optimal: self.optimal,
            mean_acceptance: self.acceptance / c,
            mean_gap: self.gap / c,
            mean_runtime_ms: self.runtime / c,
        }
    }
}

fn finish<K: Ord>(map: BTreeMap<K, Acc>) -> BTreeMap<K, Stats> {
    map.into_iter().map(|(k, a)| (k, a.finish())).collect()
}

/// Aggregate tables. Keys start with the solver name, failed rows counting
/// towards the solver they were run with.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub by_n: BTreeMap<(String, usize), Stats>,
    pub by_column: BTreeMap<(String, Column, usize), Stats>,
    pub column_totals: BTreeMap<(String, Column), Stats>,
    pub by_w: BTreeMap<(String, usize, u32), Stats>,
}

/// Folds rows into the summary tables. Rows are sorted first, so the result
/// does not depend on the order they were produced in.
pub fn summarize(rows: &[ExperimentRow]) -> Summary {
    let mut sorted: Vec<&ExperimentRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.instance_id, &a.solver, a.n).cmp(&(&b.instance_id, &b.solver, b.n)));

    let mut by_n: BTreeMap<(String, usize), Acc> = BTreeMap::new();
    let mut by_column: BTreeMap<(String, Column, usize), Acc> = BTreeMap::new();
    let mut column_totals: BTreeMap<(String, Column), Acc> = BTreeMap::new();
    let mut by_w: BTreeMap<(String, usize, u32), Acc> = BTreeMap::new();
    for row in sorted {
        let solver = row.solver.trim_end_matches(":failed").to_string();
        by_n.entry((solver.clone(), row.n)).or_default().add(row);
        if let Some(col) = Column::of(row) {
            by_column.entry((solver.clone(), col, row.n)).or_default().add(row);
            column_totals.entry((solver.clone(), col)).or_default().add(row);
        }
        if let Some(w) = row.w {
            by_w.entry((solver, row.n, w)).or_default().add(row);
        }
    }
    Summary {
        by_n: finish(by_n),
        by_column: finish(by_column),
        column_totals: finish(column_totals),
        by_w: finish(by_w),
    }
}

impl Summary {
    fn solvers(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.by_n.keys().map(|(s, _)| s.as_str()).collect();
        names.dedup();
        names
    }

    /// Mean acceptance rate of one column over all n.
    pub fn column_acceptance(&self, solver: &str, column: Column) -> Option<f64> {
        self.column_totals.get(&(solver.to_string(), column)).map(|s| s.mean_acceptance)
    }

    /// Plain-text rendering of all tables.
    pub fn render(&self, with_w: bool) -> String {
        let mut out = String::new();
        for solver in self.solvers() {
            let _ = writeln!(out, "== {solver}: by number of jobs ==");
            let _ = writeln!(out, "{:>6} {:>6} {:>9} {:>9} {:>12} {:>9} {:>6}", "n", "count", "acc_rate", "gap", "runtime_ms", "optimal", "failed");
            for ((_, n), s) in self.by_n.range((solver.to_string(), 0)..=(solver.to_string(), usize::MAX)) {
                let _ = writeln!(
                    out,
                    "{n:>6} {:>6} {:>9.4} {:>9.4} {:>12.2} {:>9} {:>6}",
                    s.count, s.mean_acceptance, s.mean_gap, s.mean_runtime_ms, s.optimal, s.failed
                );
            }

            let columns: Vec<Column> =
                self.column_totals.keys().filter(|(s, _)| s == solver).map(|&(_, c)| c).collect();
            if !columns.is_empty() {
                let mut ns: Vec<usize> =
                    self.by_column.keys().filter(|(s, _, _)| s == solver).map(|&(_, _, n)| n).collect();
                ns.sort_unstable();
                ns.dedup();
                let _ = writeln!(out, "== {solver}: mean gap by capacity factor ==");
                let _ = write!(out, "{:>9}", "n");
                for c in &columns {
                    let _ = write!(out, " {:>9}", c.label());
                }
                out.push('\n');
                for n in ns {
                    let _ = write!(out, "{n:>9}");
                    for &c in &columns {
                        match self.by_column.get(&(solver.to_string(), c, n)) {
                            Some(s) => write!(out, " {:>9.4}", s.mean_gap),
                            None => write!(out, " {:>9}", "-"),
                        }
                        .ok();
                    }
                    out.push('\n');
                }
                for (label, pick) in [("total", 0), ("acc_rate", 1)] {
                    let _ = write!(out, "{label:>9}");
                    for &c in &columns {
                        let s = &self.column_totals[&(solver.to_string(), c)];
                        let v = if pick == 0 { s.mean_gap } else { s.mean_acceptance };
                        let _ = write!(out, " {v:>9.4}");
                    }
                    out.push('\n');
                }
            }

            if with_w {
                let _ = writeln!(out, "== {solver}: mean acceptance rate by window ==");
                let _ = writeln!(out, "{:>6} {:>6} {:>6} {:>9}", "n", "w", "count", "acc_rate");
                for ((s, n, w), st) in &self.by_w {
                    if s == solver {
                        let _ = writeln!(out, "{n:>6} {w:>6} {:>6} {:>9.4}", st.count, st.mean_acceptance);
                    }
                }
            }
        }
        out
    }
}
