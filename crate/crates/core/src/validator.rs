//! Independent feasibility check of a [`Solution`].
//!
//! Machine loads are rebuilt from the solution alone; nothing is shared with
//! the solvers' capacity profiles.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::{compute_time_windows, occupancy_periods, Date, Instance, TimeWindows};
use crate::solution::Solution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    WindowViolation,
    PrecedenceViolation,
    CapacityViolation,
    MissingStart,
    SpuriousStart,
}

/// One broken constraint with the measured and the allowed quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Start date outside `[earliest, latest]`.
    Window { job: usize, pos: usize, start: Date, earliest: Date, latest: Date },
    /// Start before the previous operation completes.
    Precedence { job: usize, pos: usize, start: Date, earliest: Date },
    /// Load above capacity on one machine and date.
    Capacity { machine: usize, date: Date, load: u64, capacity: u32 },
    /// Accepted job without a start at this position.
    MissingStart { job: usize, pos: usize },
    /// Start given for a rejected job, or beyond the route length.
    SpuriousStart { job: usize, pos: usize },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::Window { .. } => ViolationKind::WindowViolation,
            Violation::Precedence { .. } => ViolationKind::PrecedenceViolation,
            Violation::Capacity { .. } => ViolationKind::CapacityViolation,
            Violation::MissingStart { .. } => ViolationKind::MissingStart,
            Violation::SpuriousStart { .. } => ViolationKind::SpuriousStart,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Window { job, pos, start, earliest, latest } => write!(
                f,
                "WindowViolation job={job} pos={pos}: start {start} outside [{earliest}, {latest}]"
            ),
            Violation::Precedence { job, pos, start, earliest } => write!(
                f,
                "PrecedenceViolation job={job} pos={pos}: start {start} < previous completion {earliest}"
            ),
            Violation::Capacity { machine, date, load, capacity } => {
                write!(f, "CapacityViolation machine={machine} date={date}: load {load} > capacity {capacity}")
            }
            Violation::MissingStart { job, pos } => write!(f, "MissingStart job={job} pos={pos}"),
            Violation::SpuriousStart { job, pos } => write!(f, "SpuriousStart job={job} pos={pos}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind() == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "feasible: {}", self.is_feasible())?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Whether `windows` are the windows of `instance`.
pub fn windows_match(instance: &Instance, windows: &TimeWindows) -> bool {
    compute_time_windows(instance) == *windows
}

/// Reports every violated constraint, not just the first.
pub fn validate_schedule(instance: &Instance, windows: &TimeWindows, solution: &Solution) -> ValidationReport {
    debug_assert!(windows_match(instance, windows), "time windows do not belong to this instance");
    let n = instance.num_jobs();
    let m = instance.num_machines();
    let mut violations = Vec::new();
    let mut load: BTreeMap<(usize, Date), u64> = BTreeMap::new();

    let entries = n.max(solution.accepted.len()).max(solution.starts.len());
    for j in 0..entries {
        let accepted = solution.accepted.get(j).copied().unwrap_or(false);
        let starts = solution.starts.get(j).and_then(|s| s.as_deref());
        if j >= n {
            if accepted || starts.is_some() {
                violations.push(Violation::SpuriousStart { job: j, pos: 0 });
            }
            continue;
        }
        let job = instance.job(j);
        match (accepted, starts) {
            (false, None) => {}
            (false, Some(_)) => violations.push(Violation::SpuriousStart { job: j, pos: 0 }),
            (true, None) => violations.extend((0..m).map(|pos| Violation::MissingStart { job: j, pos })),
            (true, Some(starts)) => {
                violations.extend((starts.len()..m).map(|pos| Violation::MissingStart { job: j, pos }));
                violations.extend((m..starts.len()).map(|pos| Violation::SpuriousStart { job: j, pos }));
                for (pos, &s) in starts.iter().enumerate().take(m) {
                    let window = windows.window(j, pos);
                    if !window.contains(s) {
                        violations.push(Violation::Window {
                            job: j,
                            pos,
                            start: s,
                            earliest: window.first,
                            latest: window.last,
                        });
                    }
                    if pos > 0 {
                        let ready = starts[pos - 1] + i64::from(job.proc_at(pos - 1));
                        if s < ready {
                            violations.push(Violation::Precedence { job: j, pos, start: s, earliest: ready });
                        }
                    }
                    let machine = job.route[pos];
                    let q = u64::from(job.cap_usage[machine]);
                    for t in occupancy_periods(s, job.proc_time[machine]).iter() {
                        *load.entry((machine, t)).or_insert(0) += q;
                    }
                }
            }
        }
    }

    for (&(machine, date), &l) in &load {
        let capacity = instance.machine_cap()[machine];
        if l > u64::from(capacity) {
            violations.push(Violation::Capacity { machine, date, load: l, capacity });
        }
    }
    ValidationReport { violations }
}
