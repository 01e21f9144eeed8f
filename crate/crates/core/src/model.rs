//! Explicit time-indexed MIP model.
//!
//! Variables:
//! - `x_i_j_t`: operation of job `j` on machine `i` starts at date `t`, one per
//!   date of the operation's window, ordered job-major, then route position,
//!   then date.
//! - `z_j`: job `j` is accepted.
//!
//! Rows (maximize the sum of all `z_j`):
//! - assignment: the starts of each operation sum to `z_j`;
//! - precedence: the weighted completion of one operation is at most the
//!   weighted start of the next;
//! - capacity: on each (machine, date) the usage of operations running at
//!   that date is at most the machine capacity;
//! - reject: `z_j = 0` for jobs whose windows are empty.
//!
//! Capacity rows exist for every machine and every date of the horizon, even
//! when they have no terms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::{occupancy_periods, Date, Instance, TimeWindows};
use crate::solution::Solution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    Start { machine: usize, job: usize, pos: usize, date: Date },
    Accept { job: usize },
}

impl Variable {
    pub fn name(&self) -> String {
        match *self {
            Variable::Start { machine, job, date, .. } => format!("x_{machine}_{job}_{date}"),
            Variable::Accept { job } => format!("z_{job}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Assignment { job: usize, pos: usize },
    Precedence { job: usize, pos: usize },
    Capacity { machine: usize, date: Date },
    Reject { job: usize },
}

impl RowKind {
    pub fn name(&self) -> String {
        match *self {
            RowKind::Assignment { job, pos } => format!("assign_{job}_{pos}"),
            RowKind::Precedence { job, pos } => format!("prec_{job}_{pos}"),
            RowKind::Capacity { machine, date } => format!("cap_{machine}_{date}"),
            RowKind::Reject { job } => format!("reject_{job}"),
        }
    }
}

/// One linear constraint `sum(coef * var) <relation> rhs`. Terms are sorted
/// by variable index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub kind: RowKind,
    pub terms: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

impl Row {
    pub fn name(&self) -> String {
        self.kind.name()
    }

    pub fn activity(&self, values: &[bool]) -> i64 {
        self.terms.iter().filter(|(v, _)| values[*v]).map(|&(_, c)| c).sum()
    }

    pub fn is_satisfied(&self, values: &[bool]) -> bool {
        let lhs = self.activity(values);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Contiguous x variables of one operation, one per window date.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct XBlock {
    first_var: usize,
    first_date: Date,
    len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MipModel {
    num_jobs: usize,
    num_machines: usize,
    horizon: Date,
    variables: Vec<Variable>,
    x_blocks: Vec<Vec<XBlock>>,
    first_z: usize,
    rows: Vec<Row>,
}

impl MipModel {
    pub fn num_jobs(&self) -> usize {
        self.num_jobs
    }

    pub fn num_machines(&self) -> usize {
        self.num_machines
    }

    pub fn horizon(&self) -> Date {
        self.horizon
    }

    /// All variables: x variables first, then `z_0..z_{n-1}`.
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_x_vars(&self) -> usize {
        self.first_z
    }

    pub fn num_z_vars(&self) -> usize {
        self.variables.len() - self.first_z
    }

    pub fn z_var(&self, job: usize) -> usize {
        self.first_z + job
    }

    /// Index of `x` for (job, pos) starting at `date`, if that date is in the window.
    pub fn x_var(&self, job: usize, pos: usize, date: Date) -> Option<usize> {
        let block = self.x_blocks.get(job)?.get(pos)?;
        if date < block.first_date || date - block.first_date >= block.len as Date {
            return None;
        }
        Some(block.first_var + (date - block.first_date) as usize)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn count_rows(&self, pred: impl Fn(&RowKind) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.kind)).count()
    }

    pub fn num_assignment_rows(&self) -> usize {
        self.count_rows(|k| matches!(k, RowKind::Assignment { .. }))
    }

    pub fn num_precedence_rows(&self) -> usize {
        self.count_rows(|k| matches!(k, RowKind::Precedence { .. }))
    }

    pub fn num_capacity_rows(&self) -> usize {
        self.count_rows(|k| matches!(k, RowKind::Capacity { .. }))
    }

    pub fn num_reject_rows(&self) -> usize {
        self.count_rows(|k| matches!(k, RowKind::Reject { .. }))
    }

    /// Objective value of an assignment: the number of `z` set.
    pub fn objective(&self, values: &[bool]) -> usize {
        values[self.first_z..].iter().filter(|&&v| v).count()
    }

    /// Rows violated by `values` (one entry per variable).
    pub fn violated_rows(&self, values: &[bool]) -> Vec<&Row> {
        assert_eq!(values.len(), self.num_vars(), "assignment length");
        self.rows.iter().filter(|r| !r.is_satisfied(values)).collect()
    }

    /// The 0/1 assignment a solution induces. Start dates outside their
    /// window have no variable and are dropped, so such solutions show up as
    /// violated assignment rows.
    pub fn encode_solution(&self, solution: &Solution) -> Vec<bool> {
        let mut values = vec![false; self.num_vars()];
        for job in 0..self.num_jobs {
            if !solution.is_accepted(job) {
                continue;
            }
            values[self.z_var(job)] = true;
            if let Some(Some(starts)) = solution.starts.get(job) {
                for (pos, &s) in starts.iter().enumerate().take(self.num_machines) {
                    if let Some(v) = self.x_var(job, pos, s) {
                        values[v] = true;
                    }
                }
            }
        }
        values
    }
}

/// Builds the model for `instance`. `windows` must come from
/// [`compute_time_windows`](crate::instance::compute_time_windows) on the same instance.
pub fn build_model(instance: &Instance, windows: &TimeWindows) -> MipModel {
    let n = instance.num_jobs();
    let m = instance.num_machines();
    let horizon = windows.horizon();

    let mut variables = Vec::new();
    let mut x_blocks = Vec::with_capacity(n);
    for (j, job) in instance.jobs().iter().enumerate() {
        let mut blocks = Vec::with_capacity(m);
        for (pos, &machine) in job.route.iter().enumerate() {
            let window = windows.window(j, pos);
            let len = if windows.is_schedulable(j) { window.len() } else { 0 };
            blocks.push(XBlock { first_var: variables.len(), first_date: window.first, len });
            variables.extend(window.iter().take(len).map(|date| Variable::Start { machine, job: j, pos, date }));
        }
        x_blocks.push(blocks);
    }
    let first_z = variables.len();
    variables.extend((0..n).map(|job| Variable::Accept { job }));

    let mut rows = Vec::new();
    for (j, job) in instance.jobs().iter().enumerate() {
        if !windows.is_schedulable(j) {
            rows.push(Row { kind: RowKind::Reject { job: j }, terms: vec![(first_z + j, 1)], relation: Relation::Eq, rhs: 0 });
            continue;
        }
        let block = |pos: usize| {
            let first = x_blocks[j][pos].first_var;
            windows.window(j, pos).iter().enumerate().map(move |(k, date)| (first + k, date))
        };
        for pos in 0..m {
            let mut terms: Vec<(usize, i64)> = block(pos).map(|(v, _)| (v, 1)).collect();
            terms.push((first_z + j, -1));
            rows.push(Row { kind: RowKind::Assignment { job: j, pos }, terms, relation: Relation::Eq, rhs: 0 });
        }
        for pos in 1..m {
            let p_prev = i64::from(job.proc_at(pos - 1));
            let mut terms: Vec<(usize, i64)> = block(pos - 1).map(|(v, t)| (v, t + p_prev)).collect();
            terms.extend(block(pos).map(|(v, t)| (v, -t)));
            rows.push(Row { kind: RowKind::Precedence { job: j, pos }, terms, relation: Relation::Le, rhs: 0 });
        }
    }

    // capacity rows, machine-major then date
    let h = horizon.max(0) as usize;
    let mut cap_terms: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m * h];
    for (j, job) in instance.jobs().iter().enumerate() {
        if !windows.is_schedulable(j) {
            continue;
        }
        for (pos, &machine) in job.route.iter().enumerate() {
            let p = job.proc_time[machine];
            let q = i64::from(job.cap_usage[machine]);
            for (k, tau) in windows.window(j, pos).iter().enumerate() {
                for t in occupancy_periods(tau, p).iter() {
                    if (1..=horizon).contains(&t) {
                        cap_terms[machine * h + (t - 1) as usize].push((x_blocks[j][pos].first_var + k, q));
                    }
                }
            }
        }
    }
    for (idx, terms) in cap_terms.into_iter().enumerate() {
        let machine = idx / h;
        let date = (idx % h) as Date + 1;
        rows.push(Row {
            kind: RowKind::Capacity { machine, date },
            terms,
            relation: Relation::Le,
            rhs: i64::from(instance.machine_cap()[machine]),
        });
    }

    MipModel { num_jobs: n, num_machines: m, horizon, variables, x_blocks, first_z, rows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeError {
    /// The number of values differs from the number of model variables.
    AssignmentLength { expected: usize, found: usize },
    /// An operation has a number of set start variables different from its job's `z`.
    InconsistentAssignment { job: usize, pos: usize, starts_set: usize, accepted: bool },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DecodeError::AssignmentLength { expected, found } => {
                write!(f, "assignment has {found} values, model has {expected} variables")
            }
            DecodeError::InconsistentAssignment { job, pos, starts_set, accepted } => write!(
                f,
                "job {job} position {pos}: {starts_set} start variables set but job is {}",
                if accepted { "accepted" } else { "rejected" }
            ),
        }
    }
}

impl core::error::Error for DecodeError {}

/// Reads a solution back from a 0/1 assignment.
pub fn decode_assignment(model: &MipModel, values: &[bool]) -> Result<Solution, DecodeError> {
    if values.len() != model.num_vars() {
        return Err(DecodeError::AssignmentLength { expected: model.num_vars(), found: values.len() });
    }
    let mut solution = Solution::rejected(model.num_jobs);
    let mut found: Vec<Vec<Vec<Date>>> = vec![vec![Vec::new(); model.num_machines]; model.num_jobs];
    for (v, var) in model.variables[..model.first_z].iter().enumerate() {
        if let Variable::Start { job, pos, date, .. } = *var {
            if values[v] {
                found[job][pos].push(date);
            }
        }
    }
    for (job, per_pos) in found.into_iter().enumerate() {
        let accepted = values[model.z_var(job)];
        let expected = usize::from(accepted);
        for (pos, dates) in per_pos.iter().enumerate() {
            if dates.len() != expected {
                return Err(DecodeError::InconsistentAssignment { job, pos, starts_set: dates.len(), accepted });
            }
        }
        if accepted {
            solution.accept(job, per_pos.into_iter().map(|d| d[0]).collect());
        }
    }
    Ok(solution)
}
