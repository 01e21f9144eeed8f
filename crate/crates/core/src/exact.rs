//! Exact branch and bound over acceptance and start-time decisions.
//!
//! Jobs are fixed in order of (latest start of the last operation, workload,
//! index). At each job the search first tries every start chain inside the
//! windows that fits the capacity profile, earliest first, then rejection.
//! A node is pruned when the accepted count plus an optimistic estimate for
//! the remaining jobs cannot beat the incumbent. The estimate counts only
//! remaining jobs that still have a feasible chain and caps it by the
//! per-machine aggregate bound on the remaining capacity.
//!
//! Budgets are checked at every node. When a budget runs out, the best bound
//! over all open nodes on the current path is reported, which is a valid
//! upper bound for the unexplored part of the tree.

use alloc::vec::Vec;

use crate::bound::{max_prefix_fit, upper_bound_aggregate};
use crate::heuristic::{solve_heuristic, HeuristicConfig};
use crate::instance::{Date, Instance, TimeWindows};
use crate::profile::CapacityProfile;
use crate::solution::Solution;

/// Source of elapsed time for the time budget.
pub trait Clock {
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances; only the node budget applies.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub time_limit_secs: f64,
    /// Stop as soon as the incumbent reaches this throughput.
    pub target: Option<usize>,
    /// Seed the incumbent with the heuristic before branching.
    pub warm_start: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 1_000_000, time_limit_secs: 1200.0, target: None, warm_start: true }
    }
}

impl SearchLimits {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchLimits { max_nodes, ..SearchLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub solution: Solution,
    pub upper_bound: usize,
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed_secs: f64,
}

impl SolveReport {
    pub fn throughput(&self) -> usize {
        self.solution.throughput()
    }

    /// `(upper - throughput) / max(throughput, 1)`.
    pub fn gap(&self) -> f64 {
        relative_gap(self.upper_bound, self.throughput())
    }
}

pub fn relative_gap(upper: usize, found: usize) -> f64 {
    upper.saturating_sub(found) as f64 / found.max(1) as f64
}

/// [`solve_exact_with_clock`] with only the node budget in effect.
pub fn solve_exact(instance: &Instance, windows: &TimeWindows, limits: &SearchLimits) -> SolveReport {
    solve_exact_with_clock(instance, windows, limits, &NoClock)
}

pub fn solve_exact_with_clock<C: Clock>(
    instance: &Instance,
    windows: &TimeWindows,
    limits: &SearchLimits,
    clock: &C,
) -> SolveReport {
    let root_bound = upper_bound_aggregate(instance, windows);
    let order = search_order(instance, windows);
    let m = instance.num_machines();
    let consumption: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            instance
                .jobs()
                .iter()
                .map(|job| u64::from(job.cap_usage[i]) * u64::from(job.proc_time[i]))
                .collect()
        })
        .collect();

    let incumbent = if limits.warm_start {
        solve_heuristic(instance, windows, &HeuristicConfig::default())
    } else {
        Solution::rejected(instance.num_jobs())
    };
    let mut search = Search {
        instance,
        windows,
        order,
        consumption,
        profile: CapacityProfile::new(instance),
        current: Solution::rejected(instance.num_jobs()),
        accepted: 0,
        best_count: incumbent.throughput(),
        best: incumbent,
        nodes: 0,
        limits,
        clock,
        stopped: false,
        open_bound: 0,
        scratch: Vec::new(),
    };
    if search.best_count >= root_bound {
        // warm start already meets the bound
    } else if search.target_reached() || limits.max_nodes == 0 {
        search.stopped = true;
        search.open_bound = root_bound;
    } else {
        search.node(0);
    }

    let best_count = search.best_count;
    let mut upper = if search.stopped { search.open_bound.max(best_count).min(root_bound) } else { best_count };
    upper = upper.max(best_count);
    SolveReport {
        optimal: upper == best_count,
        upper_bound: upper,
        solution: search.best,
        nodes: search.nodes,
        elapsed_secs: clock.elapsed_secs(),
    }
}

/// Schedulable jobs by (latest start of last operation, workload, index).
fn search_order(instance: &Instance, windows: &TimeWindows) -> Vec<usize> {
    let m = instance.num_machines();
    let mut order: Vec<usize> = (0..instance.num_jobs()).filter(|&j| windows.is_schedulable(j)).collect();
    order.sort_by_key(|&j| (windows.beta(j, m - 1), instance.job(j).workload(), j));
    order
}

struct Search<'a, C> {
    instance: &'a Instance,
    windows: &'a TimeWindows,
    order: Vec<usize>,
    /// usage times processing time, per machine and job
    consumption: Vec<Vec<u64>>,
    profile: CapacityProfile,
    current: Solution,
    accepted: usize,
    best: Solution,
    best_count: usize,
    nodes: u64,
    limits: &'a SearchLimits,
    clock: &'a C,
    stopped: bool,
    open_bound: usize,
    scratch: Vec<u64>,
}

impl<C: Clock> Search<'_, C> {
    fn target_reached(&self) -> bool {
        self.limits.target.is_some_and(|t| self.best_count >= t)
    }

    fn out_of_budget(&self) -> bool {
        if self.nodes >= self.limits.max_nodes {
            return true;
        }
        self.nodes % 256 == 0 && self.clock.elapsed_secs() >= self.limits.time_limit_secs
    }

    /// Optimistic count of further acceptances among `candidates`.
    fn residual_bound(&mut self, candidates: &[usize]) -> usize {
        if candidates.is_empty() {
            return 0;
        }
        let first = candidates.iter().map(|&j| self.windows.alpha(j, 0)).min().unwrap_or(1);
        let last = candidates.iter().map(|&j| self.instance.job(j).due - 1).max().unwrap_or(0);
        let mut bound = candidates.len();
        for machine in 0..self.instance.num_machines() {
            let budget = self.profile.remaining_sum(machine, first, last);
            self.scratch.clear();
            self.scratch.extend(candidates.iter().map(|&j| self.consumption[machine][j]));
            bound = bound.min(max_prefix_fit(&mut self.scratch, budget));
        }
        bound
    }

    /// Decides the jobs `order[depth..]`.
    fn node(&mut self, depth: usize) {
        // the caller's bound covers this subtree if we stop here
        if self.out_of_budget() {
            self.stopped = true;
            return;
        }
        self.nodes += 1;

        // Jobs without a chain now never get one deeper down: capacity only shrinks.
        let candidates: Vec<usize> = self.order[depth..]
            .iter()
            .copied()
            .filter(|&j| self.profile.earliest_chain(self.instance, self.windows, j).is_some())
            .collect();
        let bound = self.accepted + self.residual_bound(&candidates);
        if bound <= self.best_count {
            return;
        }
        if candidates.is_empty() {
            self.best_count = self.accepted;
            self.best = self.current.clone();
            if self.target_reached() {
                self.stopped = true;
            }
            return;
        }
        let job = candidates[0];
        let next = self.order[depth..].iter().position(|&j| j == job).expect("candidate from order") + depth + 1;

        let mut chain = Vec::with_capacity(self.instance.num_machines());
        self.accept_chains(job, 0, self.windows.alpha(job, 0), &mut chain, next);
        if !self.stopped && self.accepted + candidates.len() - 1 > self.best_count {
            self.node(next);
        }
        if self.stopped {
            self.open_bound = self.open_bound.max(bound);
        }
    }

    /// Enumerates start chains of `job` from route position `pos` on, earliest
    /// first, recursing into the next job for every complete chain.
    fn accept_chains(&mut self, job: usize, pos: usize, ready: Date, chain: &mut Vec<Date>, next: usize) {
        let data = self.instance.job(job);
        if pos == data.route.len() {
            self.current.accept(job, chain.clone());
            self.accepted += 1;
            self.node(next);
            self.accepted -= 1;
            self.current.reject(job);
            return;
        }
        let machine = data.route[pos];
        let (p, q) = (data.proc_time[machine], data.cap_usage[machine]);
        let last = self.windows.beta(job, pos);
        let mut from = ready.max(self.windows.alpha(job, pos));
        while let Some(s) = self.profile.earliest_fit(machine, from, last, p, q) {
            self.profile.place(machine, s, p, q);
            chain.push(s);
            self.accept_chains(job, pos + 1, s + i64::from(p), chain, next);
            chain.pop();
            self.profile.remove(machine, s, p, q);
            if self.stopped {
                return;
            }
            from = s + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{compute_time_windows, Job};
    use alloc::vec;
    use crate::validator::validate_schedule;

    fn pair(q: u32, cap: u32) -> Instance {
        let job = Job { release: 1, due: 6, route: vec![0], proc_time: vec![5], cap_usage: vec![q] };
        Instance::new(1, vec![job.clone(), job], vec![cap]).unwrap()
    }

    #[test]
    fn unit_machine_pair() {
        let inst = pair(1, 1);
        let win = compute_time_windows(&inst);
        for warm_start in [false, true] {
            let limits = SearchLimits { warm_start, ..SearchLimits::default() };
            let report = solve_exact(&inst, &win, &limits);
            assert_eq!(report.throughput(), 1);
            assert!(report.optimal);
            assert_eq!(report.gap(), 0.0);
            assert!(validate_schedule(&inst, &win, &report.solution).is_feasible());
        }
    }

    #[test]
    fn capacity_admits_both() {
        let inst = pair(20, 40);
        let win = compute_time_windows(&inst);
        let report = solve_exact(&inst, &win, &SearchLimits { warm_start: false, ..SearchLimits::default() });
        assert_eq!(report.throughput(), 2);
        assert_eq!(report.solution.starts, vec![Some(vec![1]), Some(vec![1])]);
        assert!(report.optimal);
    }

    #[test]
    fn gap_convention() {
        assert_eq!(relative_gap(3, 0), 3.0);
        assert_eq!(relative_gap(5, 4), 0.25);
        assert_eq!(relative_gap(4, 4), 0.0);
    }

    #[test]
    fn blocked_job_beats_greedy_without_warm_start() {
        // A (long, latest deadline) should be rejected in favour of B and C
        let mk = |r, d, p| Job { release: r, due: d, route: vec![0], proc_time: vec![p], cap_usage: vec![1] };
        let inst = Instance::new(1, vec![mk(1, 10, 6), mk(1, 6, 3), mk(4, 9, 3)], vec![1]).unwrap();
        let win = compute_time_windows(&inst);
        let report = solve_exact(&inst, &win, &SearchLimits { warm_start: false, ..SearchLimits::default() });
        assert_eq!(report.throughput(), 2);
        assert!(report.optimal);
    }

    #[test]
    fn exhausted_budget_reports_valid_bound() {
        let mk = |r, d| Job { release: r, due: d, route: vec![0, 1], proc_time: vec![2, 2], cap_usage: vec![1, 1] };
        let jobs = (0..8).map(|k| mk(1 + k % 3, 12 + k % 4)).collect();
        let inst = Instance::new(2, jobs, vec![1, 1]).unwrap();
        let win = compute_time_windows(&inst);
        let full = solve_exact(&inst, &win, &SearchLimits { warm_start: false, ..SearchLimits::default() });
        assert!(full.optimal);
        let cut = solve_exact(&inst, &win, &SearchLimits { max_nodes: 3, warm_start: false, ..SearchLimits::default() });
        assert!(cut.nodes <= 3);
        assert!(cut.upper_bound >= full.throughput());
        assert!(cut.throughput() <= full.throughput());
        if !cut.optimal {
            assert!(cut.gap() > 0.0);
        }
    }
}
