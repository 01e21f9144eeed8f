//! Greedy construction and eject-and-insert local search.
//!
//! All moves place jobs on their earliest feasible start chain against a
//! [`CapacityProfile`], so every committed state is feasible by construction.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{occupancy_periods, Date, Instance, TimeWindows};
use crate::profile::CapacityProfile;
use crate::solution::Solution;

/// Order in which jobs are considered. Remaining ties go to the lower index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum JobOrdering {
    /// Due date, then workload.
    #[default]
    DueDate,
    /// Release date, then due date, then workload.
    Release,
    /// Workload, then due date.
    Workload,
    /// Job index.
    Index,
}

impl JobOrdering {
    pub fn name(self) -> &'static str {
        match self {
            JobOrdering::DueDate => "due-date",
            JobOrdering::Release => "release",
            JobOrdering::Workload => "workload",
            JobOrdering::Index => "index",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [JobOrdering::DueDate, JobOrdering::Release, JobOrdering::Workload, JobOrdering::Index]
            .into_iter()
            .find(|o| o.name() == name)
    }

    /// Job indices sorted by this rule.
    pub fn order(self, instance: &Instance) -> Vec<usize> {
        let mut jobs: Vec<usize> = (0..instance.num_jobs()).collect();
        let key = |j: usize| {
            let job = instance.job(j);
            match self {
                JobOrdering::DueDate => (job.due, 0, job.workload(), j),
                JobOrdering::Release => (job.release, job.due, job.workload(), j),
                JobOrdering::Workload => (job.workload() as i64, job.due, 0, j),
                JobOrdering::Index => (0, 0, 0, j),
            }
        };
        jobs.sort_by_key(|&j| key(j));
        jobs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeuristicConfig {
    pub ordering: JobOrdering,
    /// Maximum number of local search rounds.
    pub iterations: u32,
    /// 0 disables the one-out-two-in move, 1 enables it.
    pub ejection_width: u8,
    /// 0 runs a single deterministic pass; any other value adds `restarts`
    /// passes on randomly perturbed orders.
    pub seed: u64,
    pub restarts: u32,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig { ordering: JobOrdering::DueDate, iterations: 50, ejection_width: 1, seed: 0, restarts: 8 }
    }
}

fn greedy_in_order(instance: &Instance, windows: &TimeWindows, order: &[usize]) -> Solution {
    let mut profile = CapacityProfile::new(instance);
    let mut solution = Solution::rejected(instance.num_jobs());
    for &j in order {
        if let Some(chain) = profile.insert_earliest(instance, windows, j) {
            solution.accept(j, chain);
        }
    }
    solution
}

/// One pass over the jobs in the configured order; each job is accepted on
/// its earliest feasible start chain or rejected.
pub fn solve_greedy(instance: &Instance, windows: &TimeWindows, config: &HeuristicConfig) -> Solution {
    greedy_in_order(instance, windows, &config.ordering.order(instance))
}

struct LocalSearch<'a> {
    instance: &'a Instance,
    windows: &'a TimeWindows,
    order: Vec<usize>,
    profile: CapacityProfile,
    solution: Solution,
}

impl LocalSearch<'_> {
    fn insert(&mut self, job: usize) -> bool {
        match self.profile.insert_earliest(self.instance, self.windows, job) {
            Some(chain) => {
                self.solution.accept(job, chain);
                true
            }
            None => false,
        }
    }

    fn eject(&mut self, job: usize) -> Vec<Date> {
        let starts = self.solution.reject(job).expect("ejecting a rejected job");
        self.profile.remove_job(self.instance, job, &starts);
        starts
    }

    fn restore(&mut self, job: usize, starts: Vec<Date>) {
        self.profile.place_job(self.instance, job, &starts);
        self.solution.accept(job, starts);
    }

    /// Re-places all accepted jobs on earliest chains in ordering sequence.
    /// Keeps the old schedule if some job no longer fits.
    fn compact(&mut self) {
        let saved_profile = self.profile.clone();
        let saved_solution = self.solution.clone();
        let accepted: Vec<usize> = self.order.iter().copied().filter(|&j| self.solution.is_accepted(j)).collect();
        for &j in &accepted {
            self.eject(j);
        }
        for &j in &accepted {
            if !self.insert(j) {
                self.profile = saved_profile;
                self.solution = saved_solution;
                return;
            }
        }
    }

    fn insert_rejected(&mut self) -> bool {
        let mut improved = false;
        for k in 0..self.order.len() {
            let j = self.order[k];
            if !self.solution.is_accepted(j) && self.windows.is_schedulable(j) && self.insert(j) {
                improved = true;
            }
        }
        improved
    }

    /// Whether some operation of `job` could run on a date freed by `starts` of `freed`.
    fn could_use(&self, job: usize, freed: usize, starts: &[Date]) -> bool {
        let data = self.instance.job(job);
        let other = self.instance.job(freed);
        data.route.iter().enumerate().any(|(pos, &machine)| {
            let reach_first = self.windows.alpha(job, pos);
            let reach_last = self.windows.beta(job, pos) + i64::from(data.proc_time[machine]) - 1;
            let opos = other.route.iter().position(|&i| i == machine).expect("route is a permutation");
            let occ = occupancy_periods(starts[opos], other.proc_time[machine]);
            reach_first <= occ.last && occ.first <= reach_last
        })
    }

    /// Removes one accepted job and tries to insert two rejected ones in its place.
    fn eject_one_insert_two(&mut self) -> bool {
        let mut improved = false;
        let accepted: Vec<usize> = self.order.iter().copied().filter(|&j| self.solution.is_accepted(j)).collect();
        for out in accepted {
            if !self.solution.is_accepted(out) {
                continue;
            }
            let starts = self.eject(out);
            let mut inserted = Vec::with_capacity(2);
            for k in 0..self.order.len() {
                let j = self.order[k];
                if j == out || self.solution.is_accepted(j) || !self.windows.is_schedulable(j) {
                    continue;
                }
                if self.could_use(j, out, &starts) && self.insert(j) {
                    inserted.push(j);
                    if inserted.len() == 2 {
                        break;
                    }
                }
            }
            if inserted.len() == 2 {
                improved = true;
            } else {
                for j in inserted {
                    self.eject(j);
                }
                self.restore(out, starts);
            }
        }
        improved
    }
}

/// Improves a feasible solution. The result is feasible and accepts at least
/// as many jobs as the input.
pub fn improve_local_search(
    instance: &Instance,
    windows: &TimeWindows,
    solution: &Solution,
    config: &HeuristicConfig,
) -> Solution {
    let mut profile = CapacityProfile::new(instance);
    for j in solution.accepted_jobs() {
        let starts = solution.starts[j].as_deref().expect("accepted job without starts");
        profile.place_job(instance, j, starts);
    }
    let mut ls = LocalSearch {
        instance,
        windows,
        order: config.ordering.order(instance),
        profile,
        solution: solution.clone(),
    };
    for _ in 0..config.iterations {
        ls.compact();
        let mut improved = ls.insert_rejected();
        if config.ejection_width >= 1 {
            improved |= ls.eject_one_insert_two();
        }
        if !improved {
            break;
        }
    }
    ls.solution
}

/// Greedy construction followed by local search. With a non-zero seed the
/// best of `1 + restarts` passes is kept, later passes using randomly
/// perturbed orders.
pub fn solve_heuristic(instance: &Instance, windows: &TimeWindows, config: &HeuristicConfig) -> Solution {
    let base = config.ordering.order(instance);
    let start = greedy_in_order(instance, windows, &base);
    let mut best = improve_local_search(instance, windows, &start, config);
    if config.seed == 0 {
        return best;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        let mut order = base.clone();
        // random adjacent swaps keep the order roughly sorted
        if order.len() >= 2 {
            for _ in 0..order.len() {
                let k = rng.gen_range(0..order.len() - 1);
                order.swap(k, k + 1);
            }
        }
        let start = greedy_in_order(instance, windows, &order);
        let candidate = improve_local_search(instance, windows, &start, config);
        if candidate.throughput() > best.throughput() {
            best = candidate;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{compute_time_windows, Job};
    use crate::validator::validate_schedule;
    use alloc::vec;

    fn one_machine(jobs: &[(Date, Date, u32)], cap: u32) -> Instance {
        let jobs = jobs
            .iter()
            .map(|&(r, d, p)| Job { release: r, due: d, route: vec![0], proc_time: vec![p], cap_usage: vec![1] })
            .collect();
        Instance::new(1, jobs, vec![cap]).unwrap()
    }

    #[test]
    fn unit_machine_tight_pair_accepts_one() {
        let inst = one_machine(&[(1, 6, 5), (1, 6, 5)], 1);
        let win = compute_time_windows(&inst);
        let sol = solve_greedy(&inst, &win, &HeuristicConfig::default());
        assert_eq!(sol.throughput(), 1);
        assert!(sol.is_accepted(0));
        assert!(validate_schedule(&inst, &win, &sol).is_feasible());
    }

    #[test]
    fn ejection_replaces_long_job_by_two_short() {
        // A blocks dates 1..=6; B needs a start in 1..=3, C in 4..=6
        let inst = one_machine(&[(1, 10, 6), (1, 6, 3), (4, 9, 3)], 1);
        let win = compute_time_windows(&inst);
        let mut only_a = Solution::rejected(3);
        only_a.accept(0, vec![1]);
        assert!(validate_schedule(&inst, &win, &only_a).is_feasible());

        let no_eject = HeuristicConfig { ejection_width: 0, ..HeuristicConfig::default() };
        assert_eq!(improve_local_search(&inst, &win, &only_a, &no_eject).throughput(), 1);

        let improved = improve_local_search(&inst, &win, &only_a, &HeuristicConfig::default());
        assert_eq!(improved.throughput(), 2);
        assert!(!improved.is_accepted(0));
        assert!(validate_schedule(&inst, &win, &improved).is_feasible());
    }

    #[test]
    fn orderings() {
        let inst = one_machine(&[(3, 9, 1), (1, 9, 2), (2, 5, 1)], 3);
        assert_eq!(JobOrdering::DueDate.order(&inst), vec![2, 0, 1]);
        assert_eq!(JobOrdering::Release.order(&inst), vec![1, 2, 0]);
        assert_eq!(JobOrdering::Workload.order(&inst), vec![2, 0, 1]);
        assert_eq!(JobOrdering::Index.order(&inst), vec![0, 1, 2]);
        assert_eq!(JobOrdering::from_name("release"), Some(JobOrdering::Release));
        assert_eq!(JobOrdering::from_name("nope"), None);
    }

    #[test]
    fn slack_capacity_accepts_everything() {
        let inst = one_machine(&[(1, 4, 3), (1, 4, 3), (2, 6, 2), (1, 2, 1)], 4);
        let win = compute_time_windows(&inst);
        let cfg = HeuristicConfig { seed: 7, ..HeuristicConfig::default() };
        assert_eq!(solve_heuristic(&inst, &win, &cfg).throughput(), 4);
    }
}
