//! Problem data and operation time windows.
//!
//! Dates are 1-based integers. An operation started at `s` with duration `p`
//! occupies its machine on dates `s..=s + p - 1` and completes at `s + p`, so
//! the next operation of the same job may start at `s + p` at the earliest
//! and the last operation must start no later than `due - p`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A calendar date. Dates are 1-based; windows of unschedulable jobs may
/// contain values below 1.
pub type Date = i64;

/// One job: its release and due date, machine route, and per-machine data.
///
/// `proc_time` and `cap_usage` are indexed by machine, not by route position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Job {
    pub release: Date,
    pub due: Date,
    pub route: Vec<usize>,
    pub proc_time: Vec<u32>,
    pub cap_usage: Vec<u32>,
}

impl Job {
    /// Processing time of the operation at route position `pos`.
    #[inline]
    pub fn proc_at(&self, pos: usize) -> u32 {
        self.proc_time[self.route[pos]]
    }

    /// Capacity usage of the operation at route position `pos`.
    #[inline]
    pub fn usage_at(&self, pos: usize) -> u32 {
        self.cap_usage[self.route[pos]]
    }

    pub fn total_proc_time(&self) -> i64 {
        self.proc_time.iter().map(|&p| i64::from(p)).sum()
    }

    /// Sum over machines of capacity usage times processing time.
    pub fn workload(&self) -> u64 {
        self.proc_time
            .iter()
            .zip(&self.cap_usage)
            .map(|(&p, &q)| u64::from(p) * u64::from(q))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    NoMachines,
    MachineCapLength { expected: usize, found: usize },
    MachineCapZero { machine: usize },
    ReleaseBeforeOne { job: usize, release: Date },
    DueNotAfterRelease { job: usize, release: Date, due: Date },
    RouteLength { job: usize, expected: usize, found: usize },
    RouteMachineOutOfRange { job: usize, machine: usize },
    RouteRepeatsMachine { job: usize, machine: usize },
    ProcTimeLength { job: usize, expected: usize, found: usize },
    CapUsageLength { job: usize, expected: usize, found: usize },
    ProcTimeZero { job: usize, machine: usize },
    CapUsageZero { job: usize, machine: usize },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InstanceError::NoMachines => write!(f, "instance has no machines"),
            InstanceError::MachineCapLength { expected, found } => {
                write!(f, "machine_cap has {found} entries, expected {expected}")
            }
            InstanceError::MachineCapZero { machine } => write!(f, "machine {machine}: capacity must be at least 1"),
            InstanceError::ReleaseBeforeOne { job, release } => {
                write!(f, "job {job}: release date {release} is before date 1")
            }
            InstanceError::DueNotAfterRelease { job, release, due } => {
                write!(f, "job {job}: due date {due} is not after release date {release}")
            }
            InstanceError::RouteLength { job, expected, found } => {
                write!(f, "job {job}: route visits {found} machines, expected {expected}")
            }
            InstanceError::RouteMachineOutOfRange { job, machine } => {
                write!(f, "job {job}: route references unknown machine {machine}")
            }
            InstanceError::RouteRepeatsMachine { job, machine } => {
                write!(f, "job {job}: route visits machine {machine} more than once")
            }
            InstanceError::ProcTimeLength { job, expected, found } => {
                write!(f, "job {job}: proc_time has {found} entries, expected {expected}")
            }
            InstanceError::CapUsageLength { job, expected, found } => {
                write!(f, "job {job}: cap_usage has {found} entries, expected {expected}")
            }
            InstanceError::ProcTimeZero { job, machine } => {
                write!(f, "job {job}, machine {machine}: processing time must be at least 1")
            }
            InstanceError::CapUsageZero { job, machine } => {
                write!(f, "job {job}, machine {machine}: capacity usage must be at least 1")
            }
        }
    }
}

impl core::error::Error for InstanceError {}

/// A validated problem instance. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    num_machines: usize,
    jobs: Vec<Job>,
    machine_cap: Vec<u32>,
}

impl Instance {
    pub fn new(num_machines: usize, jobs: Vec<Job>, machine_cap: Vec<u32>) -> Result<Self, InstanceError> {
        if num_machines == 0 {
            return Err(InstanceError::NoMachines);
        }
        if machine_cap.len() != num_machines {
            return Err(InstanceError::MachineCapLength { expected: num_machines, found: machine_cap.len() });
        }
        if let Some(machine) = machine_cap.iter().position(|&c| c == 0) {
            return Err(InstanceError::MachineCapZero { machine });
        }
        for (j, job) in jobs.iter().enumerate() {
            if job.release < 1 {
                return Err(InstanceError::ReleaseBeforeOne { job: j, release: job.release });
            }
            if job.due <= job.release {
                return Err(InstanceError::DueNotAfterRelease { job: j, release: job.release, due: job.due });
            }
            if job.route.len() != num_machines {
                return Err(InstanceError::RouteLength { job: j, expected: num_machines, found: job.route.len() });
            }
            let mut seen = vec![false; num_machines];
            for &machine in &job.route {
                if machine >= num_machines {
                    return Err(InstanceError::RouteMachineOutOfRange { job: j, machine });
                }
                if core::mem::replace(&mut seen[machine], true) {
                    return Err(InstanceError::RouteRepeatsMachine { job: j, machine });
                }
            }
            if job.proc_time.len() != num_machines {
                return Err(InstanceError::ProcTimeLength { job: j, expected: num_machines, found: job.proc_time.len() });
            }
            if job.cap_usage.len() != num_machines {
                return Err(InstanceError::CapUsageLength { job: j, expected: num_machines, found: job.cap_usage.len() });
            }
            if let Some(machine) = job.proc_time.iter().position(|&p| p == 0) {
                return Err(InstanceError::ProcTimeZero { job: j, machine });
            }
            if let Some(machine) = job.cap_usage.iter().position(|&q| q == 0) {
                return Err(InstanceError::CapUsageZero { job: j, machine });
            }
        }
        Ok(Instance { num_machines, jobs, machine_cap })
    }

    #[inline]
    pub fn num_jobs(&self) -> usize {
        self.jobs.len()
    }

    #[inline]
    pub fn num_machines(&self) -> usize {
        self.num_machines
    }

    #[inline]
    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    #[inline]
    pub fn job(&self, j: usize) -> &Job {
        &self.jobs[j]
    }

    #[inline]
    pub fn machine_cap(&self) -> &[u32] {
        &self.machine_cap
    }

    /// Planning horizon: the latest due date (0 for an instance without jobs).
    pub fn horizon(&self) -> Date {
        self.jobs.iter().map(|j| j.due).max().unwrap_or(0)
    }
}

/// Inclusive range of dates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DateRange {
    pub first: Date,
    pub last: Date,
}

impl DateRange {
    #[inline]
    pub fn contains(&self, t: Date) -> bool {
        self.first <= t && t <= self.last
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.last < self.first
    }

    /// Number of dates in the range.
    #[inline]
    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.last - self.first + 1) as usize
        }
    }

    pub fn iter(&self) -> core::ops::RangeInclusive<Date> {
        self.first..=self.last
    }
}

/// Dates on which an operation started at `start` loads its machine.
///
/// Panics if `duration` is zero.
#[inline]
pub fn occupancy_periods(start: Date, duration: u32) -> DateRange {
    assert!(duration >= 1, "operation duration must be positive");
    DateRange { first: start, last: start + i64::from(duration) - 1 }
}

/// Earliest and latest start of every operation, indexed by (job, route position).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeWindows {
    alpha: Vec<Vec<Date>>,
    beta: Vec<Vec<Date>>,
    horizon: Date,
    schedulable: Vec<bool>,
}

impl TimeWindows {
    #[inline]
    pub fn alpha(&self, job: usize, pos: usize) -> Date {
        self.alpha[job][pos]
    }

    #[inline]
    pub fn beta(&self, job: usize, pos: usize) -> Date {
        self.beta[job][pos]
    }

    #[inline]
    pub fn window(&self, job: usize, pos: usize) -> DateRange {
        DateRange { first: self.alpha[job][pos], last: self.beta[job][pos] }
    }

    #[inline]
    pub fn horizon(&self) -> Date {
        self.horizon
    }

    #[inline]
    pub fn is_schedulable(&self, job: usize) -> bool {
        self.schedulable[job]
    }

    pub fn schedulable(&self) -> &[bool] {
        &self.schedulable
    }

    pub fn num_schedulable(&self) -> usize {
        self.schedulable.iter().filter(|&&s| s).count()
    }
}

/// Earliest start is the release date plus the processing times of the
/// preceding operations on the route; latest start is the due date minus the
/// processing times of this and all following operations.
pub fn compute_time_windows(instance: &Instance) -> TimeWindows {
    let m = instance.num_machines();
    let mut alpha = Vec::with_capacity(instance.num_jobs());
    let mut beta = Vec::with_capacity(instance.num_jobs());
    let mut schedulable = Vec::with_capacity(instance.num_jobs());
    for job in instance.jobs() {
        let mut a = Vec::with_capacity(m);
        let mut before = 0i64;
        for pos in 0..m {
            a.push(job.release + before);
            before += i64::from(job.proc_at(pos));
        }
        let mut b = vec![0; m];
        let mut after = 0i64;
        for pos in (0..m).rev() {
            after += i64::from(job.proc_at(pos));
            b[pos] = job.due - after;
        }
        schedulable.push(a.iter().zip(&b).all(|(lo, hi)| lo <= hi));
        alpha.push(a);
        beta.push(b);
    }
    TimeWindows { alpha, beta, horizon: instance.horizon(), schedulable }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(release: Date, due: Date, route: &[usize], p: &[u32], q: &[u32]) -> Job {
        Job { release, due, route: route.to_vec(), proc_time: p.to_vec(), cap_usage: q.to_vec() }
    }

    #[test]
    fn windows_for_two_machine_job() {
        let inst = Instance::new(2, vec![job(1, 11, &[0, 1], &[2, 3], &[1, 1])], vec![1, 1]).unwrap();
        let w = compute_time_windows(&inst);
        assert_eq!((w.alpha(0, 0), w.alpha(0, 1)), (1, 3));
        assert_eq!((w.beta(0, 0), w.beta(0, 1)), (6, 8));
        assert!(w.is_schedulable(0));
        assert_eq!(w.horizon(), 11);
    }

    #[test]
    fn windows_follow_route_order_not_machine_order() {
        // route visits machine 1 first
        let inst = Instance::new(2, vec![job(1, 11, &[1, 0], &[2, 3], &[1, 1])], vec![1, 1]).unwrap();
        let w = compute_time_windows(&inst);
        assert_eq!((w.alpha(0, 0), w.alpha(0, 1)), (1, 4));
        assert_eq!((w.beta(0, 0), w.beta(0, 1)), (6, 9));
    }

    #[test]
    fn zero_width_window_collapses() {
        let inst = Instance::new(3, vec![job(4, 4 + 9, &[2, 0, 1], &[2, 3, 4], &[1, 1, 1])], vec![1, 1, 1]).unwrap();
        let w = compute_time_windows(&inst);
        for pos in 0..3 {
            assert_eq!(w.alpha(0, pos), w.beta(0, pos));
        }
        assert!(w.is_schedulable(0));
    }

    #[test]
    fn too_short_window_is_flagged() {
        let inst = Instance::new(2, vec![job(1, 5, &[0, 1], &[2, 3], &[1, 1])], vec![1, 1]).unwrap();
        let w = compute_time_windows(&inst);
        assert!(!w.is_schedulable(0));
        assert!(w.beta(0, 1) < w.alpha(0, 1));
        assert_eq!(w.num_schedulable(), 0);
    }

    #[test]
    fn occupancy_examples() {
        assert_eq!(occupancy_periods(3, 2), DateRange { first: 3, last: 4 });
        assert_eq!(occupancy_periods(5, 1), DateRange { first: 5, last: 5 });
        assert_eq!(occupancy_periods(1, 5), DateRange { first: 1, last: 5 });
    }

    #[test]
    fn occupancy_matches_theta_membership() {
        // tau in {t - p + 1, ..., t}  <=>  t in occupancy_periods(tau, p)
        for p in 1..=10u32 {
            for tau in -5..=50i64 {
                let occ = occupancy_periods(tau, p);
                for t in 1..=50i64 {
                    let in_theta = t - i64::from(p) + 1 <= tau && tau <= t;
                    assert_eq!(in_theta, occ.contains(t), "p={p} tau={tau} t={t}");
                }
            }
        }
    }

    #[test]
    fn rejects_invalid_instances() {
        let ok = || job(1, 10, &[0, 1], &[1, 1], &[1, 1]);
        assert_eq!(Instance::new(0, vec![], vec![]), Err(InstanceError::NoMachines));
        assert_eq!(
            Instance::new(2, vec![ok()], vec![1, 0]),
            Err(InstanceError::MachineCapZero { machine: 1 })
        );
        let mut bad = ok();
        bad.release = 0;
        assert_eq!(
            Instance::new(2, vec![ok(), bad], vec![1, 1]),
            Err(InstanceError::ReleaseBeforeOne { job: 1, release: 0 })
        );
        let mut bad = ok();
        bad.due = 1;
        assert!(matches!(Instance::new(2, vec![bad], vec![1, 1]), Err(InstanceError::DueNotAfterRelease { job: 0, .. })));
        let mut bad = ok();
        bad.route = vec![0, 0];
        assert_eq!(
            Instance::new(2, vec![bad], vec![1, 1]),
            Err(InstanceError::RouteRepeatsMachine { job: 0, machine: 0 })
        );
        let mut bad = ok();
        bad.route = vec![0];
        assert!(matches!(Instance::new(2, vec![bad], vec![1, 1]), Err(InstanceError::RouteLength { job: 0, .. })));
        let mut bad = ok();
        bad.route = vec![0, 2];
        assert!(matches!(Instance::new(2, vec![bad], vec![1, 1]), Err(InstanceError::RouteMachineOutOfRange { .. })));
        let mut bad = ok();
        bad.proc_time[1] = 0;
        assert_eq!(
            Instance::new(2, vec![bad], vec![1, 1]),
            Err(InstanceError::ProcTimeZero { job: 0, machine: 1 })
        );
        let mut bad = ok();
        bad.cap_usage[0] = 0;
        assert_eq!(
            Instance::new(2, vec![bad], vec![1, 1]),
            Err(InstanceError::CapUsageZero { job: 0, machine: 0 })
        );
    }
}
