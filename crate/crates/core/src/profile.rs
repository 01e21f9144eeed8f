//! Remaining machine capacity per date.

use alloc::vec::Vec;

use crate::instance::{occupancy_periods, Date, Instance, TimeWindows};

/// Remaining capacity units of every machine on every date `1..=horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityProfile {
    horizon: Date,
    capacity: Vec<u32>,
    remaining: Vec<u32>, // machine-major, `horizon` entries per machine
}

impl CapacityProfile {
    /// A profile with every machine at full capacity.
    pub fn new(instance: &Instance) -> Self {
        let horizon = instance.horizon().max(0);
        let h = horizon as usize;
        let capacity = instance.machine_cap().to_vec();
        let mut remaining = Vec::with_capacity(capacity.len() * h);
        for &cap in &capacity {
            remaining.extend(core::iter::repeat(cap).take(h));
        }
        CapacityProfile { horizon, capacity, remaining }
    }

    #[inline]
    pub fn horizon(&self) -> Date {
        self.horizon
    }

    #[inline]
    fn idx(&self, machine: usize, date: Date) -> usize {
        debug_assert!(date >= 1 && date <= self.horizon, "date {date} outside 1..={}", self.horizon);
        machine * self.horizon as usize + (date - 1) as usize
    }

    #[inline]
    pub fn remaining(&self, machine: usize, date: Date) -> u32 {
        self.remaining[self.idx(machine, date)]
    }

    #[inline]
    pub fn capacity(&self, machine: usize) -> u32 {
        self.capacity[machine]
    }

    /// Remaining units of `machine` summed over dates `first..=last` clipped to the horizon.
    pub fn remaining_sum(&self, machine: usize, first: Date, last: Date) -> u64 {
        let first = first.max(1);
        let last = last.min(self.horizon);
        if last < first {
            return 0;
        }
        let lo = self.idx(machine, first);
        let hi = self.idx(machine, last);
        self.remaining[lo..=hi].iter().map(|&r| u64::from(r)).sum()
    }

    /// Whether `usage` units are free on every date the operation would occupy.
    pub fn fits(&self, machine: usize, start: Date, duration: u32, usage: u32) -> bool {
        let occ = occupancy_periods(start, duration);
        if occ.first < 1 || occ.last > self.horizon {
            return false;
        }
        let lo = self.idx(machine, occ.first);
        let hi = self.idx(machine, occ.last);
        self.remaining[lo..=hi].iter().all(|&r| r >= usage)
    }

    /// Earliest start in `from..=to` at which the operation fits.
    pub fn earliest_fit(&self, machine: usize, from: Date, to: Date, duration: u32, usage: u32) -> Option<Date> {
        let from = from.max(1);
        let to = to.min(self.horizon - i64::from(duration) + 1);
        let mut start = from;
        'scan: while start <= to {
            for t in occupancy_periods(start, duration).iter() {
                if self.remaining(machine, t) < usage {
                    // no start up to and including t can cover t
                    start = t + 1;
                    continue 'scan;
                }
            }
            return Some(start);
        }
        None
    }

    /// Subtracts `usage` over the occupancy period. Panics if capacity would go negative.
    pub fn place(&mut self, machine: usize, start: Date, duration: u32, usage: u32) {
        for t in occupancy_periods(start, duration).iter() {
            let i = self.idx(machine, t);
            self.remaining[i] = self.remaining[i].checked_sub(usage).expect("capacity exceeded");
        }
    }

    /// Exact inverse of [`CapacityProfile::place`].
    pub fn remove(&mut self, machine: usize, start: Date, duration: u32, usage: u32) {
        for t in occupancy_periods(start, duration).iter() {
            let i = self.idx(machine, t);
            self.remaining[i] += usage;
            debug_assert!(self.remaining[i] <= self.capacity[machine]);
        }
    }

    /// Earliest-start chain for `job` against the current profile, without
    /// modifying it.
    ///
    /// The operations of one job sit on distinct machines, so each position
    /// only interacts with the profile and its predecessor's completion. Taking
    /// the earliest fitting start at every position therefore finds a chain
    /// whenever any chain inside the windows exists.
    pub fn earliest_chain(&self, instance: &Instance, windows: &TimeWindows, job: usize) -> Option<Vec<Date>> {
        if !windows.is_schedulable(job) {
            return None;
        }
        let data = instance.job(job);
        let mut chain = Vec::with_capacity(data.route.len());
        let mut ready = windows.alpha(job, 0);
        for (pos, &machine) in data.route.iter().enumerate() {
            let p = data.proc_time[machine];
            let from = ready.max(windows.alpha(job, pos));
            let s = self.earliest_fit(machine, from, windows.beta(job, pos), p, data.cap_usage[machine])?;
            chain.push(s);
            ready = s + i64::from(p);
        }
        Some(chain)
    }

    pub fn place_job(&mut self, instance: &Instance, job: usize, starts: &[Date]) {
        let data = instance.job(job);
        for (&machine, &s) in data.route.iter().zip(starts) {
            self.place(machine, s, data.proc_time[machine], data.cap_usage[machine]);
        }
    }

    pub fn remove_job(&mut self, instance: &Instance, job: usize, starts: &[Date]) {
        let data = instance.job(job);
        for (&machine, &s) in data.route.iter().zip(starts) {
            self.remove(machine, s, data.proc_time[machine], data.cap_usage[machine]);
        }
    }

    /// Places the earliest chain of `job` if one exists.
    pub fn insert_earliest(&mut self, instance: &Instance, windows: &TimeWindows, job: usize) -> Option<Vec<Date>> {
        let chain = self.earliest_chain(instance, windows, job)?;
        self.place_job(instance, job, &chain);
        Some(chain)
    }
}
