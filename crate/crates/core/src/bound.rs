//! Combinatorial upper bound on throughput.
//!
//! Over the whole horizon a machine offers `capacity * horizon` unit-dates, and
//! every accepted job consumes `usage * processing time` of them. The number
//! of jobs a machine can host is therefore at most the length of the longest
//! prefix of its sorted consumptions that fits.

use alloc::vec::Vec;

use crate::instance::{Instance, TimeWindows};

/// Largest `k` such that the `k` smallest `consumptions` sum to at most `budget`.
/// Sorts `consumptions` in place.
pub fn max_prefix_fit(consumptions: &mut [u64], budget: u64) -> usize {
    consumptions.sort_unstable();
    let mut used = 0u64;
    for (k, &c) in consumptions.iter().enumerate() {
        used += c;
        if used > budget {
            return k;
        }
    }
    consumptions.len()
}

pub fn upper_bound_aggregate(instance: &Instance, windows: &TimeWindows) -> usize {
    let schedulable: Vec<usize> = (0..instance.num_jobs()).filter(|&j| windows.is_schedulable(j)).collect();
    let horizon = windows.horizon().max(0) as u64;
    let mut bound = schedulable.len();
    let mut buf = Vec::with_capacity(schedulable.len());
    for (machine, &cap) in instance.machine_cap().iter().enumerate() {
        buf.clear();
        buf.extend(schedulable.iter().map(|&j| {
            let job = instance.job(j);
            u64::from(job.cap_usage[machine]) * u64::from(job.proc_time[machine])
        }));
        bound = bound.min(max_prefix_fit(&mut buf, u64::from(cap) * horizon));
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{compute_time_windows, Job};
    use alloc::vec;

    #[test]
    fn three_jobs_of_five_in_ten() {
        // Q * H = 1 * 10
        let job = Job { release: 1, due: 10, route: vec![0], proc_time: vec![5], cap_usage: vec![1] };
        let long = Job { due: 11, ..job.clone() };
        let inst = Instance::new(1, vec![job.clone(), job, long], vec![1]).unwrap();
        let win = compute_time_windows(&inst);
        assert_eq!(win.horizon(), 11);
        // 5 + 5 <= 11 < 15
        assert_eq!(upper_bound_aggregate(&inst, &win), 2);
        assert_eq!(max_prefix_fit(&mut [5, 5, 5], 10), 2);
        assert_eq!(max_prefix_fit(&mut [5, 5, 5], 9), 1);
        assert_eq!(max_prefix_fit(&mut [], 0), 0);
    }

    #[test]
    fn slack_capacity_gives_schedulable_count() {
        let ok = Job { release: 1, due: 8, route: vec![0, 1], proc_time: vec![2, 3], cap_usage: vec![4, 5] };
        let bad = Job { release: 1, due: 4, ..ok.clone() };
        let jobs = vec![ok.clone(), ok.clone(), bad, ok];
        let loads: Vec<u32> = (0..2).map(|i| jobs.iter().map(|j| j.cap_usage[i] * j.proc_time[i]).sum()).collect();
        let inst = Instance::new(2, jobs, loads).unwrap();
        let win = compute_time_windows(&inst);
        assert_eq!(upper_bound_aggregate(&inst, &win), 3);
    }
}
