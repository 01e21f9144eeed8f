//! Acceptance decisions and start dates.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::Date;

/// Decoded schedule: per job an acceptance flag and, for accepted jobs, one
/// start date per route position.
///
/// The representation deliberately admits malformed values (an accepted job
/// without starts, a start list of the wrong length) so that files read from
/// disk can be handed to the validator unchanged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Solution {
    pub accepted: Vec<bool>,
    pub starts: Vec<Option<Vec<Date>>>,
}

impl Solution {
    /// All `num_jobs` jobs rejected.
    pub fn rejected(num_jobs: usize) -> Self {
        Solution { accepted: vec![false; num_jobs], starts: vec![None; num_jobs] }
    }

    pub fn num_jobs(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_accepted(&self, job: usize) -> bool {
        self.accepted.get(job).copied().unwrap_or(false)
    }

    pub fn accept(&mut self, job: usize, starts: Vec<Date>) {
        self.accepted[job] = true;
        self.starts[job] = Some(starts);
    }

    pub fn reject(&mut self, job: usize) -> Option<Vec<Date>> {
        self.accepted[job] = false;
        self.starts[job].take()
    }

    pub fn accepted_jobs(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepted.iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| j)
    }

    pub fn throughput(&self) -> usize {
        throughput(self)
    }
}

/// Number of accepted jobs.
pub fn throughput(solution: &Solution) -> usize {
    solution.accepted.iter().filter(|&&a| a).count()
}
