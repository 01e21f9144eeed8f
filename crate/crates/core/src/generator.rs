//! Seeded random benchmark instances.
//!
//! Processing times, capacity usages and release dates are drawn uniformly
//! from inclusive integer ranges, routes are uniform random permutations,
//! and every due date leaves exactly `window` dates of slack on top of the
//! job's total processing time. Machine capacity is the capacity factor
//! times the machine's average load per date over the horizon.

use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, Job};

/// Identifies the sampling procedure and RNG. Bump whenever the draw order changes.
pub const GENERATOR_VERSION: &str = "capjob-gen/1 chacha8 rand-0.8";

/// Inclusive integer interval with `1 <= low <= high`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntRange {
    pub low: u32,
    pub high: u32,
}

impl IntRange {
    pub const fn new(low: u32, high: u32) -> Self {
        IntRange { low, high }
    }

    fn is_valid(&self) -> bool {
        self.low >= 1 && self.low <= self.high
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(self.low..=self.high)
    }
}

/// Capacity factor stored in thousandths so that capacity rounding is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CapFactor(u32);

impl CapFactor {
    pub const fn from_millis(millis: u32) -> Self {
        CapFactor(millis)
    }

    /// Rounds to the nearest thousandth. Returns `None` for non-finite or
    /// non-positive values.
    pub fn from_f64(f: f64) -> Option<Self> {
        if !f.is_finite() || f <= 0.0 || f > 4.0e6 {
            return None;
        }
        let millis = (f * 1000.0 + 0.5) as u32;
        (millis > 0).then_some(CapFactor(millis))
    }

    pub fn millis(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 1000.0
    }
}

impl fmt::Display for CapFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenParams {
    pub num_jobs: usize,
    pub num_machines: usize,
    pub proc_range: IntRange,
    pub usage_range: IntRange,
    pub release_range: IntRange,
    pub window: u32,
    pub cap_factor: CapFactor,
    pub job_shop: bool,
    pub seed: u64,
}

impl GenParams {
    /// Ranges of the reference experiments: five machines, processing times
    /// in [1, 5], usages in [20, 30], releases in [1, 20].
    pub fn standard(num_jobs: usize, window: u32, cap_factor: CapFactor, seed: u64) -> Self {
        GenParams {
            num_jobs,
            num_machines: 5,
            proc_range: IntRange::new(1, 5),
            usage_range: IntRange::new(20, 30),
            release_range: IntRange::new(1, 20),
            window,
            cap_factor,
            job_shop: false,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.num_jobs == 0 {
            return Err(ParamError::NoJobs);
        }
        if self.num_machines == 0 {
            return Err(ParamError::NoMachines);
        }
        for (name, range) in [
            ("proc_range", self.proc_range),
            ("usage_range", self.usage_range),
            ("release_range", self.release_range),
        ] {
            if !range.is_valid() {
                return Err(ParamError::BadRange { name, low: range.low, high: range.high });
            }
        }
        if self.cap_factor.millis() == 0 {
            return Err(ParamError::NonPositiveCapFactor);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamError {
    NoJobs,
    NoMachines,
    BadRange { name: &'static str, low: u32, high: u32 },
    NonPositiveCapFactor,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NoJobs => write!(f, "number of jobs must be positive"),
            ParamError::NoMachines => write!(f, "number of machines must be positive"),
            ParamError::BadRange { name, low, high } => {
                write!(f, "{name} [{low}, {high}] must satisfy 1 <= low <= high")
            }
            ParamError::NonPositiveCapFactor => write!(f, "capacity factor must be positive"),
        }
    }
}

impl core::error::Error for ParamError {}

/// `max(1, round_half_up(f * load / horizon))` in exact integer arithmetic.
pub fn scaled_capacity(factor: CapFactor, load: u64, horizon: u64) -> u32 {
    if horizon == 0 {
        return 1;
    }
    let num = u128::from(factor.millis()) * u128::from(load);
    let den = 1000u128 * u128::from(horizon);
    let rounded = (2 * num + den) / (2 * den);
    rounded.clamp(1, u128::from(u32::MAX)) as u32
}

/// Draws an instance. The same parameters always give the same instance.
///
/// Draw order per job: release date, then processing time and capacity usage
/// for each machine in index order, then the route permutation.
pub fn generate_instance(params: &GenParams) -> Result<Instance, ParamError> {
    params.validate()?;
    let m = params.num_machines;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut jobs = Vec::with_capacity(params.num_jobs);
    for _ in 0..params.num_jobs {
        let release = i64::from(params.release_range.sample(&mut rng));
        let mut proc_time = Vec::with_capacity(m);
        let mut cap_usage = Vec::with_capacity(m);
        for _ in 0..m {
            proc_time.push(params.proc_range.sample(&mut rng));
            cap_usage.push(params.usage_range.sample(&mut rng));
        }
        let mut route: Vec<usize> = (0..m).collect();
        route.shuffle(&mut rng);
        if params.job_shop {
            cap_usage.iter_mut().for_each(|q| *q = 1);
        }
        let total: i64 = proc_time.iter().map(|&p| i64::from(p)).sum();
        let due = release + total + i64::from(params.window);
        jobs.push(Job { release, due, route, proc_time, cap_usage });
    }
    let horizon = jobs.iter().map(|j| j.due).max().unwrap_or(0) as u64;
    let machine_cap = (0..m)
        .map(|i| {
            if params.job_shop {
                1
            } else {
                let load: u64 = jobs.iter().map(|j| u64::from(j.cap_usage[i]) * u64::from(j.proc_time[i])).sum();
                scaled_capacity(params.cap_factor, load, horizon)
            }
        })
        .collect();
    Ok(Instance::new(m, jobs, machine_cap).expect("generated instance violates invariants"))
}
