//! Experiment grids: which instances to generate and which solvers to run.

use std::path::Path;

use capjob_core::{CapFactor, GenParams, IntRange};
use serde::{Deserialize, Serialize};

use crate::results::{SolverKind, SolverSettings};

fn default_m() -> usize {
    5
}
fn default_proc() -> [u32; 2] {
    [1, 5]
}
fn default_usage() -> [u32; 2] {
    [20, 30]
}
fn default_release() -> [u32; 2] {
    [1, 20]
}
fn default_seeds() -> u32 {
    1
}
fn default_first_seed() -> u64 {
    1
}
fn default_solvers() -> Vec<SolverKind> {
    vec![SolverKind::Exact]
}
fn default_max_nodes() -> u64 {
    1_000_000
}
fn default_time_limit() -> f64 {
    1200.0
}
fn default_ls_iterations() -> u32 {
    50
}

/// Grid description as read from JSON.
///
/// Every `(n, w, f)` combination gets `seeds_per_cell` replicates with seeds
/// `first_seed..first_seed + seeds_per_cell`. With `job_shop` set, every
/// `(n, w)` pair additionally gets the same replicates in job-shop mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub ns: Vec<usize>,
    pub ws: Vec<u32>,
    pub fs: Vec<f64>,
    #[serde(default)]
    pub job_shop: bool,
    #[serde(default = "default_seeds")]
    pub seeds_per_cell: u32,
    #[serde(default = "default_first_seed")]
    pub first_seed: u64,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_proc")]
    pub proc_range: [u32; 2],
    #[serde(default = "default_usage")]
    pub usage_range: [u32; 2],
    #[serde(default = "default_release")]
    pub release_range: [u32; 2],
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
    #[serde(default = "default_max_nodes")]
    pub max_nodes: u64,
    #[serde(default = "default_time_limit")]
    pub time_limit_s: f64,
    #[serde(default = "default_ls_iterations")]
    pub ls_iterations: u32,
}

/// One instance of the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: String,
    pub params: GenParams,
}

impl GridSpec {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let spec: GridSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        Self::from_json(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(!self.ns.is_empty(), "ns must not be empty");
        anyhow::ensure!(!self.ws.is_empty(), "ws must not be empty");
        anyhow::ensure!(!self.fs.is_empty() || self.job_shop, "fs must not be empty unless job_shop is set");
        anyhow::ensure!(self.seeds_per_cell >= 1, "seeds_per_cell must be at least 1");
        anyhow::ensure!(!self.solvers.is_empty(), "solvers must not be empty");
        for &f in &self.fs {
            anyhow::ensure!(CapFactor::from_f64(f).is_some(), "capacity factor {f} must be positive");
        }
        for cell in self.cells() {
            cell.params.validate().map_err(|e| anyhow::anyhow!("{}: {e}", cell.id))?;
        }
        Ok(())
    }

    fn params(&self, n: usize, w: u32, f: CapFactor, job_shop: bool, seed: u64) -> GenParams {
        GenParams {
            num_jobs: n,
            num_machines: self.m,
            proc_range: IntRange::new(self.proc_range[0], self.proc_range[1]),
            usage_range: IntRange::new(self.usage_range[0], self.usage_range[1]),
            release_range: IntRange::new(self.release_range[0], self.release_range[1]),
            window: w,
            cap_factor: f,
            job_shop,
            seed,
        }
    }

    /// All instances in a fixed order: n, then w, then f (job shop last), then seed.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        let seeds = self.first_seed..self.first_seed + u64::from(self.seeds_per_cell);
        for &n in &self.ns {
            for &w in &self.ws {
                for &f in &self.fs {
                    let Some(factor) = CapFactor::from_f64(f) else { continue };
                    for seed in seeds.clone() {
                        out.push(Cell {
                            id: instance_id(n, self.m, w, Some(factor), seed),
                            params: self.params(n, w, factor, false, seed),
                        });
                    }
                }
                if self.job_shop {
                    for seed in seeds.clone() {
                        out.push(Cell {
                            id: instance_id(n, self.m, w, None, seed),
                            params: self.params(n, w, CapFactor::from_millis(1000), true, seed),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn settings(&self) -> SolverSettings {
        let mut settings = SolverSettings::default();
        settings.limits.max_nodes = self.max_nodes;
        settings.limits.time_limit_secs = self.time_limit_s;
        settings.heuristic.iterations = self.ls_iterations;
        settings
    }
}

/// `n30_m5_w10_f1.5_s7`, or `n30_m5_w10_js_s7` in job-shop mode.
pub fn instance_id(n: usize, m: usize, w: u32, factor: Option<CapFactor>, seed: u64) -> String {
    match factor {
        Some(f) => format!("n{n}_m{m}_w{w}_f{f}_s{seed}"),
        None => format!("n{n}_m{m}_w{w}_js_s{seed}"),
    }
}
