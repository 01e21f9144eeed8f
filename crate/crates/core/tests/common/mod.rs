//! Test-only oracles, independent of the solver code paths.
#![allow(dead_code)]

use capjob_core::{generate_instance, CapFactor, GenParams, Instance, IntRange, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every start chain of job `j` derived directly from release, due and
/// processing times: first start at or after release, each start at or after
/// the previous completion, last completion at or before due.
pub fn all_chains(inst: &Instance, j: usize) -> Vec<Vec<i64>> {
    let job = inst.job(j);
    let p: Vec<i64> = job.route.iter().map(|&i| i64::from(job.proc_time[i])).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(p: &[i64], due: i64, earliest: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let k = cur.len();
        if k == p.len() {
            out.push(cur.clone());
            return;
        }
        let rest: i64 = p[k..].iter().sum();
        let mut s = earliest;
        while s + rest <= due {
            cur.push(s);
            rec(p, due, s + p[k], cur, out);
            cur.pop();
            s += 1;
        }
    }
    rec(&p, job.due, job.release, &mut cur, &mut out);
    out
}

struct Brute<'a> {
    inst: &'a Instance,
    chains: Vec<Vec<Vec<i64>>>,
    load: Vec<Vec<u64>>, // [machine][date]
    cur: Solution,
    best: Solution,
    best_count: usize,
}

impl Brute<'_> {
    fn fits_and_apply(&mut self, j: usize, chain: &[i64], sign: i64) -> bool {
        let job = self.inst.job(j);
        if sign > 0 {
            for (pos, &s) in chain.iter().enumerate() {
                let i = job.route[pos];
                for t in s..s + i64::from(job.proc_time[i]) {
                    if self.load[i][t as usize] + u64::from(job.cap_usage[i]) > u64::from(self.inst.machine_cap()[i]) {
                        return false;
                    }
                }
            }
        }
        for (pos, &s) in chain.iter().enumerate() {
            let i = job.route[pos];
            for t in s..s + i64::from(job.proc_time[i]) {
                let cell = &mut self.load[i][t as usize];
                if sign > 0 {
                    *cell += u64::from(job.cap_usage[i]);
                } else {
                    *cell -= u64::from(job.cap_usage[i]);
                }
            }
        }
        true
    }

    fn rec(&mut self, j: usize, count: usize) {
        if j == self.inst.num_jobs() {
            if count > self.best_count {
                self.best_count = count;
                self.best = self.cur.clone();
            }
            return;
        }
        for c in 0..self.chains[j].len() {
            let chain = self.chains[j][c].clone();
            if self.fits_and_apply(j, &chain, 1) {
                self.cur.accepted[j] = true;
                self.cur.starts[j] = Some(chain.clone());
                self.rec(j + 1, count + 1);
                self.cur.accepted[j] = false;
                self.cur.starts[j] = None;
                self.fits_and_apply(j, &chain, -1);
            }
        }
        self.rec(j + 1, count);
    }
}

/// Maximum throughput over all acceptance subsets and all start chains.
pub fn brute_force(inst: &Instance) -> (usize, Solution) {
    let h = inst.jobs().iter().map(|j| j.due).max().unwrap_or(0) as usize;
    let mut b = Brute {
        inst,
        chains: (0..inst.num_jobs()).map(|j| all_chains(inst, j)).collect(),
        load: vec![vec![0; h + 2]; inst.num_machines()],
        cur: Solution::rejected(inst.num_jobs()),
        best: Solution::rejected(inst.num_jobs()),
        best_count: 0,
    };
    b.rec(0, 0);
    (b.best_count, b.best)
}

/// Small random instance: n <= 5, m <= 2, horizon <= 12.
pub fn tiny_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let params = GenParams {
        num_jobs: rng.gen_range(1..=5),
        num_machines: rng.gen_range(1..=2),
        proc_range: IntRange::new(1, 3),
        usage_range: IntRange::new(1, 4),
        release_range: IntRange::new(1, 3),
        window: rng.gen_range(0..=3),
        cap_factor: CapFactor::from_millis(rng.gen_range(200..=1500)),
        job_shop: rng.gen_bool(0.2),
        seed,
    };
    let inst = generate_instance(&params).unwrap();
    assert!(inst.horizon() <= 12);
    inst
}

/// Instances of up to ten jobs for model/validator cross-checks.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
    let params = GenParams {
        num_jobs: rng.gen_range(1..=10),
        num_machines: rng.gen_range(1..=4),
        proc_range: IntRange::new(1, 4),
        usage_range: IntRange::new(5, 10),
        release_range: IntRange::new(1, 8),
        window: rng.gen_range(0..=6),
        cap_factor: CapFactor::from_millis(rng.gen_range(300..=2000)),
        job_shop: rng.gen_bool(0.2),
        seed,
    };
    generate_instance(&params).unwrap()
}

/// Feasibility straight from the instance data: shape, release, precedence,
/// due date and per-date load. Shares no code with the validator.
pub fn independently_feasible(inst: &Instance, sol: &Solution) -> bool {
    let n = inst.num_jobs();
    if sol.accepted.len() != n || sol.starts.len() != n {
        return false;
    }
    let h = inst.jobs().iter().map(|j| j.due).max().unwrap_or(0).max(0) as usize;
    let mut load = vec![vec![0u64; h + 1]; inst.num_machines()];
    for j in 0..n {
        let job = inst.job(j);
        let starts = match (sol.accepted[j], &sol.starts[j]) {
            (false, None) => continue,
            (true, Some(s)) if s.len() == job.route.len() => s,
            _ => return false,
        };
        let mut ready = job.release;
        for (pos, &s) in starts.iter().enumerate() {
            let i = job.route[pos];
            if s < ready {
                return false;
            }
            ready = s + i64::from(job.proc_time[i]);
            if ready > job.due {
                return false;
            }
            for t in s..ready {
                load[i][t as usize] += u64::from(job.cap_usage[i]);
            }
        }
    }
    load.iter().enumerate().all(|(i, l)| l.iter().all(|&x| x <= u64::from(inst.machine_cap()[i])))
}
