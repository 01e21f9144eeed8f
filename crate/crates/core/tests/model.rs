mod common;

use capjob_core::validator::validate_schedule;
use capjob_core::{
    build_model, compute_time_windows, decode_assignment, export_lp, solve_exact, solve_heuristic, HeuristicConfig,
    SearchLimits, Solution,
};
use common::{all_chains, small_instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn counts_match_closed_forms() {
    for seed in 0..50 {
        let inst = small_instance(seed);
        let win = compute_time_windows(&inst);
        let model = build_model(&inst, &win);
        let (n, m, h) = (inst.num_jobs(), inst.num_machines(), inst.horizon() as usize);
        let sched = win.num_schedulable();
        let window_sizes: usize = (0..n)
            .filter(|&j| win.is_schedulable(j))
            .flat_map(|j| (0..m).map(move |pos| (j, pos)))
            .map(|(j, pos)| (win.beta(j, pos) - win.alpha(j, pos) + 1) as usize)
            .sum();
        assert_eq!(model.num_z_vars(), n);
        assert_eq!(model.num_x_vars(), window_sizes);
        assert_eq!(model.num_assignment_rows(), sched * m);
        assert_eq!(model.num_precedence_rows(), sched * (m - 1));
        assert_eq!(model.num_capacity_rows(), m * h);
        assert_eq!(model.num_reject_rows(), n - sched);
        for row in model.rows() {
            assert!(row.terms.iter().all(|&(v, _)| v < model.num_vars()));
            assert!(row.terms.windows(2).all(|w| w[0].0 < w[1].0), "terms sorted and unique");
        }
    }
}

/// Every solution that is feasible for the validator satisfies every model
/// row, and every infeasible one violates at least one row.
#[test]
fn validator_agrees_with_model_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut feasible_seen = 0;
    let mut infeasible_seen = 0;
    for seed in 0..60 {
        let inst = small_instance(seed);
        let win = compute_time_windows(&inst);
        let model = build_model(&inst, &win);
        let chains: Vec<Vec<Vec<i64>>> = (0..inst.num_jobs()).map(|j| all_chains(&inst, j)).collect();
        for _ in 0..40 {
            // random window-respecting schedules, feasible or not
            let mut sol = Solution::rejected(inst.num_jobs());
            for (j, cs) in chains.iter().enumerate() {
                if !cs.is_empty() && rng.gen_bool(0.6) {
                    sol.accept(j, cs[rng.gen_range(0..cs.len())].clone());
                }
            }
            // sometimes break precedence or windows by a date
            if rng.gen_bool(0.3) {
                let first = sol.accepted_jobs().next();
                if let Some(j) = first {
                    let starts = sol.starts[j].as_mut().unwrap();
                    let pos = rng.gen_range(0..starts.len());
                    starts[pos] += if rng.gen_bool(0.5) { 1 } else { -1 };
                }
            }
            let report = validate_schedule(&inst, &win, &sol);
            let values = model.encode_solution(&sol);
            let violated = model.violated_rows(&values);
            assert_eq!(report.is_feasible(), violated.is_empty(), "seed {seed}: {report} vs {violated:?}");
            if report.is_feasible() {
                feasible_seen += 1;
                assert_eq!(decode_assignment(&model, &values).unwrap(), sol);
                assert_eq!(model.objective(&values), sol.throughput());
            } else {
                infeasible_seen += 1;
            }
        }
    }
    assert!(feasible_seen > 100 && infeasible_seen > 100, "{feasible_seen} / {infeasible_seen}");
}

#[test]
fn solver_outputs_satisfy_rows() {
    for seed in 0..30 {
        let inst = small_instance(seed);
        let win = compute_time_windows(&inst);
        let model = build_model(&inst, &win);
        for sol in [
            solve_exact(&inst, &win, &SearchLimits::nodes(5_000)).solution,
            solve_heuristic(&inst, &win, &HeuristicConfig::default()),
        ] {
            let values = model.encode_solution(&sol);
            assert!(model.violated_rows(&values).is_empty());
            assert_eq!(decode_assignment(&model, &values).unwrap(), sol);
        }
    }
}

#[test]
fn export_is_deterministic() {
    for seed in 0..10 {
        let inst = small_instance(seed);
        let a = export_lp(&build_model(&inst, &compute_time_windows(&inst)), &["x".into()]);
        let b = export_lp(&build_model(&inst, &compute_time_windows(&inst)), &["x".into()]);
        assert_eq!(a, b);
        let model = build_model(&inst, &compute_time_windows(&inst));
        let empty = model.rows().iter().filter(|r| r.terms.is_empty()).count();
        assert_eq!(a.dropped_empty_rows, empty);
        let written = a.text.lines().filter(|l| l.starts_with(" assign_") || l.starts_with(" prec_") || l.starts_with(" cap_") || l.starts_with(" reject_")).count();
        assert_eq!(written, model.rows().len() - empty);
    }
}
