use proptest::prelude::*;
use spansub::cli::BenchGrid;
use spansub::instances::{gen_random_min_semidegree, gen_random_pattern, gen_random_semidegree};
use spansub::{brute_force_subdivision, solve, verify_certificate, SolveError, SolverParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_certificate_verifies(seed in 0u64..10_000, m in 1usize..=4) {
        let d = gen_random_semidegree(200, 0.15, seed).unwrap();
        let h = gen_random_pattern(m, seed).unwrap();
        let params = SolverParams { seed, ..SolverParams::default() };
        match solve(&d, &h, &params) {
            Ok(c) => prop_assert!(verify_certificate(&d, &h, &c).is_ok()),
            Err(SolveError::SolveFailed { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tiny_hosts_agree_with_oracle(n in 4usize..=10, seed in any::<u64>(), m in 1usize..=3) {
        let d = gen_random_min_semidegree(n, (0.65 * n as f64).ceil() as usize, 0.7, seed).unwrap();
        let h = gen_random_pattern(m, seed).unwrap();
        prop_assume!(h.k() <= n);
        let oracle = brute_force_subdivision(&d, &h).unwrap();
        match solve(&d, &h, &SolverParams::default()) {
            Ok(c) => prop_assert!(verify_certificate(&d, &h, &c).is_ok()),
            Err(e) => prop_assert!(oracle.is_none(), "{e}"),
        }
    }
}

#[test]
fn success_grows_with_epsilon() {
    let grid = BenchGrid::parse("n = 300\nepsilon = 0.05, 0.15\nm = 3\nseeds = 0..20\n").unwrap();
    let rows = grid.run();
    assert_eq!(rows.len(), 40);
    let low = rows.iter().filter(|r| r.epsilon < 0.1 && r.success).count();
    let high = rows.iter().filter(|r| r.epsilon > 0.1 && r.success).count();
    assert!(low <= high, "{low} > {high}");
    assert!(rows.iter().all(|r| r.success == r.stage_failed.is_empty()));
}
