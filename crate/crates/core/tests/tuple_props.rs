use proptest::prelude::*;
use spansub::absorber::GoodTupleSystem;
use spansub::connector::ConnectorSystem;
use spansub::instances::gen_random_semidegree;
use spansub::tuple_system::{check_family, select_family, TupleSystem};

fn naive_count<S: TupleSystem>(sys: &S, x: usize) -> usize {
    let n = sys.ground_size();
    match sys.arity() {
        1 => (0..n).filter(|&a| sys.member(x, &[a])).count(),
        2 => (0..n)
            .flat_map(|a| (0..n).map(move |b| [a, b]))
            .filter(|t| sys.member(x, t))
            .count(),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn member_hooks_agree_with_member(seed in 0u64..1000, n in 12usize..30) {
        let g = gen_random_semidegree(n, 0.15, seed).unwrap();
        let conn = ConnectorSystem::new(&g, 0.3);
        for x in (0..conn.index_size()).step_by(7) {
            prop_assert_eq!(conn.member_count(x), naive_count(&conn, x));
        }
        let good = GoodTupleSystem::new(&g, 0.09);
        for u in 0..n {
            prop_assert_eq!(good.member_count(u), naive_count(&good, u));
        }
        for w in 0..n {
            let mut listed = vec![];
            conn.for_each_member(&[w], &mut |x| listed.push(x));
            listed.sort_unstable();
            let want: Vec<usize> = (0..conn.index_size()).filter(|&x| conn.member(x, &[w])).collect();
            prop_assert_eq!(listed, want);
        }
    }

    #[test]
    fn selected_families_check_out(seed in 0u64..1000) {
        let g = gen_random_semidegree(60, 0.15, seed).unwrap();
        let sys = ConnectorSystem::new(&g, 0.3);
        let f = select_family(&sys, 0.4, 0.05, seed, 20).unwrap();
        prop_assert!(check_family(&sys, &f, 0.4, 0.05).is_ok());
        prop_assert_eq!(&f, &select_family(&sys, 0.4, 0.05, seed, 20).unwrap());
    }

    #[test]
    fn smaller_beta_never_hurts(seed in 0u64..1000, b in 1usize..8) {
        let g = gen_random_semidegree(80, 0.15, seed).unwrap();
        let sys = GoodTupleSystem::new(&g, 0.09);
        let beta = b as f64 / 80.0;
        if let Ok(f) = select_family(&sys, 0.5, beta, seed, 20) {
            let smaller = select_family(&sys, 0.5, beta / 2.0, seed, 20).unwrap();
            prop_assert!(smaller.len() <= f.len());
            prop_assert!(check_family(&sys, &smaller, 0.5, beta / 2.0).is_ok());
        }
    }
}
