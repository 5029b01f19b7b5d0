use proptest::prelude::*;
use proptest::sample::subsequence;
use spansub::absorber::{build_absorbing_path, is_directed_path, AbsorberError};
use spansub::instances::gen_random_semidegree;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn absorption_is_sound(seed in 0u64..1000, picks in subsequence((0usize..120).collect::<Vec<_>>(), 0..12)) {
        let g = gen_random_semidegree(120, 0.15, seed).unwrap();
        let path = build_absorbing_path(&g, 0.45, 0.05, 0.15, seed).unwrap();
        prop_assert!(is_directed_path(&g, path.vertices()));
        let on_path = path.vertex_set(120);
        let leftover: Vec<usize> = picks.into_iter().filter(|&v| !on_path.contains(v)).collect();
        let mut work = path.clone();
        match work.absorb(&g, &leftover) {
            Ok(p) => {
                prop_assert!(is_directed_path(&g, &p));
                prop_assert_eq!(p.first(), path.vertices().first());
                prop_assert_eq!(p.last(), path.vertices().last());
                let mut got = p.clone();
                got.sort_unstable();
                let mut want: Vec<usize> = path.vertices().iter().chain(&leftover).copied().collect();
                want.sort_unstable();
                prop_assert_eq!(got, want);
            }
            Err(AbsorberError::AbsorptionFailed { .. }) => {
                prop_assert_eq!(work.current_path(), path.current_path());
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn path_vertices_are_rejected(seed in 0u64..200) {
        let g = gen_random_semidegree(90, 0.15, seed).unwrap();
        let mut path = build_absorbing_path(&g, 0.45, 0.05, 0.15, seed).unwrap();
        let v = path.vertices()[1];
        prop_assert_eq!(path.absorb(&g, &[v]), Err(AbsorberError::InvalidLeftover(v)));
    }
}
