use proptest::prelude::*;
use spansub::bitset::VertexSet;
use spansub::Digraph;

fn digraph() -> impl Strategy<Value = Digraph> {
    (2usize..24).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = (0..n * n)
                .filter(|&i| bits[i] && i / n != i % n)
                .map(|i| (i / n, i % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn text_roundtrip(g in digraph()) {
        prop_assert_eq!(Digraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn degrees_match_arc_list(g in digraph()) {
        let n = g.n();
        let mut out = vec![0; n];
        let mut inn = vec![0; n];
        for (u, v) in g.arcs() {
            out[u] += 1;
            inn[v] += 1;
        }
        let want = (0..n).map(|v| out[v].min(inn[v])).min().unwrap();
        prop_assert_eq!(g.min_semi_degree(), want);
        prop_assert_eq!(out.iter().sum::<usize>(), g.arc_count());
    }

    #[test]
    fn common_neighbourhood(g in digraph(), a in 0usize..24, b in 0usize..24) {
        let n = g.n();
        let (u, v) = (a % n, b % n);
        prop_assume!(u != v);
        let want: Vec<usize> = (0..n).filter(|&w| g.has_arc(u, w) && g.has_arc(w, v)).collect();
        prop_assert_eq!(g.common_out_in(u, v).to_vec(), want.clone());
        prop_assert_eq!(g.common_out_in_count(u, v), want.len());
    }

    #[test]
    fn remove_add_relabels(g in digraph(), mask in any::<u32>()) {
        let n = g.n();
        let removed = VertexSet::from_members(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        let kept: Vec<usize> = (0..n).filter(|&v| !removed.contains(v)).collect();
        let sub = g.remove_add(&removed, &VertexSet::new(n));
        prop_assert_eq!(sub.graph.n(), kept.len());
        for (i, &x) in kept.iter().enumerate() {
            prop_assert_eq!(sub.original(i), x);
            prop_assert_eq!(sub.local(x), Some(i));
            for (j, &y) in kept.iter().enumerate() {
                prop_assert_eq!(sub.graph.has_arc(i, j), g.has_arc(x, y));
            }
        }
    }

    #[test]
    fn reversal_is_an_involution(g in digraph()) {
        let r = g.reversed();
        prop_assert_eq!(r.reversed(), g.clone());
        for (u, v) in g.arcs() {
            prop_assert!(r.has_arc(v, u));
        }
    }
}
