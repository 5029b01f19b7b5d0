//! Instance generators: dense random hosts, the bipartite tightness family,
//! and random patterns.

use rand::seq::{index::sample, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::assembler::PatternDigraph;
use crate::bounds::semi_degree_threshold;
use crate::digraph::Digraph;
use crate::rng::stream;

/// Added to `1/2 + ε` when sampling arcs, so that repairs stay rare.
pub const DENSITY_MARGIN: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("arc probability {0} exceeds 1")]
    InfeasibleDensity(f64),
    #[error("semi-degree {target} is impossible on {n} vertices")]
    InfeasibleDegree { n: usize, target: usize },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("need ⌊n/2⌋ > m + k, got n = {n}, m = {m}, k = {k}")]
    InvalidSizes { n: usize, m: usize, k: usize },
}

/// Random digraph with `δ⁰ >= ⌈(1/2 + ε)·n⌉`.
///
/// Each ordered pair is an arc with probability `1/2 + ε + 0.05`; deficient
/// vertices then receive random missing arcs until they comply.
pub fn gen_random_semidegree(n: usize, epsilon: f64, seed: u64) -> Result<Digraph, InstanceError> {
    if n < 4 || !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(InstanceError::InvalidArguments(format!(
            "need n >= 4 and 0 < epsilon < 1/2, got n = {n}, epsilon = {epsilon}"
        )));
    }
    let p = 0.5 + epsilon + DENSITY_MARGIN;
    if p > 1.0 + 1e-9 {
        return Err(InstanceError::InfeasibleDensity(p));
    }
    gen_random_min_semidegree(n, semi_degree_threshold(epsilon, n), p.min(1.0), seed)
}

/// Random digraph with arc probability `p`, repaired to `δ⁰ >= target`.
pub fn gen_random_min_semidegree(n: usize, target: usize, p: f64, seed: u64) -> Result<Digraph, InstanceError> {
    if n > 0 && target >= n {
        return Err(InstanceError::InfeasibleDegree { n, target });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(InstanceError::InfeasibleDensity(p));
    }
    let mut rng = stream(seed, 0);
    let mut adj = vec![false; n * n];
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                adj[u * n + v] = true;
            }
        }
    }
    let mut missing = Vec::with_capacity(n);
    for v in 0..n {
        let out = (0..n).filter(|&w| adj[v * n + w]).count();
        if out < target {
            missing.clear();
            missing.extend((0..n).filter(|&w| w != v && !adj[v * n + w]));
            for &w in missing.partial_shuffle(&mut rng, target - out).0.iter() {
                adj[v * n + w] = true;
            }
        }
        let inn = (0..n).filter(|&w| adj[w * n + v]).count();
        if inn < target {
            missing.clear();
            missing.extend((0..n).filter(|&w| w != v && !adj[w * n + v]));
            for &w in missing.partial_shuffle(&mut rng, target - inn).0.iter() {
                adj[w * n + v] = true;
            }
        }
    }
    let arcs = (0..n * n).filter(|&i| adj[i]).map(|i| (i / n, i % n));
    Ok(Digraph::from_arcs(n, arcs).expect("generated arcs are simple"))
}

/// Sizes `(|A|, |B|)` of the bipartite tightness instance.
pub fn extremal_sides(n: usize, m: usize, k: usize) -> Result<(usize, usize), InstanceError> {
    if n / 2 <= m + k {
        return Err(InstanceError::InvalidSizes { n, m, k });
    }
    let a = n / 2 - (m + k);
    Ok((a, n - a))
}

/// Bidirected complete bipartite digraph with sides `A = {0, …, |A|-1}` and
/// `B` the rest, where `|A| = ⌊n/2⌋ - (m + k)`. The sides are too unbalanced
/// for any spanning subdivision of an `m`-arc, `k`-vertex pattern.
pub fn gen_extremal(n: usize, m: usize, k: usize) -> Result<Digraph, InstanceError> {
    let (a, _) = extremal_sides(n, m, k)?;
    let arcs = (0..a).flat_map(|u| (a..n).flat_map(move |v| [(u, v), (v, u)]));
    Ok(Digraph::from_arcs(n, arcs).expect("bipartite arcs are simple"))
}

/// A random simple pattern with exactly `m` arcs and no isolated vertices.
///
/// Arcs are drawn over a pool of between the fewest possible and `2m`
/// vertices; unused pool vertices are dropped.
pub fn gen_random_pattern(m: usize, seed: u64) -> Result<PatternDigraph, InstanceError> {
    if m == 0 {
        return Err(InstanceError::InvalidArguments("pattern needs m >= 1".into()));
    }
    let mut rng = stream(seed, 0);
    let smallest = (2..).find(|s: &usize| s * (s - 1) >= m).expect("unbounded search");
    let pool = rng.gen_range(smallest..=(2 * m).max(smallest));
    let picks = sample(&mut rng, pool * (pool - 1), m);
    let mut arcs: Vec<(usize, usize)> = picks
        .iter()
        .map(|x| {
            let (u, r) = (x / (pool - 1), x % (pool - 1));
            (u, if r < u { r } else { r + 1 })
        })
        .collect();
    let mut label = vec![usize::MAX; pool];
    let mut used: Vec<usize> = arcs.iter().flat_map(|&(u, v)| [u, v]).collect();
    used.sort_unstable();
    used.dedup();
    for (i, &x) in used.iter().enumerate() {
        label[x] = i;
    }
    for a in &mut arcs {
        *a = (label[a.0], label[a.1]);
    }
    Ok(PatternDigraph::from_arcs(used.len(), arcs).expect("relabelled pattern is valid"))
}
