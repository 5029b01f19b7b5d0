//! Directed Hamiltonian cycles in digraphs of minimum semi-degree at least `n/2`.
//!
//! Each restart grows a path from a random vertex and, in this order:
//!
//! - extends the head along an unvisited out-neighbour, or the tail along an
//!   unvisited in-neighbour;
//! - inserts an outside vertex `u` between consecutive path vertices `x -> y`
//!   whenever `x -> u -> y`;
//! - closes the path into a cycle on the same vertices (directly, or by
//!   swapping two segments) and reopens it towards an outside vertex, which
//!   lengthens the path by one;
//! - otherwise rotates: if the head `h` has an arc to `p_i`, the segment
//!   `p_i … h` is a cycle that can be re-entered at any `p_j` with
//!   `p_{i-1} -> p_j`, making `p_{j-1}` the new head (symmetrically at the tail).
//!
//! Rotations, insertions and reopenings count against the step budget.
//! Digraphs with at most [`EXACT_LIMIT`] vertices fall back to an exact subset
//! dynamic programme when every restart runs out.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::digraph::Digraph;
use crate::rng;

/// Largest `n` handled by [`exact_hamiltonian_cycle`].
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HamiltonError {
    #[error("no Hamiltonian cycle found in {n}-vertex digraph (δ⁰ = {min_semi_degree}) within budget")]
    NotFound { n: usize, min_semi_degree: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Steps per restart; `None` means `50·n²`.
    pub steps_per_restart: Option<u64>,
    pub restarts: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            steps_per_restart: None,
            restarts: 20,
        }
    }
}

impl Budget {
    fn steps(&self, n: usize) -> u64 {
        self.steps_per_restart.unwrap_or(50 * (n as u64) * (n as u64))
    }
}

/// A cyclic vertex sequence; the arc from the last vertex back to the first is implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamCycle(Vec<usize>);

impl HamCycle {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_valid(&self, graph: &Digraph) -> bool {
        is_hamiltonian_cycle(graph, &self.0)
    }
}

/// Checks coverage, uniqueness and every (cyclic) arc.
pub fn is_hamiltonian_cycle(graph: &Digraph, cycle: &[usize]) -> bool {
    let n = graph.n();
    if n < 2 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..n).all(|i| graph.has_arc(cycle[i], cycle[(i + 1) % n]))
}

pub fn hamiltonian_cycle(graph: &Digraph, seed: u64, budget: Budget) -> Result<HamCycle, HamiltonError> {
    let n = graph.n();
    let not_found = || HamiltonError::NotFound {
        n,
        min_semi_degree: graph.min_semi_degree(),
    };
    if n < 2 {
        return Err(not_found());
    }
    let limit = budget.steps(n);
    for restart in 0..budget.restarts.max(1) {
        let mut search = Search::new(graph, rng::stream(seed, restart as u64));
        if let Some(c) = search.run(limit) {
            debug_assert!(is_hamiltonian_cycle(graph, &c));
            return Ok(HamCycle(c));
        }
    }
    if n <= EXACT_LIMIT {
        if let Some(c) = exact_hamiltonian_cycle(graph) {
            return Ok(c);
        }
    }
    Err(not_found())
}

/// A Hamiltonian path: the Hamiltonian cycle minus its lexicographically
/// smallest arc.
pub fn hamiltonian_path(graph: &Digraph, seed: u64, budget: Budget) -> Result<Vec<usize>, HamiltonError> {
    if graph.n() == 1 {
        return Ok(vec![0]);
    }
    let cycle = hamiltonian_cycle(graph, seed, budget)?.into_vec();
    let n = cycle.len();
    let cut = (0..n)
        .min_by_key(|&i| (cycle[i], cycle[(i + 1) % n]))
        .expect("non-empty cycle");
    // drop arc cycle[cut] -> cycle[cut + 1]
    Ok((1..=n).map(|k| cycle[(cut + k) % n]).collect())
}

/// Exact search over vertex subsets; `None` if no Hamiltonian cycle exists.
///
/// `reach[S]` holds the possible last vertices of paths that start at 0 and
/// visit exactly `S`. Panics above [`EXACT_LIMIT`] vertices.
pub fn exact_hamiltonian_cycle(graph: &Digraph) -> Option<HamCycle> {
    let n = graph.n();
    assert!(n <= EXACT_LIMIT, "exact search limited to {EXACT_LIMIT} vertices");
    if n < 2 {
        return None;
    }
    let out: Vec<u32> = (0..n)
        .map(|u| graph.out_neighbors(u).iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let full = (1u32 << n) - 1;
    let mut reach = vec![0u32; 1 << n];
    reach[1] = 1;
    for mask in 1..=full {
        if mask & 1 == 0 || reach[mask as usize] == 0 {
            continue;
        }
        let mut ends = reach[mask as usize];
        while ends != 0 {
            let v = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = out[v] & !mask;
            while next != 0 {
                let w = next.trailing_zeros();
                next &= next - 1;
                reach[(mask | 1 << w) as usize] |= 1 << w;
            }
        }
    }
    let last = (0..n).find(|&v| reach[full as usize] >> v & 1 == 1 && graph.has_arc(v, 0))?;
    let mut cycle = vec![last];
    let (mut mask, mut cur) = (full, last);
    while mask != 1 {
        mask &= !(1 << cur);
        let prev = (0..n)
            .find(|&p| reach[mask as usize] >> p & 1 == 1 && graph.has_arc(p, cur))
            .expect("reachability table is consistent");
        cycle.push(prev);
        cur = prev;
    }
    cycle.reverse();
    Some(HamCycle(cycle))
}

const NONE: usize = usize::MAX;

struct Search<'a> {
    graph: &'a Digraph,
    rng: ChaCha8Rng,
    path: Vec<usize>,
    /// position in `path`, or `NONE`
    pos: Vec<usize>,
    steps: u64,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Digraph, rng: ChaCha8Rng) -> Self {
        Search {
            graph,
            rng,
            path: Vec::with_capacity(graph.n()),
            pos: vec![NONE; graph.n()],
            steps: 0,
        }
    }

    fn reindex(&mut self) {
        for (i, &v) in self.path.iter().enumerate() {
            self.pos[v] = i;
        }
    }

    fn set_path(&mut self, path: Vec<usize>) {
        for &v in &self.path {
            self.pos[v] = NONE;
        }
        self.path = path;
        self.reindex();
    }

    fn run(&mut self, limit: u64) -> Option<Vec<usize>> {
        let n = self.graph.n();
        let start = self.rng.gen_range(0..n);
        self.set_path(vec![start]);
        loop {
            if self.extend() {
                continue;
            }
            let head = *self.path.last().expect("non-empty");
            if self.path.len() == n && self.graph.has_arc(head, self.path[0]) {
                return Some(std::mem::take(&mut self.path));
            }
            if self.steps >= limit {
                return None;
            }
            self.steps += 1;
            if self.path.len() < n && self.insert_outside() {
                continue;
            }
            if let Some(cycle) = self.close_cycle() {
                if cycle.len() == n {
                    return Some(cycle);
                }
                if self.reopen(cycle) {
                    continue;
                }
                // no arc leaves the cycle: not strongly connected
                return None;
            }
            if !self.rotate() {
                return None;
            }
        }
    }

    /// Grows the path at either end; true if anything was added.
    fn extend(&mut self) -> bool {
        let mut grew = false;
        loop {
            let head = *self.path.last().expect("non-empty");
            let outs: Vec<usize> = self
                .graph
                .out_neighbors(head)
                .iter()
                .copied()
                .filter(|&w| self.pos[w] == NONE)
                .collect();
            if let Some(&w) = outs.choose(&mut self.rng) {
                self.pos[w] = self.path.len();
                self.path.push(w);
                grew = true;
                continue;
            }
            let tail = self.path[0];
            let ins: Vec<usize> = self
                .graph
                .in_neighbors(tail)
                .iter()
                .copied()
                .filter(|&w| self.pos[w] == NONE)
                .collect();
            if let Some(&w) = ins.choose(&mut self.rng) {
                self.path.insert(0, w);
                self.reindex();
                grew = true;
                continue;
            }
            return grew;
        }
    }

    fn insert_outside(&mut self) -> bool {
        let n = self.graph.n();
        let mut outside: Vec<usize> = (0..n).filter(|&u| self.pos[u] == NONE).collect();
        outside.shuffle(&mut self.rng);
        for u in outside {
            let slot = (0..self.path.len() - 1)
                .find(|&i| self.graph.has_arc(self.path[i], u) && self.graph.has_arc(u, self.path[i + 1]));
            if let Some(i) = slot {
                self.path.insert(i + 1, u);
                self.reindex();
                return true;
            }
        }
        false
    }

    /// A cycle through exactly the path's vertices, if one is found.
    fn close_cycle(&self) -> Option<Vec<usize>> {
        let p = &self.path;
        let k = p.len() - 1;
        let g = self.graph;
        if k >= 1 && g.has_arc(p[k], p[0]) {
            return Some(p.clone());
        }
        // Segments A = p0..pi, B = p(i+1)..pj, C = p(j+1)..pk, reordered A C B.
        let back_to_start: Vec<usize> = (1..k).filter(|&j| g.has_arc(p[j], p[0])).collect();
        for i in 0..k.saturating_sub(1) {
            if !g.has_arc(p[k], p[i + 1]) {
                continue;
            }
            for &j in back_to_start.iter().filter(|&&j| j > i) {
                if g.has_arc(p[i], p[j + 1]) {
                    let mut c = Vec::with_capacity(p.len());
                    c.extend_from_slice(&p[..=i]);
                    c.extend_from_slice(&p[j + 1..]);
                    c.extend_from_slice(&p[i + 1..=j]);
                    return Some(c);
                }
            }
        }
        None
    }

    /// Opens `cycle` so that it continues into an outside vertex.
    fn reopen(&mut self, cycle: Vec<usize>) -> bool {
        let len = cycle.len();
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut self.rng);
        for &idx in &order {
            let x = cycle[idx];
            let out = self
                .graph
                .out_neighbors(x)
                .iter()
                .copied()
                .find(|&u| self.pos[u] == NONE);
            if let Some(u) = out {
                let mut p: Vec<usize> = (1..=len).map(|k| cycle[(idx + k) % len]).collect();
                p.push(u);
                self.set_path(p);
                return true;
            }
            let inn = self
                .graph
                .in_neighbors(x)
                .iter()
                .copied()
                .find(|&u| self.pos[u] == NONE);
            if let Some(u) = inn {
                let mut p = vec![u];
                p.extend((0..len).map(|k| cycle[(idx + k) % len]));
                self.set_path(p);
                return true;
            }
        }
        false
    }

    fn rotate(&mut self) -> bool {
        let at_head = self.rng.gen_bool(0.5);
        if self.rotate_end(at_head) || self.rotate_end(!at_head) {
            self.reindex();
            true
        } else {
            false
        }
    }

    /// Head rotation on the path read forwards, or tail rotation on the path
    /// read backwards with arcs reversed.
    fn rotate_end(&mut self, at_head: bool) -> bool {
        let g = self.graph;
        let arc = |a: usize, b: usize| if at_head { g.has_arc(a, b) } else { g.has_arc(b, a) };
        let mut p = std::mem::take(&mut self.path);
        if !at_head {
            p.reverse();
        }
        let k = p.len() - 1;
        let h = p[k];
        let mut pivots: Vec<usize> = (1..k).filter(|&i| arc(h, p[i])).collect();
        pivots.shuffle(&mut self.rng);
        let mut done = false;
        for i in pivots {
            let exits: Vec<usize> = (i + 1..=k).filter(|&j| arc(p[i - 1], p[j])).collect();
            if let Some(&j) = exits.choose(&mut self.rng) {
                // p0..p(i-1), pj..pk, pi..p(j-1)
                let mut q = Vec::with_capacity(p.len());
                q.extend_from_slice(&p[..i]);
                q.extend_from_slice(&p[j..]);
                q.extend_from_slice(&p[i..j]);
                p = q;
                done = true;
                break;
            }
        }
        if !at_head {
            p.reverse();
        }
        self.path = p;
        done
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bipartite_bidirected(a: usize, b: usize) -> Digraph {
        let mut arcs = vec![];
        for u in 0..a {
            for v in a..a + b {
                arcs.push((u, v));
                arcs.push((v, u));
            }
        }
        Digraph::from_arcs(a + b, arcs).unwrap()
    }

    #[test]
    fn tiny_complete() {
        let c = hamiltonian_cycle(&Digraph::complete(3), 0, Budget::default()).unwrap();
        assert!(c.is_valid(&Digraph::complete(3)));
        assert_eq!(c.vertices().len(), 3);
        let two = hamiltonian_cycle(&Digraph::complete(2), 0, Budget::default()).unwrap();
        assert_eq!(two.vertices().len(), 2);
    }

    #[test]
    fn balanced_bipartite_alternates() {
        let d = bipartite_bidirected(3, 3);
        let c = hamiltonian_cycle(&d, 5, Budget::default()).unwrap();
        assert!(c.is_valid(&d));
        let sides: Vec<bool> = c.vertices().iter().map(|&v| v < 3).collect();
        assert!((0..6).all(|i| sides[i] != sides[(i + 1) % 6]));
    }

    #[test]
    fn below_threshold_best_effort() {
        let d = Digraph::directed_cycle(4);
        let c = hamiltonian_cycle(&d, 1, Budget::default()).unwrap();
        assert!(c.is_valid(&d));
    }

    #[test]
    fn unbalanced_bipartite_has_none() {
        let d = bipartite_bidirected(2, 4);
        let budget = Budget {
            steps_per_restart: Some(200),
            restarts: 2,
        };
        assert!(hamiltonian_cycle(&d, 0, budget).is_err());
        assert!(exact_hamiltonian_cycle(&d).is_none());
    }

    #[test]
    fn path_variants() {
        assert_eq!(
            hamiltonian_path(&Digraph::empty(1), 0, Budget::default()).unwrap(),
            vec![0]
        );
        let k5 = Digraph::complete(5);
        let p = hamiltonian_path(&k5, 3, Budget::default()).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.windows(2).all(|w| k5.has_arc(w[0], w[1])));
        // the smallest arc (0, x) is the one removed, so the path ends at 0
        assert_eq!(*p.last().unwrap(), 0);
        assert!(hamiltonian_cycle(&Digraph::empty(0), 0, Budget::default()).is_err());
    }

    #[test]
    fn exact_on_cycle() {
        let d = Digraph::directed_cycle(7);
        let c = exact_hamiltonian_cycle(&d).unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn validator_rejects() {
        let d = Digraph::directed_cycle(4);
        assert!(is_hamiltonian_cycle(&d, &[0, 1, 2, 3]));
        assert!(!is_hamiltonian_cycle(&d, &[1, 0, 3, 2]));
        assert!(!is_hamiltonian_cycle(&d, &[0, 1, 2]));
        assert!(!is_hamiltonian_cycle(&d, &[0, 1, 1, 3]));
    }
}
