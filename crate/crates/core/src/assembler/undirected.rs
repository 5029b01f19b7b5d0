//! Undirected inputs, solved through their bidirected digraphs.

use super::{solve, PatternDigraph, SolveError, SolverParams, SubdivisionCertificate};
use crate::digraph::{Digraph, DigraphError};

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    /// Edges are normalised to `(min, max)`; loops and repeats are rejected.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self, DigraphError> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(DigraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(DigraphError::Loop(u));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(DigraphError::DuplicateArc(w[0].0, w[0].1));
        }
        Ok(UndirectedGraph { n, edges: out })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Each edge becomes two opposite arcs.
    pub fn bidirect(&self) -> Digraph {
        let arcs = self.edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]);
        Digraph::from_arcs(self.n, arcs).expect("bidirected simple graph is simple")
    }
}

/// Solves the bidirected instance; the certificate refers to the bidirected
/// pattern, whose arcs come in opposite pairs.
pub fn solve_undirected(
    host: &UndirectedGraph,
    pattern: &UndirectedGraph,
    params: &SolverParams,
) -> Result<SubdivisionCertificate, SolveError> {
    let h = PatternDigraph::new(pattern.bidirect())?;
    solve(&host.bidirect(), &h, params)
}

#[cfg(test)]
mod tests {
    use super::super::{verify_certificate, PatternError};
    use super::*;

    #[test]
    fn complete_host_triangle() {
        let g = UndirectedGraph::complete(30);
        let tri = UndirectedGraph::complete(3);
        let params = SolverParams {
            epsilon: 0.45,
            c: 5.0,
            alpha: 0.4,
            beta: 0.06,
            rho: 0.5,
            gamma: 0.33,
            seed: 2,
            ..SolverParams::default()
        };
        let cert = solve_undirected(&g, &tri, &params).unwrap();
        let h = PatternDigraph::new(tri.bidirect()).unwrap();
        assert!(verify_certificate(&g.bidirect(), &h, &cert).is_ok());
    }

    #[test]
    fn cycle_host_is_too_sparse() {
        let g = UndirectedGraph::cycle(20);
        let params = SolverParams {
            c: 1.0,
            ..SolverParams::default()
        };
        assert!(matches!(
            solve_undirected(&g, &UndirectedGraph::complete(2), &params),
            Err(SolveError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn isolated_pattern_vertex() {
        let h = UndirectedGraph::new(3, [(0, 1)]).unwrap();
        assert_eq!(
            solve_undirected(&UndirectedGraph::complete(30), &h, &SolverParams::default()),
            Err(SolveError::InvalidPattern(PatternError::IsolatedVertex(2)))
        );
    }

    #[test]
    fn rejects_repeats() {
        assert!(UndirectedGraph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(UndirectedGraph::new(3, [(1, 1)]).is_err());
    }
}
