//! A small reservoir `R` giving every ordered pair many common
//! out/in-neighbours, and single-hop routing through it.

use thiserror::Error;

use crate::bitset::{first_and3_not, VertexSet};
use crate::bounds::{ceil_frac, semi_degree_threshold};
use crate::digraph::Digraph;
use crate::tuple_system::{select_family, TupleError, TupleSystem, DEFAULT_MAX_RETRIES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConnectorError {
    #[error("minimum semi-degree {found} is below the required {required}")]
    InvalidDegree { found: usize, required: usize },
    #[error(transparent)]
    Family(#[from] TupleError),
    #[error("no unused reservoir vertex joins {from} to {to}")]
    ReservoirExhausted { from: usize, to: usize },
}

/// `X` = ordered pairs of distinct vertices, `Y = V(D)`, `t = 1`, and
/// `((u, v), w)` is a member iff `u -> w -> v`.
pub struct ConnectorSystem<'a> {
    graph: &'a Digraph,
    density: f64,
}

impl<'a> ConnectorSystem<'a> {
    pub fn new(graph: &'a Digraph, density: f64) -> Self {
        ConnectorSystem { graph, density }
    }

    /// Index of the ordered pair `(u, v)`, `u != v`.
    pub fn pair_index(&self, u: usize, v: usize) -> usize {
        let n = self.graph.n();
        debug_assert_ne!(u, v);
        u * (n - 1) + if v < u { v } else { v - 1 }
    }

    pub fn pair(&self, x: usize) -> (usize, usize) {
        let n = self.graph.n();
        let (u, r) = (x / (n - 1), x % (n - 1));
        (u, if r < u { r } else { r + 1 })
    }
}

impl TupleSystem for ConnectorSystem<'_> {
    fn ground_size(&self) -> usize {
        self.graph.n()
    }

    fn index_size(&self) -> usize {
        let n = self.graph.n();
        n * n.saturating_sub(1)
    }

    fn arity(&self) -> usize {
        1
    }

    fn density(&self) -> f64 {
        self.density
    }

    #[inline]
    fn member(&self, x: usize, tuple: &[usize]) -> bool {
        let (u, v) = self.pair(x);
        let w = tuple[0];
        self.graph.has_arc(u, w) && self.graph.has_arc(w, v)
    }

    fn for_each_member(&self, tuple: &[usize], f: &mut dyn FnMut(usize)) {
        let w = tuple[0];
        for &u in self.graph.in_neighbors(w) {
            for &v in self.graph.out_neighbors(w) {
                if u != v {
                    f(self.pair_index(u, v));
                }
            }
        }
    }

    fn member_count(&self, x: usize) -> usize {
        let (u, v) = self.pair(x);
        self.graph.common_out_in_count(u, v)
    }
}

/// Reservoir vertices plus the coverage they guarantee.
#[derive(Clone, Debug)]
pub struct Reservoir {
    members: VertexSet,
    gamma_n: usize,
    used: VertexSet,
}

impl Reservoir {
    /// Wraps an explicit vertex set; `gamma_n` is whatever the caller vouches for.
    pub fn from_parts(members: VertexSet, gamma_n: usize) -> Self {
        let used = VertexSet::new(members.capacity());
        Reservoir { members, gamma_n, used }
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Per-pair coverage guaranteed at construction, less exclusions.
    pub fn gamma_n(&self) -> usize {
        self.gamma_n
    }

    pub fn used(&self) -> &VertexSet {
        &self.used
    }

    /// Reservoir vertices not yet handed out by [`connect_through`].
    pub fn unused(&self) -> VertexSet {
        let mut s = self.members.clone();
        s.difference_with(&self.used);
        s
    }

    /// Drops `s` from the reservoir; coverage falls by `|s ∩ R|`.
    pub fn exclude(&self, s: &VertexSet) -> Reservoir {
        let mut members = self.members.clone();
        let lost = members.intersection_len(s);
        members.difference_with(s);
        let mut used = self.used.clone();
        used.intersect_with(&members);
        Reservoir {
            members,
            gamma_n: self.gamma_n.saturating_sub(lost),
            used,
        }
    }

    /// Minimum over ordered pairs of `|N(u, v) ∩ R|`.
    pub fn min_pair_coverage(&self, graph: &Digraph) -> usize {
        let r = self.members.words();
        let n = graph.n();
        let mut best = usize::MAX;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let c = crate::bitset::and3_count(graph.out_words(u), graph.in_words(v), r);
                    best = best.min(c);
                }
            }
        }
        best
    }
}

/// Builds `R` with `|R| <= ⌊alpha·n⌋` and `|N(u, v) ∩ R| >= ⌈beta·n⌉` for
/// every ordered pair of distinct vertices.
pub fn build_reservoir(
    graph: &Digraph,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    seed: u64,
) -> Result<Reservoir, ConnectorError> {
    let n = graph.n();
    let required = semi_degree_threshold(epsilon, n);
    let found = graph.min_semi_degree();
    if found < required {
        return Err(ConnectorError::InvalidDegree { found, required });
    }
    let sys = ConnectorSystem::new(graph, 2.0 * epsilon);
    let family = select_family(&sys, alpha, beta, seed, DEFAULT_MAX_RETRIES)?;
    let members = VertexSet::from_members(n, family.elements().iter().copied());
    Ok(Reservoir::from_parts(members, ceil_frac(beta, n)))
}

/// Hands out the smallest unused `z ∈ R` with `u -> z -> v`.
pub fn connect_through(
    graph: &Digraph,
    reservoir: &mut Reservoir,
    u: usize,
    v: usize,
) -> Result<usize, ConnectorError> {
    assert_ne!(u, v, "connect_through needs distinct endpoints");
    let z = first_and3_not(
        graph.out_words(u),
        graph.in_words(v),
        reservoir.members.words(),
        reservoir.used.words(),
    )
    .ok_or(ConnectorError::ReservoirExhausted { from: u, to: v })?;
    reservoir.used.insert(z);
    Ok(z)
}
