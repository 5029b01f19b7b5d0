//! The absorbing path.
//!
//! A good tuple for `u` is an ordered pair `(v, w)` with `v -> u`, `u -> w`
//! and `v -> w`: the arc `v -> w` can be rerouted through `u`. The absorbing
//! path strings disjoint good tuples together as
//! `v₁ w₁ x₁ v₂ w₂ x₂ … x_{ℓ-1} v_ℓ w_ℓ`; any small outside set can later be
//! swallowed by rerouting one slot arc per vertex, keeping both endpoints.

use thiserror::Error;

use crate::bitset::{first_and3_not, VertexSet};
use crate::bounds::{ceil_frac, semi_degree_threshold};
use crate::digraph::Digraph;
use crate::rng::child_seed;
use crate::tuple_system::{select_family, TupleError, TupleFamily, TupleSystem, DEFAULT_MAX_RETRIES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AbsorberError {
    #[error("minimum semi-degree {found} is below the required {required}")]
    InvalidDegree { found: usize, required: usize },
    #[error(transparent)]
    Family(#[from] TupleError),
    #[error("could not link gadgets into a path after {attempts} attempts")]
    LinkageFailed { attempts: usize },
    #[error("vertex {0} cannot be absorbed: it is on the path, repeated, or out of range")]
    InvalidLeftover(usize),
    #[error("{unmatched} of {requested} vertices found no free compatible slot")]
    AbsorptionFailed { requested: usize, unmatched: usize },
}

/// A centre `u` and the ordered pair `(v, w)` that can absorb it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GoodTuple {
    pub center: usize,
    pub v: usize,
    pub w: usize,
}

impl GoodTuple {
    pub fn holds(&self, graph: &Digraph) -> bool {
        self.v != self.w
            && graph.has_arc(self.v, self.center)
            && graph.has_arc(self.center, self.w)
            && graph.has_arc(self.v, self.w)
    }
}

/// Every good tuple `(v, w)` for `u`, in lexicographic order.
pub fn good_tuples_for(graph: &Digraph, u: usize) -> Vec<(usize, usize)> {
    let out_u = graph.out_set(u);
    let mut tuples = Vec::new();
    for &v in graph.in_neighbors(u) {
        for &w in graph.out_neighbors(v) {
            if w != v && out_u.contains(w) {
                tuples.push((v, w));
            }
        }
    }
    tuples
}

/// `X = Y = V(D)`, `t = 2`, members are good tuples.
pub struct GoodTupleSystem<'a> {
    graph: &'a Digraph,
    density: f64,
}

impl<'a> GoodTupleSystem<'a> {
    pub fn new(graph: &'a Digraph, density: f64) -> Self {
        GoodTupleSystem { graph, density }
    }
}

impl TupleSystem for GoodTupleSystem<'_> {
    fn ground_size(&self) -> usize {
        self.graph.n()
    }

    fn index_size(&self) -> usize {
        self.graph.n()
    }

    fn arity(&self) -> usize {
        2
    }

    fn density(&self) -> f64 {
        self.density
    }

    #[inline]
    fn member(&self, u: usize, tuple: &[usize]) -> bool {
        let (v, w) = (tuple[0], tuple[1]);
        v != w && self.graph.has_arc(v, u) && self.graph.has_arc(u, w) && self.graph.has_arc(v, w)
    }

    fn for_each_member(&self, tuple: &[usize], f: &mut dyn FnMut(usize)) {
        let (v, w) = (tuple[0], tuple[1]);
        if v != w && self.graph.has_arc(v, w) {
            for u in self.graph.common_out_in(v, w).iter() {
                f(u);
            }
        }
    }

    fn member_count(&self, u: usize) -> usize {
        let out_u = self.graph.out_words(u);
        self.graph
            .in_neighbors(u)
            .iter()
            .map(|&v| {
                self.graph
                    .out_words(v)
                    .iter()
                    .zip(out_u)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum::<usize>()
            })
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct AbsorbingPath {
    vertices: Vec<usize>,
    slots: Vec<(usize, usize)>,
    absorbed: Vec<Option<usize>>,
    capacity: usize,
}

impl AbsorbingPath {
    /// Links the tuples of `family` in order with connectors chosen by
    /// smallest identifier. Returns `None` if some consecutive pair has no
    /// unused common out/in-neighbour.
    pub fn link(graph: &Digraph, family: &TupleFamily, capacity: usize) -> Option<Self> {
        assert_eq!(family.arity(), 2);
        let mut used = VertexSet::from_members(graph.n(), family.elements().iter().copied());
        let all = VertexSet::full(graph.n());
        let slots: Vec<(usize, usize)> = family.tuples().map(|t| (t[0], t[1])).collect();
        let mut vertices = Vec::with_capacity(3 * slots.len());
        for (i, &(v, w)) in slots.iter().enumerate() {
            if i > 0 {
                let prev_w = slots[i - 1].1;
                let x = first_and3_not(graph.out_words(prev_w), graph.in_words(v), all.words(), used.words())?;
                used.insert(x);
                vertices.push(x);
            }
            vertices.push(v);
            vertices.push(w);
        }
        Some(AbsorbingPath {
            vertices,
            absorbed: vec![None; slots.len()],
            slots,
            capacity,
        })
    }

    /// The path as built, without absorbed vertices.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn slots(&self) -> &[(usize, usize)] {
        &self.slots
    }

    /// `⌈βn⌉`: every outside vertex had at least this many compatible slots at build time.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().expect("non-empty path"))
    }

    pub fn free_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.absorbed
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_none())
            .map(|(i, _)| i)
    }

    pub fn absorbed(&self) -> impl Iterator<Item = usize> + '_ {
        self.absorbed.iter().flatten().copied()
    }

    pub fn compatible_free_slots(&self, graph: &Digraph, u: usize) -> usize {
        self.free_slots()
            .filter(|&i| slot_accepts(graph, self.slots[i], u))
            .count()
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_members(n, self.vertices.iter().copied())
    }

    /// The path with every absorbed vertex spliced into its slot.
    pub fn current_path(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.vertices.len() + self.slots.len());
        let mut slot = 0;
        for (i, &x) in self.vertices.iter().enumerate() {
            out.push(x);
            // slot `s` occupies positions 3s and 3s + 1
            if i % 3 == 0 && slot < self.slots.len() {
                if let Some(u) = self.absorbed[slot] {
                    out.push(u);
                }
                slot += 1;
            }
        }
        out
    }

    /// Absorbs `leftover`, replacing `v_i -> w_i` by `v_i -> u -> w_i` for one
    /// free slot per vertex, and returns the resulting path. Nothing changes
    /// on error.
    ///
    /// Vertices are placed most-constrained first; if that greedy pass gets
    /// stuck, an augmenting-path matching decides.
    pub fn absorb(&mut self, graph: &Digraph, leftover: &[usize]) -> Result<Vec<usize>, AbsorberError> {
        let n = graph.n();
        let mut seen = self.vertex_set(n);
        for u in self.absorbed() {
            seen.insert(u);
        }
        for &u in leftover {
            if u >= n || seen.contains(u) {
                return Err(AbsorberError::InvalidLeftover(u));
            }
            seen.insert(u);
        }
        if leftover.is_empty() {
            return Ok(self.current_path());
        }

        let free: Vec<usize> = self.free_slots().collect();
        let options: Vec<Vec<usize>> = leftover
            .iter()
            .map(|&u| {
                free.iter()
                    .copied()
                    .filter(|&i| slot_accepts(graph, self.slots[i], u))
                    .collect()
            })
            .collect();

        let assignment = greedy_assign(leftover, &options)
            .or_else(|| matching_assign(&options))
            .ok_or_else(|| AbsorberError::AbsorptionFailed {
                requested: leftover.len(),
                unmatched: leftover.len() - matching_size(&options),
            })?;
        for (k, slot) in assignment.into_iter().enumerate() {
            self.absorbed[slot] = Some(leftover[k]);
        }
        Ok(self.current_path())
    }
}

#[inline]
fn slot_accepts(graph: &Digraph, (v, w): (usize, usize), u: usize) -> bool {
    graph.has_arc(v, u) && graph.has_arc(u, w)
}

fn greedy_assign(leftover: &[usize], options: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..leftover.len()).collect();
    order.sort_by_key(|&k| (options[k].len(), leftover[k]));
    let mut taken = std::collections::HashSet::new();
    let mut assignment = vec![usize::MAX; leftover.len()];
    for k in order {
        let slot = options[k].iter().copied().find(|s| !taken.contains(s))?;
        taken.insert(slot);
        assignment[k] = slot;
    }
    Some(assignment)
}

/// Kuhn's augmenting paths; `None` unless every vertex is matched.
fn matching_assign(options: &[Vec<usize>]) -> Option<Vec<usize>> {
    let (size, assignment) = max_matching(options);
    (size == options.len()).then(|| assignment.into_iter().map(|s| s.expect("matched")).collect())
}

fn matching_size(options: &[Vec<usize>]) -> usize {
    max_matching(options).0
}

fn max_matching(options: &[Vec<usize>]) -> (usize, Vec<Option<usize>>) {
    let slots = options.iter().flatten().copied().max().map_or(0, |m| m + 1);
    let mut owner: Vec<Option<usize>> = vec![None; slots];
    let mut assignment = vec![None; options.len()];

    fn augment(
        k: usize,
        options: &[Vec<usize>],
        owner: &mut [Option<usize>],
        assignment: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &s in &options[k] {
            if visited[s] {
                continue;
            }
            visited[s] = true;
            if owner[s].is_none_or(|other| augment(other, options, owner, assignment, visited)) {
                owner[s] = Some(k);
                assignment[k] = Some(s);
                return true;
            }
        }
        false
    }

    let mut size = 0;
    for k in 0..options.len() {
        let mut visited = vec![false; slots];
        if augment(k, options, &mut owner, &mut assignment, &mut visited) {
            size += 1;
        }
    }
    (size, assignment)
}

/// Builds an absorbing path with at most `⌊(alpha/3)·n⌋` slots such that every
/// vertex has at least `⌈beta·n⌉` compatible slots.
pub fn build_absorbing_path(
    graph: &Digraph,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    seed: u64,
) -> Result<AbsorbingPath, AbsorberError> {
    let n = graph.n();
    let required = semi_degree_threshold(epsilon, n);
    let found = graph.min_semi_degree();
    if found < required {
        return Err(AbsorberError::InvalidDegree { found, required });
    }
    let sys = GoodTupleSystem::new(graph, 4.0 * epsilon * epsilon);
    // (α'/t)·n with t = 2 gives the ⌊(α/3)·n⌋ slot cap.
    let family_alpha = 2.0 * alpha / 3.0;
    for attempt in 0..DEFAULT_MAX_RETRIES {
        let family = select_family(
            &sys,
            family_alpha,
            beta,
            child_seed(seed, attempt as u64),
            DEFAULT_MAX_RETRIES,
        )?;
        if family.is_empty() {
            continue;
        }
        if let Some(path) = AbsorbingPath::link(graph, &family, ceil_frac(beta, n)) {
            return Ok(path);
        }
    }
    Err(AbsorberError::LinkageFailed {
        attempts: DEFAULT_MAX_RETRIES,
    })
}

/// Whether `path` is a directed path of `graph` without repeated vertices.
pub fn is_directed_path(graph: &Digraph, path: &[usize]) -> bool {
    let mut seen = VertexSet::new(graph.n());
    path.iter().all(|&v| v < graph.n() && seen.insert(v)) && path.windows(2).all(|p| graph.has_arc(p[0], p[1]))
}
