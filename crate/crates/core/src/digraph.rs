//! Dense simple digraphs.
//!
//! Vertices are `0..n`. Every vertex keeps its out- and in-neighbourhoods both
//! as sorted lists and as bitsets, so membership is O(1) and neighbourhood
//! intersections run in O(n / 64).

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::bitset::{words_for, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    stride: usize,
    out_bits: Vec<u64>,
    in_bits: Vec<u64>,
    out_list: Vec<Vec<usize>>,
    in_list: Vec<Vec<usize>>,
    arc_count: usize,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arc_count)
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph, rejecting loops, duplicates and out-of-range ends.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, DigraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let stride = words_for(n);
        let mut g = Digraph {
            n,
            stride,
            out_bits: vec![0; n * stride],
            in_bits: vec![0; n * stride],
            out_list: vec![Vec::new(); n],
            in_list: vec![Vec::new(); n],
            arc_count: 0,
        };
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(DigraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(DigraphError::Loop(u));
            }
            if g.has_arc(u, v) {
                return Err(DigraphError::DuplicateArc(u, v));
            }
            g.out_bits[u * stride + v / 64] |= 1 << (v % 64);
            g.in_bits[v * stride + u / 64] |= 1 << (u % 64);
            g.out_list[u].push(v);
            g.in_list[v].push(u);
            g.arc_count += 1;
        }
        for l in g.out_list.iter_mut().chain(g.in_list.iter_mut()) {
            l.sort_unstable();
        }
        Ok(g)
    }

    /// Arcless digraph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Digraph::from_arcs(n, std::iter::empty()).expect("no arcs")
    }

    /// Every ordered pair of distinct vertices is an arc.
    pub fn complete(n: usize) -> Self {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Digraph::from_arcs(n, arcs).expect("complete digraph is simple")
    }

    /// The directed cycle `0 -> 1 -> .. -> n-1 -> 0`.
    pub fn directed_cycle(n: usize) -> Self {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).expect("n >= 2")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out_bits[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_list[u]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_list[v]
    }

    #[inline]
    pub fn out_degree(&self, u: usize) -> usize {
        self.out_list[u].len()
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.in_list[v].len()
    }

    #[inline]
    pub fn semi_degree(&self, v: usize) -> usize {
        self.out_degree(v).min(self.in_degree(v))
    }

    #[inline]
    pub(crate) fn out_words(&self, u: usize) -> &[u64] {
        &self.out_bits[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn in_words(&self, v: usize) -> &[u64] {
        &self.in_bits[v * self.stride..(v + 1) * self.stride]
    }

    pub fn out_set(&self, u: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.out_words(u).to_vec())
    }

    pub fn in_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.in_words(v).to_vec())
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_list
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    /// δ⁰(D): the least of all out- and in-degrees; 0 for `n = 0`.
    pub fn min_semi_degree(&self) -> usize {
        (0..self.n).map(|v| self.semi_degree(v)).min().unwrap_or(0)
    }

    /// `N(u, v) = {w : u -> w and w -> v}`. Panics if `u == v`.
    pub fn common_out_in(&self, u: usize, v: usize) -> VertexSet {
        assert_ne!(u, v, "common_out_in needs distinct vertices");
        let words = self
            .out_words(u)
            .iter()
            .zip(self.in_words(v))
            .map(|(a, b)| a & b)
            .collect();
        VertexSet::from_words(self.n, words)
    }

    /// `|N(u, v)|` without materialising the set.
    pub fn common_out_in_count(&self, u: usize, v: usize) -> usize {
        self.out_words(u)
            .iter()
            .zip(self.in_words(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `A_D[X, Y]`: arcs leaving `X` and entering `Y`, in lexicographic order.
    pub fn arcs_between(&self, from: &VertexSet, to: &VertexSet) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in from.iter() {
            for &v in &self.out_list[u] {
                if to.contains(v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subdigraph on `(V \ remove) ∪ add`.
    pub fn remove_add(&self, remove: &VertexSet, add: &VertexSet) -> InducedDigraph {
        let keep: Vec<usize> = (0..self.n)
            .filter(|&v| !remove.contains(v) || add.contains(v))
            .collect();
        self.induced(&keep)
    }

    /// Induced subdigraph on the listed vertices; new labels follow list order.
    pub fn induced(&self, keep: &[usize]) -> InducedDigraph {
        let mut from_original = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            from_original[v] = Some(i);
        }
        let mut arcs = Vec::new();
        for (i, &u) in keep.iter().enumerate() {
            for &v in &self.out_list[u] {
                if let Some(j) = from_original[v] {
                    arcs.push((i, j));
                }
            }
        }
        let graph = Digraph::from_arcs(keep.len(), arcs).expect("induced subgraph of a simple digraph");
        InducedDigraph {
            graph,
            to_original: keep.to_vec(),
            from_original,
        }
    }

    /// Same vertex set, every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph::from_arcs(self.n, self.arcs().map(|(u, v)| (v, u))).expect("reversal stays simple")
    }

    /// Reads the `n a` / `u v` text format.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self, DigraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut arcs = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| DigraphError::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (a, b) = parse_pair(t, lineno)?;
            if header.is_none() {
                header = Some((a, b));
            } else {
                arcs.push((a, b));
            }
        }
        let (n, a) = header.ok_or(DigraphError::Parse {
            line: 0,
            msg: "missing `n a` header".into(),
        })?;
        if arcs.len() != a {
            return Err(DigraphError::Parse {
                line: 0,
                msg: format!("header promises {a} arcs, found {}", arcs.len()),
            });
        }
        Digraph::from_arcs(n, arcs)
    }

    pub fn parse(text: &str) -> Result<Self, DigraphError> {
        Digraph::read_text(text.as_bytes())
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_text().as_bytes())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(8 * (self.arc_count + 1));
        let _ = writeln!(s, "{} {}", self.n, self.arc_count);
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn parse_pair(t: &str, line: usize) -> Result<(usize, usize), DigraphError> {
    let mut it = t.split_whitespace();
    let mut next = || -> Result<usize, DigraphError> {
        let tok = it.next().ok_or(DigraphError::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| DigraphError::Parse {
            line,
            msg: format!("not a vertex index: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(DigraphError::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// An induced subdigraph together with the relabelling back to its parent.
#[derive(Clone, Debug)]
pub struct InducedDigraph {
    pub graph: Digraph,
    /// `to_original[i]` is the parent label of local vertex `i`.
    pub to_original: Vec<usize>,
    from_original: Vec<Option<usize>>,
}

impl InducedDigraph {
    pub fn local(&self, original: usize) -> Option<usize> {
        self.from_original.get(original).copied().flatten()
    }

    pub fn original(&self, local: usize) -> usize {
        self.to_original[local]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_semi_degree_examples() {
        assert_eq!(Digraph::complete(4).min_semi_degree(), 3);
        assert_eq!(Digraph::directed_cycle(5).min_semi_degree(), 1);
        assert_eq!(Digraph::empty(3).min_semi_degree(), 0);
        assert_eq!(Digraph::empty(0).min_semi_degree(), 0);
    }

    #[test]
    fn rejects_non_simple() {
        assert_eq!(Digraph::from_arcs(3, [(1, 1)]), Err(DigraphError::Loop(1)));
        assert_eq!(
            Digraph::from_arcs(3, [(0, 1), (0, 1)]),
            Err(DigraphError::DuplicateArc(0, 1))
        );
        assert!(matches!(
            Digraph::from_arcs(3, [(0, 3)]),
            Err(DigraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(Digraph::from_arcs(2, [(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn common_out_in_examples() {
        let k4 = Digraph::complete(4);
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    let expect: Vec<usize> = (0..4).filter(|&w| w != u && w != v).collect();
                    assert_eq!(k4.common_out_in(u, v).to_vec(), expect);
                }
            }
        }
        let single = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert!(single.common_out_in(0, 1).is_empty());
    }

    #[test]
    #[should_panic]
    fn common_out_in_rejects_equal_pair() {
        Digraph::complete(3).common_out_in(1, 1);
    }

    #[test]
    fn arcs_between_examples() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let all = VertexSet::full(4);
        assert_eq!(d.arcs_between(&all, &all).len(), d.arc_count());
        let x = VertexSet::from_members(4, [1]);
        let y = VertexSet::from_members(4, [0, 3]);
        assert!(d.arcs_between(&x, &y).is_empty());
        let x = VertexSet::from_members(4, [0]);
        let y = VertexSet::from_members(4, [0, 1, 2]);
        assert_eq!(d.arcs_between(&x, &y), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn remove_add_examples() {
        let d = Digraph::complete(5);
        let none = VertexSet::new(5);
        let same = d.remove_add(&none, &none);
        assert_eq!(same.graph, d);
        assert_eq!(same.to_original, vec![0, 1, 2, 3, 4]);

        let single = d.remove_add(&VertexSet::full(5), &VertexSet::from_members(5, [3]));
        assert_eq!(single.graph.n(), 1);
        assert_eq!(single.graph.arc_count(), 0);
        assert_eq!(single.original(0), 3);
        assert_eq!(single.local(3), Some(0));
        assert_eq!(single.local(2), None);
    }

    #[test]
    fn text_format() {
        let text = "# a comment\n3 2\n0 1\n\n# more\n1 2\n";
        let d = Digraph::parse(text).unwrap();
        assert_eq!(d.n(), 3);
        assert!(d.has_arc(0, 1) && d.has_arc(1, 2));
        assert_eq!(Digraph::parse(&d.to_text()).unwrap(), d);
        assert!(matches!(Digraph::parse("3 2\n0 1\n"), Err(DigraphError::Parse { .. })));
        assert!(matches!(
            Digraph::parse("3 1\n0 x\n"),
            Err(DigraphError::Parse { line: 2, .. })
        ));
        assert_eq!(Digraph::parse("2 2\n0 1\n0 1\n"), Err(DigraphError::DuplicateArc(0, 1)));
    }
}
