//! Exhaustive search for spanning subdivisions on tiny hosts.

use std::collections::HashSet;

use thiserror::Error;

use super::certificate::{Route, SubdivisionCertificate};
use super::PatternDigraph;
use crate::digraph::Digraph;

/// Largest host the exhaustive search accepts.
pub const ORACLE_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("exhaustive search is limited to {ORACLE_LIMIT} vertices, got {0}")]
pub struct InstanceTooLarge(pub usize);

/// A spanning subdivision of `pattern` in `host` if one exists.
///
/// Tries every injective branch assignment; for each, routes the pattern arcs
/// one after another by depth-first search over host paths, remembering
/// `(arc, head, used-set)` states already known to fail.
pub fn brute_force_subdivision(
    host: &Digraph,
    pattern: &PatternDigraph,
) -> Result<Option<SubdivisionCertificate>, InstanceTooLarge> {
    let n = host.n();
    if n > ORACLE_LIMIT {
        return Err(InstanceTooLarge(n));
    }
    let k = pattern.k();
    if k > n {
        return Ok(None);
    }
    let mut branch = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    Ok(assign(host, pattern, &mut branch, &mut taken))
}

fn assign(
    host: &Digraph,
    pattern: &PatternDigraph,
    branch: &mut Vec<usize>,
    taken: &mut [bool],
) -> Option<SubdivisionCertificate> {
    if branch.len() == pattern.k() {
        return route_all(host, pattern, branch);
    }
    for v in 0..host.n() {
        if taken[v] {
            continue;
        }
        taken[v] = true;
        branch.push(v);
        let found = assign(host, pattern, branch, taken);
        branch.pop();
        taken[v] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

struct Router<'a> {
    host: &'a Digraph,
    arcs: &'a [(usize, usize)],
    branch: &'a [usize],
    full: u32,
    failed: HashSet<(usize, usize, u32)>,
    paths: Vec<Vec<usize>>,
}

fn route_all(host: &Digraph, pattern: &PatternDigraph, branch: &[usize]) -> Option<SubdivisionCertificate> {
    let mask = branch.iter().fold(0u32, |m, &v| m | 1 << v);
    let mut router = Router {
        host,
        arcs: pattern.arcs(),
        branch,
        full: (1u32 << host.n()) - 1,
        failed: HashSet::new(),
        paths: Vec::new(),
    };
    let (a, _) = router.arcs[0];
    let mut cur = vec![branch[a]];
    if !router.search(0, &mut cur, mask) {
        return None;
    }
    let routes = router
        .arcs
        .iter()
        .zip(router.paths)
        .map(|(&(from, to), path)| Route { from, to, path })
        .collect();
    Some(SubdivisionCertificate {
        branch: branch.to_vec(),
        routes,
    })
}

impl Router<'_> {
    /// Extends the route of arc `idx` whose partial path is `cur`.
    fn search(&mut self, idx: usize, cur: &mut Vec<usize>, mask: u32) -> bool {
        let head = *cur.last().expect("route starts at a branch vertex");
        let key = (idx, head, mask);
        if self.failed.contains(&key) {
            return false;
        }
        let target = self.branch[self.arcs[idx].1];
        if self.host.has_arc(head, target) {
            let mut done = cur.clone();
            done.push(target);
            self.paths.push(done);
            let ok = if idx + 1 == self.arcs.len() {
                mask == self.full
            } else {
                let mut next = vec![self.branch[self.arcs[idx + 1].0]];
                self.search(idx + 1, &mut next, mask)
            };
            if ok {
                return true;
            }
            self.paths.pop();
        }
        for &w in self.host.out_neighbors(head) {
            if mask >> w & 1 == 1 {
                continue;
            }
            cur.push(w);
            let ok = self.search(idx, cur, mask | 1 << w);
            cur.pop();
            if ok {
                return true;
            }
        }
        self.failed.insert(key);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::super::verify_certificate;
    use super::*;

    fn single_arc() -> PatternDigraph {
        PatternDigraph::new(Digraph::from_arcs(2, [(0, 1)]).unwrap()).unwrap()
    }

    #[test]
    fn complete_host_two_cycle() {
        let d = Digraph::complete(4);
        let h = PatternDigraph::new(Digraph::complete(2)).unwrap();
        let c = brute_force_subdivision(&d, &h).unwrap().unwrap();
        assert!(verify_certificate(&d, &h, &c).is_ok());
    }

    #[test]
    fn arcless_host() {
        assert_eq!(brute_force_subdivision(&Digraph::empty(5), &single_arc()), Ok(None));
    }

    #[test]
    fn too_large() {
        assert_eq!(
            brute_force_subdivision(&Digraph::complete(13), &single_arc()),
            Err(InstanceTooLarge(13))
        );
    }

    #[test]
    fn hamiltonian_path_host() {
        // only 0 -> 1 -> 2 -> 3 exists, so the single arc must map to (0, 3)
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = brute_force_subdivision(&d, &single_arc()).unwrap().unwrap();
        assert_eq!(c.branch, vec![0, 3]);
        assert_eq!(c.routes[0].path, vec![0, 1, 2, 3]);
    }
}
