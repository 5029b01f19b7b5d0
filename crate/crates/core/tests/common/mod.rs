#![allow(dead_code)]

use spansub::Digraph;

/// Plain depth-first search for a Hamiltonian cycle through vertex 0.
pub fn backtrack_hamiltonian(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    let mut path = vec![0];
    let mut on = vec![false; n];
    on[0] = true;
    if extend(g, &mut path, &mut on) {
        Some(path)
    } else {
        None
    }
}

fn extend(g: &Digraph, path: &mut Vec<usize>, on: &mut [bool]) -> bool {
    let n = g.n();
    let last = *path.last().unwrap();
    if path.len() == n {
        return g.has_arc(last, 0);
    }
    for v in 0..n {
        if !on[v] && g.has_arc(last, v) {
            on[v] = true;
            path.push(v);
            if extend(g, path, on) {
                return true;
            }
            path.pop();
            on[v] = false;
        }
    }
    false
}

/// Every arc present, every vertex once, closing arc present.
pub fn is_cycle(g: &Digraph, c: &[usize]) -> bool {
    let n = g.n();
    let mut seen = vec![false; n];
    c.len() == n
        && c.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
        && (0..n).all(|i| g.has_arc(c[i], c[(i + 1) % n]))
}
