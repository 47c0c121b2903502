//! Chordality by lexicographic breadth-first search.
//!
//! LexBFS visits vertices so that the reverse visit order is a perfect
//! elimination ordering exactly when the graph is chordal; the ordering is
//! then checked directly. All edges count, whatever their kind.

use super::{ContextGraph, EdgeKind};

/// Lexicographic BFS order, ties broken by lowest vertex index.
pub fn lex_bfs(g: &ContextGraph) -> Vec<usize> {
    let n = g.n();
    let adj = g.adjacency(EdgeKind::Compatible);
    // Label of each unvisited vertex: the (decreasing) visit numbers of its
    // visited neighbors.
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .fold(None::<usize>, |best, v| match best {
                Some(b) if labels[b] >= labels[v] => Some(b),
                _ => Some(v),
            })
            .expect("an unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for u in 0..n {
            if !visited[u] && adj[v] >> u & 1 == 1 {
                labels[u].push(n - step);
            }
        }
    }
    order
}

/// A perfect elimination ordering, if the graph has one.
pub fn perfect_elimination_ordering(g: &ContextGraph) -> Option<Vec<usize>> {
    let mut peo = lex_bfs(g);
    peo.reverse();
    is_perfect_elimination_ordering(g, &peo).then_some(peo)
}

fn is_perfect_elimination_ordering(g: &ContextGraph, order: &[usize]) -> bool {
    let n = g.n();
    let adj = g.adjacency(EdgeKind::Compatible);
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = order[i + 1..]
            .iter()
            .copied()
            .filter(|&u| adj[v] >> u & 1 == 1)
            .collect();
        let Some(&parent) = later.iter().min_by_key(|&&u| position[u]) else {
            continue;
        };
        if later.iter().any(|&u| u != parent && adj[parent] >> u & 1 == 0) {
            return false;
        }
    }
    true
}

/// `true` iff the graph has no induced cycle of length four or more.
pub fn is_chordal(g: &ContextGraph) -> bool {
    perfect_elimination_ordering(g).is_some()
}
