//! Vertex clique cover number, as the chromatic number of the complement.

use super::{ContextGraph, EdgeKind};
use crate::{Error, Result};

pub const CLIQUE_COVER_LIMIT: usize = 16;

/// Fewest cliques (over all edges) that cover every vertex.
pub fn clique_cover_number(g: &ContextGraph) -> Result<usize> {
    clique_cover_number_by(g, EdgeKind::Compatible)
}

/// Fewest cliques of `kind`-edges that cover every vertex.
pub fn clique_cover_number_by(g: &ContextGraph, kind: EdgeKind) -> Result<usize> {
    let n = g.n();
    if n > CLIQUE_COVER_LIMIT {
        return Err(Error::InstanceTooLarge(n, CLIQUE_COVER_LIMIT));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = g.adjacency(kind);
    let all = (1u32 << n) - 1;
    // Two vertices may share a colour in the complement iff they are
    // adjacent in `g`.
    let conflict: Vec<u32> = (0..n).map(|v| all & !adj[v] & !(1 << v)).collect();
    let mut colors = vec![usize::MAX; n];
    (1..=n)
        .find(|&k| colorable(&conflict, &mut colors, 0, 0, k))
        .ok_or_else(|| Error::InvalidGraph("no colouring found".into()))
}

fn colorable(conflict: &[u32], colors: &mut [usize], v: usize, used: usize, k: usize) -> bool {
    if v == colors.len() {
        return true;
    }
    // Colours are introduced in order, which removes permutation symmetry.
    for c in 0..(used + 1).min(k) {
        let clash = (0..v).any(|u| colors[u] == c && conflict[v] >> u & 1 == 1);
        if clash {
            continue;
        }
        colors[v] = c;
        if colorable(conflict, colors, v + 1, used.max(c + 1), k) {
            return true;
        }
    }
    colors[v] = usize::MAX;
    false
}
