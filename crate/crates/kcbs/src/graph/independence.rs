//! Independence number and its cross-check.
//!
//! [`independence_number`] is a bitmask branch and bound. [`noncontextual_max`]
//! walks every exclusivity-respecting 0/1 assignment vertex by vertex and
//! shares no code with it, so the two can be compared.

use super::{Assignment, ContextGraph, EdgeKind};

/// Size of a maximum independent set with respect to edges of `kind`.
pub fn independence_number(g: &ContextGraph, kind: EdgeKind) -> usize {
    let adj = g.adjacency(kind);
    let all = live_mask(g.n());
    let mut best = 0;
    branch(adj, all, 0, &mut best);
    best
}

fn live_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn branch(adj: &[u32], mut cand: u32, mut size: usize, best: &mut usize) {
    // Vertices with no neighbor among the candidates can always be taken.
    loop {
        let mut took = false;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & cand == 0 {
                cand &= !(1 << v);
                size += 1;
                took = true;
            }
        }
        if !took {
            break;
        }
    }
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    // Branch on the lowest-index candidate: take it, or drop it.
    let v = cand.trailing_zeros() as usize;
    branch(adj, cand & !(1 << v) & !adj[v], size + 1, best);
    branch(adj, cand & !(1 << v), size, best);
}

/// Calls `f` on every exclusivity-respecting assignment of `g`.
///
/// Exponential in the number of independent sets; meant for the small graphs
/// of the KCBS scenarios.
pub fn for_each_assignment<F: FnMut(&Assignment)>(g: &ContextGraph, mut f: F) {
    let ex = g.adjacency(EdgeKind::Exclusive);
    let mut values = vec![0u8; g.n()];
    walk(ex, &mut values, 0, &mut f);
}

fn walk<F: FnMut(&Assignment)>(ex: &[u32], values: &mut [u8], v: usize, f: &mut F) {
    if v == values.len() {
        let bits = values
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &x)| acc | (x as u32) << i);
        f(&Assignment::from_bits_unchecked(bits, values.len()));
        return;
    }
    values[v] = 0;
    walk(ex, values, v + 1, f);
    let clash = (0..v).any(|u| values[u] == 1 && ex[v] >> u & 1 == 1);
    if !clash {
        values[v] = 1;
        walk(ex, values, v + 1, f);
        values[v] = 0;
    }
}

/// Largest number of vertices a deterministic non-contextual model can set
/// to 1, i.e. the maximum over exclusivity-respecting assignments.
pub fn noncontextual_max(g: &ContextGraph) -> usize {
    let mut best = 0;
    for_each_assignment(g, |a| best = best.max(a.ones()));
    best
}
