//! Exact maximum clique on at most 64 vertices.
//!
//! Branch and bound with greedy colouring finds the clique number; a second
//! depth-first pass in increasing vertex order then returns the
//! lexicographically smallest clique of that size, so witnesses are stable.

use crate::error::{Error, Result};

/// Largest clique among `vertices` (ascending), lexicographically smallest
/// among ties. `adjacent` is only queried for distinct vertices and must be
/// symmetric.
pub fn max_clique(
    vertices: &[usize],
    adjacent: impl Fn(usize, usize) -> bool,
    cap: usize,
) -> Result<Vec<usize>> {
    let m = vertices.len();
    if m > cap.min(64) {
        return Err(Error::BoundExceeded {
            what: "clique search vertices",
            size: m,
            bound: cap.min(64),
        });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut adj = vec![0u64; m];
    for i in 0..m {
        for j in i + 1..m {
            if adjacent(vertices[i], vertices[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut best = 0;
    expand(&adj, 0, all, &mut best);
    let mut clique = Vec::with_capacity(best);
    if !lex_search(&adj, &mut clique, all, best) {
        return Err(Error::Internal("clique of maximum size not rediscovered".into()));
    }
    Ok(clique.into_iter().map(|i| vertices[i]).collect())
}

/// Greedy colouring of `cand`; returns vertices in colour order with the
/// colour count reached so far, which bounds the clique size among the
/// prefix ending at each vertex.
fn colour(adj: &[u64], cand: u64) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut left = cand;
    let mut k = 0;
    while left != 0 {
        k += 1;
        let mut avail = left;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1 << v) & !adj[v];
            left &= !(1 << v);
            order.push((v, k));
        }
    }
    order
}

fn expand(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
    let order = colour(adj, cand);
    for &(v, k) in order.iter().rev() {
        if size + k <= *best {
            return;
        }
        let next = cand & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            expand(adj, size + 1, next, best);
        }
        cand &= !(1 << v);
    }
}

fn bound(adj: &[u64], cand: u64) -> usize {
    colour(adj, cand).last().map_or(0, |&(_, k)| k)
}

fn lex_search(adj: &[u64], clique: &mut Vec<usize>, mut cand: u64, target: usize) -> bool {
    if clique.len() == target {
        return true;
    }
    while cand != 0 {
        let need = target - clique.len();
        if (cand.count_ones() as usize) < need || bound(adj, cand) < need {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= !(1 << v);
        clique.push(v);
        // only later vertices, so each clique is built in increasing order
        if lex_search(adj, clique, cand & adj[v], target) {
            return true;
        }
        clique.pop();
    }
    false
}
