//! Minimum chain partitions and the brute-force width oracle.
//!
//! A minimum chain cover of a poset is read off a maximum matching in the
//! bipartite graph with an edge `u -> v` for every strict relation `u < v`:
//! each matched edge links `u` to its successor on a chain, so the number of
//! chains is `n - |matching|`, which by Dilworth's theorem is the width.

use fixedbitset::FixedBitSet;
use std::collections::VecDeque;

use super::PosetError;

const NIL: usize = usize::MAX;

/// Minimum chain partition of the order given by its up-sets. Chains are
/// listed by their bottommost element's index; elements within a chain are
/// ascending.
pub fn min_chain_partition(up: &[FixedBitSet]) -> Vec<Vec<usize>> {
    let n = up.len();
    let adj: Vec<Vec<usize>> = up
        .iter()
        .enumerate()
        .map(|(u, row)| row.ones().filter(|&v| v != u).collect())
        .collect();
    let (match_left, match_right) = hopcroft_karp(&adj, n);

    let mut chains = Vec::new();
    for start in 0..n {
        if match_right[start] != NIL {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while match_left[cur] != NIL {
            cur = match_left[cur];
            chain.push(cur);
        }
        chains.push(chain);
    }
    chains
}

/// Maximum bipartite matching between two copies of `0..n`; returns the
/// partner of each left vertex and of each right vertex (`NIL` if free).
fn hopcroft_karp(adj: &[Vec<usize>], n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut match_left = vec![NIL; n];
    let mut match_right = vec![NIL; n];

    // Greedy start; on long chains this is already perfect.
    for u in 0..n {
        if let Some(&v) = adj[u].iter().find(|&&v| match_right[v] == NIL) {
            match_left[u] = v;
            match_right[v] = u;
        }
    }

    let mut dist = vec![usize::MAX; n];
    loop {
        let mut queue = VecDeque::new();
        for u in 0..n {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut next_edge = vec![0usize; n];
        for u in 0..n {
            if match_left[u] == NIL {
                augment(u, adj, &mut match_left, &mut match_right, &mut dist, &mut next_edge);
            }
        }
    }
    (match_left, match_right)
}

/// Iterative layered DFS for one augmenting path from free vertex `root`.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next_edge[u] == adj[u].len() {
            dist[u] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][next_edge[u]];
        next_edge[u] += 1;
        let w = match_right[v];
        if w == NIL {
            // Flip the path: each stacked vertex takes the edge it advanced on.
            let mut v = v;
            while let Some(u) = stack.pop() {
                let prev = match_left[u];
                match_left[u] = v;
                match_right[v] = u;
                v = prev;
            }
            return true;
        }
        if dist[w] == dist[u] + 1 {
            stack.push(w);
        }
    }
    false
}

pub const BRUTE_FORCE_WIDTH_LIMIT: usize = 20;

/// Largest antichain, by exhaustive search. Refuses more than
/// [`BRUTE_FORCE_WIDTH_LIMIT`] elements.
pub fn brute_force_width(up: &[FixedBitSet]) -> Result<usize, PosetError> {
    let n = up.len();
    if n > BRUTE_FORCE_WIDTH_LIMIT {
        return Err(PosetError::TooLarge {
            n,
            limit: BRUTE_FORCE_WIDTH_LIMIT,
        });
    }
    let comparable: Vec<u32> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| a != b && (up[a][b] || up[b][a]))
                .fold(0u32, |m, b| m | (1 << b))
        })
        .collect();
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let antichain = (0..n).all(|a| mask & (1 << a) == 0 || comparable[a] & mask == 0);
        if antichain {
            best = size;
        }
    }
    Ok(best)
}
