//! Exact canonical forms of small rooted, vertex-labelled structures with
//! up to eight binary relations, by color refinement and individualization.
//!
//! The canonical form is the lexicographically least serialization over all
//! leaves of the individualization tree. Every choice along the way depends
//! only on isomorphism-invariant data, so two structures get the same form
//! iff some root-preserving bijection preserves labels and relations.

use std::collections::HashMap;

/// A rooted structure on vertices `0..len`. `rel[u * len + v]` is a bitmask
/// of the relations holding from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedStructure {
    len: usize,
    root: usize,
    labels: Vec<u32>,
    rel: Vec<u8>,
}

impl RootedStructure {
    pub fn new(root: usize, labels: Vec<u32>, rel: Vec<u8>) -> Self {
        let len = labels.len();
        assert!(root < len, "root {root} outside structure of {len} vertices");
        assert_eq!(rel.len(), len * len, "relation matrix must be len x len");
        RootedStructure {
            len,
            root,
            labels,
            rel,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    #[inline]
    pub fn rel(&self, u: usize, v: usize) -> u8 {
        self.rel[u * self.len + v]
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.len;
        let mut labels = vec![0; n];
        let mut rel = vec![0; n * n];
        for u in 0..n {
            labels[perm[u]] = self.labels[u];
            for v in 0..n {
                rel[perm[u] * n + perm[v]] = self.rel(u, v);
            }
        }
        RootedStructure::new(perm[self.root], labels, rel)
    }
}

/// Canonical serialization of `s`.
pub fn canonical_form(s: &RootedStructure) -> Vec<u8> {
    let mut colors: Vec<u32> = (0..s.len)
        .map(|v| if v == s.root { 0 } else { 1 })
        .collect();
    // Root flag leads so the root always takes the first position.
    let keys: Vec<(u32, u32)> = (0..s.len).map(|v| (colors[v], s.labels[v])).collect();
    colors = dense_ranks(&keys);
    let mut best = None;
    search(s, colors, &mut best);
    best.unwrap_or_default()
}

fn search(s: &RootedStructure, mut colors: Vec<u32>, best: &mut Option<Vec<u8>>) {
    refine(s, &mut colors);
    let cell_count = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
    if cell_count == s.len {
        let form = encode(s, &colors);
        if best.as_ref().is_none_or(|b| form < *b) {
            *best = Some(form);
        }
        return;
    }
    let mut sizes = vec![0usize; cell_count];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let target = sizes.iter().position(|&k| k > 1).unwrap() as u32;
    for v in (0..s.len).filter(|&v| colors[v] == target) {
        let keys: Vec<(u32, u32)> = (0..s.len)
            .map(|u| (colors[u], if u == v { 0 } else { 1 }))
            .collect();
        search(s, dense_ranks(&keys), best);
    }
}

/// Refine to the coarsest stable coloring. Each round keeps the previous
/// color as the leading sort key, so color order stays consistent.
fn refine(s: &RootedStructure, colors: &mut Vec<u32>) {
    let n = s.len;
    let mut cells = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u8, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u8, u8)> = (0..n)
                    .filter(|&u| u != v)
                    .filter_map(|u| {
                        let out = s.rel(v, u);
                        let inc = s.rel(u, v);
                        (out | inc != 0).then_some((colors[u], out, inc))
                    })
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = dense_ranks(&sigs);
        let next_cells = next.iter().copied().max().map_or(0, |m| m as usize + 1);
        *colors = next;
        if next_cells == cells {
            return;
        }
        cells = next_cells;
    }
}

fn dense_ranks<K: Ord + Clone + std::hash::Hash + Eq>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    let rank: HashMap<&K, u32> = sorted.into_iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
    keys.iter().map(|k| rank[k]).collect()
}

fn encode(s: &RootedStructure, colors: &[u32]) -> Vec<u8> {
    let n = s.len;
    let mut order = vec![0usize; n];
    for v in 0..n {
        order[colors[v] as usize] = v;
    }
    let mut out = Vec::with_capacity(4 + 4 * n + n * n);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for &v in &order {
        out.extend_from_slice(&s.labels[v].to_be_bytes());
    }
    for &u in &order {
        for &v in &order {
            out.push(s.rel(u, v));
        }
    }
    out
}
