//! Colored finite posets with a fixed chain partition.
//!
//! The order is stored twice as bit-packed rows: `up[p]` holds every `q` with
//! `p <= q` and `down[p]` every `q` with `q <= p`. Elements are the dense
//! integers `0..n`.

mod chains;
mod io;

use fixedbitset::FixedBitSet;
use std::cmp::Ordering;
use thiserror::Error;

use crate::formula::{ColorSet, DEFAULT_COLOR};

pub use chains::{brute_force_width, min_chain_partition, BRUTE_FORCE_WIDTH_LIMIT};
pub use io::{PosetFile, RelationMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("element {element} out of range for a poset of {n} elements")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("cover relation has a cycle through element {0}")]
    Cycle(usize),
    #[error("antisymmetry violated: {0} <= {1} and {1} <= {0}")]
    Antisymmetry(usize, usize),
    #[error("transitivity violated: {0} <= {1} <= {2} but not {0} <= {2}")]
    Transitivity(usize, usize, usize),
    #[error("reflexivity violated at element {0}")]
    Reflexivity(usize),
    #[error("invalid chain partition: {0}")]
    ChainPartition(String),
    #[error("instance has {n} elements; limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("malformed poset file: {0}")]
    Format(String),
}

/// A colored poset together with a minimum (or externally supplied) chain
/// partition.
#[derive(Clone, Debug)]
pub struct Poset {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    colors: Vec<usize>,
    palette: ColorSet,
    chains: Vec<Vec<usize>>,
    chain_of: Vec<(usize, usize)>,
}

impl Poset {
    /// Build from a relation given as pairs `(a, b)` meaning `a <= b`.
    ///
    /// In [`RelationMode::Cover`] the order is the reflexive-transitive
    /// closure of the pairs, which must form an acyclic digraph. In
    /// [`RelationMode::Full`] the pairs (plus the diagonal) must already be
    /// a partial order. Elements missing from `colors` get
    /// [`DEFAULT_COLOR`].
    pub fn from_relation(
        n: usize,
        pairs: &[(usize, usize)],
        colors: &[(usize, String)],
        mode: RelationMode,
    ) -> Result<Poset, PosetError> {
        for &(a, b) in pairs {
            for e in [a, b] {
                if e >= n {
                    return Err(PosetError::ElementOutOfRange { element: e, n });
                }
            }
        }
        let up = match mode {
            RelationMode::Cover => closure_of_acyclic(n, pairs)?,
            RelationMode::Full => {
                let mut up: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
                for (i, row) in up.iter_mut().enumerate() {
                    row.insert(i);
                }
                for &(a, b) in pairs {
                    up[a].insert(b);
                }
                up
            }
        };
        let mut names = vec![DEFAULT_COLOR.to_string(); n];
        for (e, c) in colors {
            if *e >= n {
                return Err(PosetError::ElementOutOfRange { element: *e, n });
            }
            names[*e] = c.clone();
        }
        Poset::from_up_sets(up, &names)
    }

    /// Build from complete up-sets (`up[p]` contains every `q >= p`) and one
    /// color per element; axioms are validated and a minimum chain partition
    /// is computed.
    pub fn from_up_sets(up: Vec<FixedBitSet>, colors: &[String]) -> Result<Poset, PosetError> {
        validate_order(&up)?;
        let chains = min_chain_partition(&up);
        Poset::assemble(up, colors, chains)
    }

    /// Like [`Poset::from_up_sets`] but with a caller-supplied chain
    /// partition, which is validated instead of recomputed. Chains are given
    /// in any internal order and are sorted ascending.
    pub fn with_chain_partition(
        up: Vec<FixedBitSet>,
        colors: &[String],
        chains: Vec<Vec<usize>>,
    ) -> Result<Poset, PosetError> {
        validate_order(&up)?;
        let n = up.len();
        let mut seen = vec![false; n];
        for chain in &chains {
            if chain.is_empty() {
                return Err(PosetError::ChainPartition("empty chain".into()));
            }
            for &e in chain {
                if e >= n {
                    return Err(PosetError::ElementOutOfRange { element: e, n });
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(PosetError::ChainPartition(format!(
                        "element {e} appears in two chains"
                    )));
                }
            }
            for (i, &a) in chain.iter().enumerate() {
                for &b in &chain[i + 1..] {
                    if !up[a][b] && !up[b][a] {
                        return Err(PosetError::ChainPartition(format!(
                            "elements {a} and {b} share a chain but are incomparable"
                        )));
                    }
                }
            }
        }
        if let Some(e) = seen.iter().position(|s| !s) {
            return Err(PosetError::ChainPartition(format!("element {e} is in no chain")));
        }
        Poset::assemble(up, colors, chains)
    }

    fn assemble(
        up: Vec<FixedBitSet>,
        colors: &[String],
        mut chains: Vec<Vec<usize>>,
    ) -> Result<Poset, PosetError> {
        let n = up.len();
        if colors.len() != n {
            return Err(PosetError::Format(format!(
                "{} colors given for {n} elements",
                colors.len()
            )));
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        for chain in &mut chains {
            chain.sort_by(|&a, &b| {
                if a == b {
                    Ordering::Equal
                } else if up[a][b] {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            });
        }
        let mut chain_of = vec![(0, 0); n];
        for (j, chain) in chains.iter().enumerate() {
            for (k, &e) in chain.iter().enumerate() {
                chain_of[e] = (j, k);
            }
        }
        let mut palette = ColorSet::new();
        let colors = colors.iter().map(|c| palette.intern(c)).collect();
        Ok(Poset {
            up,
            down,
            colors,
            palette,
            chains,
            chain_of,
        })
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a][b]
    }

    /// `a <= b` and `a != b`.
    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.up[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.up[a][b] || self.up[b][a]
    }

    pub fn up_set(&self, p: usize) -> &FixedBitSet {
        &self.up[p]
    }

    pub fn down_set(&self, p: usize) -> &FixedBitSet {
        &self.down[p]
    }

    pub fn up_sets(&self) -> &[FixedBitSet] {
        &self.up
    }

    /// Index of `p`'s color in [`Poset::palette`].
    pub fn color_index(&self, p: usize) -> usize {
        self.colors[p]
    }

    pub fn color(&self, p: usize) -> &str {
        self.palette.name(self.colors[p])
    }

    pub fn palette(&self) -> &ColorSet {
        &self.palette
    }

    /// Number of chains in the stored partition; equals the width when the
    /// partition was computed rather than supplied.
    pub fn width(&self) -> usize {
        self.chains.len()
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    /// Elements of chain `j`, ascending.
    pub fn chain(&self, j: usize) -> &[usize] {
        &self.chains[j]
    }

    /// `(chain index, position in chain)` of `p`.
    pub fn chain_of(&self, p: usize) -> (usize, usize) {
        self.chain_of[p]
    }

    /// Pairs `(a, b)` with `b` covering `a` (the Hasse diagram).
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].ones() {
                if a == b {
                    continue;
                }
                let mut between = self.up[a].clone();
                between.intersect_with(&self.down[b]);
                if between.count_ones(..) == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Reflexive-transitive closure of an acyclic pair relation.
fn closure_of_acyclic(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<FixedBitSet>, PosetError> {
    let mut succ = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(a, b) in pairs {
        if a == b {
            continue;
        }
        succ[a].push(b);
        indegree[b] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &succ[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                stack.push(w);
            }
        }
    }
    if order.len() < n {
        let on_cycle = (0..n).find(|&v| indegree[v] > 0).unwrap();
        return Err(PosetError::Cycle(on_cycle));
    }
    let mut up: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    for &v in order.iter().rev() {
        let mut row = FixedBitSet::with_capacity(n);
        row.insert(v);
        for &w in &succ[v] {
            row.union_with(&up[w]);
        }
        up[v] = row;
    }
    Ok(up)
}

fn validate_order(up: &[FixedBitSet]) -> Result<(), PosetError> {
    let n = up.len();
    for (a, row) in up.iter().enumerate() {
        if row.len() != n {
            return Err(PosetError::Format(format!("row {a} has length {}", row.len())));
        }
        if !row[a] {
            return Err(PosetError::Reflexivity(a));
        }
    }
    for (a, row) in up.iter().enumerate() {
        for b in row.ones() {
            if b != a && up[b][a] {
                return Err(PosetError::Antisymmetry(a.min(b), a.max(b)));
            }
            if !up[b].is_subset(row) {
                let c = up[b].difference(row).next().unwrap();
                return Err(PosetError::Transitivity(a, b, c));
            }
        }
    }
    Ok(())
}
