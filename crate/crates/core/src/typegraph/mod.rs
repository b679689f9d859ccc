//! Rank-indexed type digraphs of a colored poset.
//!
//! For every rank `s` the digraph `D_s` has the poset elements as vertices,
//! each labelled by its type `tau_s`, and four kinds of arcs out of every
//! element `p`, for every chain `C_j`:
//!
//! * `max` to the topmost and `min` to the bottommost element of `C_j`;
//! * for every type `t` occurring on `C_j`, `up` to the bottommost `p' != p`
//!   of type `t` on `C_j` with `p <= p'`, and `down` to the topmost `p' != p`
//!   of type `t` on `C_j` with `p' <= p` (when such elements exist).
//!
//! Rank-0 types are `(color, chain index)`. The type of rank `s + 1` of `p`
//! is the isomorphism class of the ball of radius `r_s = 3 * 4^s - 1`
//! around `p` in `D_s`, taken as a rooted structure with its vertex labels,
//! labelled arcs and the poset order restricted to the ball.

mod canon;

use fixedbitset::FixedBitSet;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};
use thiserror::Error;

use crate::poset::Poset;

pub use canon::{canonical_form, RootedStructure};

/// Default limit on the number of vertices of a single neighborhood.
pub const DEFAULT_SIZE_CAP: usize = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeGraphError {
    #[error("neighborhood of element {element} at rank {rank} has {size} vertices, over the cap of {cap}")]
    NeighborhoodTooLarge {
        element: usize,
        rank: usize,
        size: usize,
        cap: usize,
    },
}

/// `r_s = 3 * 4^s - 1`.
pub fn radius(s: usize) -> u64 {
    3 * 4u64.pow(s as u32) - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcLabel {
    Max,
    Min,
    Up,
    Down,
}

impl ArcLabel {
    pub const ALL: [ArcLabel; 4] = [ArcLabel::Max, ArcLabel::Min, ArcLabel::Up, ArcLabel::Down];

    fn bit(self) -> u8 {
        match self {
            ArcLabel::Max => 1,
            ArcLabel::Min => 2,
            ArcLabel::Up => 4,
            ArcLabel::Down => 8,
        }
    }
}

/// Relation bit for the poset order inside a [`RootedStructure`].
const ORDER_BIT: u8 = 16;

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArcLabel::Max => "max",
            ArcLabel::Min => "min",
            ArcLabel::Up => "up",
            ArcLabel::Down => "down",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u32);

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Interner from canonical encodings to [`TypeId`]s, one namespace per
/// rank. Ids are assigned in first-seen order, so they are only comparable
/// between posets processed with the same table.
#[derive(Clone, Debug, Default)]
pub struct TypeTable {
    ranks: Vec<HashMap<Vec<u8>, TypeId>>,
    encodings: Vec<Vec<Vec<u8>>>,
}

impl TypeTable {
    pub fn new() -> Self {
        TypeTable::default()
    }

    pub fn intern(&mut self, rank: usize, encoding: Vec<u8>) -> TypeId {
        while self.ranks.len() <= rank {
            self.ranks.push(HashMap::new());
            self.encodings.push(Vec::new());
        }
        let encodings = &mut self.encodings[rank];
        *self.ranks[rank].entry(encoding).or_insert_with_key(|e| {
            encodings.push(e.clone());
            TypeId(encodings.len() as u32 - 1)
        })
    }

    /// Canonical type of a rooted neighborhood, interned at `rank`.
    pub fn canonical_type(&mut self, rank: usize, nb: &RootedNeighborhood) -> TypeId {
        self.intern(rank, canonical_form(&nb.structure))
    }

    pub fn encoding(&self, rank: usize, id: TypeId) -> &[u8] {
        &self.encodings[rank][id.0 as usize]
    }

    /// Number of types interned at `rank` so far (over all posets).
    pub fn len(&self, rank: usize) -> usize {
        self.encodings.get(rank).map_or(0, Vec::len)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub label: ArcLabel,
    pub target: usize,
}

/// The digraph `D_s` with its vertex labelling `tau_s`.
#[derive(Clone, Debug)]
pub struct RankDigraph {
    rank: usize,
    types: Vec<TypeId>,
    arcs: Vec<Vec<Arc>>,
}

/// The ball `P_s(p)` of a rank digraph as a rooted structure.
#[derive(Clone, Debug)]
pub struct RootedNeighborhood {
    pub root: usize,
    /// Poset elements of the ball; the structure's vertex `i` is `elements[i]`.
    pub elements: Vec<usize>,
    pub structure: RootedStructure,
}

impl RankDigraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn radius(&self) -> u64 {
        radius(self.rank)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn type_of(&self, p: usize) -> TypeId {
        self.types[p]
    }

    pub fn types(&self) -> &[TypeId] {
        &self.types
    }

    /// Out-arcs of `p`, sorted by label then target.
    pub fn arcs(&self, p: usize) -> &[Arc] {
        &self.arcs[p]
    }

    pub fn has_arc(&self, from: usize, label: ArcLabel, to: usize) -> bool {
        self.arcs[from].binary_search(&Arc { label, target: to }).is_ok()
    }

    pub fn max_out_degree(&self) -> usize {
        self.arcs.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The set `T_s` of types occurring at this rank.
    pub fn type_set(&self) -> BTreeSet<TypeId> {
        self.types.iter().copied().collect()
    }

    /// Elements reachable from `sources` by directed paths of length at most
    /// `r`, sources included.
    pub fn ball(&self, sources: &[usize], r: u64) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut frontier: VecDeque<(usize, u64)> = VecDeque::new();
        for &s in sources {
            if !seen.put(s) {
                frontier.push_back((s, 0));
            }
        }
        while let Some((v, d)) = frontier.pop_front() {
            if d == r {
                continue;
            }
            for arc in &self.arcs[v] {
                if !seen.put(arc.target) {
                    frontier.push_back((arc.target, d + 1));
                }
            }
        }
        seen
    }

    /// The structure whose isomorphism type is `tau_{s+1}(p)`.
    pub fn neighborhood(&self, poset: &Poset, p: usize, cap: usize) -> Result<RootedNeighborhood, TypeGraphError> {
        let ball = self.ball(&[p], self.radius());
        let size = ball.count_ones(..);
        if size > cap {
            return Err(TypeGraphError::NeighborhoodTooLarge {
                element: p,
                rank: self.rank,
                size,
                cap,
            });
        }
        let elements: Vec<usize> = ball.ones().collect();
        let local: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elements.len();
        let mut rel = vec![0u8; m * m];
        for (i, &u) in elements.iter().enumerate() {
            for arc in &self.arcs[u] {
                if let Some(&j) = local.get(&arc.target) {
                    rel[i * m + j] |= arc.label.bit();
                }
            }
            for (j, &v) in elements.iter().enumerate() {
                if poset.le(u, v) {
                    rel[i * m + j] |= ORDER_BIT;
                }
            }
        }
        let labels = elements.iter().map(|&e| self.types[e].0).collect();
        Ok(RootedNeighborhood {
            root: p,
            structure: RootedStructure::new(local[&p], labels, rel),
            elements,
        })
    }

    /// Text dump: one `s: p -label-> q` line per arc, then one
    /// `s: tau(p) = id` line per element.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let s = self.rank;
        for (p, arcs) in self.arcs.iter().enumerate() {
            for a in arcs {
                writeln!(out, "{s}: {p} -{}-> {}", a.label, a.target).unwrap();
            }
        }
        for (p, t) in self.types.iter().enumerate() {
            writeln!(out, "{s}: tau({p}) = {t}").unwrap();
        }
        out
    }
}

fn rank0_encoding(color: &str, chain: usize) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(color.len() + 5);
    bytes.extend_from_slice(color.as_bytes());
    bytes.push(0);
    bytes.extend_from_slice(&(chain as u32).to_le_bytes());
    bytes
}

/// `D_0`: types are `(color, chain index)`.
pub fn build_rank0(poset: &Poset, table: &mut TypeTable) -> RankDigraph {
    let types: Vec<TypeId> = (0..poset.len())
        .map(|p| table.intern(0, rank0_encoding(poset.color(p), poset.chain_of(p).0)))
        .collect();
    RankDigraph {
        rank: 0,
        arcs: assemble_arcs(poset, &types),
        types,
    }
}

/// `D_{s+1}` from `D_s`.
pub fn build_next(
    poset: &Poset,
    prev: &RankDigraph,
    table: &mut TypeTable,
    cap: usize,
) -> Result<RankDigraph, TypeGraphError> {
    let rank = prev.rank + 1;
    let mut types = Vec::with_capacity(poset.len());
    for p in 0..poset.len() {
        let nb = prev.neighborhood(poset, p, cap)?;
        types.push(table.canonical_type(rank, &nb));
    }
    Ok(RankDigraph {
        rank,
        arcs: assemble_arcs(poset, &types),
        types,
    })
}

/// `D_0, ..., D_max_rank`.
pub fn build_up_to(
    poset: &Poset,
    max_rank: usize,
    table: &mut TypeTable,
    cap: usize,
) -> Result<Vec<RankDigraph>, TypeGraphError> {
    let mut out = vec![build_rank0(poset, table)];
    while out.len() <= max_rank {
        let next = build_next(poset, out.last().unwrap(), table, cap)?;
        out.push(next);
    }
    Ok(out)
}

/// Arcs of `D_s` given the labelling `tau_s`.
fn assemble_arcs(poset: &Poset, types: &[TypeId]) -> Vec<Vec<Arc>> {
    // Per chain: every type present, with its positions in ascending order.
    let per_chain: Vec<Vec<(TypeId, Vec<usize>)>> = poset
        .chains()
        .iter()
        .map(|chain| {
            let mut slots: Vec<(TypeId, Vec<usize>)> = Vec::new();
            let mut index: HashMap<TypeId, usize> = HashMap::new();
            for (k, &e) in chain.iter().enumerate() {
                let i = *index.entry(types[e]).or_insert_with(|| {
                    slots.push((types[e], Vec::new()));
                    slots.len() - 1
                });
                slots[i].1.push(k);
            }
            slots
        })
        .collect();

    (0..poset.len())
        .map(|p| {
            let (own_chain, _) = poset.chain_of(p);
            let mut arcs = Vec::new();
            for (j, chain) in poset.chains().iter().enumerate() {
                arcs.push(Arc {
                    label: ArcLabel::Max,
                    target: *chain.last().unwrap(),
                });
                arcs.push(Arc {
                    label: ArcLabel::Min,
                    target: chain[0],
                });
                let on_chain = (j == own_chain) as usize;
                // Positions >= `above` hold elements above p; positions < `below`
                // hold elements below p. p itself, when on this chain, sits at
                // `above == below - 1` and is skipped.
                let above = chain.partition_point(|&c| !poset.le(p, c)) + on_chain;
                let below = chain.partition_point(|&c| poset.le(c, p)) - on_chain;
                for (_, positions) in &per_chain[j] {
                    let i = positions.partition_point(|&k| k < above);
                    if let Some(&k) = positions.get(i) {
                        arcs.push(Arc {
                            label: ArcLabel::Up,
                            target: chain[k],
                        });
                    }
                    let i = positions.partition_point(|&k| k < below);
                    if i > 0 {
                        arcs.push(Arc {
                            label: ArcLabel::Down,
                            target: chain[positions[i - 1]],
                        });
                    }
                }
            }
            arcs.sort_unstable();
            arcs.dedup();
            arcs
        })
        .collect()
}
