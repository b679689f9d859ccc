//! Deciding `P |= phi`: a brute-force evaluator used as the oracle, and the
//! local Hintikka game solver built on the rank digraphs.

mod game;
mod naive;

use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

use crate::formula::{Formula, PosetAtom, PosetFormula};
use crate::poset::Poset;
use crate::typegraph::{self, TypeGraphError, TypeId, TypeTable, DEFAULT_SIZE_CAP};

pub use game::{check_local, local_move_set};
pub use naive::{eval_naive, eval_naive_counted, naive_tree_size};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("not a sentence: free variable {0}")]
    FreeVariable(String),
    #[error("sentence has quantifier rank 0")]
    RankZero,
    #[error("rank digraphs are built only below rank {built}, rank {needed} requested")]
    MissingRank { needed: usize, built: usize },
    #[error(transparent)]
    TypeGraph(#[from] TypeGraphError),
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Let the opening move of each closed subformula range over one
    /// element per type instead of over all of `P`.
    pub first_move_opt: bool,
    pub memoize: bool,
    pub size_cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            first_move_opt: true,
            memoize: true,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    /// Game positions expanded (memo hits excluded).
    pub positions: u64,
    /// Largest local move set offered to a player.
    pub max_ball: usize,
    /// Distinct types of rank `0..Q`, one entry per built digraph.
    pub type_counts_per_rank: Vec<usize>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: bool,
    pub stats: CheckStats,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckResultJson<'a> {
    verdict: bool,
    positions: u64,
    type_counts_per_rank: &'a [usize],
    millis: u64,
}

impl CheckResult {
    /// `{"verdict": .., "positions": .., "typeCountsPerRank": [..], "millis": ..}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&CheckResultJson {
            verdict: self.verdict,
            positions: self.stats.positions,
            type_counts_per_rank: &self.stats.type_counts_per_rank,
            millis: self.stats.millis,
        })
        .expect("check result serializes")
    }
}

/// Distinct types of rank `rank` occurring in `p`, interned in `table`.
pub fn type_set(p: &Poset, rank: usize, table: &mut TypeTable, cap: usize) -> Result<BTreeSet<TypeId>, CheckError> {
    let digraphs = typegraph::build_up_to(p, rank, table, cap)?;
    Ok(digraphs[rank].type_set())
}

/// Literal test, already resolved against a poset's palette.
#[derive(Clone, Copy, Debug)]
enum Literal {
    Le(usize, usize),
    Eq(usize, usize),
    /// `None` for a color the poset does not use.
    Color(Option<usize>, usize),
}

#[derive(Clone, Debug)]
enum Kind {
    Lit(Literal, bool),
    And(usize, usize),
    Or(usize, usize),
    Exists(usize, usize),
    Forall(usize, usize),
}

#[derive(Clone, Debug)]
struct Node {
    kind: Kind,
    /// Variable slots free in this subformula, ascending.
    free: Vec<usize>,
    rank: usize,
}

/// An NNF sentence with variables resolved to slots. Every binder gets its
/// own slot, so shadowing needs no special care.
#[derive(Clone, Debug)]
struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    slots: usize,
}

impl Compiled {
    fn new(f: &PosetFormula, p: &Poset) -> Result<Compiled, CheckError> {
        if let Some(v) = f.free_vars().first() {
            return Err(CheckError::FreeVariable(v.name().to_string()));
        }
        let nnf = f.to_nnf();
        let mut c = Compiled {
            nodes: Vec::new(),
            root: 0,
            slots: 0,
        };
        let mut scope = HashMap::new();
        c.root = c.add(&nnf, p, &mut scope);
        Ok(c)
    }

    fn add(&mut self, f: &PosetFormula, p: &Poset, scope: &mut HashMap<String, usize>) -> usize {
        let slot = |scope: &HashMap<String, usize>, v: &crate::formula::Var| scope[v.name()];
        let lit = |a: &PosetAtom, scope: &HashMap<String, usize>| match a {
            PosetAtom::Le(x, y) => Literal::Le(slot(scope, x), slot(scope, y)),
            PosetAtom::Eq(x, y) => Literal::Eq(slot(scope, x), slot(scope, y)),
            PosetAtom::Color(c, x) => Literal::Color(p.palette().index_of(c), slot(scope, x)),
        };
        let node = match f {
            Formula::Atom(a) => self.leaf(lit(a, scope), true),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(a) => self.leaf(lit(a, scope), false),
                _ => unreachable!("formula is in negation normal form"),
            },
            Formula::And(l, r) | Formula::Or(l, r) => {
                let (l, r) = (self.add(l, p, scope), self.add(r, p, scope));
                let mut free: Vec<usize> = self.nodes[l].free.iter().chain(&self.nodes[r].free).copied().collect();
                free.sort_unstable();
                free.dedup();
                Node {
                    kind: if matches!(f, Formula::And(..)) { Kind::And(l, r) } else { Kind::Or(l, r) },
                    rank: self.nodes[l].rank.max(self.nodes[r].rank),
                    free,
                }
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let s = self.slots;
                self.slots += 1;
                let shadowed = scope.insert(v.name().to_string(), s);
                let b = self.add(body, p, scope);
                match shadowed {
                    Some(old) => scope.insert(v.name().to_string(), old),
                    None => scope.remove(v.name()),
                };
                Node {
                    kind: if matches!(f, Formula::Exists(..)) { Kind::Exists(s, b) } else { Kind::Forall(s, b) },
                    free: self.nodes[b].free.iter().copied().filter(|&x| x != s).collect(),
                    rank: self.nodes[b].rank + 1,
                }
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn leaf(&self, lit: Literal, positive: bool) -> Node {
        let mut free = match lit {
            Literal::Le(x, y) | Literal::Eq(x, y) => vec![x, y],
            Literal::Color(_, x) => vec![x],
        };
        free.sort_unstable();
        free.dedup();
        Node {
            kind: Kind::Lit(lit, positive),
            free,
            rank: 0,
        }
    }

    fn rank(&self) -> usize {
        self.nodes[self.root].rank
    }
}

fn literal_holds(p: &Poset, lit: Literal, env: &[usize]) -> bool {
    match lit {
        Literal::Le(x, y) => p.le(env[x], env[y]),
        Literal::Eq(x, y) => env[x] == env[y],
        Literal::Color(c, x) => c == Some(p.color_index(env[x])),
    }
}
