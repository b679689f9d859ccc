//! The local Hintikka game: a quantifier move from a position with assigned
//! elements `p_1..p_i` (`i >= 1`) is confined to the ball of radius
//! `r_q - r_{q-1}` around them in `D_q`, where `q >= 1` is the quantifier
//! rank of the body, or to radius `r_0` in `D_0` when the body is
//! quantifier-free. A position is a subformula plus the values of its free
//! variables, so a closed subformula opens a fresh, unrestricted move.

use fixedbitset::FixedBitSet;
use std::collections::HashMap;
use std::time::Instant;

use super::{literal_holds, CheckError, CheckOptions, CheckResult, CheckStats, Compiled, Kind};
use crate::formula::PosetFormula;
use crate::poset::Poset;
use crate::typegraph::{build_up_to, radius, RankDigraph, TypeTable};

/// Elements a player may pick at a position whose assigned elements are
/// `assigned`, when the body has quantifier rank `inner_rank`.
pub fn local_move_set(
    digraphs: &[RankDigraph],
    assigned: &[usize],
    inner_rank: usize,
) -> Result<FixedBitSet, CheckError> {
    let d = digraphs.get(inner_rank).ok_or(CheckError::MissingRank {
        needed: inner_rank,
        built: digraphs.len(),
    })?;
    let r = match inner_rank {
        0 => radius(0),
        q => radius(q) - radius(q - 1),
    };
    Ok(d.ball(assigned, r))
}

/// Decides `p |= f` by solving the local game on the digraphs
/// `D_0..D_{Q-1}`, `Q` the quantifier rank of `f`.
pub fn check_local(p: &Poset, f: &PosetFormula, opts: &CheckOptions) -> Result<CheckResult, CheckError> {
    let start = Instant::now();
    let compiled = Compiled::new(f, p)?;
    let q = compiled.rank();
    if q == 0 {
        return Err(CheckError::RankZero);
    }
    let mut table = TypeTable::new();
    let digraphs = build_up_to(p, q - 1, &mut table, opts.size_cap)?;
    let mut game = Game {
        poset: p,
        compiled: &compiled,
        digraphs: &digraphs,
        opts,
        memo: HashMap::new(),
        representatives: vec![None; q],
        positions: 0,
        max_ball: 0,
    };
    let mut env = vec![0; compiled.slots];
    let verdict = game.solve(compiled.root, &mut env, None);
    Ok(CheckResult {
        verdict,
        stats: CheckStats {
            positions: game.positions,
            max_ball: game.max_ball,
            type_counts_per_rank: digraphs.iter().map(|d| d.type_set().len()).collect(),
            millis: start.elapsed().as_millis() as u64,
        },
    })
}

struct Game<'a> {
    poset: &'a Poset,
    compiled: &'a Compiled,
    digraphs: &'a [RankDigraph],
    opts: &'a CheckOptions,
    memo: HashMap<(usize, Vec<usize>), bool>,
    /// Lowest-index element of every type, per rank; filled on demand.
    representatives: Vec<Option<Vec<usize>>>,
    positions: u64,
    max_ball: usize,
}

impl Game<'_> {
    /// `anchor` is the region every move must stay inside by the locality
    /// lemma; only tracked in debug builds.
    fn solve(&mut self, node: usize, env: &mut [usize], anchor: Option<&FixedBitSet>) -> bool {
        let n = &self.compiled.nodes[node];
        let (slot, body, existential) = match n.kind {
            Kind::Lit(lit, positive) => {
                self.positions += 1;
                return literal_holds(self.poset, lit, env) == positive;
            }
            Kind::And(l, r) => {
                self.positions += 1;
                return self.solve(l, env, anchor) && self.solve(r, env, anchor);
            }
            Kind::Or(l, r) => {
                self.positions += 1;
                return self.solve(l, env, anchor) || self.solve(r, env, anchor);
            }
            Kind::Exists(s, b) => (s, b, true),
            Kind::Forall(s, b) => (s, b, false),
        };

        let key = self
            .opts
            .memoize
            .then(|| (node, n.free.iter().map(|&x| env[x]).collect::<Vec<_>>()));
        if let Some(v) = key.as_ref().and_then(|k| self.memo.get(k)) {
            return *v;
        }
        self.positions += 1;
        let inner = self.compiled.nodes[body].rank;

        let mut verdict = !existential;
        if n.free.is_empty() {
            let moves = self.opening_moves(inner);
            self.max_ball = self.max_ball.max(moves.len());
            for e in moves {
                env[slot] = e;
                let region = (cfg!(debug_assertions) && inner >= 1)
                    .then(|| self.digraphs[inner - 1].ball(&[e], radius(inner - 1)));
                if self.solve(body, env, region.as_ref()) == existential {
                    verdict = existential;
                    break;
                }
            }
        } else {
            let assigned: Vec<usize> = n.free.iter().map(|&x| env[x]).collect();
            let ball = local_move_set(self.digraphs, &assigned, inner).expect("digraphs cover every body rank");
            if let Some(region) = anchor {
                debug_assert!(
                    ball.is_subset(region),
                    "move set around {assigned:?} leaves the opening move's neighborhood"
                );
            }
            self.max_ball = self.max_ball.max(ball.count_ones(..));
            for e in ball.ones() {
                env[slot] = e;
                if self.solve(body, env, anchor) == existential {
                    verdict = existential;
                    break;
                }
            }
        }
        if let Some(k) = key {
            self.memo.insert(k, verdict);
        }
        verdict
    }

    fn opening_moves(&mut self, inner: usize) -> Vec<usize> {
        if !self.opts.first_move_opt {
            return (0..self.poset.len()).collect();
        }
        let digraphs = self.digraphs;
        self.representatives[inner]
            .get_or_insert_with(|| {
                let mut seen = std::collections::HashSet::new();
                (0..digraphs[inner].len()).filter(|&e| seen.insert(digraphs[inner].type_of(e))).collect()
            })
            .clone()
    }
}
