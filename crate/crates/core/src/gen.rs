//! Seeded generators for posets, intervals and sentences, plus a few fixed
//! poset families. Everything here is reproducible from a `u64` seed.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Formula, GraphAtom, GraphFormula, PosetAtom, PosetFormula, Var, DEFAULT_COLOR};
use crate::interval::{Interval, IntervalInstance};
use crate::poset::{Poset, RelationMode};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Params(String),
}

/// Color names used by the generators.
pub fn palette(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("c{i}")).collect()
}

/// Random poset of width at most `target_width`: elements are dealt onto
/// `target_width` chains in a random linear order, then random cross-chain
/// relations consistent with that linear order are added and the result is
/// closed transitively. With `color_count == 0` every element is uncolored.
pub fn random_poset(
    n: usize,
    target_width: usize,
    color_count: usize,
    seed: u64,
) -> Result<Poset, GenError> {
    if target_width == 0 {
        return Err(GenError::Params("target width must be at least 1".into()));
    }
    if n < target_width {
        return Err(GenError::Params(format!(
            "target width {target_width} exceeds element count {n}"
        )));
    }
    let mut rng = rng(seed);
    let mut linear: Vec<usize> = (0..n).collect();
    linear.shuffle(&mut rng);
    let mut chain_label: Vec<usize> = (0..n)
        .map(|i| if i < target_width { i } else { rng.random_range(0..target_width) })
        .collect();
    chain_label.shuffle(&mut rng);

    let density = rng.random_range(0.0..0.35);
    let mut pairs = Vec::new();
    let mut last_on_chain = vec![None; target_width];
    for (pos, &e) in linear.iter().enumerate() {
        let j = chain_label[pos];
        if let Some(prev) = last_on_chain[j] {
            pairs.push((prev, e));
        }
        last_on_chain[j] = Some(e);
        for (earlier_pos, &d) in linear[..pos].iter().enumerate() {
            if chain_label[earlier_pos] != j && rng.random_bool(density) {
                pairs.push((d, e));
            }
        }
    }
    let names = palette(color_count);
    let colors: Vec<(usize, String)> = if names.is_empty() {
        Vec::new()
    } else {
        (0..n).map(|e| (e, names[rng.random_range(0..names.len())].clone())).collect()
    };
    Ok(Poset::from_relation(n, &pairs, &colors, RelationMode::Cover)
        .expect("generated relation is acyclic and in range"))
}

/// `0 < 1 < ... < n-1`, uncolored.
pub fn chain(n: usize) -> Poset {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Poset::from_relation(n, &pairs, &[], RelationMode::Cover).unwrap()
}

/// Chain whose element `i` gets color `colors[i % colors.len()]`.
pub fn colored_chain(n: usize, colors: &[&str]) -> Poset {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    let colors: Vec<_> = (0..n).map(|i| (i, colors[i % colors.len()].to_string())).collect();
    Poset::from_relation(n, &pairs, &colors, RelationMode::Cover).unwrap()
}

pub fn antichain(n: usize) -> Poset {
    Poset::from_relation(n, &[], &[], RelationMode::Cover).unwrap()
}

/// Product of a `rows`-chain and a `cols`-chain; element `(r, c)` is
/// `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Poset {
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let e = r * cols + c;
            if c + 1 < cols {
                pairs.push((e, e + 1));
            }
            if r + 1 < rows {
                pairs.push((e, e + cols));
            }
        }
    }
    Poset::from_relation(rows * cols, &pairs, &[], RelationMode::Cover).unwrap()
}

/// Disjoint union; `b`'s elements are shifted by `a.len()`.
pub fn disjoint_union(a: &Poset, b: &Poset) -> Poset {
    let shift = a.len();
    let mut pairs = a.cover_pairs();
    pairs.extend(b.cover_pairs().into_iter().map(|(x, y)| (x + shift, y + shift)));
    let colors: Vec<_> = (0..a.len())
        .map(|e| (e, a.color(e).to_string()))
        .chain((0..b.len()).map(|e| (e + shift, b.color(e).to_string())))
        .filter(|(_, c)| c != DEFAULT_COLOR)
        .collect();
    Poset::from_relation(a.len() + b.len(), &pairs, &colors, RelationMode::Cover).unwrap()
}

/// Random `n` intervals in `k` proper groups, with half-integer endpoints
/// in `[0, n + 2]` so that touching and coinciding endpoints are common.
pub fn random_interval_instance(n: usize, k: usize, seed: u64) -> Result<IntervalInstance, GenError> {
    if k == 0 {
        return Err(GenError::Params("an interval instance needs at least one group".into()));
    }
    let mut rng = rng(seed);
    let half = |x: i64| BigRational::new(BigInt::from(x), BigInt::from(2));
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..n {
        groups[rng.random_range(0..k)].push(i);
    }
    let mut intervals = vec![None; n];
    for (g, members) in groups.iter().enumerate() {
        // Left ends ascending; right ends strictly ascending with them, and
        // repeated exactly where a left end repeats, so no strict inclusion.
        let mut lefts: Vec<i64> = members.iter().map(|_| rng.random_range(0..=2 * n as i64)).collect();
        lefts.sort_unstable();
        let mut prev: Option<(i64, i64)> = None;
        for (&i, &a) in members.iter().zip(&lefts) {
            let b = match prev {
                Some((pa, pb)) if pa == a => pb,
                Some((_, pb)) => (pb + 1).max(a + rng.random_range(0..=4)),
                None => a + rng.random_range(0..=4),
            };
            prev = Some((a, b));
            intervals[i] = Some(Interval {
                a: half(a),
                b: half(b),
                group: g,
            });
        }
    }
    IntervalInstance::new(k, intervals.into_iter().map(Option::unwrap).collect())
        .map_err(|e| GenError::Params(format!("generated invalid instance: {e}")))
}

/// Shape parameters for random sentences.
#[derive(Clone, Debug)]
pub struct SentenceShape {
    pub max_rank: usize,
    /// Maximum nesting of `&`/`|` between two quantifiers.
    pub max_connective_depth: usize,
}

impl Default for SentenceShape {
    fn default() -> Self {
        SentenceShape {
            max_rank: 2,
            max_connective_depth: 2,
        }
    }
}

struct SentenceGen<'a, R, L> {
    rng: &'a mut R,
    shape: SentenceShape,
    next_var: usize,
    literal: L,
}

impl<R: RngExt, A: crate::formula::Atom, L: FnMut(&mut R, &[Var]) -> Formula<A>> SentenceGen<'_, R, L> {
    fn fresh(&mut self) -> Var {
        self.next_var += 1;
        Var::new(format!("x{}", self.next_var - 1))
    }

    fn formula(&mut self, rank_left: usize, depth_left: usize, bound: &mut Vec<Var>) -> Formula<A> {
        let can_quantify = rank_left > 0;
        let choice = if bound.is_empty() {
            0
        } else if !can_quantify && depth_left == 0 {
            2
        } else {
            self.rng.random_range(0..10)
        };
        match choice {
            0..=3 if can_quantify => {
                let v = self.fresh();
                bound.push(v.clone());
                let body = self.formula(rank_left - 1, self.shape.max_connective_depth, bound);
                bound.pop();
                if self.rng.random_bool(0.5) {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }
            4..=6 if depth_left > 0 => {
                let l = self.formula(rank_left, depth_left - 1, bound);
                let r = self.formula(rank_left, depth_left - 1, bound);
                if self.rng.random_bool(0.5) {
                    Formula::and(l, r)
                } else {
                    Formula::or(l, r)
                }
            }
            _ if bound.is_empty() => unreachable!("sentences quantify before any literal"),
            _ => (self.literal)(self.rng, bound),
        }
    }
}

fn pick<R: RngExt>(rng: &mut R, bound: &[Var]) -> Var {
    bound[rng.random_range(0..bound.len())].clone()
}

/// Random poset sentence in negation normal form with quantifier rank at
/// most `shape.max_rank` (and at least 1). Color literals draw from `colors`.
pub fn random_sentence<R: RngExt>(rng: &mut R, shape: &SentenceShape, colors: &[String]) -> PosetFormula {
    let colors = colors.to_vec();
    let literal = move |rng: &mut R, bound: &[Var]| {
        let x = pick(rng, bound);
        let y = pick(rng, bound);
        let atom = match rng.random_range(0..if colors.is_empty() { 2 } else { 3 }) {
            0 => PosetAtom::Le(x, y),
            1 => PosetAtom::Eq(x, y),
            _ => PosetAtom::Color(colors[rng.random_range(0..colors.len())].clone(), x),
        };
        if rng.random_bool(0.4) {
            Formula::not(Formula::atom(atom))
        } else {
            Formula::atom(atom)
        }
    };
    let mut gen = SentenceGen {
        rng,
        shape: shape.clone(),
        next_var: 0,
        literal,
    };
    gen.formula(shape.max_rank.max(1), shape.max_connective_depth, &mut Vec::new())
}

/// Random sentence of quantifier rank exactly `shape.max_rank`.
pub fn random_sentence_of_rank<R: RngExt>(rng: &mut R, shape: &SentenceShape, colors: &[String]) -> PosetFormula {
    loop {
        let f = random_sentence(rng, shape, colors);
        if f.quantifier_rank() == shape.max_rank {
            return f;
        }
    }
}

/// Random graph sentence in negation normal form. Edge literals are always
/// guarded against loops: `!(x = y) & edge(x, y)` or its negation
/// `x = y | !edge(x, y)`.
pub fn random_graph_sentence<R: RngExt>(rng: &mut R, shape: &SentenceShape) -> GraphFormula {
    let literal = |rng: &mut R, bound: &[Var]| {
        let x = pick(rng, bound);
        let y = pick(rng, bound);
        let eq = Formula::atom(GraphAtom::Eq(x.clone(), y.clone()));
        let edge = Formula::atom(GraphAtom::Edge(x, y));
        match rng.random_range(0..4) {
            0 => eq,
            1 => Formula::not(eq),
            2 => Formula::and(Formula::not(eq), edge),
            _ => Formula::or(eq, Formula::not(edge)),
        }
    };
    let mut gen = SentenceGen {
        rng,
        shape: shape.clone(),
        next_var: 0,
        literal,
    };
    gen.formula(shape.max_rank.max(1), shape.max_connective_depth, &mut Vec::new())
}
