//! Oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use posetfo::formula::{Formula, PosetAtom, PosetFormula};
use posetfo::gen::{self, Rng};
use posetfo::poset::Poset;
use posetfo::typegraph::{ArcLabel, RankDigraph, RootedStructure, TypeId};
use rand::RngExt;

/// A random poset with `n <= n_max`, width at most `w_max` and up to two
/// colors, reproducible from `seed`.
pub fn random_poset(seed: u64, n_max: usize, w_max: usize) -> Poset {
    let mut r = gen::rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let w = r.random_range(1..=w_max);
    let n = r.random_range(w..=n_max);
    let colors = r.random_range(0..=2);
    gen::random_poset(n, w, colors, seed).unwrap()
}

/// Textbook semantics, straight off the formula tree (negations included).
pub fn eval_direct(p: &Poset, f: &PosetFormula) -> bool {
    fn go(p: &Poset, f: &PosetFormula, env: &mut HashMap<String, usize>) -> bool {
        match f {
            Formula::Atom(PosetAtom::Le(x, y)) => p.le(env[x.name()], env[y.name()]),
            Formula::Atom(PosetAtom::Eq(x, y)) => env[x.name()] == env[y.name()],
            Formula::Atom(PosetAtom::Color(c, x)) => p.color(env[x.name()]) == c,
            Formula::Not(g) => !go(p, g, env),
            Formula::And(l, r) => go(p, l, env) && go(p, r, env),
            Formula::Or(l, r) => go(p, l, env) || go(p, r, env),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let saved = env.get(v.name()).copied();
                let mut values = (0..p.len()).map(|e| {
                    env.insert(v.name().to_string(), e);
                    go(p, b, env)
                });
                let out = if matches!(f, Formula::Exists(..)) {
                    values.any(|x| x)
                } else {
                    values.all(|x| x)
                };
                match saved {
                    Some(e) => env.insert(v.name().to_string(), e),
                    None => env.remove(v.name()),
                };
                out
            }
        }
    }
    go(p, f, &mut HashMap::new())
}

/// Equivalent formula with negations pushed outwards at random, so that it
/// is usually not in negation normal form.
pub fn scramble(f: &PosetFormula, r: &mut Rng) -> PosetFormula {
    let flip = |r: &mut Rng| r.random_bool(0.3);
    match f {
        Formula::Atom(_) | Formula::Not(_) => {
            if flip(r) {
                Formula::not(Formula::not(f.clone()))
            } else {
                f.clone()
            }
        }
        Formula::And(a, b) => {
            let (a, b) = (scramble(a, r), scramble(b, r));
            if flip(r) {
                Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
            } else {
                Formula::and(a, b)
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (scramble(a, r), scramble(b, r));
            if flip(r) {
                Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
            } else {
                Formula::or(a, b)
            }
        }
        Formula::Exists(v, b) => {
            let b = scramble(b, r);
            if flip(r) {
                Formula::not(Formula::forall(v.clone(), Formula::not(b)))
            } else {
                Formula::exists(v.clone(), b)
            }
        }
        Formula::Forall(v, b) => {
            let b = scramble(b, r);
            if flip(r) {
                Formula::not(Formula::exists(v.clone(), Formula::not(b)))
            } else {
                Formula::forall(v.clone(), b)
            }
        }
    }
}

/// Root-preserving isomorphism by backtracking over all bijections.
pub fn isomorphic(a: &RootedStructure, b: &RootedStructure) -> bool {
    fn extend(a: &RootedStructure, b: &RootedStructure, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let u = map.len();
        if u == a.len() {
            return true;
        }
        for v in 0..b.len() {
            if used[v] || a.label(u) != b.label(v) || (u == a.root()) != (v == b.root()) || a.rel(u, u) != b.rel(v, v) {
                continue;
            }
            if (0..u).all(|w| a.rel(u, w) == b.rel(v, map[w]) && a.rel(w, u) == b.rel(map[w], v)) {
                map.push(v);
                used[v] = true;
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[v] = false;
            }
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
}

/// Violations of arc preservation, type refinement and the no-crossing
/// property across consecutive rank digraphs.
pub fn structural_violations(p: &Poset, ds: &[RankDigraph]) -> Vec<String> {
    let mut out = Vec::new();
    for pair in ds.windows(2) {
        let (d, next) = (&pair[0], &pair[1]);
        for e in 0..p.len() {
            for arc in d.arcs(e) {
                if !next.has_arc(e, arc.label, arc.target) {
                    out.push(format!(
                        "rank {}: arc {e} -{}-> {} missing at rank {}",
                        d.rank(),
                        arc.label,
                        arc.target,
                        next.rank()
                    ));
                }
            }
        }
        for a in 0..p.len() {
            for b in 0..p.len() {
                if d.type_of(a) != d.type_of(b) && next.type_of(a) == next.type_of(b) {
                    out.push(format!("rank {}: elements {a} and {b} merge at rank {}", d.rank(), next.rank()));
                }
            }
        }
    }
    for d in ds {
        let mut groups: HashMap<(ArcLabel, TypeId, TypeId), Vec<(usize, usize)>> = HashMap::new();
        for e in 0..p.len() {
            for arc in d.arcs(e) {
                groups
                    .entry((arc.label, d.type_of(e), d.type_of(arc.target)))
                    .or_default()
                    .push((e, arc.target));
            }
        }
        for arcs in groups.values() {
            for &(a, q) in arcs {
                for &(a2, q2) in arcs {
                    if p.le(a, a2) && !p.le(q, q2) {
                        out.push(format!("rank {}: arcs {a}->{q} and {a2}->{q2} cross", d.rank()));
                    }
                }
            }
        }
    }
    out
}

/// Every element in exactly one chain and every chain totally ordered.
pub fn is_chain_partition(p: &Poset) -> bool {
    let mut seen = HashSet::new();
    p.chains().iter().all(|c| {
        c.iter().all(|&e| seen.insert(e)) && c.iter().all(|&a| c.iter().all(|&b| p.comparable(a, b)))
    }) && seen.len() == p.len()
}

/// Random rooted structure on `n` vertices with up to three labels and the
/// five relation bits, sparse.
pub fn random_structure(r: &mut Rng, n: usize) -> RootedStructure {
    let labels = (0..n).map(|_| r.random_range(0..3)).collect();
    let rel = (0..n * n)
        .map(|_| {
            (0..5).fold(0u8, |m, bit| if r.random_bool(0.15) { m | 1 << bit } else { m })
        })
        .collect();
    RootedStructure::new(r.random_range(0..n), labels, rel)
}

pub fn random_permutation(r: &mut Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    perm
}

/// Disjoint directed cycles of the given lengths, uniformly labelled and
/// rooted at vertex 0; color refinement alone cannot separate these.
pub fn cycles(lengths: &[usize]) -> RootedStructure {
    let n: usize = lengths.iter().sum();
    let mut rel = vec![0u8; n * n];
    let mut start = 0;
    for &len in lengths {
        for i in 0..len {
            let (u, v) = (start + i, start + (i + 1) % len);
            rel[u * n + v] |= 1;
        }
        start += len;
    }
    RootedStructure::new(0, vec![0; n], rel)
}
