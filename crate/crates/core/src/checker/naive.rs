//! Exhaustive evaluation over all of `P`.

use super::{literal_holds, CheckError, Compiled, Kind};
use crate::formula::PosetFormula;
use crate::poset::Poset;

pub fn eval_naive(p: &Poset, f: &PosetFormula) -> Result<bool, CheckError> {
    eval_naive_counted(p, f).map(|(v, _)| v)
}

/// Verdict and number of positions visited (with short-circuiting).
pub fn eval_naive_counted(p: &Poset, f: &PosetFormula) -> Result<(bool, u64), CheckError> {
    let c = Compiled::new(f, p)?;
    let mut env = vec![0; c.slots];
    let mut positions = 0;
    let v = eval(p, &c, c.root, &mut env, &mut positions);
    Ok((v, positions))
}

fn eval(p: &Poset, c: &Compiled, node: usize, env: &mut [usize], positions: &mut u64) -> bool {
    *positions += 1;
    match c.nodes[node].kind {
        Kind::Lit(lit, positive) => literal_holds(p, lit, env) == positive,
        Kind::And(l, r) => eval(p, c, l, env, positions) && eval(p, c, r, env, positions),
        Kind::Or(l, r) => eval(p, c, l, env, positions) || eval(p, c, r, env, positions),
        Kind::Exists(s, body) => (0..p.len()).any(|e| {
            env[s] = e;
            eval(p, c, body, env, positions)
        }),
        Kind::Forall(s, body) => (0..p.len()).all(|e| {
            env[s] = e;
            eval(p, c, body, env, positions)
        }),
    }
}

/// Positions in the full, non-short-circuited game tree of `f` over `n`
/// elements: an atom is one position, a connective one plus its children,
/// a quantifier one plus `n` copies of its body. Saturates at `u128::MAX`.
pub fn naive_tree_size(f: &PosetFormula, n: usize) -> u128 {
    use crate::formula::Formula;
    match f {
        Formula::Atom(_) => 1,
        Formula::Not(g) => match **g {
            Formula::Atom(_) => 1,
            _ => naive_tree_size(&f.to_nnf(), n),
        },
        Formula::And(l, r) | Formula::Or(l, r) => naive_tree_size(l, n)
            .saturating_add(naive_tree_size(r, n))
            .saturating_add(1),
        Formula::Exists(_, b) | Formula::Forall(_, b) => (n as u128)
            .saturating_mul(naive_tree_size(b, n))
            .saturating_add(1),
    }
}
