//! Graph sentences: brute-force evaluation, and their translation into poset
//! sentences over the interval poset.

use std::collections::{HashMap, HashSet};

use super::{IntervalError, IntervalInstance};
use crate::checker::{check_local, CheckOptions, CheckResult};
use crate::formula::{fresh_name, Formula, GraphAtom, GraphFormula, PosetAtom, PosetFormula, Var};

/// Color of the endpoint elements.
pub const ENDPOINT_COLOR: &str = "D";

/// Truth of a graph sentence on vertices `0..n`. Edges are undirected and
/// loops are never present, so `edge(x, x)` is false.
pub fn eval_graph_fo(n: usize, edges: &[(usize, usize)], f: &GraphFormula) -> bool {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    eval(&adj, f, &mut HashMap::new())
}

fn eval(adj: &[Vec<bool>], f: &GraphFormula, env: &mut HashMap<String, usize>) -> bool {
    let val = |env: &HashMap<String, usize>, v: &Var| {
        *env.get(v.name())
            .unwrap_or_else(|| panic!("free variable {v} in graph sentence"))
    };
    match f {
        Formula::Atom(GraphAtom::Edge(x, y)) => adj[val(env, x)][val(env, y)],
        Formula::Atom(GraphAtom::Eq(x, y)) => val(env, x) == val(env, y),
        Formula::Not(g) => !eval(adj, g, env),
        Formula::And(l, r) => eval(adj, l, env) && eval(adj, r, env),
        Formula::Or(l, r) => eval(adj, l, env) || eval(adj, r, env),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let existential = matches!(f, Formula::Exists(..));
            let saved = env.get(v.name()).copied();
            let mut verdict = !existential;
            for e in 0..adj.len() {
                env.insert(v.name().to_string(), e);
                if eval(adj, body, env) == existential {
                    verdict = existential;
                    break;
                }
            }
            match saved {
                Some(e) => env.insert(v.name().to_string(), e),
                None => env.remove(v.name()),
            };
            verdict
        }
    }
}

/// The poset sentence that holds on the interval poset iff `f` holds on the
/// intersection graph: quantifiers are relativized to non-endpoints and
/// `edge(x, y)` becomes "no endpoint lies between `x` and `y`",
/// `A d. !D(d) | ((!x <= d | !d <= y) & (!y <= d | !d <= x))`.
pub fn interpret(f: &GraphFormula) -> PosetFormula {
    let mut used: HashSet<String> = f.var_names().into_iter().map(|v| v.name().to_string()).collect();
    let d = if used.contains("d") {
        Var::new(fresh_name("d", &mut used))
    } else {
        Var::new("d")
    };
    translate(f, &d)
}

fn translate(f: &GraphFormula, d: &Var) -> PosetFormula {
    let endpoint = |v: &Var| Formula::atom(PosetAtom::Color(ENDPOINT_COLOR.into(), v.clone()));
    match f {
        Formula::Atom(GraphAtom::Eq(x, y)) => Formula::atom(PosetAtom::Eq(x.clone(), y.clone())),
        Formula::Atom(GraphAtom::Edge(x, y)) => {
            let not_le = |a: &Var, b: &Var| Formula::not(Formula::atom(PosetAtom::Le(a.clone(), b.clone())));
            Formula::forall(
                d.clone(),
                Formula::or(
                    Formula::not(endpoint(d)),
                    Formula::and(
                        Formula::or(not_le(x, d), not_le(d, y)),
                        Formula::or(not_le(y, d), not_le(d, x)),
                    ),
                ),
            )
        }
        Formula::Not(g) => Formula::not(translate(g, d)),
        Formula::And(l, r) => Formula::and(translate(l, d), translate(r, d)),
        Formula::Or(l, r) => Formula::or(translate(l, d), translate(r, d)),
        Formula::Exists(v, body) => Formula::exists(
            v.clone(),
            Formula::and(Formula::not(endpoint(v)), translate(body, d)),
        ),
        Formula::Forall(v, body) => Formula::forall(v.clone(), Formula::or(endpoint(v), translate(body, d))),
    }
}

/// Decide `f` on the intersection graph of `inst` through the poset.
pub fn check_interval(
    inst: &IntervalInstance,
    f: &GraphFormula,
    opts: &CheckOptions,
) -> Result<CheckResult, IntervalError> {
    let (poset, _) = inst.perturb().build_poset()?;
    Ok(check_local(&poset, &interpret(f), opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::eval_naive;
    use crate::formula::parse_sentence;
    use crate::gen;
    use crate::interval::{parse_rational, Interval};
    use crate::poset::Poset;

    fn graph(text: &str) -> GraphFormula {
        parse_sentence(text).unwrap()
    }

    #[test]
    fn oracle_small_graphs() {
        let complete = graph("A x. A y. x = y | edge(x, y)");
        assert!(eval_graph_fo(3, &[(0, 1), (1, 2), (0, 2)], &complete));
        assert!(!eval_graph_fo(3, &[(0, 1), (1, 2)], &complete));
        assert!(!eval_graph_fo(0, &[], &graph("E x. x = x")));
        assert!(!eval_graph_fo(2, &[(0, 0)], &graph("E x. edge(x, x)")));
    }

    #[test]
    fn edge_translates_to_beta() {
        let f: GraphFormula = crate::formula::parse("edge(x, y)").unwrap();
        assert_eq!(
            interpret(&f).to_string(),
            "A d. !D(d) | ((!(x <= d) | !(d <= y)) & (!(y <= d) | !(d <= x)))"
        );
        let g: GraphFormula = crate::formula::parse("x = y").unwrap();
        assert_eq!(interpret(&g).to_string(), "x = y");
    }

    #[test]
    fn bound_variable_named_d_is_avoided() {
        let f = graph("E d. E x. edge(d, x)");
        let text = interpret(&f).to_string();
        assert!(text.contains("A d_1."), "{text}");
    }

    #[test]
    fn unit_interval_examples() {
        let ivs = [("0", "1"), ("0.5", "1.5"), ("2", "3")]
            .iter()
            .map(|(a, b)| Interval {
                a: parse_rational(a).unwrap(),
                b: parse_rational(b).unwrap(),
                group: 0,
            })
            .collect();
        let inst = IntervalInstance::new(1, ivs).unwrap();
        assert_eq!(inst.edges(), vec![(0, 1)]);
        let opts = CheckOptions::default();
        let some_edge = graph("E x. E y. !(x = y) & edge(x, y)");
        assert!(check_interval(&inst, &some_edge, &opts).unwrap().verdict);
        let no_isolated = graph("A x. E y. !(x = y) & edge(x, y)");
        assert!(!check_interval(&inst, &no_isolated, &opts).unwrap().verdict);
    }

    /// Poset formula evaluation under an environment, for open formulas.
    fn holds(p: &Poset, f: &PosetFormula, env: &mut HashMap<String, usize>) -> bool {
        match f {
            Formula::Atom(PosetAtom::Le(x, y)) => p.le(env[x.name()], env[y.name()]),
            Formula::Atom(PosetAtom::Eq(x, y)) => env[x.name()] == env[y.name()],
            Formula::Atom(PosetAtom::Color(c, x)) => p.color(env[x.name()]) == c,
            Formula::Not(g) => !holds(p, g, env),
            Formula::And(l, r) => holds(p, l, env) && holds(p, r, env),
            Formula::Or(l, r) => holds(p, l, env) || holds(p, r, env),
            Formula::Exists(v, b) => (0..p.len()).any(|e| {
                env.insert(v.name().to_string(), e);
                holds(p, b, env)
            }),
            Formula::Forall(v, b) => (0..p.len()).all(|e| {
                env.insert(v.name().to_string(), e);
                holds(p, b, env)
            }),
        }
    }

    #[test]
    fn beta_matches_intersection() {
        let beta = interpret(&crate::formula::parse::<GraphAtom>("edge(x, y)").unwrap());
        for seed in 0..30 {
            let inst = gen::random_interval_instance(5, 2, seed).unwrap();
            let (p, _) = inst.perturb().build_poset().unwrap();
            for i in 0..inst.len() {
                for j in 0..inst.len() {
                    let mut env = HashMap::from([("x".to_string(), i), ("y".to_string(), j)]);
                    let expected = inst.intervals()[i].intersects(&inst.intervals()[j]);
                    assert_eq!(holds(&p, &beta, &mut env), expected, "seed {seed}: {i} {j}");
                }
            }
        }
    }

    #[test]
    fn interval_pipeline_matches_graph_oracle() {
        let mut r = gen::rng(9);
        let shape = gen::SentenceShape::default();
        for seed in 0..20 {
            let inst = gen::random_interval_instance(5, 2, seed).unwrap();
            let (p, _) = inst.perturb().build_poset().unwrap();
            for _ in 0..4 {
                let g = gen::random_graph_sentence(&mut r, &shape);
                let expected = eval_graph_fo(inst.len(), &inst.edges(), &g);
                let f = interpret(&g);
                assert_eq!(eval_naive(&p, &f).unwrap(), expected, "seed {seed}: {g}");
                assert_eq!(check_interval(&inst, &g, &CheckOptions::default()).unwrap().verdict, expected, "seed {seed}: {g}");
            }
        }
    }
}
