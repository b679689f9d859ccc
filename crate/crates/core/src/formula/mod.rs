//! First-order formulas over the poset vocabulary `{<=, =, colors}` and over
//! the graph vocabulary `{edge, =}`.
//!
//! Both vocabularies share one AST, [`Formula`], generic over its atom type.
//! Formulas come out of the parser with general negation and with every bound
//! variable renamed apart; [`Formula::to_nnf`] pushes negations down to the
//! atoms, which is the form both model-checking engines consume.

mod parse;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

pub use parse::{parse, parse_sentence, ParseError, ParseErrorKind};

/// A variable name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_string())
    }
}

/// Atom as read by the parser, before it is checked against a vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawAtom {
    Le(Var, Var),
    Eq(Var, Var),
    Pred(String, Vec<Var>),
}

/// The atomic formulas of a vocabulary.
pub trait Atom: Clone + Eq + fmt::Debug + fmt::Display {
    /// Variables in order of occurrence.
    fn vars(&self) -> Vec<&Var>;

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self;

    /// Accept or reject a parsed atom; the error is a human-readable reason.
    fn from_raw(raw: RawAtom) -> Result<Self, String>;
}

/// Atoms over a colored poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PosetAtom {
    Le(Var, Var),
    Eq(Var, Var),
    Color(String, Var),
}

impl Atom for PosetAtom {
    fn vars(&self) -> Vec<&Var> {
        match self {
            PosetAtom::Le(x, y) | PosetAtom::Eq(x, y) => vec![x, y],
            PosetAtom::Color(_, x) => vec![x],
        }
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        match self {
            PosetAtom::Le(x, y) => PosetAtom::Le(f(x), f(y)),
            PosetAtom::Eq(x, y) => PosetAtom::Eq(f(x), f(y)),
            PosetAtom::Color(c, x) => PosetAtom::Color(c.clone(), f(x)),
        }
    }

    fn from_raw(raw: RawAtom) -> Result<Self, String> {
        match raw {
            RawAtom::Le(x, y) => Ok(PosetAtom::Le(x, y)),
            RawAtom::Eq(x, y) => Ok(PosetAtom::Eq(x, y)),
            RawAtom::Pred(name, mut args) if args.len() == 1 => {
                Ok(PosetAtom::Color(name, args.pop().unwrap()))
            }
            RawAtom::Pred(name, args) => Err(format!(
                "predicate `{name}` has arity {}, but colors are unary",
                args.len()
            )),
        }
    }
}

impl fmt::Display for PosetAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetAtom::Le(x, y) => write!(f, "{x} <= {y}"),
            PosetAtom::Eq(x, y) => write!(f, "{x} = {y}"),
            PosetAtom::Color(c, x) => write!(f, "{c}({x})"),
        }
    }
}

/// Atoms over a simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphAtom {
    Edge(Var, Var),
    Eq(Var, Var),
}

impl Atom for GraphAtom {
    fn vars(&self) -> Vec<&Var> {
        match self {
            GraphAtom::Edge(x, y) | GraphAtom::Eq(x, y) => vec![x, y],
        }
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        match self {
            GraphAtom::Edge(x, y) => GraphAtom::Edge(f(x), f(y)),
            GraphAtom::Eq(x, y) => GraphAtom::Eq(f(x), f(y)),
        }
    }

    fn from_raw(raw: RawAtom) -> Result<Self, String> {
        match raw {
            RawAtom::Eq(x, y) => Ok(GraphAtom::Eq(x, y)),
            RawAtom::Pred(name, mut args) if name == "edge" && args.len() == 2 => {
                let y = args.pop().unwrap();
                let x = args.pop().unwrap();
                Ok(GraphAtom::Edge(x, y))
            }
            RawAtom::Le(..) => Err("`<=` is not part of the graph vocabulary".into()),
            RawAtom::Pred(name, args) => Err(format!(
                "unknown graph predicate `{name}` of arity {} (only edge/2)",
                args.len()
            )),
        }
    }
}

impl fmt::Display for GraphAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphAtom::Edge(x, y) => write!(f, "edge({x}, {y})"),
            GraphAtom::Eq(x, y) => write!(f, "{x} = {y}"),
        }
    }
}

/// A first-order formula.
///
/// In negation normal form `Not` wraps only `Atom` nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula<A> {
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Exists(Var, Box<Formula<A>>),
    Forall(Var, Box<Formula<A>>),
}

pub type PosetFormula = Formula<PosetAtom>;
pub type GraphFormula = Formula<GraphAtom>;

impl<A: Atom> Formula<A> {
    pub fn atom(a: A) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Self, r: Self) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Self, r: Self) -> Self {
        Formula::or(Formula::not(l), r)
    }

    pub fn iff(l: Self, r: Self) -> Self {
        Formula::and(
            Formula::implies(l.clone(), r.clone()),
            Formula::implies(r, l),
        )
    }

    pub fn exists(v: impl Into<Var>, body: Self) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<Var>, body: Self) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(l, r) | Formula::Or(l, r) => l.quantifier_rank().max(r.quantifier_rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_nnf() && r.is_nnf(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.is_nnf(),
        }
    }

    /// Equivalent formula in negation normal form. Linear in the input size.
    pub fn to_nnf(&self) -> Self {
        self.nnf(false)
    }

    fn nnf(&self, negate: bool) -> Self {
        match (self, negate) {
            (Formula::Atom(a), false) => Formula::Atom(a.clone()),
            (Formula::Atom(a), true) => Formula::not(Formula::Atom(a.clone())),
            (Formula::Not(f), _) => f.nnf(!negate),
            (Formula::And(l, r), false) => Formula::and(l.nnf(false), r.nnf(false)),
            (Formula::And(l, r), true) => Formula::or(l.nnf(true), r.nnf(true)),
            (Formula::Or(l, r), false) => Formula::or(l.nnf(false), r.nnf(false)),
            (Formula::Or(l, r), true) => Formula::and(l.nnf(true), r.nnf(true)),
            (Formula::Exists(v, f), false) => Formula::exists(v.clone(), f.nnf(false)),
            (Formula::Exists(v, f), true) => Formula::forall(v.clone(), f.nnf(true)),
            (Formula::Forall(v, f), false) => Formula::forall(v.clone(), f.nnf(false)),
            (Formula::Forall(v, f), true) => Formula::exists(v.clone(), f.nnf(true)),
        }
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut seen, &mut out);
        out
    }

    fn collect_free<'a>(
        &'a self,
        bound: &mut Vec<&'a Var>,
        seen: &mut HashSet<&'a Var>,
        out: &mut Vec<Var>,
    ) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) && seen.insert(v) {
                        out.push(v.clone());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, seen, out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_free(bound, seen, out);
                r.collect_free(bound, seen, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, seen, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every subformula in pre-order, paired with its ordered free variables.
    /// These pairs are the shapes of the model-checking game's positions.
    pub fn subformula_positions(&self) -> Vec<(&Formula<A>, Vec<Var>)> {
        let mut out = Vec::new();
        self.walk(&mut |f| out.push((f, f.free_vars())));
        out
    }

    fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Formula<A>)) {
        visit(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.walk(visit),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
        }
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn var_names(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(a) => out.extend(a.vars().into_iter().cloned()),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Rename bound variables so that no name is bound by two quantifiers
    /// and no bound name coincides with a free one. The first binder of a
    /// name keeps it; later ones get a fresh `name_k`.
    pub fn rename_apart(&self) -> Self {
        let mut used: HashSet<String> =
            self.var_names().into_iter().map(|v| v.0).collect();
        let mut binders = HashSet::new();
        for v in self.free_vars() {
            binders.insert(v.0);
        }
        let mut env = HashMap::new();
        self.rename_rec(&mut env, &mut binders, &mut used)
    }

    fn rename_rec(
        &self,
        env: &mut HashMap<Var, Var>,
        binders: &mut HashSet<String>,
        used: &mut HashSet<String>,
    ) -> Self {
        match self {
            Formula::Atom(a) => {
                Formula::Atom(a.map_vars(&mut |v| env.get(v).cloned().unwrap_or_else(|| v.clone())))
            }
            Formula::Not(f) => Formula::not(f.rename_rec(env, binders, used)),
            Formula::And(l, r) => Formula::and(
                l.rename_rec(env, binders, used),
                r.rename_rec(env, binders, used),
            ),
            Formula::Or(l, r) => Formula::or(
                l.rename_rec(env, binders, used),
                r.rename_rec(env, binders, used),
            ),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let fresh = if binders.insert(v.0.clone()) {
                    v.clone()
                } else {
                    let name = fresh_name(&v.0, used);
                    binders.insert(name.clone());
                    Var(name)
                };
                let shadowed = env.insert(v.clone(), fresh.clone());
                let body = f.rename_rec(env, binders, used);
                match shadowed {
                    Some(prev) => env.insert(v.clone(), prev),
                    None => env.remove(v),
                };
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(fresh, body)
                } else {
                    Formula::forall(fresh, body)
                }
            }
        }
    }

    fn needs_parens(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Exists(..) | Formula::Forall(..)
        )
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.needs_parens() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// A name of the form `base_k` not yet in `used`; it is added to `used`.
pub fn fresh_name(base: &str, used: &mut HashSet<String>) -> String {
    let mut k = 1;
    loop {
        let candidate = format!("{base}_{k}");
        if used.insert(candidate.clone()) {
            return candidate;
        }
        k += 1;
    }
}

impl<A: Atom> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(a) if a.vars().len() == 1 => write!(f, "!{a}"),
                other => write!(f, "!({other})"),
            },
            Formula::And(l, r) => {
                l.fmt_child(f)?;
                f.write_str(" & ")?;
                r.fmt_child(f)
            }
            Formula::Or(l, r) => {
                l.fmt_child(f)?;
                f.write_str(" | ")?;
                r.fmt_child(f)
            }
            Formula::Exists(v, body) => write!(f, "E {v}. {body}"),
            Formula::Forall(v, body) => write!(f, "A {v}. {body}"),
        }
    }
}

/// Finite ordered set of color names, with a reserved default color for
/// elements that carry none.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ColorSet {
    names: Vec<String>,
}

/// Color given to poset elements without an explicit color.
pub const DEFAULT_COLOR: &str = "uncolored";

impl ColorSet {
    pub fn new() -> Self {
        ColorSet::default()
    }

    /// Insert if absent; returns the color's index.
    pub fn intern(&mut self, name: &str) -> usize {
        match self.index_of(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// Colors mentioned by a poset formula, in order of first occurrence.
    pub fn of_formula(f: &PosetFormula) -> Self {
        let mut set = ColorSet::new();
        f.walk(&mut |g| {
            if let Formula::Atom(PosetAtom::Color(c, _)) = g {
                set.intern(c);
            }
        });
        set
    }

    /// Union, keeping `self`'s order first. The default color is added when
    /// the result would otherwise be empty.
    pub fn union(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.clone();
        for c in other.iter() {
            out.intern(c);
        }
        if out.is_empty() {
            out.intern(DEFAULT_COLOR);
        }
        out
    }
}
