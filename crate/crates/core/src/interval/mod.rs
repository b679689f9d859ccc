//! Interval graphs with a k-fold proper representation, reduced to posets of
//! width at most `k + 1`.
//!
//! After perturbing the intervals so that no two endpoints coincide, the
//! poset consists of the endpoints `D` (colored `D`, ordered as numbers) and
//! the intervals. Inside one proper group intervals are ordered left to
//! right; an interval `[a, b]` is below an endpoint `d` iff `d >= b` and
//! above it iff `d <= a`. Two intervals are adjacent iff no endpoint lies
//! between them, which is first-order expressible in the poset.

mod graph;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

use crate::checker::CheckError;
use crate::poset::{Poset, PosetError};

pub use graph::{check_interval, eval_graph_fo, interpret, ENDPOINT_COLOR};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("invalid interval file: {0}")]
    Format(String),
    #[error("`{0}` is not a rational number")]
    Rational(String),
    #[error("interval {index} has group {group}, outside 1..={k}")]
    Group { index: usize, group: usize, k: usize },
    #[error("interval {0} has its right end before its left end")]
    Reversed(usize),
    #[error("group {group} is not proper: interval {inner} lies strictly inside interval {outer}")]
    NotProper { group: usize, outer: usize, inner: usize },
    #[error("interval {index} has length {length}, not in the given set")]
    Length { index: usize, length: String },
    #[error("endpoints coincide; perturb the instance first")]
    CoincidentEndpoints,
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Closed interval `[a, b]` in group `group` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub a: BigRational,
    pub b: BigRational,
    pub group: usize,
}

impl Interval {
    pub fn intersects(&self, other: &Interval) -> bool {
        self.a <= other.b && other.a <= self.b
    }

    pub fn strictly_contains(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b && (self.a != other.a || self.b != other.b)
    }
}

/// `n` intervals partitioned into `k` proper groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalInstance {
    k: usize,
    intervals: Vec<Interval>,
}

/// What an element of the built poset stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Interval(usize),
    /// Left (`left == true`) or right end of an interval.
    Endpoint { interval: usize, left: bool },
}

impl IntervalInstance {
    pub fn new(k: usize, intervals: Vec<Interval>) -> Result<IntervalInstance, IntervalError> {
        for (i, iv) in intervals.iter().enumerate() {
            if iv.group >= k {
                return Err(IntervalError::Group {
                    index: i,
                    group: iv.group + 1,
                    k,
                });
            }
            if iv.a > iv.b {
                return Err(IntervalError::Reversed(i));
            }
        }
        for (i, x) in intervals.iter().enumerate() {
            for (j, y) in intervals.iter().enumerate() {
                if x.group == y.group && x.strictly_contains(y) {
                    return Err(IntervalError::NotProper {
                        group: x.group + 1,
                        outer: i,
                        inner: j,
                    });
                }
            }
        }
        Ok(IntervalInstance { k, intervals })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Edges `(i, j)`, `i < j`, of the intersection graph.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.intervals[i].intersects(&self.intervals[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn endpoints_distinct(&self) -> bool {
        let mut ends: Vec<&BigRational> = self.intervals.iter().flat_map(|iv| [&iv.a, &iv.b]).collect();
        ends.sort();
        ends.windows(2).all(|w| w[0] != w[1])
    }

    /// Shift interval `i` (1-based) to `[a_i + eps*i/n, b_i + eps*(1 + i/n)]`,
    /// with `eps` a quarter of the least positive difference between
    /// endpoints (1 if there is none). Afterwards no two endpoints coincide
    /// and the intersection graph and proper groups are unchanged.
    pub fn perturb(&self) -> IntervalInstance {
        let mut ends: Vec<&BigRational> = self.intervals.iter().flat_map(|iv| [&iv.a, &iv.b]).collect();
        ends.sort();
        ends.dedup();
        let eps = ends
            .windows(2)
            .map(|w| w[1] - w[0])
            .min()
            .map_or_else(BigRational::one, |d| d / BigInt::from(4));
        let n = BigInt::from(self.len());
        let intervals = self
            .intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let frac = BigRational::new(BigInt::from(i + 1), n.clone());
                Interval {
                    a: &iv.a + &eps * &frac,
                    b: &iv.b + &eps * (BigRational::one() + &frac),
                    group: iv.group,
                }
            })
            .collect();
        IntervalInstance { k: self.k, intervals }
    }

    /// The poset on intervals and endpoints. Element `i < n` is interval
    /// `i`; elements `n..3n` are the endpoints in increasing order. Chain 0
    /// is the endpoints, then one chain per non-empty group in group order.
    pub fn build_poset(&self) -> Result<(Poset, Vec<Role>), IntervalError> {
        if !self.endpoints_distinct() {
            return Err(IntervalError::CoincidentEndpoints);
        }
        let n = self.len();
        let mut ends: Vec<(&BigRational, Role)> = Vec::with_capacity(2 * n);
        for (i, iv) in self.intervals.iter().enumerate() {
            ends.push((&iv.a, Role::Endpoint { interval: i, left: true }));
            ends.push((&iv.b, Role::Endpoint { interval: i, left: false }));
        }
        ends.sort_by(|x, y| x.0.cmp(y.0));
        let total = 3 * n;
        let value = |e: usize| ends[e - n].0;

        let mut up = vec![FixedBitSet::with_capacity(total); total];
        for x in 0..total {
            for y in 0..total {
                let le = match (x < n, y < n) {
                    (false, false) => value(x) <= value(y),
                    (true, false) => value(y) >= &self.intervals[x].b,
                    (false, true) => value(x) <= &self.intervals[y].a,
                    (true, true) => {
                        let (p, q) = (&self.intervals[x], &self.intervals[y]);
                        x == y
                            || &p.b <= &q.a
                            || (p.group == q.group && (&p.a, &p.b).cmp(&(&q.a, &q.b)) == Ordering::Less)
                    }
                };
                up[x].set(y, le);
            }
        }

        let mut chains = vec![(n..total).collect::<Vec<_>>()];
        for g in 0..self.k {
            let members: Vec<usize> = (0..n).filter(|&i| self.intervals[i].group == g).collect();
            if !members.is_empty() {
                chains.push(members);
            }
        }
        if n == 0 {
            chains.clear();
        }
        let colors: Vec<String> = (0..total)
            .map(|e| if e < n { crate::formula::DEFAULT_COLOR } else { ENDPOINT_COLOR }.to_string())
            .collect();
        let poset = Poset::with_chain_partition(up, &colors, chains)?;
        let roles = (0..n).map(Role::Interval).chain(ends.iter().map(|e| e.1)).collect();
        Ok((poset, roles))
    }

    /// Group intervals by exact length; group `g` holds the intervals of
    /// length `lengths[g]`. Equal-length families are always proper.
    pub fn partition_by_length(
        intervals: &[(BigRational, BigRational)],
        lengths: &[BigRational],
    ) -> Result<IntervalInstance, IntervalError> {
        let mut distinct: Vec<&BigRational> = Vec::new();
        for l in lengths {
            if !distinct.contains(&l) {
                distinct.push(l);
            }
        }
        let grouped = intervals
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let length = b - a;
                let group = distinct.iter().position(|&l| *l == length).ok_or_else(|| IntervalError::Length {
                    index: i,
                    length: format_rational(&length),
                })?;
                Ok(Interval {
                    a: a.clone(),
                    b: b.clone(),
                    group,
                })
            })
            .collect::<Result<Vec<_>, IntervalError>>()?;
        IntervalInstance::new(distinct.len(), grouped)
    }

    pub fn from_json(text: &str) -> Result<IntervalInstance, IntervalError> {
        let file: IntervalFile = serde_json::from_str(text).map_err(|e| IntervalError::Format(e.to_string()))?;
        let intervals = file
            .intervals
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                if iv.group == 0 || iv.group > file.k {
                    return Err(IntervalError::Group {
                        index: i,
                        group: iv.group,
                        k: file.k,
                    });
                }
                Ok(Interval {
                    a: parse_rational(&iv.a)?,
                    b: parse_rational(&iv.b)?,
                    group: iv.group - 1,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntervalInstance::new(file.k, intervals)
    }

    pub fn to_json(&self) -> String {
        let file = IntervalFile {
            k: self.k,
            intervals: self
                .intervals
                .iter()
                .map(|iv| IntervalEntry {
                    a: format_rational(&iv.a),
                    b: format_rational(&iv.b),
                    group: iv.group + 1,
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("interval file serializes")
    }
}

/// `{"k": 2, "intervals": [{"a": "0", "b": "3/2", "group": 1}, ...]}`,
/// groups numbered from 1.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalFile {
    k: usize,
    intervals: Vec<IntervalEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalEntry {
    a: String,
    b: String,
    group: usize,
}

/// Exact value of `"p/q"`, an integer, or a decimal such as `"-0.125"`.
pub fn parse_rational(text: &str) -> Result<BigRational, IntervalError> {
    let err = || IntervalError::Rational(text.to_string());
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let all_digits = |t: &str| t.bytes().all(|c| c.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !all_digits(int) || !all_digits(frac) {
        return Err(err());
    }
    let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| err())?;
    let value = BigRational::new(numer, BigInt::from(10).pow(frac.len() as u32));
    Ok(if negative { -value } else { value })
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
