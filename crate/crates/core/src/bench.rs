//! Wall-clock scaling measurements over families of growing posets.

use std::time::Instant;

use crate::checker::{check_local, eval_naive, CheckError, CheckOptions};
use crate::formula::PosetFormula;
use crate::gen;
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `0 < 1 < ... < n-1`: width 1, one color.
    Chain,
    /// Two chains of `n / 2` with rungs: width 2, one color.
    Ladder,
}

impl Family {
    pub fn build(self, n: usize) -> Poset {
        match self {
            Family::Chain => gen::chain(n),
            Family::Ladder => gen::grid(2, n.div_ceil(2)),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Engine {
    Naive,
    Local(CheckOptions),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub n: usize,
    /// Fastest of the repeated runs.
    pub seconds: f64,
    pub verdict: bool,
}

/// Time `engine` on `f` over `family` at every size; poset construction is
/// not timed.
pub fn measure(
    family: Family,
    sizes: &[usize],
    f: &PosetFormula,
    engine: &Engine,
    repeats: usize,
) -> Result<Vec<Sample>, CheckError> {
    sizes
        .iter()
        .map(|&n| {
            let p = family.build(n);
            let mut best = f64::INFINITY;
            let mut verdict = false;
            for _ in 0..repeats.max(1) {
                let start = Instant::now();
                verdict = match engine {
                    Engine::Naive => eval_naive(&p, f)?,
                    Engine::Local(opts) => check_local(&p, f, opts)?.verdict,
                };
                best = best.min(start.elapsed().as_secs_f64());
            }
            Ok(Sample {
                n,
                seconds: best,
                verdict,
            })
        })
        .collect()
}

/// Least-squares slope of `ln seconds` against `ln n`. `NaN` with fewer
/// than two distinct sizes.
pub fn fit_exponent(samples: &[Sample]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| ((s.n as f64).ln(), s.seconds.max(1e-9).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}
