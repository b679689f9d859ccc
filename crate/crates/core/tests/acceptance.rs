//! End-to-end acceptance suite. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits non-zero if any
//! criterion fails.

mod common;

use std::time::Instant;

use posetfo::bench::{fit_exponent, measure, Engine, Family};
use posetfo::checker::{check_local, eval_naive, CheckError, CheckOptions};
use posetfo::formula::{parse_sentence, PosetFormula};
use posetfo::gen::{self, Rng, SentenceShape};
use posetfo::interval::{check_interval, eval_graph_fo};
use posetfo::poset::{brute_force_width, min_chain_partition, Poset};
use posetfo::typegraph::{
    build_rank0, build_up_to, RootedNeighborhood, RootedStructure, TypeGraphError, TypeTable, DEFAULT_SIZE_CAP,
};
use rand::RngExt;

struct Report {
    failed: bool,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: String, started: Instant) {
        self.failed |= !ok;
        println!(
            "criterion {id} [{}] {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    }
}

/// A poset with its sentences and the verdicts of the default local engine.
struct Case {
    poset: Poset,
    sentences: Vec<PosetFormula>,
    verdicts: Vec<Option<bool>>,
}

fn sentences(r: &mut Rng, count: usize, rank: usize, exact: bool) -> Vec<PosetFormula> {
    let shape = SentenceShape {
        max_rank: rank,
        ..SentenceShape::default()
    };
    let colors = gen::palette(2);
    (0..count)
        .map(|_| {
            if exact {
                gen::random_sentence_of_rank(r, &shape, &colors)
            } else {
                gen::random_sentence(r, &shape, &colors)
            }
        })
        .collect()
}

fn too_large(e: &CheckError) -> bool {
    matches!(e, CheckError::TypeGraph(TypeGraphError::NeighborhoodTooLarge { .. }))
}

/// Run both engines over a suite; returns the cases, divergence messages
/// and the number of size-cap skips.
fn engine_suite(posets: usize, n_max: usize, w_max: usize, per: usize, rank: usize, seed: u64) -> (Vec<Case>, Vec<String>, usize) {
    let mut r = gen::rng(seed);
    let opts = CheckOptions::default();
    let mut cases = Vec::new();
    let mut divergences = Vec::new();
    let mut skips = 0;
    for i in 0..posets {
        let poset = common::random_poset(seed * 1_000_003 + i as u64, n_max, w_max);
        let sentences = sentences(&mut r, per, rank, rank == 3);
        let mut verdicts = Vec::new();
        for f in &sentences {
            let expected = eval_naive(&poset, f).unwrap();
            match check_local(&poset, f, &opts) {
                Ok(res) => {
                    if res.verdict != expected {
                        divergences.push(format!("poset {i}: {f}"));
                    }
                    verdicts.push(Some(res.verdict));
                }
                Err(e) if too_large(&e) => {
                    skips += 1;
                    verdicts.push(None);
                }
                Err(e) => panic!("poset {i}: {f}: {e}"),
            }
        }
        cases.push(Case {
            poset,
            sentences,
            verdicts,
        });
    }
    (cases, divergences, skips)
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

fn criterion3(report: &mut Report, suite: &[Case]) {
    let t = Instant::now();
    let mut violations = Vec::new();
    let mut skipped = 0;
    for (i, case) in suite.iter().enumerate() {
        match build_up_to(&case.poset, 2, &mut TypeTable::new(), DEFAULT_SIZE_CAP) {
            Ok(ds) => violations.extend(
                common::structural_violations(&case.poset, &ds)
                    .into_iter()
                    .map(|v| format!("poset {i}: {v}")),
            ),
            Err(_) => skipped += 1,
        }
    }
    report.line(
        3,
        "arc preservation, refinement, no crossing",
        violations.is_empty() && skipped == 0,
        format!("{} posets, {skipped} not built, {} violations{}", suite.len(), violations.len(), first(&violations)),
        t,
    );
}

fn mutate(r: &mut Rng, s: &RootedStructure) -> RootedStructure {
    let n = s.len();
    let mut labels: Vec<u32> = (0..n).map(|v| s.label(v)).collect();
    let mut rel: Vec<u8> = (0..n * n).map(|i| s.rel(i / n, i % n)).collect();
    if r.random_bool(0.2) {
        let v = r.random_range(0..n);
        labels[v] = (labels[v] + 1) % 3;
    } else {
        let i = r.random_range(0..n * n);
        rel[i] ^= 1 << r.random_range(0..5);
    }
    RootedStructure::new(s.root(), labels, rel)
}

fn random_lengths(r: &mut Rng, total: usize) -> Vec<usize> {
    let mut left = total;
    let mut out = Vec::new();
    while left > 0 {
        let len = r.random_range(1..=left);
        out.push(len);
        left -= len;
    }
    out
}

/// Neighborhoods of real rank-0 digraphs, at most 8 vertices each.
fn real_neighborhoods(count: usize) -> Vec<RootedStructure> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        let p = common::random_poset(40_000 + seed, 8, 3);
        seed += 1;
        let d0 = build_rank0(&p, &mut TypeTable::new());
        for e in 0..p.len() {
            let nb = d0.neighborhood(&p, e, DEFAULT_SIZE_CAP).unwrap();
            if nb.structure.len() <= 8 {
                out.push(nb.structure);
            }
        }
    }
    out
}

fn wrap(s: RootedStructure) -> RootedNeighborhood {
    RootedNeighborhood {
        root: s.root(),
        elements: (0..s.len()).collect(),
        structure: s,
    }
}

fn criterion4(report: &mut Report) {
    let t = Instant::now();
    let mut r = gen::rng(4);
    let real = real_neighborhoods(400);
    let mut pairs = Vec::new();
    for i in 0..1000 {
        let pair = match i % 5 {
            0 => {
                let a = real[r.random_range(0..real.len())].clone();
                let b = real[r.random_range(0..real.len())].clone();
                (a, b)
            }
            1 => {
                let a = real[r.random_range(0..real.len())].clone();
                let perm = common::random_permutation(&mut r, a.len());
                let b = a.permuted(&perm);
                (a, b)
            }
            2 => {
                let n = r.random_range(1..=8);
                let a = common::random_structure(&mut r, n);
                let perm = common::random_permutation(&mut r, n);
                let b = a.permuted(&perm);
                (a, b)
            }
            3 => {
                let n = r.random_range(1..=8);
                let a = common::random_structure(&mut r, n);
                let perm = common::random_permutation(&mut r, n);
                let b = mutate(&mut r, &a.permuted(&perm));
                (a, b)
            }
            _ => {
                let n = r.random_range(2..=8);
                let a = common::cycles(&random_lengths(&mut r, n));
                let b = common::cycles(&random_lengths(&mut r, n));
                let perm = common::random_permutation(&mut r, n);
                (a, b.permuted(&perm))
            }
        };
        pairs.push(pair);
    }
    let mut table = TypeTable::new();
    let (mut iso, mut mismatches) = (0, Vec::new());
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        let expected = common::isomorphic(&a, &b);
        iso += expected as usize;
        let same = table.canonical_type(1, &wrap(a)) == table.canonical_type(1, &wrap(b));
        if same != expected {
            mismatches.push(format!("pair {i}: oracle {expected}, canonical {same}"));
        }
    }
    report.line(
        4,
        "canonical types match isomorphism",
        mismatches.is_empty(),
        format!("1000 pairs ({iso} isomorphic), {} mismatches{}", mismatches.len(), first(&mismatches)),
        t,
    );
}

fn criterion5(report: &mut Report) {
    let t = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..500u64 {
        let p = common::random_poset(50_000 + seed, 12, 4);
        let brute = brute_force_width(p.up_sets()).unwrap();
        if p.width() != brute || !common::is_chain_partition(&p) {
            bad.push(format!("seed {seed}: width {} vs {brute}", p.width()));
        }
    }
    report.line(
        5,
        "minimum chain partitions",
        bad.is_empty(),
        format!("500 posets, {} violations{}", bad.len(), first(&bad)),
        t,
    );
}

fn criterion6(report: &mut Report) {
    let t = Instant::now();
    let mut r = gen::rng(6);
    let shape = SentenceShape::default();
    let opts = CheckOptions::default();
    let mut bad = Vec::new();
    let mut checks = 0;
    for seed in 0..200u64 {
        let n = r.random_range(0..=8);
        let k = r.random_range(1..=2);
        let inst = gen::random_interval_instance(n, k, 60_000 + seed).unwrap();
        let moved = inst.perturb();
        if moved.edges() != inst.edges() {
            bad.push(format!("instance {seed}: perturbation changed edges"));
        }
        let (p, _) = moved.build_poset().unwrap();
        let width = min_chain_partition(p.up_sets()).len();
        if width > k + 1 || !common::is_chain_partition(&p) {
            bad.push(format!("instance {seed}: width {width} with k = {k}"));
        }
        for _ in 0..10 {
            let g = gen::random_graph_sentence(&mut r, &shape);
            let expected = eval_graph_fo(inst.len(), &inst.edges(), &g);
            checks += 1;
            if check_interval(&inst, &g, &opts).unwrap().verdict != expected {
                bad.push(format!("instance {seed}: {g}"));
            }
        }
    }
    report.line(
        6,
        "interval pipeline",
        bad.is_empty(),
        format!("200 instances, {checks} sentences, {} violations{}", bad.len(), first(&bad)),
        t,
    );
}

fn criterion7(report: &mut Report) {
    let t = Instant::now();
    let sizes = [100, 200, 400, 800];
    let local_f = parse_sentence("A x. E y. (x <= y & !(x = y)) | (y <= x & !(y = x))").unwrap();
    let naive_f = parse_sentence("A x. A y. A z. !(x <= y) | !(y <= z) | x <= z").unwrap();
    let local = measure(Family::Chain, &sizes, &local_f, &Engine::Local(CheckOptions::default()), 3).unwrap();
    let naive = measure(Family::Chain, &sizes, &naive_f, &Engine::Naive, 1).unwrap();
    let (el, en) = (fit_exponent(&local), fit_exponent(&naive));
    let verdicts_ok = local.iter().chain(&naive).all(|s| s.verdict);
    let soft = match (el <= 2.5, en >= 2.8) {
        (true, true) => "both targets met".to_string(),
        (l, n) => format!(
            "soft targets missed:{}{}",
            if l { "" } else { " local > 2.5" },
            if n { "" } else { " naive < 2.8" }
        ),
    };
    report.line(
        7,
        "scaling on chains",
        el <= 3.0 && verdicts_ok,
        format!("local rank-2 exponent {el:.2}, naive rank-3 exponent {en:.2}; {soft}"),
        t,
    );
}

fn criterion8(report: &mut Report, suites: &[&[Case]]) {
    let t = Instant::now();
    let opts = CheckOptions {
        first_move_opt: false,
        ..CheckOptions::default()
    };
    let mut bad = Vec::new();
    let mut runs = 0;
    for case in suites.iter().flat_map(|s| s.iter()) {
        for (f, v) in case.sentences.iter().zip(&case.verdicts) {
            let Some(v) = v else { continue };
            runs += 1;
            match check_local(&case.poset, f, &opts) {
                Ok(res) if res.verdict == *v => {}
                Ok(_) => bad.push(f.to_string()),
                Err(e) => bad.push(format!("{f}: {e}")),
            }
        }
    }
    report.line(
        8,
        "first-move optimization is sound",
        bad.is_empty(),
        format!("{runs} reruns, {} differences{}", bad.len(), first(&bad)),
        t,
    );
}

fn main() {
    let mut report = Report { failed: false };

    let t = Instant::now();
    let (suite1, div1, skip1) = engine_suite(500, 12, 3, 20, 2, 1);
    report.line(
        1,
        "engines agree up to rank 2",
        div1.is_empty() && skip1 == 0,
        format!("10000 checks, {} divergences, {skip1} skipped{}", div1.len(), first(&div1)),
        t,
    );

    let t = Instant::now();
    let (suite2, div2, skip2) = engine_suite(50, 10, 2, 5, 3, 2);
    let skip_rate = skip2 as f64 / 250.0;
    report.line(
        2,
        "engines agree at rank 3",
        div2.is_empty() && skip_rate < 0.2,
        format!("250 checks, {} divergences, {skip2} skipped{}", div2.len(), first(&div2)),
        t,
    );

    criterion3(&mut report, &suite1);
    criterion4(&mut report);
    criterion5(&mut report);
    criterion6(&mut report);
    criterion7(&mut report);
    criterion8(&mut report, &[&suite1, &suite2]);

    if report.failed {
        std::process::exit(1);
    }
}
