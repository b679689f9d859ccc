//! `posetfo`: check first-order sentences on posets and interval graphs.
//!
//! Exit status: 0 the sentence holds, 1 it fails, 2 an error occurred,
//! 3 two engines disagreed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use posetfo::bench::{self, Engine, Family};
use posetfo::checker::{check_local, eval_naive_counted, CheckOptions, CheckResult, CheckStats};
use posetfo::formula::{parse_sentence, Atom, Formula, GraphFormula, PosetFormula};
use posetfo::gen;
use posetfo::interval::{eval_graph_fo, interpret, IntervalInstance};
use posetfo::poset::{brute_force_width, Poset, PosetFile, BRUTE_FORCE_WIDTH_LIMIT};
use posetfo::typegraph::{build_up_to, TypeTable, DEFAULT_SIZE_CAP};

#[derive(Parser)]
#[command(name = "posetfo", version, about = "First-order model checking on posets of bounded width")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a sentence holds on a poset.
    Check {
        /// Poset file (JSON).
        poset: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the width and a minimum chain partition.
    Width {
        poset: PathBuf,
        #[arg(long)]
        json: bool,
        /// Cross-check the width against exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// Count the element types of each rank.
    Types {
        poset: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Also print every rank digraph.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
    },
    /// Decide a graph sentence on the intersection graph of an interval file.
    IntervalCheck {
        /// Interval file (JSON).
        intervals: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a random instance to standard output.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Time an engine over a family of growing posets.
    Bench {
        #[arg(long, value_enum, default_value_t = FamilyArg::Chain)]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
        sizes: Vec<usize>,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_enum, default_value_t = BenchEngine::Local)]
        engine: BenchEngine,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
        #[arg(long)]
        no_first_move_opt: bool,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Poset {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        width: usize,
        /// Number of colors; 0 leaves every element uncolored.
        #[arg(long, default_value_t = 1)]
        colors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Interval {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// The sentence, from a file or inline.
#[derive(Args)]
struct FormulaArg {
    /// File holding the sentence.
    #[arg(required_unless_present = "expr")]
    formula: Option<PathBuf>,
    /// The sentence itself.
    #[arg(short = 'e', long, conflicts_with = "formula")]
    expr: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = EngineArg::Local)]
    engine: EngineArg,
    /// Cross-check against the brute-force oracle (the graph oracle for
    /// interval-check; same as `--engine both` for check).
    #[arg(long)]
    oracle: bool,
    /// Largest element count the brute-force engine is run on.
    #[arg(long, default_value_t = 14)]
    oracle_limit: usize,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: usize,
    /// Let the opening move range over all elements, not one per type.
    #[arg(long)]
    no_first_move_opt: bool,
}

impl RunArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            first_move_opt: !self.no_first_move_opt,
            size_cap: self.size_cap,
            ..CheckOptions::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Naive,
    Local,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchEngine {
    Naive,
    Local,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Chain,
    Ladder,
}

enum Failure {
    Error(String),
    Divergence(String),
}

type Outcome = Result<ExitCode, Failure>;

fn error(msg: impl std::fmt::Display) -> Failure {
    Failure::Error(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { poset, formula, run } => cmd_check(&poset, &formula, &run),
        Command::Width { poset, json, oracle } => cmd_width(&poset, json, oracle),
        Command::Types {
            poset,
            rank,
            dump,
            json,
            size_cap,
        } => cmd_types(&poset, rank, dump, json, size_cap),
        Command::IntervalCheck { intervals, formula, run } => cmd_interval_check(&intervals, &formula, &run),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Bench {
            family,
            sizes,
            formula,
            engine,
            repeats,
            json,
            size_cap,
            no_first_move_opt,
        } => {
            let opts = CheckOptions {
                first_move_opt: !no_first_move_opt,
                size_cap,
                ..CheckOptions::default()
            };
            let engine = match engine {
                BenchEngine::Naive => Engine::Naive,
                BenchEngine::Local => Engine::Local(opts),
            };
            let family = match family {
                FamilyArg::Chain => Family::Chain,
                FamilyArg::Ladder => Family::Ladder,
            };
            cmd_bench(family, &sizes, &formula, &engine, repeats, json)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Divergence(msg)) => {
            eprintln!("engine divergence: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| error(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<Poset, Failure> {
    Poset::from_json(&read(path)?).map_err(|e| error(format!("{}: {e}", path.display())))
}

fn load_sentence<A: Atom>(arg: &FormulaArg) -> Result<Formula<A>, Failure> {
    let (origin, text) = match (&arg.expr, &arg.formula) {
        (Some(e), _) => ("<expr>".to_string(), e.clone()),
        (None, Some(path)) => (path.display().to_string(), read(path)?),
        (None, None) => return Err(error("no sentence given")),
    };
    parse_sentence(&text).map_err(|e| error(format!("{origin}:{e}")))
}

fn verdict_code(verdict: bool) -> ExitCode {
    if verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn report(result: &CheckResult, engine: &str, json: bool) {
    if json {
        println!("{}", result.to_json());
        return;
    }
    println!("{}", result.verdict);
    eprintln!("engine: {engine}");
    eprintln!("positions: {}", result.stats.positions);
    if !result.stats.type_counts_per_rank.is_empty() {
        let counts: Vec<String> = result.stats.type_counts_per_rank.iter().map(usize::to_string).collect();
        eprintln!("types per rank: {}", counts.join(" "));
        eprintln!("largest move set: {}", result.stats.max_ball);
    }
    eprintln!("millis: {}", result.stats.millis);
}

fn naive_result(p: &Poset, f: &PosetFormula) -> Result<CheckResult, Failure> {
    let start = std::time::Instant::now();
    let (verdict, positions) = eval_naive_counted(p, f).map_err(error)?;
    Ok(CheckResult {
        verdict,
        stats: CheckStats {
            positions,
            millis: start.elapsed().as_millis() as u64,
            ..CheckStats::default()
        },
    })
}

/// Run the requested engine(s) on a poset sentence; with both, fail on
/// disagreement and report the local result.
fn run_engines(p: &Poset, f: &PosetFormula, run: &RunArgs, cross_check: bool) -> Result<(CheckResult, &'static str), Failure> {
    let engine = if cross_check { EngineArg::Both } else { run.engine };
    if engine != EngineArg::Local && p.len() > run.oracle_limit {
        return Err(error(format!(
            "{} elements exceed the brute-force limit of {}; raise --oracle-limit to force",
            p.len(),
            run.oracle_limit
        )));
    }
    match engine {
        EngineArg::Naive => Ok((naive_result(p, f)?, "naive")),
        EngineArg::Local => Ok((check_local(p, f, &run.options()).map_err(error)?, "local")),
        EngineArg::Both => {
            let naive = naive_result(p, f)?;
            let local = check_local(p, f, &run.options()).map_err(error)?;
            if naive.verdict != local.verdict {
                return Err(Failure::Divergence(format!(
                    "naive says {}, local says {}",
                    naive.verdict, local.verdict
                )));
            }
            Ok((local, "both"))
        }
    }
}

fn cmd_check(poset: &Path, formula: &FormulaArg, run: &RunArgs) -> Outcome {
    let p = load_poset(poset)?;
    let f: PosetFormula = load_sentence(formula)?;
    let (result, engine) = run_engines(&p, &f, run, run.oracle)?;
    report(&result, engine, run.json);
    Ok(verdict_code(result.verdict))
}

#[derive(Serialize)]
struct WidthReport<'a> {
    width: usize,
    chains: &'a [Vec<usize>],
}

fn cmd_width(poset: &Path, json: bool, oracle: bool) -> Outcome {
    let p = load_poset(poset)?;
    if oracle {
        if p.len() > BRUTE_FORCE_WIDTH_LIMIT {
            return Err(error(format!(
                "{} elements exceed the exhaustive width limit of {BRUTE_FORCE_WIDTH_LIMIT}",
                p.len()
            )));
        }
        let exact = brute_force_width(p.up_sets()).map_err(error)?;
        if exact != p.width() {
            return Err(Failure::Divergence(format!(
                "chain partition has {} chains, largest antichain has {exact}",
                p.width()
            )));
        }
    }
    if json {
        let r = WidthReport {
            width: p.width(),
            chains: p.chains(),
        };
        println!("{}", serde_json::to_string(&r).expect("width report serializes"));
    } else {
        println!("width {}", p.width());
        for (j, chain) in p.chains().iter().enumerate() {
            let elems: Vec<String> = chain.iter().map(usize::to_string).collect();
            println!("chain {j}: {}", elems.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TypesReport {
    type_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dump: Option<Vec<String>>,
}

fn cmd_types(poset: &Path, rank: usize, dump: bool, json: bool, size_cap: usize) -> Outcome {
    let p = load_poset(poset)?;
    let mut table = TypeTable::new();
    let digraphs = build_up_to(&p, rank, &mut table, size_cap).map_err(error)?;
    let report = TypesReport {
        type_counts: digraphs.iter().map(|d| d.type_set().len()).collect(),
        dump: dump.then(|| digraphs.iter().map(|d| d.dump()).collect()),
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("types report serializes"));
    } else {
        for (s, count) in report.type_counts.iter().enumerate() {
            println!("rank {s}: {count} types");
        }
        for text in report.dump.iter().flatten() {
            print!("{text}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_interval_check(intervals: &Path, formula: &FormulaArg, run: &RunArgs) -> Outcome {
    let inst = IntervalInstance::from_json(&read(intervals)?).map_err(|e| error(format!("{}: {e}", intervals.display())))?;
    let g: GraphFormula = load_sentence(formula)?;
    let (p, _) = inst.perturb().build_poset().map_err(error)?;
    let (result, engine) = run_engines(&p, &interpret(&g), run, false)?;
    if run.oracle {
        let expected = eval_graph_fo(inst.len(), &inst.edges(), &g);
        if expected != result.verdict {
            return Err(Failure::Divergence(format!(
                "graph oracle says {expected}, poset engine says {}",
                result.verdict
            )));
        }
    }
    report(&result, engine, run.json);
    Ok(verdict_code(result.verdict))
}

fn cmd_gen(kind: GenKind) -> Outcome {
    let text = match kind {
        GenKind::Poset { n, width, colors, seed } => {
            let p = gen::random_poset(n, width, colors, seed).map_err(error)?;
            PosetFile::from_poset(&p).to_json()
        }
        GenKind::Interval { n, k, seed } => gen::random_interval_instance(n, k, seed).map_err(error)?.to_json(),
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BenchReport {
    family: &'static str,
    engine: &'static str,
    samples: Vec<BenchRow>,
    exponent: Option<f64>,
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    seconds: f64,
    verdict: bool,
}

fn cmd_bench(family: Family, sizes: &[usize], formula: &FormulaArg, engine: &Engine, repeats: usize, json: bool) -> Outcome {
    let f: PosetFormula = load_sentence(formula)?;
    let samples = bench::measure(family, sizes, &f, engine, repeats).map_err(error)?;
    let exponent = bench::fit_exponent(&samples);
    let report = BenchReport {
        family: match family {
            Family::Chain => "chain",
            Family::Ladder => "ladder",
        },
        engine: match engine {
            Engine::Naive => "naive",
            Engine::Local(_) => "local",
        },
        samples: samples
            .iter()
            .map(|s| BenchRow {
                n: s.n,
                seconds: s.seconds,
                verdict: s.verdict,
            })
            .collect(),
        exponent: exponent.is_finite().then_some(exponent),
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("bench report serializes"));
    } else {
        println!("{:>8}  {:>12}  verdict", "n", "seconds");
        for s in &report.samples {
            println!("{:>8}  {:>12.6}  {}", s.n, s.seconds, s.verdict);
        }
        match report.exponent {
            Some(e) => println!("fitted exponent {e:.3}"),
            None => println!("fitted exponent n/a"),
        }
    }
    Ok(ExitCode::SUCCESS)
}
