//! ncrit: identity testing for noncommutative rational formulas.
//!
//! Every run prints one JSON object on standard output.
//!
//! Exit status:
//!   0  the operation completed (a NONZERO verdict is still 0)
//!   2  invalid arguments or an unparsable formula / point file
//!   3  infeasible parameters
//!   4  I/O failure
//!   5  a witness failed re-verification

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncrit::assembly::{self, DeskParams, Verdict};
use ncrit::field::Rat;
use ncrit::formula::{corpus, eval, parse, EvalResult, Expected, Formula};
use ncrit::fsgen::{self, Mode};
use ncrit::hitset::HittingSet;
use ncrit::linalg::Mat;

#[derive(Parser)]
#[command(name = "ncrit", version, about = "Identity testing for noncommutative rational formulas")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a formula is a rational identity.
    Test {
        #[arg(long)]
        formula: PathBuf,
        /// Number of variables (default: from the formula).
        #[arg(long)]
        n: Option<usize>,
        /// Size bound (default: formula size).
        #[arg(long)]
        s: Option<usize>,
        /// Inversion height of the hitting set (default: formula height).
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        height: Option<u8>,
        #[arg(long, value_enum, default_value_t = TestMode::Hitset)]
        mode: TestMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Generate a hitting set, or print the parameter schedule only.
    Hitset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        height: u8,
        #[arg(long, value_enum, default_value_t = HitsetMode::Desk)]
        mode: HitsetMode,
        /// Height ≤ 1 only: write the set over K instead of its transfer to ℚ.
        #[arg(long)]
        over_k: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a formula at a point (JSON list of square matrices).
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// List the identity corpus, or run both tests on it.
    Corpus {
        #[arg(long)]
        run: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestMode {
    Hitset,
    Random,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HitsetMode {
    Desk,
    PaperFaithfulPrint,
}

enum Failure {
    Input(String),
    Infeasible(String),
    Io(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Io(_) => 4,
            Failure::Verification(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Infeasible(m) | Failure::Io(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<assembly::AssemblyError> for Failure {
    fn from(e: assembly::AssemblyError) -> Failure {
        Failure::Infeasible(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_formula(path: &Path) -> Result<Formula, Failure> {
    parse(read(path)?.trim()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Zero => "ZERO",
        Verdict::Nonzero => "NONZERO",
        Verdict::LikelyZero => "LIKELY_ZERO",
    }
}

/// Re-evaluates a reported witness independently of the test that found it.
fn reverify(f: &Formula, p: &[Mat<Rat>]) -> Result<(), Failure> {
    match eval(f, p, p[0].rows()) {
        Ok(r) if r.is_defined_nonzero() => Ok(()),
        _ => Err(Failure::Verification("witness failed re-verification".into())),
    }
}

fn run_test(
    f: &Formula,
    text: &str,
    n: Option<usize>,
    s: Option<usize>,
    height: Option<u8>,
    mode: TestMode,
    (seed, max_dim, trials): (u64, usize, usize),
) -> Result<Value, Failure> {
    let params = DeskParams::default();
    let n = n.unwrap_or(f.nvars()).max(f.nvars()).max(1);
    let s = s.unwrap_or(f.size());
    let h = height.map_or(f.height(), usize::from);
    if f.height() > h {
        return Err(Failure::Infeasible(format!("formula height {} exceeds --height {h}", f.height())));
    }
    let mut summary = vec![];
    let mut out = json!({ "formula": text, "n": n, "s": s, "height": h });
    if mode != TestMode::Random {
        let mut oracle = |p: &[Mat<Rat>]| ncrit::formula::eval_rat(f, p).ok().and_then(|r| r.value().cloned());
        let rep = assembly::blackbox_test(&mut oracle, n, s, h, &params)?;
        if let Some(p) = &rep.witness_point {
            reverify(f, p)?;
        }
        summary.push(format!("{} (hitset)", verdict_word(rep.verdict)));
        out["hitset"] = serde_json::to_value(&rep).unwrap();
    }
    if mode != TestMode::Hitset {
        let rep = assembly::random_oracle_test(f, max_dim, trials, seed);
        if let Some(p) = &rep.witness_point {
            reverify(f, p)?;
        }
        summary.push(format!("{} (random)", verdict_word(rep.verdict)));
        out["random"] = serde_json::to_value(&rep).unwrap();
        out["seed"] = json!(seed);
    }
    out["summary"] = json!(summary.join(" / "));
    Ok(out)
}

fn write_or_embed<T: serde::Serialize>(set: &T, out: Option<&Path>) -> Result<Value, Failure> {
    let v = serde_json::to_value(set).unwrap();
    match out {
        Some(p) => {
            let text = serde_json::to_string(&v).unwrap();
            fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Ok(json!({ "meta": v["meta"], "out": p.display().to_string() }))
        }
        None => Ok(v),
    }
}

fn run_hitset(n: usize, s: usize, height: u8, mode: HitsetMode, over_k: bool, out: Option<&Path>) -> Result<Value, Failure> {
    let params = DeskParams::default();
    let height = usize::from(height);
    match mode {
        HitsetMode::PaperFaithfulPrint => {
            // schedules only: r ≤ 2s, degree bound rounded up to a power of two
            let dtilde = (2 * s.max(1)).next_power_of_two();
            let sched = fsgen::schedule(n, 2 * s.max(1), dtilde, 1, Mode::PaperFaithful, 0)
                .map_err(|e| Failure::Infeasible(e.to_string()))?;
            Ok(json!({ "mode": "paper-faithful-print", "n": n, "s": s, "height": height, "schedule": sched,
                       "margin_holds": sched.margin_holds(), "materialized": false }))
        }
        HitsetMode::Desk if over_k => {
            if height == 2 {
                return Err(Failure::Input("--over-k applies to height ≤ 1".into()));
            }
            let set: HittingSet<_> = assembly::strong_hs_height1(n, s, &params)?;
            write_or_embed(&set, out)
        }
        HitsetMode::Desk => {
            let src = assembly::point_source(n, s, height, &params)?;
            let mut set = src.collect();
            set.meta.height = Some(height);
            write_or_embed(&set, out)
        }
    }
}

fn run_eval(f: &Formula, point_path: &Path) -> Result<Value, Failure> {
    let point: Vec<Mat<Rat>> =
        serde_json::from_str(&read(point_path)?).map_err(|e| Failure::Input(format!("{}: {e}", point_path.display())))?;
    let m = point.first().map(Mat::rows).unwrap_or(1);
    if point.iter().any(|p| p.rows() != m || p.cols() != m) {
        return Err(Failure::Input("point matrices must be square of equal size".into()));
    }
    match eval(f, &point, m).map_err(|e| Failure::Input(e.to_string()))? {
        EvalResult::Value(v) => Ok(json!({ "result": "VALUE", "value": v })),
        EvalResult::NotDefined(path) => Ok(json!({ "result": "NOT_DEFINED", "path": path })),
    }
}

fn run_corpus(run: bool) -> Result<Value, Failure> {
    let mut rows = vec![];
    let mut all = true;
    for e in corpus() {
        if !run {
            rows.push(json!({ "name": e.name, "formula": e.text, "expected": e.expected }));
            continue;
        }
        let rep = run_test(&e.formula, e.text, None, None, None, TestMode::Both, (0, 4, 50))?;
        let hit = rep["hitset"]["verdict"].as_str().unwrap_or_default().to_string();
        let rnd = rep["random"]["verdict"].as_str().unwrap_or_default().to_string();
        let want = match e.expected {
            Expected::Identity => ("ZERO", "LIKELY_ZERO"),
            Expected::Nonzero => ("NONZERO", "NONZERO"),
        };
        let pass = hit == want.0 && rnd == want.1;
        all &= pass;
        eprintln!("{:<12} {:<10} {:<8} {:<12} {}", e.name, format!("{:?}", e.expected).to_lowercase(), hit, rnd, if pass { "PASS" } else { "FAIL" });
        rows.push(json!({ "name": e.name, "formula": e.text, "expected": e.expected, "hitset": hit, "random": rnd, "pass": pass }));
    }
    Ok(if run { json!({ "corpus": rows, "all_pass": all }) } else { json!({ "corpus": rows }) })
}

fn dispatch(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::Test { formula, n, s, height, mode, seed, max_dim, trials } => {
            let text = read(&formula)?;
            let f = load_formula(&formula)?;
            run_test(&f, text.trim(), n, s, height, mode, (seed, max_dim, trials))
        }
        Command::Hitset { n, s, height, mode, over_k, out } => run_hitset(n, s, height, mode, over_k, out.as_deref()),
        Command::Eval { formula, point } => run_eval(&load_formula(&formula)?, &point),
        Command::Corpus { run } => run_corpus(run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ncrit: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
