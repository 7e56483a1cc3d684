//! The `radixrat` command line.
//!
//! Every command writes one JSON report (to stdout, or `<command>.json`
//! under `--out`) plus CSV side files when `--out` is given. Exit codes:
//! 0 success, 1 structural error, 2 admissibility refusal (ρ ≤ λ*),
//! 3 envelope violation in `verify`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dilation::DilationSystem;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, int, parse_rational, Field, NormKind, Rational};
use crate::expansion::{grid_file_name, lrtoae1_with, lrtoae2_with, ExpansionConfig, ExpansionReport};
use crate::harness::{compare_integers, empirical_periodic, ComparisonReport, EmpiricalPeriodic, NRange, Projection};
use crate::io::{Entry, RepFile};
use crate::jsr::{jsr_estimate, jsr_lower_bound_word, lambda_t_word, lie_algebra_closure, JsrConfig, JsrEstimate};
use crate::linrep::{infer_representation, AnyRep, LinearRep};
use crate::spectral::{decompose_c, eigen_structure, jordan_basis};

#[derive(Parser, Debug)]
#[command(name = "radixrat", version, about = "Asymptotic expansions of running sums of radix-rational sequences")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Numerical tolerance for rank and modulus decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Depth of coefficient grids (nodes k/B^depth).
    #[arg(long, global = true, default_value_t = 12)]
    depth: u32,
    /// Directory for the JSON report and CSV files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recorded in the report; every computation is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Longest product length for the JSR bounds.
    #[arg(long = "T", global = true, default_value_t = 8)]
    t: u32,
    /// Largest number of products enumerated per length.
    #[arg(long, global = true, default_value_t = crate::jsr::DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and check a representation file.
    Validate { path: PathBuf },
    /// JSR estimate, Lie report, eigenvalues, Jordan chains and the decomposition of C.
    Analyze { path: PathBuf },
    /// Asymptotic expansion and coefficient grids.
    Expand {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Integers)]
        mode: Mode,
    },
    /// Compare 𝚺_N with the expansion for N up to --nmax.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = 1 << 14)]
        nmax: u64,
        /// An integer-mode expansion report to check against the recomputed one.
        #[arg(long)]
        expansion: Option<PathBuf>,
    },
    /// Guess a representation from values.
    Infer {
        /// popcount, constant, identity, thue-morse, rudin-shapiro or period-doubling.
        #[arg(long, conflicts_with = "values")]
        generator: Option<Generator>,
        /// JSON array of the values u(0), u(1), ... (integers or "p/q").
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        radix: u32,
        #[arg(long, default_value_t = 8)]
        max_level: u32,
        #[arg(long, default_value_t = 32)]
        horizon: usize,
    },
    /// Cascade iteration for one chain's dilation system.
    Cascade {
        path: PathBuf,
        #[arg(long, default_value_t = 20)]
        iters: u32,
        /// Index into the Jordan basis, dominant chains first.
        #[arg(long, default_value_t = 0)]
        chain: usize,
    },
    /// λ_T for one product length and norm, with the lower bound.
    Jsr {
        path: PathBuf,
        #[arg(long, default_value = "one")]
        norm: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Words,
    Integers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Generator {
    Popcount,
    Constant,
    Identity,
    ThueMorse,
    RudinShapiro,
    PeriodDoubling,
}

impl Generator {
    fn value(self, n: u64) -> Rational {
        let sign = |odd: bool| int(if odd { -1 } else { 1 });
        match self {
            Generator::Popcount => int(n.count_ones() as i64),
            Generator::Constant => int(1),
            Generator::Identity => Rational::from_integer((n as i128).into()),
            Generator::ThueMorse => sign(n.count_ones() % 2 == 1),
            Generator::RudinShapiro => sign((n & (n >> 1)).count_ones() % 2 == 1),
            Generator::PeriodDoubling => int(((n + 1).trailing_zeros() % 2) as i64),
        }
    }
}

/// Defaults of every tunable, echoed in each report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub tol: f64,
    pub depth: u32,
    #[serde(rename = "T")]
    pub t: u32,
    pub budget: u128,
    pub seed: u64,
    pub out: Option<String>,
}

impl RunConfig {
    fn jsr(&self) -> JsrConfig {
        JsrConfig { budget: self.budget, t_max: self.t, tol: self.tol }
    }

    fn expansion(&self) -> ExpansionConfig {
        ExpansionConfig { depth: self.depth, tol: self.tol, ..ExpansionConfig::default() }
    }
}

struct Output {
    dir: Option<PathBuf>,
    /// (file name, contents) written next to the report.
    files: Vec<(String, String)>,
}

impl Output {
    fn emit<S: Serialize>(&self, name: &str, report: &S) -> Result<()> {
        let mut json = serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
        json.push('\n');
        match &self.dir {
            None => print!("{json}"),
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
                write_file(&dir.join(format!("{name}.json")), &json)?;
                for (f, text) in &self.files {
                    write_file(&dir.join(f), text)?;
                }
                println!("wrote {}", dir.join(format!("{name}.json")).display());
            }
        }
        Ok(())
    }
}

fn io_err(p: &Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", p.display()))
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    fs::write(p, text).map_err(|e| io_err(p, e))
}

/// Exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSolutionGuarantee { .. } => 2,
        _ => 1,
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn read_rep(path: &Path) -> Result<AnyRep> {
    RepFile::read(path)?.to_rep()
}

macro_rules! with_rep {
    ($rep:expr, $r:ident => $body:expr) => {
        match $rep {
            AnyRep::Rational($r) => $body,
            AnyRep::Complex($r) => $body,
        }
    };
}

fn dispatch(cli: Cli) -> Result<i32> {
    let cfg = RunConfig {
        tol: cli.tol,
        depth: cli.depth,
        t: cli.t,
        budget: cli.budget,
        seed: cli.seed,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
    };
    let mut out = Output { dir: cli.out.clone(), files: vec![] };
    match cli.cmd {
        Cmd::Validate { path } => validate(&path, &cfg),
        Cmd::Analyze { path } => {
            let rep = read_rep(&path)?;
            let report = with_rep!(&rep, r => analyze(r, &cfg))?;
            out.emit("analyze", &report)?;
            Ok(0)
        }
        Cmd::Expand { path, mode } => {
            let rep = read_rep(&path)?;
            let (report, grids) = with_rep!(&rep, r => expand(r, mode, &cfg))?;
            out.files = grids;
            out.emit("expand", &Reported { config: &cfg, report })?;
            Ok(0)
        }
        Cmd::Verify { path, nmax, expansion } => {
            let rep = read_rep(&path)?;
            let (report, files) = with_rep!(&rep, r => verify(r, nmax, expansion.as_deref(), &cfg))?;
            out.files = files;
            out.emit("verify", &report)?;
            Ok(if report.comparison.pass() { 0 } else { 3 })
        }
        Cmd::Infer { generator, values, radix, max_level, horizon } => {
            let rep = infer(generator, values.as_deref(), radix, max_level, horizon)?;
            let text = RepFile::from_rational(&rep).to_json();
            match &cli.out {
                None => print!("{text}"),
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
                    let p = dir.join("inferred.json");
                    write_file(&p, &text)?;
                    println!("wrote {}", p.display());
                }
            }
            Ok(0)
        }
        Cmd::Cascade { path, iters, chain } => {
            let rep = read_rep(&path)?;
            let (report, csv) = with_rep!(&rep, r => cascade(r, chain, iters, &cfg))?;
            out.files = vec![("cascade_grid.csv".into(), csv)];
            out.emit("cascade", &report)?;
            Ok(0)
        }
        Cmd::Jsr { path, norm } => {
            let rep = read_rep(&path)?;
            let kind = NormKind::parse(&norm)?;
            let report = with_rep!(&rep, r => jsr(r, kind, &cfg))?;
            out.emit("jsr", &report)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct Reported<'a, R: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    report: R,
}

#[derive(Serialize)]
struct ValidateReport {
    name: Option<String>,
    radix: u32,
    dim: usize,
    issues: Vec<String>,
    insensitive: Option<bool>,
    #[serde(rename = "Q")]
    q: Option<Vec<Vec<String>>>,
}

fn validate(path: &Path, cfg: &RunConfig) -> Result<i32> {
    let file = RepFile::read(path)?;
    let issues = file.check();
    if !issues.is_empty() {
        for i in &issues {
            eprintln!("invalid: {i}");
        }
        return Ok(1);
    }
    let rep = file.to_rep()?;
    let d = with_rep!(&rep, r => r.validate());
    println!("insensitive: {}", d.insensitive.unwrap_or(false));
    if let Some(q) = &d.q {
        println!("Q:");
        for row in q {
            println!("  [{}]", row.join(", "));
        }
    }
    if let Some(dir) = &cfg.out {
        let out = Output { dir: Some(PathBuf::from(dir)), files: vec![] };
        let report = ValidateReport {
            name: rep.name().map(str::to_string),
            radix: rep.radix(),
            dim: rep.dim(),
            issues: d.issues.clone(),
            insensitive: d.insensitive,
            q: d.q.clone(),
        };
        out.emit("validate", &Reported { config: cfg, report })?;
    }
    Ok(if d.valid() { 0 } else { 1 })
}

#[derive(Serialize)]
struct EigenReport {
    re: f64,
    im: f64,
    modulus: f64,
    exact: Option<String>,
    multiplicity: usize,
}

#[derive(Serialize)]
struct ChainOut {
    re: f64,
    im: f64,
    height: usize,
    /// V^(0)..V^(ν−1), each entry [re, im].
    vectors: Vec<Vec<[f64; 2]>>,
    exact_vectors: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct LieOut {
    dimension: usize,
    derived_dims: Vec<usize>,
    solvable: bool,
}

#[derive(Serialize)]
struct DecompositionOut {
    gamma: Vec<Vec<[f64; 2]>>,
    exact_gamma: Option<Vec<Vec<String>>>,
    residual: f64,
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    config: &'a RunConfig,
    name: Option<String>,
    radix: u32,
    dim: usize,
    insensitive: bool,
    jsr: JsrEstimate,
    lie: LieOut,
    eigenvalues: Vec<EigenReport>,
    chains: Vec<ChainOut>,
    decomposition: DecompositionOut,
}

fn strings(v: &[Vec<Rational>]) -> Vec<Vec<String>> {
    v.iter().map(|r| r.iter().map(fmt_rational).collect()).collect()
}

fn pairs(v: &[Vec<crate::exactnum::C64>]) -> Vec<Vec<[f64; 2]>> {
    v.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn analyze<'a, T: Field>(rep: &LinearRep<T>, cfg: &'a RunConfig) -> Result<AnalyzeReport<'a>> {
    let q = rep.q();
    let jsr = jsr_estimate(rep, &cfg.jsr())?;
    let lie = lie_algebra_closure(rep.mats(), cfg.tol)?;
    let es = eigen_structure(&q, cfg.tol, &rep.eigen_hints)?;
    let chains = jordan_basis(&q, cfg.tol, &rep.eigen_hints)?;
    let c: Vec<_> = rep.c().iter().map(|x| x.to_c64()).collect();
    let exact_c: Option<Vec<Rational>> = rep.c().iter().map(|x| x.to_rational()).collect();
    let dec = decompose_c(&chains, &c, exact_c.as_deref())?;
    Ok(AnalyzeReport {
        config: cfg,
        name: rep.name.clone(),
        radix: rep.radix(),
        dim: rep.dim(),
        insensitive: rep.is_insensitive(),
        jsr,
        lie: LieOut { dimension: lie.basis.len(), derived_dims: lie.derived_dims, solvable: lie.solvable },
        eigenvalues: es
            .eigenvalues
            .iter()
            .map(|e| EigenReport {
                re: e.value.re,
                im: e.value.im,
                modulus: e.rho(),
                exact: e.exact.as_ref().map(fmt_rational),
                multiplicity: e.multiplicity,
            })
            .collect(),
        chains: chains
            .iter()
            .map(|ch| ChainOut {
                re: ch.value().re,
                im: ch.value().im,
                height: ch.height(),
                vectors: pairs(&ch.vectors),
                exact_vectors: ch.exact_vectors.as_deref().map(strings),
            })
            .collect(),
        decomposition: DecompositionOut {
            gamma: pairs(&dec.gamma),
            exact_gamma: dec.exact_gamma.as_deref().map(strings),
            residual: dec.residual,
        },
    })
}

fn expand<T: Field>(rep: &LinearRep<T>, mode: Mode, cfg: &RunConfig) -> Result<(ExpansionReport, Vec<(String, String)>)> {
    let jsr = jsr_estimate(rep, &cfg.jsr())?;
    let ecfg = cfg.expansion();
    let (report, core) = match mode {
        Mode::Words => {
            let e = lrtoae1_with(rep, &jsr, &ecfg)?;
            (e.report(), e.core)
        }
        Mode::Integers => {
            let e = lrtoae2_with(rep, &jsr, &ecfg)?;
            (e.report(), e.core)
        }
    };
    let grids = core.coefficients.iter().enumerate().map(|(i, c)| (grid_file_name(i), c.grid.to_csv())).collect();
    Ok((report, grids))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: &'a RunConfig,
    name: Option<String>,
    expansion: ExpansionReport,
    comparison: ComparisonReport,
    /// Absent when the expansion has no terms.
    periodic: Option<EmpiricalPeriodic>,
}

fn verify<'a, T: Field>(
    rep: &LinearRep<T>,
    nmax: u64,
    expected: Option<&Path>,
    cfg: &'a RunConfig,
) -> Result<(VerifyReport<'a>, Vec<(String, String)>)> {
    let jsr = jsr_estimate(rep, &cfg.jsr())?;
    let exp = lrtoae2_with(rep, &jsr, &cfg.expansion())?;
    let report = exp.report();
    if let Some(p) = expected {
        check_expansion_file(p, &Reported { config: cfg, report: report.clone() })?;
    }
    let range = NRange::new(rep.radix() as u64, nmax);
    let comparison = compare_integers(rep, &exp, range)?;
    let row = Projection::Row(rep.l().iter().map(|x| x.to_c64()).collect());
    let periodic = if exp.core.terms.is_empty() { None } else { Some(empirical_periodic(rep, &exp, range, &row)?) };
    let mut files = vec![("comparison.csv".to_string(), comparison.to_csv())];
    if let Some(p) = &periodic {
        files.push(("scatter.csv".into(), p.to_csv()));
    }
    Ok((VerifyReport { config: cfg, name: rep.name.clone(), expansion: report, comparison, periodic }, files))
}

/// The file must hold the report `expand --mode integers` would write now.
fn check_expansion_file<S: Serialize>(path: &Path, fresh: &S) -> Result<()> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let given: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let want = serde_json::to_value(fresh).map_err(|e| Error::Parse(e.to_string()))?;
    let strip = |mut v: serde_json::Value| {
        if let Some(o) = v.as_object_mut() {
            o.remove("config");
        }
        v
    };
    if strip(given) != strip(want) {
        return Err(Error::InvalidRep(format!("{} does not match the recomputed expansion", path.display())));
    }
    Ok(())
}

fn infer(
    generator: Option<Generator>,
    values: Option<&Path>,
    radix: u32,
    max_level: u32,
    horizon: usize,
) -> Result<LinearRep<Rational>> {
    if radix < 2 {
        return Err(Error::OutOfRange(format!("radix {radix} < 2")));
    }
    match (generator, values) {
        (Some(g), _) => {
            let rep = infer_representation(&|n| g.value(n), radix, max_level, horizon)?;
            let name = g.to_possible_value().map(|v| v.get_name().replace('-', "_")).unwrap_or_default();
            Ok(rep.named(&name))
        }
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            let entries: Vec<Entry> =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            let vals: Vec<Rational> = entries
                .iter()
                .enumerate()
                .map(|(i, e)| match e {
                    Entry::Int(n) => Ok(int(*n)),
                    Entry::Text(s) => parse_rational(s),
                    _ => Err(Error::Parse(format!("value {i} is not an integer or \"p/q\""))),
                })
                .collect::<Result<_>>()?;
            // deepest level whose windows stay inside the data
            let b = radix as u64;
            let mut level = 0;
            while level < max_level
                && b.checked_pow(level + 1).and_then(|s| s.checked_mul(horizon as u64)).map_or(false, |n| n <= vals.len() as u64)
            {
                level += 1;
            }
            if (horizon as u64) > vals.len() as u64 {
                return Err(Error::OutOfRange(format!("{} values, horizon {horizon}", vals.len())));
            }
            infer_representation(&|n| vals[n as usize].clone(), radix, level, horizon)
        }
        (None, None) => Err(Error::Parse("infer needs --generator or --values".into())),
    }
}

#[derive(Serialize)]
struct CascadeReport<'a> {
    config: &'a RunConfig,
    chain: usize,
    eigenvalue: [f64; 2],
    iterations: u32,
    /// sup distance between successive iterates.
    differences: Vec<f64>,
    /// Ratios of successive differences.
    ratios: Vec<f64>,
    residual: f64,
    /// sup distance to the exactly unrolled grid.
    distance_to_exact: f64,
}

fn cascade<'a, T: Field>(rep: &LinearRep<T>, chain: usize, iters: u32, cfg: &'a RunConfig) -> Result<(CascadeReport<'a>, String)> {
    let jsr = jsr_estimate(rep, &cfg.jsr())?;
    let chains = jordan_basis(&rep.q(), cfg.tol, &rep.eigen_hints)?;
    let ch = chains.get(chain).ok_or_else(|| Error::OutOfRange(format!("no chain {chain} (have {})", chains.len())))?;
    let mut sys = DilationSystem::from_chain(rep, ch)?;
    sys.check_admissible(&jsr, false)?;
    let (grid, differences) = sys.cascade_grid(cfg.depth, iters)?;
    let exact = sys.grid(cfg.depth)?;
    let ratios = differences.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect();
    Ok((
        CascadeReport {
            config: cfg,
            chain,
            eigenvalue: [ch.value().re, ch.value().im],
            iterations: iters,
            differences,
            ratios,
            residual: sys.residual(&grid),
            distance_to_exact: grid.sup_distance(&exact),
        },
        grid.to_csv(),
    ))
}

#[derive(Serialize)]
struct JsrReport<'a> {
    config: &'a RunConfig,
    /// Length used: --T, lowered until B^T fits the budget.
    #[serde(rename = "T")]
    t: u32,
    norm: String,
    lambda_t: f64,
    word: Vec<u32>,
    lower: f64,
    lower_word: Vec<u32>,
    estimate: JsrEstimate,
}

fn jsr<'a, T: Field>(rep: &LinearRep<T>, kind: NormKind, cfg: &'a RunConfig) -> Result<JsrReport<'a>> {
    // longest affordable length not above --T
    let b = rep.radix() as u128;
    let mut t = 1;
    while t < cfg.t && b.checked_pow(t + 1).map_or(false, |n| n <= cfg.budget) {
        t += 1;
    }
    let (lambda_t, word) = lambda_t_word(rep, t, kind, cfg.budget)?;
    let (lower, lower_word) = jsr_lower_bound_word(rep, t, cfg.budget)?;
    Ok(JsrReport {
        config: cfg,
        t,
        norm: format!("{kind:?}").to_lowercase(),
        lambda_t,
        word,
        lower,
        lower_word,
        estimate: jsr_estimate(rep, &cfg.jsr())?,
    })
}
