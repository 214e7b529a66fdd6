//! Command-line front end: argument model, config files and command execution.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 capacity or I/O error.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characters::Character;
use crate::context::Ctx;
use crate::cyclotomic::CycloNum;
use crate::error::{Error, Result};
use crate::field::cache::{self, CacheStatus};
use crate::field::{split_prime_power, FieldElem};
use crate::hypergeometric::{
    appell_f2_point_sum, gauss_2f1, lauricella_fa, GaussRoute, Route, SeriesParams,
};
use crate::identities::sweep::{self, Mode, SweepConfig, SweepSummary};
use crate::identities::{Form, IdentityId, VerificationReport};

/// Version of the JSON-lines report schema emitted by `verify` and `eval`.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

/// Fully resolved invocation. Serializes to TOML for `--dump-config` and
/// `ffhyper run <file>`.
#[derive(Parser, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[command(name = "ffhyper", version, about = "Exact hypergeometric character sums over finite fields")]
pub struct RunConfig {
    /// Directory of persisted field caches.
    #[arg(long, global = true, env = "FFHYPER_CACHE_DIR")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Print the resolved configuration as TOML instead of running it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub dump_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Build or verify the on-disk cache of a field.
    Field(FieldArgs),
    /// Evaluate a series at one parameter set.
    Eval(EvalArgs),
    /// Verify identities over exhaustive or sampled instances.
    Verify(VerifyArgs),
    /// Time the point-sum and character-sum routes on a seeded batch.
    Bench(BenchArgs),
    /// Export tables as CSV or JSON.
    #[command(subcommand)]
    Export(ExportCommand),
    /// Run a configuration file written by `--dump-config`.
    Run {
        path: PathBuf,
    },
}

#[derive(Args, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Field size (an odd prime power).
    #[arg(long, conflicts_with = "p")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    /// Characteristic.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    /// Extension degree, used with `--p`.
    #[arg(long, default_value_t = 1, requires = "p")]
    pub r: u32,
}

impl FieldSpec {
    fn resolve(&self) -> Result<(u32, u32)> {
        match (self.q, self.p) {
            (Some(q), _) => split_prime_power(q),
            (None, Some(p)) => Ok((p, self.r)),
            (None, None) => Err(Error::Parse("one of --q or --p is required".into())),
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldSpec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    /// Lauricella `F_A^(n)`.
    Fa,
    /// Gaussian `2F1`; `--A --B --C --x` each take one value.
    #[value(name = "2f1")]
    #[serde(rename = "2f1")]
    Gauss,
    /// Appell `F2` as the unnormalized point sum (equals `q^2 F_A^(2)`).
    F2Point,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalRoute {
    Direct,
    Charsum,
    Product,
    Auto,
    /// Direct and charsum, with an agreement flag.
    Both,
}

#[derive(Args, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub field: FieldSpec,
    /// Expected number of variables; inferred from the lists when omitted.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "fa")]
    pub series: Series,
    /// Top character, e.g. `chi1` or `eps`.
    #[arg(long = "A", alias = "a")]
    pub a: String,
    /// Comma-separated characters B_1..B_n.
    #[arg(long = "B", alias = "b")]
    pub b: String,
    /// Comma-separated characters C_1..C_n.
    #[arg(long = "C", alias = "c")]
    pub c: String,
    /// Comma-separated field elements x_1..x_n (integers, `2x+1`, or `#k` for the element with index k).
    #[arg(long)]
    pub x: String,
    #[arg(long, value_enum, default_value = "both")]
    pub route: EvalRoute,
}

#[derive(Args, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Identities: names, `all`, `reduction` or `genfunc`, comma-separated.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Field sizes, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Enumerate every admissible instance.
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Number of random admissible instances per identity and field (default 100).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
    pub seed: u64,
    /// Largest exhaustive enumeration allowed per identity and field.
    #[arg(long, default_value_t = sweep::DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..=i64::MAX as u64))]
    pub budget: u64,
    #[arg(long)]
    pub fail_fast: bool,
    /// Right-hand sides to check.
    #[arg(long, default_value = "corrected", value_parser = ["printed", "corrected"])]
    pub form: String,
    /// Skip the floating-point consistency check.
    #[arg(long)]
    pub no_mirror: bool,
    /// Add `elapsed_us` to each check (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 11)]
    pub q: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u64).range(0..=i64::MAX as u64))]
    pub seed: u64,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportCommand {
    /// The table of binomial coefficients `binom(chi_row, chi_col)`.
    Binom(FieldArgs),
    /// The JSON mirror of a field cache.
    Field(FieldArgs),
}

impl RunConfig {
    /// Makes paths absolute against the current directory.
    pub fn resolve(mut self) -> Result<RunConfig> {
        if let Some(dir) = &self.cache_dir {
            if dir.is_relative() {
                self.cache_dir = Some(std::env::current_dir()?.join(dir));
            }
        }
        if let Command::Run { path } = &mut self.command {
            if path.is_relative() {
                *path = std::env::current_dir()?.join(&*path);
            }
        }
        Ok(self)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("config serialization: {e}")))
    }

    pub fn from_toml(s: &str) -> Result<RunConfig> {
        toml::from_str(s).map_err(|e| Error::Parse(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        RunConfig::from_toml(&std::fs::read_to_string(path)?)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_)
        | Error::Parse(_)
        | Error::FieldMismatch(_)
        | Error::DivisionByZero => EXIT_USAGE,
        Error::Capacity(_) | Error::Cache(_) | Error::Io(_) | Error::Json(_) | Error::Internal(_) => {
            EXIT_CAPACITY
        }
    }
}

/// Parses the process arguments and runs, returning the exit code.
pub fn main() -> u8 {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout);
    let code = match run(cfg, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    let _ = out.flush();
    code
}

/// Runs one resolved configuration, writing results to `out`.
pub fn run(cfg: RunConfig, out: &mut (dyn Write + Send)) -> Result<u8> {
    let mut cfg = cfg.resolve()?;
    if let Command::Run { path } = &cfg.command {
        let loaded = RunConfig::load(path)?;
        if matches!(loaded.command, Command::Run { .. }) {
            return Err(Error::Parse("a config file cannot itself be a `run` command".into()));
        }
        cfg = RunConfig { dump_config: cfg.dump_config, ..loaded }.resolve()?;
    }
    if cfg.dump_config {
        out.write_all(cfg.to_toml()?.as_bytes())?;
        return Ok(EXIT_OK);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        if j == 0 {
            return Err(Error::Parse("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| execute(&cfg, out))
}

fn execute(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> Result<u8> {
    match &cfg.command {
        Command::Field(a) => cmd_field(cfg, a, out),
        Command::Eval(a) => cmd_eval(cfg, a, out),
        Command::Verify(a) => cmd_verify(cfg, a, out),
        Command::Bench(a) => cmd_bench(cfg, a, out),
        Command::Export(ExportCommand::Binom(a)) => cmd_export_binom(cfg, a, out),
        Command::Export(ExportCommand::Field(a)) => cmd_export_field(cfg, a, out),
        Command::Run { .. } => Err(Error::Internal("unresolved run command".into())),
    }
}

fn default_cache_dir() -> PathBuf {
    PathBuf::from(".ffhyper-cache")
}

/// A context for `(p, r)`, read from or persisted to the cache directory
/// when one is configured.
fn context(cfg: &RunConfig, p: u32, r: u32) -> Result<Ctx> {
    match &cfg.cache_dir {
        Some(dir) => Ctx::from_field(cache::load_or_build(dir, p, r)?),
        None => Ctx::new(p, r),
    }
}

fn context_for_q(cfg: &RunConfig, q: u32) -> Result<Ctx> {
    let (p, r) = split_prime_power(q)?;
    context(cfg, p, r)
}

fn cmd_field(cfg: &RunConfig, a: &FieldArgs, out: &mut (dyn Write + Send)) -> Result<u8> {
    let (p, r) = a.field.resolve()?;
    let dir = cfg.cache_dir.clone().unwrap_or_else(default_cache_dir);
    let (ctx, status) = cache::write_cache(&dir, p, r)?;
    let path = cache::cache_path(&dir, p, r);
    let checksum = cache::checksum_hex(&ctx);
    let status = match status {
        CacheStatus::Created => "created",
        CacheStatus::Unchanged => "unchanged",
        CacheStatus::Rebuilt => "rebuilt",
    };
    match cfg.format.unwrap_or(Format::Human) {
        Format::Json => {
            let v = serde_json::json!({
                "field": ctx.id().to_string(),
                "q": ctx.q(),
                "status": status,
                "path": path,
                "checksum": checksum,
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "field,q,status,path,checksum")?;
            writeln!(out, "{},{},{status},{},{checksum}", ctx.id(), ctx.q(), path.display())?;
        }
        Format::Human => {
            let msg = match status {
                "unchanged" => "cache valid, unchanged",
                "created" => "cache created",
                _ => "cache rebuilt",
            };
            writeln!(out, "{}: {msg} ({})", ctx.id(), path.display())?;
            writeln!(out, "sha256 {checksum}")?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EvalResult {
    route: &'static str,
    value: CycloNum,
    embedding: [f64; 2],
}

fn eval_one(ctx: &Ctx, a: &EvalArgs, route: EvalRoute) -> Result<(&'static str, CycloNum)> {
    let f = ctx.field();
    let p = SeriesParams::parse(ctx, &a.a, &a.b, &a.c, &a.x)?;
    let name = match route {
        EvalRoute::Direct => "direct",
        EvalRoute::Charsum => "charsum",
        EvalRoute::Product => "product",
        EvalRoute::Auto => "auto",
        EvalRoute::Both => unreachable!(),
    };
    let v = match a.series {
        Series::Fa => {
            let r = match route {
                EvalRoute::Direct => Route::Direct,
                EvalRoute::Charsum => Route::Charsum,
                EvalRoute::Product => Route::BinomialProduct,
                _ => Route::Auto,
            };
            lauricella_fa(ctx, &p, r)?
        }
        Series::Gauss => {
            if p.n() != 1 {
                return Err(Error::Parse("2f1 takes a single B, C and x".into()));
            }
            let r = match route {
                EvalRoute::Direct => GaussRoute::Direct,
                EvalRoute::Charsum | EvalRoute::Auto => GaussRoute::Charsum,
                _ => return Err(Error::Parse("2f1 supports the direct and charsum routes".into())),
            };
            gauss_2f1(ctx, p.a, p.bs[0], p.cs[0], p.xs[0], r)?
        }
        Series::F2Point => {
            if p.n() != 2 {
                return Err(Error::Parse("f2-point takes exactly two B, C and x".into()));
            }
            if route != EvalRoute::Direct && route != EvalRoute::Auto {
                return Err(Error::Parse("f2-point is a point sum; use --route direct".into()));
            }
            let _ = f;
            appell_f2_point_sum(ctx, p.a, [p.bs[0], p.bs[1]], [p.cs[0], p.cs[1]], [p.xs[0], p.xs[1]])?
        }
    };
    Ok((name, v))
}

fn cmd_eval(cfg: &RunConfig, a: &EvalArgs, out: &mut (dyn Write + Send)) -> Result<u8> {
    let (p, r) = a.field.resolve()?;
    let ctx = context(cfg, p, r)?;
    let params = SeriesParams::parse(&ctx, &a.a, &a.b, &a.c, &a.x)?;
    if let Some(n) = a.n {
        if n != params.n() {
            return Err(Error::Parse(format!("--n {n} but the lists have {} entries", params.n())));
        }
    }
    let routes = match (a.route, a.series) {
        (EvalRoute::Both, Series::F2Point) => vec![EvalRoute::Direct],
        (EvalRoute::Both, _) => vec![EvalRoute::Direct, EvalRoute::Charsum],
        (r, _) => vec![r],
    };
    let mut results = Vec::new();
    for r in routes {
        let (route, value) = eval_one(&ctx, a, r)?;
        let z = value.embed();
        results.push(EvalResult { route, value, embedding: [z.re, z.im] });
    }
    let agree = (results.len() > 1).then(|| results.windows(2).all(|w| w[0].value == w[1].value));
    match cfg.format.unwrap_or(Format::Human) {
        Format::Json => {
            let v = serde_json::json!({
                "schema": SCHEMA_VERSION,
                "series": a.series,
                "field": ctx.field().id().to_string(),
                "q": ctx.q(),
                "n": params.n(),
                "params": params.to_json(&ctx),
                "results": results,
                "agree": agree,
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "route,value,re,im")?;
            for r in &results {
                writeln!(out, "{},{},{},{}", r.route, r.value.to_strings().join(" "), r.embedding[0], r.embedding[1])?;
            }
        }
        Format::Human => {
            let label = match a.series {
                Series::Fa => format!("F_A^({})", params.n()),
                Series::Gauss => "2F1".to_string(),
                Series::F2Point => "F2 (point sum)".to_string(),
            };
            writeln!(out, "{label} over {}", ctx.field().id())?;
            for r in &results {
                writeln!(out, "  {:<8} {}", r.route, r.value)?;
                writeln!(out, "  {:<8} ~ {:.9} {:+.9}i", "", r.embedding[0], r.embedding[1])?;
            }
            if let Some(ok) = agree {
                writeln!(out, "  agree    {ok}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckLine<'a> {
    schema: u32,
    kind: &'static str,
    #[serde(flatten)]
    report: &'a VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_us: Option<u64>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    schema: u32,
    kind: &'static str,
    ok: bool,
    checked: u64,
    failed: u64,
    cells: &'a [SweepSummary],
}

fn cmd_verify(cfg: &RunConfig, a: &VerifyArgs, out: &mut (dyn Write + Send)) -> Result<u8> {
    let suite = IdentityId::parse_suite(&a.suite)?;
    let form: Form = a.form.parse()?;
    for &q in &a.q {
        split_prime_power(q)?;
    }
    let mode = if a.exhaustive {
        Mode::Exhaustive
    } else {
        Mode::Sample { count: a.samples.unwrap_or(100), seed: a.seed }
    };
    let mut sc = SweepConfig::new(suite, a.q.clone(), a.n, mode);
    sc.form = form;
    sc.mirror = !a.no_mirror;
    sc.budget = a.budget;
    sc.fail_fast = a.fail_fast;
    let format = cfg.format.unwrap_or(Format::Json);
    let mut io_err = None;
    let summaries = sweep::sweep_with(
        &sc,
        |q| context_for_q(cfg, q),
        |r| {
            if io_err.is_some() {
                return;
            }
            let res = match format {
                Format::Json => {
                    let line = CheckLine {
                        schema: SCHEMA_VERSION,
                        kind: "check",
                        report: r,
                        elapsed_us: a.timings.then_some(r.elapsed.as_micros() as u64),
                    };
                    serde_json::to_string(&line).map_err(Error::from).and_then(|s| Ok(writeln!(out, "{s}")?))
                }
                Format::Csv => {
                    let p = &r.params;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        r.identity,
                        r.q,
                        r.n,
                        p.a,
                        p.bs.join(" "),
                        p.cs.join(" "),
                        p.x.join(" "),
                        r.k.map(|k| k.to_string()).unwrap_or_default(),
                        r.l.map(|l| l.to_string()).unwrap_or_default(),
                        r.t.clone().unwrap_or_default(),
                        sweep::passes(r),
                    )
                    .map_err(Error::from)
                }
                Format::Human => {
                    if sweep::passes(r) {
                        Ok(())
                    } else {
                        let mut slots = String::new();
                        for (name, v) in [("k", r.k.map(|k| k.to_string())), ("l", r.l.map(|l| l.to_string())), ("t", r.t.clone())] {
                            if let Some(v) = v {
                                slots.push_str(&format!(" {name}={v}"));
                            }
                        }
                        writeln!(
                            out,
                            "FAIL {} q={} A={} B={} C={} x={}{slots} lhs={} rhs={}",
                            r.identity,
                            r.q,
                            r.params.a,
                            r.params.bs.join(","),
                            r.params.cs.join(","),
                            r.params.x.join(","),
                            r.lhs,
                            r.rhs
                        )
                        .map_err(Error::from)
                    }
                }
            };
            if let Err(e) = res {
                io_err = Some(e);
            }
        },
    );
    if let Some(e) = io_err {
        return Err(e);
    }
    let summaries = summaries?;
    let checked = summaries.iter().map(|s| s.checked).sum();
    let failed: u64 = summaries.iter().map(|s| s.failed).sum();
    match format {
        Format::Json | Format::Csv => {
            let line = SummaryLine {
                schema: SCHEMA_VERSION,
                kind: "summary",
                ok: failed == 0,
                checked,
                failed,
                cells: &summaries,
            };
            writeln!(out, "{}", serde_json::to_string(&line)?)?;
        }
        Format::Human => {
            for s in &summaries {
                writeln!(
                    out,
                    "{:<18} q={:<5} n={} {} checked={} passed={} failed={} rejected={}",
                    s.identity, s.q, s.n, s.form, s.checked, s.passed, s.failed, s.rejected
                )?;
            }
            writeln!(out, "{}", if failed == 0 { "all checks passed" } else { "FAILURES" })?;
        }
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

/// A seeded batch of `F_A^(n)` parameter sets with nonzero arguments.
pub fn bench_batch(ctx: &Ctx, n: usize, count: usize, seed: u64) -> Vec<SeriesParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = ctx.m() as i64;
    let q = ctx.q();
    let f = ctx.field();
    (0..count)
        .map(|_| {
            let mut ch = || Character::new(f, rng.gen_range(0..m));
            let a = ch();
            let bs = (0..n).map(|_| ch()).collect();
            let cs = (0..n).map(|_| ch()).collect();
            let xs = (0..n).map(|_| FieldElem(rng.gen_range(1..q))).collect();
            SeriesParams::new(a, bs, cs, xs).expect("n >= 1")
        })
        .collect()
}

/// Timings of one bench run, in seconds.
#[derive(Debug, Clone)]
pub struct BenchResult {
    pub table_build: f64,
    pub direct: f64,
    pub charsum: f64,
    pub agree: bool,
}

/// Times both routes sequentially over the same batch; the table is built
/// (and timed) before the charsum pass.
pub fn bench(ctx: &Ctx, batch: &[SeriesParams]) -> Result<BenchResult> {
    let t0 = Instant::now();
    ctx.table()?;
    let table_build = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    let direct = batch.iter().map(|p| lauricella_fa(ctx, p, Route::Direct)).collect::<Result<Vec<_>>>()?;
    let d = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    let charsum = batch.iter().map(|p| lauricella_fa(ctx, p, Route::Charsum)).collect::<Result<Vec<_>>>()?;
    let c = t0.elapsed().as_secs_f64();
    Ok(BenchResult { table_build, direct: d, charsum: c, agree: direct == charsum })
}

fn cmd_bench(cfg: &RunConfig, a: &BenchArgs, out: &mut (dyn Write + Send)) -> Result<u8> {
    let ctx = context_for_q(cfg, a.q)?;
    let batch = bench_batch(&ctx, a.n as usize, a.count, a.seed);
    let r = bench(&ctx, &batch)?;
    let per = |s: f64| if a.count == 0 { 0.0 } else { s * 1e6 / a.count as f64 };
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "route,q,n,instances,seconds,per_instance_us,agree")?;
            writeln!(out, "table_build,{},{},,{:.6},,", a.q, a.n, r.table_build)?;
            writeln!(out, "direct,{},{},{},{:.6},{:.3},{}", a.q, a.n, a.count, r.direct, per(r.direct), r.agree)?;
            writeln!(out, "charsum,{},{},{},{:.6},{:.3},{}", a.q, a.n, a.count, r.charsum, per(r.charsum), r.agree)?;
        }
        Format::Json => {
            let v = serde_json::json!({
                "q": a.q, "n": a.n, "instances": a.count, "seed": a.seed,
                "table_build_s": r.table_build, "direct_s": r.direct, "charsum_s": r.charsum,
                "agree": r.agree,
            });
            writeln!(out, "{v}")?;
        }
        Format::Human => {
            writeln!(out, "q={} n={} instances={} seed={}", a.q, a.n, a.count, a.seed)?;
            writeln!(out, "  table build {:>10.3} ms", r.table_build * 1e3)?;
            writeln!(out, "  direct      {:>10.3} ms", r.direct * 1e3)?;
            writeln!(out, "  charsum     {:>10.3} ms", r.charsum * 1e3)?;
            writeln!(out, "  agree       {}", r.agree)?;
        }
    }
    Ok(if r.agree { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_export_binom(cfg: &RunConfig, a: &FieldArgs, out: &mut (dyn Write + Send)) -> Result<u8> {
    let (p, r) = a.field.resolve()?;
    let ctx = context(cfg, p, r)?;
    let table = ctx.table()?;
    writeln!(out, "row,col,value,re,im")?;
    for i in 0..ctx.m() {
        for j in 0..ctx.m() {
            let v = table.entry(i, j);
            let z = v.embed();
            writeln!(out, "{i},{j},{},{},{}", v.to_strings().join(" "), z.re, z.im)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_export_field(cfg: &RunConfig, a: &FieldArgs, out: &mut (dyn Write + Send)) -> Result<u8> {
    let (p, r) = a.field.resolve()?;
    let ctx = context(cfg, p, r)?;
    writeln!(out, "{}", serde_json::to_string(&cache::to_json(ctx.field()))?)?;
    Ok(EXIT_OK)
}
