//! The `staircase` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;

use crate::accum::{acc, acc_inv, acc_equation_check, above_a_min, Branch};
use crate::capacity::{envelope, staircase_profile, Envelope};
use crate::cfrac::cf_expand;
use crate::classes::{from_pq, solutions_at, to_vector, QuasiPerfect};
use crate::cremona::{is_perfect, reduce_default};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, rat_int, QuadExt, Rational};
use crate::obstruct::{base_u_interval, is_center_blocking, principal_interval};
use crate::staircase::{
    base_block, build_staircase, corpus, ladder_class, limits, liveness_report, make_family, monotonicity, slope_condition,
    third_g, Base, Dir, Liveness, PreStaircase, SlopeVerdict,
};
use crate::symmetry::{deg_matrix_b, deg_matrix_refl, sharp, v, w, y, Flavor, GroupElem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "staircase", version, about = "Infinite staircases for ellipsoid embeddings into Hirzebruch surfaces")]
struct Cli {
    /// Digits after the decimal point in approximate output.
    #[arg(long, global = true, default_value_t = 30)]
    digits: usize,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Accumulation point acc(b).
    Acc {
        #[arg(long)]
        b: String,
    },
    /// b with acc(b) = p/q on the U and/or L branch.
    Accinv {
        #[arg(long)]
        pq: String,
        #[arg(long)]
        base: Option<Base>,
    },
    /// Quasi-perfect classes with center p/q.
    Class {
        #[arg(long)]
        pq: String,
        /// Also print the class vector and its Cremona reduction.
        #[arg(long)]
        reduce: bool,
    },
    /// Matrices of a symmetry and its action on classes.
    Symmetry {
        #[arg(long = "T", default_value = "id")]
        t: GroupElem,
        /// Apply T^# to the class with this center.
        #[arg(long)]
        pq: Option<String>,
    },
    /// Steps, limits and liveness of one pre-staircase.
    Family {
        #[command(flatten)]
        sel: Select,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
    },
    /// Verification suites over the corpus.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Envelope data of a staircase profile or of an explicit class list.
    Plot {
        #[command(flatten)]
        sel: Select,
        /// Comma separated centers; with this flag the staircase selection is ignored.
        #[arg(long)]
        pq: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        zmin: Option<String>,
        #[arg(long)]
        zmax: Option<String>,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        format: PlotFormat,
    },
    /// Integer tables.
    Tables {
        #[arg(long, value_enum)]
        name: Table,
        /// Number of rows.
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct Select {
    #[arg(long = "T", default_value = "id")]
    t: GroupElem,
    #[arg(long, default_value = "U")]
    base: Base,
    #[arg(long, default_value_t = 1)]
    n: i64,
    #[arg(long, default_value = "l")]
    dir: Dir,
    #[arg(long, default_value_t = 8)]
    steps: usize,
}

#[derive(Args, Debug, Clone)]
struct RangeArgs {
    /// Shift powers, e.g. `0..3` (inclusive).
    #[arg(long, default_value = "0..3", value_parser = parse_range_u32)]
    i: RangeInclusive<u32>,
    /// Blocking class indices, e.g. `0..5` (inclusive).
    #[arg(long, default_value = "0..5", value_parser = parse_range_i64)]
    n: RangeInclusive<i64>,
    #[arg(long, default_value_t = 8)]
    steps: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Perfect,
    Blocking,
    Live,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TextFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PlotFormat {
    Csv,
    Svg,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Table {
    /// The strands of the staircase at b = 1/3.
    G,
    /// y, v, w ladders.
    Y,
    /// Blocking classes B^U_n and B^L_n.
    Blocks,
    /// Degree matrices T*_B.
    Degree,
}

fn parse_range<T: std::str::FromStr>(s: &str) -> std::result::Result<RangeInclusive<T>, String> {
    let bad = || format!("bad range {s:?}, expected a..b or a");
    let s = s.trim();
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(a.parse().map_err(|_| bad())?..=b.parse().map_err(|_| bad())?)
        }
        None => {
            let a: T = s.parse().map_err(|_| bad())?;
            let b: T = s.parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
    }
}

fn parse_range_u32(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    parse_range(s)
}

fn parse_range_i64(s: &str) -> std::result::Result<RangeInclusive<i64>, String> {
    parse_range(s)
}

fn parse_pq(s: &str) -> Result<(BigInt, BigInt)> {
    let r = parse_rational(s)?;
    Ok((r.numer().clone(), r.denom().clone()))
}

fn parse_quad(s: &str) -> Result<QuadExt> {
    s.parse()
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                let r = dispatch(&cli, &mut w);
                if let Err(e) = w.flush() {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_FAIL;
                }
                r
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                return EXIT_FAIL;
            }
        },
        None => dispatch(&cli, stdout),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Run(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAIL
        }
    }
}

enum CliError {
    Usage(String),
    Run(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Domain(_) => CliError::Usage(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

type CliResult = std::result::Result<i32, CliError>;

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let digits = cli.digits;
    match &cli.cmd {
        Cmd::Acc { b } => cmd_acc(out, b, digits),
        Cmd::Accinv { pq, base } => cmd_accinv(out, pq, *base, digits),
        Cmd::Class { pq, reduce } => cmd_class(out, pq, *reduce),
        Cmd::Symmetry { t, pq } => cmd_symmetry(out, t, pq.as_deref()),
        Cmd::Family { sel, format } => cmd_family(out, sel, *format, digits),
        Cmd::Verify { suite, range } => cmd_verify(out, *suite, range),
        Cmd::Plot { sel, pq, b, zmin, zmax, format } => {
            cmd_plot(out, sel, pq.as_deref(), b.as_deref(), zmin.as_deref(), zmax.as_deref(), *format, digits)
        }
        Cmd::Tables { name, n } => cmd_tables(out, *name, *n),
    }
}

fn cmd_acc(out: &mut dyn Write, b: &str, digits: usize) -> CliResult {
    let b = parse_rational(b)?;
    let z = acc(&b)?;
    writeln!(out, "acc({b}) = {z}")?;
    writeln!(out, "         ~ {}", z.to_decimal(digits))?;
    Ok(EXIT_OK)
}

fn cmd_accinv(out: &mut dyn Write, pq: &str, base: Option<Base>, digits: usize) -> CliResult {
    let (p, q) = parse_pq(pq)?;
    let branches: Vec<Branch> = match base {
        Some(Base::U) => vec![Branch::U],
        Some(Base::L) => vec![Branch::L],
        None => vec![Branch::U, Branch::L],
    };
    let mut any = false;
    for br in branches {
        match acc_inv(&p, &q, br) {
            Ok(b) => {
                any = true;
                writeln!(out, "{br:?}: b = {b} ~ {}", b.to_decimal(digits))?;
            }
            Err(e) => writeln!(out, "{br:?}: {e}")?,
        }
    }
    Ok(if any { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_class(out: &mut dyn Write, pq: &str, reduce: bool) -> CliResult {
    let (p, q) = parse_pq(pq)?;
    let c = from_pq(&p, &q)?;
    writeln!(out, "{c}")?;
    for other in solutions_at(&p, &q) {
        if other != c {
            writeln!(out, "{other}")?;
        }
    }
    if reduce {
        let v = to_vector(&c)?;
        writeln!(out, "vector {v}")?;
        writeln!(out, "{}", reduce_default(&v))?;
    }
    Ok(EXIT_OK)
}

fn cmd_symmetry(out: &mut dyn Write, t: &GroupElem, pq: Option<&str>) -> CliResult {
    let m = t.matrix();
    writeln!(out, "T = {t}")?;
    writeln!(out, "matrix {m}  det {}", m.det())?;
    writeln!(out, "eps factor {:+}", t.eps_factor())?;
    writeln!(out, "T*_B {}", deg_matrix_b(t))?;
    for i in 1..=4 {
        writeln!(out, "T(v_{i}) = {}", m.act(&v(i)?))?;
    }
    if let Some(pq) = pq {
        let (p, q) = parse_pq(pq)?;
        let c = from_pq(&p, &q)?;
        writeln!(out, "{c} -> {}", sharp(t, &c)?)?;
    }
    Ok(EXIT_OK)
}

fn select(sel: &Select) -> Result<PreStaircase> {
    build_staircase(&make_family(sel.t, sel.base), sel.n, sel.dir, sel.steps.max(2))
}

fn cmd_family(out: &mut dyn Write, sel: &Select, format: TextFormat, digits: usize) -> CliResult {
    let sc = select(sel)?;
    let ld = limits(&sc)?;
    let perfect = certify(&sc);
    let report = liveness_report(&sc, perfect.is_ok());
    let mono = monotonicity(&sc).map(|m| format!("{m:?}")).unwrap_or_else(|e| e.to_string());
    match format {
        TextFormat::Text => {
            writeln!(out, "{}  nu = {}  eps = {:+}", sc.label(), sc.nu, sc.eps())?;
            writeln!(out, "block {}", sc.block)?;
            for (k, c) in sc.steps.iter().enumerate() {
                let cf = if c.is_geometric() { cf_expand(c.p(), c.q())?.to_string() } else { "-".into() };
                writeln!(out, "{k:>3} {c} {cf}")?;
            }
            writeln!(out, "z_inf = {} ~ {}", ld.z_inf, ld.z_inf.to_decimal(digits))?;
            writeln!(out, "b_inf = {} ~ {}", ld.b_inf, ld.b_inf.to_decimal(digits))?;
            writeln!(out, "m/d {mono}")?;
            if let Some(s) = report.slope {
                writeln!(out, "slope {s:?}")?;
            }
            let reasons = report.reasons();
            if reasons.is_empty() {
                writeln!(out, "liveness {:?}", report.verdict)?;
            } else {
                writeln!(out, "liveness {:?} ({})", report.verdict, reasons.join("; "))?;
            }
        }
        TextFormat::Json => {
            let v = json!({
                "label": sc.label(),
                "nu": sc.nu.to_string(),
                "eps": sc.eps(),
                "block": sc.block.to_string(),
                "steps": sc.steps.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "z_inf": ld.z_inf.to_string(),
                "b_inf": ld.b_inf.to_string(),
                "monotonicity": mono,
                "slope": report.slope.map(|s| format!("{s:?}")),
                "liveness": format!("{:?}", report.verdict),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(|e| CliError::Run(e.to_string()))?)?;
        }
    }
    Ok(EXIT_OK)
}

/// Cremona-certifies every geometric step; `Err` names the first failure.
fn certify(sc: &PreStaircase) -> std::result::Result<usize, String> {
    let mut count = 0;
    for c in sc.geometric_steps() {
        match is_perfect(c) {
            Ok(true) => count += 1,
            Ok(false) => return Err(format!("{c} not exceptional")),
            Err(e) => return Err(format!("{c}: {e}")),
        }
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Pass,
    Unknown,
    Fail,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Unknown => "UNKNOWN",
            Status::Fail => "FAIL",
        }
    }
}

struct Line {
    order: (usize, usize),
    check: &'static str,
    subject: String,
    status: Status,
    detail: String,
}

fn line(order: (usize, usize), check: &'static str, subject: String, status: Status, detail: String) -> Line {
    Line { order, check, subject, status, detail }
}

fn check_perfect(k: usize, sc: &PreStaircase) -> Line {
    match certify(sc) {
        Ok(n) => line((0, k), "perfect", sc.label(), Status::Pass, format!("{n} steps exceptional")),
        Err(e) => line((0, k), "perfect", sc.label(), Status::Fail, e),
    }
}

fn check_blocking(k: usize, sc: &PreStaircase) -> Line {
    let mut n = 0;
    for c in sc.geometric_steps() {
        if !above_a_min(c.p(), c.q()) {
            continue;
        }
        match is_center_blocking(c) {
            Ok(true) => n += 1,
            Ok(false) => return line((1, k), "blocking", sc.label(), Status::Fail, format!("{c} not center-blocking")),
            Err(e) => return line((1, k), "blocking", sc.label(), Status::Fail, format!("{c}: {e}")),
        }
    }
    line((1, k), "blocking", sc.label(), Status::Pass, format!("{n} steps center-blocking"))
}

fn check_live(k: usize, sc: &PreStaircase) -> Line {
    let fail = |d: String| line((3, k), "live", sc.label(), Status::Fail, d);
    let ld = match limits(sc) {
        Ok(l) => l,
        Err(e) => return fail(e.to_string()),
    };
    match acc_equation_check(&ld.b_inf, &ld.z_inf) {
        Ok(true) => {}
        Ok(false) => return fail(format!("limit ({}, {}) off the accumulation curve", ld.b_inf, ld.z_inf)),
        Err(e) => return fail(e.to_string()),
    }
    if !sc.dir.ascends() && slope_condition(sc).unwrap_or(SlopeVerdict::Fails) == SlopeVerdict::Fails {
        return fail("slope inequality fails".into());
    }
    let report = liveness_report(sc, certify(sc).is_ok());
    match report.verdict {
        Liveness::Live => line((3, k), "live", sc.label(), Status::Pass, "live".into()),
        Liveness::Unknown => line((3, k), "live", sc.label(), Status::Unknown, report.reasons().join("; ")),
    }
}

fn check_intervals(range: &RangeArgs) -> Vec<Line> {
    let mut lines = Vec::new();
    for (k, i) in range.i.clone().enumerate() {
        let subject = format!("(S^{i})#B^U_0");
        let r = principal_interval(i).and_then(|j| {
            let lo = QuadExt::from_rational(w(i as i64 + 2)?);
            let hi = QuadExt::from_rational(w(i as i64 + 1)?);
            Ok(j.z_lo.checked_cmp(&lo)?.is_lt() && j.z_hi.checked_cmp(&hi)?.is_gt())
        });
        lines.push(match r {
            Ok(true) => line((2, k), "interval", subject, Status::Pass, format!("contains [w_{}, w_{}]", i + 2, i + 1)),
            Ok(false) => line((2, k), "interval", subject, Status::Fail, format!("misses [w_{}, w_{}]", i + 2, i + 1)),
            Err(e) => line((2, k), "interval", subject, Status::Fail, e.to_string()),
        });
    }
    let offset = lines.len();
    for (k, n) in range.n.clone().filter(|n| *n >= 0).enumerate() {
        let subject = format!("B^U_{}", n + 1);
        let c = base_block(Base::U, n);
        let b = Rational::new(c.m().clone(), c.d().clone());
        let r = base_u_interval(n + 1).and_then(|j| {
            let below = acc(&b)?.checked_cmp(&QuadExt::from_int(2 * n + 8))?.is_lt();
            Ok(below && j.b_contains(&b)?)
        });
        let order = (2, offset + k);
        lines.push(match r {
            Ok(true) => line(order, "interval", subject, Status::Pass, format!("blocks m/d of B^U_{n}")),
            Ok(false) => line(order, "interval", subject, Status::Fail, format!("does not block m/d of B^U_{n}")),
            Err(e) => line(order, "interval", subject, Status::Fail, e.to_string()),
        });
    }
    lines
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("STAIRCASE_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder.build().map_err(|e| CliError::Run(e.to_string()))
}

fn cmd_verify(out: &mut dyn Write, suite: Suite, range: &RangeArgs) -> CliResult {
    let scs = corpus(range.i.clone(), range.n.clone(), range.steps.max(2))?;
    let pool = thread_pool()?;
    let want = |s: Suite| suite == s || suite == Suite::All;
    let mut lines: Vec<Line> = pool.install(|| {
        let mut lines: Vec<Line> = Vec::new();
        if want(Suite::Perfect) {
            lines.par_extend(scs.par_iter().enumerate().map(|(k, sc)| check_perfect(k, sc)));
        }
        if want(Suite::Blocking) {
            lines.par_extend(scs.par_iter().enumerate().map(|(k, sc)| check_blocking(k, sc)));
            lines.extend(check_intervals(range));
        }
        if want(Suite::Live) {
            lines.par_extend(scs.par_iter().enumerate().map(|(k, sc)| check_live(k, sc)));
        }
        lines
    });
    lines.sort_by_key(|l| l.order);
    writeln!(out, "# staircase {}", env!("CARGO_PKG_VERSION"))?;
    for l in &lines {
        writeln!(out, "{} {} {}: {}", l.status.as_str(), l.check, l.subject, l.detail)?;
    }
    let failed = lines.iter().filter(|l| l.status == Status::Fail).count();
    let unknown = lines.iter().filter(|l| l.status == Status::Unknown).count();
    writeln!(out, "{} checks, {} failed, {} unknown", lines.len(), failed, unknown)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAIL })
}

#[allow(clippy::too_many_arguments)]
fn cmd_plot(
    out: &mut dyn Write,
    sel: &Select,
    pq: Option<&str>,
    b: Option<&str>,
    zmin: Option<&str>,
    zmax: Option<&str>,
    format: PlotFormat,
    digits: usize,
) -> CliResult {
    let env: Envelope = match pq {
        Some(list) => {
            let classes = list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_pq(s).and_then(|(p, q)| from_pq(&p, &q)))
                .collect::<Result<Vec<QuasiPerfect>>>()?;
            let b = parse_quad(b.ok_or_else(|| CliError::Usage("--pq needs --b".into()))?)?;
            let centers = || classes.iter().map(|c| Rational::new(c.p().clone(), c.q().clone()));
            let lo = match zmin {
                Some(s) => parse_rational(s)?,
                None => centers().min().unwrap_or_else(|| rat_int(&BigInt::from(1))),
            };
            let hi = match zmax {
                Some(s) => parse_rational(s)?,
                None => centers().max().map(|z| z * Rational::from_integer(2.into())).unwrap_or_else(|| &lo + BigInt::from(1)),
            };
            envelope(&classes, &b, &lo, &hi)?
        }
        None => {
            let sc = select(sel)?;
            staircase_profile(&sc, sel.steps.saturating_sub(1).max(1))?.envelope
        }
    };
    match format {
        PlotFormat::Csv => env.write_csv(out, digits)?,
        PlotFormat::Svg => env.write_svg(out)?,
        PlotFormat::Json => env.write_json(out, digits)?,
    }
    Ok(EXIT_OK)
}

fn cmd_tables(out: &mut dyn Write, name: Table, rows: usize) -> CliResult {
    let rows = rows as i64;
    match name {
        Table::G => {
            writeln!(out, "k,g,m,d")?;
            writeln!(out, "-1,{},,", third_g(2, -1)?)?;
            for k in 0..rows - 1 {
                let c = ladder_class(k)?;
                writeln!(out, "{k},{},{},{}", third_g(2, k)?, c.m(), c.d())?;
            }
        }
        Table::Y => {
            writeln!(out, "k,y,v,w")?;
            for k in 0..rows {
                let vk = if k >= 1 { v(k)?.to_string() } else { String::new() };
                let wk = if k >= 1 { w(k)?.to_string() } else { String::new() };
                writeln!(out, "{k},{},{vk},{wk}", y(k))?;
            }
        }
        Table::Blocks => {
            writeln!(out, "n,B^U_n,B^L_n")?;
            for n in 0..rows {
                writeln!(out, "{n},\"{}\",\"{}\"", base_block(Base::U, n), base_block(Base::L, n))?;
            }
        }
        Table::Degree => {
            writeln!(out, "T,T*_B")?;
            for i in 0..rows.min(12) as u32 {
                for delta in [false, true] {
                    let t = GroupElem::new(i, delta);
                    writeln!(out, "\"{t}\",\"{}\"", deg_matrix_b(&t))?;
                }
            }
            for i in 2..rows.clamp(2, 12) {
                writeln!(out, "\"R_{{v_{i}}} B\",\"{}\"", deg_matrix_refl(i, Flavor::B)?)?;
                writeln!(out, "\"R_{{v_{i}}} P\",\"{}\"", deg_matrix_refl(i, Flavor::P)?)?;
            }
        }
    }
    Ok(EXIT_OK)
}
