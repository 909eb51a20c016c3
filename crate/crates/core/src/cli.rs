//! The `nodalsym` command line.
//!
//! Exit codes: `0` verified (or a plain computation succeeded), `1`
//! inconclusive or a certificate that does not replay, `2` usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::elementary::ipi;
use crate::entropy::{entropy_g_detailed, h_fn_detailed, write_curve_csv, CurveRow, GammaParams, ThetaFamily};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::prover::{
    check_concavity, exclude, prove_rectangle, prove_rectangle_intervals, prove_square, Certificate,
    CertificateBody, ConcavityCertificate, DepthSchedule, EntropyObjective, ExcludeConfig, ExclusionCertificate,
    RectConfig, RectVerdict, RectangleSweepReport, SquareConfig, SquareProofReport,
};
use crate::quad::{QuadConfig, QuadOutcome, RuleKind};

pub const THREADS_ENV: &str = "NODALSYM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "nodalsym", version, about = "Verified entropy computations on the square and the rectangle")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// worker threads (default: all cores)
    #[arg(long, global = true, env = THREADS_ENV, value_parser = clap::value_parser!(u32).range(1..=4096))]
    threads: Option<u32>,
    /// print hex-float duals next to decimal intervals
    #[arg(long, global = true)]
    hex_floats: bool,
    /// record wall-clock times (makes output non-reproducible)
    #[arg(long, global = true)]
    timings: bool,
    /// write the result to a file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enclose g(θ) = −∫ u_θ² log|u_θ|
    Entropy {
        #[command(flatten)]
        theta: ThetaArg,
        #[arg(long, default_value_t = 13, value_parser = depth_parser())]
        depth: u32,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value = "simpson", value_parser = parse_rule)]
        rule: RuleKind,
        /// also write the leaf cells as CSV
        #[arg(long)]
        emit_subdivision: Option<PathBuf>,
    },
    /// Enclose h(θ) = −∫ |∂_θ u_θ|² log|u_θ|
    H {
        #[command(flatten)]
        theta: ThetaArg,
        #[arg(long, default_value_t = 8, value_parser = depth_parser())]
        depth: u32,
        #[arg(long, default_value_t = 1e-3, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value = "midpoint", value_parser = parse_rule)]
        rule: RuleKind,
        #[arg(long)]
        emit_subdivision: Option<PathBuf>,
    },
    /// Exclude parameter intervals where g exceeds a reference value
    Exclude {
        #[arg(long, default_value_t = 0.0)]
        x_lo: f64,
        /// defaults to the upper end of the enclosure of π/4
        #[arg(long)]
        x_hi: Option<f64>,
        #[arg(long, default_value_t = 100, value_parser = n_parser())]
        n: u32,
        /// defaults to the upper end of g(π/4) at depth 13, tol 1e-9
        #[arg(long)]
        m_bar: Option<f64>,
        #[arg(long)]
        step0: Option<f64>,
        /// fixed depth for every candidate (replaces the schedule)
        #[arg(long, value_parser = depth_parser())]
        depth: Option<u32>,
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
    },
    /// Test h > 1/4 + g, i.e. g'' > 0, on a θ interval
    Concavity {
        #[command(flatten)]
        theta: ThetaArg,
        #[arg(long, default_value_t = 9, value_parser = depth_parser())]
        depth_g: u32,
        #[arg(long, default_value_t = 1e-6, value_parser = parse_tol)]
        tol_g: f64,
        #[arg(long, default_value_t = 8, value_parser = depth_parser())]
        depth_h: u32,
        #[arg(long, default_value_t = 1e-3, value_parser = parse_tol)]
        tol_h: f64,
    },
    /// Prove that π/4 is the only minimizer of g on [0, π/4]
    ProveSquare {
        /// one depth for every stage
        #[arg(long, value_parser = depth_parser())]
        depth: Option<u32>,
        /// one tolerance for every stage
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
        #[arg(long, value_parser = n_parser())]
        n: Option<u32>,
    },
    /// Locate the minimizer of g_γ for γ in a family of intervals
    ProveRect {
        #[arg(long, default_value_t = 0.5, value_parser = parse_gamma)]
        gamma_max: f64,
        #[arg(long, default_value_t = 8, value_parser = n_parser())]
        n_gamma: u32,
        /// explicit γ intervals (`10` or `0.1,0.2`), replacing the tiling
        #[arg(long = "gamma", value_parser = parse_gamma_interval)]
        gammas: Vec<Interval>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_parser = n_parser())]
        n: Option<u32>,
    },
    /// Write a band of enclosures of g (or g_γ) along a θ grid as CSV
    EmitCurve {
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(0..=10_000))]
        points: u32,
        /// grid θ_k = k·span/points for k < points, span a rational multiple of π
        #[arg(long, default_value = "2/1", value_parser = parse_frac)]
        span_pi_frac: (i64, u32),
        /// comma-separated γ values; one curve of g_γ per value
        #[arg(long, value_delimiter = ',', value_parser = parse_gamma_interval)]
        gamma: Vec<Interval>,
        #[arg(long, default_value_t = 6, value_parser = depth_parser())]
        depth: u32,
        #[arg(long, default_value_t = 1e-3, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value = "simpson", value_parser = parse_rule)]
        rule: RuleKind,
    },
    /// Write the quadrature leaf cells of g or h as CSV
    EmitSubdivision {
        #[command(flatten)]
        theta: ThetaArg,
        #[arg(long, value_enum, default_value_t = Quantity::G)]
        quantity: Quantity,
        #[arg(long, default_value_t = 5, value_parser = depth_parser())]
        depth: u32,
        #[arg(long, default_value_t = 0.05, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value = "simpson", value_parser = parse_rule)]
        rule: RuleKind,
    },
    /// Replay a JSON certificate
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    G,
    H,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ThetaArg {
    /// θ = π/k
    #[arg(long)]
    theta_pi_over: Option<u32>,
    /// θ = pπ/q, written p/q
    #[arg(long, value_parser = parse_frac)]
    theta_pi_frac: Option<(i64, u32)>,
    /// θ as a decimal point or interval, `0.5` or `0.75,0.79`
    #[arg(long, value_parser = parse_interval)]
    theta: Option<Interval>,
}

impl ThetaArg {
    fn family(&self) -> Result<ThetaFamily> {
        match (self.theta_pi_over, self.theta_pi_frac, self.theta) {
            (Some(k), _, _) => ThetaFamily::pi_over(k),
            (_, Some((p, q)), _) => ThetaFamily::pi_frac(p, q),
            (_, _, Some(t)) => ThetaFamily::new(t),
            _ => Err(Error::Config("no θ given".into())),
        }
    }
}

fn depth_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(0..=30)
}

fn n_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..=1_000_000)
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(format!("tol must lie in (0, 1), got {s}"))
    }
}

fn parse_gamma(s: &str) -> std::result::Result<f64, String> {
    let g: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if g >= 0.0 && g.is_finite() {
        Ok(g)
    } else {
        Err(format!("gamma must be finite and non-negative, got {s}"))
    }
}

fn parse_rule(s: &str) -> std::result::Result<RuleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_frac(s: &str) -> std::result::Result<(i64, u32), String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("expected p/q, got {s}"))?;
    let p: i64 = p.trim().parse().map_err(|e| format!("{e}"))?;
    let q: u32 = q.trim().parse().map_err(|e| format!("{e}"))?;
    if q == 0 {
        return Err("zero denominator".into());
    }
    Ok((p, q))
}

/// `a` or `a,b` (optionally in brackets), each end rounded outward.
fn parse_interval(s: &str) -> std::result::Result<Interval, String> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    let one = |p: &str| Interval::parse_decimal(p).map_err(|e| e.to_string());
    match parts.as_slice() {
        [a] => one(a),
        [a, b] => {
            let (a, b) = (one(a)?, one(b)?);
            Interval::new(a.lo(), b.hi()).map_err(|e| e.to_string())
        }
        _ => Err(format!("expected a or a,b, got {s}")),
    }
}

fn parse_gamma_interval(s: &str) -> std::result::Result<Interval, String> {
    let g = parse_interval(s)?;
    if g.lo() >= 0.0 && g.is_bounded() {
        Ok(g)
    } else {
        Err(format!("gamma must be bounded and non-negative, got {s}"))
    }
}

/// Whether the requested statement was established.
enum Status {
    Done,
    Inconclusive,
}

struct Ctx {
    format: Format,
    hex: bool,
    timings: bool,
}

impl Ctx {
    fn iv(&self, x: Interval) -> String {
        if self.hex {
            format!("{x}  {}", x.to_hex_string())
        } else {
            x.to_string()
        }
    }

    fn num(&self, x: f64) -> String {
        if self.hex {
            format!("{x:?}  {}", crate::interval::format_hex(x))
        } else {
            format!("{x:?}")
        }
    }

    fn opt_iv(&self, x: Option<Interval>) -> String {
        x.map_or_else(|| "none".to_string(), |x| self.iv(x))
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render();
            let _ = if e.use_stderr() {
                write!(err, "{msg}")
            } else {
                write!(out, "{msg}")
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 2;
        }
    };
    let (result, buf) = pool.install(|| {
        let mut buf = Vec::new();
        (execute(&cli, &mut buf), buf)
    });
    let result = result.and_then(|status| {
        match &cli.output {
            Some(path) => std::fs::write(path, &buf)?,
            None => out.write_all(&buf)?,
        }
        Ok(status)
    });
    match result {
        Ok(Status::Done) => 0,
        Ok(Status::Inconclusive) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Mismatch(_) => 1,
                _ => 2,
            }
        }
    }
}

fn execute(cli: &Cli, w: &mut dyn Write) -> Result<Status> {
    let ctx = Ctx {
        format: cli.format,
        hex: cli.hex_floats,
        timings: cli.timings,
    };
    match &cli.command {
        Command::Entropy { theta, depth, tol, rule, emit_subdivision } => {
            let fam = theta.family()?;
            let cfg = QuadConfig::new(*depth, *tol, *rule);
            let o = entropy_g_detailed(&fam, &cfg, emit_subdivision.is_some())?;
            report_value(&ctx, w, "g", &fam, &cfg, &o, emit_subdivision.as_deref())
        }
        Command::H { theta, depth, tol, rule, emit_subdivision } => {
            let fam = theta.family()?;
            let cfg = QuadConfig::new(*depth, *tol, *rule);
            let o = h_fn_detailed(&fam, &cfg, emit_subdivision.is_some())?;
            report_value(&ctx, w, "h", &fam, &cfg, &o, emit_subdivision.as_deref())
        }
        Command::Exclude { x_lo, x_hi, n, m_bar, step0, depth, tol } => {
            let start = Instant::now();
            let pi4 = ipi() / 4.0;
            let mut schedule = DepthSchedule::square_default();
            if depth.is_some() || tol.is_some() {
                schedule = schedule.overridden(*depth, *tol);
            }
            let cfg = ExcludeConfig {
                n: *n,
                step0: *step0,
                schedule,
                ..ExcludeConfig::square_default()
            };
            let m_bar = match m_bar {
                Some(m) => *m,
                None => {
                    let q = SquareConfig::default().g_pi4;
                    entropy_g_detailed(&ThetaFamily::new(pi4)?, &q, false)?.value.hi()
                }
            };
            let ex = exclude(&EntropyObjective, *x_lo, x_hi.unwrap_or(pi4.hi()), &cfg, m_bar)?;
            let status = if ex.excluded.is_empty() { Status::Inconclusive } else { Status::Done };
            emit(&ctx, w, CertificateBody::Exclusion(ex), start, text_exclusion)?;
            Ok(status)
        }
        Command::Concavity { theta, depth_g, tol_g, depth_h, tol_h } => {
            let start = Instant::now();
            let fam = theta.family()?;
            let c = check_concavity(
                fam.theta(),
                &QuadConfig::new(*depth_g, *tol_g, RuleKind::Simpson),
                &QuadConfig::new(*depth_h, *tol_h, RuleKind::Midpoint),
            )?;
            let status = verdict_status(c.verdict.is_verified());
            emit(&ctx, w, CertificateBody::Concavity(c), start, text_concavity)?;
            Ok(status)
        }
        Command::ProveSquare { depth, tol, n } => {
            let start = Instant::now();
            let mut cfg = SquareConfig::default().overridden(*depth, *tol);
            if let Some(n) = n {
                cfg.exclusion.n = *n;
            }
            let mut r = prove_square(&cfg)?;
            if !ctx.timings {
                r.timings = None;
            }
            let status = verdict_status(r.verdict.is_verified());
            emit(&ctx, w, CertificateBody::Square(r), start, text_square)?;
            Ok(status)
        }
        Command::ProveRect { gamma_max, n_gamma, gammas, delta, n } => {
            let start = Instant::now();
            let mut cfg = RectConfig::default();
            if let Some(d) = delta {
                cfg.delta = *d;
            }
            if let Some(n) = n {
                cfg.exclusion.n = *n;
            }
            let r = if gammas.is_empty() {
                prove_rectangle(*gamma_max, *n_gamma, &cfg)?
            } else {
                prove_rectangle_intervals(gammas, &cfg)?
            };
            let status = verdict_status(r.results.iter().all(|g| g.verdict != RectVerdict::Inconclusive));
            emit(&ctx, w, CertificateBody::Rectangle(r), start, text_rect)?;
            Ok(status)
        }
        Command::EmitCurve { points, span_pi_frac, gamma, depth, tol, rule } => {
            let cfg = QuadConfig::new(*depth, *tol, *rule);
            let rows = curve(*points, *span_pi_frac, gamma, &cfg)?;
            // an empty grid prints nothing, not even the header
            if !rows.is_empty() {
                write_curve_csv(&rows, w)?;
            }
            Ok(Status::Done)
        }
        Command::EmitSubdivision { theta, quantity, depth, tol, rule } => {
            let fam = theta.family()?;
            let cfg = QuadConfig::new(*depth, *tol, *rule);
            let o = match quantity {
                Quantity::G => entropy_g_detailed(&fam, &cfg, true)?,
                Quantity::H => h_fn_detailed(&fam, &cfg, true)?,
            };
            o.log.expect("log requested").write_csv(w)?;
            Ok(Status::Done)
        }
        Command::Verify { file } => verify(&ctx, w, file),
    }
}

fn verdict_status(ok: bool) -> Status {
    if ok {
        Status::Done
    } else {
        Status::Inconclusive
    }
}

fn report_value(
    ctx: &Ctx,
    w: &mut dyn Write,
    name: &str,
    fam: &ThetaFamily,
    cfg: &QuadConfig,
    o: &QuadOutcome,
    subdivision: Option<&Path>,
) -> Result<Status> {
    if let (Some(path), Some(log)) = (subdivision, &o.log) {
        log.write_csv(BufWriter::new(File::create(path)?))?;
    }
    match ctx.format {
        Format::Text => {
            writeln!(w, "{name}(θ) for θ ∈ {}", ctx.iv(fam.theta()))?;
            writeln!(w, "  enclosure  {}", ctx.iv(o.value))?;
            writeln!(w, "  width      {:.3e}", o.value.width())?;
            writeln!(w, "  rule {}, depth {}, tol {:e}", cfg.rule, cfg.depth, cfg.tol)?;
            let s = &o.stats;
            writeln!(
                w,
                "  leaves     {} basic, {} midpoint, {} simpson; deepest level {}",
                s.basic_cells, s.midpoint_cells, s.simpson_cells, s.max_level
            )?;
        }
        Format::Json => {
            let v = serde_json::json!({
                "quantity": name,
                "theta": fam.theta(),
                "config": cfg,
                "value": o.value,
                "stats": o.stats,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Csv => {
            let row = CurveRow {
                theta: fam.theta(),
                value: o.value,
                gamma: None,
            };
            write_curve_csv(&[row], w)?;
        }
    }
    Ok(Status::Done)
}

fn curve(points: u32, (p, q): (i64, u32), gammas: &[Interval], cfg: &QuadConfig) -> Result<Vec<CurveRow>> {
    let denom = q
        .checked_mul(points.max(1))
        .ok_or_else(|| Error::Config("grid denominator overflows".into()))?;
    let samples = (0..points)
        .into_par_iter()
        .map(|k| {
            let fam = ThetaFamily::pi_frac(p * k as i64, denom)?;
            let g = entropy_g_detailed(&fam, cfg, false)?.value;
            Ok((fam.theta(), g))
        })
        .collect::<Result<Vec<_>>>()?;
    if gammas.is_empty() {
        return Ok(samples
            .into_iter()
            .map(|(theta, value)| CurveRow { theta, value, gamma: None })
            .collect());
    }
    let mut rows = Vec::with_capacity(samples.len() * gammas.len());
    for gamma in gammas {
        let gp = GammaParams::new(*gamma)?;
        for &(theta, g) in &samples {
            rows.push(CurveRow {
                theta,
                value: gp.g_gamma_from(theta, g),
                gamma: Some(gamma.midpoint()),
            });
        }
    }
    Ok(rows)
}

fn emit(
    ctx: &Ctx,
    w: &mut dyn Write,
    body: CertificateBody,
    start: Instant,
    text: fn(&Ctx, &mut dyn Write, &CertificateBody) -> Result<()>,
) -> Result<()> {
    match ctx.format {
        Format::Text => text(ctx, w, &body),
        Format::Json => {
            let mut c = Certificate::new(body);
            if ctx.timings {
                c.wall_time_s = Some(start.elapsed().as_secs_f64());
            }
            writeln!(w, "{}", c.to_json()?)?;
            Ok(())
        }
        Format::Csv => match &body {
            CertificateBody::Rectangle(r) => csv_rect(w, r),
            CertificateBody::Exclusion(e) => csv_exclusion(w, e),
            _ => Err(Error::Config("this command has no CSV form; use --format text or json".into())),
        },
    }
}

fn text_exclusion(ctx: &Ctx, w: &mut dyn Write, body: &CertificateBody) -> Result<()> {
    let CertificateBody::Exclusion(e) = body else { unreachable!() };
    write_exclusion(ctx, w, e, "")
}

fn write_exclusion(ctx: &Ctx, w: &mut dyn Write, e: &ExclusionCertificate, indent: &str) -> Result<()> {
    writeln!(w, "{indent}exclusion on [{:?}, {:?}] against m̄ = {}", e.x_lo, e.x_hi, ctx.num(e.m_bar))?;
    writeln!(
        w,
        "{indent}  {} intervals excluded in {} iterations, survivor {}",
        e.excluded.len(),
        e.iterations_used,
        ctx.opt_iv(e.survivor)
    )?;
    Ok(())
}

fn write_concavity(ctx: &Ctx, w: &mut dyn Write, c: &ConcavityCertificate) -> Result<()> {
    writeln!(w, "concavity on θ ∈ {}: {:?}", ctx.iv(c.theta_int), c.verdict)?;
    writeln!(w, "  h          {}", ctx.iv(c.h))?;
    writeln!(w, "  g          {}", ctx.iv(c.g))?;
    writeln!(w, "  low(h)         {}", ctx.num(c.h_low))?;
    writeln!(w, "  high(1/4 + g)  {}", ctx.num(c.rhs_high))?;
    Ok(())
}

fn text_concavity(ctx: &Ctx, w: &mut dyn Write, body: &CertificateBody) -> Result<()> {
    let CertificateBody::Concavity(c) = body else { unreachable!() };
    write_concavity(ctx, w, c)
}

fn text_square(ctx: &Ctx, w: &mut dyn Write, body: &CertificateBody) -> Result<()> {
    let CertificateBody::Square(r) = body else { unreachable!() };
    write_square(ctx, w, r)
}

fn write_square(ctx: &Ctx, w: &mut dyn Write, r: &SquareProofReport) -> Result<()> {
    writeln!(w, "square proof: {:?}", r.verdict)?;
    writeln!(w, "g(π/4)     {}", ctx.iv(r.g_at_pi4))?;
    writeln!(w, "m̄          {}", ctx.num(r.m_bar))?;
    write_exclusion(ctx, w, &r.exclusion, "")?;
    if let Some(c) = &r.concavity {
        write_concavity(ctx, w, c)?;
    }
    if let Some(f) = &r.failed_stage {
        writeln!(w, "failed stage: {f}")?;
    }
    if let Some(t) = &r.timings {
        writeln!(
            w,
            "timings: g(π/4) {:.1}s, exclusion {:.1}s, concavity {:.1}s",
            t.g_pi4, t.exclusion, t.concavity
        )?;
    }
    Ok(())
}

fn text_rect(ctx: &Ctx, w: &mut dyn Write, body: &CertificateBody) -> Result<()> {
    let CertificateBody::Rectangle(r) = body else { unreachable!() };
    for g in &r.results {
        writeln!(w, "Γ = {}: {:?}", ctx.iv(g.gamma), g.verdict)?;
        writeln!(w, "  g_Γ''(0)   {}", ctx.iv(g.g2_at_zero))?;
        writeln!(w, "  minimizer  {}", ctx.opt_iv(g.survivor))?;
        if let Some(reason) = &g.reason {
            writeln!(w, "  {reason}")?;
        }
    }
    match r.transition {
        Some((a, b)) => writeln!(w, "transition bracket: ({a:?}, {b:?})")?,
        None => writeln!(w, "transition bracket: none")?,
    }
    Ok(())
}

fn csv_rect(w: &mut dyn Write, r: &RectangleSweepReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["gamma_lo", "gamma_hi", "verdict", "min_lo", "min_hi", "g2_zero_lo", "g2_zero_hi"])?;
    for g in &r.results {
        let verdict = serde_json::to_value(g.verdict)?;
        let (a, b) = g.survivor.map_or((String::new(), String::new()), |s| (s.lo().to_string(), s.hi().to_string()));
        out.write_record([
            g.gamma.lo().to_string(),
            g.gamma.hi().to_string(),
            verdict.as_str().unwrap_or_default().to_string(),
            a,
            b,
            g.g2_at_zero.lo().to_string(),
            g.g2_at_zero.hi().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn csv_exclusion(w: &mut dyn Write, e: &ExclusionCertificate) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x_lo", "x_hi", "val_lo", "val_hi", "depth", "tol"])?;
    for x in &e.excluded {
        out.write_record([
            x.interval.lo().to_string(),
            x.interval.hi().to_string(),
            x.enclosure.lo().to_string(),
            x.enclosure.hi().to_string(),
            x.depth.to_string(),
            x.tol.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn verify(ctx: &Ctx, w: &mut dyn Write, file: &Path) -> Result<Status> {
    let text = std::fs::read_to_string(file)?;
    let cert = Certificate::from_json(&text)?;
    cert.replay()?;
    let kind = match &cert.body {
        CertificateBody::Square(_) => "square",
        CertificateBody::Rectangle(_) => "rectangle",
        CertificateBody::Exclusion(_) => "exclusion",
        CertificateBody::Concavity(_) => "concavity",
    };
    let verified = cert.is_verified();
    match ctx.format {
        Format::Json => {
            let v = serde_json::json!({ "kind": kind, "replayed": true, "verified": verified });
            writeln!(w, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        _ => {
            writeln!(w, "{kind} certificate from {} {}", cert.tool, cert.version)?;
            writeln!(w, "replay: every recorded enclosure reproduced bit for bit")?;
            writeln!(w, "verdict: {}", if verified { "verified" } else { "inconclusive" })?;
        }
    }
    Ok(verdict_status(verified))
}
