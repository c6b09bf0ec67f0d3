//! Command-line front end. [`run_command`] parses argv, runs one subcommand
//! and returns the process exit code: 0 on success, 1 when a checked property
//! fails, 2 on usage, input or I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{mk_classical, mk_commutator, mk_spread, mk_union, CertifiedInterval, Seminorm, State};
use crate::coarse::{
    commutant_seminorm_interval, commutant_seminorm_upper, prop_interval, PropContext, RepresentationOverMetric,
};
use crate::config::Tolerances;
use crate::constructions::{
    ac_prop_sandwich, approx_unit, corona_maps_check, covering_curve, decay_curve, ACSpace, DecayRow,
};
use crate::cutting::{an_approximate, cut, cut_sweep, SweepRow};
use crate::error::Error;
use crate::io::{self, InputError};
use crate::linalg::Operator;
use crate::metric::{r_multiplicity, validate_metric, GridBox, GridNorm, MetricSpace};
use crate::report::{emit_report, Format, Report, RunMeta};
use crate::rng::CounterRng;
use crate::spectral::{evo_commutator_check, lstar_fourier_check, normalizing_fn, FourierProfile};
use crate::verify::{run_criterion, VerifyConfig, VerifySummary, CRITERIA};

#[derive(Debug, Parser)]
#[command(name = "nccoarse", version, about = "Coarse geometry of finite quantum metric spaces")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Multiplies every numerical tolerance.
    #[arg(long = "tol-scale", global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Trial count (samples, ascent starts or verification instances).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the report to this file (JSON unless --format csv).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the report in this format instead of the plain summary.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the metric axioms, and optionally a cover at radius R.
    Validate {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Monge–Kantorovich distance: classical (--space), union (--union),
    /// commutator lower bound (--dirac) or spread (default).
    Mk {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        union: Option<PathBuf>,
        #[arg(long)]
        dirac: Option<PathBuf>,
    },
    /// Spectral propagation interval of an operator.
    Prop(OperatorContext),
    /// Relative-commutant seminorm interval of an operator.
    Lstar(OperatorContext),
    /// Cut an operator to finite propagation with a cover.
    Cut {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        radius: Option<f64>,
        /// Lattice box, e.g. `0:39` or `0:7,0:7`.
        #[arg(long = "box")]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = NormArg::L1)]
        norm: NormArg,
        /// Comma-separated radii for a sweep over the lattice box.
        #[arg(long)]
        radii: Option<String>,
        /// Target accuracy for the finite-propagation approximation.
        #[arg(long)]
        alpha: Option<f64>,
        /// Upper bound for L*(T); defaults to 3 prop(T) ||T||.
        #[arg(long)]
        lstar: Option<f64>,
    },
    /// Approximate units, anchor distances and covering probe of a union.
    Union {
        #[arg(long)]
        union: PathBuf,
        /// Comma-separated eps grid for the covering probe.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = 2)]
        trunc: usize,
    },
    /// Almost-commutative propagation sandwich and corona maps.
    Ac {
        #[arg(long)]
        space: PathBuf,
        #[arg(long = "fiber-dim")]
        fiber_dim: usize,
        /// Operator on C^n ⊗ C^k; a seeded random sparse one when omitted.
        #[arg(long)]
        op: Option<PathBuf>,
        /// Fiber state for the corona maps; normalised trace when omitted.
        #[arg(long)]
        tau: Option<PathBuf>,
    },
    /// Evolution-commutator and Fourier functional-calculus checks.
    Spectral {
        #[arg(long)]
        dirac: PathBuf,
        /// Element to commute with; seeded random Hermitian when omitted.
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long, default_value = "-3,-2,-1,-0.5,0,0.5,1,2,3")]
        times: String,
        /// Fourier profile; the sinc profile when omitted.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value_t = 2001)]
        nodes: usize,
        /// Width of the normalising function to tabulate.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Slow-oscillation decay curve of a function on the half-line.
    Higson {
        #[arg(long, value_enum, default_value_t = HigsonFn::SinLog)]
        function: HigsonFn,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        /// Comma-separated `K:N` truncations.
        #[arg(long, default_value = "100:1000,1000:10000,10000:100000")]
        truncations: String,
    },
    /// Run the acceptance checks.
    Verify {
        /// Criterion ids to run (all when omitted).
        #[arg(long)]
        criterion: Vec<u32>,
    },
}

#[derive(Debug, Clone, Args)]
struct OperatorContext {
    #[arg(long)]
    op: PathBuf,
    /// Metric space of a classical context.
    #[arg(long)]
    space: Option<PathBuf>,
    /// Comma-separated multiplicity per point (classical context).
    #[arg(long)]
    multiplicity: Option<String>,
    /// Dirac operator of a commutator seminorm.
    #[arg(long)]
    dirac: Option<PathBuf>,
    /// Use the spread seminorm on the full matrix algebra.
    #[arg(long)]
    spread: bool,
    #[arg(long = "diameter-bound")]
    diameter_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    L1,
    Linf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HigsonFn {
    SinLog,
    Sin,
    Sqrt,
    Constant,
}

/// Resolved global settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub tol_scale: f64,
    pub tol: Tolerances,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Domain(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (program name first), runs the subcommand and writes the
/// summary or report to `stdout`. Diagnostics go to `stderr`.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ =
                if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    if !(cli.common.tol_scale > 0.0) || !cli.common.tol_scale.is_finite() {
        let _ = writeln!(stderr, "usage: --tol-scale must be positive, got {}", cli.common.tol_scale);
        return 2;
    }
    let cfg = RunConfig {
        seed: cli.common.seed,
        tol_scale: cli.common.tol_scale,
        tol: Tolerances::default().scaled(cli.common.tol_scale),
        budget: cli.common.budget,
        out: cli.common.out.clone(),
        format: cli.common.format,
    };
    match dispatch(&cli.command, &cfg).and_then(|r| deliver(&r, &cfg, stdout).map(|_| r)) {
        Ok(r) if r.passed => 0,
        Ok(r) => {
            let _ = writeln!(stderr, "{}: checked property failed", r.command);
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn deliver(report: &Report, cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match (&cfg.out, cfg.format) {
        (Some(path), format) => {
            emit_report(report, format.unwrap_or(Format::Json), path)?;
            stdout.write_all(report.text.as_bytes())?;
        }
        (None, Some(format)) => stdout.write_all(report.render(format).as_bytes())?,
        (None, None) => stdout.write_all(report.text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> CliResult<Report> {
    match cmd {
        Command::Validate { space, cover, radius } => validate(cfg, space, cover.as_deref(), *radius),
        Command::Mk { mu, nu, space, union, dirac } => {
            mk(cfg, mu, nu, space.as_deref(), union.as_deref(), dirac.as_deref())
        }
        Command::Prop(ctx) => prop(cfg, ctx),
        Command::Lstar(ctx) => lstar(cfg, ctx),
        Command::Cut { op, space, cover, radius, grid, norm, radii, alpha, lstar } => cut_cmd(
            cfg,
            op,
            space.as_deref(),
            cover.as_deref(),
            *radius,
            grid.as_deref(),
            *norm,
            radii.as_deref(),
            *alpha,
            *lstar,
        ),
        Command::Union { union, eps, trunc } => union_cmd(cfg, union, eps.as_deref(), *trunc),
        Command::Ac { space, fiber_dim, op, tau } => ac(cfg, space, *fiber_dim, op.as_deref(), tau.as_deref()),
        Command::Spectral { dirac, a, times, profile, nodes, sigma } => {
            spectral(cfg, dirac, a.as_deref(), times, profile.as_deref(), *nodes, *sigma)
        }
        Command::Higson { function, radius, truncations } => higson(cfg, *function, *radius, truncations),
        Command::Verify { criterion } => verify(cfg, criterion),
    }
}

fn meta<'a>(command: &'a str, cfg: &RunConfig) -> RunMeta<'a> {
    RunMeta { command, seed: cfg.seed, tol_scale: cfg.tol_scale }
}

fn parse_list<T: std::str::FromStr>(flag: &str, s: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| CliError::Usage(format!("--{flag}: cannot parse `{p}`"))))
        .collect()
}

fn parse_box(s: &str, norm: NormArg) -> CliResult<GridBox> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for axis in s.split(',') {
        let (a, b) =
            axis.split_once(':').ok_or_else(|| CliError::Usage(format!("--box: expected `lo:hi`, got `{axis}`")))?;
        let parse =
            |x: &str| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("--box: cannot parse `{x}`")));
        lo.push(parse(a)?);
        hi.push(parse(b)?);
    }
    let norm = match norm {
        NormArg::L1 => GridNorm::L1,
        NormArg::Linf => GridNorm::LInf,
    };
    Ok(GridBox::new(lo, hi, norm)?)
}

/// Rejects an operator file whose matrix does not act on `n` dimensions.
fn check_dim(path: &Path, t: &Operator, n: usize) -> CliResult<()> {
    if t.rows() != n || t.cols() != n {
        return Err(InputError {
            file: path.to_path_buf(),
            message: format!("field `rows`/`cols`: matrix is {}x{}, expected {n}x{n}", t.rows(), t.cols()),
        }
        .into());
    }
    Ok(())
}

/// Rejects a state file whose dimension differs from `n`.
fn check_state(path: &Path, s: &State, n: usize) -> CliResult<()> {
    if s.dim() != n {
        let name = if matches!(s, State::Probs { .. }) { "probs" } else { "density" };
        return Err(InputError {
            file: path.to_path_buf(),
            message: format!("field `{name}`: state has dimension {}, expected {n}", s.dim()),
        }
        .into());
    }
    Ok(())
}

fn fmt_interval(iv: &CertifiedInterval) -> String {
    format!("[{}, {}]\n", iv.lower, iv.upper)
}

#[derive(Serialize)]
struct CoverCheck {
    sets: usize,
    colors: usize,
    diam_bound: f64,
    radius: f64,
    valid: bool,
    error: Option<String>,
    multiplicity: Option<usize>,
}

#[derive(Serialize)]
struct ValidateOut {
    file: String,
    points: usize,
    valid: bool,
    violations: Vec<String>,
    cover: Option<CoverCheck>,
}

fn validate(cfg: &RunConfig, space: &Path, cover: Option<&Path>, radius: Option<f64>) -> CliResult<Report> {
    let raw = io::load_raw_metric(space)?;
    let violations: Vec<String> = match validate_metric(&raw.dist, &cfg.tol) {
        Ok(()) => Vec::new(),
        Err(v) => v.iter().map(|x| x.to_string()).collect(),
    };
    let mut out = ValidateOut {
        file: space.display().to_string(),
        points: raw.dist.len(),
        valid: violations.is_empty(),
        violations,
        cover: None,
    };
    let mut text = if out.valid {
        format!("valid metric on {} points\n", out.points)
    } else {
        let mut t = format!("{} metric violation(s) in {}\n", out.violations.len(), out.file);
        for v in &out.violations {
            t.push_str(&format!("  {v}\n"));
        }
        t
    };
    if let Some(cover_path) = cover {
        let r = radius.ok_or_else(|| CliError::Usage("--cover needs --radius".into()))?;
        if !out.valid {
            return Err(CliError::Usage("cannot check a cover on an invalid metric".into()));
        }
        let m = MetricSpace::new(raw.dist.clone(), raw.labels.clone(), &cfg.tol)?;
        let c = io::load_cover(cover_path, &m)?;
        let check = c.validate(&m, r);
        let multiplicity = r_multiplicity(&c, &m, r).ok();
        let cc = CoverCheck {
            sets: c.sets.len(),
            colors: c.color_count(),
            diam_bound: c.diam_bound,
            radius: r,
            valid: check.is_ok(),
            error: check.err().map(|e| format!("{}: {e}", cover_path.display())),
            multiplicity,
        };
        text.push_str(&match &cc.error {
            None => format!("cover valid at R = {r}: {} colours, diameter bound {}\n", cc.colors, cc.diam_bound),
            Some(e) => format!("cover invalid: {e}\n"),
        });
        out.valid &= cc.valid;
        out.cover = Some(cc);
    }
    let rows: Vec<(String,)> = out.violations.iter().map(|v| (v.clone(),)).collect();
    Ok(Report::new(meta("validate", cfg), out.valid, &out, text)?.table(&["violation"], &rows)?)
}

#[derive(Serialize)]
struct MkOut {
    kind: &'static str,
    value: f64,
    lower: f64,
    upper: f64,
    primal: Option<f64>,
    dual: Option<f64>,
    witness: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct MkRow {
    kind: &'static str,
    value: f64,
    lower: f64,
    upper: f64,
}

fn mk(
    cfg: &RunConfig,
    mu: &Path,
    nu: &Path,
    space: Option<&Path>,
    union: Option<&Path>,
    dirac: Option<&Path>,
) -> CliResult<Report> {
    let (a, b) = (io::load_state(mu, &cfg.tol)?, io::load_state(nu, &cfg.tol)?);
    let out = if let Some(up) = union {
        let u = io::load_union(up, &cfg.tol)?;
        let v = mk_union(&a, &b, &u, &cfg.tol)?;
        MkOut { kind: "union", value: v, lower: v, upper: v, primal: None, dual: None, witness: None }
    } else if let Some(sp) = space {
        let m = io::load_metric(sp, &cfg.tol)?;
        check_state(mu, &a, m.len())?;
        check_state(nu, &b, m.len())?;
        let r = mk_classical(&a, &b, &m, &cfg.tol)?;
        MkOut {
            kind: "classical",
            value: r.value,
            lower: r.value,
            upper: r.value,
            primal: Some(r.primal),
            dual: Some(r.dual),
            witness: Some(r.witness),
        }
    } else if let Some(dp) = dirac {
        let d = io::load_operator(dp)?;
        check_state(mu, &a, d.rows())?;
        check_state(nu, &b, d.rows())?;
        let iv = mk_commutator(&a, &b, &d, cfg.budget.unwrap_or(32), cfg.seed, None, &cfg.tol)?;
        MkOut {
            kind: "commutator",
            value: iv.lower,
            lower: iv.lower,
            upper: iv.upper,
            primal: None,
            dual: None,
            witness: None,
        }
    } else {
        check_state(nu, &b, a.dim())?;
        let r = mk_spread(&a, &b, &cfg.tol)?;
        MkOut {
            kind: "spread",
            value: r.value,
            lower: r.value,
            upper: r.value,
            primal: None,
            dual: None,
            witness: None,
        }
    };
    let text =
        if out.lower == out.upper { format!("{}\n", out.value) } else { format!("[{}, {}]\n", out.lower, out.upper) };
    let row = MkRow { kind: out.kind, value: out.value, lower: out.lower, upper: out.upper };
    Ok(Report::new(meta("mk", cfg), true, &out, text)?.table(&["kind", "value", "lower", "upper"], &[row])?)
}

fn context(cfg: &RunConfig, c: &OperatorContext, t: &Operator, default_samples: usize) -> CliResult<PropContext> {
    let samples = cfg.budget.unwrap_or(default_samples);
    let ctx = if let Some(sp) = &c.space {
        let m = io::load_metric(sp, &cfg.tol)?;
        let mult = match &c.multiplicity {
            Some(s) => parse_list::<usize>("multiplicity", s)?,
            None => vec![1; m.len()],
        };
        PropContext::classical(RepresentationOverMetric::new(m, mult)?).with_samples(samples, cfg.seed)
    } else if let Some(dp) = &c.dirac {
        PropContext::noncommutative(Seminorm::CommutatorD(io::load_operator(dp)?), samples, cfg.seed)
    } else if c.spread {
        PropContext::noncommutative(Seminorm::Spread { dim: t.rows() }, samples, cfg.seed).with_diameter_bound(2.0)
    } else {
        return Err(CliError::Usage("one of --space, --dirac or --spread is required".into()));
    };
    Ok(match c.diameter_bound {
        Some(b) => ctx.with_diameter_bound(b),
        None => ctx,
    })
}

fn prop(cfg: &RunConfig, c: &OperatorContext) -> CliResult<Report> {
    let t = io::load_operator(&c.op)?;
    let ctx = context(cfg, c, &t, 0)?;
    check_dim(&c.op, &t, ctx.space_dim())?;
    let r = prop_interval(&t, &ctx, &cfg.tol)?;
    let text = fmt_interval(&r.interval);
    let row = (r.interval.lower, r.interval.upper, r.interval.lower_witness.clone(), r.interval.upper_source.clone());
    Ok(Report::new(meta("prop", cfg), r.interval.is_consistent(), &r, text)?
        .table(&["lower", "upper", "lower_witness", "upper_source"], &[row])?)
}

fn lstar(cfg: &RunConfig, c: &OperatorContext) -> CliResult<Report> {
    let t = io::load_operator(&c.op)?;
    let ctx = context(cfg, c, &t, 0)?;
    check_dim(&c.op, &t, ctx.space_dim())?;
    let iv = commutant_seminorm_interval(&t, &ctx, cfg.budget.unwrap_or(8).max(1), &cfg.tol)?;
    let text = fmt_interval(&iv);
    let row = (iv.lower, iv.upper, iv.lower_witness.clone(), iv.upper_source.clone());
    Ok(Report::new(meta("lstar", cfg), iv.is_consistent(), &iv, text)?
        .table(&["lower", "upper", "lower_witness", "upper_source"], &[row])?)
}

#[allow(clippy::too_many_arguments)]
fn cut_cmd(
    cfg: &RunConfig,
    op: &Path,
    space: Option<&Path>,
    cover: Option<&Path>,
    radius: Option<f64>,
    grid: Option<&str>,
    norm: NormArg,
    radii: Option<&str>,
    alpha: Option<f64>,
    lstar: Option<f64>,
) -> CliResult<Report> {
    let t = io::load_operator(op)?;
    let lstar_for = |rep: &RepresentationOverMetric| -> CliResult<f64> {
        match lstar {
            Some(v) => Ok(v),
            None => Ok(commutant_seminorm_upper(&t, &PropContext::classical(rep.clone()), &cfg.tol)?.0),
        }
    };
    if let (Some(sp), Some(cp)) = (space, cover) {
        let r = radius.ok_or_else(|| CliError::Usage("--cover needs --radius".into()))?;
        let m = io::load_metric(sp, &cfg.tol)?;
        let c = io::load_cover(cp, &m)?;
        let rep = RepresentationOverMetric::simple(m);
        check_dim(op, &t, rep.dim())?;
        let ub = lstar_for(&rep)?;
        let report = cut(&t, &rep, &c, r, ub, &cfg.tol)?;
        let text = format!(
            "deviation {} (bound {} x {}), prop(T') {} <= {}\n",
            report.deviation, report.slack_factor, report.deviation_bound, report.prop_upper, report.prop_limit
        );
        let row = SweepRow { r, deviation: report.deviation, bound: report.deviation_bound, ratio: report.ratio };
        let ok = report.prop_ok && report.deviation_ok;
        return Ok(
            Report::new(meta("cut", cfg), ok, &report, text)?.table(&["R", "deviation", "bound", "ratio"], &[row])?
        );
    }
    let grid = grid.ok_or_else(|| CliError::Usage("give --space with --cover, or --box".into()))?;
    let bx = parse_box(grid, norm)?;
    let rep = RepresentationOverMetric::simple(bx.metric_space());
    check_dim(op, &t, rep.dim())?;
    let ub = lstar_for(&rep)?;
    if let Some(a) = alpha {
        let report = an_approximate(&t, a, &bx, &rep, ub, &cfg.tol)?;
        let text = format!(
            "R = {}, deviation {} (alpha {}), prop(T') {} <= {}\n",
            report.cut.r, report.cut.deviation, a, report.cut.prop_upper, report.cut.prop_limit
        );
        let row = SweepRow {
            r: report.cut.r,
            deviation: report.cut.deviation,
            bound: report.cut.deviation_bound,
            ratio: report.cut.ratio,
        };
        return Ok(Report::new(meta("cut", cfg), report.ok(), &report, text)?
            .table(&["R", "deviation", "bound", "ratio"], &[row])?);
    }
    let radii =
        parse_list::<f64>("radii", radii.ok_or_else(|| CliError::Usage("--box needs --radii or --alpha".into()))?)?;
    let rows = cut_sweep(&t, &bx, &rep, &radii, ub, &cfg.tol)?;
    let mut text = String::from("R deviation bound ratio\n");
    for r in &rows {
        text.push_str(&format!("{} {} {} {}\n", r.r, r.deviation, r.bound, r.ratio));
    }
    Ok(Report::new(meta("cut", cfg), true, &rows, text)?.table(&["R", "deviation", "bound", "ratio"], &rows)?)
}

#[derive(Serialize)]
struct UnionRow {
    n: usize,
    gap: Option<f64>,
    approx_unit_seminorm: f64,
    expected: f64,
    anchor_distance: Option<f64>,
}

#[derive(Serialize)]
struct UnionOut {
    components: usize,
    rows: Vec<UnionRow>,
    covering: Option<Vec<crate::constructions::CoveringPoint>>,
}

fn union_cmd(cfg: &RunConfig, path: &Path, eps: Option<&str>, trunc: usize) -> CliResult<Report> {
    let u = io::load_union(path, &cfg.tol)?;
    let c = u.components.len();
    let mut rows = Vec::with_capacity(c);
    let mut ok = true;
    for n in 0..c {
        let gap = u.gaps.get(n).copied();
        let (_, l) = approx_unit(&u, n, &cfg.tol)?;
        let expected = gap.map_or(0.0, |g| 1.0 / g);
        let anchor_distance = if n + 1 < c {
            let mu = u.components[n].anchor.clone().with_block(n);
            let nu = u.components[n + 1].anchor.clone().with_block(n + 1);
            Some(mk_union(&mu, &nu, &u, &cfg.tol)?)
        } else {
            None
        };
        ok &= (l - expected).abs() <= 1e-12;
        if let (Some(d), Some(g)) = (anchor_distance, gap) {
            ok &= (d - g).abs() <= 1e-7;
        }
        rows.push(UnionRow { n, gap, approx_unit_seminorm: l, expected, anchor_distance });
    }
    let covering = match eps {
        Some(s) => Some(covering_curve(
            &u,
            trunc,
            &parse_list::<f64>("eps", s)?,
            cfg.seed,
            cfg.budget.unwrap_or(200),
            &cfg.tol,
        )?),
        None => None,
    };
    let mut text = String::from("n gap L(e_n) 1/R_n anchor_distance\n");
    let show = |v: Option<f64>| v.map_or("-".to_string(), |x| x.to_string());
    for r in &rows {
        text.push_str(&format!(
            "{} {} {} {} {}\n",
            r.n,
            show(r.gap),
            r.approx_unit_seminorm,
            r.expected,
            show(r.anchor_distance)
        ));
    }
    if let Some(cov) = &covering {
        for p in cov {
            text.push_str(&format!("eps {} covering estimate {}\n", p.eps, p.estimate));
        }
    }
    let out = UnionOut { components: c, rows, covering };
    Ok(Report::new(meta("union", cfg), ok, &out, text)?
        .table(&["n", "gap", "approx_unit_seminorm", "expected", "anchor_distance"], &out.rows)?)
}

#[derive(Serialize)]
struct AcOut {
    sandwich: crate::constructions::ACSandwichReport,
    corona: crate::constructions::CoronaReport,
}

fn ac(cfg: &RunConfig, space: &Path, k: usize, op: Option<&Path>, tau: Option<&Path>) -> CliResult<Report> {
    let s = ACSpace::new(io::load_metric(space, &cfg.tol)?, k)?;
    let n = s.element_dim();
    let t = match op {
        Some(p) => {
            let t = io::load_operator(p)?;
            check_dim(p, &t, n)?;
            t
        }
        None => crate::verify::oracles::random_sparse(&mut CounterRng::new(cfg.seed), n, 0.2),
    };
    let tau = match tau {
        Some(p) => {
            let tau = io::load_state(p, &cfg.tol)?;
            check_state(p, &tau, k)?;
            tau
        }
        None => State::Density { block: 0, density: Operator::identity(k).scale(1.0 / k as f64) },
    };
    let sandwich = ac_prop_sandwich(&t, &s, cfg.budget.unwrap_or(10), cfg.seed, &cfg.tol)?;
    let corona = corona_maps_check(&s, &tau, cfg.budget.unwrap_or(5), cfg.seed, &cfg.tol)?;
    let ok = sandwich.ok() && corona.ok();
    let text = format!(
        "block prop {}, witness radius {}, limit {} ({}); corona maps {}\n",
        sandwich.block_prop,
        sandwich.witness_lower,
        sandwich.upper_limit,
        if sandwich.ok() { "ok" } else { "VIOLATED" },
        if corona.ok() { "ok" } else { "FAILED" }
    );
    let row = (
        sandwich.block_prop,
        sandwich.witness_lower,
        sandwich.upper_limit,
        sandwich.ok(),
        corona.left_inverse_defect,
        corona.ok(),
    );
    let out = AcOut { sandwich, corona };
    Ok(Report::new(meta("ac", cfg), ok, &out, text)?.table(
        &["block_prop", "witness_lower", "upper_limit", "sandwich_ok", "left_inverse_defect", "corona_ok"],
        &[row],
    )?)
}

#[derive(Serialize)]
struct EvoRow {
    t: f64,
    lhs: f64,
    rhs: f64,
    holds: bool,
}

#[derive(Serialize)]
struct SpectralOut {
    evolution: Vec<EvoRow>,
    fourier: crate::spectral::FourierCheck,
    normalizing: Option<crate::spectral::NormalizingFunction>,
}

fn spectral(
    cfg: &RunConfig,
    dirac: &Path,
    a: Option<&Path>,
    times: &str,
    profile: Option<&Path>,
    nodes: usize,
    sigma: Option<f64>,
) -> CliResult<Report> {
    let d = io::load_operator(dirac)?;
    d.clone().flag_hermitian(&cfg.tol).map_err(|e| {
        CliError::Input(InputError { file: dirac.to_path_buf(), message: format!("field `re`/`im`: {e}") })
    })?;
    let a = match a {
        Some(p) => {
            let a = io::load_operator(p)?;
            check_dim(p, &a, d.rows())?;
            a
        }
        None => CounterRng::new(cfg.seed).gaussian_hermitian(d.rows()),
    };
    let mut evolution = Vec::new();
    for t in parse_list::<f64>("times", times)? {
        let (lhs, rhs) = evo_commutator_check(&d, &a, t, &cfg.tol)?;
        evolution.push(EvoRow { t, lhs, rhs, holds: lhs <= rhs + 1e-9 * (1.0 + rhs) });
    }
    let prof = match profile {
        Some(p) => io::load_profile(p)?,
        None => FourierProfile::sinc(nodes)?,
    };
    let fourier = lstar_fourier_check(&d, &prof, cfg.budget.unwrap_or(16), cfg.seed, &cfg.tol)?;
    let normalizing = sigma.map(normalizing_fn).transpose()?;
    let ok = evolution.iter().all(|r| r.holds) && fourier.ok;
    let mut text = String::from("t ||[e^itD,a]|| |t|*||[D,a]||\n");
    for r in &evolution {
        text.push_str(&format!("{} {} {}{}\n", r.t, r.lhs, r.rhs, if r.holds { "" } else { "  VIOLATED" }));
    }
    text.push_str(&format!("fourier bound {}, largest ratio {}\n", fourier.bound, fourier.max_ratio));
    if let Some(f) = &normalizing {
        text.push_str(&format!(
            "normalizing sigma {}: psi(+-1000 sigma) = {}, {}\n",
            f.sigma, f.asymptote_plus, f.asymptote_minus
        ));
    }
    let out = SpectralOut { evolution, fourier, normalizing };
    Ok(Report::new(meta("spectral", cfg), ok, &out, text)?.table(&["t", "lhs", "rhs", "holds"], &out.evolution)?)
}

fn higson(cfg: &RunConfig, function: HigsonFn, radius: f64, truncations: &str) -> CliResult<Report> {
    let mut truncs = Vec::new();
    for p in truncations.split(',') {
        let (k, n) =
            p.split_once(':').ok_or_else(|| CliError::Usage(format!("--truncations: expected `K:N`, got `{p}`")))?;
        let parse = |x: &str| {
            x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--truncations: cannot parse `{x}`")))
        };
        truncs.push((parse(k)?, parse(n)?));
    }
    let f: fn(f64) -> f64 = match function {
        HigsonFn::SinLog => |x| if x > 0.0 { x.ln().sin() } else { 0.0 },
        HigsonFn::Sin => f64::sin,
        HigsonFn::Sqrt => f64::sqrt,
        HigsonFn::Constant => |_| 1.0,
    };
    let rows: Vec<DecayRow> = decay_curve(f, radius, &truncs)?;
    let mut text = String::from("K R score\n");
    for r in &rows {
        text.push_str(&format!("{} {} {}\n", r.k, r.r, r.score));
    }
    Ok(Report::new(meta("higson", cfg), true, &rows, text)?.table(&["K", "R", "score"], &rows)?)
}

#[derive(Serialize)]
struct CriterionRow {
    id: u32,
    name: &'static str,
    passed: bool,
    instances: usize,
    worst: f64,
    detail: String,
}

fn verify(cfg: &RunConfig, ids: &[u32]) -> CliResult<Report> {
    let vcfg = VerifyConfig { seed: cfg.seed, tol: cfg.tol.clone(), instances: cfg.budget };
    let ids: Vec<u32> = if ids.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { ids.to_vec() };
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.iter().any(|c| c.0 == **i)) {
        return Err(CliError::Usage(format!("--criterion: no criterion {bad} (valid: 1-{})", CRITERIA.len())));
    }
    let criteria: Vec<_> = ids.iter().map(|&id| run_criterion(id, &vcfg)).collect();
    let summary = VerifySummary { seed: cfg.seed, passed: criteria.iter().all(|c| c.passed), criteria };
    let mut text = String::new();
    for c in &summary.criteria {
        text.push_str(&c.line());
        text.push('\n');
    }
    let passed = summary.criteria.iter().filter(|c| c.passed).count();
    text.push_str(&format!("{passed}/{} criteria passed\n", summary.criteria.len()));
    let rows: Vec<CriterionRow> = summary
        .criteria
        .iter()
        .map(|c| CriterionRow {
            id: c.id,
            name: c.name,
            passed: c.passed,
            instances: c.instances,
            worst: c.worst,
            detail: c.detail.clone(),
        })
        .collect();
    Ok(Report::new(meta("verify", cfg), summary.passed, &summary, text)?
        .table(&["id", "name", "passed", "instances", "worst", "detail"], &rows)?)
}
