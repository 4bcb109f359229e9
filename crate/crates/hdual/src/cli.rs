//! Argument parsing and command dispatch for the `hdual` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hdual_core::certify::{
    certify_reducibility, directed_covering_probe, theorem_chain_report, CertifyOptions, CertifyOutcome, ChainOptions,
    CoveringProbe,
};
use hdual_core::countable::{limit_report, prefix_trace, PrefixOptions, ProductMode, MIN_TRACE_LEN};
use hdual_core::duality::{primal_bounds, strong_duality_at, sup_dual_over_family, BoundsOptions, SearchOptions};
use hdual_core::model::{builtin_instance, sample_index_set, FamilySpec, Grid, LipInstance, BUILTIN_NAMES};
use hdual_core::{DenseVector, Error, ToleranceConfig};

use crate::format::{parse_certificate, parse_instance, parse_shifts, ParseError};
use crate::report;

/// `--alpha auto` takes the validated upper bound from the doubled grid and
/// steps this far below it.
pub const AUTO_ALPHA_OFFSET: f64 = 1e-5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "hdual",
    version,
    about = "Relaxed Lagrangian duality for linear infinite programs",
    after_help = report::schema_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bracket inf(P) between a grid dual bound and a validated feasible point.
    Solve(SolveArgs),
    /// Best relaxed dual sup(D_H) over the family.
    Dual(FamilyArgs),
    /// Search the family for a reducibility certificate at alpha.
    Certify(CertifyArgs),
    /// Re-check a certificate file against an instance; exit 0 iff valid.
    Verify(VerifyArgs),
    /// Grid-scale verdicts for the four equivalent statements.
    Chain(ChainArgs),
    /// Prefix subproblems of a countable instance and their limits.
    Prefix(PrefixArgs),
    /// Conjugate versus family value at shift points read from a file.
    Sweep(SweepArgs),
    /// Monte Carlo check that the truncated family absorbs random finite subsets.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Built-in instance: ex41, ex42, countable_gap, countable_reducible.
    #[arg(long, group = "source")]
    builtin: Option<String>,
    /// Instance file.
    #[arg(long, group = "source")]
    instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Comma-separated objective c; defaults to all ones (builtins) or the file's objective.
    #[arg(long, allow_hyphen_values = true)]
    objective: Option<String>,
    /// Points per interval factor, optionally a second value for the second factor.
    #[arg(long, default_value = "201")]
    grid: String,
    /// Largest countable index sampled.
    #[arg(long, default_value_t = 50)]
    cap: u64,
    #[arg(long)]
    feas_tol: Option<f64>,
    #[arg(long)]
    pivot_tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[command(flatten)]
    common: Common,
    /// singletons | prefixes[:M] | bounded[:K]
    #[arg(long, default_value = "singletons")]
    family: String,
    /// Maximum number of subsets solved.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    /// Refine the best singleton off the grid (interval index sets).
    #[arg(long)]
    refine: bool,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// `auto` (validated upper bound on the doubled grid, minus 1e-5) or a number.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    alpha: String,
    /// Also write the certificate to this file.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Debug, Args)]
struct ChainArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 1e-5)]
    decision_tol: f64,
}

#[derive(Debug, Args)]
struct PrefixArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 100)]
    m_max: u64,
    /// Fraction of the trace used for limit estimates.
    #[arg(long, default_value_t = 0.5)]
    tail: f64,
    /// Freeze the interval coordinate of a product index at this value.
    #[arg(long, allow_hyphen_values = true)]
    freeze: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// File of shift points y, one per line.
    #[arg(long)]
    shifts: PathBuf,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    min_card: usize,
    #[arg(long, default_value_t = 3)]
    max_card: usize,
}

/// Failure of one invocation, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericalBreakdown(_) => EXIT_NUMERICAL,
            Error::BoundednessRequired => EXIT_CERTIFICATE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Self {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(String, i32), Failure>;

fn parse_reals(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| match t.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Failure::usage(format!("{what}: expected finite numbers, found `{t}`"))),
        })
        .collect()
}

fn tolerances(c: &Common) -> Result<ToleranceConfig, Failure> {
    let mut tol = ToleranceConfig::default();
    for (field, v, name) in [(&mut tol.feas_tol, c.feas_tol, "--feas-tol"), (&mut tol.pivot_tol, c.pivot_tol, "--pivot-tol")] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::usage(format!("{name} must be positive")));
            }
            *field = v;
        }
    }
    Ok(tol)
}

fn grid(c: &Common) -> Result<Grid, Failure> {
    let parts: Vec<&str> = c.grid.split(',').collect();
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(format!("--grid: expected integers, found `{t}`")))
    };
    let resolution = match parts.as_slice() {
        [r] => [parse(r)?; 2],
        [r1, r2] => [parse(r1)?, parse(r2)?],
        _ => return Err(Failure::usage("--grid takes one or two resolutions")),
    };
    if resolution.iter().any(|&r| r < 2) || c.cap < 1 {
        return Err(Error::InvalidResolution.into());
    }
    Ok(Grid { resolution, cap: c.cap })
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn instance(c: &Common) -> Result<LipInstance, Failure> {
    let objective = c.objective.as_deref().map(|s| parse_reals(s, "--objective")).transpose()?;
    if let Some(name) = &c.source.builtin {
        if !BUILTIN_NAMES.contains(&name.as_str()) {
            return Err(Failure::usage(format!(
                "unknown built-in `{name}` (choose from {})",
                BUILTIN_NAMES.join(", ")
            )));
        }
        let objective = match objective {
            Some(o) => o,
            None => vec![1.0; builtin_dim(name)?],
        };
        return Ok(builtin_instance(name, &objective)?);
    }
    let path = c.source.instance.as_ref().expect("clap enforces one source");
    let inst = parse_instance(&read(path)?)?;
    match objective {
        Some(o) => Ok(inst.with_objective(DenseVector::new(o)?)?),
        None => Ok(inst),
    }
}

fn builtin_dim(name: &str) -> Result<usize, Failure> {
    match builtin_instance(name, &[1.0]) {
        Ok(_) => Ok(1),
        Err(Error::DimensionMismatch { found, .. }) => Ok(found),
        Err(e) => Err(e.into()),
    }
}

fn family(spec: &str, inst: &LipInstance, grid: &Grid) -> Result<FamilySpec, Failure> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let num = |default: usize| -> Result<usize, Failure> {
        match arg {
            None => Ok(default),
            Some(a) => match a.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(Failure::usage(format!("--family: bad size `{a}`"))),
            },
        }
    };
    match kind {
        "singletons" if arg.is_none() => Ok(FamilySpec::Singletons),
        "prefixes" => Ok(FamilySpec::Prefixes {
            max: num(usize::try_from(grid.cap).unwrap_or(usize::MAX))?,
        }),
        "bounded" => Ok(FamilySpec::BoundedSubsets {
            max_card: num(inst.dim() + 1)?,
        }),
        _ => Err(Failure::usage(format!(
            "--family: expected singletons, prefixes[:M] or bounded[:K], found `{spec}`"
        ))),
    }
}

struct Setup {
    inst: LipInstance,
    grid: Grid,
    tol: ToleranceConfig,
    format: OutputFormat,
}

fn setup(c: &Common, default_format: OutputFormat) -> Result<Setup, Failure> {
    Ok(Setup {
        tol: tolerances(c)?,
        grid: grid(c)?,
        inst: instance(c)?,
        format: c.format.unwrap_or(default_format),
    })
}

fn bounds_opts(tol: ToleranceConfig) -> BoundsOptions {
    BoundsOptions {
        tol,
        ..BoundsOptions::default()
    }
}

fn search_opts(f: &FamilyArgs, tol: ToleranceConfig) -> SearchOptions {
    SearchOptions {
        budget: f.budget,
        refine: f.refine,
        tol,
    }
}

fn render(format: OutputFormat, text: impl FnOnce() -> String, csv: impl FnOnce() -> String) -> String {
    match format {
        OutputFormat::Text => text(),
        OutputFormat::Csv => csv(),
    }
}

fn solve(a: &SolveArgs) -> Outcome {
    let s = setup(&a.common, OutputFormat::Text)?;
    let r = primal_bounds(&s.inst, &s.grid, &bounds_opts(s.tol))?;
    Ok((render(s.format, || report::solve_text(&r), || report::solve_csv(&r)), EXIT_OK))
}

fn dual(a: &FamilyArgs) -> Outcome {
    let s = setup(&a.common, OutputFormat::Text)?;
    let spec = family(&a.family, &s.inst, &s.grid)?;
    let b = sup_dual_over_family(&s.inst, &spec, &s.grid, &search_opts(a, s.tol))?;
    Ok((render(s.format, || report::dual_text(&b), || report::dual_csv(&b)), EXIT_OK))
}

fn certify(a: &CertifyArgs) -> Outcome {
    let f = &a.family;
    let s = setup(&f.common, OutputFormat::Text)?;
    let spec = family(&f.family, &s.inst, &s.grid)?;
    let alpha = if a.alpha == "auto" {
        let b = primal_bounds(&s.inst, &s.grid.doubled(), &bounds_opts(s.tol))?;
        b.upper - AUTO_ALPHA_OFFSET
    } else {
        parse_reals(&a.alpha, "--alpha")?
            .first()
            .copied()
            .filter(|_| !a.alpha.contains(','))
            .ok_or_else(|| Failure::usage("--alpha takes a single number or `auto`"))?
    };
    let opts = CertifyOptions {
        budget: f.budget,
        refine: true,
        tol: s.tol,
    };
    let outcome = certify_reducibility(&s.inst, &spec, alpha, &s.grid, &opts)?;
    if let (Some(path), CertifyOutcome::Found(_)) = (&a.cert, &outcome) {
        std::fs::write(path, report::certify_text(&outcome))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let code = match outcome {
        CertifyOutcome::Found(_) => EXIT_OK,
        CertifyOutcome::NotFoundWithinBudget { .. } => EXIT_CERTIFICATE,
    };
    Ok((
        render(s.format, || report::certify_text(&outcome), || report::certify_csv(&outcome, alpha)),
        code,
    ))
}

fn verify(a: &VerifyArgs) -> Outcome {
    let inst = instance(&a.common)?;
    let cert = parse_certificate(&read(&a.cert)?, inst.index_set())?;
    let verdict = match cert.verify(&inst) {
        Ok(v) => v.map_err(|e| format!("{e:?}")),
        Err(Error::IndexOutOfRange) => Err("IndexOutOfRange".into()),
        Err(e) => return Err(e.into()),
    };
    Ok(match verdict {
        Ok(()) => ("valid\n".into(), EXIT_OK),
        Err(why) => (format!("invalid: {why}\n"), EXIT_CERTIFICATE),
    })
}

fn chain(a: &ChainArgs) -> Outcome {
    let f = &a.family;
    let s = setup(&f.common, OutputFormat::Text)?;
    let spec = family(&f.family, &s.inst, &s.grid)?;
    if !(a.decision_tol.is_finite() && a.decision_tol > 0.0) {
        return Err(Failure::usage("--decision-tol must be positive"));
    }
    let opts = ChainOptions {
        decision_tol: a.decision_tol,
        search: SearchOptions {
            refine: true,
            ..search_opts(f, s.tol)
        },
        bounds: bounds_opts(s.tol),
    };
    let r = theorem_chain_report(&s.inst, &spec, &s.grid, &opts)?;
    Ok((render(s.format, || report::chain_text(&r), || report::chain_csv(&r)), EXIT_OK))
}

fn prefix(a: &PrefixArgs) -> Outcome {
    let s = setup(&a.common, OutputFormat::Text)?;
    if !(a.tail > 0.0 && a.tail <= 1.0) {
        return Err(Failure::usage("--tail must lie in (0, 1]"));
    }
    let opts = PrefixOptions {
        product: match a.freeze {
            Some(t) => ProductMode::Frozen(t),
            None => ProductMode::MaxOverGrid {
                resolution: s.grid.resolution[0],
            },
        },
        tol: s.tol,
        ..PrefixOptions::default()
    };
    let trace = prefix_trace(&s.inst, a.m_max, &opts)?;
    let limit = if trace.m_values.len() >= MIN_TRACE_LEN {
        Some(limit_report(&trace, a.tail)?)
    } else {
        None
    };
    Ok((
        render(s.format, || report::prefix_text(&trace, limit.as_ref()), || report::prefix_csv(&trace)),
        EXIT_OK,
    ))
}

fn sweep(a: &SweepArgs) -> Outcome {
    let f = &a.family;
    let s = setup(&f.common, OutputFormat::Csv)?;
    let spec = family(&f.family, &s.inst, &s.grid)?;
    let shifts = parse_shifts(&read(&a.shifts)?, s.inst.dim())?;
    let search = search_opts(f, s.tol);
    let bounds = bounds_opts(s.tol);
    let points = shifts
        .into_iter()
        .map(|y| {
            let r = strong_duality_at(&s.inst, &spec, &y, &s.grid, &search, &bounds)?;
            Ok((y, r))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((render(s.format, || report::sweep_text(&points), || report::sweep_csv(&points)), EXIT_OK))
}

fn probe(a: &ProbeArgs) -> Outcome {
    let f = &a.family;
    let s = setup(&f.common, OutputFormat::Text)?;
    let spec = family(&f.family, &s.inst, &s.grid)?;
    let sampled = sample_index_set(s.inst.index_set(), &s.grid)?;
    let probe = CoveringProbe {
        trials: a.trials,
        min_card: a.min_card,
        max_card: a.max_card,
        budget: f.budget,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let r = directed_covering_probe(&spec, s.inst.index_set(), &sampled, &probe, &mut rng)?;
    Ok((render(s.format, || report::probe_text(&r), || report::probe_csv(&r)), EXIT_OK))
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    let c = match cmd {
        Command::Solve(a) => &a.common,
        Command::Dual(a) => &a.common,
        Command::Certify(a) => &a.family.common,
        Command::Verify(a) => &a.common,
        Command::Chain(a) => &a.family.common,
        Command::Prefix(a) => &a.common,
        Command::Sweep(a) => &a.family.common,
        Command::Probe(a) => &a.family.common,
    };
    c.output.as_ref()
}

/// Runs one invocation; `args` includes the program name. Reports go to
/// `out` (or `--output`), diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Dual(a) => dual(a),
        Command::Certify(a) => certify(a),
        Command::Verify(a) => verify(a),
        Command::Chain(a) => chain(a),
        Command::Prefix(a) => prefix(a),
        Command::Sweep(a) => sweep(a),
        Command::Probe(a) => probe(a),
    };
    match result {
        Ok((text, code)) => {
            let written = match output_path(&cli.command) {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "hdual: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "hdual: {}", f.message);
            f.code
        }
    }
}
