//! `bindex` command-line front end.
//!
//! Exit codes: 0 holds or success, 1 fails, 2 inconclusive, 64 usage error,
//! 65 spec-file error, 70 numeric failure during a run.

mod output;
mod spec;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use bindex::criteria::SearchStep;
use bindex::index::{IndexProfile, LocalIndexResult};
use bindex::weights::validate_weight;
use bindex::*;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{num, Format, Sink};

pub enum CliError {
    Usage(String),
    Spec(String),
    Run(bindex::Error),
    Io(io::Error),
}

impl From<bindex::Error> for CliError {
    fn from(e: bindex::Error) -> Self {
        if e.is_precondition() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Run(e)
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Spec(_) => 65,
            CliError::Run(_) | CliError::Io(_) => 70,
        }
    }

    fn diagnostic(&self) -> Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Spec(m) => ("spec", m.clone()),
            CliError::Run(e) => ("run", e.to_string()),
            CliError::Io(e) => ("io", e.to_string()),
        };
        json!({"error": kind, "message": message, "exit_code": self.code()})
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "bindex", version, about = "L-index in joint variables on the unit bidisc")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

/// Polar sampling written as `NxM` (radii x angles per coordinate).
#[derive(Clone, Copy, Debug)]
struct Sampling(PolarSampling);

impl FromStr for Sampling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got `{s}`"))?;
        let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        PolarSampling::new(n(a)?, n(b)?).map(Sampling).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct FnArg {
    /// Function spec (JSON) or coefficient table (CSV).
    #[arg(long = "fn")]
    function: PathBuf,
}

#[derive(Args)]
struct WeightArg {
    /// Weight spec (JSON).
    #[arg(long)]
    weight: PathBuf,
}

#[derive(Args)]
struct CenterArg {
    /// `RE1 RE2` or `RE1 IM1 RE2 IM2`.
    #[arg(long, num_args = 2..=4, allow_negative_numbers = true, required = true)]
    center: Vec<f64>,
}

#[derive(Args)]
struct GridArgs {
    /// Polar product grid per coordinate.
    #[arg(long, default_value = "8x8")]
    grid: Sampling,
    #[arg(long, default_value_t = 0.5)]
    grid_radius: f64,
    /// Run at this single point instead of the grid.
    #[arg(long, num_args = 2..=4, allow_negative_numbers = true)]
    center: Option<Vec<f64>>,
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long, default_value_t = 12)]
    cap: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Admissibility of a weight on a grid.
    ValidateWeight {
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Grid estimates of the lambda ratios.
    Lambda {
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, num_args = 2, required = true)]
        radii: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "8x16")]
        inner: Sampling,
        /// Also report the change under one doubling of both grids.
        #[arg(long)]
        refine: bool,
    },
    /// Taylor coefficient table at a point.
    Coeffs {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        center: CenterArg,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Extract by Cauchy integrals on the skeleton with these radii.
        #[arg(long, num_args = 2)]
        rho: Option<Vec<f64>>,
        /// Samples per axis for the Cauchy extraction.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Local index at a point.
    LocalIndex {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        center: CenterArg,
        #[command(flatten)]
        index: IndexArgs,
    },
    /// Local index over exhaustion grids.
    IndexProfile {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.7,0.9,0.95")]
        levels: Vec<f64>,
        #[arg(long, default_value = "8x8")]
        grid: Sampling,
        #[command(flatten)]
        index: IndexArgs,
    },
    /// Maximum modulus on a skeleton.
    Maxmod {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        center: CenterArg,
        #[arg(long, num_args = 2, required = true)]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Max-modulus ratio between two polydisc skeletons.
    Ratio {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, num_args = 2, default_values_t = [0.5, 0.5])]
        r_inner: Vec<f64>,
        #[arg(long, num_args = 2, default_values_t = [2.0, 2.0])]
        r_outer: Vec<f64>,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Hayman-type inequality with order p.
    Hayman {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        p: usize,
        /// Index N to compare `c_min` against `((N+1)!)^2`.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Head against tail of the normalized derivative series.
    Tail {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Radius search for a main polynomial.
    MainPoly {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        a: Vec<f64>,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        d: f64,
        /// Pointwise index, checked against the first step.
        #[arg(long)]
        n0: Option<usize>,
    },
    /// Checks that one degree band is a main polynomial on a skeleton.
    VerifyMainPoly {
        #[command(flatten)]
        function: FnArg,
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        center: CenterArg,
        #[arg(long, num_args = 2, required = true)]
        radii: Vec<f64>,
        #[arg(long)]
        k0: usize,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Index profile of the worked example `exp(1/((1-z1)(1-z2)))`.
    Example1 {
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.7,0.9")]
        levels: Vec<f64>,
        #[arg(long, default_value = "8x8")]
        grid: Sampling,
        #[command(flatten)]
        index: IndexArgs,
    },
}

fn point(v: &[f64]) -> CliResult<BidiscPoint<f64>> {
    match *v {
        [a, b] => Ok(BidiscPoint::from_parts(a, 0.0, b, 0.0)?),
        [a, b, c, d] => Ok(BidiscPoint::from_parts(a, b, c, d)?),
        _ => Err(CliError::Usage(format!("--center takes 2 or 4 numbers, got {}", v.len()))),
    }
}

fn radii(v: &[f64]) -> CliResult<Radii<f64>> {
    Ok(Radii::new(v[0], v[1])?)
}

fn grid(g: &GridArgs) -> CliResult<Grid<f64>> {
    match &g.center {
        Some(c) => Ok(Grid::explicit(vec![point(c)?])),
        None => Ok(Grid::polar(g.grid_radius, g.grid.0)?),
    }
}

fn tol_check(index: &IndexArgs) -> CliResult<IndexOptions<f64>> {
    if !(index.tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be non-negative, got {}", index.tol)));
    }
    let mut o = IndexOptions::new(index.cap);
    o.tol = index.tol;
    Ok(o)
}

fn pt(p: &BidiscPoint<f64>) -> Value {
    json!([[p.z1().re, p.z1().im], [p.z2().re, p.z2().im]])
}

fn log_num(m: &LogMagnitude<f64>) -> Value {
    num(m.log_abs)
}

fn index_json(p: &BidiscPoint<f64>, r: &LocalIndexResult<f64>) -> Value {
    json!({
        "z": pt(p),
        "n0": r.n0.bounded(),
        "unbounded_at_cap": r.n0.bounded().is_none(),
        "argmax": [r.argmax_index.k1, r.argmax_index.k2],
        "log_dominating": log_num(&r.dominating_value),
        "cap": r.cap,
        "slack": num(r.slack),
        "tail_indicator": num(r.tail_indicator),
        "inconclusive": r.inconclusive.map(|x| x.to_string()),
    })
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => 1,
        Verdict::Inconclusive => 2,
    }
}

fn require_json(format: Format, cmd: &str) -> CliResult<()> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("{cmd} has no CSV output")));
    }
    Ok(())
}

fn write_profile(sink: &mut Sink, profile: &IndexProfile<f64>, format: Format) -> CliResult<()> {
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(sink.raw());
        w.write_record(["re(z1)", "im(z1)", "re(z2)", "im(z2)", "n0", "argmax_j1", "argmax_j2", "slack"])
            .map_err(|e| CliError::Io(e.into()))?;
        for level in &profile.levels {
            for (p, r) in &level.per_point {
                let n0 = match (r.inconclusive, r.n0.bounded()) {
                    (None, Some(n)) => n.to_string(),
                    _ => String::new(),
                };
                w.write_record([
                    p.z1().re.to_string(),
                    p.z1().im.to_string(),
                    p.z2().re.to_string(),
                    p.z2().im.to_string(),
                    n0,
                    r.argmax_index.k1.to_string(),
                    r.argmax_index.k2.to_string(),
                    r.slack.to_string(),
                ])
                .map_err(|e| CliError::Io(e.into()))?;
            }
        }
        w.flush()?;
        return Ok(());
    }
    let mut sups = Vec::new();
    for (i, level) in profile.levels.iter().enumerate() {
        for (p, r) in &level.per_point {
            let mut v = index_json(p, r);
            v["level"] = json!(i);
            sink.line(&v)?;
        }
        sups.push(json!({
            "level": i,
            "grid": level.grid.to_string(),
            "points": level.per_point.len(),
            "inconclusive": level.inconclusive,
            "sup": level.sup.lower_bound(),
            "sup_unbounded": level.sup.bounded().is_none(),
        }));
    }
    sink.line(&json!({"summary": {"levels": sups}}))?;
    Ok(())
}

fn step_json(s: &SearchStep<f64>) -> Value {
    json!({
        "m": s.m,
        "log_r": log_num(&s.r),
        "log_mu": log_num(&s.mu),
        "s": s.s,
        "log_mu_star": log_num(&s.mu_star),
        "s_star": s.s_star,
        "range": s.range,
    })
}

fn run(cli: Cli) -> CliResult<u8> {
    let mut sink = Sink::open(cli.out.as_deref())?;
    let format = cli.format;
    let code = match cli.cmd {
        Cmd::ValidateWeight { weight, grid: g } => {
            require_json(format, "validate-weight")?;
            let l = spec::load_weight(&weight.weight)?;
            let v = validate_weight(&l, &grid(&g)?)?;
            sink.line(&json!({
                "admissible_fraction": v.admissible_fraction,
                "worst_margin": num(v.worst_margin),
                "worst_point": pt(&v.worst_point),
            }))?;
            u8::from(v.admissible_fraction < 1.0)
        }
        Cmd::Lambda { weight, radii: r, grid: g, inner, refine } => {
            require_json(format, "lambda")?;
            let l = spec::load_weight(&weight.weight)?;
            let r = radii(&r)?;
            let outer = grid(&g)?;
            let est = lambda_bounds(&l, &r, &outer, inner.0)?;
            let mut v = json!({
                "r": [r.r1(), r.r2()],
                "lambda1": est.lambda1,
                "lambda2": est.lambda2,
                "outer_grid": est.outer_grid.to_string(),
                "inner_grid": est.inner_grid.to_string(),
                "clipped_samples": est.clipped_samples,
            });
            if refine {
                let fine = match &g.center {
                    Some(_) => lambda_bounds(&l, &r, &outer, inner.0.doubled())?,
                    None => lambda_bounds(&l, &r, &Grid::polar(g.grid_radius, g.grid.0.doubled())?, inner.0.doubled())?,
                };
                let d = |a: [f64; 2], b: [f64; 2]| [(a[0] - b[0]).abs(), (a[1] - b[1]).abs()];
                v["refined"] = json!({"lambda1": fine.lambda1, "lambda2": fine.lambda2});
                v["refinement_delta"] = json!([d(est.lambda1, fine.lambda1), d(est.lambda2, fine.lambda2)]);
            }
            sink.line(&v)?;
            0
        }
        Cmd::Coeffs { function, center, order, rho, samples } => {
            let z0 = point(&center.center)?;
            let f = spec::load_function(&function.function, None)?;
            let table = match rho {
                Some(r) => {
                    let opts = samples.map_or(CauchyOptions::for_order(order), CauchyOptions::new);
                    taylor_cauchy(&f, &z0, &radii(&r)?, order, opts)?
                }
                None if samples.is_some() => return Err(CliError::Usage("--samples needs --rho".into())),
                None => taylor_auto(&f, &z0, order)?,
            };
            write_table(&mut sink, &table, format)?;
            0
        }
        Cmd::LocalIndex { function, weight, center, index } => {
            require_json(format, "local-index")?;
            let opts = tol_check(&index)?;
            let z0 = point(&center.center)?;
            let f = spec::load_function(&function.function, Some(&z0))?;
            let l = spec::load_weight(&weight.weight)?;
            let r = local_index(&f, &l, &z0, opts)?;
            sink.line(&index_json(&z0, &r))?;
            if r.is_conclusive() {
                0
            } else {
                2
            }
        }
        Cmd::IndexProfile { function, weight, levels, grid: s, index } => {
            let opts = tol_check(&index)?;
            let f = spec::load_function(&function.function, None)?;
            let l = spec::load_weight(&weight.weight)?;
            let grids = Grid::exhaustion(&levels, s.0)?;
            let profile = index_profile(&f, &l, &grids, opts)?;
            write_profile(&mut sink, &profile, format)?;
            0
        }
        Cmd::Maxmod { function, center, radii: r, samples } => {
            require_json(format, "maxmod")?;
            let z0 = point(&center.center)?;
            let f = spec::load_function(&function.function, Some(&z0))?;
            let mm = max_modulus(&f, &z0, &radii(&r)?, samples)?;
            sink.line(&json!({"m": num(mm.m), "argmax": pt(&mm.argmax)}))?;
            0
        }
        Cmd::Ratio { function, weight, grid: g, r_inner, r_outer, samples } => {
            require_json(format, "ratio")?;
            let f = spec::load_function(&function.function, None)?;
            let l = spec::load_weight(&weight.weight)?;
            let (ri, ro) = (radii(&r_inner)?, radii(&r_outer)?);
            let mut rep = check_modulus_ratio(&f, &l, &grid(&g)?, &ri, &ro, samples)?;
            if let Some(p1) = rep.get("p1").and_then(|v| v.as_f64()) {
                if let Ok(b) = index_bound_from_ratio(&ri, &ro, p1) {
                    rep = rep.witness("index_bound", b);
                }
            }
            sink.report(&rep)?;
            verdict_code(sink.summary()?)
        }
        Cmd::Hayman { function, weight, grid: g, p, index } => {
            require_json(format, "hayman")?;
            let f = spec::load_function(&function.function, None)?;
            let l = spec::load_weight(&weight.weight)?;
            sink.report(&check_hayman(&f, &l, &grid(&g)?, p, index)?)?;
            verdict_code(sink.summary()?)
        }
        Cmd::Tail { function, weight, grid: g, n, c, cap } => {
            require_json(format, "tail")?;
            let f = spec::load_function(&function.function, None)?;
            let l = spec::load_weight(&weight.weight)?;
            sink.report(&check_tail_dominance(&f, &l, &grid(&g)?, n, c, cap)?)?;
            verdict_code(sink.summary()?)
        }
        Cmd::MainPoly { a, n, d, n0 } => {
            require_json(format, "main-poly")?;
            if a.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(CliError::Usage("--a entries must be finite and non-negative".into()));
            }
            let seq: Vec<_> = a.iter().map(|&x| LogMagnitude::from_linear(x)).collect();
            let res = find_main_polynomial(&seq, n, d, n0)?;
            sink.line(&json!({
                "m0": res.m0,
                "k0": res.k0,
                "r": num(res.r()),
                "log_r": log_num(&res.r_log),
                "c": num(res.c()),
                "log_eta": log_num(&res.eta_log),
                "d": res.d,
                "s0_within_index": res.s0_within_index,
                "trace": res.trace.iter().map(step_json).collect::<Vec<_>>(),
            }))?;
            0
        }
        Cmd::VerifyMainPoly { function, weight, center, radii: r, k0, order, samples } => {
            require_json(format, "verify-main-poly")?;
            let z0 = point(&center.center)?;
            let f = spec::load_function(&function.function, Some(&z0))?;
            let l = spec::load_weight(&weight.weight)?;
            let table = taylor_auto(&f, &z0, order)?;
            sink.report(&verify_main_polynomial(&table, &l, &z0, &radii(&r)?, k0, samples)?)?;
            verdict_code(sink.summary()?)
        }
        Cmd::Example1 { levels, grid: s, index } => {
            let opts = tol_check(&index)?;
            let grids = Grid::exhaustion(&levels, s.0)?;
            let profile = index_profile(&example1::function(), &example1::weight(), &grids, opts)?;
            write_profile(&mut sink, &profile, format)?;
            u8::from(profile.levels.iter().any(|lv| lv.sup != IndexValue::Bounded(0)))
        }
    };
    sink.finish()?;
    Ok(code)
}

fn write_table(sink: &mut Sink, table: &CoeffTable<f64>, format: Format) -> CliResult<()> {
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(sink.raw());
        w.write_record(["j1", "j2", "log_abs", "phase"]).map_err(|e| CliError::Io(e.into()))?;
        for (k, e) in table.entries() {
            let phase = e.phase.map(|p| p.to_string()).unwrap_or_default();
            w.write_record([k.k1.to_string(), k.k2.to_string(), e.log_abs.to_string(), phase])
                .map_err(|e| CliError::Io(e.into()))?;
        }
        w.flush()?;
        return Ok(());
    }
    let entries: Vec<Value> = table
        .entries()
        .map(|(k, e)| json!({"j": [k.k1, k.k2], "log_abs": log_num(e), "phase": e.phase}))
        .collect();
    sink.line(&json!({
        "center": pt(&table.center),
        "order": table.order,
        "extraction_radii": table.extraction_radii.map(|r| [r.r1(), r.r2()]),
        "tail_indicator": num(table.tail_indicator),
        "alias_warning": table.alias_warning,
        "entries": entries,
    }))?;
    Ok(())
}

fn threads() -> CliResult<()> {
    let Ok(v) = std::env::var("BINDEX_THREADS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!("BINDEX_THREADS must be a positive integer, got `{v}`"))
    })?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn fail(e: CliError) -> ExitCode {
    let _ = writeln!(io::stderr(), "{}", e.diagnostic());
    ExitCode::from(e.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(CliError::Usage(e.to_string().lines().next().unwrap_or_default().to_string())),
    };
    if let Err(e) = threads() {
        return fail(e);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(e),
    }
}
