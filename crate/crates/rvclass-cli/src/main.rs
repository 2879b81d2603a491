//! Command-line front end: classify a function into the asymptotic
//! scaling classes, trace the trajectories behind the limits, or list
//! the built-in catalog.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rvclass::classifier::{empirical_report, full_report, recommended_config};
use rvclass::error::Error;
use rvclass::limit::VerdictKind;
use rvclass::logfn::{empirical_tail, load_samples_file, load_table_file};
use rvclass::{ClassificationReport, ClassName, GridMode, GridSpec, LogFunction, ReportConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rvclass",
    about = "Classify positive functions by asymptotic scaling behaviour",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every criterion on a target and print a JSON report.
    Classify(TargetArgs),
    /// Print the trajectory behind one limit as CSV.
    Trace(TraceArgs),
    /// List the built-in catalog entries.
    Catalog,
}

#[derive(Args, Default)]
struct TargetArgs {
    /// Built-in catalog entry name.
    #[arg(long)]
    catalog: Option<String>,
    /// Catalog parameter as KEY=VALUE; repeatable.
    #[arg(long)]
    param: Vec<String>,
    /// Two-column `x U(x)` table file.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Sample file (one number per line); classified via the
    /// empirical survival function.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Probe grid family; overrides the per-entry recommendation.
    #[arg(long, value_enum)]
    grid: Option<GridChoice>,
    /// Config file with KEY=VALUE lines (same keys as the flags;
    /// flags take precedence).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit JSON (the default for classify).
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// One of: orders | ratio:T | scaled:R,X
    #[arg(long)]
    quantity: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridChoice {
    Linear,
    Geometric,
}

/// A failed run: the message for stderr and the process exit code.
struct Failure {
    msg: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            msg: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Trace(args) => cmd_trace(args),
        Cmd::Catalog => cmd_catalog(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

/// Usage and input-format problems exit 2; evaluation problems exit 3.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::UnknownCatalogEntry { .. }
        | Error::BadParameter { .. }
        | Error::InvalidArgument { .. } => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

// ---------------------------------------------------------------------------
// Config-file merging
// ---------------------------------------------------------------------------

fn apply_config_file(args: &mut TargetArgs, quantity: &mut Option<String>) -> Result<(), Error> {
    let Some(path) = args.config.clone() else {
        return Ok(());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        reason: e.to_string(),
    })?;
    let bad = |line: usize, reason: String| Error::Parse {
        path: path.display().to_string(),
        line,
        reason,
    };
    let mut config_params = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(idx + 1, "expected KEY=VALUE".to_string()))?;
        let (key, value) = (key.trim(), value.trim());
        // flags always take precedence over the config file
        match key {
            "catalog" => {
                if args.catalog.is_none() {
                    args.catalog = Some(value.to_string());
                }
            }
            "table" => {
                if args.table.is_none() {
                    args.table = Some(PathBuf::from(value));
                }
            }
            "samples" => {
                if args.samples.is_none() {
                    args.samples = Some(PathBuf::from(value));
                }
            }
            "grid" => {
                if args.grid.is_none() {
                    args.grid = Some(match value {
                        "linear" => GridChoice::Linear,
                        "geometric" => GridChoice::Geometric,
                        other => {
                            return Err(bad(
                                idx + 1,
                                format!("grid must be linear or geometric, got `{other}`"),
                            ))
                        }
                    });
                }
            }
            "quantity" => {
                if quantity.is_none() {
                    *quantity = Some(value.to_string());
                }
            }
            "param" => {
                // same KEY=VALUE payload as the --param flag
                config_params.push(value.to_string());
            }
            other => return Err(bad(idx + 1, format!("unknown config key `{other}`"))),
        }
    }
    // config params go first so that a --param flag with the same key
    // wins (parameter maps keep the last occurrence)
    config_params.append(&mut args.param);
    args.param = config_params;
    Ok(())
}

// ---------------------------------------------------------------------------
// Target resolution
// ---------------------------------------------------------------------------

struct Resolved {
    target: String,
    function: LogFunction,
    config: ReportConfig,
    empirical: bool,
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, Error> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::InvalidArgument {
            reason: format!("--param expects KEY=VALUE, got `{item}`"),
        })?;
        let value: f64 = v.trim().parse().map_err(|e| Error::InvalidArgument {
            reason: format!("--param {k}: bad number `{v}`: {e}"),
        })?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

/// Orders grid fitted into a finite data domain: eight linear windows
/// over the upper part of the observed range.
fn fitted_orders_grid(y_max: f64) -> Result<GridSpec, Error> {
    if !(y_max > 0.0) {
        return Err(Error::InvalidArgument {
            reason: format!(
                "data domain ends at log x = {y_max}; tail grids need points with x > 1"
            ),
        });
    }
    let start = 0.35 * y_max;
    let step = (0.95 * y_max - start) / 8.0;
    GridSpec::linear(start, step, 8, 16)
}

fn resolve(args: &TargetArgs) -> Result<Resolved, Error> {
    let selectors =
        args.catalog.is_some() as u8 + args.table.is_some() as u8 + args.samples.is_some() as u8;
    if selectors != 1 {
        return Err(Error::InvalidArgument {
            reason: "specify exactly one of --catalog, --table, --samples".to_string(),
        });
    }

    let mut resolved = if let Some(name) = &args.catalog {
        let params = parse_params(&args.param)?;
        let (function, _) = rvclass::example(name, &params)?;
        let config = recommended_config(name, &params);
        let target = if params.is_empty() {
            name.clone()
        } else {
            let kv: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{name}({})", kv.join(","))
        };
        Resolved {
            target,
            function,
            config,
            empirical: false,
        }
    } else if let Some(path) = &args.table {
        let function = load_table_file(path)?;
        let mut config = ReportConfig::default();
        config.orders_grid = fitted_orders_grid(function.y_max())?;
        // ratio probes need headroom y + log t within the table domain
        config.t_grid = vec![2.0, 4.0];
        let end = 0.95 * function.y_max() - 4f64.ln();
        let start = 0.35 * function.y_max();
        if end > start {
            config.ratio_grid = GridSpec::linear(start, (end - start) / 8.0, 8, 16)?;
        } else {
            config.ratio_grid = config.orders_grid;
        }
        Resolved {
            target: path.display().to_string(),
            function,
            config,
            empirical: false,
        }
    } else {
        let path = args.samples.as_ref().unwrap();
        let samples = load_samples_file(path)?;
        let function = empirical_tail(&samples)?;
        let mut config = ReportConfig::default();
        config.orders_grid = fitted_orders_grid(function.y_max())?;
        config.ratio_grid = config.orders_grid;
        Resolved {
            target: path.display().to_string(),
            function,
            config,
            empirical: true,
        }
    };

    if let Some(choice) = args.grid {
        let current = resolved.config.orders_grid.mode;
        let wanted = match choice {
            GridChoice::Linear => GridMode::LinearY,
            GridChoice::Geometric => GridMode::GeometricY,
        };
        // only replace a recommendation that disagrees with the request
        if current != wanted {
            let g = match choice {
                GridChoice::Linear => GridSpec::linear(2.0, 25_000.0, 40, 16)?,
                GridChoice::Geometric => GridSpec::geometric(2.0, 2.0, 29, 32)?,
            };
            resolved.config.orders_grid = g;
            resolved.config.ratio_grid = g;
        }
    }
    Ok(resolved)
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct JsonFit {
    alpha: f64,
    beta: f64,
    c: f64,
}

#[derive(Serialize)]
struct JsonEvidence {
    name: String,
    kind: &'static str,
    spread: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    liminf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limsup: Option<f64>,
    windows: usize,
}

#[derive(Serialize)]
struct JsonReport {
    target: String,
    verdicts: BTreeMap<&'static str, &'static str>,
    rho_hat: Option<f64>,
    mu_hat: f64,
    nu_hat: f64,
    orv_fit: Option<JsonFit>,
    tau_hat: Option<f64>,
    evidence: Vec<JsonEvidence>,
    x_empirical: bool,
}

fn to_json(target: &str, report: &ClassificationReport) -> JsonReport {
    let verdicts = ClassName::ALL
        .iter()
        .map(|&c| (c.as_str(), report.verdicts[&c].as_str()))
        .collect();
    let evidence = report
        .trails
        .iter()
        .map(|(name, trail)| {
            let (kind, value, liminf, limsup) = match trail.kind {
                VerdictKind::Converges { value } => ("converges", Some(value), None, None),
                VerdictKind::DivergesPlus => ("diverges_plus", None, None, None),
                VerdictKind::DivergesMinus => ("diverges_minus", None, None, None),
                VerdictKind::Oscillates {
                    liminf_est,
                    limsup_est,
                } => ("oscillates", None, Some(liminf_est), Some(limsup_est)),
                VerdictKind::Inconclusive => ("inconclusive", None, None, None),
            };
            JsonEvidence {
                name: name.clone(),
                kind,
                spread: trail.spread,
                value,
                liminf,
                limsup,
                windows: trail.evidence.len(),
            }
        })
        .collect();
    JsonReport {
        target: target.to_string(),
        verdicts,
        rho_hat: report.rho_hat,
        mu_hat: report.mu_hat,
        nu_hat: report.nu_hat,
        orv_fit: report.orv_fit.map(|f| JsonFit {
            alpha: f.alpha_hat,
            beta: f.beta_hat,
            c: f.c_hat,
        }),
        tau_hat: report.tau_hat,
        evidence,
        x_empirical: report.empirical,
    }
}

fn cmd_classify(mut args: TargetArgs) -> Result<(), Failure> {
    let mut no_quantity = None;
    apply_config_file(&mut args, &mut no_quantity)?;
    let resolved = resolve(&args)?;
    let report = if resolved.empirical {
        empirical_report(
            &resolved.function,
            &resolved.config.orders_grid,
            &resolved.config.tols,
        )
    } else {
        full_report(&resolved.function, &resolved.config)
    };
    if let Some(first) = report.errors.first() {
        return Err(Failure {
            msg: format!("classification failed: {first}"),
            code: EXIT_NUMERIC,
        });
    }
    let json = to_json(&resolved.target, &report);
    let text = serde_json::to_string_pretty(&json).expect("report serializes");
    println!("{text}");
    Ok(())
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

enum Quantity {
    Orders,
    Ratio { t: f64 },
    Scaled { r: f64, x: f64 },
}

fn parse_quantity(raw: &str) -> Result<Quantity, Error> {
    let bad = |reason: String| Error::InvalidArgument { reason };
    if raw == "orders" {
        return Ok(Quantity::Orders);
    }
    if let Some(rest) = raw.strip_prefix("ratio:") {
        let t: f64 = rest
            .parse()
            .map_err(|e| bad(format!("ratio:T expects a number, got `{rest}`: {e}")))?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(bad(format!("ratio scale t must be positive, got {t}")));
        }
        return Ok(Quantity::Ratio { t });
    }
    if let Some(rest) = raw.strip_prefix("scaled:") {
        let (r, x) = rest
            .split_once(',')
            .ok_or_else(|| bad("scaled:R,X expects two numbers".to_string()))?;
        let r: f64 = r
            .parse()
            .map_err(|e| bad(format!("scaled exponent `{r}`: {e}")))?;
        let x: f64 = x
            .parse()
            .map_err(|e| bad(format!("scaled base point `{x}`: {e}")))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(bad(format!("scaled base point x must be positive, got {x}")));
        }
        return Ok(Quantity::Scaled { r, x });
    }
    Err(bad(format!(
        "quantity must be orders, ratio:T, or scaled:R,X, got `{raw}`"
    )))
}

fn cmd_trace(args: TraceArgs) -> Result<(), Failure> {
    let TraceArgs {
        target: mut args,
        mut quantity,
    } = args;
    apply_config_file(&mut args, &mut quantity)?;
    let quantity = quantity.ok_or_else(|| Error::InvalidArgument {
        reason: "trace requires --quantity".to_string(),
    })?;
    let quantity = parse_quantity(&quantity)?;
    let resolved = resolve(&args)?;
    let f = &resolved.function;
    let mut out = String::new();
    match quantity {
        Quantity::Orders => {
            out.push_str("y,value\n");
            for y in resolved.config.orders_grid.points() {
                let v = f.eval(y)? / y;
                out.push_str(&format!("{y},{v}\n"));
            }
        }
        Quantity::Ratio { t } => {
            let s = t.ln();
            out.push_str("s,value\n");
            for y in resolved.config.ratio_grid.points() {
                let v = f.eval(y + s)? - f.eval(y)?;
                out.push_str(&format!("{y},{v}\n"));
            }
        }
        Quantity::Scaled { r, x } => {
            let y0 = x.ln();
            let base = f.eval(y0)?;
            out.push_str("s,value\n");
            for s in resolved.config.scaled_grid.points() {
                let v = r * s + f.eval(y0 + s)? - base;
                out.push_str(&format!("{s},{v}\n"));
            }
        }
    }
    print!("{out}");
    Ok(())
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

fn cmd_catalog() -> Result<(), Failure> {
    for info in rvclass::catalog::entries() {
        println!("{}\n  params: {}\n  {}", info.name, info.params, info.summary);
    }
    Ok(())
}
