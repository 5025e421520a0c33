use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cvqt_cli::output::{write_rows, Format};
use cvqt_cli::reproduce::{reproduce, FigureId};
use cvqt_cli::sweep::{parse_kind, run_sweep, Axis, FixedParams, GridSpec, Quantity, SweepRequest};
use cvqt_cli::verify::{run_verify, Scope};
use cvqt_core::resource::{success_probability, ResourceKind, ResourceSpec};
use cvqt_core::teleport::{
    fidelity_coherent, fidelity_sqv, fidelity_tmsc_coherent, fidelity_tmsc_sqv,
};
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

/// Teleportation fidelities and preparation probabilities for
/// photon-subtracted/added two-mode squeezed coherent resources.
#[derive(Parser)]
#[command(name = "cvqt", version, about)]
struct Cli {
    /// JSON file with default parameter values; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quantity over a parameter grid and emit a table.
    Sweep(SweepArgs),
    /// Regenerate a canonical figure dataset and run its checks.
    Reproduce(ReproduceArgs),
    /// Cross-validate the closed forms against the brute-force oracle.
    Verify(VerifyArgs),
    /// Evaluate a single parameter point.
    Eval(EvalArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Resource kind: ps, pa or tmsc (repeat or comma-separate for sweeps).
    #[arg(long, value_delimiter = ',')]
    kind: Vec<String>,
    /// Photons subtracted/added on mode 1.
    #[arg(long)]
    n1: Option<u32>,
    /// Photons subtracted/added on mode 2.
    #[arg(long)]
    n2: Option<u32>,
    /// Resource squeezing.
    #[arg(long)]
    r: Option<f64>,
    /// Transmissivity of the first beam splitter.
    #[arg(long = "T1")]
    t1: Option<f64>,
    /// Transmissivity of the second beam splitter.
    #[arg(long = "T2")]
    t2: Option<f64>,
    /// Sets both transmissivities at once.
    #[arg(long = "T")]
    t: Option<f64>,
    /// Resource displacement.
    #[arg(long)]
    d: Option<f64>,
    /// Input squeezed-vacuum squeezing.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// probability, fidelity_coherent or fidelity_sqv.
    #[arg(long)]
    quantity: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
    /// Sweep axis: r, T or epsilon.
    #[arg(long)]
    axis: Option<String>,
    /// Grid as min:max:steps.
    #[arg(long)]
    grid: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or jsonl.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// fig2, fig4, fig5, fig6, fig7, fig8 or table1 (all when omitted).
    #[arg(long)]
    figure: Option<String>,
    /// Directory for the emitted datasets.
    #[arg(long, default_value = "datasets")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// fast or full.
    #[arg(long, default_value = "fast")]
    scope: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Input state for fidelities: coherent or sqv.
    #[arg(long)]
    input: Option<String>,
}

/// Optional JSON defaults; any explicit flag overrides its entry.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigDefaults {
    quantity: Option<String>,
    kind: Option<Vec<String>>,
    n1: Option<u32>,
    n2: Option<u32>,
    axis: Option<String>,
    grid: Option<String>,
    r: Option<f64>,
    #[serde(rename = "T1")]
    t1: Option<f64>,
    #[serde(rename = "T2")]
    t2: Option<f64>,
    #[serde(rename = "T")]
    t: Option<f64>,
    d: Option<f64>,
    epsilon: Option<f64>,
    input: Option<String>,
    out: Option<String>,
    format: Option<String>,
}

struct Params {
    kinds: Vec<ResourceKind>,
    n1: u32,
    n2: u32,
    r: f64,
    t1: f64,
    t2: f64,
    d: f64,
    epsilon: f64,
}

fn resolve_params(args: &ParamArgs, cfg: &ConfigDefaults) -> Result<Params> {
    let kind_names: Vec<String> = if !args.kind.is_empty() {
        args.kind.clone()
    } else {
        cfg.kind.clone().unwrap_or_else(|| vec!["ps".into()])
    };
    let kinds = kind_names
        .iter()
        .map(|s| parse_kind(s))
        .collect::<Result<Vec<_>>>()?;
    let t_both = args.t.or(cfg.t);
    let t1 = args.t1.or(cfg.t1).or(t_both).unwrap_or(0.9);
    let t2 = args.t2.or(cfg.t2).or(t_both).unwrap_or(0.9);
    Ok(Params {
        kinds,
        n1: args.n1.or(cfg.n1).unwrap_or(1),
        n2: args.n2.or(cfg.n2).unwrap_or(1),
        r: args.r.or(cfg.r).unwrap_or(0.6),
        t1,
        t2,
        d: args.d.or(cfg.d).unwrap_or(0.5),
        epsilon: args.epsilon.or(cfg.epsilon).unwrap_or(0.3),
    })
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read config {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            match serde_json::from_str(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: invalid config {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
        }
        None => ConfigDefaults::default(),
    };
    match dispatch(cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command, cfg: &ConfigDefaults) -> Result<ExitCode> {
    match command {
        Command::Sweep(args) => cmd_sweep(args, cfg),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Eval(args) => cmd_eval(args, cfg),
    }
}

fn cmd_sweep(args: SweepArgs, cfg: &ConfigDefaults) -> Result<ExitCode> {
    let p = resolve_params(&args.params, cfg)?;
    let quantity: Quantity = args
        .quantity
        .or(cfg.quantity.clone())
        .unwrap_or_else(|| "probability".into())
        .parse()?;
    let axis: Axis = args
        .axis
        .or(cfg.axis.clone())
        .unwrap_or_else(|| "r".into())
        .parse()?;
    let grid: GridSpec = args
        .grid
        .or(cfg.grid.clone())
        .context("sweep needs --grid min:max:steps")?
        .parse()?;
    let req = SweepRequest {
        quantity,
        kinds: p.kinds,
        pairs: vec![(p.n1, p.n2)],
        axis,
        grid,
        fixed: FixedParams {
            r: p.r,
            t1: p.t1,
            t2: p.t2,
            d: p.d,
            epsilon: p.epsilon,
        },
    };
    let rows = run_sweep(&req)?;
    let format: Format = args
        .format
        .or(cfg.format.clone())
        .unwrap_or_else(|| "csv".into())
        .parse()?;
    let out = args
        .out
        .or_else(|| cfg.out.clone().map(PathBuf::from));
    match out {
        Some(path) => {
            write_rows(&path, &rows, format)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let tmp = std::env::temp_dir().join(format!("cvqt-sweep-{}.tmp", std::process::id()));
            write_rows(&tmp, &rows, format)?;
            print!("{}", std::fs::read_to_string(&tmp)?);
            let _ = std::fs::remove_file(&tmp);
        }
    }
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    if failures > 0 {
        eprintln!("{failures} grid points failed; see the error column");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<ExitCode> {
    let figures: Vec<FigureId> = match &args.figure {
        Some(name) => vec![name.parse()?],
        None => FigureId::all().to_vec(),
    };
    let mut all_ok = true;
    for figure in figures {
        let started = std::time::Instant::now();
        let result = reproduce(figure, &args.out)?;
        println!(
            "{}: {} dataset file(s) in {:.1}s",
            figure.name(),
            result.files.len(),
            started.elapsed().as_secs_f64()
        );
        for f in &result.files {
            println!("  {}", f.display());
        }
        for c in &result.checks {
            c.print();
        }
        all_ok &= result.passed();
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let scope: Scope = args.scope.parse()?;
    let started = std::time::Instant::now();
    let report = run_verify(scope)?;
    for c in &report.checks {
        c.print();
    }
    let (pass, total) = (
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len(),
    );
    println!(
        "verify {scope:?}: {pass}/{total} checks passed in {:.1}s",
        started.elapsed().as_secs_f64()
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_eval(args: EvalArgs, cfg: &ConfigDefaults) -> Result<ExitCode> {
    let p = resolve_params(&args.params, cfg)?;
    let input = args
        .input
        .or(cfg.input.clone())
        .unwrap_or_else(|| "coherent".into());
    let kind = *p.kinds.first().context("eval needs exactly one kind")?;
    if kind == ResourceKind::Tmsc {
        let f = match input.as_str() {
            "coherent" => fidelity_tmsc_coherent(p.r, p.d),
            "sqv" => fidelity_tmsc_sqv(p.r, p.d, p.epsilon),
            other => anyhow::bail!("unknown input '{other}' (expected coherent or sqv)"),
        };
        println!("kind=tmsc r={} d={}", p.r, p.d);
        println!("success_probability = 1");
        println!("fidelity ({input}) = {f:.12}");
        return Ok(ExitCode::SUCCESS);
    }
    let spec = ResourceSpec::new(kind, p.n1, p.n2, p.t1, p.t2, p.r, p.d)?;
    let prob = success_probability(&spec)?;
    let report = match input.as_str() {
        "coherent" => fidelity_coherent(&spec)?,
        "sqv" => fidelity_sqv(&spec, p.epsilon)?,
        other => anyhow::bail!("unknown input '{other}' (expected coherent or sqv)"),
    };
    println!(
        "kind={kind} n=({},{}) T=({},{}) r={} d={}",
        p.n1, p.n2, p.t1, p.t2, p.r, p.d
    );
    println!("success_probability = {prob:.12e}");
    println!("fidelity ({input}) = {:.12}", report.fidelity);
    println!(
        "imaginary_residue = {:.2e}, path = {}",
        report.imaginary_residue, report.path
    );
    Ok(ExitCode::SUCCESS)
}
