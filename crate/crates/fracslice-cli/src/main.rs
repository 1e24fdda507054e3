//! `fracslice` command line: runs the identity verification suite, evaluates
//! the slice operators at a point, and materializes the seeded evaluation
//! grid.
//!
//! Exit codes: 0 success, 1 at least one identity failed, 2 configuration or
//! usage error.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fracslice::fracsym::MonomialSum;
use fracslice::harness::{
    run_suite, summary_table, to_csv_bytes, to_json_bytes, write_atomic, write_reports,
};
use fracslice::quat::embed;
use fracslice::sliceops::{
    assoc_integral_map, d_caputo_left, d_caputo_left_runit, d_caputo_rightsided, d_rl_left,
    d_rl_left_runit, d_rl_rightsided, example_brackets, kernel_monomial, Variant,
};
use fracslice::theorems::{kernel_n_closed, KERNEL_N_TRUNCATION};
use fracslice::{
    ImaginaryUnit64, MonomialSum64, PlaneComplex64, Quaternion64, RunConfig64, SliceFunction64,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fracslice", version, about = "Fractional slice calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity verification suite and write reports.
    Verify(VerifyArgs),
    /// Evaluate one operator at a point.
    Eval(EvalArgs),
    /// Print the seeded evaluation grid as CSV.
    Grid(GridArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the configured reading of the contested identities.
    #[arg(long)]
    variant: Option<Variant>,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Directory receiving report.json and report.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Echo the full report to stdout in this format instead of the summary
    /// table.
    #[arg(long)]
    format: Option<ReportFormat>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Operator to apply.
    #[arg(long)]
    operator: String,
    /// Builtin function name (one, identity, kernel_monomial, example45) or
    /// an inline JSON monomial sum.
    #[arg(long, default_value = "kernel_monomial")]
    function: String,
    /// Slice unit as three comma-separated components.
    #[arg(long, default_value = "1,0,0")]
    unit: String,
    /// Evaluation point, x coordinate; defaults to the domain midpoint.
    #[arg(long)]
    x: Option<f64>,
    /// Evaluation point, y coordinate; defaults to the domain midpoint.
    #[arg(long)]
    y: Option<f64>,
    /// Real part of the kernel series expansion point (kernel_N only).
    #[arg(long)]
    zeta_x: Option<f64>,
    /// Imaginary part of the kernel series expansion point (kernel_N only).
    #[arg(long)]
    zeta_y: Option<f64>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(common: &CommonArgs) -> Result<RunConfig64> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            RunConfig64::from_json(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => RunConfig64::default(),
    };
    if let Some(v) = common.variant {
        cfg.variant = v;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn parse_unit(text: &str) -> Result<ImaginaryUnit64> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(Into::into))
        .collect::<Result<_>>()
        .with_context(|| format!("parsing unit `{text}`"))?;
    if parts.len() != 3 {
        bail!("unit needs exactly three components, got {}", parts.len());
    }
    ImaginaryUnit64::new(parts[0], parts[1], parts[2])
        .map_err(|e| anyhow::anyhow!("invalid unit `{text}`: {e}"))
}

fn build_function(spec: &str, cfg: &RunConfig64) -> Result<SliceFunction64> {
    let one = Quaternion64::one();
    let sum = match spec {
        "one" => MonomialSum::constant(cfg.domain.a, one),
        "identity" => {
            let a = cfg.domain.a;
            let c = |re: f64, im: f64| PlaneComplex64::new(re, im);
            MonomialSum::new(
                a,
                vec![
                    fracslice::fracsym::MonomialTerm::plain(c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
                    fracslice::fracsym::MonomialTerm::plain(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
                    fracslice::fracsym::MonomialTerm::plain(c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)),
                ],
            )
        }
        "kernel_monomial" => kernel_monomial(&cfg.domain, &cfg.orders, one),
        "example45" => example_brackets(
            &cfg.domain,
            &cfg.orders,
            one,
            one,
            PlaneComplex64::new(1.0, 0.0),
            PlaneComplex64::new(1.2, 0.0),
        )?,
        inline if inline.trim_start().starts_with('{') => {
            let sum: MonomialSum64 =
                serde_json::from_str(inline).context("parsing inline monomial sum")?;
            sum
        }
        other => bail!(
            "unknown function `{other}` (builtins: one, identity, kernel_monomial, example45; \
             or pass an inline JSON monomial sum)"
        ),
    };
    Ok(SliceFunction64::Symbolic(sum))
}

#[derive(Serialize)]
struct EvalOutput {
    operator: String,
    function: String,
    unit: ImaginaryUnit64,
    x: f64,
    y: f64,
    value: Quaternion64,
    warnings: Vec<String>,
}

fn cmd_eval(args: &EvalArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.common)?;
    let unit = parse_unit(&args.unit)?;
    let dom = cfg.domain;
    let x = args.x.unwrap_or_else(|| dom.a + 0.5 * (dom.b - dom.a));
    let y = args.y.unwrap_or_else(|| 0.5 * dom.c);
    let mut warnings = Vec::new();

    let value = match args.operator.as_str() {
        "kernel_N" => {
            let (zx, zy) = match (args.zeta_x, args.zeta_y) {
                (Some(zx), zy) => (zx, zy.unwrap_or(0.0)),
                _ => bail!("kernel_N needs --zeta-x (and optionally --zeta-y)"),
            };
            let zeta = PlaneComplex64::new(zx, zy);
            let (v, w) =
                kernel_n_closed(dom.a, &cfg.orders, zeta, x, y, KERNEL_N_TRUNCATION)?;
            warnings = w;
            embed(v, unit)
        }
        op => {
            let f = build_function(&args.function, &cfg)?;
            match op {
                "d_rl_left" => d_rl_left(&f, &dom, &cfg.orders, unit, x, y, &cfg.quadrature)?,
                "d_rl_left_r" => {
                    d_rl_left_runit(&f, &dom, &cfg.orders, unit, x, y, &cfg.quadrature)?
                }
                "d_rl_rightsided" => {
                    d_rl_rightsided(&f, &dom, &cfg.orders, unit, x, y, &cfg.quadrature)?
                }
                "d_caputo_left" => {
                    d_caputo_left(&f, &dom, &cfg.orders, unit, x, y, &cfg.quadrature)?
                }
                "d_caputo_left_r" => {
                    d_caputo_left_runit(&f, &dom, &cfg.orders, unit, x, y, &cfg.quadrature)?
                }
                "d_caputo_rightsided" => {
                    d_caputo_rightsided(&f, &dom, &cfg.orders, unit, x, y, &cfg.quadrature)?
                }
                "assoc_map" => assoc_integral_map(
                    &f,
                    &dom,
                    &cfg.orders,
                    cfg.variant,
                    unit,
                    x,
                    y,
                    &cfg.quadrature,
                )?,
                other => bail!(
                    "unknown operator `{other}` (expected d_rl_left, d_rl_left_r, \
                     d_rl_rightsided, d_caputo_left, d_caputo_left_r, d_caputo_rightsided, \
                     assoc_map, kernel_N)"
                ),
            }
        }
    };

    let out = EvalOutput {
        operator: args.operator.clone(),
        function: args.function.clone(),
        unit,
        x,
        y,
        value,
        warnings,
    };
    let bytes = to_json_bytes(&out)?;
    std::io::Write::write_all(&mut std::io::stdout().lock(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.common)?;
    let report = run_suite(&cfg)?;
    let (json_path, csv_path) = write_reports(&report, &args.out)?;
    match args.format {
        Some(ReportFormat::Json) => {
            let bytes = to_json_bytes(&report)?;
            std::io::Write::write_all(&mut std::io::stdout().lock(), &bytes)?;
        }
        Some(ReportFormat::Csv) => {
            let bytes = to_csv_bytes(&report);
            std::io::Write::write_all(&mut std::io::stdout().lock(), &bytes)?;
        }
        None => {
            print!("{}", summary_table(&report));
            println!("reports: {} {}", json_path.display(), csv_path.display());
        }
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_grid(args: &GridArgs) -> Result<ExitCode> {
    let cfg = load_config(&args.common)?;
    let grid = cfg.grid();
    let mut out = String::from("u1,u2,u3,x,y,w,qx1,qx2,qx3\n");
    for p in grid.points(&cfg.domain) {
        let (u1, u2, u3) = p.unit.components();
        let q = p.as_quaternion();
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            u1, u2, u3, p.x, p.y, q.w, q.x1, q.x2, q.x3
        );
    }
    match &args.out {
        Some(path) => write_atomic(path, out.as_bytes())?,
        None => print!("{out}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Grid(args) => cmd_grid(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
