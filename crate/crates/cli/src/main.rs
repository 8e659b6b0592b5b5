use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ringmod::report::{self, compute, GridSpec, MapSpec, Quantity, Spacing, Suite, SuiteConfig};
use ringmod::{Error, QuadratureSpec};

#[derive(Parser)]
#[command(name = "ringmod", version, about = "Verify p-modulus, capacity and area-distortion estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write report.csv plus SVG plots.
    Verify(VerifyArgs),
    /// Evaluate one quantity, e.g. `compute annulus_capacity q=2 r1=0.5 r2=1`.
    Compute {
        quantity: String,
        /// Parameters as key=value.
        params: Vec<String>,
    },
    /// Redraw the plots from an existing report.
    Plot {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// infimum, modulus, capacity, area, growth, point, lipschitz or all.
    #[arg(long)]
    suite: String,
    /// JSON file with SuiteConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    r_count: Option<usize>,
    /// Geometric instead of linear radius spacing.
    #[arg(long)]
    r_geom: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(args: &VerifyArgs) -> Result<SuiteConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => SuiteConfig::from_json(&fs::read_to_string(path)?)?,
        None => SuiteConfig::default(),
    };
    cfg.suite = Suite::parse(&args.suite)?;
    if let Some(p) = &args.p {
        cfg.p_values = p.clone();
    }
    if let Some(alpha) = &args.alpha {
        cfg.maps = alpha.iter().map(|&a| MapSpec::power(a)).collect();
    }
    let GridSpec { min, max, count, spacing } = cfg.radii;
    cfg.radii = GridSpec {
        min: args.r_min.unwrap_or(min),
        max: args.r_max.unwrap_or(max),
        count: args.r_count.unwrap_or(count),
        spacing: if args.r_geom { Spacing::Geometric } else { spacing },
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<i32, Error> {
    let cfg = load_config(args)?;
    let outcome = report::run_suite(&cfg)?;
    for row in outcome.rows.iter().filter(|r| r.status == ringmod::Status::Fail) {
        eprintln!("FAIL {} {} [{}] lhs={} rhs={}", row.suite, row.check, row.params, row.lhs, row.rhs);
    }
    println!(
        "{} rows, {} failed; wrote {}",
        outcome.rows.len(),
        outcome.failures(),
        outcome.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", ")
    );
    Ok(outcome.exit_code)
}

fn plot(from: &PathBuf, out: &PathBuf) -> Result<i32, Error> {
    let rows = report::read_csv(fs::File::open(from)?)?;
    let files = report::emit_plots(&rows, out)?;
    if files.is_empty() {
        eprintln!("warning: no plottable rows in {}", from.display());
    }
    for f in files {
        println!("{}", f.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Compute { quantity, params } => Quantity::parse(quantity)
            .and_then(|q| compute(q, params, &QuadratureSpec::default()))
            .map(|out| {
                println!("{}", report::fmt_real(out.value));
                println!("error_bound {}", report::fmt_real(out.error_bound));
                0
            }),
        Command::Plot { from, out } => plot(from, out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
