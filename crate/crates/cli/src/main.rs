use clap::{Parser, Subcommand};
use msk::runner::{run_command, CliError, Command, RunConfig};
use msk::config::parse_config;
use msk_core::TruncationPolicy;
use std::path::PathBuf;

/// Model-space kernel experiments on the unit disk.
///
/// An inner function I = B·S_mu is described by a JSON config (see
/// `--help-config` equivalent in the README): a Blaschke zero set, a
/// discrete singular measure, and optionally a weight function phi.
/// All angles are radians. Conditions are evaluated at the boundary point
/// 1 (angle 0); probe any other boundary point by rotating the spec data.
#[derive(Parser)]
#[command(name = "msk", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to the JSON config file.
    #[arg(long, value_name = "PATH", conflicts_with = "config_json")]
    config: Option<PathBuf>,

    /// Inline JSON config (alternative to --config).
    #[arg(long, value_name = "JSON")]
    config_json: Option<String>,

    /// CSV output path (atomically replaced). Without it only the summary
    /// is printed.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Optional SVG log-log polyline of the tabulated quantity.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Smallest dyadic index: probe radii are rho_N = 1 - 2^-N.
    #[arg(long, value_name = "K", default_value_t = 8)]
    n_min: u32,

    /// Largest dyadic index (at most 40).
    #[arg(long, value_name = "K", default_value_t = 24)]
    n_max: u32,

    /// Relative tolerance for certified series truncation.
    #[arg(long, value_name = "X")]
    rel_tol: Option<f64>,

    /// Absolute tolerance floor for certified series truncation.
    #[arg(long, value_name = "X")]
    abs_tol: Option<f64>,

    /// Cap on explicitly summed series terms.
    #[arg(long, value_name = "M")]
    max_terms: Option<usize>,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate |I(rho_N)| and the squared kernel norm on dyadic radii.
    Evaluate(CommonArgs),
    /// Check the first-power, second-power, and phi-weighted boundary
    /// conditions at 1, plus the discrete Carleson-Vasyunin sup.
    Check(CommonArgs),
    /// Tabulate kernel growth against the phi-bound and fit the exponent.
    Growth(CommonArgs),
    /// Reproduce the discrete-measure two-sided growth experiment
    /// (config: section3 family with epsilon, phi power with gamma).
    Example3(CommonArgs),
    /// Run the sampling-sequence lower-growth construction on the
    /// section3 measure.
    Lowerbound {
        #[command(flatten)]
        common: CommonArgs,

        /// Coefficient decay: beta_n = n^(-(1+eta)/2).
        #[arg(long, value_name = "E", default_value_t = 0.1)]
        eta: f64,

        /// Comma-separated probe indices N.
        #[arg(long, value_name = "LIST", value_delimiter = ',',
              default_value = "100,1000,10000")]
        n_list: Vec<usize>,
    },
}

fn assemble(
    common: &CommonArgs,
    eta: f64,
    n_list: Vec<usize>,
    default_policy: TruncationPolicy,
) -> Result<RunConfig, CliError> {
    let text = match (&common.config, &common.config_json) {
        (Some(path), None) => std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => {
            return Err(CliError::Config(
                "exactly one of --config or --config-json is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let doc = parse_config(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let mut policy = default_policy;
    if let Some(r) = common.rel_tol {
        if !(r > 0.0) {
            return Err(CliError::Config(format!("--rel-tol must be positive, got {r}")));
        }
        policy.rel_tol = r;
    }
    if let Some(a) = common.abs_tol {
        if !(a > 0.0) {
            return Err(CliError::Config(format!("--abs-tol must be positive, got {a}")));
        }
        policy.abs_tol = a;
    }
    if let Some(m) = common.max_terms {
        if m == 0 {
            return Err(CliError::Config("--max-terms must be at least 1".into()));
        }
        policy.max_terms = m;
    }
    Ok(RunConfig {
        doc,
        policy,
        n_min: common.n_min,
        n_max: common.n_max,
        eta,
        n_list,
        out: common.out.clone(),
        svg: common.svg.clone(),
    })
}

fn main() {
    let cli = Cli::parse();
    // dyadic sweeps default to a policy that reaches N = 24 out of the box;
    // the series-probe commands keep the stricter library default
    let sweep_policy =
        TruncationPolicy { rel_tol: 1e-8, abs_tol: 1e-12, max_terms: 100_000_000 };
    let result = match &cli.command {
        Sub::Evaluate(c) => {
            assemble(c, 0.1, vec![], sweep_policy).and_then(|cfg| run_command(Command::Evaluate, &cfg))
        }
        Sub::Check(c) => assemble(c, 0.1, vec![], TruncationPolicy::default())
            .and_then(|cfg| run_command(Command::Check, &cfg)),
        Sub::Growth(c) => {
            assemble(c, 0.1, vec![], sweep_policy).and_then(|cfg| run_command(Command::Growth, &cfg))
        }
        Sub::Example3(c) => {
            assemble(c, 0.1, vec![], sweep_policy).and_then(|cfg| run_command(Command::Example3, &cfg))
        }
        Sub::Lowerbound { common, eta, n_list } => {
            // the construction needs ~1% accuracy; the certified term
            // majorant makes tighter defaults needlessly slow
            let lb_policy =
                TruncationPolicy { rel_tol: 0.01, abs_tol: 1e-9, max_terms: 1 << 31 };
            assemble(common, *eta, n_list.clone(), lb_policy)
                .and_then(|cfg| run_command(Command::Lowerbound, &cfg))
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
