//! Command execution: each subcommand delegates to one headline library
//! operation, writes an optional CSV (and SVG), and prints a short summary
//! to stdout.

use crate::config::ConfigDoc;
use crate::output::{fmt_f64, write_csv, write_loglog_svg};
use msk_core::asymptotics::{fit_growth_exponent, section3_experiment, verify_upper_bound, AsymptoticsError};
use msk_core::conditions::{
    ahern_clark_sum, carleson_vasyunin_discrete, frostman_sum, phi_condition_sum, ConditionError,
    ConditionReport, Verdict,
};
use msk_core::eval::{inner_modulus, kernel_norm_sq, EvalError};
use msk_core::lowerbound::lower_growth_check;
use msk_core::{AdmissiblePhi, SingularFamily, SingularMeasureSpec, TruncationPolicy};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evaluate,
    Check,
    Growth,
    Example3,
    Lowerbound,
}

/// Fully resolved run parameters: parsed config document plus command-line
/// knobs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub doc: ConfigDoc,
    pub policy: TruncationPolicy,
    pub n_min: u32,
    pub n_max: u32,
    /// Coefficient decay for `lowerbound` (β_n = n^{-(1+η)/2}).
    pub eta: f64,
    /// Probe indices for `lowerbound`.
    pub n_list: Vec<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Truncation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 config, 3 precondition, 4 truncation exhausted, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Truncation(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::TruncationExhausted { .. } => CliError::Truncation(format!(
                "{e}; raise --max-terms or relax --rel-tol"
            )),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<ConditionError> for CliError {
    fn from(e: ConditionError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<AsymptoticsError> for CliError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::Eval(inner) => inner.into(),
            AsymptoticsError::Condition(inner) => inner.into(),
            AsymptoticsError::BadRange { .. } => CliError::Config(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::ConvergentCertified => "ConvergentCertified",
        Verdict::FiniteExplicit => "FiniteExplicit",
        Verdict::Inconclusive => "Inconclusive",
        Verdict::DivergentCertified => "DivergentCertified",
    }
}

/// Run one command. Returns the summary that was printed.
pub fn run_command(cmd: Command, cfg: &RunConfig) -> Result<String, CliError> {
    let summary = match cmd {
        Command::Evaluate => run_evaluate(cfg)?,
        Command::Check => run_check(cfg)?,
        Command::Growth => run_growth(cfg)?,
        Command::Example3 => run_example3(cfg)?,
        Command::Lowerbound => run_lowerbound(cfg)?,
    };
    println!("{summary}");
    Ok(summary)
}

fn run_evaluate(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = &cfg.doc.spec;
    let mut rows = Vec::new();
    let mut last = (0.0, 0.0);
    for n in cfg.n_min..=cfg.n_max {
        let gap = 2.0_f64.powi(-(n as i32));
        let rho = 1.0 - gap;
        let m = inner_modulus(spec, rho, &cfg.policy)?;
        let k = kernel_norm_sq(spec, rho, &cfg.policy)?;
        last = (m.modulus, k.value);
        rows.push(vec![
            n.to_string(),
            fmt_f64(rho),
            fmt_f64(m.modulus),
            fmt_f64(m.log_modulus),
            fmt_f64(k.value),
        ]);
    }
    if let Some(path) = &cfg.out {
        write_csv(path, "N,rho,abs_inner,log_abs_inner,ksq", rows)?;
    }
    Ok(format!(
        "evaluate: dyadic N in [{}, {}]; at N={}: |I| = {:.6}, ksq = {:.6e}",
        cfg.n_min, cfg.n_max, cfg.n_max, last.0, last.1
    ))
}

fn condition_row(name: &str, r: &ConditionReport) -> Vec<String> {
    vec![
        name.to_string(),
        fmt_f64(r.partial_value),
        r.tail_bound.map(fmt_f64).unwrap_or_else(|| "unavailable".to_string()),
        verdict_name(r.verdict).to_string(),
        r.terms_used.to_string(),
    ]
}

fn run_check(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = &cfg.doc.spec;
    let mut rows = Vec::new();
    let mut lines = Vec::new();

    let f = frostman_sum(spec, 0.0, &cfg.policy)?;
    lines.push(format!("first-power (F-type): {}", verdict_name(f.verdict)));
    rows.push(condition_row("first_power", &f));

    let ac = ahern_clark_sum(spec, 0.0, &cfg.policy)?;
    lines.push(format!("second-power (AC-type): {}", verdict_name(ac.verdict)));
    rows.push(condition_row("second_power", &ac));

    if let Some(phi) = &cfg.doc.phi {
        let p = phi_condition_sum(spec, phi, 0.0, &cfg.policy)?;
        lines.push(format!("grcond: {}", verdict_name(p.verdict)));
        rows.push(condition_row("phi_condition", &p));
    }

    if !spec.singular.is_empty() {
        let cv = carleson_vasyunin_discrete(&spec.singular, 1..=100_000)?;
        lines.push(format!(
            "discrete CV sup: {:.6} ({})",
            cv.partial_value,
            verdict_name(cv.verdict)
        ));
        rows.push(condition_row("carleson_vasyunin", &cv));
    }

    if let Some(path) = &cfg.out {
        write_csv(path, "condition,partial_value,tail_bound,verdict,terms_used", rows)?;
    }
    Ok(lines.join("\n"))
}

fn run_growth(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = &cfg.doc.spec;
    let phi = cfg
        .doc
        .phi
        .as_ref()
        .ok_or_else(|| CliError::Config("growth requires a \"phi\" entry in the config".into()))?;
    let chk = verify_upper_bound(spec, phi, cfg.n_min, cfg.n_max, &cfg.policy)?;
    write_growth_outputs(cfg, &chk.table)?;
    if spec.is_identity() {
        return Ok("growth: trivial model space (I == 1, all kernel norms vanish)".to_string());
    }
    let fit = fit_growth_exponent(&chk.table).map_err(CliError::from)?;
    let mut out = format!(
        "growth: fitted ksq slope {:.4} +- {:.4} over N in [{}, {}]; sup ratio {:.6}; tail {}",
        fit.slope,
        fit.stderr,
        cfg.n_min,
        cfg.n_max,
        chk.sup_ratio,
        if chk.monotone_within_slack { "non-increasing (5% slack)" } else { "NOT settling" },
    );
    if let Some(w) = &chk.hypothesis_warning {
        out.push_str(&format!("\nwarning: {w}"));
    }
    Ok(out)
}

fn write_growth_outputs(
    cfg: &RunConfig,
    table: &msk_core::asymptotics::GrowthTable,
) -> Result<(), CliError> {
    if let Some(path) = &cfg.out {
        let rows = table.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                fmt_f64(r.rho),
                fmt_f64(r.ksq),
                fmt_f64(r.bound),
                fmt_f64(r.ratio),
            ]
        });
        write_csv(path, "N,rho,ksq,bound,ratio", rows)?;
    }
    if let Some(path) = &cfg.svg {
        let pts: Vec<(f64, f64)> =
            table.rows.iter().map(|r| (1.0 / (1.0 - r.rho), r.ksq)).collect();
        write_loglog_svg(path, &pts, "log-log kernel growth")?;
    }
    Ok(())
}

fn section3_eps(cfg: &RunConfig) -> Result<f64, CliError> {
    match &cfg.doc.spec.singular {
        SingularMeasureSpec::Family(SingularFamily::Section3 { epsilon, .. }) => Ok(*epsilon),
        _ => Err(CliError::Config(
            "this command needs a section3 singular family in the config".into(),
        )),
    }
}

fn run_example3(cfg: &RunConfig) -> Result<String, CliError> {
    let eps = section3_eps(cfg)?;
    if !cfg.doc.spec.blaschke.is_empty() {
        return Err(CliError::Config(
            "example3 runs on the pure section3 measure; remove the blaschke entry".into(),
        ));
    }
    let gamma = match cfg.doc.phi {
        Some(AdmissiblePhi::Power { p }) => p,
        _ => {
            return Err(CliError::Config(
                "example3 requires phi of kind \"power\" (gamma)".into(),
            ))
        }
    };
    let rep = section3_experiment(eps, gamma, cfg.n_min, cfg.n_max, &cfg.policy)?;
    write_growth_outputs(cfg, &rep.table)?;
    Ok(format!(
        "example3: fitted ksq slope {:.2} (theory 2-eps = {:.2}; Thm-2.1 ceiling 2-gamma = {:.2}); grcond: {}",
        rep.fit.slope,
        rep.two_sided_exponent,
        rep.phi_ceiling_exponent,
        verdict_name(rep.condition.verdict)
    ))
}

fn run_lowerbound(cfg: &RunConfig) -> Result<String, CliError> {
    let eps = section3_eps(cfg)?;
    if !cfg.doc.spec.blaschke.is_empty() {
        return Err(CliError::Config(
            "lowerbound runs on the pure section3 measure; remove the blaschke entry".into(),
        ));
    }
    if !(cfg.eta > 0.0) {
        return Err(CliError::Config(format!("--eta must be positive, got {}", cfg.eta)));
    }
    if cfg.n_list.is_empty() || cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("--n-list must be strictly increasing".into()));
    }
    let run = lower_growth_check(eps, cfg.eta, &cfg.n_list, &cfg.policy)?;
    if let Some(path) = &cfg.out {
        let rows = run.rows.iter().map(|r| {
            vec![r.n.to_string(), fmt_f64(r.re_f), fmt_f64(r.norm_ratio)]
        });
        write_csv(path, "N,re_f,norm_ratio", rows)?;
    }
    if let Some(path) = &cfg.svg {
        let pts: Vec<(f64, f64)> = run.rows.iter().map(|r| (r.n as f64, r.re_f)).collect();
        write_loglog_svg(path, &pts, "log-log lower-bound growth")?;
    }
    let ratios: Vec<String> =
        run.rows.iter().map(|r| format!("{:.4}", r.norm_ratio)).collect();
    Ok(format!(
        "lowerbound: eps = {eps}, eta = {}; norm ratios [{}]; {}",
        cfg.eta,
        ratios.join(", "),
        if run.bounded_below { "bounded below (min >= 0.1 median)" } else { "NOT bounded below" }
    ))
}
