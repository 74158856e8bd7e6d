//! Kernel-growth tables on dyadic radii, log-log exponent fitting, and the
//! one-sided upper-bound check `‖k_r‖² ≲ φ(1-r)/(1-r)²`.
//!
//! The probe radii are `ρ_N = 1 - 2^{-N}`: exactly representable gaps, one
//! table row per `N`. Fitting `log ‖k_ρ‖²` against `log(1/(1-ρ)) = N·ln 2`
//! estimates the squared-norm growth exponent; for the section3 measure the
//! two-sided value is `2-ε`, strictly below the `2-γ` ceiling the φ-bound
//! provides whenever `γ < ε` — which is the whole point of the
//! [`section3_experiment`] bundle.

use crate::conditions::{phi_condition_sum, ConditionError, ConditionReport, Verdict};
use crate::eval::{kernel_norm_sq, EvalError, TruncationPolicy};
use crate::inner_core::{
    make_section3_measure, phi_eval, AdmissiblePhi, BlaschkeSpec, InnerFunctionSpec,
};
use thiserror::Error;

/// One probe row: `ρ = 1-2^{-N}`, the squared kernel norm there, the
/// φ-bound `φ(1-ρ)/(1-ρ)²`, and their ratio.
#[derive(Debug, Clone, Copy)]
pub struct GrowthRow {
    pub n: u32,
    pub rho: f64,
    pub ksq: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error("dyadic range must satisfy 1 <= n_min < n_max <= 40, got [{n_min}, {n_max}]")]
    BadRange { n_min: u32, n_max: u32 },
    #[error("fit needs at least 3 rows with positive kernel norm, got {0}")]
    DegenerateFit(usize),
    #[error("parameter {name} = {value} outside (1, 2)")]
    Parameter { name: &'static str, value: f64 },
}

/// Tabulate `‖k_{ρ_N}^I‖²` against the φ-bound for `N ∈ [n_min, n_max]`.
/// `n_max ≤ 40`: past that, `1-ρ` exhausts the resolution of binary64
/// relative to 1.
pub fn kernel_growth_table(
    spec: &InnerFunctionSpec,
    phi: &AdmissiblePhi,
    n_min: u32,
    n_max: u32,
    pol: &TruncationPolicy,
) -> Result<GrowthTable, AsymptoticsError> {
    if !(n_min >= 1 && n_min < n_max && n_max <= 40) {
        return Err(AsymptoticsError::BadRange { n_min, n_max });
    }
    let mut rows = Vec::with_capacity((n_max - n_min + 1) as usize);
    for n in n_min..=n_max {
        let gap = 2.0_f64.powi(-(n as i32));
        let rho = 1.0 - gap;
        let ksq = kernel_norm_sq(spec, rho, pol)?.value;
        let bound = phi_eval(phi, gap).map_err(|_| AsymptoticsError::Parameter {
            name: "phi argument",
            value: gap,
        })? / (gap * gap);
        rows.push(GrowthRow { n, rho, ksq, bound, ratio: ksq / bound });
    }
    Ok(GrowthTable { rows })
}

/// Ordinary least squares of `ln ksq` on `ln(1/(1-ρ))`.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    /// Growth exponent of the squared norm (twice the norm exponent).
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub n_points: usize,
}

pub fn fit_growth_exponent(table: &GrowthTable) -> Result<FitResult, AsymptoticsError> {
    let pts: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.ksq > 0.0)
        .map(|r| (r.n as f64 * std::f64::consts::LN_2, r.ksq.ln()))
        .collect();
    let n = pts.len();
    if n < 3 {
        return Err(AsymptoticsError::DegenerateFit(n));
    }
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_res: f64 = pts.iter().map(|p| {
        let r = p.1 - (intercept + slope * p.0);
        r * r
    }).sum();
    let stderr = if n > 2 { (ss_res / (n - 2) as f64 / sxx).sqrt() } else { 0.0 };
    Ok(FitResult { slope, intercept, stderr, n_points: n })
}

/// Outcome of the upper-bound probe.
#[derive(Debug, Clone)]
pub struct UpperBoundCheck {
    /// Sup of the ratio column.
    pub sup_ratio: f64,
    /// Whether the last half of the ratio column is non-increasing within
    /// 5% slack (`ratio_{i+1} ≤ 1.05·ratio_i`); the bound hides constants,
    /// so strict monotonicity is not expected.
    pub monotone_within_slack: bool,
    /// The φ-condition report backing the hypothesis.
    pub condition: ConditionReport,
    /// Set when the hypothesis is certified to fail (the bound need not hold).
    pub hypothesis_warning: Option<String>,
    pub table: GrowthTable,
}

/// Probe `‖k_ρ‖²(1-ρ)²/φ(1-ρ)` along dyadic radii: sup and tail-monotonicity
/// of the ratio column, with the φ-condition checked as the hypothesis.
pub fn verify_upper_bound(
    spec: &InnerFunctionSpec,
    phi: &AdmissiblePhi,
    n_min: u32,
    n_max: u32,
    pol: &TruncationPolicy,
) -> Result<UpperBoundCheck, AsymptoticsError> {
    let condition = phi_condition_sum(spec, phi, 0.0, pol)?;
    let hypothesis_warning = match condition.verdict {
        Verdict::DivergentCertified => Some(
            "phi-condition certified divergent: the kernel bound hypothesis fails".to_string(),
        ),
        Verdict::Inconclusive => {
            Some("phi-condition inconclusive: the kernel bound is not guaranteed".to_string())
        }
        _ => None,
    };
    let table = kernel_growth_table(spec, phi, n_min, n_max, pol)?;
    let sup_ratio = table.rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let half = table.rows.len() / 2;
    let tail = &table.rows[half..];
    let monotone_within_slack =
        tail.windows(2).all(|w| w[1].ratio <= 1.05 * w[0].ratio);
    Ok(UpperBoundCheck { sup_ratio, monotone_within_slack, condition, hypothesis_warning, table })
}

/// Bundle for the discrete-measure growth experiment: condition report,
/// growth table, fitted exponent, and the two exponents it should sit
/// between (`2-ε` two-sided, `2-γ` one-sided ceiling).
#[derive(Debug, Clone)]
pub struct Section3Report {
    pub eps: f64,
    pub gamma: f64,
    pub condition: ConditionReport,
    pub table: GrowthTable,
    pub fit: FitResult,
    /// `2-ε`.
    pub two_sided_exponent: f64,
    /// `2-γ`.
    pub phi_ceiling_exponent: f64,
}

pub fn section3_experiment(
    eps: f64,
    gamma: f64,
    n_min: u32,
    n_max: u32,
    pol: &TruncationPolicy,
) -> Result<Section3Report, AsymptoticsError> {
    if !(eps > 1.0 && eps < 2.0) {
        return Err(AsymptoticsError::Parameter { name: "eps", value: eps });
    }
    if !(gamma > 1.0 && gamma < 2.0) {
        return Err(AsymptoticsError::Parameter { name: "gamma", value: gamma });
    }
    let spec = InnerFunctionSpec::new(
        BlaschkeSpec::empty(),
        make_section3_measure(eps, 1000).expect("eps validated above"),
    );
    let phi = AdmissiblePhi::power(gamma);
    let condition = phi_condition_sum(&spec, &phi, 0.0, pol)?;
    let table = kernel_growth_table(&spec, &phi, n_min, n_max, pol)?;
    let fit = fit_growth_exponent(&table)?;
    Ok(Section3Report {
        eps,
        gamma,
        condition,
        table,
        fit,
        two_sided_exponent: 2.0 - eps,
        phi_ceiling_exponent: 2.0 - gamma,
    })
}
