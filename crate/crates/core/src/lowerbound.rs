//! Construction of functions with near-maximal radial growth in the model
//! space of the discrete-measure inner function.
//!
//! The measure `μ = Σ α_n δ_{ζ_n}` (atoms at `θ_n = 1/n`, `α_n = n^{-(1+ε)}`)
//! factors `S_μ = Π I_n` into elementary factors
//! `I_n = exp(α_n(z+ζ_n)/(z-ζ_n))`, and the normalised kernels
//! `K_n = k_{λ_n}^{I_n}/‖k_{λ_n}^{I_n}‖` at the sampling points
//! `λ_n = (1-1/n)e^{i/n}` form an unconditional sequence (backed by the
//! discrete Carleson–Vasyunin check in [`crate::conditions`]). Summing
//! `f_β = Σ β_n K_n` with `β_n = n^{-(1+η)/2}` produces
//! `Re f_β(λ_N) ≳ N^{1-ε/2-η/2}`, within `η` of the kernel-norm ceiling.
//!
//! Kernel norms are computed exactly from the closed form, never from their
//! `n^{(1-ε)/2}` asymptotics — the asymptotics stay test targets. All the
//! near-1 arithmetic runs through exact gaps (`1-|λ_n| = 1/n`) and
//! `sin²`-form distances.

use crate::eval::{EvalError, TruncationPolicy};
use crate::inner_core::UnitDiskPoint;
use crate::series::p_series_tail;
use num_complex::Complex64;

/// `λ_n = (1-1/n)·e^{i/n}`; `λ_1 = 0`.
pub fn sampling_point(n: usize) -> UnitDiskPoint {
    assert!(n >= 1);
    let gap = 1.0 / n as f64;
    UnitDiskPoint::from_radial_gap(gap, gap).expect("sampling points lie in the open disk")
}

/// Exponent of `I_n` at its own sampling point:
/// `α_n(λ_n+ζ_n)/(λ_n-ζ_n) = -(2-1/n)/n^ε`, real and tending to 0.
pub fn sampling_exponent(eps: f64, n: usize) -> f64 {
    let gap = 1.0 / n as f64;
    -(2.0 - gap) * (n as f64).powf(-eps)
}

/// `‖k_{λ_n}^{I_n}‖` from the closed form
/// `‖k‖² = (1-|I_n(λ_n)|²)/(1-r_n²)` with `1-r_n = 1/n` exact.
pub fn elementary_kernel_norm(eps: f64, n: usize) -> f64 {
    assert!(eps > 1.0 && eps < 2.0, "eps {eps} outside (1, 2)");
    let gap = 1.0 / n as f64;
    let x = sampling_exponent(eps, n); // negative
    let norm_sq = -((2.0 * x).exp_m1()) / (gap * (2.0 - gap));
    norm_sq.sqrt()
}

/// Coefficient sequence for `f_β = Σ β_n K_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSeq {
    /// `β_n = n^{-(1+η)/2}`, square-summable for every `η > 0`.
    PowerDecay { eta: f64 },
    /// Finitely many explicit coefficients (`β_n = 0` past the end).
    Explicit(Vec<f64>),
}

impl CoefficientSeq {
    pub fn coefficient(&self, n: usize) -> f64 {
        match self {
            CoefficientSeq::PowerDecay { eta } => {
                (-(0.5 * (1.0 + eta)) * (n as f64).ln()).exp()
            }
            CoefficientSeq::Explicit(v) => v.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// `Σ β_n²` as (partial, certified tail bound). Exact for explicit
    /// coefficients; p-series enclosure for the power family.
    pub fn sum_sq_enclosure(&self) -> (f64, f64) {
        match self {
            CoefficientSeq::PowerDecay { eta } => {
                const CUT: usize = 10_000;
                let partial: f64 =
                    (1..=CUT).map(|n| self.coefficient(n).powi(2)).sum();
                (partial, p_series_tail(1.0, 1.0 + eta, CUT))
            }
            CoefficientSeq::Explicit(v) => (v.iter().map(|b| b * b).sum(), 0.0),
        }
    }
}

/// A complex series value with a certified bound on the omitted modulus.
#[derive(Debug, Clone, Copy)]
pub struct ComplexEval {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// Majorant constant for the terms of `f_β(λ_N)`: for `n ≥ max(2N, 16)`,
/// `|β_n·K_n(λ_N)| ≤ C_MAJ·N·β_n·n^{-(1+ε)/2}` (numerator of the kernel at
/// most `3n^{-ε}`, denominator at least `1/N`, and
/// `‖k_n‖ ≥ 1.30·n^{(1-ε)/2}` once the exponent is small).
const C_MAJ: f64 = 2.31;

fn term_majorant(eps: f64, eta: f64, n_eval: usize, n: usize) -> f64 {
    C_MAJ * n_eval as f64 * (-(0.5 * (1.0 + eta) + 0.5 * (1.0 + eps)) * (n as f64).ln()).exp()
}

/// One normalised kernel term `K_n(λ_N) = k_{λ_n}^{I_n}(λ_N)/‖k_{λ_n}^{I_n}‖`.
///
/// Everything is assembled from exact gaps: with `δ = 1/N - 1/n`,
/// `1 - ρe^{iδ}` has real part `(1-ρ) + 2ρ·sin²(δ/2)`.
pub fn kernel_term(eps: f64, n: usize, n_eval: usize) -> Complex64 {
    let gn = 1.0 / n as f64;
    let g_eval = 1.0 / n_eval as f64;
    let rn = 1.0 - gn;
    let r_eval = 1.0 - g_eval;
    let nf = n as f64;
    let alpha = (-(1.0 + eps) * nf.ln()).exp();
    let x = (2.0 - gn) * alpha * nf; // (2-1/n)·n^{-ε}
    let i_at_own = (-x).exp();
    let norm = (-((-2.0 * x).exp_m1()) * nf / (2.0 - gn)).sqrt();

    // δ = angle(λ_N) - angle(ζ_n) = 1/N - 1/n, exact difference of gaps
    let delta = g_eval - gn;
    let s_half = (0.5 * delta).sin();
    let s_full = delta.sin();
    let c_full = delta.cos();

    // u = r_N·e^{iδ}; 1-u and 1+u without cancellation
    let one_minus_u = Complex64::new(g_eval + 2.0 * r_eval * s_half * s_half, -r_eval * s_full);
    let one_plus_u = Complex64::new(1.0 + r_eval * c_full, r_eval * s_full);
    let w = -alpha * one_plus_u / one_minus_u;
    let i_at_eval = w.exp();

    // 1 - conj(λ_n)·λ_N = 1 - r_n·r_N·e^{iδ}
    let gap_prod = gn + g_eval - gn * g_eval; // 1 - r_n·r_N
    let rr = rn * r_eval;
    let denom = Complex64::new(gap_prod + 2.0 * rr * s_half * s_half, -rr * s_full);
    let numer = Complex64::new(1.0, 0.0) - i_at_own * i_at_eval;
    numer / denom / norm
}

/// `f_β(λ_N) = Σ_n β_n·K_n(λ_N)`, summed in ascending `n`.
///
/// Power-decay coefficients use the closed-form term majorant for the
/// adaptive cutoff; the majorant is spot-checked against the actual terms
/// along the way and the evaluation falls back to the `max_terms` cap if a
/// violation were ever observed. Explicit coefficient lists are finite sums.
pub fn eval_f_beta(
    eps: f64,
    coeffs: &CoefficientSeq,
    n_eval: usize,
    pol: &TruncationPolicy,
) -> Result<ComplexEval, EvalError> {
    assert!(eps > 1.0 && eps < 2.0, "eps {eps} outside (1, 2)");
    assert!(n_eval >= 1);
    match coeffs {
        CoefficientSeq::Explicit(v) => {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 1..=v.len() {
                let b = v[n - 1];
                if b != 0.0 {
                    sum += b * kernel_term(eps, n, n_eval);
                }
            }
            Ok(ComplexEval { value: sum, tail_bound: 0.0, terms_used: v.len() })
        }
        CoefficientSeq::PowerDecay { eta } => {
            assert!(*eta > 0.0, "eta must be positive");
            let from = (2 * n_eval).max(16);
            let tail_power = 1.0 + 0.5 * (eps + eta);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut n = 1usize;
            let mut next_check = from;
            let mut majorant_ok = true;
            loop {
                let b = coeffs.coefficient(n);
                let term = b * kernel_term(eps, n, n_eval);
                sum += term;
                if n >= from {
                    if n >= next_check {
                        // spot-check the majorant before trusting the cutoff
                        if term.norm() > term_majorant(eps, *eta, n_eval, n) {
                            majorant_ok = false;
                        }
                        next_check = next_check.saturating_mul(2);
                    }
                    let tail =
                        p_series_tail(C_MAJ * n_eval as f64, tail_power, n);
                    if majorant_ok && tail <= pol.rel_tol * sum.norm() + pol.abs_tol {
                        return Ok(ComplexEval { value: sum, tail_bound: tail, terms_used: n });
                    }
                }
                if n >= pol.max_terms {
                    let tail = p_series_tail(C_MAJ * n_eval as f64, tail_power, n);
                    return Err(EvalError::TruncationExhausted {
                        partial: sum.re,
                        tail_bound: tail,
                        terms_used: n,
                        max_terms: pol.max_terms,
                    });
                }
                n += 1;
            }
        }
    }
}

/// One probe of the lower-growth construction.
#[derive(Debug, Clone, Copy)]
pub struct LowerBoundRow {
    pub n: usize,
    /// `Re f_β(λ_N)`.
    pub re_f: f64,
    /// `Re f_β(λ_N)·(1-|λ_N|)^{1-ε/2-η/2}`: constant-order when the growth
    /// matches the predicted exponent.
    pub norm_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct LowerBoundRun {
    pub rows: Vec<LowerBoundRow>,
    /// `min(norm_ratio) ≥ 0.1·median(norm_ratio)` with all rows positive.
    pub bounded_below: bool,
}

/// Evaluate the construction with `β_n = n^{-(1+η)/2}` along `n_list`
/// (strictly increasing) and check the normalised growth stays in a band.
pub fn lower_growth_check(
    eps: f64,
    eta: f64,
    n_list: &[usize],
    pol: &TruncationPolicy,
) -> Result<LowerBoundRun, EvalError> {
    assert!(eta > 0.0, "eta must be positive");
    assert!(!n_list.is_empty() && n_list.windows(2).all(|w| w[0] < w[1]), "n_list must increase");
    let coeffs = CoefficientSeq::PowerDecay { eta };
    let exponent = 1.0 - 0.5 * eps - 0.5 * eta;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let f = eval_f_beta(eps, &coeffs, n, pol)?;
        let re_f = f.value.re;
        let norm_ratio = re_f * (1.0 / n as f64).powf(exponent);
        rows.push(LowerBoundRow { n, re_f, norm_ratio });
    }
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.norm_ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let median = if ratios.len() % 2 == 1 {
        ratios[ratios.len() / 2]
    } else {
        0.5 * (ratios[ratios.len() / 2 - 1] + ratios[ratios.len() / 2])
    };
    let bounded_below = ratios[0] > 0.0 && ratios[0] >= 0.1 * median;
    Ok(LowerBoundRun { rows, bounded_below })
}

/// Non-tangential approach report for the sampling sequence.
#[derive(Debug, Clone, Copy)]
pub struct StolzReport {
    /// `sup_n |1-λ_n|/(1-|λ_n|)` over `n ≤ n_max`.
    pub sup_ratio: f64,
    pub attained_at: usize,
    /// Ratio at `n_max` (tends to √2).
    pub last_ratio: f64,
}

/// Verify the sampling points stay in a fixed-aperture approach region with
/// vertex at 1: the ratio `|1-λ_n|/(1-|λ_n|) = |1-λ_n|·n` is bounded
/// (it increases from 1 toward √2).
pub fn stolz_membership_check(n_max: usize) -> StolzReport {
    assert!(n_max >= 2);
    let mut sup = f64::NEG_INFINITY;
    let mut at = 1;
    let mut last = 0.0;
    for n in 1..=n_max {
        let gap = 1.0 / n as f64;
        let s = (0.5 * gap).sin();
        let dist_sq = gap * gap + 4.0 * (1.0 - gap) * s * s;
        let ratio = dist_sq.sqrt() * n as f64;
        if ratio > sup {
            sup = ratio;
            at = n;
        }
        last = ratio;
    }
    StolzReport { sup_ratio: sup, attained_at: at, last_ratio: last }
}
