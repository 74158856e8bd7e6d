//! Certified truncation primitives for infinite series.
//!
//! Everything here deals with one recurring problem: a positive series
//! `Σ_{n≥1} g(n)` must be evaluated or bounded without summing forever.
//! Two tools cover all uses in this crate:
//!
//! * **p-series envelopes** — a closed-form bound for `Σ_{n>M} c·n^{-a}`
//!   by integral comparison, used whenever a term majorant of power-law
//!   shape is available ([`TailClass`], [`p_series_tail`]).
//! * **monotone tail sandwich** — for a term function that is decreasing
//!   on `[M, ∞)`, the omitted tail is enclosed by
//!   `∫_{M+1}^∞ g ≤ Σ_{n>M} g(n) ≤ ∫_M^∞ g`, so the midpoint integral
//!   `∫_{M+1/2}^∞ g` estimates the tail with error at most
//!   `∫_M^{M+1} g ≤ g(M)`. The integrals themselves are computed with
//!   [`adaptive_simpson`].

/// Closed-form tail classification for a positive series, as supplied by a
/// parametric spec family for one condition kernel.
///
/// `ConvergentMajorant { coeff, power, from }` certifies
/// `term(n) ≤ coeff·n^{-power}` for all `n ≥ from` with `power > 1`, so the
/// tail beyond any `M ≥ from` is at most [`p_series_tail`].
///
/// `DivergentMinorant` certifies `term(n) ≥ coeff·n^{-power}` with
/// `coeff > 0` and `power ≤ 1` from `from` on, which forces divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass {
    ConvergentMajorant { coeff: f64, power: f64, from: usize },
    DivergentMinorant { coeff: f64, power: f64, from: usize },
    Unknown,
}

impl TailClass {
    /// Certified upper bound for the tail beyond `m`, when one exists.
    pub fn tail_bound(&self, m: usize) -> Option<f64> {
        match *self {
            TailClass::ConvergentMajorant { coeff, power, from } if m >= from => {
                Some(p_series_tail(coeff, power, m))
            }
            _ => None,
        }
    }

    pub fn is_convergent(&self) -> bool {
        matches!(self, TailClass::ConvergentMajorant { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, TailClass::DivergentMinorant { .. })
    }

    /// Combine classifications of two nonnegative series summed together.
    /// Divergence of either part makes the sum divergent; both parts must be
    /// convergent for the sum to be certified convergent.
    pub fn combine(self, other: TailClass) -> TailClass {
        use TailClass::*;
        match (self, other) {
            (d @ DivergentMinorant { .. }, _) => d,
            (_, d @ DivergentMinorant { .. }) => d,
            (
                ConvergentMajorant { coeff: c1, power: p1, from: f1 },
                ConvergentMajorant { coeff: c2, power: p2, from: f2 },
            ) => {
                // joint majorant: (c1+c2)·n^{-min(p1,p2)} dominates both
                ConvergentMajorant {
                    coeff: c1 + c2,
                    power: p1.min(p2),
                    from: f1.max(f2),
                }
            }
            _ => Unknown,
        }
    }
}

/// Upper bound for `Σ_{n>m} coeff·n^{-power}` with `power > 1`, via
/// `Σ_{n>m} n^{-power} ≤ ∫_m^∞ x^{-power} dx = m^{1-power}/(power-1)`.
///
/// Monotone non-increasing in `m`.
pub fn p_series_tail(coeff: f64, power: f64, m: usize) -> f64 {
    debug_assert!(power > 1.0, "p-series tail needs power > 1, got {power}");
    debug_assert!(m >= 1);
    coeff * (m as f64).powf(1.0 - power) / (power - 1.0)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute
/// tolerance `tol`, using the classical Richardson acceptance test
/// `|S_left + S_right - S_whole| ≤ 15·tol`.
///
/// The recursion depth is capped; on cap the best available estimate is
/// used. Intended for smooth, bounded integrands (all uses in this crate
/// substitute variables first so that no integrable singularity remains).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson_rule(fa, fm, fb, b - a);
    simpson_rec(&f, a, fa, b, fb, m, fm, whole, tol.abs().max(1e-300), 48)
}

fn simpson_rule(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h * (fa + 4.0 * fm + fb) / 6.0
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson_rule(fa, flm, fm, m - a);
    let right = simpson_rule(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Tail of a positive series with terms decreasing on `[m, ∞)`.
///
/// `estimate` is the midpoint integral `∫_{m+1/2}^∞ g`, which lies inside
/// the enclosure `[∫_{m+1}^∞ g, ∫_m^∞ g]` of the true tail; `width` is the
/// certified bound `g(m)` on `|tail - estimate|` (the enclosure width
/// `∫_m^{m+1} g` is at most `g(m)` for decreasing `g`), plus the quadrature
/// budget spent on the integral.
#[derive(Debug, Clone, Copy)]
pub struct TailEstimate {
    pub estimate: f64,
    pub width: f64,
}
