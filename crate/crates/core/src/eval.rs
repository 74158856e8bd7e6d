//! Cancellation-safe evaluation of inner-function moduli and model-space
//! kernel quantities.
//!
//! All moduli are accumulated in log space and the one genuinely dangerous
//! subtraction, `1 - |I(r)|²` with `|I(r)| → 1`, goes through `exp_m1`:
//!
//! ```text
//! ‖k_r‖² = (1 - |I(r)|²)/(1 - r²) = -expm1(2·log|I(r)|) / ((1-r)(1+r))
//! ```
//!
//! Distances to circle points are computed with the exact rearrangement
//! `|1 - ρe^{iθ}|² = (1-ρ)² + 4ρ·sin²(θ/2)`, which never subtracts nearly
//! equal quantities.
//!
//! For the parametric `section3` measure the log-modulus series has terms
//! proven strictly decreasing in the atom index (for ε > 1), so adaptive
//! truncation pairs an explicit partial sum with a midpoint-integral tail
//! estimate whose error is certified by the first omitted term; see
//! [`crate::series`]. Pure functions throughout: one spec can be evaluated
//! from many threads concurrently.

use crate::inner_core::{
    BlaschkeFamily, BlaschkeSpec, CircleAtom, InnerFunctionSpec, SingularFamily,
    SingularMeasureSpec, UnitDiskPoint,
};
use crate::series::adaptive_simpson;
use num_complex::Complex64;
use thiserror::Error;

/// Adaptive truncation control for family (infinite) specs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Relative tolerance on the certified remainder. Default 1e-10.
    pub rel_tol: f64,
    /// Absolute tolerance floor. Default 1e-14.
    pub abs_tol: f64,
    /// Hard cap on explicitly summed terms. Default 10^7.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_terms: 10_000_000 }
    }
}

impl TruncationPolicy {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Self {
        assert!(rel_tol > 0.0 && abs_tol > 0.0 && max_terms >= 1);
        Self { rel_tol, abs_tol, max_terms }
    }
}

/// A truncated series value with a certified bound on the omitted error.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    /// Certified bound on `|true value - value|`; 0 for fully explicit data.
    pub tail_bound: f64,
    /// Number of explicitly summed terms.
    pub terms_used: usize,
}

/// Modulus of `I` at a radius, carried together with its log so that values
/// exponentially close to 1 keep full precision.
#[derive(Debug, Clone, Copy)]
pub struct ModulusResult {
    pub modulus: f64,
    pub log_modulus: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("evaluation point outside domain: {0}")]
    Domain(String),
    #[error("max_terms = {max_terms} exhausted before reaching tolerance (partial value {partial}, certified tail bound {tail_bound})")]
    TruncationExhausted { partial: f64, tail_bound: f64, terms_used: usize, max_terms: usize },
    #[error("complex evaluation unsupported for this spec: {0}")]
    Unsupported(String),
}

// ---------------------------------------------------------------------------
// elementary factors
// ---------------------------------------------------------------------------

/// Möbius factor normalised positive at the origin:
/// `b_λ(z) = (|λ|/λ)·(λ-z)/(1-conj(λ)z)`, with `b_0(z) = z`.
pub fn blaschke_factor(lambda: &UnitDiskPoint, z: Complex64) -> Result<Complex64, EvalError> {
    if !lambda.in_open_disk() {
        return Err(EvalError::Domain(format!("lambda ({}, {}) not in open disk", lambda.re(), lambda.im())));
    }
    if z.norm_sqr() > 1.0 + 4.0 * f64::EPSILON {
        return Err(EvalError::Domain(format!("|z| = {} > 1", z.norm())));
    }
    let l = lambda.to_complex();
    if lambda.modulus_sq() == 0.0 {
        return Ok(z);
    }
    let denom = 1.0 - l.conj() * z;
    if denom.norm_sqr() == 0.0 {
        return Err(EvalError::Domain("z is the pole 1/conj(lambda)".to_string()));
    }
    Ok((lambda.modulus() / l) * (l - z) / denom)
}

/// `1 - |b_λ(r)|² = (1-r²)(1-|λ|²)/|1 - r·conj(λ)|²`, evaluated directly
/// from the right-hand side.
pub fn one_minus_factor_modsq(lambda: &UnitDiskPoint, r: f64) -> f64 {
    assert!((0.0..1.0).contains(&r), "radius {r} outside [0, 1)");
    let one_minus_r = 1.0 - r;
    let gap_sq = 1.0 - lambda.modulus_sq();
    // |1 - r·conj(λ)|² = (1 - r·Re λ)² + (r·Im λ)²
    let dre = 1.0 - r * lambda.re();
    let dim = r * lambda.im();
    one_minus_r * (1.0 + r) * gap_sq / (dre * dre + dim * dim)
}

/// `|1 - ρe^{iθ}|²` via `(1-ρ)² + 4ρ·sin²(θ/2)` (no cancellation).
pub fn one_minus_rot_modsq(rho: f64, theta: f64) -> f64 {
    let g = 1.0 - rho;
    let s = (0.5 * theta).sin();
    g * g + 4.0 * rho * s * s
}

/// Value of the elementary singular factor `exp(α(z+ζ)/(z-ζ))`, ζ = e^{iθ},
/// for `|z| < 1`. The exponent has negative real part on the disk, so the
/// result has modulus `exp(-α(1-|z|²)/|ζ-z|²) < 1`.
pub fn elementary_inner_value(atom: &CircleAtom, z: Complex64) -> Result<Complex64, EvalError> {
    if z.norm_sqr() >= 1.0 {
        return Err(EvalError::Domain(format!("|z| = {} >= 1", z.norm())));
    }
    let zeta = atom.zeta();
    let w = atom.mass() * (z + zeta) / (z - zeta);
    Ok(w.exp())
}

// ---------------------------------------------------------------------------
// log-modulus series
// ---------------------------------------------------------------------------

/// `log|b_λ(r)|` through `0.5·ln(1 - q)` with `q = 1 - |b_λ(r)|²` from
/// [`one_minus_factor_modsq`]. Returns `-∞` if `r` hits the zero exactly.
fn log_abs_factor_at_radius(lambda: &UnitDiskPoint, r: f64) -> f64 {
    let q = one_minus_factor_modsq(lambda, r);
    if q >= 1.0 {
        f64::NEG_INFINITY
    } else {
        0.5 * (-q).ln_1p()
    }
}

/// Same for a family zero given by its exact radial gap and angle.
fn log_abs_factor_gap(gap: f64, theta: f64, r: f64) -> f64 {
    let rho = 1.0 - gap;
    let one_minus_r = 1.0 - r;
    // 1 - r·rho = (1-r) + r·gap, exact to rounding
    let omrr = one_minus_r + r * gap;
    let s = (0.5 * theta).sin();
    let denom = omrr * omrr + 4.0 * r * rho * s * s;
    let q = one_minus_r * (1.0 + r) * gap * (2.0 - gap) / denom;
    if q >= 1.0 {
        f64::NEG_INFINITY
    } else {
        0.5 * (-q).ln_1p()
    }
}

/// `log|B(r)| = Σ_n log|b_{λ_n}(r)|` for `0 ≤ r < 1`.
///
/// Explicit zeros are summed exactly (`tail_bound` 0). For a zero family the
/// sum is truncated once the certified majorant tail drops below tolerance:
/// for `n` past the index where `q̄_n = 2(1+r)(1-|λ_n|)/(1-r) ≤ 1/2`, each
/// term obeys `-log|b_{λ_n}(r)| ≤ q̄_n` (from `log(1/x) ≤ (1-x)/x` with the
/// modulus bounded below), and `Σ q̄_n` has a closed p-series tail.
pub fn log_abs_blaschke(
    spec: &BlaschkeSpec,
    r: f64,
    pol: &TruncationPolicy,
) -> Result<EvalResult, EvalError> {
    if !(0.0..1.0).contains(&r) {
        return Err(EvalError::Domain(format!("radius {r} outside [0, 1)")));
    }
    match spec {
        BlaschkeSpec::ExplicitZeros(zeros) => {
            let value: f64 = zeros.iter().map(|l| log_abs_factor_at_radius(l, r)).sum();
            Ok(EvalResult { value, tail_bound: 0.0, terms_used: zeros.len() })
        }
        BlaschkeSpec::Family(fam) => {
            let BlaschkeFamily::RadialPower { scale, decay, .. } = *fam;
            let one_minus_r = 1.0 - r;
            // majorant valid once 2(1+r)·gap_n/(1-r) <= 1/2
            let coeff = 2.0 * (1.0 + r) * scale / one_minus_r;
            let n0 = (4.0 * coeff).powf(1.0 / decay).ceil().max(1.0) as usize;
            let mut value = 0.0;
            let mut n = 1usize;
            let mut tail = f64::INFINITY;
            while n <= pol.max_terms {
                value -= log_abs_factor_gap(fam.radial_gap(n), fam.angle(n), r);
                if n >= n0 {
                    tail = crate::series::p_series_tail(coeff, decay, n);
                    if tail <= pol.rel_tol * value.abs() + pol.abs_tol {
                        return Ok(EvalResult { value: -value, tail_bound: tail, terms_used: n });
                    }
                }
                n += 1;
            }
            Err(EvalError::TruncationExhausted {
                partial: -value,
                tail_bound: tail,
                terms_used: pol.max_terms,
                max_terms: pol.max_terms,
            })
        }
    }
}

/// One term of the singular log series at radius `r`:
/// `α·(1-r²)/((1-r)² + 4r·sin²(θ/2))`.
fn singular_term(mass: f64, theta: f64, r: f64, one_minus_r: f64) -> f64 {
    mass * one_minus_r * (1.0 + r) / one_minus_rot_modsq_pre(r, one_minus_r, theta)
}

fn one_minus_rot_modsq_pre(rho: f64, gap: f64, theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    gap * gap + 4.0 * rho * s * s
}

/// section3 series term as a function of a real index `x ≥ 1`.
fn section3_term(eps: f64, r: f64, one_minus_r: f64, x: f64) -> f64 {
    let mass = (-(1.0 + eps) * x.ln()).exp();
    singular_term(mass, 1.0 / x, r, one_minus_r)
}

/// Midpoint-integral tail `∫_a^∞ g(x) dx` of the section3 series, computed
/// in the variable `u = x^{-ε}` (which removes the power singularity):
///
/// `∫_a^∞ g = (1-r²)/ε · ∫_0^{a^{-ε}} du / ((1-r)² + 4r·sin²(u^{1/ε}/2))`.
fn section3_tail_integral(eps: f64, r: f64, one_minus_r: f64, a: f64, tol: f64) -> f64 {
    let upper = (-eps * a.ln()).exp();
    let g2 = one_minus_r * one_minus_r;
    let inner = adaptive_simpson(
        |u| {
            let s = (0.5 * u.powf(1.0 / eps)).sin();
            1.0 / (g2 + 4.0 * r * s * s)
        },
        0.0,
        upper,
        tol * eps / (one_minus_r * (1.0 + r)),
    );
    one_minus_r * (1.0 + r) / eps * inner
}

/// `log|S_μ(r)| = -Σ_k α_k(1-r²)/|ζ_k - r|²` for `0 ≤ r < 1`.
///
/// Explicit atoms are summed exactly. For the section3 family the term
/// function is strictly decreasing in the atom index (for ε > 1, since
/// `θ·cot(θ/2) ≤ 2` keeps the distance factor from outpacing the mass
/// decay), so the tail beyond the cutoff `M` is estimated by the midpoint
/// integral with certified error at most `g(M)` plus the quadrature budget.
pub fn log_abs_singular(
    spec: &SingularMeasureSpec,
    r: f64,
    pol: &TruncationPolicy,
) -> Result<EvalResult, EvalError> {
    if !(0.0..1.0).contains(&r) {
        return Err(EvalError::Domain(format!("radius {r} outside [0, 1)")));
    }
    let one_minus_r = 1.0 - r;
    match spec {
        SingularMeasureSpec::ExplicitAtoms(atoms) => {
            let value: f64 =
                atoms.iter().map(|a| singular_term(a.mass(), a.theta(), r, one_minus_r)).sum();
            Ok(EvalResult { value: -value, tail_bound: 0.0, terms_used: atoms.len() })
        }
        SingularMeasureSpec::Family(fam) => {
            let SingularFamily::Section3 { epsilon: eps, .. } = *fam;
            let g = |x: f64| section3_term(eps, r, one_minus_r, x);

            // phase 1: fixed prefix plus a rough tail estimate to size the target
            const M0: usize = 1024;
            let m0 = M0.min(pol.max_terms);
            let mut partial = 0.0;
            for n in 1..=m0 {
                partial += g(n as f64);
            }
            let rough = partial + section3_tail_integral(eps, r, one_minus_r, m0 as f64 + 0.5, 1e-3 * partial.max(1e-300));
            let target = pol.rel_tol * rough.abs() + pol.abs_tol;

            // phase 2: grow the cutoff until the first omitted term (the
            // certified enclosure width) is below target; g is decreasing.
            let mut m = m0;
            while g(m as f64) > target && m < pol.max_terms {
                m = (m * 2).min(pol.max_terms);
            }
            for n in m0 + 1..=m {
                partial += g(n as f64);
            }
            let quad_budget = 0.01 * target;
            let tail = section3_tail_integral(eps, r, one_minus_r, m as f64 + 0.5, quad_budget);
            let value = partial + tail;
            let width = g(m as f64) + quad_budget;
            if width > pol.rel_tol * value.abs() + pol.abs_tol {
                return Err(EvalError::TruncationExhausted {
                    partial: -value,
                    tail_bound: width,
                    terms_used: m,
                    max_terms: pol.max_terms,
                });
            }
            Ok(EvalResult { value: -value, tail_bound: width, terms_used: m })
        }
    }
}

/// `|I(r)|` with its log: `exp(log|B(r)| + log|S_μ(r)|)`.
pub fn inner_modulus(
    spec: &InnerFunctionSpec,
    r: f64,
    pol: &TruncationPolicy,
) -> Result<ModulusResult, EvalError> {
    let b = log_abs_blaschke(&spec.blaschke, r, pol)?;
    let s = log_abs_singular(&spec.singular, r, pol)?;
    let log_modulus = b.value + s.value;
    Ok(ModulusResult {
        modulus: log_modulus.exp(),
        log_modulus,
        tail_bound: b.tail_bound + s.tail_bound,
        terms_used: b.terms_used + s.terms_used,
    })
}

/// Squared norm of the reproducing kernel at the radial point `r`:
/// `‖k_r^I‖² = (1 - |I(r)|²)/(1 - r²)`, with the numerator as
/// `-expm1(2·log|I(r)|)` and the denominator as `(1-r)(1+r)`.
pub fn kernel_norm_sq(
    spec: &InnerFunctionSpec,
    r: f64,
    pol: &TruncationPolicy,
) -> Result<EvalResult, EvalError> {
    let m = inner_modulus(spec, r, pol)?;
    let one_minus_r = 1.0 - r;
    let denom = one_minus_r * (1.0 + r);
    // + 0.0 turns the -0.0 of the identity spec into a plain zero
    let numer = -(2.0 * m.log_modulus).exp_m1() + 0.0;
    // d(numer)/d(log) = -2 e^{2L}: propagate the log-tail bound
    let tail = 2.0 * (2.0 * m.log_modulus).exp() * m.tail_bound / denom;
    Ok(EvalResult { value: numer / denom, tail_bound: tail, terms_used: m.terms_used })
}

/// Complex value `I(z)` for a spec whose Blaschke part is explicit.
///
/// Singular families are admitted: their exponent series is truncated with
/// a certified bound on the omitted exponent mass
/// (`|α(z+ζ)/(z-ζ)| ≤ 2α/(1-|z|)`), which converts to a relative value
/// error of the same size. Infinite zero families would need the complex
/// log of an infinite product and are rejected; their radial log-modulus
/// interface is [`log_abs_blaschke`].
pub fn inner_value(
    spec: &InnerFunctionSpec,
    z: Complex64,
    pol: &TruncationPolicy,
) -> Result<Complex64, EvalError> {
    if z.norm_sqr() >= 1.0 {
        return Err(EvalError::Domain(format!("|z| = {} >= 1", z.norm())));
    }
    let mut value = Complex64::new(1.0, 0.0);
    match &spec.blaschke {
        BlaschkeSpec::ExplicitZeros(zeros) => {
            for l in zeros {
                value *= blaschke_factor(l, z)?;
            }
        }
        BlaschkeSpec::Family(_) => {
            return Err(EvalError::Unsupported(
                "complex evaluation of Blaschke zero families; use log_abs_blaschke on the radius"
                    .to_string(),
            ));
        }
    }
    let mut exponent = Complex64::new(0.0, 0.0);
    match &spec.singular {
        SingularMeasureSpec::ExplicitAtoms(atoms) => {
            for a in atoms {
                let zeta = a.zeta();
                exponent += a.mass() * (z + zeta) / (z - zeta);
            }
        }
        SingularMeasureSpec::Family(fam) => {
            let bound = 2.0 / (1.0 - z.norm());
            let mut n = 1usize;
            loop {
                let a = fam.atom(n);
                let zeta = a.zeta();
                exponent += a.mass() * (z + zeta) / (z - zeta);
                let tail = bound * fam.mass_tail(n);
                if tail <= 0.5 * pol.rel_tol + pol.abs_tol {
                    break;
                }
                if n >= pol.max_terms {
                    return Err(EvalError::TruncationExhausted {
                        partial: exponent.norm(),
                        tail_bound: tail,
                        terms_used: n,
                        max_terms: pol.max_terms,
                    });
                }
                n += 1;
            }
        }
    }
    Ok(value * exponent.exp())
}

/// Reproducing kernel of the model space:
/// `k_λ^I(z) = (1 - conj(I(λ))·I(z))/(1 - conj(λ)·z)`.
///
/// At `z = λ` (bitwise) the numerator is formed with real arithmetic so the
/// returned value is exactly real, equal to `(1-|I(λ)|²)/(1-|λ|²) = ‖k_λ‖²`
/// computed by the direct (non-log-space) route.
pub fn kernel_eval(
    spec: &InnerFunctionSpec,
    lambda: &UnitDiskPoint,
    z: &UnitDiskPoint,
    pol: &TruncationPolicy,
) -> Result<Complex64, EvalError> {
    let il = inner_value(spec, lambda.to_complex(), pol)?;
    if lambda == z {
        let numer = 1.0 - il.norm_sqr();
        let denom = 1.0 - lambda.modulus_sq();
        return Ok(Complex64::new(numer / denom, 0.0));
    }
    let iz = inner_value(spec, z.to_complex(), pol)?;
    let numer = 1.0 - il.conj() * iz;
    let denom = 1.0 - lambda.to_complex().conj() * z.to_complex();
    Ok(numer / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_core::{make_section3_measure, BlaschkeSpec};
    use rand::{Rng, SeedableRng};

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn blaschke_factor_examples() {
        let l = UnitDiskPoint::new(0.5, 0.0).unwrap();
        let v = blaschke_factor(&l, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        // b_0 is the identity
        let zero = UnitDiskPoint::new(0.0, 0.0).unwrap();
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(blaschke_factor(&zero, z).unwrap(), z);
        // vanishes at its zero
        let l = UnitDiskPoint::new(0.3, 0.4).unwrap();
        assert!(blaschke_factor(&l, l.to_complex()).unwrap().norm() < 1e-15);
        // outside the closed disk is rejected
        assert!(blaschke_factor(&l, Complex64::new(1.2, 0.0)).is_err());
    }

    #[test]
    fn blaschke_factor_contraction_on_disk_and_unimodular_on_circle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let l = random_disk_point(&mut rng, 0.95);
            let z = random_disk_point(&mut rng, 0.999);
            let v = blaschke_factor(&l, z.to_complex()).unwrap();
            assert!(v.norm() < 1.0);
            let on_circle = Complex64::from_polar(1.0, rng.gen_range(-3.14..3.14));
            let v = blaschke_factor(&l, on_circle).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_minus_factor_modsq_examples() {
        let zero = UnitDiskPoint::new(0.0, 0.0).unwrap();
        assert!((one_minus_factor_modsq(&zero, 0.9) - 0.19).abs() < 1e-15);
        let l = UnitDiskPoint::new(0.5, 0.0).unwrap();
        assert!((one_minus_factor_modsq(&l, 0.0) - 0.75).abs() < 1e-15);
    }

    fn random_disk_point(rng: &mut impl Rng, max_r: f64) -> UnitDiskPoint {
        let r = rng.gen_range(0.0..max_r);
        let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        UnitDiskPoint::new(r * t.cos(), r * t.sin()).unwrap()
    }

    #[test]
    fn one_minus_factor_modsq_cross_check() {
        // against 1 - |b_λ(r)|² computed through the factor itself
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let l = random_disk_point(&mut rng, 0.99);
            let r = rng.gen_range(0.0..0.99);
            let direct = 1.0 - blaschke_factor(&l, Complex64::new(r, 0.0)).unwrap().norm_sqr();
            let formula = one_minus_factor_modsq(&l, r);
            assert!(
                (direct - formula).abs() <= 1e-12 * formula.abs().max(1e-30),
                "λ=({}, {}), r={r}: {direct} vs {formula}",
                l.re(),
                l.im()
            );
        }
    }

    #[test]
    fn log_abs_blaschke_examples() {
        let empty = BlaschkeSpec::empty();
        assert_eq!(log_abs_blaschke(&empty, 0.5, &pol()).unwrap().value, 0.0);

        let single = BlaschkeSpec::ExplicitZeros(vec![UnitDiskPoint::new(0.0, 0.0).unwrap()]);
        let v = log_abs_blaschke(&single, 0.5, &pol()).unwrap().value;
        assert!((v - 0.5f64.ln()).abs() < 1e-14);

        // multiplicity by repetition
        let double = BlaschkeSpec::ExplicitZeros(vec![
            UnitDiskPoint::new(0.5, 0.0).unwrap(),
            UnitDiskPoint::new(0.5, 0.0).unwrap(),
        ]);
        let v = log_abs_blaschke(&double, 0.0, &pol()).unwrap().value;
        assert!((v - 2.0 * 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_abs_blaschke_family_matches_brute_force() {
        let fam = BlaschkeFamily::radial_power(0.5, 2.5, 1.0).unwrap();
        let spec = BlaschkeSpec::Family(fam);
        let r = 0.7;
        let p = TruncationPolicy { rel_tol: 1e-9, ..TruncationPolicy::default() };
        let res = log_abs_blaschke(&spec, r, &p).unwrap();
        let brute: f64 = (1..4_000_000)
            .map(|n| {
                let z = fam.zero(n);
                log_abs_factor_at_radius(&z, r)
            })
            .sum();
        assert!(
            (res.value - brute).abs() <= res.tail_bound + 1e-10,
            "adaptive {} vs brute {brute} (tail {})",
            res.value,
            res.tail_bound
        );
    }

    #[test]
    fn log_abs_singular_examples() {
        let empty = SingularMeasureSpec::empty();
        assert_eq!(log_abs_singular(&empty, 0.3, &pol()).unwrap().value, 0.0);

        // single atom at θ=π, α=1, r=0: |ζ - 0|² = 1, so the value is -1
        let atom = SingularMeasureSpec::ExplicitAtoms(vec![
            CircleAtom::new(std::f64::consts::PI, 1.0).unwrap(),
        ]);
        let v = log_abs_singular(&atom, 0.0, &pol()).unwrap().value;
        assert!((v + 1.0).abs() < 1e-14);
    }

    #[test]
    fn section3_terms_strictly_decreasing() {
        // the monotonicity the tail sandwich relies on
        for &eps in &[1.05, 1.2, 1.5, 1.8, 1.95] {
            for &r in &[0.0, 0.5, 0.9375, 1.0 - 2.0_f64.powi(-20)] {
                let omr = 1.0 - r;
                let mut prev = f64::INFINITY;
                for n in 1..4000 {
                    let t = section3_term(eps, r, omr, n as f64);
                    assert!(t < prev, "eps={eps} r={r} n={n}");
                    prev = t;
                }
            }
        }
    }

    #[test]
    fn section3_log_abs_matches_brute_force() {
        let spec = make_section3_measure(1.5, 100).unwrap();
        for &n_dyadic in &[4u32, 10, 16] {
            let omr = 2.0_f64.powi(-(n_dyadic as i32));
            let r = 1.0 - omr;
            let res = log_abs_singular(&spec, r, &pol()).unwrap();
            let brute: f64 = (1..30_000_000u64)
                .map(|n| section3_term(1.5, r, omr, n as f64))
                .sum();
            let brute_tail = crate::series::p_series_tail(1.0, 2.5, 30_000_000) * (1.0 + r) / (omr * omr);
            assert!(
                (res.value + brute).abs() <= res.tail_bound + brute_tail,
                "N={n_dyadic}: adaptive {} vs brute {} (tails {} / {})",
                res.value,
                -brute,
                res.tail_bound,
                brute_tail
            );
            assert!(res.tail_bound <= 1e-10 * res.value.abs() + 1e-14);
        }
    }

    #[test]
    fn section3_modulus_tends_to_one() {
        // |I(ρ_N)| increasing along dyadic radii (radial limit of modulus 1)
        let spec = InnerFunctionSpec::new(BlaschkeSpec::empty(), make_section3_measure(1.5, 100).unwrap());
        let p = TruncationPolicy { rel_tol: 1e-8, abs_tol: 1e-12, max_terms: 20_000_000 };
        let mut prev = 0.0;
        for n in 1..=20 {
            let r = 1.0 - 2.0_f64.powi(-n);
            let m = inner_modulus(&spec, r, &p).unwrap().modulus;
            assert!(m > prev, "N={n}: {m} <= {prev}");
            prev = m;
        }
        assert!(prev > 0.99);
    }

    #[test]
    fn inner_modulus_examples() {
        let identity = InnerFunctionSpec::identity();
        assert_eq!(inner_modulus(&identity, 0.4, &pol()).unwrap().modulus, 1.0);

        let atom = InnerFunctionSpec::from_atoms(vec![
            CircleAtom::new(std::f64::consts::PI, 1.0).unwrap(),
        ]);
        let m = inner_modulus(&atom, 0.0, &pol()).unwrap().modulus;
        assert!((m - (-1.0f64).exp()).abs() < 1e-15);

        // B(0) = Π |λ_n|
        let zeros = vec![
            UnitDiskPoint::new(0.5, 0.0).unwrap(),
            UnitDiskPoint::new(0.0, -0.25).unwrap(),
            UnitDiskPoint::new(0.3, 0.4).unwrap(),
        ];
        let prod: f64 = zeros.iter().map(|z| z.modulus()).product();
        let spec = InnerFunctionSpec::from_zeros(zeros);
        let m = inner_modulus(&spec, 0.0, &pol()).unwrap().modulus;
        assert!((m - prod).abs() < 1e-14);
    }

    #[test]
    fn kernel_norm_sq_examples() {
        // I(z) = z: ‖k_r‖² = 1 for every r
        let shift = InnerFunctionSpec::from_zeros(vec![UnitDiskPoint::new(0.0, 0.0).unwrap()]);
        for &r in &[0.0, 0.5, 0.9, 1.0 - 2.0_f64.powi(-30)] {
            let k = kernel_norm_sq(&shift, r, &pol()).unwrap().value;
            assert!((k - 1.0).abs() < 1e-12, "r={r}: {k}");
        }
        // I == 1: trivial model space
        let identity = InnerFunctionSpec::identity();
        assert_eq!(kernel_norm_sq(&identity, 0.7, &pol()).unwrap().value, 0.0);
        // single atom at θ=π, α=1, r=0: 1 - e^{-2}
        let atom = InnerFunctionSpec::from_atoms(vec![
            CircleAtom::new(std::f64::consts::PI, 1.0).unwrap(),
        ]);
        let k = kernel_norm_sq(&atom, 0.0, &pol()).unwrap().value;
        assert!((k - 0.864_664_716_763_387_3).abs() < 1e-15);
    }

    #[test]
    fn radius_hitting_a_zero_exactly() {
        // B vanishes at its zero: modulus 0, log -inf, and the kernel norm
        // degrades gracefully to the full H² value 1/(1-r²)
        let spec = InnerFunctionSpec::from_zeros(vec![UnitDiskPoint::new(0.5, 0.0).unwrap()]);
        let m = inner_modulus(&spec, 0.5, &pol()).unwrap();
        assert_eq!(m.modulus, 0.0);
        assert_eq!(m.log_modulus, f64::NEG_INFINITY);
        let k = kernel_norm_sq(&spec, 0.5, &pol()).unwrap().value;
        assert!((k - 1.0 / 0.75).abs() < 1e-14);
    }

    #[test]
    fn kernel_norm_generic_h2_ceiling() {
        // ‖k_r‖² ≤ 2/(1-r) always
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let zeros: Vec<_> = (0..rng.gen_range(0..8)).map(|_| random_disk_point(&mut rng, 0.99)).collect();
            let atoms: Vec<_> = (0..rng.gen_range(0..4))
                .map(|_| {
                    CircleAtom::new(
                        rng.gen_range(-3.1..3.1),
                        rng.gen_range(0.01..2.0),
                    )
                    .unwrap()
                })
                .collect();
            let spec = InnerFunctionSpec::new(
                BlaschkeSpec::ExplicitZeros(zeros),
                SingularMeasureSpec::ExplicitAtoms(atoms),
            );
            for &r in &[0.1, 0.7, 0.99] {
                let k = kernel_norm_sq(&spec, r, &pol()).unwrap().value;
                assert!(k >= 0.0);
                assert!(k <= 2.0 / (1.0 - r) + 1e-9);
                let m = inner_modulus(&spec, r, &pol()).unwrap();
                assert!(m.modulus > 0.0 && m.modulus <= 1.0);
                assert!(m.log_modulus <= 0.0);
            }
        }
    }

    #[test]
    fn kernel_eval_examples() {
        let identity = InnerFunctionSpec::identity();
        let l = UnitDiskPoint::new(0.5, 0.1).unwrap();
        let z = UnitDiskPoint::new(-0.2, 0.3).unwrap();
        let v = kernel_eval(&identity, &l, &z, &pol()).unwrap();
        assert!(v.norm() < 1e-15);

        // I(z) = z, λ = 0.5, z = 0: k = 1
        let shift = InnerFunctionSpec::from_zeros(vec![UnitDiskPoint::new(0.0, 0.0).unwrap()]);
        let l = UnitDiskPoint::new(0.5, 0.0).unwrap();
        let origin = UnitDiskPoint::new(0.0, 0.0).unwrap();
        let v = kernel_eval(&shift, &l, &origin, &pol()).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_eval_diagonal_matches_norm_sq() {
        // z = λ must agree with the cancellation-safe log-space route
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let zeros: Vec<_> = (0..rng.gen_range(1..6)).map(|_| random_disk_point(&mut rng, 0.9)).collect();
            let atoms: Vec<_> = (0..rng.gen_range(0..3))
                .map(|_| CircleAtom::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..1.0)).unwrap())
                .collect();
            let spec = InnerFunctionSpec::new(
                BlaschkeSpec::ExplicitZeros(zeros),
                SingularMeasureSpec::ExplicitAtoms(atoms),
            );
            let r = rng.gen_range(0.0..0.95);
            let l = UnitDiskPoint::new(r, 0.0).unwrap();
            let diag = kernel_eval(&spec, &l, &l, &pol()).unwrap();
            assert_eq!(diag.im, 0.0);
            let ksq = kernel_norm_sq(&spec, r, &pol()).unwrap().value;
            assert!(
                (diag.re - ksq).abs() <= 1e-8 * ksq.abs().max(1e-12),
                "diag {} vs ksq {ksq}",
                diag.re
            );
        }
    }

    #[test]
    fn kernel_eval_rejects_blaschke_family() {
        let spec = InnerFunctionSpec::new(
            BlaschkeSpec::Family(BlaschkeFamily::radial_power(0.5, 2.0, 1.0).unwrap()),
            SingularMeasureSpec::empty(),
        );
        let l = UnitDiskPoint::new(0.5, 0.0).unwrap();
        assert!(matches!(kernel_eval(&spec, &l, &l, &pol()), Err(EvalError::Unsupported(_))));
    }

    #[test]
    fn elementary_inner_value_examples() {
        // α=1, θ=π, z=0: exp((0-1)/(0+1)) = e^{-1}
        let atom = CircleAtom::new(std::f64::consts::PI, 1.0).unwrap();
        let v = elementary_inner_value(&atom, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-15);

        // small mass: exp(-α·ζ/ζ·(1+O(z))) = 1 + O(α) near z=0
        let tiny = CircleAtom::new(1.0, 1e-9).unwrap();
        let v = elementary_inner_value(&tiny, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 3e-9);

        assert!(elementary_inner_value(&atom, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn elementary_inner_value_modulus_identity() {
        // |exp(α(z+ζ)/(z-ζ))| = exp(-α(1-|z|²)/|ζ-z|²)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let atom = CircleAtom::new(rng.gen_range(-3.1..3.1), rng.gen_range(0.01..3.0)).unwrap();
            let z = random_disk_point(&mut rng, 0.995).to_complex();
            let v = elementary_inner_value(&atom, z).unwrap().norm();
            let expected = (-atom.mass() * (1.0 - z.norm_sqr()) / (atom.zeta() - z).norm_sqr()).exp();
            assert!(
                (v - expected).abs() <= 1e-12 * expected.max(1e-30),
                "atom ({}, {}), z = {z}: {v} vs {expected}",
                atom.theta(),
                atom.mass()
            );
            assert!(v < 1.0);
        }
    }

    #[test]
    fn pythag_surrogate_band() {
        // |1-ρe^{iθ}|²/((1-ρ)²+θ²) stays in [1/4, 4] for ρ in [0.9, 1), |θ| ≤ 0.3
        for i in 0..=50 {
            let rho = 0.9 + 0.1 * (i as f64) / 51.0;
            for j in -30..=30 {
                let theta = j as f64 / 100.0;
                let ratio = one_minus_rot_modsq(rho, theta) / ((1.0 - rho).powi(2) + theta * theta);
                assert!((0.25..=4.0).contains(&ratio), "rho={rho} theta={theta}: {ratio}");
            }
        }
    }

    #[test]
    fn monotone_truncation_tail_never_grows() {
        let spec = make_section3_measure(1.5, 100).unwrap();
        let r = 1.0 - 2.0_f64.powi(-12);
        let mut prev_tail = f64::INFINITY;
        for &mt in &[2_000usize, 20_000, 200_000, 2_000_000] {
            let p = TruncationPolicy { rel_tol: 1e-10, abs_tol: 1e-14, max_terms: mt };
            match log_abs_singular(&spec, r, &p) {
                Ok(res) => {
                    assert!(res.tail_bound <= prev_tail + 1e-30);
                    prev_tail = res.tail_bound;
                }
                Err(EvalError::TruncationExhausted { tail_bound, .. }) => {
                    assert!(tail_bound <= prev_tail + 1e-30);
                    prev_tail = tail_bound;
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn truncation_exhaustion_carries_partial() {
        let spec = make_section3_measure(1.2, 100).unwrap();
        let p = TruncationPolicy { rel_tol: 1e-14, abs_tol: 1e-300, max_terms: 2000 };
        match log_abs_singular(&spec, 1.0 - 2.0_f64.powi(-20), &p) {
            Err(EvalError::TruncationExhausted { partial, tail_bound, terms_used, .. }) => {
                assert!(partial < 0.0);
                assert!(tail_bound > 0.0);
                assert_eq!(terms_used, 2000);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn concurrent_reads_of_one_spec() {
        let spec = std::sync::Arc::new(InnerFunctionSpec::new(
            BlaschkeSpec::empty(),
            make_section3_measure(1.5, 100).unwrap(),
        ));
        let handles: Vec<_> = (1..=8)
            .map(|i| {
                let s = spec.clone();
                std::thread::spawn(move || {
                    kernel_norm_sq(&s, 1.0 - 2.0_f64.powi(-i), &TruncationPolicy::default())
                        .unwrap()
                        .value
                })
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap() > 0.0);
        }
    }
}
