//! Domain types for inner-function data: Blaschke zero sets, discrete
//! singular measures on the circle, and admissible weight functions,
//! together with structural validation.
//!
//! An inner function is described as `I = B·S_μ` by an [`InnerFunctionSpec`]
//! holding a [`BlaschkeSpec`] (zeros, with multiplicity by repetition) and a
//! [`SingularMeasureSpec`] (atoms `α_k·δ_{ζ_k}` on the unit circle). Both
//! parts may be explicit finite data or a built-in parametric family that
//! carries closed-form tail majorants, so that downstream evaluation can
//! truncate infinite sums with certified error bounds.
//!
//! Atom locations are stored as angles, not as complex points: every
//! distance the evaluators need has the cancellation-free form
//! `|e^{iθ} - ρe^{iw}|² = (1-ρ)² + 4ρ·sin²((θ-w)/2)`.

use thiserror::Error;

/// Angle-normalisation helper: wrap into `(-π, π]`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Chordal distance between the circle points at angles `a` and `b`:
/// `|e^{ia} - e^{ib}| = 2|sin((a-b)/2)|`.
pub fn chord(a: f64, b: f64) -> f64 {
    2.0 * (0.5 * (a - b)).sin().abs()
}

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("point ({re}, {im}) is not in the open unit disk")]
    NotInOpenDisk { re: f64, im: f64 },
    #[error("atom mass must be positive and finite, got {0}")]
    BadMass(f64),
    #[error("angle must be finite, got {0}")]
    BadAngle(f64),
    #[error("parameter {name} = {value} outside {required}")]
    Parameter { name: &'static str, value: f64, required: &'static str },
}

// ---------------------------------------------------------------------------
// points and atoms
// ---------------------------------------------------------------------------

/// A point of the open unit disk, used both for Blaschke zeros λ_n and for
/// kernel evaluation points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDiskPoint {
    re: f64,
    im: f64,
}

impl UnitDiskPoint {
    /// Construct a point, enforcing `re² + im² < 1`.
    pub fn new(re: f64, im: f64) -> Result<Self, SpecError> {
        if !(re.is_finite() && im.is_finite()) || re * re + im * im >= 1.0 {
            return Err(SpecError::NotInOpenDisk { re, im });
        }
        Ok(Self { re, im })
    }

    /// Construct without the disk check. Intended for building deliberately
    /// invalid data for [`validate_spec`] to report on; evaluation routines
    /// assume validated input.
    pub fn new_unchecked(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `(1-gap)·e^{iθ}` with the radial gap given exactly.
    pub fn from_radial_gap(gap: f64, theta: f64) -> Result<Self, SpecError> {
        if !(gap > 0.0 && gap <= 1.0) || !theta.is_finite() {
            return Err(SpecError::NotInOpenDisk {
                re: (1.0 - gap) * theta.cos(),
                im: (1.0 - gap) * theta.sin(),
            });
        }
        let r = 1.0 - gap;
        Ok(Self { re: r * theta.cos(), im: r * theta.sin() })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn modulus_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re, self.im)
    }

    pub fn in_open_disk(&self) -> bool {
        self.re.is_finite() && self.im.is_finite() && self.modulus_sq() < 1.0
    }

    /// Distance to the circle point `e^{i·zeta_angle}`.
    pub fn dist_to_circle_point(&self, zeta_angle: f64) -> f64 {
        let dre = zeta_angle.cos() - self.re;
        let dim = zeta_angle.sin() - self.im;
        dre.hypot(dim)
    }

    /// Rotate by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { re: self.re * c - self.im * s, im: self.re * s + self.im * c }
    }
}

/// One atom `mass·δ_{e^{iθ}}` of a discrete singular measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleAtom {
    theta: f64,
    mass: f64,
}

impl CircleAtom {
    /// Construct an atom; the angle is wrapped into `(-π, π]`.
    pub fn new(theta: f64, mass: f64) -> Result<Self, SpecError> {
        if !theta.is_finite() {
            return Err(SpecError::BadAngle(theta));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(SpecError::BadMass(mass));
        }
        Ok(Self { theta: wrap_angle(theta), mass })
    }

    pub fn new_unchecked(theta: f64, mass: f64) -> Self {
        Self { theta, mass }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// The circle point ζ = e^{iθ} as a complex number.
    pub fn zeta(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(1.0, self.theta)
    }
}

// ---------------------------------------------------------------------------
// Blaschke part
// ---------------------------------------------------------------------------

/// Zero data of the Blaschke factor. Multiple zeros are repeated in the
/// sequence. The empty explicit spec means `B ≡ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum BlaschkeSpec {
    ExplicitZeros(Vec<UnitDiskPoint>),
    Family(BlaschkeFamily),
}

impl BlaschkeSpec {
    pub fn empty() -> Self {
        BlaschkeSpec::ExplicitZeros(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, BlaschkeSpec::ExplicitZeros(v) if v.is_empty())
    }
}

/// Built-in parametric zero families with certified tail majorants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlaschkeFamily {
    /// `λ_n = (1 - scale·n^{-decay})·e^{i·angle_scale/n}`, n ≥ 1.
    ///
    /// `decay > 1` makes `Σ (1-|λ_n|) = scale·Σ n^{-decay}` finite
    /// (the Blaschke condition), with the p-series integral bound as the
    /// certified tail majorant. `scale ∈ (0, 1]`, `angle_scale ≥ 0`.
    RadialPower { scale: f64, decay: f64, angle_scale: f64 },
}

impl BlaschkeFamily {
    pub fn radial_power(scale: f64, decay: f64, angle_scale: f64) -> Result<Self, SpecError> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(SpecError::Parameter { name: "scale", value: scale, required: "(0, 1]" });
        }
        if !(decay > 1.0 && decay.is_finite()) {
            return Err(SpecError::Parameter { name: "decay", value: decay, required: "(1, inf)" });
        }
        if !(angle_scale >= 0.0 && angle_scale.is_finite()) {
            return Err(SpecError::Parameter {
                name: "angle_scale",
                value: angle_scale,
                required: "[0, inf)",
            });
        }
        Ok(BlaschkeFamily::RadialPower { scale, decay, angle_scale })
    }

    /// `1 - |λ_n|`, exactly as parametrised.
    pub fn radial_gap(&self, n: usize) -> f64 {
        let BlaschkeFamily::RadialPower { scale, decay, .. } = *self;
        scale * (n as f64).powf(-decay)
    }

    /// Angle θ_n of λ_n.
    pub fn angle(&self, n: usize) -> f64 {
        let BlaschkeFamily::RadialPower { angle_scale, .. } = *self;
        angle_scale / n as f64
    }

    pub fn zero(&self, n: usize) -> UnitDiskPoint {
        UnitDiskPoint::from_radial_gap(self.radial_gap(n), self.angle(n))
            .expect("family zeros are always in the open disk")
    }

    /// Certified bound for `Σ_{n>m} (1 - |λ_n|)` (the Blaschke-condition
    /// tail); tends to 0 as `m → ∞`.
    pub fn gap_tail(&self, m: usize) -> f64 {
        let BlaschkeFamily::RadialPower { scale, decay, .. } = *self;
        crate::series::p_series_tail(scale, decay, m)
    }

}

// ---------------------------------------------------------------------------
// singular part
// ---------------------------------------------------------------------------

/// Discrete singular measure `μ = Σ α_k δ_{ζ_k}`. The empty explicit spec
/// means `S_μ ≡ 1`. General (non-atomic) singular measures are out of scope;
/// a new [`SingularFamily`] variant is the extension point for further
/// parametric measures.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularMeasureSpec {
    ExplicitAtoms(Vec<CircleAtom>),
    Family(SingularFamily),
}

impl SingularMeasureSpec {
    pub fn empty() -> Self {
        SingularMeasureSpec::ExplicitAtoms(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SingularMeasureSpec::ExplicitAtoms(v) if v.is_empty())
    }
}

/// Built-in parametric measure families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularFamily {
    /// Atoms at `θ_n = 1/n` with masses `α_n = n^{-(1+ε)}`, `1 < ε < 2`.
    ///
    /// `n_cut` is the enumeration granularity used by validation and by
    /// callers that need an explicit finite prefix; adaptive evaluators
    /// choose their own cutoffs from the truncation policy.
    Section3 { epsilon: f64, n_cut: usize },
}

impl SingularFamily {
    pub fn epsilon(&self) -> f64 {
        let SingularFamily::Section3 { epsilon, .. } = *self;
        epsilon
    }

    pub fn n_cut(&self) -> usize {
        let SingularFamily::Section3 { n_cut, .. } = *self;
        n_cut
    }

    /// Angle θ_n of the n-th atom.
    pub fn atom_angle(&self, n: usize) -> f64 {
        1.0 / n as f64
    }

    /// Mass α_n of the n-th atom.
    pub fn atom_mass(&self, n: usize) -> f64 {
        let SingularFamily::Section3 { epsilon, .. } = *self;
        (n as f64).powf(-(1.0 + epsilon))
    }

    pub fn atom(&self, n: usize) -> CircleAtom {
        CircleAtom { theta: self.atom_angle(n), mass: self.atom_mass(n) }
    }

    /// Certified bound for the mass tail `Σ_{n>m} α_n ≤ m^{-ε}/ε`.
    pub fn mass_tail(&self, m: usize) -> f64 {
        let SingularFamily::Section3 { epsilon, .. } = *self;
        crate::series::p_series_tail(1.0, 1.0 + epsilon, m)
    }

    /// Total mass `Σ α_n` as (partial sum over `n ≤ n_cut`, certified tail).
    pub fn mass_enclosure(&self) -> (f64, f64) {
        let n_cut = self.n_cut();
        let partial: f64 = (1..=n_cut).map(|n| self.atom_mass(n)).sum();
        (partial, self.mass_tail(n_cut))
    }

    /// Index of the atom sitting exactly at the circle point with angle `w`
    /// (within one ulp of `1/n`), if any.
    pub fn atom_index_at_angle(&self, w: f64) -> Option<usize> {
        if w <= 0.0 || w > 1.0 {
            return None;
        }
        let n = (1.0 / w).round();
        if n >= 1.0 && n < 9.0e15 && (1.0 / n - w).abs() <= f64::EPSILON * w {
            Some(n as usize)
        } else {
            None
        }
    }
}

/// Build the discrete measure with `ζ_n = e^{i/n}`, `α_n = n^{-(1+ε)}`.
///
/// Requires `1 < eps < 2` (both power sums the growth analysis relies on
/// then behave as certified) and `n_cut ≥ 1`.
pub fn make_section3_measure(eps: f64, n_cut: usize) -> Result<SingularMeasureSpec, SpecError> {
    if !(eps > 1.0 && eps < 2.0) {
        return Err(SpecError::Parameter { name: "epsilon", value: eps, required: "(1, 2)" });
    }
    if n_cut == 0 {
        return Err(SpecError::Parameter { name: "n_cut", value: 0.0, required: "[1, inf)" });
    }
    Ok(SingularMeasureSpec::Family(SingularFamily::Section3 { epsilon: eps, n_cut }))
}

// ---------------------------------------------------------------------------
// the inner function
// ---------------------------------------------------------------------------

/// Description of `I = B·S_μ`. Both parts empty means `I ≡ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerFunctionSpec {
    pub blaschke: BlaschkeSpec,
    pub singular: SingularMeasureSpec,
}

impl InnerFunctionSpec {
    pub fn new(blaschke: BlaschkeSpec, singular: SingularMeasureSpec) -> Self {
        Self { blaschke, singular }
    }

    /// The identically-one inner function (empty zero set, zero measure).
    pub fn identity() -> Self {
        Self { blaschke: BlaschkeSpec::empty(), singular: SingularMeasureSpec::empty() }
    }

    pub fn from_zeros(zeros: Vec<UnitDiskPoint>) -> Self {
        Self { blaschke: BlaschkeSpec::ExplicitZeros(zeros), singular: SingularMeasureSpec::empty() }
    }

    pub fn from_atoms(atoms: Vec<CircleAtom>) -> Self {
        Self { blaschke: BlaschkeSpec::empty(), singular: SingularMeasureSpec::ExplicitAtoms(atoms) }
    }

    pub fn is_identity(&self) -> bool {
        self.blaschke.is_empty() && self.singular.is_empty()
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.blaschke, BlaschkeSpec::ExplicitZeros(_))
            && matches!(self.singular, SingularMeasureSpec::ExplicitAtoms(_))
    }

    /// Rigid rotation `I(z) ↦ I(e^{-iw}z)`: zeros and atoms move by `+w`.
    /// Only explicit specs can be rotated (families have fixed angles).
    pub fn rotated(&self, w: f64) -> Option<Self> {
        let blaschke = match &self.blaschke {
            BlaschkeSpec::ExplicitZeros(zs) => {
                BlaschkeSpec::ExplicitZeros(zs.iter().map(|z| z.rotated(w)).collect())
            }
            BlaschkeSpec::Family(_) => return None,
        };
        let singular = match &self.singular {
            SingularMeasureSpec::ExplicitAtoms(atoms) => SingularMeasureSpec::ExplicitAtoms(
                atoms
                    .iter()
                    .map(|a| CircleAtom { theta: wrap_angle(a.theta + w), mass: a.mass })
                    .collect(),
            ),
            SingularMeasureSpec::Family(_) => return None,
        };
        Some(Self { blaschke, singular })
    }
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

/// Outcome of a structural check: `ok()` holds exactly when no finding has
/// severity [`Severity::Error`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        !self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    fn push(&mut self, severity: Severity, message: impl Into<String>) {
        self.findings.push(Finding { severity, message: message.into() });
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }
}

/// Check every structural invariant of a spec: zeros in the open disk,
/// positive finite masses, no duplicated atom angles, family parameters in
/// range (which is what certifies the family tail majorants). Pure and
/// idempotent; problems are reported as findings, never as errors.
pub fn validate_spec(spec: &InnerFunctionSpec) -> ValidationReport {
    let mut report = ValidationReport::default();

    match &spec.blaschke {
        BlaschkeSpec::ExplicitZeros(zeros) => {
            for (i, z) in zeros.iter().enumerate() {
                if !z.in_open_disk() {
                    report.push(
                        Severity::Error,
                        format!("zero {i} at ({}, {}) not in open disk", z.re, z.im),
                    );
                }
            }
        }
        BlaschkeSpec::Family(fam) => {
            let BlaschkeFamily::RadialPower { scale, decay, angle_scale } = *fam;
            if !(scale > 0.0 && scale <= 1.0) {
                report.push(Severity::Error, format!("radial_power scale {scale} outside (0, 1]"));
            }
            if !(decay > 1.0) {
                report.push(
                    Severity::Error,
                    format!("radial_power decay {decay} <= 1: gap series diverges, no tail majorant"),
                );
            } else {
                report.push(
                    Severity::Info,
                    format!("Blaschke gap tail beyond n=1 bounded by {:.6e}", fam.gap_tail(1)),
                );
            }
            if !(angle_scale >= 0.0 && angle_scale.is_finite()) {
                report.push(Severity::Error, format!("radial_power angle_scale {angle_scale} invalid"));
            }
        }
    }

    match &spec.singular {
        SingularMeasureSpec::ExplicitAtoms(atoms) => {
            let mut total = 0.0;
            for (i, a) in atoms.iter().enumerate() {
                if !(a.mass > 0.0 && a.mass.is_finite()) {
                    report.push(Severity::Error, format!("atom {i} mass {} not positive", a.mass));
                } else {
                    total += a.mass;
                }
                if !a.theta.is_finite() || a.theta <= -std::f64::consts::PI || a.theta > std::f64::consts::PI
                {
                    report.push(Severity::Error, format!("atom {i} angle {} outside (-pi, pi]", a.theta));
                }
            }
            let mut sorted: Vec<(f64, usize)> =
                atoms.iter().enumerate().map(|(i, a)| (a.theta, i)).collect();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            for pair in sorted.windows(2) {
                if pair[0].0 == pair[1].0 {
                    report.push(
                        Severity::Error,
                        format!("atoms {} and {} share angle {}", pair[0].1, pair[1].1, pair[0].0),
                    );
                }
            }
            if total.is_finite() {
                report.push(Severity::Info, format!("total mass {total:.6e}"));
            }
        }
        SingularMeasureSpec::Family(fam) => {
            let SingularFamily::Section3 { epsilon, n_cut } = *fam;
            if !(epsilon > 1.0 && epsilon < 2.0) {
                report.push(Severity::Error, format!("section3 epsilon {epsilon} outside (1, 2)"));
            } else {
                let (partial, tail) = fam.mass_enclosure();
                report.push(
                    Severity::Info,
                    format!("total mass in [{partial:.12}, {:.12}] (n_cut = {n_cut})", partial + tail),
                );
            }
            if n_cut == 0 {
                report.push(Severity::Error, "section3 n_cut must be >= 1".to_string());
            }
        }
    }

    if spec.is_identity() {
        report.push(Severity::Info, "empty spec: I == 1, trivial model space".to_string());
    }
    report
}

// ---------------------------------------------------------------------------
// admissible weight functions
// ---------------------------------------------------------------------------

/// Sign tag of the log factor in [`AdmissiblePhi::PowerLog`], following the
/// `x^p·log^{∓c}(1/x)` convention: `Plus` divides by `log^c(1/x)`, `Minus`
/// multiplies by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogSign {
    Plus,
    Minus,
}

/// Weight function φ on `(0, 2]` interpolating between the first-power and
/// second-power boundary conditions. Admissibility (positive, increasing,
/// `φ(x)/x` bounded, `φ(x)/x²` non-increasing, doubling-stable) is checked
/// on a grid by [`phi_admissibility_check`], not assumed by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdmissiblePhi {
    /// `φ(x) = x^p`.
    Power { p: f64 },
    /// `φ(x) = x^p · log^{∓c}(1/x)`; see [`LogSign`].
    ///
    /// Meaningful on `(0, 1)` where `log(1/x) > 0`; at `x ≥ 1` the formula
    /// value (possibly 0, ∞, or NaN) is returned as-is and the grid checker
    /// rejects accordingly.
    PowerLog { p: f64, c: f64, sign: LogSign },
}

impl AdmissiblePhi {
    pub fn power(p: f64) -> Self {
        AdmissiblePhi::Power { p }
    }

    /// Default evaluation grid: 48 points, geometric from 1e-9 to 2
    /// (more than 9 decades).
    pub fn default_grid() -> Vec<f64> {
        geometric_grid(1e-9, 2.0, 48)
    }
}

/// Strictly increasing geometric grid of `n` points from `lo` to `hi`,
/// with both endpoints exact.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln();
    let mut grid: Vec<f64> =
        (0..n).map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp()).collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    grid
}

/// Evaluate φ(x) for `0 < x ≤ 2`.
pub fn phi_eval(phi: &AdmissiblePhi, x: f64) -> Result<f64, SpecError> {
    if !(x > 0.0 && x <= 2.0) {
        return Err(SpecError::Parameter { name: "x", value: x, required: "(0, 2]" });
    }
    Ok(phi_eval_unchecked(phi, x))
}

pub(crate) fn phi_eval_unchecked(phi: &AdmissiblePhi, x: f64) -> f64 {
    match *phi {
        AdmissiblePhi::Power { p } => x.powf(p),
        AdmissiblePhi::PowerLog { p, c, sign } => {
            let l = -x.ln(); // log(1/x)
            let exponent = match sign {
                LogSign::Plus => -c,
                LogSign::Minus => c,
            };
            x.powf(p) * l.powf(exponent)
        }
    }
}

/// Grid admissibility check.
///
/// The grid must lie inside `(0, 2]`, be strictly increasing, and hold at
/// least 16 points spanning at least 4 decades. On it the checker verifies:
/// positivity, monotone increase, boundedness of `φ(x)/x` toward 0 (by the
/// log-log trend of the smallest quartile — a grid can only ever sample
/// this condition), non-increase of `φ(x)/x²` within relative slack 1e-12,
/// and the doubling surrogate `φ(2x) ≤ 8·φ(x)` standing in for the
/// `φ(x) ≍ φ(x+o(x))` stability condition.
///
/// A constant `φ(x)/x²` ratio (the second-power endpoint) is accepted with
/// a warning finding rather than rejected.
pub fn phi_admissibility_check(phi: &AdmissiblePhi, grid: &[f64]) -> ValidationReport {
    let mut report = ValidationReport::default();

    if grid.len() < 16 {
        report.push(Severity::Error, format!("grid has {} points, need >= 16", grid.len()));
        return report;
    }
    if grid.iter().any(|&x| !(x > 0.0 && x <= 2.0)) {
        report.push(Severity::Error, "grid has points outside (0, 2]".to_string());
        return report;
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        report.push(Severity::Error, "grid not strictly increasing".to_string());
        return report;
    }
    if grid[grid.len() - 1] / grid[0] < 1.0e4 {
        report.push(Severity::Error, "grid spans fewer than 4 decades".to_string());
        return report;
    }

    let values: Vec<f64> = grid.iter().map(|&x| phi_eval_unchecked(phi, x)).collect();

    if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        report.push(
            Severity::Error,
            format!("phi not positive and finite at x = {} (value {})", grid[i], values[i]),
        );
        return report;
    }

    const SLACK: f64 = 1e-12;

    if let Some(i) = (1..grid.len()).find(|&i| values[i] < values[i - 1] * (1.0 - SLACK)) {
        report.push(
            Severity::Error,
            format!("phi not increasing between x = {} and {}", grid[i - 1], grid[i]),
        );
    }

    // condition (1): phi(x)/x bounded. On the smallest quartile, fit the
    // log-log trend of phi(x)/x; a clearly negative slope means the ratio
    // grows without bound as x -> 0.
    let q = (grid.len() / 4).max(4);
    let slope = {
        let xs: Vec<f64> = grid[..q].iter().map(|x| x.ln()).collect();
        let ys: Vec<f64> = (0..q).map(|i| (values[i] / grid[i]).ln()).collect();
        let xm = xs.iter().sum::<f64>() / q as f64;
        let ym = ys.iter().sum::<f64>() / q as f64;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
        let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
        num / den
    };
    const SLOPE_TOL: f64 = 0.02;
    if slope < -SLOPE_TOL {
        report.push(
            Severity::Error,
            format!("condition (1): phi(x)/x grows as x -> 0 (log-log slope {slope:.4})"),
        );
    }
    let sup_ratio1 = grid.iter().zip(&values).map(|(x, v)| v / x).fold(0.0f64, f64::max);
    report.push(Severity::Info, format!("sup phi(x)/x on grid = {sup_ratio1:.6e}"));

    // condition (2): phi(x)/x^2 non-increasing within relative slack.
    let q2: Vec<f64> = grid.iter().zip(&values).map(|(x, v)| v / (x * x)).collect();
    let mut strictly_decreasing = true;
    for i in 1..q2.len() {
        if q2[i] > q2[i - 1] * (1.0 + SLACK) {
            report.push(
                Severity::Error,
                format!("condition (2): phi(x)/x^2 increases between x = {} and {}", grid[i - 1], grid[i]),
            );
            strictly_decreasing = false;
            break;
        }
        if q2[i] >= q2[i - 1] * (1.0 - SLACK) {
            strictly_decreasing = false;
        }
    }
    if report.ok() && !strictly_decreasing {
        report.push(
            Severity::Warning,
            "condition (2) holds non-strictly (phi(x)/x^2 has flat stretches; second-power endpoint)"
                .to_string(),
        );
    }

    // condition (3) surrogate: doubling phi(2x) <= C_d phi(x), C_d = 8.
    const DOUBLING: f64 = 8.0;
    for (i, &x) in grid.iter().enumerate() {
        if 2.0 * x <= 2.0 {
            let v2 = phi_eval_unchecked(phi, 2.0 * x);
            if v2 > DOUBLING * values[i] {
                report.push(
                    Severity::Error,
                    format!("condition (3): phi(2x) > {DOUBLING}*phi(x) at x = {x}"),
                );
                break;
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA_2_5: f64 = 1.341_487_257_250_917_2; // Riemann zeta(2.5)

    #[test]
    fn unit_disk_point_validation() {
        assert!(UnitDiskPoint::new(0.3, 0.4).is_ok());
        assert_eq!(
            UnitDiskPoint::new(1.0, 0.0),
            Err(SpecError::NotInOpenDisk { re: 1.0, im: 0.0 })
        );
        assert!(UnitDiskPoint::new(0.8, 0.7).is_err());
        assert!(UnitDiskPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn circle_atom_angle_wrapping() {
        let a = CircleAtom::new(3.0 * std::f64::consts::PI, 1.0).unwrap();
        assert!((a.theta() - std::f64::consts::PI).abs() < 1e-12);
        assert!(CircleAtom::new(0.0, 0.0).is_err());
        assert!(CircleAtom::new(0.0, -1.0).is_err());
    }

    #[test]
    fn validate_empty_spec_is_ok() {
        let spec = InnerFunctionSpec::identity();
        let report = validate_spec(&spec);
        assert!(report.ok());
        // idempotent / pure
        let again = validate_spec(&spec);
        assert_eq!(report.ok(), again.ok());
        assert_eq!(report.findings.len(), again.findings.len());
    }

    #[test]
    fn validate_boundary_zero_is_error() {
        let spec = InnerFunctionSpec::from_zeros(vec![UnitDiskPoint::new_unchecked(1.0, 0.0)]);
        let report = validate_spec(&spec);
        assert!(!report.ok());
        assert!(report.errors().any(|f| f.message.contains("not in open disk")));
    }

    #[test]
    fn validate_duplicate_atoms() {
        let spec = InnerFunctionSpec::from_atoms(vec![
            CircleAtom::new(1.0, 0.5).unwrap(),
            CircleAtom::new(1.0, 0.25).unwrap(),
        ]);
        assert!(!validate_spec(&spec).ok());
    }

    #[test]
    fn section3_atom_values() {
        let spec = make_section3_measure(1.5, 100).unwrap();
        let SingularMeasureSpec::Family(fam) = &spec else { panic!() };
        assert!((fam.atom_angle(2) - 0.5).abs() < 1e-15);
        assert!((fam.atom_mass(2) - 0.176_776_695_296_636_88).abs() < 1e-15);
    }

    #[test]
    fn section3_eps_boundary_rejected() {
        assert!(make_section3_measure(1.0, 10).is_err());
        assert!(make_section3_measure(2.0, 10).is_err());
        assert!(make_section3_measure(1.5, 0).is_err());
    }

    #[test]
    fn section3_mass_matches_zeta() {
        // partial + certified tail encloses zeta(2.5) - 1e-6 .. zeta(2.5)
        let spec = make_section3_measure(1.5, 4000).unwrap();
        let SingularMeasureSpec::Family(fam) = &spec else { panic!() };
        let (partial, tail) = fam.mass_enclosure();
        assert!(partial <= ZETA_2_5);
        assert!(partial + tail >= ZETA_2_5 - 1e-6, "partial {partial} + tail {tail}");
        assert!(partial >= ZETA_2_5 - 1e-4);
        assert!(validate_spec(&InnerFunctionSpec::new(BlaschkeSpec::empty(), spec.clone())).ok());
    }

    #[test]
    fn section3_mass_identity_exact() {
        // alpha_n * n^{1+eps} == 1 to machine precision
        for &eps in &[1.2, 1.5, 1.8] {
            let fam = SingularFamily::Section3 { epsilon: eps, n_cut: 1 };
            for n in [1usize, 2, 7, 100, 12345] {
                let prod = fam.atom_mass(n) * (n as f64).powf(1.0 + eps);
                assert!((prod - 1.0).abs() < 1e-14, "eps={eps} n={n}: {prod}");
            }
        }
    }

    #[test]
    fn section3_atom_index_lookup() {
        let fam = SingularFamily::Section3 { epsilon: 1.5, n_cut: 10 };
        assert_eq!(fam.atom_index_at_angle(1.0 / 7.0), Some(7));
        assert_eq!(fam.atom_index_at_angle(0.0), None);
        assert_eq!(fam.atom_index_at_angle(0.1234), None);
        assert_eq!(fam.atom_index_at_angle(-0.5), None);
    }

    #[test]
    fn phi_eval_examples() {
        let p = AdmissiblePhi::power(1.5);
        assert!((phi_eval(&p, 0.25).unwrap() - 0.125).abs() < 1e-15);
        // Frostman endpoint: phi(x) = x is the identity
        let frostman = AdmissiblePhi::power(1.0);
        for &x in &[0.001, 0.3, 1.7] {
            assert_eq!(phi_eval(&frostman, x).unwrap(), x);
        }
        // log(1/x) = 1 at x = 1/e
        let pl = AdmissiblePhi::PowerLog { p: 1.5, c: 1.0, sign: LogSign::Plus };
        let x = (-1.0f64).exp();
        assert!((phi_eval(&pl, x).unwrap() - x.powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn phi_eval_domain_errors() {
        let p = AdmissiblePhi::power(1.5);
        assert!(phi_eval(&p, 0.0).is_err());
        assert!(phi_eval(&p, -1.0).is_err());
        assert!(phi_eval(&p, 2.0 + 1e-9).is_err());
        assert!(phi_eval(&p, 2.0).is_ok());
    }

    #[test]
    fn admissibility_triage() {
        let grid = AdmissiblePhi::default_grid();
        // p in [1, 2): admissible
        assert!(phi_admissibility_check(&AdmissiblePhi::power(1.5), &grid).ok());
        assert!(phi_admissibility_check(&AdmissiblePhi::power(1.0), &grid).ok());
        // p = 0.5 fails condition (1)
        let r = phi_admissibility_check(&AdmissiblePhi::power(0.5), &grid);
        assert!(!r.ok());
        assert!(r.errors().any(|f| f.message.contains("condition (1)")));
        // p = 2.5 fails condition (2)
        let r = phi_admissibility_check(&AdmissiblePhi::power(2.5), &grid);
        assert!(!r.ok());
        assert!(r.errors().any(|f| f.message.contains("condition (2)")));
    }

    #[test]
    fn admissibility_second_power_endpoint_warns() {
        let grid = AdmissiblePhi::default_grid();
        let r = phi_admissibility_check(&AdmissiblePhi::power(2.0), &grid);
        assert!(r.ok());
        assert!(r.findings.iter().any(|f| f.severity == Severity::Warning));
    }

    #[test]
    fn admissibility_power_log_depends_on_grid() {
        // x^1.5·log(1/x): positive only on (0,1), so the full-range grid
        // rejects it while a small-x grid accepts it.
        let phi = AdmissiblePhi::PowerLog { p: 1.5, c: 1.0, sign: LogSign::Minus };
        assert!(!phi_admissibility_check(&phi, &AdmissiblePhi::default_grid()).ok());
        let small = geometric_grid(1e-9, 0.4, 32);
        assert!(phi_admissibility_check(&phi, &small).ok());
        // x·log(1/x) has phi(x)/x = log(1/x) unbounded: rejected even there
        let bad = AdmissiblePhi::PowerLog { p: 1.0, c: 1.0, sign: LogSign::Minus };
        let r = phi_admissibility_check(&bad, &small);
        assert!(r.errors().any(|f| f.message.contains("condition (1)")), "{:?}", r.findings);
    }

    #[test]
    fn admissibility_grid_preconditions() {
        let phi = AdmissiblePhi::power(1.5);
        assert!(!phi_admissibility_check(&phi, &[0.5, 1.0]).ok());
        let narrow = geometric_grid(0.1, 1.0, 20);
        assert!(!phi_admissibility_check(&phi, &narrow).ok());
    }

    #[test]
    fn phi_monotone_properties_on_grid() {
        // accepted phi: phi increasing and phi(x)/x^2 non-increasing
        let grid = AdmissiblePhi::default_grid();
        for phi in [AdmissiblePhi::power(1.0), AdmissiblePhi::power(1.5), AdmissiblePhi::power(2.0)] {
            assert!(phi_admissibility_check(&phi, &grid).ok() || matches!(phi, AdmissiblePhi::Power { p } if p == 2.0));
            let vals: Vec<f64> = grid.iter().map(|&x| phi_eval(&phi, x).unwrap()).collect();
            for i in 1..grid.len() {
                assert!(vals[i] >= vals[i - 1]);
                let qi = vals[i] / (grid[i] * grid[i]);
                let qp = vals[i - 1] / (grid[i - 1] * grid[i - 1]);
                assert!(qi <= qp * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn rotation_wraps_angles() {
        let spec = InnerFunctionSpec::new(
            BlaschkeSpec::ExplicitZeros(vec![UnitDiskPoint::new(0.5, 0.0).unwrap()]),
            SingularMeasureSpec::ExplicitAtoms(vec![CircleAtom::new(3.0, 1.0).unwrap()]),
        );
        let rot = spec.rotated(0.5).unwrap();
        let SingularMeasureSpec::ExplicitAtoms(atoms) = &rot.singular else { panic!() };
        assert!(atoms[0].theta() <= std::f64::consts::PI);
        assert!(validate_spec(&rot).ok());
        // families cannot rotate
        let fam = InnerFunctionSpec::new(BlaschkeSpec::empty(), make_section3_measure(1.5, 10).unwrap());
        assert!(fam.rotated(0.1).is_none());
    }

    #[test]
    fn radial_power_family_basics() {
        let fam = BlaschkeFamily::radial_power(0.5, 2.0, 1.0).unwrap();
        let z = fam.zero(2);
        assert!((z.modulus() - (1.0 - 0.5 * 0.25)).abs() < 1e-15);
        assert!((z.arg() - 0.5).abs() < 1e-15);
        assert!(fam.gap_tail(10) < fam.gap_tail(5));
        assert!(BlaschkeFamily::radial_power(0.5, 1.0, 0.0).is_err());
        assert!(BlaschkeFamily::radial_power(1.5, 2.0, 0.0).is_err());
    }
}
