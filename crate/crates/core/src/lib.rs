//! Numerics for inner functions `I = B·S_μ` on the unit disk and the
//! reproducing kernels of the associated model spaces `(IH²)^⊥`.
//!
//! The crate evaluates `|I(r)|` and `‖k_r^I‖²` with certified truncation of
//! the underlying infinite series, checks the classical boundary-convergence
//! conditions (first-power, second-power, and φ-weighted sums) with
//! certified verdicts, estimates radial growth exponents on dyadic radii,
//! and runs the discrete-measure constructions that realise near-maximal
//! model-space growth.
//!
//! Modules:
//! * [`inner_core`] — domain types (zeros, atoms, weight functions) and validation
//! * [`eval`] — cancellation-safe evaluation of moduli and kernels
//! * [`conditions`] — convergence-condition sums with certified tails
//! * [`asymptotics`] — growth tables, log-log exponent fits, upper-bound checks
//! * [`lowerbound`] — sampling-sequence construction realising lower growth
//! * [`series`] — truncation primitives shared by the above

pub mod asymptotics;
pub mod conditions;
pub mod eval;
pub mod inner_core;
pub mod lowerbound;
pub mod series;

pub use eval::{EvalError, EvalResult, TruncationPolicy};
pub use inner_core::{
    AdmissiblePhi, BlaschkeFamily, BlaschkeSpec, CircleAtom, InnerFunctionSpec, LogSign,
    SingularFamily, SingularMeasureSpec, UnitDiskPoint, ValidationReport,
};
