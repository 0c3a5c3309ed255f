//! Numerical toolkit for deciding whether a fixed-basis readout of pure
//! quantum states is forced to be the Born rule.
//!
//! The pipeline: model readouts as maps from state rays to probability
//! vectors ([`readout`]), measure them against the Fisher-Rao geometry of
//! the simplex ([`simplex`]) and the Fubini-Study geometry of rays
//! ([`projective`]), test the admissibility hypotheses - continuity along
//! geodesics, no classical Fisher information above the quantum value, and
//! calibration at basis states ([`admissibility`]) - and then either certify
//! identity/Born behavior or exhibit a concrete counterexample
//! ([`rigidity`]). Escort-style readouts and split/merge invariance of their
//! generators get dedicated scanners ([`escort`]).
//!
//! Every verdict is serializable, every FAIL carries a replayable witness,
//! and all sampling is deterministic in `(seed, stream)` ([`sampling`]).

pub mod admissibility;
pub mod error;
pub mod escort;
pub mod numeric;
pub mod projective;
pub mod readout;
pub mod report;
pub mod rigidity;
pub mod sampling;
pub mod simplex;

pub use error::{Error, Result};
pub use sampling::RngSeed;

/// Constructor tolerance for point invariants (nonnegativity, unit sum,
/// unit norm).
pub const POINT_TOL: f64 = 1e-12;

/// Default absolute tolerance for equality checks.
pub const DEFAULT_TOL_EQ: f64 = 1e-9;

/// Default slack for inequality checks.
pub const DEFAULT_TOL_INEQ: f64 = 1e-7;

/// Default central-difference step for derivatives along curves and maps.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Default number of sample nodes per curve.
pub const DEFAULT_NODES: usize = 64;

/// Blend factor used to pull boundary points into the interior before
/// operations that need strict positivity.
pub const INTERIOR_RETRACT_EPS: f64 = 1e-9;

/// Quantum-information floor below which a node counts as stationary and
/// is skipped in information-ratio statistics.
pub const STATIONARY_FQ_FLOOR: f64 = 1e-10;

/// Iteration budget for golden-section witness refinement.
pub const GOLDEN_ITERS: usize = 40;

/// Equality/inequality tolerance pair used by the higher-level checks.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance for quantities that should vanish.
    pub eq: f64,
    /// Slack for one-sided bounds.
    pub ineq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq: DEFAULT_TOL_EQ,
            ineq: DEFAULT_TOL_INEQ,
        }
    }
}
