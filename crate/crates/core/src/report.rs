//! Verdict and witness types shared by the checks.
//!
//! Every failed check carries a [`Witness`]: the violated inequality's two
//! sides plus enough serialized location data (ray amplitudes, curve
//! parameter, grid point, ...) to re-evaluate the violation independently.

use serde::{Deserialize, Serialize};

/// Outcome of a single admissibility or scan check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Final conclusion of a rigidity run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RigidityConclusion {
    /// The self-map is the identity to within tolerance on all samples.
    IdentityConfirmed,
    /// The readout matches the Born probabilities on all samples.
    BornConfirmed,
    /// Some hypothesis failed; a witness is attached.
    PremiseViolated,
    /// Premises passed on the samples but the conclusion did not; the
    /// sampling was too coarse to decide.
    Inconclusive,
}

impl std::fmt::Display for RigidityConclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RigidityConclusion::IdentityConfirmed => "IDENTITY_CONFIRMED",
            RigidityConclusion::BornConfirmed => "BORN_CONFIRMED",
            RigidityConclusion::PremiseViolated => "PREMISE_VIOLATED",
            RigidityConclusion::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Which inequality a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    /// Continuity along geodesics (chord shrink / total length Cauchy).
    H1,
    /// Classical information bounded by the quantum value.
    H2,
    /// Calibration at basis states.
    H3,
    /// Round-metric 1-Lipschitz bound (equivalently Fisher non-expansion).
    #[serde(rename = "LIPSCHITZ")]
    Lipschitz,
    /// Coordinate dominance at a vertex-fixing map.
    #[serde(rename = "VERTEX_DOMINANCE")]
    VertexDominance,
    /// Generator normalization `sum_i f(u_i) = 1`.
    #[serde(rename = "NORMALIZATION")]
    Normalization,
    /// Split/merge invariance `f(ks) + f((1-k)s) = f(s)`.
    #[serde(rename = "MARKOV")]
    Markov,
    /// Additivity `f(u+v) = f(u) + f(v)`.
    #[serde(rename = "CAUCHY")]
    Cauchy,
    /// Proportionality `f(t) = c t` from the least-squares fit.
    #[serde(rename = "LINEAR_FIT")]
    LinearFit,
}

/// A replayable violation: `lhs <= rhs` was expected, `lhs > rhs` observed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    /// Serialized inputs locating the violation (ray, curve parameter,
    /// point pair, grid cell, ...).
    pub location: serde_json::Value,
    /// Left side of the violated inequality.
    pub lhs: f64,
    /// Right side of the violated inequality.
    pub rhs: f64,
    pub description: String,
}

impl Witness {
    pub fn new(
        kind: WitnessKind,
        location: serde_json::Value,
        lhs: f64,
        rhs: f64,
        description: impl Into<String>,
    ) -> Self {
        Self {
            kind,
            location,
            lhs,
            rhs,
            description: description.into(),
        }
    }

    /// Amount by which the inequality fails.
    pub fn excess(&self) -> f64 {
        self.lhs - self.rhs
    }
}
