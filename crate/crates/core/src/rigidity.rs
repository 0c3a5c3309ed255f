//! Rigidity engines: certify that a candidate map is the identity (simplex
//! self-maps) or the Born readout (readout maps), or produce a concrete
//! witness for the violated premise.
//!
//! The mathematical backbone: a round-metric 1-Lipschitz self-map of the
//! positive spherical orthant that fixes all coordinate vertices must be
//! the identity. On the simplex side the Lipschitz premise is Fisher
//! non-expansion; on the readout side it follows from the admissibility
//! hypotheses H1-H2, and calibration H3 supplies the vertex fixing. The
//! checkers sample those premises, then measure the identity/Born gap and
//! report one of four conclusions.

use serde::Serialize;
use serde_json::{json, Value};

use crate::admissibility::{run_admissibility, CurveSuite};
use crate::error::{Error, Result};
use crate::numeric::golden_max;
use crate::projective::Ray;
use crate::readout::{sqrt_readout, Readout};
use crate::report::{RigidityConclusion, Witness, WitnessKind};
use crate::sampling::{sample_orthant_interior, sample_simplex_interior, sample_tangent, RngSeed};
use crate::simplex::{
    fisher_nonexpansion_residual_adaptive, round_distance, sqrt_chart, OrthantPoint,
    OrthantSelfMap, SimplexPoint, SimplexSelfMap,
};
use crate::{Tolerances, DEFAULT_FD_STEP, GOLDEN_ITERS};

/// Vertex-fixing precondition tolerance for dominance residuals.
pub const VERTEX_FIX_TOL: f64 = 1e-9;

/// Minimum coordinate for sampled interior simplex points; keeps finite
/// differences of the Fisher form well conditioned.
const SAMPLE_FLOOR: f64 = 1e-4;

const PAIR_POINT_STREAM: u64 = 0x0500_0000;
const PAIR_TANGENT_STREAM: u64 = 0x0600_0000;
const LIPSCHITZ_STREAM: u64 = 0x0700_0000;

// ── verdict type ────────────────────────────────────────────────────────

/// Outcome of a rigidity check, with enough context to replay it.
#[derive(Debug, Clone, Serialize)]
pub struct RigidityVerdict {
    pub conclusion: RigidityConclusion,
    /// Largest observed distance from the identity (simplex route) or from
    /// the Born readout (readout route) on the evaluated samples.
    pub max_identity_gap: f64,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub seed: Option<u64>,
    /// Tolerance the conclusion was judged against.
    pub tolerance: f64,
    pub diagnostics: Value,
}

impl RigidityVerdict {
    pub fn confirmed(&self) -> bool {
        matches!(
            self.conclusion,
            RigidityConclusion::IdentityConfirmed | RigidityConclusion::BornConfirmed
        )
    }
}

// ── vertex dominance ────────────────────────────────────────────────────

/// For a vertex-fixing orthant self-map, returns the coordinate gains
/// `(Psi(x)_i - x_i)_i`. A round-metric 1-Lipschitz vertex-fixing map can
/// only increase each coordinate (it cannot move `x` away from any vertex,
/// and the coordinate is the cosine of the vertex distance); since both
/// `x` and `Psi(x)` are unit vectors, all gains must then vanish. Any
/// strictly negative entry certifies an expansion against that vertex.
///
/// Errors if some vertex moves by more than [`VERTEX_FIX_TOL`].
pub fn vertex_dominance_residuals(map: &OrthantSelfMap, x: &OrthantPoint) -> Result<Vec<f64>> {
    let d = map.dim();
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: x.dim(),
        });
    }
    for i in 0..d {
        let vertex = OrthantPoint::vertex(d, i);
        let gap = map.eval(&vertex).linf_distance(&vertex);
        if gap > VERTEX_FIX_TOL {
            return Err(Error::VertexNotFixed { index: i, gap });
        }
    }
    let y = map.eval(x);
    Ok(y.coords()
        .iter()
        .zip(x.coords())
        .map(|(&yi, &xi)| yi - xi)
        .collect())
}

// ── pairwise Lipschitz search ───────────────────────────────────────────

fn perturb_orthant(x: &OrthantPoint, coord: usize, delta: f64) -> OrthantPoint {
    let mut coords = x.coords().to_vec();
    coords[coord] = (coords[coord] + delta).max(0.0);
    OrthantPoint::normalized(coords).unwrap_or_else(|_| x.clone())
}

/// Samples `n` interior orthant points plus all vertices and scans every
/// pair for a round-metric expansion `d(Psi x, Psi y) > d(x, y) + tol`.
/// The best pair is tightened by a coordinate-wise golden-section search
/// before being returned as a witness; `None` means no expansion was found.
pub fn lipschitz_witness_search(
    map: &OrthantSelfMap,
    seed: RngSeed,
    n: usize,
    tol: f64,
) -> Result<Option<Witness>> {
    if n < 2 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            bounds: "[2, inf)",
        });
    }
    let d = map.dim();
    let mut points: Vec<OrthantPoint> = (0..n)
        .map(|k| sample_orthant_interior(seed, LIPSCHITZ_STREAM + k as u64, d))
        .collect();
    for i in 0..d {
        points.push(OrthantPoint::vertex(d, i));
    }
    let images: Vec<OrthantPoint> = points.iter().map(|p| map.eval(p)).collect();

    let gap_of = |x: &OrthantPoint, y: &OrthantPoint| -> f64 {
        round_distance(&map.eval(x), &map.eval(y)) - round_distance(x, y)
    };

    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let gap = round_distance(&images[i], &images[j]) - round_distance(&points[i], &points[j]);
            if best.map_or(true, |(.., g)| gap > g) {
                best = Some((i, j, gap));
            }
        }
    }
    let (bi, bj, mut best_gap) = best.expect("at least one pair");
    if best_gap <= tol {
        return Ok(None);
    }

    // Coordinate-wise golden-section refinement of both endpoints.
    let mut x = points[bi].clone();
    let mut y = points[bj].clone();
    for _ in 0..2 {
        for coord in 0..d {
            let (dx, gx) = golden_max(
                |delta| gap_of(&perturb_orthant(&x, coord, delta), &y),
                -0.15,
                0.15,
                GOLDEN_ITERS,
            );
            if gx > best_gap {
                best_gap = gx;
                x = perturb_orthant(&x, coord, dx);
            }
            let (dy, gy) = golden_max(
                |delta| gap_of(&x, &perturb_orthant(&y, coord, delta)),
                -0.15,
                0.15,
                GOLDEN_ITERS,
            );
            if gy > best_gap {
                best_gap = gy;
                y = perturb_orthant(&y, coord, dy);
            }
        }
    }

    let lhs = round_distance(&map.eval(&x), &map.eval(&y));
    let rhs = round_distance(&x, &y);
    Ok(Some(Witness::new(
        WitnessKind::Lipschitz,
        json!({"x": x.coords(), "y": y.coords()}),
        lhs,
        rhs,
        format!(
            "map '{}' stretches the pair to round distance {} from {}",
            map.name(),
            lhs,
            rhs
        ),
    )))
}

// ── simplex route ───────────────────────────────────────────────────────

struct FisherSample {
    u: SimplexPoint,
    v: crate::simplex::SimplexTangent,
    residual: f64,
    h: f64,
}

fn fisher_witness(map_name: &str, s: &FisherSample, base: f64) -> Witness {
    Witness::new(
        WitnessKind::Lipschitz,
        json!({"u": s.u.coords(), "v": s.v.components(), "fd_step": s.h}),
        s.residual + base,
        base,
        format!(
            "Fisher expansion: map '{map_name}' pushes the form to {} against {} at the recorded (u, v)",
            s.residual + base,
            base
        ),
    )
}

/// Golden-section sweep along barycenter-to-vertex lines for a positive
/// Fisher-expansion residual; used when random pairs miss the violation.
fn fisher_expansion_search(map: &SimplexSelfMap, tol: f64) -> Option<Witness> {
    let d = map.dim();
    let mut best: Option<FisherSample> = None;
    for j in 0..d {
        let centered: Vec<f64> = (0..d)
            .map(|i| if i == j { 1.0 } else { 0.0 })
            .collect();
        let v = crate::simplex::SimplexTangent::centered(&centered).expect("valid direction");
        let point_at = |r: f64| -> SimplexPoint {
            let coords: Vec<f64> = (0..d)
                .map(|i| {
                    let target = if i == j { 1.0 } else { 0.0 };
                    (1.0 - r) / d as f64 + r * target
                })
                .collect();
            SimplexPoint::new(coords).expect("interior blend stays on the simplex")
        };
        let residual_at = |r: f64| -> f64 {
            fisher_nonexpansion_residual_adaptive(map, &point_at(r), &v, DEFAULT_FD_STEP)
                .map(|(res, _)| res)
                .unwrap_or(f64::NEG_INFINITY)
        };
        let (r_star, res_star) = golden_max(residual_at, 0.01, 0.95, GOLDEN_ITERS);
        if res_star.is_finite() && best.as_ref().map_or(true, |b| res_star > b.residual) {
            let u = point_at(r_star);
            let (residual, h) =
                fisher_nonexpansion_residual_adaptive(map, &u, &v, DEFAULT_FD_STEP).ok()?;
            best = Some(FisherSample { u, v, residual, h });
        }
    }
    let best = best?;
    if best.residual > tol {
        let base = crate::simplex::fisher_norm_sq(&best.u, &best.v).ok()?;
        Some(fisher_witness(map.name(), &best, base))
    } else {
        None
    }
}

/// Certifies that a simplex self-map is the identity, or finds the broken
/// premise. Pipeline: (a) every vertex must be fixed within `tol`;
/// (b) Fisher non-expansion is sampled on `n` random interior point /
/// tangent pairs; (c) the identity gap `max |T(u) - u|_inf` is measured on
/// those points. When (a) and (b) hold but the gap exceeds `tol`, targeted
/// searches (vertex dominance in the chart, barycenter-to-vertex sweeps,
/// pairwise Lipschitz) hunt for a witness; if none is found the verdict is
/// INCONCLUSIVE.
pub fn simplex_rigidity_check(
    map: &SimplexSelfMap,
    seed: RngSeed,
    n: usize,
    tol: f64,
) -> RigidityVerdict {
    let d = map.dim();
    assert!(n >= d, "need at least d samples");
    let mut diagnostics = json!({
        "map": map.name(),
        "fd_step": DEFAULT_FD_STEP,
        "sample_floor": SAMPLE_FLOOR,
    });

    // (a) vertex premise
    for i in 0..d {
        let vertex = SimplexPoint::vertex(d, i);
        let image = map.eval(&vertex);
        let gap = image.linf_distance(&vertex);
        if gap > tol {
            let witness = Witness::new(
                WitnessKind::H3,
                json!({"vertex": i, "image": image.coords()}),
                gap,
                tol,
                format!("map '{}' moves vertex {} by {}", map.name(), i, gap),
            );
            return RigidityVerdict {
                conclusion: RigidityConclusion::PremiseViolated,
                max_identity_gap: gap,
                witness: Some(witness),
                samples_used: 0,
                seed: Some(seed.0),
                tolerance: tol,
                diagnostics,
            };
        }
    }

    // (b) sampled Fisher non-expansion, (c) identity gap on the same points
    let mut max_gap = 0.0f64;
    let mut worst: Option<FisherSample> = None;
    for k in 0..n {
        let u = sample_simplex_interior(seed, PAIR_POINT_STREAM + k as u64, d, SAMPLE_FLOOR);
        let v = sample_tangent(seed, PAIR_TANGENT_STREAM + k as u64, d);
        max_gap = max_gap.max(map.eval(&u).linf_distance(&u));
        if let Ok((residual, h)) = fisher_nonexpansion_residual_adaptive(map, &u, &v, DEFAULT_FD_STEP)
        {
            if worst.as_ref().map_or(true, |w| residual > w.residual) {
                worst = Some(FisherSample { u, v, residual, h });
            }
        }
    }
    let max_residual = worst.as_ref().map_or(f64::NEG_INFINITY, |w| w.residual);
    diagnostics["max_fisher_residual"] = json!(max_residual);
    diagnostics["max_identity_gap_on_samples"] = json!(max_gap);

    if let Some(w) = worst.as_ref().filter(|w| w.residual > tol) {
        let base = crate::simplex::fisher_norm_sq(&w.u, &w.v).unwrap_or(f64::NAN);
        return RigidityVerdict {
            conclusion: RigidityConclusion::PremiseViolated,
            max_identity_gap: max_gap,
            witness: Some(fisher_witness(map.name(), w, base)),
            samples_used: n,
            seed: Some(seed.0),
            tolerance: tol,
            diagnostics,
        };
    }

    if max_gap <= tol {
        return RigidityVerdict {
            conclusion: RigidityConclusion::IdentityConfirmed,
            max_identity_gap: max_gap,
            witness: None,
            samples_used: n,
            seed: Some(seed.0),
            tolerance: tol,
            diagnostics,
        };
    }

    // Premises passed on the samples yet the map is visibly not the
    // identity: escalate with targeted searches, starting with a dominance
    // scan at the sampled points through the square-root chart.
    for k in 0..n {
        let u = sample_simplex_interior(seed, PAIR_POINT_STREAM + k as u64, d, SAMPLE_FLOOR);
        let x = sqrt_chart(&u);
        let image = sqrt_chart(&map.eval(&u));
        let residuals: Vec<f64> = image
            .coords()
            .iter()
            .zip(x.coords())
            .map(|(&yi, &xi)| yi - xi)
            .collect();
        if let Some((i, &r)) = residuals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
        {
            if r < -tol {
                let lhs = image.coords()[i].clamp(-1.0, 1.0).acos();
                let rhs = x.coords()[i].clamp(-1.0, 1.0).acos();
                let witness = Witness::new(
                    WitnessKind::VertexDominance,
                    json!({"x": x.coords(), "vertex": i, "residuals": residuals}),
                    lhs,
                    rhs,
                    format!(
                        "map '{}' moves the chart point away from vertex {}: coordinate drops by {}",
                        map.name(),
                        i,
                        -r
                    ),
                );
                return RigidityVerdict {
                    conclusion: RigidityConclusion::PremiseViolated,
                    max_identity_gap: max_gap,
                    witness: Some(witness),
                    samples_used: n,
                    seed: Some(seed.0),
                    tolerance: tol,
                    diagnostics,
                };
            }
        }
    }
    if let Some(witness) = fisher_expansion_search(map, tol) {
        return RigidityVerdict {
            conclusion: RigidityConclusion::PremiseViolated,
            max_identity_gap: max_gap,
            witness: Some(witness),
            samples_used: n,
            seed: Some(seed.0),
            tolerance: tol,
            diagnostics,
        };
    }

    diagnostics["note"] =
        json!("identity gap exceeds tolerance but no premise violation was located");
    RigidityVerdict {
        conclusion: RigidityConclusion::Inconclusive,
        max_identity_gap: max_gap,
        witness: None,
        samples_used: n,
        seed: Some(seed.0),
        tolerance: tol,
        diagnostics,
    }
}

// ── readout route ───────────────────────────────────────────────────────

/// Certifies that an admissible readout is the Born rule. Runs the three
/// admissibility checks on the suite; any failure is a premise violation
/// with that witness. Otherwise the proof chain is evaluated on the basis
/// rays plus the samples: (i) the round distance from the square-rooted
/// readout to each vertex must not exceed the Fubini-Study distance to the
/// matching basis ray; (ii) each readout square root must dominate the
/// amplitude modulus; (iii) the Born deviation must vanish. All three
/// within `tol.eq` yields BORN_CONFIRMED; otherwise INCONCLUSIVE with the
/// largest chain residual (finite sampling missed the premise violation).
pub fn readout_rigidity_check(
    readout: &Readout,
    suite: &CurveSuite,
    samples: &[Ray],
    tol: Tolerances,
    h1_tol: f64,
) -> RigidityVerdict {
    assert!(!samples.is_empty(), "need at least one sample ray");
    let report = run_admissibility(readout, suite, samples, tol, h1_tol);
    let d = readout.dim();

    // Proof-chain residuals on basis rays + samples (diagnostics even when
    // a premise already failed).
    let mut max_contraction = f64::NEG_INFINITY;
    let mut contraction_at = json!(null);
    let mut max_dominance = f64::NEG_INFINITY;
    let mut dominance_at = json!(null);
    let mut chain_rays: Vec<(Value, Ray)> = (0..d)
        .map(|i| (json!({"basis": i}), Ray::basis(d, i)))
        .collect();
    chain_rays.extend(
        samples
            .iter()
            .enumerate()
            .map(|(k, psi)| (json!({"sample": k}), psi.clone())),
    );
    for (loc, psi) in &chain_rays {
        let r = sqrt_readout(readout, psi);
        let moduli = psi.moduli();
        for i in 0..d {
            let contraction = r.coords()[i].clamp(-1.0, 1.0).acos() - moduli[i].clamp(0.0, 1.0).acos();
            if contraction > max_contraction {
                max_contraction = contraction;
                contraction_at = json!({"ray": loc, "outcome": i});
            }
            let dominance = moduli[i] - r.coords()[i];
            if dominance > max_dominance {
                max_dominance = dominance;
                dominance_at = json!({"ray": loc, "outcome": i});
            }
        }
    }
    let deviation = report.born_deviation.max_deviation;

    let diagnostics = json!({
        "readout": readout.name(),
        "h1": report.h1.verdict,
        "h2": report.h2.verdict,
        "h3": report.h3.verdict,
        "h2_max_ratio": report.h2.max_ratio,
        "max_contraction_residual": max_contraction,
        "contraction_argmax": contraction_at,
        "max_dominance_residual": max_dominance,
        "dominance_argmax": dominance_at,
        "born_deviation": deviation,
        "suite": suite.provenance(),
    });

    if !report.all_passed() {
        let witness = report.witnesses().first().map(|w| (*w).clone());
        return RigidityVerdict {
            conclusion: RigidityConclusion::PremiseViolated,
            max_identity_gap: deviation,
            witness,
            samples_used: samples.len(),
            seed: None,
            tolerance: tol.eq,
            diagnostics,
        };
    }

    let chain_ok =
        max_contraction <= tol.eq && max_dominance <= tol.eq && deviation <= tol.eq;
    RigidityVerdict {
        conclusion: if chain_ok {
            RigidityConclusion::BornConfirmed
        } else {
            RigidityConclusion::Inconclusive
        },
        max_identity_gap: deviation,
        witness: None,
        samples_used: samples.len(),
        seed: None,
        tolerance: tol.eq,
        diagnostics,
    }
}
