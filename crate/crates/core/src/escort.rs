//! Functional-equation scanners for escort generators, and the escort
//! collapse-to-Born rigidity test.
//!
//! A generator `f` feeding an escort readout is constrained three ways,
//! each scanned on explicit grids with replayable residuals:
//!
//! * **normalization** — `sum_i f(u_i) = 1` on every simplex (raw, without
//!   the escort renormalizer); comparing the vertex identities across
//!   dimensions pins `f(0) = 0`;
//! * **Cauchy additivity** — `f(u + v) = f(u) + f(v)` on the unit
//!   triangle;
//! * **split-merge (Markov) invariance** — `f(ks) + f((1-k)s) = f(s)`.
//!
//! Each of these forces `f(t) = c t`, which [`linear_fit_conclusion`]
//! quantifies by a least-squares slope through the origin. Positive
//! rescaling cancels in the escort normalizer, so every linear generator
//! yields exactly the Born readout; [`escort_rigidity_test`] checks that
//! collapse end to end.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissibility::CurveSuite;
use crate::error::{Error, Result};
use crate::projective::Ray;
use crate::readout::{born_readout, escort_map, EscortGenerator, Readout};
use crate::report::{RigidityConclusion, Verdict, Witness, WitnessKind};
use crate::rigidity::{readout_rigidity_check, RigidityVerdict};
use crate::simplex::SimplexSelfMap;
use crate::Tolerances;

/// Default PASS tolerance for the linearity fit.
pub const LINEAR_FIT_DEFAULT_TOL: f64 = 1e-6;

/// Default residual grid resolution (nodes per axis).
pub const SCAN_DEFAULT_GRID: usize = 64;

/// Resolution used to re-confirm a passing scan.
pub const SCAN_RECHECK_GRID: usize = 256;

// ── scan modes and reports ──────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanMode {
    #[serde(rename = "NORMALIZATION")]
    Normalization,
    #[serde(rename = "CAUCHY")]
    Cauchy,
    #[serde(rename = "MARKOV")]
    Markov,
    #[serde(rename = "LINEAR_FIT")]
    LinearFit,
}

impl ScanMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normalization" => Ok(Self::Normalization),
            "cauchy" => Ok(Self::Cauchy),
            "markov" => Ok(Self::Markov),
            "linear-fit" | "linear_fit" | "linearfit" => Ok(Self::LinearFit),
            other => Err(Error::SpecParse {
                spec: other.to_string(),
                reason: "expected normalization | cauchy | markov | linear-fit".into(),
            }),
        }
    }

    fn witness_kind(self) -> WitnessKind {
        match self {
            Self::Normalization => WitnessKind::Normalization,
            Self::Cauchy => WitnessKind::Cauchy,
            Self::Markov => WitnessKind::Markov,
            Self::LinearFit => WitnessKind::LinearFit,
        }
    }
}

impl std::fmt::Display for ScanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Normalization => "normalization",
            Self::Cauchy => "cauchy",
            Self::Markov => "markov",
            Self::LinearFit => "linear-fit",
        })
    }
}

/// Per-dimension slice of a normalization scan.
#[derive(Debug, Clone, Serialize)]
pub struct DimScan {
    pub dim: usize,
    pub max_abs_residual: f64,
    pub signed_residual_at_argmax: f64,
    pub argmax_point: Vec<f64>,
    /// `sum_i f(u_i)` evaluated at a vertex, i.e. `f(1) + (d-1) f(0)`.
    pub vertex_sum: f64,
}

/// Result of one grid scan of a generator.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorScanReport {
    pub generator: String,
    pub mode: ScanMode,
    pub verdict: Verdict,
    pub max_abs_residual: f64,
    pub signed_residual_at_argmax: f64,
    /// Inputs at which the largest residual occurred.
    pub argmax: Value,
    /// Least-squares slope through the origin (linear-fit mode only).
    pub fitted_c: Option<f64>,
    pub grid: Value,
    /// Populated by normalization scans.
    pub per_dim: Vec<DimScan>,
    /// `f(0)` recovered by differencing vertex identities across dimensions.
    pub derived_f0: Option<f64>,
    /// `f(1)` implied by the vertex identity of the smallest dimension.
    pub derived_f1: Option<f64>,
    pub tol: f64,
}

impl GeneratorScanReport {
    /// A replayable witness for a failing scan, located at the argmax.
    pub fn witness(&self) -> Option<Witness> {
        if self.verdict.passed() {
            return None;
        }
        Some(Witness::new(
            self.mode.witness_kind(),
            self.argmax.clone(),
            self.max_abs_residual,
            self.tol,
            format!(
                "generator '{}' fails the {} scan with signed residual {} at the recorded inputs",
                self.generator, self.mode, self.signed_residual_at_argmax
            ),
        ))
    }
}

// ── residual primitives ─────────────────────────────────────────────────

/// Additivity defect `f(u + v) - f(u) - f(v)` on the unit triangle.
pub fn cauchy_additivity_residual(f: &EscortGenerator, u: f64, v: f64) -> Result<f64> {
    if !(u >= 0.0) || !(v >= 0.0) || u + v > 1.0 + 1e-12 {
        return Err(Error::OutOfDomain {
            name: "(u, v)",
            value: u + v,
            bounds: "u, v >= 0 and u + v <= 1",
        });
    }
    Ok(f.eval(u + v) - f.eval(u) - f.eval(v))
}

/// Split-merge defect `f(ks) + f((1-k)s) - f(s)`.
pub fn markov_invariance_residual(f: &EscortGenerator, k: f64, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::OutOfDomain {
            name: "k",
            value: k,
            bounds: "[0, 1]",
        });
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "s",
            value: s,
            bounds: "(0, 1]",
        });
    }
    Ok(f.eval(k * s) + f.eval((1.0 - k) * s) - f.eval(s))
}

/// Least-squares slope of `f` through the origin on a uniform grid of
/// `grid` nodes covering `[0, 1]`, plus the worst deviation from that
/// line. PASS means `max_dev <= tol` for the caller's tolerance.
pub fn linear_fit_conclusion(f: &EscortGenerator, grid: usize) -> (f64, f64) {
    assert!(grid >= 8, "need at least 8 fit nodes");
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    let nodes: Vec<(f64, f64)> = (0..grid)
        .map(|k| {
            let t = k as f64 / (grid - 1) as f64;
            (t, f.eval(t))
        })
        .collect();
    for &(t, ft) in &nodes {
        num += t * ft;
        den += t * t;
    }
    let c = num / den;
    let max_dev = nodes
        .iter()
        .map(|&(t, ft)| (ft - c * t).abs())
        .fold(0.0, f64::max);
    (c, max_dev)
}

// ── grid scans ──────────────────────────────────────────────────────────

fn for_each_composition<F: FnMut(&[usize])>(slots: usize, total: usize, visit: &mut F) {
    fn rec<F: FnMut(&[usize])>(slots: usize, left: usize, acc: &mut Vec<usize>, visit: &mut F) {
        if slots == 1 {
            acc.push(left);
            visit(acc);
            acc.pop();
            return;
        }
        for k in 0..=left {
            acc.push(k);
            rec(slots - 1, left - k, acc, visit);
            acc.pop();
        }
    }
    let mut acc = Vec::with_capacity(slots);
    rec(slots, total, &mut acc, visit);
}

/// Scans `sum_i f(u_i) - 1` over the uniform lattice `(k_1/g, ..., k_d/g)`
/// of each listed dimension, with the barycenter appended explicitly
/// (vertices are lattice points already). Also derives `f(0)` by
/// differencing vertex sums between the first two dimensions and `f(1)`
/// from the smallest dimension's vertex identity.
pub fn normalization_scan(
    f: &EscortGenerator,
    dims: &[usize],
    grid: usize,
    tol: f64,
) -> Result<GeneratorScanReport> {
    if dims.is_empty() {
        return Err(Error::OutOfDomain {
            name: "dims",
            value: 0.0,
            bounds: "at least one dimension",
        });
    }
    for &d in dims {
        if d < 3 {
            return Err(Error::OutOfDomain {
                name: "dim",
                value: d as f64,
                bounds: "[3, inf)",
            });
        }
    }
    assert!(grid >= 2, "need at least 2 grid cells per axis");

    let residual_of = |coords: &[f64]| -> f64 {
        coords.iter().map(|&u| f.eval(u)).sum::<f64>() - 1.0
    };

    let mut per_dim = Vec::with_capacity(dims.len());
    for &d in dims {
        let mut max_abs = -1.0f64;
        let mut signed = 0.0f64;
        let mut argmax_point = vec![0.0; d];
        let mut consider = |coords: &[f64]| {
            let r = residual_of(coords);
            if r.abs() > max_abs {
                max_abs = r.abs();
                signed = r;
                argmax_point = coords.to_vec();
            }
        };
        for_each_composition(d, grid, &mut |parts| {
            let coords: Vec<f64> = parts.iter().map(|&k| k as f64 / grid as f64).collect();
            consider(&coords);
        });
        consider(&vec![1.0 / d as f64; d]);
        let vertex_sum = {
            let mut v = vec![0.0; d];
            v[0] = 1.0;
            residual_of(&v) + 1.0
        };
        per_dim.push(DimScan {
            dim: d,
            max_abs_residual: max_abs,
            signed_residual_at_argmax: signed,
            argmax_point,
            vertex_sum,
        });
    }

    let worst = per_dim
        .iter()
        .max_by(|a, b| a.max_abs_residual.total_cmp(&b.max_abs_residual))
        .expect("dims nonempty");
    let (derived_f0, derived_f1) = if per_dim.len() >= 2 && per_dim[1].dim != per_dim[0].dim {
        let (a, b) = (&per_dim[0], &per_dim[1]);
        let f0 = (b.vertex_sum - a.vertex_sum) / (b.dim as f64 - a.dim as f64);
        (Some(f0), Some(1.0 - (a.dim as f64 - 1.0) * f0))
    } else {
        (None, None)
    };

    Ok(GeneratorScanReport {
        generator: f.name().to_string(),
        mode: ScanMode::Normalization,
        verdict: Verdict::from_bool(worst.max_abs_residual <= tol),
        max_abs_residual: worst.max_abs_residual,
        signed_residual_at_argmax: worst.signed_residual_at_argmax,
        argmax: json!({"dim": worst.dim, "point": worst.argmax_point}),
        fitted_c: None,
        grid: json!({"nodes_per_axis": grid, "dims": dims}),
        per_dim,
        derived_f0,
        derived_f1,
        tol,
    })
}

/// Scans the additivity defect over the dyadic triangle
/// `{(i/g, j/g) : i + j <= g}`.
pub fn cauchy_scan(f: &EscortGenerator, grid: usize, tol: f64) -> GeneratorScanReport {
    assert!(grid >= 2, "need at least 2 grid cells per axis");
    let mut max_abs = -1.0f64;
    let mut signed = 0.0f64;
    let mut argmax = (0.0f64, 0.0f64);
    for i in 0..=grid {
        for j in 0..=(grid - i) {
            let (u, v) = (i as f64 / grid as f64, j as f64 / grid as f64);
            let r = f.eval(u + v) - f.eval(u) - f.eval(v);
            if r.abs() > max_abs {
                max_abs = r.abs();
                signed = r;
                argmax = (u, v);
            }
        }
    }
    GeneratorScanReport {
        generator: f.name().to_string(),
        mode: ScanMode::Cauchy,
        verdict: Verdict::from_bool(max_abs <= tol),
        max_abs_residual: max_abs,
        signed_residual_at_argmax: signed,
        argmax: json!({"u": argmax.0, "v": argmax.1}),
        fitted_c: None,
        grid: json!({"nodes_per_axis": grid}),
        per_dim: Vec::new(),
        derived_f0: None,
        derived_f1: None,
        tol,
    }
}

/// Scans the split-merge defect over `k = i/g (i = 0..=g)` and
/// `s = j/g (j = 1..=g)`.
pub fn markov_scan(f: &EscortGenerator, grid: usize, tol: f64) -> GeneratorScanReport {
    assert!(grid >= 2, "need at least 2 grid cells per axis");
    let mut max_abs = -1.0f64;
    let mut signed = 0.0f64;
    let mut argmax = (0.0f64, 0.0f64);
    for i in 0..=grid {
        for j in 1..=grid {
            let (k, s) = (i as f64 / grid as f64, j as f64 / grid as f64);
            let r = f.eval(k * s) + f.eval((1.0 - k) * s) - f.eval(s);
            if r.abs() > max_abs {
                max_abs = r.abs();
                signed = r;
                argmax = (k, s);
            }
        }
    }
    GeneratorScanReport {
        generator: f.name().to_string(),
        mode: ScanMode::Markov,
        verdict: Verdict::from_bool(max_abs <= tol),
        max_abs_residual: max_abs,
        signed_residual_at_argmax: signed,
        argmax: json!({"k": argmax.0, "s": argmax.1}),
        fitted_c: None,
        grid: json!({"nodes_per_axis": grid}),
        per_dim: Vec::new(),
        derived_f0: None,
        derived_f1: None,
        tol,
    }
}

/// Wraps [`linear_fit_conclusion`] into a scan report.
pub fn linear_fit_scan(f: &EscortGenerator, grid: usize, tol: f64) -> GeneratorScanReport {
    let (c, max_dev) = linear_fit_conclusion(f, grid);
    let mut argmax_t = 0.0f64;
    let mut signed = 0.0f64;
    for k in 0..grid {
        let t = k as f64 / (grid - 1) as f64;
        let dev = f.eval(t) - c * t;
        if dev.abs() > signed.abs() {
            argmax_t = t;
            signed = dev;
        }
    }
    GeneratorScanReport {
        generator: f.name().to_string(),
        mode: ScanMode::LinearFit,
        verdict: Verdict::from_bool(max_dev <= tol),
        max_abs_residual: max_dev,
        signed_residual_at_argmax: signed,
        argmax: json!({"t": argmax_t}),
        fitted_c: Some(c),
        grid: json!({"nodes": grid}),
        per_dim: Vec::new(),
        derived_f0: None,
        derived_f1: None,
        tol,
    }
}

/// Dispatches one scan mode. `dims` only applies to normalization.
pub fn run_scan(
    f: &EscortGenerator,
    mode: ScanMode,
    dims: &[usize],
    grid: usize,
    tol: f64,
) -> Result<GeneratorScanReport> {
    match mode {
        ScanMode::Normalization => normalization_scan(f, dims, grid, tol),
        ScanMode::Cauchy => Ok(cauchy_scan(f, grid, tol)),
        ScanMode::Markov => Ok(markov_scan(f, grid, tol)),
        ScanMode::LinearFit => Ok(linear_fit_scan(f, grid, tol)),
    }
}

// ── escort rigidity ─────────────────────────────────────────────────────

/// The escort reweighting as a simplex self-map (safe on the closed
/// simplex: the largest coordinate is at least `1/d`, so the normalizer of
/// a valid generator is positive).
pub fn escort_self_map(gen: EscortGenerator, dim: usize) -> SimplexSelfMap {
    let name = format!("escort:{}", gen.name());
    SimplexSelfMap::from_fn(name, dim, move |u| {
        escort_map(&gen, u).expect("valid generators have positive normalizers on the simplex")
    })
}

/// Runs the full readout rigidity check on the escort readout of `gen`,
/// then corroborates a BORN_CONFIRMED verdict with the linearity fit and a
/// direct escort-vs-Born comparison on the samples (rescaling cancels in
/// the normalizer, so the readout, not `c`, is what must match). A
/// confirmed readout with a failing corroboration is downgraded to
/// INCONCLUSIVE.
pub fn escort_rigidity_test(
    gen: &EscortGenerator,
    suite: &CurveSuite,
    samples: &[Ray],
    tol: Tolerances,
    h1_tol: f64,
) -> RigidityVerdict {
    assert!(!samples.is_empty(), "need at least one sample ray");
    let d = samples[0].dim();
    let readout = Readout::escort(d, gen.clone());
    let mut verdict = readout_rigidity_check(&readout, suite, samples, tol, h1_tol);

    let (c, max_dev) = linear_fit_conclusion(gen, SCAN_DEFAULT_GRID);
    let born_gap = samples
        .iter()
        .map(|psi| readout.eval(psi).linf_distance(&born_readout(psi)))
        .fold(0.0, f64::max);
    verdict.diagnostics["linear_fit"] = json!({"c": c, "max_dev": max_dev});
    verdict.diagnostics["escort_born_gap"] = json!(born_gap);

    if verdict.conclusion == RigidityConclusion::BornConfirmed
        && (max_dev > LINEAR_FIT_DEFAULT_TOL || born_gap > tol.eq)
    {
        verdict.conclusion = RigidityConclusion::Inconclusive;
        verdict.diagnostics["note"] = json!(
            "admissibility and chain passed but the generator is not linear or the readout drifts from Born"
        );
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::haar_samples;
    use crate::sampling::RngSeed;
    use crate::simplex::SimplexPoint;
    use std::f64::consts::SQRT_2;

    fn power(q: f64) -> EscortGenerator {
        EscortGenerator::power(q).unwrap()
    }

    #[test]
    fn normalization_identity_passes_with_zero_vertex_offsets() {
        let report =
            normalization_scan(&EscortGenerator::identity(), &[3, 4, 5], 16, 1e-9).unwrap();
        assert!(report.verdict.passed());
        assert!(report.max_abs_residual < 1e-12, "{}", report.max_abs_residual);
        assert!(report.derived_f0.unwrap().abs() < 1e-12);
        assert!((report.derived_f1.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_square_fails_at_the_barycenter() {
        let report = normalization_scan(&power(2.0), &[3], 64, 1e-9).unwrap();
        assert!(!report.verdict.passed());
        let d3 = &report.per_dim[0];
        assert!(
            (d3.signed_residual_at_argmax + 2.0 / 3.0).abs() < 1e-12,
            "signed residual {}",
            d3.signed_residual_at_argmax
        );
        assert!(d3
            .argmax_point
            .iter()
            .all(|&u| (u - 1.0 / 3.0).abs() < 1e-15));
        // vertex identity still holds exactly for t^2: f(1) + 2 f(0) = 1
        assert_eq!(d3.vertex_sum, 1.0);
        let w = report.witness().unwrap();
        assert_eq!(w.kind, WitnessKind::Normalization);
    }

    #[test]
    fn normalization_rejects_low_dimensions() {
        assert!(normalization_scan(&power(1.0), &[2], 16, 1e-9).is_err());
    }

    #[test]
    fn cauchy_residual_reference_values() {
        assert_eq!(
            cauchy_additivity_residual(&EscortGenerator::identity(), 0.3, 0.7).unwrap(),
            0.0
        );
        let r = cauchy_additivity_residual(&power(2.0), 0.25, 0.25).unwrap();
        assert!((r - 0.125).abs() < 1e-15, "got {r}");
        assert!(cauchy_additivity_residual(&power(2.0), 0.6, 0.6).is_err());
        assert!(cauchy_additivity_residual(&power(2.0), -0.1, 0.2).is_err());
    }

    #[test]
    fn cauchy_scan_exact_for_linear_generators() {
        let report = cauchy_scan(&EscortGenerator::linear(3.0).unwrap(), 64, 1e-9);
        assert!(report.verdict.passed());
        assert_eq!(report.max_abs_residual, 0.0);
        // t^2 peaks at u = v = 1/2 with defect 2uv = 1/2
        let report = cauchy_scan(&power(2.0), 64, 1e-9);
        assert!(!report.verdict.passed());
        assert!((report.max_abs_residual - 0.5).abs() < 1e-15);
        assert_eq!(report.argmax["u"], 0.5);
        assert_eq!(report.argmax["v"], 0.5);
    }

    #[test]
    fn markov_residual_reference_values() {
        let r = markov_invariance_residual(&power(2.0), 0.5, 1.0).unwrap();
        assert_eq!(r, -0.5);
        let r = markov_invariance_residual(&power(0.5), 0.5, 1.0).unwrap();
        assert!((r - (SQRT_2 - 1.0)).abs() < 1e-15, "got {r}");
        assert!(markov_invariance_residual(&power(2.0), 1.5, 1.0).is_err());
        assert!(markov_invariance_residual(&power(2.0), 0.5, 0.0).is_err());
    }

    #[test]
    fn markov_scan_exact_zero_for_linear_generators() {
        for c in [1.0, 3.0] {
            let report = markov_scan(&EscortGenerator::linear(c).unwrap(), 64, 1e-15);
            assert!(report.verdict.passed(), "c = {c}");
            assert_eq!(report.max_abs_residual, 0.0, "c = {c}");
        }
        let report = markov_scan(&power(2.0), 64, 1e-9);
        assert!(!report.verdict.passed());
        assert_eq!(report.signed_residual_at_argmax, -0.5);
        assert_eq!(report.argmax["k"], 0.5);
        assert_eq!(report.argmax["s"], 1.0);
    }

    #[test]
    fn linear_fit_reference_values() {
        let (c, dev) = linear_fit_conclusion(&EscortGenerator::identity(), 64);
        assert_eq!(c, 1.0);
        assert_eq!(dev, 0.0);
        let (c, dev) = linear_fit_conclusion(&EscortGenerator::linear(3.0).unwrap(), 64);
        assert!((c - 3.0).abs() < 1e-13, "c = {c}");
        assert!(dev < 1e-13, "dev = {dev}");
        let (c, dev) = linear_fit_conclusion(&power(2.0), 64);
        assert!(c > 0.70 && c < 0.80, "c = {c}");
        assert!(dev > 0.1, "dev = {dev}");
        let report = linear_fit_scan(&power(2.0), 64, LINEAR_FIT_DEFAULT_TOL);
        assert!(!report.verdict.passed());
        assert_eq!(report.fitted_c, Some(c));
        assert_eq!(report.witness().unwrap().kind, WitnessKind::LinearFit);
    }

    #[test]
    fn scan_dispatch_covers_all_modes() {
        let f = EscortGenerator::identity();
        for (mode, expect_pass) in [
            (ScanMode::Normalization, true),
            (ScanMode::Cauchy, true),
            (ScanMode::Markov, true),
            (ScanMode::LinearFit, true),
        ] {
            let report = run_scan(&f, mode, &[3, 4], 16, 1e-9).unwrap();
            assert_eq!(report.verdict.passed(), expect_pass, "mode {mode}");
            assert_eq!(report.mode, mode);
        }
        assert_eq!(ScanMode::parse("linear-fit").unwrap(), ScanMode::LinearFit);
        assert!(ScanMode::parse("nonsense").is_err());
    }

    #[test]
    fn escort_self_map_fixes_vertices() {
        let map = escort_self_map(power(2.0), 3);
        for i in 0..3 {
            let v = SimplexPoint::vertex(3, i);
            assert_eq!(map.eval(&v).coords(), v.coords());
        }
    }

    #[test]
    fn escort_rigidity_collapses_linear_generators_to_born() {
        let suite = CurveSuite::default_suite(2, 6, RngSeed(71), 48).unwrap();
        let samples = haar_samples(2, 24, RngSeed(71)).unwrap();
        for gen in [EscortGenerator::identity(), EscortGenerator::linear(2.0).unwrap()] {
            let verdict =
                escort_rigidity_test(&gen, &suite, &samples, Tolerances::default(), 1e-3);
            assert_eq!(
                verdict.conclusion,
                RigidityConclusion::BornConfirmed,
                "generator {}",
                gen.name()
            );
            // rescaling cancels in the normalizer up to one rounding of the
            // coordinate sum
            let gap = verdict.diagnostics["escort_born_gap"].as_f64().unwrap();
            assert!(gap < 1e-15, "gap {gap}");
            assert_eq!(verdict.diagnostics["linear_fit"]["max_dev"], 0.0);
        }
    }

    #[test]
    fn escort_rigidity_rejects_the_square_generator() {
        let suite = CurveSuite::default_suite(2, 6, RngSeed(72), 64).unwrap();
        let samples = haar_samples(2, 24, RngSeed(72)).unwrap();
        let verdict =
            escort_rigidity_test(&power(2.0), &suite, &samples, Tolerances::default(), 1e-3);
        assert_eq!(verdict.conclusion, RigidityConclusion::PremiseViolated);
        assert_eq!(verdict.witness.unwrap().kind, WitnessKind::H2);
        let max_dev = verdict.diagnostics["linear_fit"]["max_dev"].as_f64().unwrap();
        assert!(max_dev > 0.1, "max_dev {max_dev}");
    }
}
