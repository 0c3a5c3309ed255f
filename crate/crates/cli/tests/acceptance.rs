//! Acceptance suite: one test per release criterion, each printing a
//! single `acceptance NN <title>: PASS/FAIL (<measured value> vs <pinned
//! tolerance>)` line. Run with `--nocapture` to see the lines for passing
//! tests as well.

use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::Value;

use readout_rigidity::admissibility::{
    check_h2, check_h3, classical_fisher_along, haar_samples, CurveSuite, H1_DEFAULT_TOL,
};
use readout_rigidity::escort::{
    escort_self_map, markov_invariance_residual, markov_scan, normalization_scan,
};
use readout_rigidity::projective::{haar_random_ray, quantum_fisher, PureCurve, Ray};
use readout_rigidity::readout::{sqrt_readout, EscortGenerator, Permutation, Readout};
use readout_rigidity::report::{RigidityConclusion, WitnessKind};
use readout_rigidity::rigidity::{
    lipschitz_witness_search, readout_rigidity_check, simplex_rigidity_check,
    vertex_dominance_residuals,
};
use readout_rigidity::sampling::{sample_orthant_interior, sample_simplex_interior, sample_tangent};
use readout_rigidity::simplex::{
    fisher_norm_sq, sqrt_chart, OrthantSelfMap, SimplexPoint, SimplexSelfMap,
};
use readout_rigidity::{RngSeed, Tolerances};

const FD_STEP: f64 = 1e-5;

/// Prints the one-line outcome for a criterion, then enforces it.
fn conclude(id: u32, title: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {id:02} {title}: {status} ({detail})");
    assert!(pass, "acceptance {id:02} {title}: FAIL ({detail})");
}

/// Geodesic between Haar-modulus endpoints sharing componentwise phases;
/// on such curves the Born square root moves at full Fubini-Study speed.
fn aligned_geodesic(seed: u64, k: u64, d: usize) -> PureCurve {
    let psi = haar_random_ray(RngSeed(seed), 2 * k, d).unwrap();
    let partner = haar_random_ray(RngSeed(seed), 2 * k + 1, d).unwrap().moduli();
    let phi = Ray::from_amplitudes(
        psi.amplitudes()
            .iter()
            .zip(&partner)
            .map(|(a, &m)| {
                let r = a.norm();
                if r > 1e-12 {
                    a / r * m
                } else {
                    Complex64::new(m, 0.0)
                }
            })
            .collect(),
    )
    .unwrap();
    PureCurve::fs_geodesic_between("aligned", &psi, &phi).unwrap()
}

/// The first-quadrant equator arc (cos s, sin s, 0, ...) in dimension `d`.
fn equator_quarter(d: usize) -> PureCurve {
    PureCurve::from_fn("equator-quarter", (0.0, std::f64::consts::FRAC_PI_2), move |s| {
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[0] = Complex64::new(s.cos(), 0.0);
        amps[1] = Complex64::new(s.sin(), 0.0);
        Ray::from_amplitudes(amps).unwrap()
    })
}

#[test]
fn criterion_01_born_saturation() {
    let start = Instant::now();
    let nodes = 33;
    let mut worst: f64 = 0.0;
    for d in 2..=5 {
        let born = Readout::born(d);
        for k in 0..100u64 {
            let curve = aligned_geodesic(7100 + d as u64, k, d);
            for j in 1..nodes {
                let s = j as f64 / nodes as f64;
                let f_q = quantum_fisher(&curve, s, FD_STEP).unwrap();
                let f_cl = classical_fisher_along(&born, &curve, s, FD_STEP).unwrap();
                worst = worst.max((f_cl / f_q.max(1e-10) - 1.0).abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        1,
        "born-saturation",
        worst < 1e-4 && elapsed < 30.0,
        format!("max |F_cl/F_Q - 1| = {worst:.3e} vs 1e-4; {elapsed:.1} s vs 30 s"),
    );
}

#[test]
fn criterion_02_uniform_readout() {
    let mut pass = true;
    let mut detail = String::new();
    for d in 2..=4 {
        let uniform = Readout::uniform(d);
        let suite = CurveSuite::default_suite(d, 12, RngSeed(4), 48).unwrap();
        let h2 = check_h2(&uniform, &suite, 1e-7);
        let h3 = check_h3(&uniform, 1e-9);
        let floor = 1.0 - 1.0 / d as f64;
        pass &= h2.verdict.passed() && h2.max_ratio < 1e-10;
        pass &= !h3.verdict.passed() && h3.residuals.iter().all(|&r| r >= floor - 1e-12);
        if d == 2 {
            pass &= h3.worst_residual == 0.5;
            detail = format!(
                "h2 max ratio {} vs 1e-10; d=2 h3 residual {} (exactly 0.5)",
                h2.max_ratio, h3.worst_residual
            );
        }
    }
    conclude(2, "uniform-readout", pass, detail);
}

#[test]
fn criterion_03_permuted_born() {
    let sigma = Permutation::from_one_based(&[2, 1, 3]).unwrap();
    let readout = Readout::permuted_born(3, sigma).unwrap();
    let suite = CurveSuite::default_suite(3, 24, RngSeed(42), 48).unwrap();
    let h2 = check_h2(&readout, &suite, 1e-7);
    let h3 = check_h3(&readout, 1e-9);
    let witness_kind = h3.witness.as_ref().map(|w| w.kind);
    let pass = h2.verdict.passed()
        && (h2.max_ratio - 1.0).abs() < 1e-4
        && !h3.verdict.passed()
        && h3.worst_residual == 1.0
        && witness_kind == Some(WitnessKind::H3);
    conclude(
        3,
        "permuted-born",
        pass,
        format!(
            "h2 max ratio {} vs 1 +/- 1e-4; h3 residual {} (exactly 1)",
            h2.max_ratio, h3.worst_residual
        ),
    );
}

#[test]
fn criterion_04_escort_equator() {
    let escort = Readout::escort(2, EscortGenerator::power(2.0).unwrap());
    let equator = equator_quarter(2);
    let f_cl = classical_fisher_along(&escort, &equator, FRAC_PI_4, FD_STEP).unwrap();

    let suite = CurveSuite::new(vec![equator_quarter(2)], 64, "equator");
    let h2 = check_h2(&escort, &suite, 1e-7);
    let s_star = h2
        .witness
        .as_ref()
        .map(|w| w.location["s"].as_f64().unwrap())
        .unwrap_or(f64::NAN);
    let pass = (f_cl - 16.0).abs() < 1e-3
        && !h2.verdict.passed()
        && (h2.max_ratio - 4.0).abs() < 1e-3
        && (s_star - FRAC_PI_4).abs() < 0.05;
    conclude(
        4,
        "escort-equator",
        pass,
        format!(
            "F_cl(pi/4) = {f_cl:.6} vs 16 +/- 1e-3; max ratio {:.6} vs 4 +/- 1e-3; s* = {s_star:.4} vs pi/4 +/- 0.05",
            h2.max_ratio
        ),
    );
}

#[test]
fn criterion_05_born_chain() {
    let start = Instant::now();
    let d = 4;
    let born = Readout::born(d);
    let samples = haar_samples(d, 10_000, RngSeed(13)).unwrap();

    let mut max_contraction = f64::NEG_INFINITY;
    let mut max_deviation = f64::NEG_INFINITY;
    for psi in &samples {
        let r = sqrt_readout(&born, psi);
        for (ri, mi) in r.coords().iter().zip(psi.moduli()) {
            max_contraction =
                max_contraction.max(ri.clamp(-1.0, 1.0).acos() - mi.clamp(0.0, 1.0).acos());
            max_deviation = max_deviation.max((ri - mi).abs());
        }
    }
    let suite = CurveSuite::default_suite(d, 12, RngSeed(13), 48).unwrap();
    let verdict =
        readout_rigidity_check(&born, &suite, &samples, Tolerances::default(), H1_DEFAULT_TOL);
    let elapsed = start.elapsed().as_secs_f64();
    let pass = max_contraction <= 1e-9
        && max_deviation <= 1e-9
        && verdict.conclusion == RigidityConclusion::BornConfirmed
        && elapsed < 10.0;
    conclude(
        5,
        "born-chain",
        pass,
        format!(
            "contraction residual {max_contraction:.2e} vs 1e-9; deviation {max_deviation:.2e} vs 1e-9; {}; {elapsed:.1} s vs 10 s",
            verdict.conclusion
        ),
    );
}

#[test]
fn criterion_06_vertex_forcing() {
    let mut pass = true;
    let mut details = Vec::new();
    for d in 2..=3 {
        let conj = OrthantSelfMap::conjugated(escort_self_map(
            EscortGenerator::power(2.0).unwrap(),
            d,
        ));
        let mut most_negative = f64::INFINITY;
        for k in 0..200 {
            let x = sample_orthant_interior(RngSeed(6), k, d);
            let res = vertex_dominance_residuals(&conj, &x).unwrap();
            most_negative = res.iter().fold(most_negative, |acc, &r| acc.min(r));
        }
        let witness = lipschitz_witness_search(&conj, RngSeed(6), 200, 1e-9).unwrap();
        let gap = witness.as_ref().map(|w| w.excess()).unwrap_or(0.0);
        pass &= most_negative < 0.0 && gap > 1e-3;
        details.push(format!("d={d}: min dominance gain {most_negative:.4}, expansion gap {gap:.4} vs 1e-3"));
    }
    conclude(6, "vertex-forcing", pass, details.join("; "));
}

#[test]
fn criterion_07_map_rigidity() {
    let escort = simplex_rigidity_check(
        &escort_self_map(EscortGenerator::power(2.0).unwrap(), 3),
        RngSeed(2),
        500,
        1e-9,
    );
    let escort_kind = escort.witness.as_ref().map(|w| w.kind);
    let identity = simplex_rigidity_check(&SimplexSelfMap::identity(3), RngSeed(2), 500, 1e-9);
    let pass = escort.conclusion == RigidityConclusion::PremiseViolated
        && matches!(
            escort_kind,
            Some(WitnessKind::Lipschitz) | Some(WitnessKind::VertexDominance)
        )
        && identity.conclusion == RigidityConclusion::IdentityConfirmed
        && identity.max_identity_gap < 1e-12;
    conclude(
        7,
        "map-rigidity",
        pass,
        format!(
            "escort t^2: {} with {:?} witness; identity: {} gap {:.2e} vs 1e-12",
            escort.conclusion, escort_kind, identity.conclusion, identity.max_identity_gap
        ),
    );
}

#[test]
fn criterion_08_normalization_scan() {
    let dims = [3usize, 4, 5];
    let linear = normalization_scan(&EscortGenerator::identity(), &dims, 64, 1e-9).unwrap();
    let square = normalization_scan(&EscortGenerator::power(2.0).unwrap(), &dims, 64, 1e-9).unwrap();
    let d3 = square.per_dim.iter().find(|s| s.dim == 3).unwrap();
    let barycentric = d3
        .argmax_point
        .iter()
        .all(|&c| (c - 1.0 / 3.0).abs() < 1e-12);
    let f0_linear = linear.derived_f0.unwrap_or(f64::NAN);
    let f0_square = square.derived_f0.unwrap_or(f64::NAN);
    let pass = linear.verdict.passed()
        && linear.max_abs_residual < 1e-12
        && !square.verdict.passed()
        && (d3.signed_residual_at_argmax + 2.0 / 3.0).abs() < 1e-12
        && barycentric
        && f0_linear.abs() < 1e-12
        && f0_square.abs() < 1e-12;
    conclude(
        8,
        "normalization-scan",
        pass,
        format!(
            "f=t residual {:.2e} vs 1e-12; f=t^2 d=3 residual {:.12} vs -2/3 +/- 1e-12 at the barycenter; derived f(0) = {f0_linear:.2e}, {f0_square:.2e} vs 0 +/- 1e-12",
            linear.max_abs_residual, d3.signed_residual_at_argmax
        ),
    );
}

#[test]
fn criterion_09_markov_scan() {
    let mut linear_worst: f64 = 0.0;
    for c in [0.7, 1.0, 2.5] {
        let scan = markov_scan(&EscortGenerator::linear(c).unwrap(), 64, 1e-15);
        linear_worst = linear_worst.max(scan.max_abs_residual);
    }
    let square = markov_invariance_residual(&EscortGenerator::power(2.0).unwrap(), 0.5, 1.0).unwrap();
    let root = markov_invariance_residual(&EscortGenerator::power(0.5).unwrap(), 0.5, 1.0).unwrap();
    let pass = linear_worst < 1e-15
        && (square + 0.5).abs() < 1e-12
        && (root - 0.4142136).abs() < 1e-6;
    conclude(
        9,
        "markov-scan",
        pass,
        format!(
            "linear residual {linear_worst:.2e} vs 1e-15; t^2 at (1/2,1) = {square} vs -0.5 +/- 1e-12; sqrt at (1/2,1) = {root:.7} vs 0.4142136 +/- 1e-6"
        ),
    );
}

#[test]
fn criterion_10_conformal_chart() {
    let mut worst: f64 = 0.0;
    for d in 2..=5 {
        for k in 0..1000u64 {
            let u = sample_simplex_interior(RngSeed(800 + d as u64), k, d, 1e-3);
            let v = sample_tangent(RngSeed(900 + d as u64), k, d);
            let h = FD_STEP;
            let plus: Vec<f64> = u.coords().iter().zip(v.components()).map(|(a, b)| a + h * b).collect();
            let minus: Vec<f64> = u.coords().iter().zip(v.components()).map(|(a, b)| a - h * b).collect();
            let p = sqrt_chart(&SimplexPoint::new(plus).unwrap());
            let m = sqrt_chart(&SimplexPoint::new(minus).unwrap());
            let push_sq: f64 = p
                .coords()
                .iter()
                .zip(m.coords())
                .map(|(a, b)| ((a - b) / (2.0 * h)).powi(2))
                .sum();
            let ratio = 4.0 * push_sq / fisher_norm_sq(&u, &v).unwrap();
            worst = worst.max((ratio - 1.0).abs());
        }
    }
    conclude(
        10,
        "conformal-chart",
        worst < 1e-4,
        format!("max |4 |dPhi v|^2 / g - 1| = {worst:.3e} vs 1e-4 at h = 1e-5"),
    );
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_readout-rigidity"))
}

fn stripped_report(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    let mut report: Value = serde_json::from_slice(&out.stdout).unwrap();
    report.as_object_mut().unwrap().remove("metadata");
    serde_json::to_string(&report).unwrap()
}

#[test]
fn criterion_11_determinism() {
    let commands: [&[&str]; 3] = [
        &["check", "--readout", "escort:power:2.0", "--d", "2", "--seed", "7"],
        &["rigidity", "--readout", "born", "--d", "3", "--seed", "9", "--curves", "8", "--samples", "100"],
        &["scan-f", "--f", "power:2.0", "--mode", "normalization", "--dims", "3,4"],
    ];
    let mut pass = true;
    for args in commands {
        pass &= stripped_report(args) == stripped_report(args);
    }

    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        bin()
            .args(["geodesic-dump", "--readout", "born", "--d", "2", "--curves", "2", "--seed", "11"])
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
    }
    for entry in fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        pass &= fs::read(a.join(&name)).unwrap() == fs::read(b.join(&name)).unwrap();
    }
    conclude(
        11,
        "determinism",
        pass,
        "byte-identical reports (metadata stripped) and CSV dumps across reruns".to_string(),
    );
}
