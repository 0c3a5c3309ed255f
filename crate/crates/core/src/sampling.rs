//! Deterministic, splittable random sampling.
//!
//! Every sampler is a pure function of `(seed, stream)`: we build a fresh
//! ChaCha8 generator per call and select an independent stream, so results
//! never depend on call order or thread count. The algorithm identifier
//! recorded in reports is [`RNG_ALGORITHM`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::simplex::{OrthantPoint, SimplexPoint, SimplexTangent};

/// Identifier for the sampling scheme, stored in reports so runs can be
/// reproduced by other implementations.
pub const RNG_ALGORITHM: &str = "chacha8-stream/ziggurat-normal";

/// Seed for the deterministic samplers. Combined with a per-draw stream
/// index it pins every random quantity in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

/// Fresh generator on an independent stream of the given seed.
pub fn stream_rng(seed: RngSeed, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(stream);
    rng
}

/// Standard normal draws from a dedicated stream.
pub fn normal_draws(seed: RngSeed, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = stream_rng(seed, stream);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniformly distributed interior simplex point (normalized exponentials),
/// redrawn until every coordinate is at least `min_coord`.
///
/// The floor keeps finite-difference stencils and `1/u_i` factors well
/// conditioned; pass `0.0` to sample the whole open simplex.
pub fn sample_simplex_interior(seed: RngSeed, stream: u64, d: usize, min_coord: f64) -> SimplexPoint {
    assert!(d >= 2, "need at least two outcomes");
    assert!(min_coord * d as f64 <= 0.5, "min_coord leaves no room to sample");
    let mut rng = stream_rng(seed, stream);
    loop {
        let draws: Vec<f64> = (0..d)
            .map(|_| {
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                -u.ln()
            })
            .collect();
        let total: f64 = draws.iter().sum();
        let coords: Vec<f64> = draws.iter().map(|x| x / total).collect();
        if coords.iter().all(|&c| c >= min_coord) {
            return SimplexPoint::new(coords).expect("normalized exponentials lie on the simplex");
        }
    }
}

/// Unit-norm tangent vector at a simplex point (mean-centered normals).
pub fn sample_tangent(seed: RngSeed, stream: u64, d: usize) -> SimplexTangent {
    assert!(d >= 2, "need at least two outcomes");
    let mut rng = stream_rng(seed, stream);
    loop {
        let mut comps: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mean = comps.iter().sum::<f64>() / d as f64;
        for c in comps.iter_mut() {
            *c -= mean;
        }
        let norm = comps.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for c in comps.iter_mut() {
                *c /= norm;
            }
            return SimplexTangent::new(comps).expect("centered vector sums to zero");
        }
    }
}

/// Round-measure uniform point on the closed positive orthant of the unit
/// sphere (absolute values of normals, normalized). Almost surely interior.
pub fn sample_orthant_interior(seed: RngSeed, stream: u64, d: usize) -> OrthantPoint {
    assert!(d >= 2, "need at least two outcomes");
    let mut rng = stream_rng(seed, stream);
    loop {
        let comps: Vec<f64> = (0..d)
            .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
            .collect();
        let norm = comps.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            let coords: Vec<f64> = comps.iter().map(|c| c / norm).collect();
            return OrthantPoint::new(coords).expect("normalized vector lies on the sphere");
        }
    }
}
