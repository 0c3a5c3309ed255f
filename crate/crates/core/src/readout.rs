//! Catalog of readout maps from rays to outcome distributions.
//!
//! A [`Readout`] assigns each ray a probability vector over the `d` fixed
//! basis outcomes. The catalog covers the Born readout `|<e_i|psi>|^2`, the
//! uniform readout, basis-permuted Born, escort deformations
//! `f(p_i) / sum_j f(p_j)` driven by an [`EscortGenerator`], and a
//! vertex-fixing interior bump of Born. Parameter records serialize into
//! reports so any witness can be replayed, and the CLI spec strings
//! (`born`, `permuted:2,1,3`, `escort:power:2.0`, ...) parse into
//! [`ReadoutSpec`] / [`GeneratorSpec`].

use std::path::Path;

use serde_json::json;

use crate::error::{Error, Result};
use crate::projective::Ray;
use crate::simplex::{sqrt_chart, OrthantPoint, SimplexPoint};

// ── permutations ────────────────────────────────────────────────────────

/// Bijection of outcome indices, stored 0-based: output coordinate `i`
/// reads input coordinate `forward[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
}

impl Permutation {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let d = forward.len();
        if d < 2 {
            return Err(Error::InvalidPermutation(format!(
                "need at least 2 entries, got {d}"
            )));
        }
        let mut seen = vec![false; d];
        for &j in &forward {
            if j >= d || seen[j] {
                return Err(Error::InvalidPermutation(format!(
                    "entries must visit each index in 0..{d} exactly once"
                )));
            }
            seen[j] = true;
        }
        Ok(Self { forward })
    }

    /// Parses the external 1-based convention (e.g. `[2, 1, 3]` swaps the
    /// first two outcomes).
    pub fn from_one_based(entries: &[usize]) -> Result<Self> {
        if entries.iter().any(|&j| j == 0) {
            return Err(Error::InvalidPermutation(
                "1-based entries cannot contain 0".into(),
            ));
        }
        Self::new(entries.iter().map(|&j| j - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.forward.len()];
        for (i, &j) in self.forward.iter().enumerate() {
            inv[j] = i;
        }
        Self { forward: inv }
    }

    /// External 1-based rendering, matching the spec-string format.
    pub fn to_one_based_string(&self) -> String {
        self.forward
            .iter()
            .map(|&j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

// ── escort generators ───────────────────────────────────────────────────

/// Number of grid nodes used to validate generator monotonicity.
const GENERATOR_CHECK_NODES: usize = 33;

/// Scalar generator `f: [0, 1] -> [0, inf)` for escort readouts. Valid
/// generators vanish at zero and increase strictly; both are enforced on a
/// sample grid at construction.
#[derive(Clone)]
pub struct EscortGenerator {
    name: String,
    f: std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl EscortGenerator {
    pub fn from_fn(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let gen = Self {
            name: name.into(),
            f: std::sync::Arc::new(f),
        };
        gen.validate()?;
        Ok(gen)
    }

    /// Power generator `f(t) = t^q`, `q > 0`.
    pub fn power(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidGenerator {
                name: format!("power:{q}"),
                reason: "exponent must be positive and finite".into(),
            });
        }
        Self::from_fn(format!("power:{q}"), move |t| t.powf(q))
    }

    /// Linear generator `f(t) = c t`, `c > 0`.
    pub fn linear(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidGenerator {
                name: format!("linear:{c}"),
                reason: "slope must be positive and finite".into(),
            });
        }
        Self::from_fn(format!("linear:{c}"), move |t| c * t)
    }

    /// The identity generator `f(t) = t`.
    pub fn identity() -> Self {
        Self::from_fn("identity", |t| t).expect("identity generator is valid")
    }

    /// Piecewise-linear generator through `(t, f(t))` nodes. The nodes must
    /// cover `[0, 1]` and increase strictly in both columns, with `f(0) = 0`.
    pub fn from_table(name: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidGenerator {
            name: name.clone(),
            reason,
        };
        if points.len() < 2 {
            return Err(invalid(format!("need at least 2 rows, got {}", points.len())));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(invalid(format!(
                    "abscissas must increase strictly: {} then {}",
                    w[0].0, w[1].0
                )));
            }
            if !(w[1].1 > w[0].1) {
                return Err(invalid(format!(
                    "values must increase strictly: {} then {}",
                    w[0].1, w[1].1
                )));
            }
        }
        if points[0].0.abs() > 1e-9 || (points[points.len() - 1].0 - 1.0).abs() > 1e-9 {
            return Err(invalid("abscissas must cover [0, 1]".into()));
        }
        if points.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(invalid("non-finite table entry".into()));
        }
        let mut points = points;
        points[0].0 = 0.0;
        let last = points.len() - 1;
        points[last].0 = 1.0;
        Self::from_fn(name, move |t| {
            let t = t.clamp(0.0, 1.0);
            let hi = points.partition_point(|&(a, _)| a < t).min(points.len() - 1).max(1);
            let (t0, v0) = points[hi - 1];
            let (t1, v1) = points[hi];
            v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        })
    }

    /// Loads a two-column CSV `t,f(t)` (optional header row) as a tabulated
    /// generator.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let name = format!("table:{}", path.display());
        let text = std::fs::read_to_string(path)?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = (cols.next(), cols.next());
            match (a.and_then(|s| s.parse::<f64>().ok()), b.and_then(|s| s.parse::<f64>().ok())) {
                (Some(t), Some(v)) => points.push((t, v)),
                _ if lineno == 0 => continue, // header row
                _ => {
                    return Err(Error::InvalidGenerator {
                        name,
                        reason: format!("cannot parse line {}: '{line}'", lineno + 1),
                    })
                }
            }
        }
        Self::from_table(name, points)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluates the generator, clamping the argument into `[0, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t.clamp(0.0, 1.0))
    }

    fn validate(&self) -> Result<()> {
        let f0 = (self.f)(0.0);
        if !(f0.abs() <= 1e-12) {
            return Err(Error::InvalidGenerator {
                name: self.name.clone(),
                reason: format!("f(0) = {f0}, must vanish"),
            });
        }
        let mut prev = f0;
        for k in 1..GENERATOR_CHECK_NODES {
            let t = k as f64 / (GENERATOR_CHECK_NODES - 1) as f64;
            let v = (self.f)(t);
            if !v.is_finite() {
                return Err(Error::InvalidGenerator {
                    name: self.name.clone(),
                    reason: format!("f({t}) is not finite"),
                });
            }
            if v <= prev {
                return Err(Error::InvalidGenerator {
                    name: self.name.clone(),
                    reason: format!("not strictly increasing at t = {t}"),
                });
            }
            prev = v;
        }
        Ok(())
    }
}

impl std::fmt::Debug for EscortGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EscortGenerator").field("name", &self.name).finish()
    }
}

// ── elementary readout maps ─────────────────────────────────────────────

/// Born probabilities `|<e_i|psi>|^2`, renormalized against rounding drift.
pub fn born_readout(psi: &Ray) -> SimplexPoint {
    let sq: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    SimplexPoint::project(sq).expect("squared moduli of a unit vector")
}

/// Constant uniform readout `(1/d, ..., 1/d)`.
pub fn uniform_readout(psi: &Ray) -> SimplexPoint {
    SimplexPoint::uniform(psi.dim())
}

/// Born probabilities read through a basis relabeling: coordinate `i`
/// receives `|<e_{sigma(i)}|psi>|^2`.
pub fn permuted_born(sigma: &Permutation, psi: &Ray) -> Result<SimplexPoint> {
    if sigma.len() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.len(),
            actual: psi.dim(),
        });
    }
    let p = born_readout(psi);
    let coords: Vec<f64> = sigma.forward().iter().map(|&j| p.coords()[j]).collect();
    Ok(SimplexPoint::new(coords).expect("permutation preserves the simplex"))
}

/// Escort deformation of a distribution: `f(u_i) / sum_j f(u_j)`.
pub fn escort_map(gen: &EscortGenerator, u: &SimplexPoint) -> Result<SimplexPoint> {
    let vals: Vec<f64> = u.coords().iter().map(|&c| gen.eval(c)).collect();
    let total: f64 = vals.iter().sum();
    if !(total > 1e-12) {
        return Err(Error::DegenerateNormalizer(total));
    }
    SimplexPoint::project(vals.iter().map(|v| v / total).collect())
}

/// Escort deformation of the Born probabilities.
pub fn escort_readout(gen: &EscortGenerator, psi: &Ray) -> Result<SimplexPoint> {
    escort_map(gen, &born_readout(psi))
}

/// Born probabilities displaced toward the barycenter by an interior bump:
/// `u -> (1 - eps w) u + eps w (1/d, ..., 1/d)` with `w(u) = d^d prod_i u_i`.
/// The weight vanishes on the boundary, so all vertices stay fixed exactly.
pub fn perturbed_born(eps: f64, psi: &Ray) -> Result<SimplexPoint> {
    if !(eps.abs() <= 0.5) {
        return Err(Error::OutOfDomain {
            name: "eps",
            value: eps,
            bounds: "[-0.5, 0.5]",
        });
    }
    let p = born_readout(psi);
    let d = p.dim() as f64;
    let w = p.coords().iter().fold((d as f64).powi(p.dim() as i32), |acc, &c| acc * c);
    let coords: Vec<f64> = p.coords().iter().map(|&c| (1.0 - eps * w) * c + eps * w / d).collect();
    SimplexPoint::project(coords)
}

// ── packaged readouts ───────────────────────────────────────────────────

/// A named readout map with its replay parameters.
pub struct Readout {
    name: String,
    dim: usize,
    params: serde_json::Value,
    eval: Box<dyn Fn(&Ray) -> SimplexPoint + Send + Sync>,
}

impl Readout {
    pub fn from_fn(
        name: impl Into<String>,
        dim: usize,
        params: serde_json::Value,
        eval: impl Fn(&Ray) -> SimplexPoint + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            params,
            eval: Box::new(eval),
        }
    }

    pub fn born(dim: usize) -> Self {
        Self::from_fn("born", dim, json!({"spec": "born"}), born_readout)
    }

    pub fn uniform(dim: usize) -> Self {
        Self::from_fn("uniform", dim, json!({"spec": "uniform"}), uniform_readout)
    }

    pub fn permuted_born(dim: usize, sigma: Permutation) -> Result<Self> {
        if sigma.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: sigma.len(),
            });
        }
        let spec = format!("permuted:{}", sigma.to_one_based_string());
        Ok(Self::from_fn(
            spec.clone(),
            dim,
            json!({"spec": spec}),
            move |psi| permuted_born(&sigma, psi).expect("dimension checked at construction"),
        ))
    }

    pub fn escort(dim: usize, gen: EscortGenerator) -> Self {
        let spec = format!("escort:{}", gen.name());
        Self::from_fn(spec.clone(), dim, json!({"spec": spec}), move |psi| {
            escort_readout(&gen, psi).expect("valid generators have positive normalizers")
        })
    }

    pub fn perturbed(dim: usize, eps: f64) -> Result<Self> {
        if !(eps.abs() <= 0.5) {
            return Err(Error::OutOfDomain {
                name: "eps",
                value: eps,
                bounds: "[-0.5, 0.5]",
            });
        }
        let spec = format!("perturbed:{eps}");
        Ok(Self::from_fn(spec.clone(), dim, json!({"spec": spec}), move |psi| {
            perturbed_born(eps, psi).expect("eps checked at construction")
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    pub fn eval(&self, psi: &Ray) -> SimplexPoint {
        assert_eq!(psi.dim(), self.dim, "dimension mismatch");
        (self.eval)(psi)
    }
}

impl std::fmt::Debug for Readout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Readout")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

/// Square-root composition: readout probabilities mapped to the spherical
/// orthant, where contraction against basis axes can be compared to
/// ray-space distances.
pub fn sqrt_readout(readout: &Readout, psi: &Ray) -> OrthantPoint {
    sqrt_chart(&readout.eval(psi))
}

// ── spec strings ────────────────────────────────────────────────────────

/// Parsed readout spec string.
#[derive(Debug, Clone, PartialEq)]
pub enum ReadoutSpec {
    Born,
    Uniform,
    /// 1-based permutation entries, as written externally.
    Permuted(Vec<usize>),
    Escort(GeneratorSpec),
    Perturbed(f64),
}

impl ReadoutSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let fail = |reason: &str| Error::SpecParse {
            spec: spec.into(),
            reason: reason.into(),
        };
        let spec_trim = spec.trim();
        if spec_trim == "born" {
            return Ok(Self::Born);
        }
        if spec_trim == "uniform" {
            return Ok(Self::Uniform);
        }
        if let Some(rest) = spec_trim.strip_prefix("permuted:") {
            let entries: std::result::Result<Vec<usize>, _> =
                rest.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let entries = entries.map_err(|_| fail("permutation entries must be integers"))?;
            Permutation::from_one_based(&entries)?;
            return Ok(Self::Permuted(entries));
        }
        if let Some(rest) = spec_trim.strip_prefix("escort:") {
            return Ok(Self::Escort(GeneratorSpec::parse(rest)?));
        }
        if let Some(rest) = spec_trim.strip_prefix("perturbed:") {
            let eps: f64 = rest.trim().parse().map_err(|_| fail("bump size must be a number"))?;
            if !(eps.abs() <= 0.5) {
                return Err(fail("bump size must lie in [-0.5, 0.5]"));
            }
            return Ok(Self::Perturbed(eps));
        }
        Err(fail(
            "expected born | uniform | permuted:<1-based list> | escort:<generator> | perturbed:<eps>",
        ))
    }

    /// Builds the readout for dimension `d`.
    pub fn build(&self, d: usize) -> Result<Readout> {
        match self {
            Self::Born => Ok(Readout::born(d)),
            Self::Uniform => Ok(Readout::uniform(d)),
            Self::Permuted(entries) => {
                let sigma = Permutation::from_one_based(entries)?;
                Readout::permuted_born(d, sigma)
            }
            Self::Escort(gen_spec) => Ok(Readout::escort(d, gen_spec.build()?)),
            Self::Perturbed(eps) => Readout::perturbed(d, *eps),
        }
    }
}

impl std::fmt::Display for ReadoutSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Born => write!(f, "born"),
            Self::Uniform => write!(f, "uniform"),
            Self::Permuted(entries) => {
                let list: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
                write!(f, "permuted:{}", list.join(","))
            }
            Self::Escort(gen) => write!(f, "escort:{gen}"),
            Self::Perturbed(eps) => write!(f, "perturbed:{eps}"),
        }
    }
}

/// Parsed generator spec string (`power:q`, `linear:c`, `table:<path>`).
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Power(f64),
    Linear(f64),
    Table(String),
}

impl GeneratorSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let fail = |reason: &str| Error::SpecParse {
            spec: spec.into(),
            reason: reason.into(),
        };
        let spec_trim = spec.trim();
        if let Some(rest) = spec_trim.strip_prefix("power:") {
            let q: f64 = rest.trim().parse().map_err(|_| fail("exponent must be a number"))?;
            if !(q > 0.0) {
                return Err(fail("exponent must be positive"));
            }
            return Ok(Self::Power(q));
        }
        if let Some(rest) = spec_trim.strip_prefix("linear:") {
            let c: f64 = rest.trim().parse().map_err(|_| fail("slope must be a number"))?;
            if !(c > 0.0) {
                return Err(fail("slope must be positive"));
            }
            return Ok(Self::Linear(c));
        }
        if let Some(rest) = spec_trim.strip_prefix("table:") {
            return Ok(Self::Table(rest.trim().to_string()));
        }
        Err(fail("expected power:<q> | linear:<c> | table:<path>"))
    }

    pub fn build(&self) -> Result<EscortGenerator> {
        match self {
            Self::Power(q) => EscortGenerator::power(*q),
            Self::Linear(c) => EscortGenerator::linear(*c),
            Self::Table(path) => EscortGenerator::from_csv(path),
        }
    }
}

impl std::fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Power(q) => write!(f, "power:{q}"),
            Self::Linear(c) => write!(f, "linear:{c}"),
            Self::Table(path) => write!(f, "table:{path}"),
        }
    }
}
