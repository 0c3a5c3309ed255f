//! Fisher-Rao geometry of the probability simplex and its square-root chart.
//!
//! The open simplex carries the Fisher-Rao quadratic form
//! `g_u(v, v) = sum_i v_i^2 / u_i`. Taking coordinate-wise square roots maps
//! the simplex onto the nonnegative orthant of the unit sphere, where the
//! round metric `d(x, y) = arccos <x, y>` lives; the chart is conformal with
//! factor 4: `4 * |dPhi v|^2 = g_u(v, v)`. That identity lets every Fisher
//! statement be checked in round-metric terms, including on the boundary,
//! where velocities of square-rooted curves stay finite even though
//! `1 / u_i` blows up.

use crate::error::{Error, Result};
use crate::POINT_TOL;

// ── points and tangents ─────────────────────────────────────────────────

/// Probability vector: nonnegative coordinates summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    /// Validates nonnegativity (tiny negatives within `POINT_TOL` are
    /// clamped to zero) and unit sum.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        validate_len("simplex point", &coords)?;
        let mut coords = coords;
        for (i, c) in coords.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(Error::InvalidPoint {
                    kind: "simplex point",
                    reason: format!("coordinate {i} is not finite"),
                });
            }
            if *c < 0.0 {
                if *c < -POINT_TOL {
                    return Err(Error::InvalidPoint {
                        kind: "simplex point",
                        reason: format!("coordinate {i} = {c} is negative"),
                    });
                }
                *c = 0.0;
            }
        }
        let total: f64 = coords.iter().sum();
        if (total - 1.0).abs() > POINT_TOL {
            return Err(Error::InvalidPoint {
                kind: "simplex point",
                reason: format!("coordinates sum to {total}, not 1"),
            });
        }
        Ok(Self { coords })
    }

    /// Clamps negatives to zero and rescales to unit sum. For sanitizing the
    /// output of arithmetic that may drift slightly off the simplex.
    pub fn project(coords: Vec<f64>) -> Result<Self> {
        validate_len("simplex point", &coords)?;
        let clamped: Vec<f64> = coords.iter().map(|c| c.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if !total.is_finite() || total < 0.5 {
            return Err(Error::InvalidPoint {
                kind: "simplex point",
                reason: format!("cannot renormalize, coordinate sum = {total}"),
            });
        }
        Ok(Self {
            coords: clamped.iter().map(|c| c / total).collect(),
        })
    }

    /// The vertex `delta_i` (all mass on outcome `i`).
    pub fn vertex(d: usize, i: usize) -> Self {
        assert!(d >= 2 && i < d, "vertex index out of range");
        let mut coords = vec![0.0; d];
        coords[i] = 1.0;
        Self { coords }
    }

    /// Barycenter `(1/d, ..., 1/d)`.
    pub fn uniform(d: usize) -> Self {
        assert!(d >= 2, "need at least two outcomes");
        Self {
            coords: vec![1.0 / d as f64; d],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|&c| c > 0.0)
    }

    pub fn min_coord(&self) -> f64 {
        self.coords.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Max-norm distance to another point of the same dimension.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Blend toward the barycenter by `eps` and renormalize; makes boundary
    /// points strictly interior without moving interior points appreciably.
    pub fn retract_interior(&self, eps: f64) -> Self {
        let d = self.dim() as f64;
        let coords: Vec<f64> = self.coords.iter().map(|c| (1.0 - eps) * c + eps / d).collect();
        Self::project(coords).expect("retraction stays on the simplex")
    }
}

/// Tangent vector to the simplex: coordinates summing to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexTangent {
    comps: Vec<f64>,
}

impl SimplexTangent {
    pub fn new(comps: Vec<f64>) -> Result<Self> {
        validate_len("simplex tangent", &comps)?;
        if comps.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint {
                kind: "simplex tangent",
                reason: "non-finite component".into(),
            });
        }
        let total: f64 = comps.iter().sum();
        if total.abs() > POINT_TOL {
            return Err(Error::InvalidPoint {
                kind: "simplex tangent",
                reason: format!("components sum to {total}, not 0"),
            });
        }
        Ok(Self { comps })
    }

    /// Centers an arbitrary vector (subtracts the mean) so it becomes a
    /// valid tangent.
    pub fn centered(raw: &[f64]) -> Result<Self> {
        validate_len("simplex tangent", raw)?;
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        Self::new(raw.iter().map(|c| c - mean).collect())
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }
}

/// Unit vector with nonnegative coordinates: a point of the closed positive
/// orthant of the round sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthantPoint {
    coords: Vec<f64>,
}

impl OrthantPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        validate_len("orthant point", &coords)?;
        let mut coords = coords;
        for (i, c) in coords.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(Error::InvalidPoint {
                    kind: "orthant point",
                    reason: format!("coordinate {i} is not finite"),
                });
            }
            if *c < 0.0 {
                if *c < -POINT_TOL {
                    return Err(Error::InvalidPoint {
                        kind: "orthant point",
                        reason: format!("coordinate {i} = {c} is negative"),
                    });
                }
                *c = 0.0;
            }
        }
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        if (norm_sq - 1.0).abs() > POINT_TOL {
            return Err(Error::InvalidPoint {
                kind: "orthant point",
                reason: format!("squared norm = {norm_sq}, not 1"),
            });
        }
        Ok(Self { coords })
    }

    /// Clamps negatives to zero and rescales to unit norm.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        validate_len("orthant point", &coords)?;
        let clamped: Vec<f64> = coords.iter().map(|c| c.max(0.0)).collect();
        let norm = clamped.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-8 {
            return Err(Error::InvalidPoint {
                kind: "orthant point",
                reason: format!("cannot normalize, norm = {norm}"),
            });
        }
        Ok(Self {
            coords: clamped.iter().map(|c| c / norm).collect(),
        })
    }

    /// The coordinate axis `e_i`.
    pub fn vertex(d: usize, i: usize) -> Self {
        assert!(d >= 2 && i < d, "vertex index out of range");
        let mut coords = vec![0.0; d];
        coords[i] = 1.0;
        Self { coords }
    }

    /// Center of the orthant, `(1, ..., 1) / sqrt(d)`.
    pub fn uniform(d: usize) -> Self {
        assert!(d >= 2, "need at least two outcomes");
        Self {
            coords: vec![1.0 / (d as f64).sqrt(); d],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn min_coord(&self) -> f64 {
        self.coords.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn linf_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Blend toward the orthant center by `eps` and renormalize, producing a
    /// strictly positive point. Default blend is [`INTERIOR_RETRACT_EPS`].
    pub fn retract_interior(&self, eps: f64) -> Self {
        let d = self.dim();
        let center = 1.0 / (d as f64).sqrt();
        let coords: Vec<f64> = self
            .coords
            .iter()
            .map(|c| (1.0 - eps) * c + eps * center)
            .collect();
        Self::normalized(coords).expect("retraction stays near the sphere")
    }
}

fn validate_len(kind: &'static str, coords: &[f64]) -> Result<()> {
    if coords.len() < 2 {
        return Err(Error::InvalidPoint {
            kind,
            reason: format!("need at least 2 coordinates, got {}", coords.len()),
        });
    }
    Ok(())
}

// ── self-maps ───────────────────────────────────────────────────────────

/// Named self-map of the simplex. The closure must return valid simplex
/// points for every valid input.
pub struct SimplexSelfMap {
    name: String,
    dim: usize,
    eval: Box<dyn Fn(&SimplexPoint) -> SimplexPoint + Send + Sync>,
}

impl SimplexSelfMap {
    pub fn from_fn(
        name: impl Into<String>,
        dim: usize,
        eval: impl Fn(&SimplexPoint) -> SimplexPoint + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            eval: Box::new(eval),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn("identity", dim, SimplexPoint::clone)
    }

    /// Map sending everything to a fixed point (e.g. the barycenter).
    pub fn constant(name: impl Into<String>, target: SimplexPoint) -> Self {
        let dim = target.dim();
        Self::from_fn(name, dim, move |_| target.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, u: &SimplexPoint) -> SimplexPoint {
        assert_eq!(u.dim(), self.dim, "dimension mismatch");
        (self.eval)(u)
    }
}

impl std::fmt::Debug for SimplexSelfMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplexSelfMap")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

/// Named self-map of the closed positive orthant of the unit sphere.
pub struct OrthantSelfMap {
    name: String,
    dim: usize,
    eval: Box<dyn Fn(&OrthantPoint) -> OrthantPoint + Send + Sync>,
}

impl OrthantSelfMap {
    pub fn from_fn(
        name: impl Into<String>,
        dim: usize,
        eval: impl Fn(&OrthantPoint) -> OrthantPoint + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            eval: Box::new(eval),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn("identity", dim, OrthantPoint::clone)
    }

    /// Conjugates a simplex self-map through the square-root chart:
    /// `x -> Phi(T(Phi^{-1}(x)))`.
    pub fn conjugated(map: SimplexSelfMap) -> Self {
        let dim = map.dim();
        let name = format!("sqrt-conjugate({})", map.name());
        Self::from_fn(name, dim, move |x| sqrt_chart(&map.eval(&sqrt_chart_inverse(x))))
    }

    /// Coordinate permutation `x_i -> x_{perm[i]}` (a round isometry).
    /// `perm` must be a 0-based bijection of `0..d`.
    pub fn coordinate_permutation(perm: Vec<usize>) -> Self {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        for &j in &perm {
            assert!(j < dim && !seen[j], "not a permutation");
            seen[j] = true;
        }
        Self::from_fn(format!("permutation{perm:?}"), dim, move |x| {
            let coords: Vec<f64> = perm.iter().map(|&j| x.coords()[j]).collect();
            OrthantPoint::new(coords).expect("permutation preserves the sphere")
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &OrthantPoint) -> OrthantPoint {
        assert_eq!(x.dim(), self.dim, "dimension mismatch");
        (self.eval)(x)
    }
}

impl std::fmt::Debug for OrthantSelfMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrthantSelfMap")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

// ── metric operations ───────────────────────────────────────────────────

/// Fisher-Rao quadratic form `sum_i v_i^2 / u_i` at an interior point.
pub fn fisher_norm_sq(u: &SimplexPoint, v: &SimplexTangent) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            actual: v.dim(),
        });
    }
    for (i, &c) in u.coords().iter().enumerate() {
        if c <= 0.0 {
            return Err(Error::BoundaryPoint { index: i, value: c });
        }
    }
    Ok(u.coords()
        .iter()
        .zip(v.components())
        .map(|(&ui, &vi)| vi * vi / ui)
        .sum())
}

/// Coordinate-wise square root: simplex -> spherical orthant.
pub fn sqrt_chart(u: &SimplexPoint) -> OrthantPoint {
    let coords: Vec<f64> = u.coords().iter().map(|c| c.sqrt()).collect();
    OrthantPoint::new(coords).expect("chart image lies on the sphere")
}

/// Coordinate-wise square: spherical orthant -> simplex.
pub fn sqrt_chart_inverse(x: &OrthantPoint) -> SimplexPoint {
    let coords: Vec<f64> = x.coords().iter().map(|c| c * c).collect();
    SimplexPoint::new(coords).expect("chart preimage lies on the simplex")
}

/// Round (great-circle) distance `arccos <x, y>`, in `[0, pi/2]` on the
/// orthant.
///
/// Evaluated as `2 asin(|x - y|/2)`: the same angle, but fully accurate for
/// nearby points, where the direct arccos of a dot product near 1 loses half
/// the significand (and turns identical points into a spurious ~1e-8 gap).
pub fn round_distance(x: &OrthantPoint, y: &OrthantPoint) -> f64 {
    debug_assert_eq!(x.dim(), y.dim(), "dimension mismatch");
    let chord_sq: f64 = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    2.0 * (chord_sq.sqrt() / 2.0).clamp(0.0, 1.0).asin()
}

/// Point at parameter `t` of the normalized chord from `x` to `y`:
/// `((1-t) x + t y) / |...|`. Its image is the round geodesic arc, so the
/// endpoints must be strictly positive (or equal); retract boundary
/// endpoints with [`OrthantPoint::retract_interior`] first.
pub fn orthant_chord_geodesic(x: &OrthantPoint, y: &OrthantPoint, t: f64) -> Result<OrthantPoint> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            bounds: "[0, 1]",
        });
    }
    if x.linf_distance(y) == 0.0 {
        return Ok(x.clone());
    }
    if x.min_coord() <= 0.0 || y.min_coord() <= 0.0 {
        let (bad, pt) = if x.min_coord() <= 0.0 { (x, "x") } else { (y, "y") };
        let idx = bad
            .coords()
            .iter()
            .position(|&c| c <= 0.0)
            .unwrap_or_default();
        let _ = pt;
        return Err(Error::BoundaryPoint {
            index: idx,
            value: bad.coords()[idx],
        });
    }
    let blend: Vec<f64> = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(&a, &b)| (1.0 - t) * a + t * b)
        .collect();
    let norm_sq: f64 = blend.iter().map(|c| c * c).sum();
    if norm_sq < 1e-16 {
        return Err(Error::OutOfDomain {
            name: "chord norm",
            value: norm_sq.sqrt(),
            bounds: "(0, inf)",
        });
    }
    OrthantPoint::normalized(blend)
}

/// Defect of Fisher non-expansion for a simplex self-map at `(u, v)`:
/// `g_{T(u)}(dT v, dT v) - g_u(v, v)`, with the pushforward `dT v` taken by
/// central differences `(T(u + h v) - T(u - h v)) / (2h)`. Positive values
/// witness metric expansion. When `T(u)` has (numerically) vanishing
/// coordinates the output form is evaluated through the square-root chart,
/// which keeps the velocity finite on the boundary.
pub fn fisher_nonexpansion_residual(
    map: &SimplexSelfMap,
    u: &SimplexPoint,
    v: &SimplexTangent,
    h: f64,
) -> Result<f64> {
    if map.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            actual: u.dim(),
        });
    }
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::OutOfDomain {
            name: "h",
            value: h,
            bounds: "(0, inf)",
        });
    }
    let base = fisher_norm_sq(u, v)?;
    let stencil = |sign: f64| -> Result<SimplexPoint> {
        let coords: Vec<f64> = u
            .coords()
            .iter()
            .zip(v.components())
            .map(|(&ui, &vi)| ui + sign * h * vi)
            .collect();
        if coords.iter().any(|&c| c < -POINT_TOL) {
            return Err(Error::StencilOutOfDomain { h });
        }
        SimplexPoint::new(coords).map_err(|_| Error::StencilOutOfDomain { h })
    };
    let plus = map.eval(&stencil(1.0)?);
    let minus = map.eval(&stencil(-1.0)?);
    let out = map.eval(u);

    let g_out = if out.min_coord() > 1e-12 {
        plus.coords()
            .iter()
            .zip(minus.coords())
            .zip(out.coords())
            .map(|((&p, &m), &o)| {
                let w = (p - m) / (2.0 * h);
                w * w / o
            })
            .sum::<f64>()
    } else {
        // Square-root-velocity form of the same quadratic form, finite on
        // the boundary: 4 |d/dh sqrt(T)|^2.
        4.0 * plus
            .coords()
            .iter()
            .zip(minus.coords())
            .map(|(&p, &m)| {
                let w = (p.sqrt() - m.sqrt()) / (2.0 * h);
                w * w
            })
            .sum::<f64>()
    };
    Ok(g_out - base)
}

/// Like [`fisher_nonexpansion_residual`] but halves `h` (up to 10 times)
/// whenever the stencil leaves the simplex. Returns the residual and the
/// step actually used.
pub fn fisher_nonexpansion_residual_adaptive(
    map: &SimplexSelfMap,
    u: &SimplexPoint,
    v: &SimplexTangent,
    h0: f64,
) -> Result<(f64, f64)> {
    let mut h = h0;
    for _ in 0..=10 {
        match fisher_nonexpansion_residual(map, u, v, h) {
            Ok(r) => return Ok((r, h)),
            Err(Error::StencilOutOfDomain { .. }) => h *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(Error::StencilOutOfDomain { h })
}
