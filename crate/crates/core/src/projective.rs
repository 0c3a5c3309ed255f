//! Rays of a finite-dimensional complex Hilbert space and their
//! Fubini-Study geometry.
//!
//! A [`Ray`] is a unit vector with the global phase fixed deterministically
//! (largest-modulus amplitude made real and nonnegative, lowest index on
//! ties), so equal rays have equal amplitude vectors. The Fubini-Study
//! distance is `arccos |<psi|phi>|` (evaluated through the phase-aligned
//! chord so nearby rays keep full precision), with geodesics realized by
//! phase aligning the target and following the great circle in amplitude
//! space.
//! Metric speed and the quantum information content `4 * speed^2` of a
//! [`PureCurve`] are taken by central differences, so curves only need to be
//! evaluable, not differentiable in closed form.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sampling::{stream_rng, RngSeed};
use rand::Rng;
use rand_distr::StandardNormal;

/// Unit state vector with a deterministic phase gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    amps: Vec<Complex64>,
}

impl Ray {
    /// Normalizes arbitrary (nonzero) amplitudes and fixes the gauge.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidPoint {
                kind: "ray",
                reason: format!("need at least 2 amplitudes, got {}", amps.len()),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidPoint {
                kind: "ray",
                reason: "non-finite amplitude".into(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidPoint {
                kind: "ray",
                reason: format!("cannot normalize, norm = {norm}"),
            });
        }
        let mut amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
        gauge_fix(&mut amps);
        Ok(Self { amps })
    }

    /// Basis ray `e_i` (exact 0/1 amplitudes).
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(d >= 2 && i < d, "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[i] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Hermitian inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Component moduli `|<e_i|psi>|`.
    pub fn moduli(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm()).collect()
    }

    /// Largest componentwise amplitude difference of the gauge-fixed
    /// representatives.
    pub fn max_amp_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Serialize for Ray {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.amps.len()))?;
        for a in &self.amps {
            seq.serialize_element(&[a.re, a.im])?;
        }
        seq.end()
    }
}

/// Rotates the global phase so the largest-modulus amplitude (lowest index
/// on ties) becomes real and nonnegative.
fn gauge_fix(amps: &mut [Complex64]) {
    let mut k = 0;
    let mut best = -1.0;
    for (i, a) in amps.iter().enumerate() {
        let m = a.norm_sqr();
        if m > best {
            best = m;
            k = i;
        }
    }
    let m = amps[k].norm();
    if m > 0.0 {
        let phase = amps[k] / m;
        let rot = phase.conj();
        for a in amps.iter_mut() {
            *a *= rot;
        }
        amps[k] = Complex64::new(m, 0.0);
    }
}

/// Haar-random ray: `2d` independent standard normals form `d` complex
/// amplitudes, then normalize and gauge fix. Deterministic in
/// `(seed, stream)`, so sample sets are reproducible and order-independent.
pub fn haar_random_ray(seed: RngSeed, stream: u64, d: usize) -> Result<Ray> {
    if d < 2 {
        return Err(Error::OutOfDomain {
            name: "d",
            value: d as f64,
            bounds: "[2, inf)",
        });
    }
    let mut rng = stream_rng(seed, stream);
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-12 {
            return Ray::from_amplitudes(amps);
        }
    }
}

/// Fubini-Study distance `arccos |<psi|phi>|`, in `[0, pi/2]`.
///
/// Evaluated through the phase-aligned chord, `2 asin(|psi - e^{ia} phi|/2)`
/// with the phase chosen to make the overlap real and nonnegative. This is
/// the same angle, but it keeps full precision for nearby rays, where the
/// direct arccos of an overlap near 1 loses half the significand.
pub fn fs_distance(psi: &Ray, phi: &Ray) -> Result<f64> {
    let inner = psi.inner(phi)?;
    let m = inner.norm();
    let rot = if m > 0.0 {
        (inner / m).conj()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let chord_sq: f64 = psi
        .amplitudes()
        .iter()
        .zip(phi.amplitudes())
        .map(|(a, b)| (a - b * rot).norm_sqr())
        .sum();
    Ok(2.0 * (chord_sq.sqrt() / 2.0).clamp(0.0, 1.0).asin())
}

/// Point at parameter `t` of the Fubini-Study geodesic from `psi` to `phi`:
/// phase-align `phi` so the overlap is real nonnegative, then follow
/// `(sin((1-t) theta) psi + sin(t theta) phi') / sin(theta)`. For identical
/// rays the curve is constant.
pub fn fs_geodesic(psi: &Ray, phi: &Ray, t: f64) -> Result<Ray> {
    let (aligned, theta) = align_target(psi, phi)?;
    Ok(geodesic_mix(psi, &aligned, theta, t))
}

/// Phase-aligns `phi` against `psi` (overlap becomes `cos theta >= 0`) and
/// returns the aligned amplitudes with the opening angle.
fn align_target(psi: &Ray, phi: &Ray) -> Result<(Vec<Complex64>, f64)> {
    let inner = psi.inner(phi)?;
    let m = inner.norm();
    let theta = m.clamp(0.0, 1.0).acos();
    let rot = if m > 0.0 {
        (inner / m).conj()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok((phi.amplitudes().iter().map(|a| a * rot).collect(), theta))
}

fn geodesic_mix(psi: &Ray, aligned_phi: &[Complex64], theta: f64, t: f64) -> Ray {
    if theta < 1e-12 {
        return psi.clone();
    }
    let s = theta.sin();
    let ca = ((1.0 - t) * theta).sin() / s;
    let cb = (t * theta).sin() / s;
    let amps: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(aligned_phi)
        .map(|(a, b)| a * ca + b * cb)
        .collect();
    Ray::from_amplitudes(amps).expect("geodesic points are unit vectors")
}

/// Parametrized curve of rays on a closed interval.
pub struct PureCurve {
    label: String,
    domain: (f64, f64),
    eval: Box<dyn Fn(f64) -> Ray + Send + Sync>,
}

impl PureCurve {
    pub fn from_fn(
        label: impl Into<String>,
        domain: (f64, f64),
        eval: impl Fn(f64) -> Ray + Send + Sync + 'static,
    ) -> Self {
        assert!(domain.0 < domain.1, "empty curve domain");
        Self {
            label: label.into(),
            domain,
            eval: Box::new(eval),
        }
    }

    /// Fubini-Study geodesic from `psi` to `phi` on `[0, 1]`, with the phase
    /// alignment precomputed.
    pub fn fs_geodesic_between(label: impl Into<String>, psi: &Ray, phi: &Ray) -> Result<Self> {
        let (aligned, theta) = align_target(psi, phi)?;
        let psi = psi.clone();
        Ok(Self::from_fn(label, (0.0, 1.0), move |t| {
            geodesic_mix(&psi, &aligned, theta, t)
        }))
    }

    /// Unit-speed great circle `cos(s) psi + sin(s) chi` on `[0, pi]`, where
    /// `chi` is `direction` orthonormalized against `psi`.
    pub fn great_circle(label: impl Into<String>, psi: &Ray, direction: &Ray) -> Result<Self> {
        let overlap = psi.inner(direction)?;
        let mut chi: Vec<Complex64> = direction
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(d, p)| d - overlap * p)
            .collect();
        let norm: f64 = chi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-9 {
            return Err(Error::InvalidPoint {
                kind: "great circle",
                reason: "direction is parallel to the base point".into(),
            });
        }
        for a in chi.iter_mut() {
            *a /= norm;
        }
        let psi = psi.clone();
        Ok(Self::from_fn(label, (0.0, std::f64::consts::PI), move |s| {
            let amps: Vec<Complex64> = psi
                .amplitudes()
                .iter()
                .zip(&chi)
                .map(|(p, c)| p * s.cos() + c * s.sin())
                .collect();
            Ray::from_amplitudes(amps).expect("great-circle points are unit vectors")
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn eval(&self, s: f64) -> Ray {
        let (a, b) = self.domain;
        assert!(
            s >= a - 1e-9 && s <= b + 1e-9,
            "curve parameter {s} outside [{a}, {b}]"
        );
        (self.eval)(s.clamp(a, b))
    }
}

impl std::fmt::Debug for PureCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PureCurve")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Metric speed of a curve at `s` by central differences:
/// `fs_distance(gamma(s+h), gamma(s-h)) / (2h)`.
pub fn fs_speed(curve: &PureCurve, s: f64, h: f64) -> Result<f64> {
    let (a, b) = curve.domain();
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::OutOfDomain {
            name: "h",
            value: h,
            bounds: "(0, inf)",
        });
    }
    if s - h < a || s + h > b {
        return Err(Error::OutOfDomain {
            name: "s",
            value: s,
            bounds: "[domain.0 + h, domain.1 - h]",
        });
    }
    let d = fs_distance(&curve.eval(s + h), &curve.eval(s - h))?;
    Ok(d / (2.0 * h))
}

/// Quantum information content of the curve at `s`: `4 * fs_speed^2`.
pub fn quantum_fisher(curve: &PureCurve, s: f64, h: f64) -> Result<f64> {
    let v = fs_speed(curve, s, h)?;
    Ok(4.0 * v * v)
}
