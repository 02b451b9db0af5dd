//! Trigonometric-polynomial superpotentials and their real critical points.
//!
//! `TrigPoly` represents `f(q) = a_0 + sum_m a_m cos(2 pi m q) + b_m sin(2 pi m q)`
//! with period 1. The class is closed under differentiation, and the real
//! zeros of `f'` are found exactly (up to refinement) by passing to
//! `z = e^{2 pi i q}`, where `z^M f'(q)` becomes a polynomial of degree `2M`.

use crate::roots::poly_roots;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Acceptance band around the unit circle for candidate roots of `z^M f'`.
const UNIT_CIRCLE_TOL: f64 = 1e-8;
/// Refined critical points closer than this are treated as duplicates.
const DEDUP_TOL: f64 = 1e-10;
/// Morse threshold: reject |f''(q_j)| below this fraction of max |f''|.
const MORSE_REL_THRESHOLD: f64 = 1e-6;

/// Finite Fourier series with real coefficients, period 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    /// Cosine coefficients `a_0 .. a_M`.
    pub a: Vec<f64>,
    /// Sine coefficients `b_1 .. b_M`.
    pub b: Vec<f64>,
}

impl TrigPoly {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidPotential("cosine coefficient list must contain a_0".into()));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::InvalidPotential(format!(
                "need one more cosine than sine coefficient, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential("coefficients must be finite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn constant(c: f64) -> Self {
        Self { a: vec![c], b: vec![] }
    }

    /// Maximum harmonic M.
    pub fn max_harmonic(&self) -> usize {
        self.a.len() - 1
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TrigPoly = serde_json::from_str(text)
            .map_err(|e| Error::InvalidPotential(format!("bad potential JSON: {e}")))?;
        Self::new(raw.a, raw.b)
    }

    pub fn eval(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(self.a[0], 0.0);
        for m in 1..self.a.len() {
            let arg = TAU * (m as f64) * q;
            acc += self.a[m] * arg.cos() + self.b[m - 1] * arg.sin();
        }
        acc
    }

    pub fn eval_real(&self, q: f64) -> f64 {
        let mut acc = self.a[0];
        for m in 1..self.a.len() {
            let arg = TAU * (m as f64) * q;
            acc += self.a[m] * arg.cos() + self.b[m - 1] * arg.sin();
        }
        acc
    }

    /// Exact term-wise derivative: `(a_m, b_m) -> (2 pi m b_m, -2 pi m a_m)`.
    pub fn differentiate(&self) -> Self {
        let m_max = self.max_harmonic();
        let mut a = vec![0.0; m_max + 1];
        let mut b = vec![0.0; m_max];
        for m in 1..=m_max {
            let w = TAU * m as f64;
            a[m] = w * self.b[m - 1];
            b[m - 1] = -w * self.a[m];
        }
        Self { a, b }
    }

    /// The shifted series `q -> f(q + c)`, same harmonics.
    pub fn shifted(&self, c: f64) -> Self {
        let m_max = self.max_harmonic();
        let mut a = vec![0.0; m_max + 1];
        let mut b = vec![0.0; m_max];
        a[0] = self.a[0];
        for m in 1..=m_max {
            let (s, co) = (TAU * m as f64 * c).sin_cos();
            a[m] = self.a[m] * co + self.b[m - 1] * s;
            b[m - 1] = self.b[m - 1] * co - self.a[m] * s;
        }
        Self { a, b }
    }

    /// Max |f| over a uniform scan, used for relative tolerances.
    pub fn sup_norm_estimate(&self) -> f64 {
        let n = 64 * (self.max_harmonic() + 1);
        (0..n)
            .map(|i| self.eval_real(i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    fn is_zero(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|&c| c == 0.0)
    }
}

/// Classification of a nondegenerate critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalKind {
    Minimum,
    Maximum,
}

/// A simple real zero of `f'` with its value and curvature.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub q: f64,
    pub value: f64,
    pub curvature: f64,
    pub kind: CriticalKind,
}

/// The full ordered critical-point data of a Morse superpotential:
/// `2n` points, strictly alternating minimum / maximum, cyclically rotated so
/// the entry at index 0 is the first minimum on `[0, 1)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorseData {
    pub n: usize,
    pub points: Vec<CriticalPoint>,
    /// How many positions the ascending-in-q list was rotated left.
    pub label_offset: usize,
}

impl MorseData {
    /// Critical point by cyclic index (0-based; index `2n` wraps to 0).
    pub fn point(&self, j: usize) -> &CriticalPoint {
        &self.points[j % self.points.len()]
    }

    /// Cyclic gap from point `j` to its predecessor, as a positive length.
    pub fn gap_to_previous(&self, j: usize) -> f64 {
        let len = self.points.len();
        let q = self.points[j % len].q;
        let prev = self.points[(j + len - 1) % len].q;
        let mut gap = q - prev;
        if gap <= 0.0 {
            gap += 1.0;
        }
        gap
    }
}

/// All real critical points of `f` on `[0, 1)`, sorted ascending.
///
/// Roots of `f'` are located as eigen-scale roots of the degree-`2M`
/// polynomial in `z = e^{2 pi i q}`, filtered to `||z| - 1| < tol`, refined by
/// Newton iteration on `f'`, and deduplicated.
pub fn critical_points(f: &TrigPoly, tol: f64) -> Result<Vec<f64>> {
    let fp = f.differentiate();
    let fpp = fp.differentiate();
    if fp.is_zero() {
        return Err(Error::NoCriticalPoints);
    }
    let m_max = fp.max_harmonic();

    // c_m z^m for m in -M..=M with c_{+-m} = (a_m -+ i b_m) / 2, c_0 = a_0;
    // multiplied by z^M this is an ordinary polynomial of degree 2M.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * m_max + 1];
    coeffs[m_max] = Complex64::new(fp.a[0], 0.0);
    for m in 1..=m_max {
        let half = Complex64::new(fp.a[m] / 2.0, -fp.b[m - 1] / 2.0);
        coeffs[m_max + m] = half;
        coeffs[m_max - m] = half.conj();
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
        coeffs.pop();
    }
    if coeffs.len() == 1 {
        return Err(Error::NoCriticalPoints);
    }

    let mut qs: Vec<f64> = Vec::new();
    for z in poly_roots(&coeffs) {
        if (z.norm() - 1.0).abs() >= tol {
            continue;
        }
        let mut q = z.arg() / TAU;
        for _ in 0..60 {
            let d = fp.eval_real(q);
            let dd = fpp.eval_real(q);
            if dd == 0.0 {
                break;
            }
            let step = d / dd;
            q -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        q = q.rem_euclid(1.0);
        let dup = qs.iter().any(|&x| {
            let d = (x - q).abs();
            d.min(1.0 - d) < DEDUP_TOL
        });
        if !dup {
            qs.push(q);
        }
    }
    if qs.is_empty() {
        return Err(Error::NoCriticalPoints);
    }
    qs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Morse condition: every zero of f' must have a healthy curvature.
    let scan = 256 * (m_max + 1);
    let max_curv = (0..scan)
        .map(|i| fpp.eval_real(i as f64 / scan as f64).abs())
        .fold(0.0, f64::max);
    let threshold = MORSE_REL_THRESHOLD * max_curv;
    for &q in &qs {
        let c = fpp.eval_real(q);
        if c.abs() < threshold {
            return Err(Error::DegenerateCritical { q, curvature: c, threshold });
        }
    }
    Ok(qs)
}

/// Classify and cyclically order the critical points of a Morse potential.
pub fn morse_data(f: &TrigPoly) -> Result<MorseData> {
    let qs = critical_points(f, UNIT_CIRCLE_TOL)?;
    let fpp = f.differentiate().differentiate();
    let mut points: Vec<CriticalPoint> = qs
        .iter()
        .map(|&q| {
            let curvature = fpp.eval_real(q);
            CriticalPoint {
                q,
                value: f.eval_real(q),
                curvature,
                kind: if curvature > 0.0 { CriticalKind::Minimum } else { CriticalKind::Maximum },
            }
        })
        .collect();

    if points.len() % 2 != 0 {
        return Err(Error::NotAlternating);
    }
    let offset = match points.iter().position(|p| p.kind == CriticalKind::Minimum) {
        Some(i) => i,
        None => return Err(Error::NotAlternating),
    };
    points.rotate_left(offset);
    for (i, p) in points.iter().enumerate() {
        let want = if i % 2 == 0 { CriticalKind::Minimum } else { CriticalKind::Maximum };
        if p.kind != want {
            return Err(Error::NotAlternating);
        }
    }
    // alternation on the circle already forces each maximum above its
    // neighbouring minima; keep it as an internal consistency check
    let len = points.len();
    for i in (1..len).step_by(2) {
        let v = points[i].value;
        if v <= points[i - 1].value || v <= points[(i + 1) % len].value {
            return Err(Error::NotAlternating);
        }
    }
    Ok(MorseData { n: len / 2, points, label_offset: offset })
}
