//! Leading-order turning-point data attached to a Morse superpotential: the
//! formal monodromy exponents, the tunneling-cycle monodromies `tau_j`, the
//! double-turning-point factors `mu_j`, and the connection coefficients they
//! are built from, plus two numeric oracles (a gamma-function form of the
//! connection coefficient and a contour quadrature for the monodromy
//! logarithm).
//!
//! Index convention: critical points are 0-based in cyclic order starting at
//! a minimum, so even indices are minima and odd indices are maxima.

use crate::gamma::gamma_complex;
use crate::transseries::TransTerm;
use crate::trigpoly::{MorseData, TrigPoly};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// An exponent affine in the rescaled eigenvalue: `slope * E_r + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineExponent {
    pub slope: f64,
    pub constant: f64,
}

impl AffineExponent {
    pub fn add(self, other: Self) -> Self {
        Self { slope: self.slope + other.slope, constant: self.constant + other.constant }
    }

    pub fn eval(self, e_r: Complex64) -> Complex64 {
        self.slope * e_r + self.constant
    }
}

/// Formal monodromy exponents around one double turning point, with
/// `E = h E_r` already substituted.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonodromyExponents {
    /// Loop around both simple turning points on the first sheet.
    pub s_gamma: AffineExponent,
    /// Same loop on the second sheet.
    pub s_gamma_prime: AffineExponent,
    /// Figure-eight loop.
    pub s_delta: AffineExponent,
    /// Figure-eight loop, sheets interchanged.
    pub s_delta_prime: AffineExponent,
}

/// Monodromy exponents at critical point `j`:
/// `s_gamma = -E_r/(2 f''(q_j)) - 1`, and the companions fixed by
/// `s_gamma + s_gamma' = -1`, `s_delta = -1/2 - s_gamma`,
/// `s_delta' = 1/2 + s_gamma`.
pub fn monodromy_exponents(md: &MorseData, j: usize) -> MonodromyExponents {
    let curv = md.point(j).curvature;
    let s_gamma = AffineExponent { slope: -1.0 / (2.0 * curv), constant: -1.0 };
    MonodromyExponents {
        s_gamma,
        s_gamma_prime: AffineExponent { slope: -s_gamma.slope, constant: -1.0 - s_gamma.constant },
        s_delta: AffineExponent { slope: -s_gamma.slope, constant: -0.5 - s_gamma.constant },
        s_delta_prime: AffineExponent { slope: s_gamma.slope, constant: 0.5 + s_gamma.constant },
    }
}

/// Leading term of `mu_j`: `i pi / |f''(q_j)| * E_r`. Using the absolute
/// value makes the odd- and even-index formulas coincide.
pub fn mu_leading(md: &MorseData, j: usize) -> TransTerm {
    let curv = md.point(j).curvature.abs();
    TransTerm::new(Complex64::new(0.0, PI / curv), 1, 0, 0.0)
}

/// Leading term of the tunneling-cycle monodromy `tau_j`: real positive
/// coefficient `pi / sqrt(f''(min) |f''(max)|)` and rate
/// `-2 [f(max) - f(min)]` for the barrier the cycle crosses (between point
/// `j` and its cyclic successor).
pub fn tau_leading(md: &MorseData, j: usize) -> Result<TransTerm> {
    let here = md.point(j);
    let next = md.point(j + 1);
    let (min_curv, max_curv, barrier) = if j % 2 == 0 {
        (here.curvature, next.curvature.abs(), next.value - here.value)
    } else {
        (next.curvature, here.curvature.abs(), here.value - next.value)
    };
    let rate = -2.0 * barrier;
    if rate >= 0.0 {
        return Err(Error::NonPositiveBarrier { index: j, rate });
    }
    let coeff = PI / (min_curv * max_curv).sqrt();
    Ok(TransTerm::new(Complex64::new(coeff, 0.0), 1, 0, rate))
}

/// The `mu_j`, `tau_j` symbols and barrier actions of a Morse potential.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TunnelingData {
    pub n: usize,
    pub mu: Vec<TransTerm>,
    pub tau: Vec<TransTerm>,
    /// `2 [f(max) - f(min)]` per tunneling cycle; the negated tau rates.
    pub barrier_actions: Vec<f64>,
}

impl TunnelingData {
    pub fn from_morse(md: &MorseData) -> Result<Self> {
        let count = md.points.len();
        let mut mu = Vec::with_capacity(count);
        let mut tau = Vec::with_capacity(count);
        let mut barrier_actions = Vec::with_capacity(count);
        for j in 0..count {
            mu.push(mu_leading(md, j));
            let t = tau_leading(md, j)?;
            barrier_actions.push(-t.rate);
            tau.push(t);
        }
        Ok(Self { n: md.n, mu, tau, barrier_actions })
    }
}

/// Offset into the adjacent Stokes zone: a quarter of the cyclic gap to the
/// previous critical point.
pub fn default_eps(md: &MorseData, j: usize) -> f64 {
    md.gap_to_previous(j) / 4.0
}

/// Leading connection coefficient across the double turning point `q_j`,
/// in the WKB bases normalized at `q_j - eps`.
///
/// Minima (even `j`) carry
/// `c' = 2 i sqrt(pi) f'(q_j - eps) / sqrt(f'') * h^{-1/2} * e^{2[f(q_j) - f(q_j - eps)]/h}`;
/// maxima carry
/// `c = -i sqrt(pi) / (2 sqrt(|f''|) f'(q_j - eps)) * E_r h^{1/2} * e^{-2[f(q_j) - f(q_j - eps)]/h}`.
pub fn connection_leading(f: &TrigPoly, md: &MorseData, j: usize, eps: f64) -> Result<TransTerm> {
    let p = md.point(j);
    let q0 = p.q - eps;
    let slope = f.differentiate().eval_real(q0);
    if slope == 0.0 {
        return Err(Error::ZeroSlope { q: q0 });
    }
    let df = p.value - f.eval_real(q0);
    if j % 2 == 0 {
        let coeff = Complex64::new(0.0, 2.0 * PI.sqrt() * slope / p.curvature.sqrt());
        Ok(TransTerm::new(coeff, 0, -1, 2.0 * df))
    } else {
        let coeff = Complex64::new(0.0, -PI.sqrt() / (2.0 * p.curvature.abs().sqrt() * slope));
        Ok(TransTerm::new(coeff, 1, 1, -2.0 * df))
    }
}

/// Full gamma-function form of the connection coefficient at a minimum
/// (even `j`), as a numeric value at given `E_r` and `h`:
///
/// `-i sqrt(2 pi) h^{-(E_r + f'')/(2 f'')} / Gamma((E_r + f'')/(2 f'') + 1/2)
///  * exp[((E_r + f'')/f'') Ln(-2 f'(q_j - eps)/sqrt(2 f''))]
///  * e^{2[f(q_j) - f(q_j - eps)]/h}`,
///
/// with the regular part of the action integral dropped (it enters at
/// relative order `E_r`).
pub fn gamma_connection(
    f: &TrigPoly,
    md: &MorseData,
    j: usize,
    e_r: Complex64,
    h: f64,
    eps: f64,
) -> Result<Complex64> {
    assert!(j % 2 == 0, "gamma_connection applies at minima");
    assert!(h > 0.0);
    let p = md.point(j);
    let curv = p.curvature;
    let q0 = p.q - eps;
    let slope = f.differentiate().eval_real(q0);
    let log_arg = -2.0 * slope / (2.0 * curv).sqrt();
    if log_arg <= 0.0 {
        return Err(Error::ZeroSlope { q: q0 });
    }
    let s = (e_r + curv) / (2.0 * curv);
    let gamma_arg = s + 0.5;
    let nearest = gamma_arg.re.round();
    if nearest <= 0.0 && (gamma_arg - nearest).norm() < 1e-12 {
        return Err(Error::GammaPole { arg: format!("{gamma_arg}") });
    }
    let df = p.value - f.eval_real(q0);
    let value = Complex64::new(0.0, -1.0)
        * (2.0 * PI).sqrt()
        * (-s * h.ln()).exp()
        / gamma_complex(gamma_arg)
        * (2.0 * s * log_arg.ln()).exp()
        * (2.0 * df / h).exp();
    Ok(value)
}

// 16-point Gauss-Legendre nodes and weights on [0, 1].
const GL_NODES: [f64; 16] = [
    0.005299532504175031, 0.027712488463383712, 0.06718439880608412, 0.12229779582249845,
    0.19106187779867811, 0.27099161117138630, 0.35919822461037054, 0.45249374508118123,
    0.54750625491881877, 0.64080177538962946, 0.72900838882861370, 0.80893812220132189,
    0.87770220417750155, 0.93281560119391588, 0.97228751153661629, 0.99470046749582497,
];
const GL_WEIGHTS: [f64; 16] = [
    0.013576229705877047, 0.031126761969323946, 0.047579255841246392, 0.062314485627766936,
    0.074797994408288367, 0.084578259697501269, 0.091301707522461794, 0.094725305227534248,
    0.094725305227534248, 0.091301707522461794, 0.084578259697501269, 0.074797994408288367,
    0.062314485627766936, 0.047579255841246392, 0.031126761969323946, 0.013576229705877047,
];

/// Closed form the contour integral reproduces at leading order in E:
/// `Ln[-2 f'(q_j - eps)/sqrt(E)]` at minima, `-Ln[2 f'(q_j - eps)/sqrt(E)]`
/// at maxima, real branch.
pub fn sigma_log_closed_form(f: &TrigPoly, md: &MorseData, j: usize, eps: f64, energy: f64) -> f64 {
    let slope = f.differentiate().eval_real(md.point(j).q - eps);
    if j % 2 == 0 {
        (-2.0 * slope / energy.sqrt()).ln()
    } else {
        -(2.0 * slope / energy.sqrt()).ln()
    }
}

/// Contour quadrature of `int -f'' / (2 i sqrt(E - f'^2)) dq` along the path
/// that starts at `q_j - eps`, passes under the cut joining the two simple
/// turning points flanking `q_j`, crosses between them, and returns to the
/// start on the other sheet. The square-root branch is tracked by continuity
/// from the first-sheet determination at minima (second sheet at maxima).
pub fn sigma_log_integral(
    f: &TrigPoly,
    md: &MorseData,
    j: usize,
    eps: f64,
    energy: f64,
) -> Result<Complex64> {
    sigma_log_integral_with_nodes(f, md, j, eps, energy, 2000)
}

/// Same, with at least `min_nodes` quadrature nodes; panel counts then
/// double until two successive refinements agree to 1e-10.
pub fn sigma_log_integral_with_nodes(
    f: &TrigPoly,
    md: &MorseData,
    j: usize,
    eps: f64,
    energy: f64,
    min_nodes: usize,
) -> Result<Complex64> {
    assert!(energy > 0.0, "contour quadrature needs E > 0");
    let fp = f.differentiate();
    let fpp = fp.differentiate();
    let p = md.point(j);
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let sqrt_e = energy.sqrt();

    // simple turning points flanking q_j: f' = -+ sign * sqrt(E)
    let half_gap = md.gap_to_previous(j).min(md.gap_to_previous(j + 1)) / 2.0;
    let q_minus = solve_turning(&fp, &fpp, p.q, -half_gap, -sign * sqrt_e)?;
    let q_plus = solve_turning(&fp, &fpp, p.q, half_gap, sign * sqrt_e)?;

    let start = Complex64::new(p.q - eps, 0.0);
    let mid = Complex64::new(0.5 * (q_minus + q_plus), 0.0);
    let delta = Complex64::new(0.0, (eps / 2.0).min(0.02));
    let waypoints = [start, start - delta, mid - delta, mid + delta, start + delta, start];

    // the crossing segment passes midway between the turning points
    let clearance = (q_plus - q_minus) / 2.0;
    if clearance < 1e-6 {
        return Err(Error::ContourTooClose { distance: clearance });
    }

    // first sheet: sqrt(E - f'^2) -> -i f'(q) as E -> 0
    let slope0 = fp.eval_real(start.re);
    let branch0 = Complex64::new(0.0, -sign) * slope0;

    let mut panels = (min_nodes / (GL_NODES.len() * (waypoints.len() - 1))).max(1);
    let mut prev: Option<Complex64> = None;
    for _ in 0..8 {
        let val = contour_pass(&fp, &fpp, &waypoints, branch0, energy, panels);
        if let Some(p0) = prev {
            if (val - p0).norm() < 1e-10 * (1.0 + val.norm()) {
                return Ok(val);
            }
        }
        prev = Some(val);
        panels *= 2;
    }
    Ok(prev.unwrap())
}

fn solve_turning(fp: &TrigPoly, fpp: &TrigPoly, q0: f64, span: f64, target: f64) -> Result<f64> {
    let g = |q: f64| fp.eval_real(q) - target;
    let (mut a, mut b) = if span < 0.0 { (q0 + span, q0) } else { (q0, q0 + span) };
    if (g(a) < 0.0) == (g(b) < 0.0) {
        return Err(Error::ContourTooClose { distance: span.abs() });
    }
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if (g(m) < 0.0) == (g(a) < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    let mut q = 0.5 * (a + b);
    for _ in 0..5 {
        let d = fpp.eval_real(q);
        if d != 0.0 {
            q -= g(q) / d;
        }
    }
    Ok(q)
}

fn contour_pass(
    fp: &TrigPoly,
    fpp: &TrigPoly,
    waypoints: &[Complex64],
    branch0: Complex64,
    energy: f64,
    panels: usize,
) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut prev_root: Option<Complex64> = None;
    let two_i = Complex64::new(0.0, 2.0);
    for seg in waypoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let step = (b - a) / panels as f64;
        for panel in 0..panels {
            let lo = a + step * panel as f64;
            for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
                let q = lo + step * *node;
                let w = energy - fp.eval(q).powi(2);
                let mut root = w.sqrt();
                let reference = prev_root.unwrap_or(branch0);
                if (root - reference).norm() > (-root - reference).norm() {
                    root = -root;
                }
                prev_root = Some(root);
                total += -fpp.eval(q) / (two_i * root) * step * *weight;
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{double_well, single_well, triple_well};
    use crate::trigpoly::morse_data;

    #[test]
    fn monodromy_exponents_double_well() {
        let md = morse_data(&double_well()).unwrap();
        let m = monodromy_exponents(&md, 0);
        // s_gamma at the first minimum: slope -1/(12 pi), constant -1
        assert!((m.s_gamma.slope + 1.0 / (12.0 * PI)).abs() < 1e-14);
        assert_eq!(m.s_gamma.constant, -1.0);
    }

    #[test]
    fn monodromy_identities_exact() {
        for f in [double_well(), single_well(), triple_well()] {
            let md = morse_data(&f).unwrap();
            for j in 0..md.points.len() {
                let m = monodromy_exponents(&md, j);
                let sum = m.s_gamma.add(m.s_gamma_prime);
                assert_eq!(sum.slope, 0.0);
                assert_eq!(sum.constant, -1.0);
                let dsum = m.s_delta.add(m.s_delta_prime);
                assert_eq!(dsum.slope, 0.0);
                assert_eq!(dsum.constant, 0.0);
                assert_eq!(m.s_delta.slope, -m.s_gamma.slope);
                assert_eq!(m.s_delta.constant, -0.5 - m.s_gamma.constant);
            }
        }
    }

    #[test]
    fn mu_values_double_well() {
        let md = morse_data(&double_well()).unwrap();
        // i E_r / 6 at the first minimum, i E_r / 10 at the second
        let m0 = mu_leading(&md, 0);
        assert!((m0.coeff - Complex64::new(0.0, 1.0 / 6.0)).norm() < 1e-12);
        assert_eq!((m0.e_deg, m0.h2_pow, m0.rate), (1, 0, 0.0));
        let m2 = mu_leading(&md, 2);
        assert!((m2.coeff - Complex64::new(0.0, 0.1)).norm() < 1e-12);
    }

    #[test]
    fn mu_scales_inversely_with_curvature() {
        let f = double_well();
        let doubled = TrigPoly::new(
            f.a.iter().map(|c| 2.0 * c).collect(),
            f.b.iter().map(|c| 2.0 * c).collect(),
        )
        .unwrap();
        let md1 = morse_data(&f).unwrap();
        let md2 = morse_data(&doubled).unwrap();
        for j in 0..4 {
            let r = mu_leading(&md1, j).coeff / mu_leading(&md2, j).coeff;
            assert!((r - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn tau_values_double_well() {
        let md = morse_data(&double_well()).unwrap();
        // E_r/sqrt(45) e^{-9/(8 pi h)} then E_r/sqrt(75) e^{-25/(8 pi h)}
        let t0 = tau_leading(&md, 0).unwrap();
        assert!((t0.coeff.re - 1.0 / 45f64.sqrt()).abs() < 1e-12);
        assert!((t0.rate + 9.0 / (8.0 * PI)).abs() < 1e-12);
        let t1 = tau_leading(&md, 1).unwrap();
        assert!((t1.coeff.re - 1.0 / 75f64.sqrt()).abs() < 1e-12);
        assert!((t1.rate + 25.0 / (8.0 * PI)).abs() < 1e-12);
        assert_eq!((t0.e_deg, t0.h2_pow), (1, 0));
    }

    #[test]
    fn tau_symmetric_single_well() {
        // both cycles of sin(2 pi q)/(2 pi): coeff 1/2, rate -2/pi
        let md = morse_data(&single_well()).unwrap();
        for j in 0..2 {
            let t = tau_leading(&md, j).unwrap();
            assert!((t.coeff.re - 0.5).abs() < 1e-12, "j={j}");
            assert!((t.rate + 2.0 / PI).abs() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn tunneling_data_sector_invariants() {
        for f in [double_well(), single_well(), triple_well()] {
            let md = morse_data(&f).unwrap();
            let td = TunnelingData::from_morse(&md).unwrap();
            let mut rate_sum = 0.0;
            for j in 0..md.points.len() {
                let mu = &td.mu[j];
                assert_eq!(mu.e_deg, 1);
                assert_eq!(mu.rate, 0.0);
                assert!(mu.coeff.re.abs() < 1e-15 && mu.coeff.im > 0.0);
                let tau = &td.tau[j];
                assert_eq!(tau.e_deg, 1);
                assert!(tau.rate < 0.0);
                assert!(tau.coeff.im.abs() < 1e-15 && tau.coeff.re > 0.0);
                assert!((td.barrier_actions[j] + tau.rate).abs() < 1e-15);
                rate_sum += tau.rate;
            }
            // sum of tau rates = -2 * total variation of f over the period
            let total_variation: f64 = (0..md.points.len())
                .map(|j| (md.point(j + 1).value - md.point(j).value).abs())
                .sum();
            assert!((rate_sum + 2.0 * total_variation).abs() < 1e-10);
        }
    }

    #[test]
    fn connection_rate_matches_construction() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        for j in 0..4 {
            let eps = default_eps(&md, j);
            let c = connection_leading(&f, &md, j, eps).unwrap();
            let df = md.point(j).value - f.eval_real(md.point(j).q - eps);
            let want = if j % 2 == 0 { 2.0 * df } else { -2.0 * df };
            assert!((c.rate - want).abs() < 1e-14);
            if j % 2 == 0 {
                assert_eq!((c.e_deg, c.h2_pow), (0, -1));
            } else {
                assert_eq!((c.e_deg, c.h2_pow), (1, 1));
            }
        }
    }

    /// tau rebuilt from its constituent connection coefficients and the
    /// amplitude ratio between the two evaluation points.
    fn tau_from_connections(
        f: &TrigPoly,
        md: &MorseData,
        j: usize,
        eps1: f64,
        eps2: f64,
    ) -> TransTerm {
        let fp = f.differentiate();
        let len = md.points.len();
        let cprime;
        let c;
        if j % 2 == 0 {
            cprime = connection_leading(f, md, j, eps1).unwrap();
            c = connection_leading(f, md, j + 1, eps2).unwrap();
        } else {
            c = connection_leading(f, md, j, eps1).unwrap();
            cprime = connection_leading(f, md, j + 1, eps2).unwrap();
        }
        let q_here = md.points[j % len].q - eps1;
        let mut q_next = md.point(j + 1).q - eps2;
        if q_next < q_here {
            q_next += 1.0;
        }
        // amplitude ratio between the evaluation points: A^{-1} A' going
        // min -> max, its inverse A A'^{-1} going max -> min
        let (ratio_coeff, ratio_rate) = if j % 2 == 0 {
            (
                fp.eval_real(q_next) / fp.eval_real(q_here),
                -2.0 * (f.eval_real(q_next) - f.eval_real(q_here)),
            )
        } else {
            (
                fp.eval_real(q_here) / fp.eval_real(q_next),
                2.0 * (f.eval_real(q_next) - f.eval_real(q_here)),
            )
        };
        TransTerm::new(
            cprime.coeff * c.coeff * ratio_coeff,
            cprime.e_deg + c.e_deg,
            cprime.h2_pow + c.h2_pow,
            cprime.rate + c.rate + ratio_rate,
        )
    }

    #[test]
    fn tau_product_reproduces_tau_leading_and_eps_cancels() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        for j in 0..md.points.len() {
            let target = tau_leading(&md, j).unwrap();
            let eps_a = (default_eps(&md, j), default_eps(&md, j + 1));
            let built_a = tau_from_connections(&f, &md, j, eps_a.0, eps_a.1);
            let built_b = tau_from_connections(&f, &md, j, eps_a.0 / 2.0, eps_a.1 / 1.7);
            for built in [built_a, built_b] {
                assert_eq!(built.e_deg, 1, "j={j}");
                assert_eq!(built.h2_pow, 0, "j={j}");
                assert!((built.rate - target.rate).abs() < 1e-10, "j={j}");
                assert!(
                    (built.coeff - target.coeff).norm() < 1e-10 * target.coeff.norm(),
                    "j={j}: built {} target {}",
                    built.coeff,
                    target.coeff
                );
            }
            // numeric agreement at h = 0.1
            let h = 0.1;
            let e = Complex64::new(1.0, 0.0);
            let va = built_a.eval(e, h);
            let vt = target.eval(e, h);
            assert!((va - vt).norm() < 1e-10 * vt.norm(), "j={j}");
        }
    }

    #[test]
    fn gamma_connection_limits() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        let h = 0.05;
        let eps = default_eps(&md, 0);
        let lead = connection_leading(&f, &md, 0, eps).unwrap();
        let lead_val = lead.eval(Complex64::new(1.0, 0.0), h);
        for e_r in [0.0, 1e-3] {
            let g = gamma_connection(&f, &md, 0, Complex64::new(e_r, 0.0), h, eps).unwrap();
            let ratio = g / lead_val;
            assert!(
                (ratio - Complex64::new(1.0, 0.0)).norm() < 0.05,
                "E_r={e_r}: ratio {ratio}"
            );
        }
    }

    #[test]
    fn gamma_connection_pole_detected() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        let curv = md.point(0).curvature;
        // E_r chosen so the Gamma argument is exactly 0
        let e_r = Complex64::new(-2.0 * curv, 0.0);
        let r = gamma_connection(&f, &md, 0, e_r, 0.05, default_eps(&md, 0));
        assert!(matches!(r, Err(Error::GammaPole { .. })));
    }

    #[test]
    fn gamma_connection_h_dependence_is_logarithmic() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        let eps = default_eps(&md, 0);
        let p = md.point(0);
        let df = p.value - f.eval_real(p.q - eps);
        let e_r = Complex64::new(0.05, 0.0);
        let g = |h: f64| {
            let v = gamma_connection(&f, &md, 0, e_r, h, eps).unwrap();
            v.norm().ln() - 2.0 * df / h
        };
        // after removing the exponential part, the remainder is linear in ln h
        let d1 = g(0.05) - g(0.1);
        let d2 = g(0.025) - g(0.05);
        assert!((d1 - d2).abs() < 0.02 * d1.abs().max(d2.abs()), "{d1} vs {d2}");
        assert!(d1.abs() < std::f64::consts::LN_2);
    }

    #[test]
    fn sigma_integral_matches_closed_form() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        let energy = 1e-4;
        let eps = 0.05;
        let val = sigma_log_integral(&f, &md, 0, eps, energy).unwrap();
        let closed = sigma_log_closed_form(&f, &md, 0, eps, energy);
        let bound = 10.0 * energy * energy.ln().abs();
        assert!((val - closed).norm() < bound, "val {val} closed {closed}");
        assert!(val.im.abs() < PI + 0.1);
    }

    #[test]
    fn sigma_integral_maximum_branch() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        let energy = 1e-4;
        let eps = 0.05;
        let val = sigma_log_integral(&f, &md, 1, eps, energy).unwrap();
        let closed = sigma_log_closed_form(&f, &md, 1, eps, energy);
        let bound = 10.0 * energy * energy.ln().abs();
        assert!((val - closed).norm() < bound, "val {val} closed {closed}");
    }

    #[test]
    fn sigma_integral_node_doubling_stable() {
        let f = double_well();
        let md = morse_data(&f).unwrap();
        let a = sigma_log_integral_with_nodes(&f, &md, 0, 0.05, 1e-4, 2000).unwrap();
        let b = sigma_log_integral_with_nodes(&f, &md, 0, 0.05, 1e-4, 4000).unwrap();
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    }
}
