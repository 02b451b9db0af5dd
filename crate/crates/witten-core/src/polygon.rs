//! Newton polygon of a transseries equation and the exponential-correction
//! solver.
//!
//! Plot each term `E^j exp(k/h)` at `(j, k)` together with a quadrant opening
//! down and to the right; the upper boundary of the convex hull carries the
//! information. Each positive-slope edge yields an ordinary polynomial whose
//! simple nonzero roots are the leading amplitudes of exponentially small
//! solutions; substituting `E = e^{-k/h}(r + E')` and repeating produces the
//! stack of deeper exponential corrections.

use crate::roots::poly_roots;
use crate::transseries::{TransSeries, TransTerm, RATE_TOL};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Roots closer than this (relative to the root scale) count as a cluster,
/// violating the nondegeneracy requirement.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;
/// An emergent correction rate should lie on the lattice generated by the
/// input rates; report a warning when it misses by more than this.
pub const LATTICE_TOL: f64 = 1e-6;

/// One support point `(e_deg, rate)` with its minimal-h-power coefficient.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SupportPoint {
    pub e_deg: i32,
    pub rate: f64,
    pub coeff: Complex64,
    pub h2_pow: i32,
}

/// An edge of the upper hull, from lower to higher degree.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Edge {
    pub slope: f64,
    /// Index into `points` of the left vertex.
    pub from: usize,
    /// Index into `points` of the right vertex.
    pub to: usize,
}

/// Support points, upper hull and edge list of a transseries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub points: Vec<SupportPoint>,
    /// Indices of hull vertices, left to right; slopes strictly decrease.
    pub hull: Vec<usize>,
    pub edges: Vec<Edge>,
    /// True when higher-h-power companions were present and ignored.
    pub ignored_h_companions: bool,
}

impl NewtonPolygon {
    pub fn positive_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.slope > 0.0)
    }
}

/// Build the support, upper hull and edges. All degrees must be >= 0
/// (run `clear_denominators` first).
pub fn build_polygon(ts: &TransSeries) -> Result<NewtonPolygon> {
    if ts.is_zero() {
        return Err(Error::EmptySeries);
    }
    let (reps, ignored) = ts.support();
    let points: Vec<SupportPoint> = reps
        .iter()
        .map(|t| SupportPoint { e_deg: t.e_deg, rate: t.rate, coeff: t.coeff, h2_pow: t.h2_pow })
        .collect();

    // candidate vertices: the max-rate point per degree, ascending in degree
    let mut tops: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match tops.last() {
            Some(&j) if points[j].e_deg == p.e_deg => {
                if p.rate > points[j].rate {
                    *tops.last_mut().unwrap() = i;
                }
            }
            _ => tops.push(i),
        }
    }
    // monotone-chain upper hull with strictly decreasing slopes
    let mut hull: Vec<usize> = Vec::new();
    for &i in &tops {
        while hull.len() >= 2 {
            let a = &points[hull[hull.len() - 2]];
            let b = &points[hull[hull.len() - 1]];
            let c = &points[i];
            // slope(a, b) <= slope(b, c) means b is not a vertex
            let lhs = (b.rate - a.rate) * (c.e_deg - b.e_deg) as f64;
            let rhs = (c.rate - b.rate) * (b.e_deg - a.e_deg) as f64;
            if lhs <= rhs + RATE_TOL * (1.0 + lhs.abs().max(rhs.abs())) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let edges = hull
        .windows(2)
        .map(|w| {
            let a = &points[w[0]];
            let b = &points[w[1]];
            Edge {
                slope: (b.rate - a.rate) / (b.e_deg - a.e_deg) as f64,
                from: w[0],
                to: w[1],
            }
        })
        .collect();
    Ok(NewtonPolygon { points, hull, edges, ignored_h_companions: ignored })
}

/// Leading amplitudes on one positive-slope edge: shear by the slope,
/// collect the minimal-h-power coefficients on the resulting top horizontal
/// line, and return the simple nonzero roots of that polynomial, paired with
/// the slope.
pub fn solve_edge(ts: &TransSeries, edge: &Edge, polygon: &NewtonPolygon) -> Result<Vec<(f64, Complex64)>> {
    let k = edge.slope;
    let left = &polygon.points[edge.from];
    let intercept = left.rate - k * left.e_deg as f64;
    let coeffs = edge_coefficients(ts, k, intercept);
    edge_roots(&coeffs, k)
}

/// Minimal-h-power coefficient per degree on the line `rate = k*deg + b`,
/// as a dense ascending-degree list starting at the lowest on-line degree.
fn edge_coefficients(ts: &TransSeries, k: f64, intercept: f64) -> Vec<Complex64> {
    let (reps, _) = ts.support();
    let mut on_line: Vec<&TransTerm> = reps
        .iter()
        .filter(|t| {
            let line_rate = k * t.e_deg as f64 + intercept;
            (t.rate - line_rate).abs() <= RATE_TOL * (1.0 + t.rate.abs().max(line_rate.abs()))
        })
        .collect();
    on_line.sort_by_key(|t| t.e_deg);
    let lo = on_line.first().map(|t| t.e_deg).unwrap_or(0);
    let hi = on_line.last().map(|t| t.e_deg).unwrap_or(0);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for t in on_line {
        coeffs[(t.e_deg - lo) as usize] = t.coeff;
    }
    coeffs
}

fn edge_roots(coeffs: &[Complex64], k: f64) -> Result<Vec<(f64, Complex64)>> {
    // strip the E^lo prefactor (nonzero roots only) and trailing zeros
    let mut c = coeffs.to_vec();
    while c.first().is_some_and(|x| x.norm() == 0.0) {
        c.remove(0);
    }
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    if c.len() < 2 {
        return Ok(vec![]);
    }
    let roots = poly_roots(&c);
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if (roots[i] - roots[j]).norm() < ROOT_CLUSTER_TOL * scale {
                return Err(Error::DegenerateEdge { slope: k, tolerance: ROOT_CLUSTER_TOL });
            }
        }
    }
    let mut out: Vec<(f64, Complex64)> =
        roots.into_iter().filter(|r| r.norm() > ROOT_CLUSTER_TOL * scale).map(|r| (k, r)).collect();
    out.sort_by(|a, b| {
        a.1.re.partial_cmp(&b.1.re).unwrap().then(a.1.im.partial_cmp(&b.1.im).unwrap())
    });
    Ok(out)
}

/// A solution `E = sum_i coeff_i exp(-rate_i / h) (1 + ...)` truncated at
/// finitely many exponential levels with strictly increasing rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransSolution {
    /// `(cumulative rate > 0, amplitude)` per level.
    pub levels: Vec<(f64, Complex64)>,
    /// True when the degree-0 block vanished identically, so the stack is
    /// exact rather than truncated.
    pub exact_termination: bool,
    pub warnings: Vec<String>,
}

impl TransSolution {
    /// Numeric value of the truncation at a given `h`.
    pub fn eval(&self, h: f64) -> Complex64 {
        self.levels.iter().map(|(k, r)| r * (-k / h).exp()).sum()
    }
}

/// All exponentially small solutions of `ts = 0`, each refined to at most
/// `depth` exponential levels. `ts` must have nonnegative degrees.
pub fn solve(ts: &TransSeries, depth: usize) -> Result<Vec<TransSolution>> {
    assert!(depth >= 1, "depth must be at least 1");
    let polygon = build_polygon(ts)?;
    let input_rates: Vec<f64> = polygon.points.iter().map(|p| p.rate).collect();
    let mut solutions = Vec::new();
    for edge in polygon.positive_edges() {
        for (k, r) in solve_edge(ts, edge, &polygon)? {
            solutions.push(refine_solution(ts, k, r, depth, &input_rates)?);
        }
    }
    solutions.sort_by(|a, b| {
        let (ka, ra) = a.levels[0];
        let (kb, rb) = b.levels[0];
        ka.partial_cmp(&kb)
            .unwrap()
            .then(ra.re.partial_cmp(&rb.re).unwrap())
            .then(ra.im.partial_cmp(&rb.im).unwrap())
    });
    Ok(solutions)
}

/// Iterate the ansatz `E = e^{-k/h}(r + E')` to collect deeper corrections.
fn refine_solution(
    ts: &TransSeries,
    k1: f64,
    r1: Complex64,
    depth: usize,
    input_rates: &[f64],
) -> Result<TransSolution> {
    let mut levels = vec![(k1, r1)];
    let mut warnings = Vec::new();
    let mut cur = ts.shear_substitute(k1).shift_substitute(r1)?;
    let mut exact = false;

    while levels.len() < depth {
        let (reps, _) = cur.support();
        // Degree-0 residual at leading order in h: companions carrying a
        // higher h-power than the block minimum are h-corrections of the
        // amplitudes, not new exponential levels.
        let deg0: Vec<&TransTerm> = reps.iter().filter(|t| t.e_deg == 0).collect();
        if deg0.is_empty() {
            exact = true;
            break;
        }
        let min_h2 = deg0.iter().map(|t| t.h2_pow).min().unwrap();
        let block: Vec<&&TransTerm> = deg0.iter().filter(|t| t.h2_pow == min_h2).collect();
        if deg0.len() > block.len() {
            warnings.push("degree-0 residual carries higher h-power companions".into());
        }
        let top0 = block
            .iter()
            .max_by(|a, b| a.rate.partial_cmp(&b.rate).unwrap())
            .unwrap();
        // the degree-1 coefficient is invertible after a simple-root shift:
        // its top rate is 0
        let lead1 = reps
            .iter()
            .filter(|t| t.e_deg == 1)
            .max_by(|a, b| a.rate.partial_cmp(&b.rate).unwrap())
            .ok_or(Error::NoProgress { level: levels.len() })?;
        let k_next = lead1.rate - top0.rate;
        if k_next <= 0.0 {
            return Err(Error::NoProgress { level: levels.len() });
        }
        if !on_rate_lattice(k_next, input_rates) {
            warnings.push(format!(
                "correction rate {k_next:.12e} is not within {LATTICE_TOL:.0e} of the lattice generated by the input rates"
            ));
        }
        let r_next = -top0.coeff / lead1.coeff;
        let k_cum = levels.last().unwrap().0 + k_next;
        levels.push((k_cum, r_next));
        cur = cur.shear_substitute(k_next).shift_substitute(r_next)?;
    }
    if !exact {
        // a depth-limited stack may still terminate exactly at the boundary
        let (reps, _) = cur.support();
        exact = !reps.iter().any(|t| t.e_deg == 0);
    }
    Ok(TransSolution { levels, exact_termination: exact, warnings })
}

/// Is `rate` within tolerance of a small nonnegative integer combination of
/// the pairwise differences of the input rates?
fn on_rate_lattice(rate: f64, input_rates: &[f64]) -> bool {
    let mut diffs: Vec<f64> = Vec::new();
    for (i, &a) in input_rates.iter().enumerate() {
        for &b in &input_rates[i + 1..] {
            let d = (a - b).abs();
            if d > LATTICE_TOL {
                diffs.push(d);
            }
        }
    }
    let close = |x: f64| (x - rate).abs() <= LATTICE_TOL * (1.0 + rate.abs());
    if diffs.iter().any(|&d| close(d)) {
        return true;
    }
    for (i, &a) in diffs.iter().enumerate() {
        for &b in &diffs[i..] {
            if close(a + b) {
                return true;
            }
        }
    }
    false
}
