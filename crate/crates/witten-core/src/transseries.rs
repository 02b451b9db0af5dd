//! Finite exponential-polynomial symbols.
//!
//! A term is `coeff * E^e * h^{h2/2} * exp(rate / h)`; a series is a finite
//! canonical sum of such terms. This algebra carries the tunneling-cycle
//! monodromies, the transfer-matrix entries, and the quantization condition.
//! Powers of `h` are tracked as half-integers because turning-point
//! connection coefficients come with `h^{+-1/2}` factors. Logarithms of `h`
//! are not representable; everything downstream works at leading order in
//! `h` per exponential level.

use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative tolerance for identifying two exponential rates.
pub const RATE_TOL: f64 = 1e-9;
/// Coefficients below this fraction of the largest one are dropped.
pub const COEFF_DROP: f64 = 1e-14;

/// One exponential-polynomial term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "TermRepr", into = "TermRepr")]
pub struct TransTerm {
    pub coeff: Complex64,
    /// Power of E (may be negative).
    pub e_deg: i32,
    /// Twice the power of h.
    pub h2_pow: i32,
    /// Exponent c in `exp(c / h)`; negative means exponentially small.
    pub rate: f64,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    re: f64,
    im: f64,
    e: i32,
    h2: i32,
    rate: f64,
}

impl From<TermRepr> for TransTerm {
    fn from(r: TermRepr) -> Self {
        TransTerm { coeff: Complex64::new(r.re, r.im), e_deg: r.e, h2_pow: r.h2, rate: r.rate }
    }
}

impl From<TransTerm> for TermRepr {
    fn from(t: TransTerm) -> Self {
        TermRepr { re: t.coeff.re, im: t.coeff.im, e: t.e_deg, h2: t.h2_pow, rate: t.rate }
    }
}

impl TransTerm {
    pub fn new(coeff: Complex64, e_deg: i32, h2_pow: i32, rate: f64) -> Self {
        Self { coeff, e_deg, h2_pow, rate }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Complex64::new(c, 0.0), 0, 0, 0.0)
    }

    pub fn is_exponentially_small(&self) -> bool {
        self.rate < 0.0
    }

    /// Multiplicative inverse of a single term.
    pub fn inverse(&self) -> Self {
        Self::new(1.0 / self.coeff, -self.e_deg, -self.h2_pow, -self.rate)
    }

    pub fn eval(&self, e: Complex64, h: f64) -> Complex64 {
        self.coeff
            * e.powi(self.e_deg)
            * h.powf(self.h2_pow as f64 / 2.0)
            * (self.rate / h).exp()
    }
}

fn rates_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= RATE_TOL * (1.0 + a.abs().max(b.abs()))
}

/// A canonical finite sum of [`TransTerm`]s: like terms merged, negligible
/// coefficients dropped, ordered by (e_deg asc, rate desc, h2_pow asc).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TransSeries {
    terms: Vec<TransTerm>,
}

impl TransSeries {
    pub fn zero() -> Self {
        Self { terms: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(vec![TransTerm::constant(c)])
    }

    pub fn from_term(t: TransTerm) -> Self {
        Self::from_terms(vec![t])
    }

    pub fn from_terms(terms: Vec<TransTerm>) -> Self {
        let mut s = Self { terms };
        s.canonicalize();
        s
    }

    pub fn terms(&self) -> &[TransTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_e_deg(&self) -> Option<i32> {
        self.terms.iter().map(|t| t.e_deg).min()
    }

    pub fn max_e_deg(&self) -> Option<i32> {
        self.terms.iter().map(|t| t.e_deg).max()
    }

    fn canonicalize(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        // group by (e_deg, h2_pow), then merge rates within tolerance;
        // the surviving rate is taken from the largest coefficient in a group
        self.terms.sort_by(|a, b| {
            (a.e_deg, a.h2_pow)
                .cmp(&(b.e_deg, b.h2_pow))
                .then(a.rate.partial_cmp(&b.rate).unwrap())
        });
        let mut merged: Vec<TransTerm> = Vec::with_capacity(self.terms.len());
        for &t in &self.terms {
            match merged.last_mut() {
                Some(last)
                    if last.e_deg == t.e_deg
                        && last.h2_pow == t.h2_pow
                        && rates_match(last.rate, t.rate) =>
                {
                    if t.coeff.norm() > last.coeff.norm() {
                        last.rate = t.rate;
                    }
                    last.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        let max_coeff = merged.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
        merged.retain(|t| t.coeff.norm() > COEFF_DROP * max_coeff && t.coeff.norm() > 0.0);
        merged.sort_by(|a, b| {
            a.e_deg
                .cmp(&b.e_deg)
                .then(b.rate.partial_cmp(&a.rate).unwrap())
                .then(a.h2_pow.cmp(&b.h2_pow))
        });
        self.terms = merged;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_terms(terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(TransTerm::new(
                    a.coeff * b.coeff,
                    a.e_deg + b.e_deg,
                    a.h2_pow + b.h2_pow,
                    a.rate + b.rate,
                ));
            }
        }
        Self::from_terms(terms)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| TransTerm::new(t.coeff * c, t.e_deg, t.h2_pow, t.rate))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Shift every degree by `d` (multiplication by `E^d`).
    pub fn shift_degree(&self, d: i32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| TransTerm::new(t.coeff, t.e_deg + d, t.h2_pow, t.rate))
                .collect(),
        )
    }

    /// Numeric value at `E = e`, `h = h` (termwise evaluation).
    pub fn eval(&self, e: Complex64, h: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(e, h)).sum()
    }

    /// Largest `|term|` at `E = e`, `h = h`; the natural scale for residuals.
    pub fn max_term_magnitude(&self, e: Complex64, h: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(e, h).norm()).fold(0.0, f64::max)
    }

    /// Support points `(e_deg, rate)` with the minimal-h2 representative per
    /// point; companions at higher h-power are reported in the flag.
    pub fn support(&self) -> (Vec<TransTerm>, bool) {
        let mut reps: Vec<TransTerm> = Vec::new();
        let mut ignored_companion = false;
        for &t in &self.terms {
            match reps
                .iter_mut()
                .find(|r| r.e_deg == t.e_deg && rates_match(r.rate, t.rate))
            {
                Some(r) => {
                    ignored_companion = true;
                    if t.h2_pow < r.h2_pow {
                        *r = t;
                    }
                }
                None => reps.push(t),
            }
        }
        reps.sort_by(|a, b| {
            a.e_deg.cmp(&b.e_deg).then(b.rate.partial_cmp(&a.rate).unwrap())
        });
        (reps, ignored_companion)
    }

    /// The term at the right end of the rightmost positive-slope edge of the
    /// Newton polygon: equivalently the minimal-degree support point among
    /// those of maximal rate, with ties broken by minimal h-power.
    pub fn leading_term(&self) -> Result<TransTerm> {
        let (reps, _) = self.support();
        reps.iter()
            .max_by(|a, b| {
                a.rate
                    .partial_cmp(&b.rate)
                    .unwrap()
                    .then(b.e_deg.cmp(&a.e_deg))
            })
            .copied()
            .ok_or(Error::EmptySeries)
    }

    /// Multiply by `E^{-min_deg} exp(-max_rate_at_min_deg / h)` so that all
    /// degrees are nonnegative; identity when degrees are already so.
    /// Returns the cleared series and the shift applied.
    pub fn clear_denominators(&self) -> (Self, TransTerm) {
        let identity = TransTerm::constant(1.0);
        let min_deg = match self.min_e_deg() {
            Some(d) if d < 0 => d,
            _ => return (self.clone(), identity),
        };
        let max_rate = self
            .terms
            .iter()
            .filter(|t| t.e_deg == min_deg)
            .map(|t| t.rate)
            .fold(f64::NEG_INFINITY, f64::max);
        let shift = TransTerm::new(Complex64::new(1.0, 0.0), -min_deg, 0, -max_rate);
        let shifted = self.mul(&Self::from_term(shift));
        (shifted, shift)
    }

    /// Substitution `E -> e^{-k/h} E`: every rate drops by `k * e_deg`.
    pub fn shear_substitute(&self, k: f64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| TransTerm::new(t.coeff, t.e_deg, t.h2_pow, t.rate - k * t.e_deg as f64))
                .collect(),
        )
    }

    /// Substitution `E -> r + E`, binomially expanded; requires all degrees
    /// nonnegative.
    pub fn shift_substitute(&self, r: Complex64) -> Result<Self> {
        if let Some(d) = self.min_e_deg() {
            if d < 0 {
                return Err(Error::NegativeDegree { degree: d });
            }
        }
        let mut out = Vec::new();
        for t in &self.terms {
            let n = t.e_deg;
            // (r + E)^n = sum_m C(n, m) r^{n-m} E^m
            let mut binom = 1.0_f64;
            for m in 0..=n {
                let factor = binom * r.powi(n - m);
                if factor.norm() > 0.0 {
                    out.push(TransTerm::new(t.coeff * factor, m, t.h2_pow, t.rate));
                }
                binom *= (n - m) as f64 / (m + 1) as f64;
            }
        }
        Ok(Self::from_terms(out))
    }
}
