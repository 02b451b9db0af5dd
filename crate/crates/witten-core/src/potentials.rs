//! Built-in example superpotentials.

use crate::trigpoly::TrigPoly;
use std::f64::consts::TAU;

/// Double well `f(q) = [sin 2 pi (q + 1/8) + cos 4 pi (q + 1/8)] / 2 pi`,
/// expanded in the standard cosine/sine basis. Minima at q = 1/8 and 5/8
/// with curvatures 6 pi and 10 pi; both maxima sit at height 9/(16 pi).
pub fn double_well() -> TrigPoly {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    TrigPoly::new(vec![0.0, s / TAU, 0.0], vec![s / TAU, -1.0 / TAU]).unwrap()
}

/// Single well `f(q) = sin(2 pi q) / 2 pi`: one minimum, one maximum, and no
/// nonzero exponentially small eigenvalue.
pub fn single_well() -> TrigPoly {
    TrigPoly::new(vec![0.0, 0.0], vec![1.0 / TAU]).unwrap()
}

/// An asymmetric triple well,
/// `f(q) = (3/2) [sin 2 pi q + cos 6 pi q + cos(4 pi q)/4] / 2 pi`:
/// three minima with pairwise distinct depths and barriers.
pub fn triple_well() -> TrigPoly {
    let s = 1.5 / TAU;
    TrigPoly::new(vec![0.0, 0.0, 0.25 * s, s], vec![s, 0.0, 0.0]).unwrap()
}
