//! Polynomial root finding: Aberth-Ehrlich simultaneous iteration with
//! circle initial guesses at the Cauchy bound, followed by Newton polishing.
//! Degrees one and two use closed forms.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 200;
const CONVERGENCE: f64 = 1e-13;

/// All roots of `c[0] + c[1] x + ... + c[n] x^n`, leading coefficient nonzero.
/// Trailing zero coefficients must already be trimmed by the caller.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    assert!(n >= 1 && coeffs[n].norm() > 0.0, "nonconstant polynomial required");
    match n {
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => quadratic(coeffs[0], coeffs[1], coeffs[2]),
        _ => aberth(coeffs),
    }
}

fn quadratic(c: Complex64, b: Complex64, a: Complex64) -> Vec<Complex64> {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign avoiding cancellation in -b -/+ disc
    let s = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
    if s.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    let r1 = -s / (2.0 * a);
    let r2 = c / (a * r1);
    vec![r1, r2]
}

fn eval_with_deriv(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // Cauchy bound: all roots inside |x| <= 1 + max |c_k / c_n|
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0_f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.376;
            Complex64::from_polar(radius.min(1e6).max(1e-6), angle)
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let (p, dp) = eval_with_deriv(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-3, 0.0) };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < CONVERGENCE {
            break;
        }
    }
    // Newton polish locks each root to full precision
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_deriv(coeffs, *zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}
