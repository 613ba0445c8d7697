//! Simultaneous polynomial root finding (Aberth–Ehrlich iteration).
//!
//! Degrees here stay small (≤ 20 or so), for which the simultaneous
//! iteration with circle-of-guesses initialisation is very robust; a few
//! perturbed restarts stand in for a companion-matrix fallback.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

#[derive(Clone, Debug)]
pub struct RootsResult {
    pub roots: Vec<Complex64>,
    pub converged: bool,
    pub iterations: u32,
}

const MAX_ITERS: u32 = 200;
const TOL: f64 = 1e-12;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn initial_guesses(coeffs: &[Complex64], attempt: u32) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree].norm();
    // Cauchy-style radius plus a mild attempt-dependent dilation.
    let mut radius: f64 = 0.0;
    for c in &coeffs[..degree] {
        radius = radius.max((c.norm() / lead).powf(1.0 / (degree as f64)));
    }
    let radius = (radius + 1.0) * (1.0 + 0.3 * attempt as f64);
    let offset = 0.37 + 0.17 * attempt as f64;
    (0..degree)
        .map(|k| {
            let angle = core::f64::consts::TAU * (k as f64 + offset) / degree as f64;
            let (s, c) = Float::sin_cos(angle);
            radius * Complex64::new(c, s)
        })
        .collect()
}

fn aberth_pass(coeffs: &[Complex64], guesses: &mut [Complex64]) -> (bool, u32) {
    let degree = guesses.len();
    for iter in 0..MAX_ITERS {
        let mut worst = 0.0f64;
        let snapshot: Vec<Complex64> = guesses.to_vec();
        for k in 0..degree {
            let z = snapshot[k];
            let (p, dp) = horner(coeffs, z);
            if !p.is_finite() || !dp.is_finite() {
                return (false, iter);
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(TOL, TOL)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &other) in snapshot.iter().enumerate() {
                if j != k {
                    let d = z - other;
                    if d.norm() > 0.0 {
                        repulsion += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let w = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            guesses[k] = z - w;
            worst = worst.max(w.norm() / (1.0 + z.norm()));
        }
        if worst < TOL {
            return (true, iter + 1);
        }
    }
    (false, MAX_ITERS)
}

/// All complex roots of `Σ coeffs[i]·x^i`.
///
/// Callers must pass a nonzero leading coefficient (trim first). Constant
/// polynomials yield an empty root list.
pub fn polynomial_roots(coeffs: &[Complex64]) -> RootsResult {
    assert!(!coeffs.is_empty(), "empty coefficient list");
    assert!(coeffs.last().unwrap().norm() > 0.0, "leading coefficient must be nonzero");
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return RootsResult {
            roots: Vec::new(),
            converged: true,
            iterations: 0,
        };
    }
    if degree == 1 {
        return RootsResult {
            roots: alloc::vec![-coeffs[0] / coeffs[1]],
            converged: true,
            iterations: 0,
        };
    }
    let mut total_iters = 0;
    for attempt in 0..3 {
        let mut guesses = initial_guesses(coeffs, attempt);
        let (ok, iters) = aberth_pass(coeffs, &mut guesses);
        total_iters += iters;
        if ok {
            // Deterministic order for downstream reports.
            guesses.sort_by(|a, b| {
                a.re.partial_cmp(&b.re)
                    .unwrap()
                    .then(a.im.partial_cmp(&b.im).unwrap())
            });
            return RootsResult {
                roots: guesses,
                converged: true,
                iterations: total_iters,
            };
        }
    }
    RootsResult {
        roots: Vec::new(),
        converged: false,
        iterations: total_iters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_and_quadratic() {
        let r = polynomial_roots(&[c(-2.0, 0.0), c(1.0, 0.0)]);
        assert!((r.roots[0] - c(2.0, 0.0)).norm() < 1e-12);

        // (x-1)(x-3) = 3 - 4x + x²
        let r = polynomial_roots(&[c(3.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)]);
        assert!(r.converged);
        assert!((r.roots[0] - c(1.0, 0.0)).norm() < 1e-9);
        assert!((r.roots[1] - c(3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn roots_of_unity() {
        // x⁸ - 1
        let mut coeffs = vec![c(0.0, 0.0); 9];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[8] = c(1.0, 0.0);
        let r = polynomial_roots(&coeffs);
        assert!(r.converged);
        for root in &r.roots {
            assert!((root.norm() - 1.0).abs() < 1e-9);
            assert!((root.powi(8) - c(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn clustered_roots_still_converge() {
        // (x - 1)³(x + 2) expanded: x⁴ - x³ - 5x² + 7x - 2... compute:
        // (x³ - 3x² + 3x - 1)(x + 2) = x⁴ - x³ - 3x² + 5x - 2
        let coeffs = vec![c(-2.0, 0.0), c(5.0, 0.0), c(-3.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        let r = polynomial_roots(&coeffs);
        assert!(r.converged);
        let near_one = r.roots.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 1e-3).count();
        assert_eq!(near_one, 3);
    }
}
