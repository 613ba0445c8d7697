//! Mahler measure `m(p) = ∫ log|p(e^{2πit})| dt` of one-variable Laurent
//! polynomials, by Jensen's formula with a quadrature cross-check.
//!
//! Jensen: `m(p) = log|lead| + Σ_roots log max(1, |root|)`; roots with
//! modulus within `1e-8` of the circle contribute zero and flag the result,
//! in which case the quadrature value is the authoritative one.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::roots::polynomial_roots;

#[derive(Clone, Debug)]
pub struct MahlerResult {
    /// The adopted value (Jensen unless flagged, then quadrature).
    pub value: f64,
    pub jensen: f64,
    pub quadrature: f64,
    /// Set when roots hug the unit circle or the two routes disagree
    /// beyond 1e-6.
    pub low_confidence: bool,
    pub near_circle_roots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MahlerError {
    ZeroPolynomial,
    RootFindingFailed,
}

const CIRCLE_TOL: f64 = 1e-8;
const AGREE_TOL: f64 = 1e-6;

/// Trims leading/trailing zero coefficients of a Laurent coefficient list;
/// monomial factors `c·ξ^k` do not change the measure.
fn trim(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let first = coeffs.iter().position(|c| c.norm() > 0.0)?;
    let last = coeffs.iter().rposition(|c| c.norm() > 0.0)?;
    Some(coeffs[first..=last].to_vec())
}

/// Midpoint quadrature of `t ↦ log|p(e^{2πit})|` with doubling. Midpoint
/// nodes dodge the root-of-unity lattice where circle zeros sit; for such
/// integrable singularities the error is `O(1/n)` and one Richardson step
/// removes it, while analytic integrands converge spectrally anyway.
pub fn log_integral_quadrature(coeffs: &[Complex64]) -> f64 {
    let eval = |t: f64| -> f64 {
        let (s, c) = Float::sin_cos(core::f64::consts::TAU * t);
        let xi = Complex64::new(c, s);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * xi + c;
        }
        let m = acc.norm();
        if m < 1e-280 {
            // Integrable log singularity; clamp the sample.
            -644.0
        } else {
            Float::ln(m)
        }
    };
    let mut n = 64usize;
    let mut prev = f64::INFINITY;
    loop {
        let mut acc = 0.0;
        for i in 0..n {
            acc += eval((i as f64 + 0.5) / n as f64);
        }
        let value = acc / n as f64;
        if (value - prev).abs() < 1e-9 {
            return value;
        }
        if n >= 1 << 16 {
            // One Richardson step eats the O(1/n) tail from circle zeros.
            return 2.0 * value - prev;
        }
        prev = value;
        n *= 2;
    }
}

/// Mahler measure of the Laurent polynomial with the given ascending
/// coefficients (the lowest exponent is irrelevant).
pub fn mahler_measure(coeffs: &[Complex64]) -> Result<MahlerResult, MahlerError> {
    let poly = trim(coeffs).ok_or(MahlerError::ZeroPolynomial)?;
    let quadrature = log_integral_quadrature(&poly);
    if poly.len() == 1 {
        let jensen = Float::ln(poly[0].norm());
        return Ok(MahlerResult {
            value: jensen,
            jensen,
            quadrature,
            low_confidence: (jensen - quadrature).abs() > AGREE_TOL,
            near_circle_roots: 0,
        });
    }
    let roots = polynomial_roots(&poly);
    if !roots.converged {
        return Err(MahlerError::RootFindingFailed);
    }
    let mut jensen = Float::ln(poly.last().unwrap().norm());
    let mut near_circle = 0usize;
    for r in &roots.roots {
        let m = r.norm();
        if (m - 1.0).abs() < CIRCLE_TOL {
            near_circle += 1;
        } else if m > 1.0 {
            jensen += Float::ln(m);
        }
    }
    let disagree = (jensen - quadrature).abs() > AGREE_TOL;
    let low_confidence = near_circle > 0 || disagree;
    // The quadrature route is authoritative for flagged values.
    Ok(MahlerResult {
        value: if low_confidence { quadrature } else { jensen },
        jensen,
        quadrature,
        low_confidence,
        near_circle_roots: near_circle,
    })
}
