//! Two-variable integer Laurent polynomials `g(ξ, θ)`.
//!
//! These are the coefficients `g₀, g₁` of decompositions `f = g₁y + g₀`
//! with `gᵢ ∈ ℤ[x^{±1}, z^{±1}]`, evaluated on the 2-torus for variety
//! checks, cocycle scans and entropy integrands.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivarLaurent {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BivarLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), BigInt)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in iter {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn add_term(&mut self, xi_exp: i64, theta_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry((xi_exp, theta_exp))
            .or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(xi_exp, theta_exp));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    pub fn eval(&self, xi: Complex64, theta: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in self.terms() {
            acc += c.to_f64().unwrap_or(f64::NAN) * xi.powi(*a as i32) * theta.powi(*b as i32);
        }
        acc
    }

    /// Coefficients of `ξ ↦ g(ξ, θ)` as a dense ascending list together
    /// with the lowest ξ-exponent.
    pub fn eval_theta(&self, theta: Complex64) -> (i64, Vec<Complex64>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let lo = self.terms.keys().map(|(a, _)| *a).min().unwrap();
        let hi = self.terms.keys().map(|(a, _)| *a).max().unwrap();
        let mut dense = alloc::vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for ((a, b), c) in self.terms() {
            dense[(a - lo) as usize] +=
                c.to_f64().unwrap_or(f64::NAN) * theta.powi(*b as i32);
        }
        (lo, dense)
    }

    /// Chord-metric Lipschitz constant of `(ξ,θ) ↦ g(ξ,θ)` on the torus:
    /// `Σ |c|·(|d₁| + |d₂|)`.
    pub fn lipschitz(&self) -> f64 {
        self.terms
            .iter()
            .map(|((a, b), c)| {
                c.abs().to_f64().unwrap_or(f64::INFINITY) * ((a.abs() + b.abs()) as f64)
            })
            .sum()
    }

    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Monomial with coefficient 1 spans, for degree bookkeeping.
    pub fn exponent_box(&self) -> Option<((i64, i64), (i64, i64))> {
        if self.is_zero() {
            return None;
        }
        let a_lo = self.terms.keys().map(|(a, _)| *a).min().unwrap();
        let a_hi = self.terms.keys().map(|(a, _)| *a).max().unwrap();
        let b_lo = self.terms.keys().map(|(_, b)| *b).min().unwrap();
        let b_hi = self.terms.keys().map(|(_, b)| *b).max().unwrap();
        Some(((a_lo, a_hi), (b_lo, b_hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::big;

    #[test]
    fn eval_and_slices() {
        // g = 3 + ξ + θ
        let g = BivarLaurent::from_terms([
            ((0, 0), big(3)),
            ((1, 0), big(1)),
            ((0, 1), big(1)),
        ]);
        let v = g.eval(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        let (lo, dense) = g.eval_theta(Complex64::new(1.0, 0.0));
        assert_eq!(lo, 0);
        assert_eq!(dense.len(), 2);
        assert!((dense[0] - Complex64::new(4.0, 0.0)).norm() < 1e-15);
        assert_eq!(g.lipschitz(), 2.0);
    }
}
