//! The twisted (rotation-algebra) quotients of `ℓ¹(ℍ, ℂ)`.
//!
//! Evaluating the central variable at a unimodular `θ` sends the group
//! algebra onto a twisted convolution algebra over `ℤ²`; the projection is
//! an algebra homomorphism, so the twisted ℓ¹ norm of the image is an upper
//! bound for the quotient norm. Multiplication picks up the phase
//! `θ^{-a'b}` from `x^k y^l = y^l x^k z^{kl}`.

use alloc::collections::BTreeMap;
use core::fmt;

use num_complex::Complex64;

use crate::coeff::Coeff;
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedElement {
    pub theta: Complex64,
    terms: BTreeMap<(i64, i64), Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TwistedError {
    NotUnitModulus(f64),
    ThetaMismatch,
}

impl fmt::Display for TwistedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistedError::NotUnitModulus(m) => write!(f, "theta has modulus {}, not 1", m),
            TwistedError::ThetaMismatch => write!(f, "operands live at different theta"),
        }
    }
}

const UNIT_TOL: f64 = 1e-12;
const DROP_TOL: f64 = 0.0; // exact zero only; cancellation is meaningful

impl TwistedElement {
    pub fn zero(theta: Complex64) -> Self {
        TwistedElement {
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i64, l: i64) -> Complex64 {
        self.terms
            .get(&(k, l))
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, k: i64, l: i64, c: Complex64) {
        if c.norm() <= DROP_TOL {
            return;
        }
        let e = self.terms.entry((k, l)).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if e.re == 0.0 && e.im == 0.0 {
            self.terms.remove(&(k, l));
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, TwistedError> {
        if self.theta != rhs.theta {
            return Err(TwistedError::ThetaMismatch);
        }
        let mut out = self.clone();
        for ((k, l), c) in rhs.terms() {
            out.add_term(*k, *l, *c);
        }
        Ok(out)
    }

    /// Twisted convolution: `(x^k y^l)(x^{k'} y^{l'}) = θ^{-k'l} x^{k+k'} y^{l+l'}`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, TwistedError> {
        if self.theta != rhs.theta {
            return Err(TwistedError::ThetaMismatch);
        }
        let mut out = Self::zero(self.theta);
        for ((k, l), c) in self.terms() {
            for ((k2, l2), c2) in rhs.terms() {
                let phase = self.theta.powi((-(k2 * l)) as i32);
                out.add_term(k + k2, l + l2, c * c2 * phase);
            }
        }
        Ok(out)
    }

    /// Adjoint in the twisted algebra: the image of the group-ring adjoint.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.theta);
        for ((k, l), c) in self.terms() {
            // (x^k y^l z^m)* = z^{-m} y^{-l} x^{-k} = x^{-k} y^{-l} z^{-m-kl}
            let phase = self.theta.powi((-(k * l)) as i32);
            out.add_term(-k, -l, c.conj() * phase);
        }
        out
    }
}

/// Projects a group-ring element to the twisted algebra at `θ`:
/// the `(k,l)` coefficient is `Σ_m f_{(k,l,m)} θ^m`.
pub fn project<C: Coeff>(
    f: &RingElement<C>,
    theta: Complex64,
) -> Result<TwistedElement, TwistedError> {
    let modulus = theta.norm();
    if (modulus - 1.0).abs() > UNIT_TOL {
        return Err(TwistedError::NotUnitModulus(modulus));
    }
    let mut out = TwistedElement::zero(theta);
    for (g, c) in f.terms() {
        out.add_term(g.a, g.b, c.to_c64() * theta.powi(g.c as i32));
    }
    Ok(out)
}

/// Unimodular grid point `e^{2πi·idx/size}`.
pub fn unit_circle_point(idx: u32, size: u32) -> Complex64 {
    let angle = core::f64::consts::TAU * (idx as f64) / (size as f64);
    let (s, c) = num_traits::Float::sin_cos(angle);
    Complex64::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement as G;
    use crate::parse::parse_poly;
    use crate::ring::IntElement;

    fn minus_one() -> Complex64 {
        Complex64::new(-1.0, 0.0)
    }

    #[test]
    fn projection_collapses_relation() {
        // 3 + xy + yx + z at θ = -1 is the constant 2.
        let f = parse_poly("3 + x*y + y*x + z").unwrap();
        let t = project(&f, minus_one()).unwrap();
        assert_eq!(t.support_len(), 1);
        assert_eq!(t.coeff(0, 0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn abelianization_at_one() {
        let f = parse_poly("x*y - y*x").unwrap();
        let t = project(&f, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(t.support_len(), 0);
    }

    #[test]
    fn twisted_square_of_x_plus_y() {
        let f = parse_poly("x + y").unwrap();
        let sq = parse_poly("x + y").unwrap().mul(&f);
        let t = project(&sq, minus_one()).unwrap();
        assert_eq!(t.coeff(2, 0), Complex64::new(1.0, 0.0));
        assert_eq!(t.coeff(0, 2), Complex64::new(1.0, 0.0));
        assert_eq!(t.coeff(1, 1), Complex64::new(0.0, 0.0));
        assert_eq!(t.l1_norm(), 2.0);
        // And the same through twisted multiplication directly.
        let tf = project(&f, minus_one()).unwrap();
        let tsq = tf.mul(&tf).unwrap();
        assert_eq!(tsq, t);
    }

    #[test]
    fn rejects_bad_theta() {
        let f = IntElement::one();
        assert!(project(&f, Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn projection_is_homomorphism_spot() {
        let f = parse_poly("2 + x - y*z").unwrap();
        let g = parse_poly("x^-1 + 3*y + z^2").unwrap();
        let theta = unit_circle_point(3, 7);
        let lhs = project(&f.mul(&g), theta).unwrap();
        let rhs = project(&f, theta)
            .unwrap()
            .mul(&project(&g, theta).unwrap())
            .unwrap();
        for ((k, l), c) in lhs.terms() {
            assert!((c - rhs.coeff(*k, *l)).norm() < 1e-12);
        }
        assert!((lhs.l1_norm() - rhs.l1_norm()).abs() < 1e-12);
    }

    #[test]
    fn involution_matches_group_adjoint() {
        let f = parse_poly("2 + 3*x*y^-2 - z*x").unwrap();
        let theta = unit_circle_point(5, 12);
        let a = project(&f.involution(), theta).unwrap();
        let b = project(&f, theta).unwrap().involution();
        for ((k, l), c) in a.terms() {
            assert!((c - b.coeff(*k, *l)).norm() < 1e-12, "at ({}, {})", k, l);
        }
        let _ = G::IDENTITY;
    }
}
