//! Exact arithmetic in cyclotomic integer rings `ℤ[q]/Φ_m(q)`.
//!
//! Witness candidates at roots of unity are confirmed here instead of in
//! floating point: an expression vanishes iff its reduced representative is
//! the zero polynomial. Conjugation is the ring automorphism `q ↦ q^{m-1}`…
//! i.e. `q^j ↦ q^{(m-j) mod m}`, so `|u|² = u·ū` is again exact.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::laurent::LaurentPoly;

/// The m-th cyclotomic polynomial as dense ascending coefficients, by
/// repeated exact division of `q^m - 1` by the `Φ_d` for proper divisors.
pub fn cyclotomic_poly(m: u32) -> LaurentPoly {
    let mut num = LaurentPoly::one_minus_q_pow(m as i64).neg(); // q^m - 1
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = num.div_exact(&phi_d).expect("cyclotomic division is exact");
        }
    }
    num
}

/// An element of `ℤ[q]/Φ_m(q)`, reduced to degree < φ(m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    pub m: u32,
    coeffs: Vec<BigInt>,
    modulus: LaurentPoly,
}

impl Cyclotomic {
    pub fn zero(m: u32) -> Self {
        let modulus = cyclotomic_poly(m);
        let deg = modulus.max_exp().unwrap() as usize;
        Cyclotomic {
            m,
            coeffs: vec![BigInt::zero(); deg],
            modulus,
        }
    }

    pub fn from_int(m: u32, v: BigInt) -> Self {
        let mut out = Self::zero(m);
        out.add_power(0, v);
        out
    }

    /// The root `q^j` (j taken mod m).
    pub fn root_power(m: u32, j: i64) -> Self {
        let mut out = Self::zero(m);
        out.add_power(j, BigInt::one());
        out
    }

    fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `c·q^j`, reducing `q^m = 1` first and then the modulus.
    pub fn add_power(&mut self, j: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let j = j.rem_euclid(self.m as i64) as usize;
        if j < self.degree() {
            self.coeffs[j] += c;
            return;
        }
        // Reduce q^j mod Φ_m by long division on a scratch vector.
        let mut scratch = vec![BigInt::zero(); j + 1];
        scratch[j] = c;
        self.reduce_dense(&mut scratch);
        for (i, v) in scratch.into_iter().enumerate().take(self.degree()) {
            self.coeffs[i] += v;
        }
    }

    fn reduce_dense(&self, scratch: &mut Vec<BigInt>) {
        let deg = self.degree();
        let modulus = self.modulus.dense();
        // Φ_m is monic, so the division is over ℤ.
        let mut i = scratch.len();
        while i > deg {
            i -= 1;
            if scratch[i].is_zero() {
                continue;
            }
            let lead = core::mem::replace(&mut scratch[i], BigInt::zero());
            for (k, mk) in modulus.iter().enumerate().take(deg) {
                let delta = &lead * mk;
                scratch[i - deg + k] -= delta;
            }
        }
        scratch.truncate(deg);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic orders");
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic orders");
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic orders");
        let deg = self.degree();
        let mut scratch = vec![BigInt::zero(); 2 * deg.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                scratch[i + j] += a * b;
            }
        }
        self.reduce_dense(&mut scratch);
        Cyclotomic {
            m: self.m,
            coeffs: scratch,
            modulus: self.modulus.clone(),
        }
    }

    /// Complex conjugation `q^j ↦ q^{m-j}`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.m);
        out.modulus = self.modulus.clone();
        for (j, c) in self.coeffs.iter().enumerate() {
            out.add_power(-(j as i64), c.clone());
        }
        out
    }

    /// `u·ū`, the exact squared modulus (a real cyclotomic integer).
    pub fn abs_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Numeric image at `q = e^{2πi/m}` for diagnostics.
    pub fn to_c64(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let angle = core::f64::consts::TAU * (j as f64) / (self.m as f64);
            let (s, cth) = num_traits::Float::sin_cos(angle);
            acc += c.to_f64().unwrap_or(f64::NAN) * num_complex::Complex64::new(cth, s);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::big;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(
            cyclotomic_poly(1),
            LaurentPoly::from_terms([(0, big(-1)), (1, big(1))])
        );
        assert_eq!(
            cyclotomic_poly(4),
            LaurentPoly::from_terms([(0, big(1)), (2, big(1))])
        );
        // Φ₁₂ = q⁴ - q² + 1
        assert_eq!(
            cyclotomic_poly(12),
            LaurentPoly::from_terms([(0, big(1)), (2, big(-1)), (4, big(1))])
        );
    }

    #[test]
    fn primitive_root_relations() {
        // ζ₁₂² + ζ₁₂¹⁰ = 1, the identity behind |1-ζ₁₂²| = 1.
        let a = Cyclotomic::root_power(12, 2);
        let b = Cyclotomic::root_power(12, 10);
        let sum = a.add(&b);
        assert_eq!(sum, Cyclotomic::from_int(12, big(1)));

        // |1 - ζ²|² = 1 exactly.
        let one = Cyclotomic::from_int(12, big(1));
        let u = one.sub(&Cyclotomic::root_power(12, 2));
        assert_eq!(u.abs_squared(), one);
    }

    #[test]
    fn conjugation_is_involutive() {
        let mut u = Cyclotomic::root_power(7, 3);
        u = u.add(&Cyclotomic::from_int(7, big(4)));
        assert_eq!(u.conj().conj(), u);
        assert!(u.sub(&u).is_zero());
    }

    #[test]
    fn numeric_image_agrees() {
        let u = Cyclotomic::root_power(5, 1).add(&Cyclotomic::root_power(5, 4));
        let v = u.to_c64();
        let expect = 2.0 * num_traits::Float::cos(core::f64::consts::TAU / 5.0);
        assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
    }
}
