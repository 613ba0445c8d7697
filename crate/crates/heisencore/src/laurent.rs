//! One-variable exact-integer Laurent polynomials.
//!
//! These carry the central elements of the group ring and the whole
//! q-binomial apparatus. Division is ascending-degree long division with an
//! exactness check; nothing here ever touches floating point.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::from(1))
    }

    pub fn monomial(exp: i64, coeff: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    /// `1 - q^p`.
    pub fn one_minus_q_pow(p: i64) -> Self {
        let mut out = Self::one();
        out.add_term(p, BigInt::from(-1));
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    /// Dense ascending coefficients starting at degree `lo`.
    pub fn from_dense(lo: i64, dense: Vec<BigInt>) -> Self {
        Self::from_terms(dense.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Exact division; `None` when `rhs` does not divide `self`.
    ///
    /// Both operands are shifted to honest polynomials first, then divided
    /// by ascending-degree long division with a final remainder check.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let a_lo = self.min_exp().unwrap();
        let b_lo = rhs.min_exp().unwrap();
        let a_deg = (self.max_exp().unwrap() - a_lo) as usize;
        let b_deg = (rhs.max_exp().unwrap() - b_lo) as usize;
        if b_deg > a_deg {
            return None;
        }
        let mut a: Vec<BigInt> = (0..=a_deg as i64).map(|i| self.coeff(a_lo + i)).collect();
        let b: Vec<BigInt> = (0..=b_deg as i64).map(|i| rhs.coeff(b_lo + i)).collect();
        let b0 = &b[0];
        let q_deg = a_deg - b_deg;
        let mut q: Vec<BigInt> = vec![BigInt::zero(); q_deg + 1];
        for i in 0..=q_deg {
            if a[i].is_zero() {
                continue;
            }
            let (quot, rem) = num_integer::Integer::div_rem(&a[i], b0);
            if !rem.is_zero() {
                return None;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = &quot * bj;
                a[i + j] -= t;
            }
            q[i] = quot;
        }
        if a.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(a_lo - b_lo, q))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Evaluation at an integer point (used for sign checks at q = ±1).
    pub fn eval_int(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        let mut acc = BigInt::zero();
        for (e, c) in self.terms() {
            debug_assert!(*e >= 0, "eval_int expects a polynomial");
            acc += c * x.pow(*e as u32);
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms() {
            acc += c.to_f64().unwrap_or(f64::NAN) * x.powi(*e as i32);
        }
        acc
    }

    /// ℓ¹ norm `Σ |c_j|`.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    /// `Σ |c_j|·|j|`, the chord-metric Lipschitz constant of
    /// `θ ↦ |p(θ)|` on the unit circle.
    pub fn lipschitz_on_circle(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * (e.abs() as f64))
            .sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Rise-then-fall test on the dense coefficient list.
    pub fn is_unimodal(&self) -> bool {
        let dense = self.dense();
        let mut rising = true;
        for w in dense.windows(2) {
            if w[1] > w[0] {
                if !rising {
                    return false;
                }
            } else if w[1] < w[0] {
                rising = false;
            }
        }
        true
    }

    pub fn dense(&self) -> Vec<BigInt> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo..=hi).map(|e| self.coeff(e)).collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{}", mag)?;
            } else {
                use num_traits::One;
                if !One::is_one(&mag) {
                    write!(f, "{}*", mag)?;
                }
                if *e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", e)?;
                }
            }
        }
        Ok(())
    }
}
