//! Sparse group-ring arithmetic over the discrete Heisenberg group.
//!
//! A `RingElement` is a finitely supported coefficient map; the product is
//! the group convolution `(f·g)_δ = Σ_γ f_γ g_{γ⁻¹δ}`. Storage is a
//! `BTreeMap` keyed by the normal form, so iteration order (and therefore
//! every derived output) is deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::coeff::{Coeff, NormValue};
use crate::group::GroupElement;
use crate::laurent::LaurentPoly;

#[derive(Clone, PartialEq, Debug, Default)]
pub struct RingElement<C: Coeff> {
    terms: BTreeMap<GroupElement, C>,
}

pub type IntElement = RingElement<BigInt>;
pub type RatElement = RingElement<BigRational>;
pub type CplxElement = RingElement<Complex64>;

impl<C: Coeff> RingElement<C> {
    pub fn zero() -> Self {
        RingElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(GroupElement::IDENTITY, C::one())
    }

    pub fn monomial(g: GroupElement, coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(g, coeff);
        }
        RingElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupElement, C)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (g, c) in iter {
            out.add_term(g, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn coeff(&self, g: &GroupElement) -> C {
        self.terms.get(g).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_coeff(&self) -> C {
        self.coeff(&GroupElement::IDENTITY)
    }

    /// Adds `coeff` at `g`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, g: GroupElement, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in rhs.terms() {
            out.add_term(*g, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        RingElement {
            terms: self.terms.iter().map(|(g, c)| (*g, c.neg_ref())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (g, c) in self.terms() {
            out.add_term(*g, c.mul_ref(s));
        }
        out
    }

    /// Group convolution.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (g, cg) in self.terms() {
            for (h, ch) in rhs.terms() {
                out.add_term(g.mul(*h), cg.mul_ref(ch));
            }
        }
        out
    }

    /// Left-multiplication by a single monomial, cheaper than `mul`.
    pub fn translate_left(&self, g: GroupElement) -> Self {
        RingElement {
            terms: self.terms.iter().map(|(h, c)| (g.mul(*h), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The adjoint `f* = Σ conj(f_γ)·γ⁻¹`.
    pub fn involution(&self) -> Self {
        RingElement {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.inv(), c.conj()))
                .collect(),
        }
    }

    /// ℓ¹ norm `Σ |f_γ|`, exact over exact rings.
    pub fn l1_norm(&self) -> C::Norm {
        let mut acc = C::Norm::norm_zero();
        for c in self.terms.values() {
            acc = acc.norm_add(&c.abs_norm());
        }
        acc
    }

    /// Applies a group automorphism termwise.
    pub fn map_support(&self, f: impl Fn(GroupElement) -> GroupElement) -> Self {
        let mut out = Self::zero();
        for (g, c) in self.terms() {
            out.add_term(f(*g), c.clone());
        }
        out
    }

    pub fn is_central(&self) -> bool {
        self.terms.keys().all(|g| g.is_central())
    }

    /// Collects the coefficient of each `x^k y^l` fibre as a Laurent
    /// polynomial in the central variable: `f = Σ_{(k,l)} f_{(k,l)}(z)·x^k y^l`.
    ///
    /// Note `x^k y^l z^m` is the normal form itself, so the fibre over
    /// `(k,l)` is just the map `m ↦ f_{(k,l,m)}`.
    pub fn central_fibres(&self) -> BTreeMap<(i64, i64), Vec<(i64, C)>> {
        let mut out: BTreeMap<(i64, i64), Vec<(i64, C)>> = BTreeMap::new();
        for (g, c) in self.terms() {
            out.entry((g.a, g.b)).or_default().push((g.c, c.clone()));
        }
        out
    }

    pub fn to_c64(&self) -> CplxElement {
        RingElement {
            terms: self.terms.iter().map(|(g, c)| (*g, c.to_c64())).collect(),
        }
    }
}

impl IntElement {
    pub fn from_int_terms<I: IntoIterator<Item = (GroupElement, i64)>>(iter: I) -> Self {
        Self::from_terms(iter.into_iter().map(|(g, c)| (g, BigInt::from(c))))
    }

    pub fn to_rational(&self) -> RatElement {
        RingElement {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (*g, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Integer central fibres as `LaurentPoly` values, used by the
    /// localization certificates.
    pub fn int_fibres(&self) -> BTreeMap<(i64, i64), LaurentPoly> {
        self.central_fibres()
            .into_iter()
            .map(|(kl, v)| (kl, LaurentPoly::from_terms(v)))
            .collect()
    }

    pub fn l1_norm_int(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

impl RatElement {
    /// Scales by an exact rational.
    pub fn scale_rat(&self, s: &BigRational) -> Self {
        self.scale(s)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, g: &GroupElement) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("x", g.a), ("y", g.b), ("z", g.c)] {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", name)?;
        } else {
            write!(f, "{}^{}", name, e)?;
        }
    }
    Ok(())
}

/// Canonical rendering: terms in lexicographic `(a,b,c)` order, coefficient
/// first, `x^a*y^b*z^c` with zero exponents omitted. Parses back to the same
/// element.
impl fmt::Display for IntElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in self.terms() {
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
            if g.is_identity() {
                write!(f, "{}", mag)?;
            } else {
                if !One::is_one(&mag) {
                    write!(f, "{}*", mag)?;
                }
                write_monomial(f, g)?;
            }
        }
        Ok(())
    }
}

pub fn format_canonical(f: &IntElement) -> String {
    use alloc::format;
    format!("{}", f)
}

/// `x ↦ y, y ↦ x, z ↦ z⁻¹` extended to the group ring: on normal forms,
/// `x^a y^b z^c ↦ x^b y^a z^{-c-ab}`.
pub fn tau_swap<C: Coeff>(f: &RingElement<C>) -> RingElement<C> {
    f.map_support(|g| GroupElement::new(g.b, g.a, -g.c - g.a * g.b))
}

impl RingElement<BigInt> {
    /// Checks `Σ_γ f_γ = 0`, the classic obstruction at the trivial character.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }
}
