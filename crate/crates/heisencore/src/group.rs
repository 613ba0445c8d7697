//! The discrete Heisenberg group in normal form.
//!
//! Every element is written uniquely as `x^a y^b z^c` where `z = xyx⁻¹y⁻¹`
//! generates the center. The generator relations are `xz = zx`, `yz = zy`
//! and `x^k y^l = y^l x^k z^{kl}`, which pin down the product rule below.

use core::fmt;

/// A group element `x^a y^b z^c` in normal form.
///
/// Two elements are equal iff all three exponents agree. Exponents are
/// machine integers; every computation in this crate stays far below the
/// `i64` range (debug builds trap on overflow).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: 0, b: 0, c: 0 };

    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        GroupElement { a, b, c }
    }

    pub const fn x() -> Self {
        GroupElement::new(1, 0, 0)
    }

    pub const fn y() -> Self {
        GroupElement::new(0, 1, 0)
    }

    pub const fn z() -> Self {
        GroupElement::new(0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Central elements are exactly the powers of `z`.
    pub fn is_central(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Group product. Moving `x^{a'}` of the right factor past `y^b` of the
    /// left factor costs a central twist `z^{-a'·b}`.
    pub fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c - rhs.a * self.b,
        }
    }

    /// Inverse `(-a, -b, -c - a·b)`; both products with `self` give the identity.
    pub fn inv(self) -> GroupElement {
        GroupElement {
            a: -self.a,
            b: -self.b,
            c: -self.c - self.a * self.b,
        }
    }

    /// Integer power by repeated squaring is pointless here; the closed form
    /// follows from the product rule: `(x^a y^b z^c)^n` has a quadratic
    /// correction in the center.
    pub fn pow(self, n: i64) -> GroupElement {
        if n == 0 {
            return Self::IDENTITY;
        }
        let (g, n) = if n < 0 { (self.inv(), -n) } else { (self, n) };
        // (a, b, c)^n = (na, nb, nc - ab·n(n-1)/2)
        GroupElement {
            a: g.a * n,
            b: g.b * n,
            c: g.c * n - g.a * g.b * (n * (n - 1) / 2),
        }
    }

    /// Word length proxy `|a| + |b|`; the kernel constructions bucket
    /// support by this shell index.
    pub fn xy_shell(&self) -> i64 {
        self.a.abs() + self.b.abs()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}
