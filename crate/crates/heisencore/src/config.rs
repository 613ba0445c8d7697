//! Configurations: finitely described points of `ℤ^ℍ`, `ℝ^ℍ` or `𝕋^ℍ`.
//!
//! A configuration stores explicit values on a finite set plus an optional
//! declared box region. Inside the region, missing entries read as zero;
//! outside a declared region the value is unknown, and operators that need
//! it flag the affected outputs instead of guessing.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::group::GroupElement;
use crate::ring::{IntElement, RingElement};
use crate::coeff::Coeff;

/// The box `{ x^a y^b z^c : |a| ≤ xy, |b| ≤ xy, |c| ≤ z }`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoxWindow {
    pub xy: i64,
    pub z: i64,
}

impl BoxWindow {
    /// Radius-r window with the parabolic z-extent `r²` that matches the
    /// group's geometry.
    pub fn radius(r: i64) -> Self {
        BoxWindow { xy: r, z: r * r }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.a.abs() <= self.xy && g.b.abs() <= self.xy && g.c.abs() <= self.z
    }

    pub fn site_count(&self) -> u64 {
        let side = (2 * self.xy + 1) as u64;
        side * side * (2 * self.z + 1) as u64
    }

    pub fn sites(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let xy = self.xy;
        let z = self.z;
        (-xy..=xy).flat_map(move |a| {
            (-xy..=xy).flat_map(move |b| (-z..=z).map(move |c| GroupElement::new(a, b, c)))
        })
    }

    /// Smallest box guaranteed to contain `γ'·γ` for every `γ'` in `self`
    /// and `γ` in `support`.
    pub fn dilate_for(&self, support: &[GroupElement]) -> BoxWindow {
        let mut xy_pad = 0i64;
        let mut z_pad = 0i64;
        for g in support {
            xy_pad = xy_pad.max(g.a.abs()).max(g.b.abs());
            // γ'γ has central part c' + c - a·b', |b'| ≤ xy.
            z_pad = z_pad.max(g.c.abs() + g.a.abs() * self.xy);
        }
        BoxWindow {
            xy: self.xy + xy_pad,
            z: self.z + z_pad,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Configuration<V> {
    values: BTreeMap<GroupElement, V>,
    region: Option<BoxWindow>,
}

impl<V: Clone + PartialEq> Configuration<V> {
    /// Finite-support configuration: zero everywhere off the stored set.
    pub fn finite() -> Self {
        Configuration {
            values: BTreeMap::new(),
            region: None,
        }
    }

    /// Region-bounded configuration: values are known only inside `region`.
    pub fn bounded(region: BoxWindow) -> Self {
        Configuration {
            values: BTreeMap::new(),
            region: Some(region),
        }
    }

    pub fn region(&self) -> Option<BoxWindow> {
        self.region
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &V)> {
        self.values.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.values.keys()
    }

    pub fn get_stored(&self, g: &GroupElement) -> Option<&V> {
        self.values.get(g)
    }

    pub fn insert(&mut self, g: GroupElement, v: V) {
        self.values.insert(g, v);
    }
}

/// Value lookup that materialises the implicit zero. Split out from `get`
/// because a `&'static V` zero cannot be produced generically.
pub trait SiteValue: Clone + PartialEq {
    fn zero_value() -> Self;
}

impl SiteValue for i64 {
    fn zero_value() -> Self {
        0
    }
}

impl SiteValue for BigInt {
    fn zero_value() -> Self {
        Zero::zero()
    }
}

impl SiteValue for BigRational {
    fn zero_value() -> Self {
        Zero::zero()
    }
}

impl SiteValue for f64 {
    fn zero_value() -> Self {
        0.0
    }
}

impl<V: SiteValue> Configuration<V> {
    /// Value at `g`, or `None` when it is outside a declared region.
    pub fn value(&self, g: &GroupElement) -> Option<V> {
        match self.values.get(g) {
            Some(v) => Some(v.clone()),
            None => match self.region {
                Some(r) if !r.contains(g) => None,
                _ => Some(V::zero_value()),
            },
        }
    }

    pub fn set(&mut self, g: GroupElement, v: V) {
        if v == V::zero_value() {
            self.values.remove(&g);
        } else {
            self.values.insert(g, v);
        }
    }

    pub fn add_at(&mut self, g: GroupElement, v: V)
    where
        V: core::ops::Add<Output = V>,
    {
        let cur = self.values.remove(&g).unwrap_or_else(V::zero_value);
        self.set(g, cur + v);
    }
}

/// Result of applying a ring element on the right: computed values plus the
/// sites whose stencil escaped the declared region.
#[derive(Clone, Debug)]
pub struct RhoImage<V> {
    pub values: BTreeMap<GroupElement, V>,
    pub boundary_unknown: BTreeSet<GroupElement>,
}

/// `(ρ^f v)_{γ'} = Σ_γ f_γ v_{γ'γ}`, evaluated on an explicit target set.
pub fn act_rho<C, V>(
    f: &RingElement<C>,
    v: &Configuration<V>,
    targets: impl Iterator<Item = GroupElement>,
    mul: impl Fn(&C, &V) -> V,
) -> RhoImage<V>
where
    C: Coeff,
    V: SiteValue + core::ops::Add<Output = V>,
{
    let mut values = BTreeMap::new();
    let mut boundary_unknown = BTreeSet::new();
    for site in targets {
        let mut acc = V::zero_value();
        let mut known = true;
        for (g, c) in f.terms() {
            match v.value(&site.mul(*g)) {
                Some(val) => acc = acc + mul(c, &val),
                None => {
                    known = false;
                    break;
                }
            }
        }
        if known {
            values.insert(site, acc);
        } else {
            boundary_unknown.insert(site);
        }
    }
    RhoImage {
        values,
        boundary_unknown,
    }
}

pub fn act_rho_int(
    f: &IntElement,
    v: &Configuration<BigInt>,
    targets: impl Iterator<Item = GroupElement>,
) -> RhoImage<BigInt> {
    act_rho(f, v, targets, |c, x| c * x)
}

pub fn act_rho_rat(
    f: &IntElement,
    v: &Configuration<BigRational>,
    targets: impl Iterator<Item = GroupElement>,
) -> RhoImage<BigRational> {
    act_rho(f, v, targets, |c, x| x * c)
}

/// Reduces into the fundamental domain `[-1/2, 1/2)` of `𝕋 = ℝ/ℤ`.
pub fn reduce_mod1(t: &BigRational) -> BigRational {
    let floor = t.floor();
    let mut r = t - &floor;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if r >= half {
        r -= BigRational::one();
    }
    r
}

/// Distance from zero on the torus, for a representative in `[-1/2, 1/2)`.
pub fn torus_norm(t: &BigRational) -> BigRational {
    reduce_mod1(t).abs()
}

/// All sites of a box window collected in lexicographic order.
pub fn window_sites(w: &BoxWindow) -> Vec<GroupElement> {
    w.sites().collect()
}
