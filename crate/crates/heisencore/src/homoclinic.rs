//! Summable homoclinic kernels and explicit ℓ¹ inverses.
//!
//! The stencil `f = 2 - x⁻¹ - y⁻¹` is not invertible in ℓ¹, but its adjoint
//! `f* = 2 - x - y` has the formal inverse `Σ_n 2^{-(n+1)}(x+y)^n`, and the
//! central multiplier `(1-z⁻¹)²` makes the product absolutely summable.
//! The truncated kernel
//!
//! ```text
//! w⁽ᴺ⁾ = Σ_{n≤N} 2^{-(n+1)} (x+y)^n (1-z⁻¹)²
//! ```
//!
//! is exact (dyadic rationals), its level norms reproduce the q-binomial
//! norm series `T(n)`, and `w⁽ᴺ⁾·(2-x-y)` telescopes to `(1-z⁻¹)²` minus a
//! single boundary level — whence exact membership-defect bounds for the
//! reduced point `x^{(g)}`.
//!
//! The second construction here is the explicit ℓ¹ inverse of `3+x+y+z`
//! via `v⁽ᵏ⁾ = (3+z)⁻ᵏ`; its partial ℓ¹ sums plus an exact tail recurrence
//! reproduce `‖v⁽ᵏ⁾‖₁ = 2⁻ᵏ` in closed form.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::{reduce_mod1, torus_norm, BoxWindow, Configuration};
use crate::group::GroupElement;
use crate::laurent::LaurentPoly;
use crate::qbinom::{binomial, qbinom_row};
use crate::ring::{IntElement, RatElement};

#[derive(Clone, Debug, PartialEq)]
pub enum HomoclinicError {
    WindowTooSmall { missing: GroupElement },
    LevelOutOfRange,
}

/// The truncated kernel, stored level by level (level n = total (x,y)-degree
/// n, so levels have disjoint support and norms add).
#[derive(Clone, Debug)]
pub struct LevelledKernel {
    pub truncation: u32,
    levels: Vec<RatElement>,
    level_norms: Vec<BigRational>,
    flat: BTreeMap<GroupElement, BigRational>,
}

/// `(1 - z⁻¹)²` as an integer Laurent polynomial in `q = z⁻¹`.
fn multiplier_squared() -> LaurentPoly {
    let m = LaurentPoly::one_minus_q_pow(1);
    m.mul(&m)
}

/// Builds `w⁽ᴺ⁾` with exact dyadic coefficients.
pub fn build_kernel(n_levels: u32) -> LevelledKernel {
    let mult = multiplier_squared();
    let mut levels = Vec::with_capacity(n_levels as usize + 1);
    let mut level_norms = Vec::with_capacity(n_levels as usize + 1);
    let mut flat = BTreeMap::new();
    let mut row = qbinom_row(0);
    for n in 0..=n_levels {
        if n > 0 {
            // q-Pascal step reusing the previous row.
            let mut next = Vec::with_capacity(n as usize + 1);
            next.push(LaurentPoly::one());
            for k in 1..n as usize {
                next.push(row[k - 1].add(&row[k].shift(k as i64)));
            }
            next.push(LaurentPoly::one());
            row = next;
        }
        let denom = BigInt::from(2).pow(n + 1);
        let mut level = RatElement::zero();
        let mut norm = BigRational::zero();
        for (k, poly) in row.iter().enumerate() {
            let weighted = poly.mul(&mult);
            for (j, c) in weighted.terms() {
                let coeff = BigRational::new(c.clone(), denom.clone());
                let g = GroupElement::new(k as i64, n as i64 - k as i64, -j);
                norm += coeff.abs();
                level.add_term(g, coeff.clone());
                let entry = flat.entry(g).or_insert_with(BigRational::zero);
                *entry += coeff;
            }
        }
        level_norms.push(norm);
        levels.push(level);
    }
    LevelledKernel {
        truncation: n_levels,
        levels,
        level_norms,
        flat,
    }
}

use num_traits::Signed;

impl LevelledKernel {
    pub fn level(&self, n: u32) -> Result<&RatElement, HomoclinicError> {
        self.levels
            .get(n as usize)
            .ok_or(HomoclinicError::LevelOutOfRange)
    }

    /// `‖level n‖₁`, which must equal the norm series value `T(n)`.
    pub fn level_norm(&self, n: u32) -> Result<&BigRational, HomoclinicError> {
        self.level_norms
            .get(n as usize)
            .ok_or(HomoclinicError::LevelOutOfRange)
    }

    pub fn level_norms(&self) -> &[BigRational] {
        &self.level_norms
    }

    pub fn total_norm(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for n in &self.level_norms {
            acc += n;
        }
        acc
    }

    pub fn coeff(&self, g: &GroupElement) -> BigRational {
        self.flat.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.flat.iter()
    }

    pub fn support_len(&self) -> usize {
        self.flat.len()
    }

    /// The whole kernel as one ring element (levels summed).
    pub fn as_element(&self) -> RatElement {
        RatElement::from_terms(self.flat.iter().map(|(g, c)| (*g, c.clone())))
    }

    /// ℓ¹ mass per shell `|a| + |b| = r`. Level supports are exactly the
    /// shells, so this re-derives the level norms from the flat map.
    pub fn decay_profile(&self) -> Vec<BigRational> {
        let mut shells = alloc::vec![BigRational::zero(); self.truncation as usize + 1];
        for (g, c) in &self.flat {
            shells[g.xy_shell() as usize] += c.abs();
        }
        shells
    }

    /// Mass of the kernel outside the box `A_M` (used for the cover bound).
    pub fn tail_mass_outside(&self, m: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (g, c) in &self.flat {
            if !(g.a.abs() <= m && g.b.abs() <= m && g.c.abs() <= m * m) {
                acc += c.abs();
            }
        }
        acc
    }

    /// Fixed-denominator integer view (denominator `2^{N+1}`), which the
    /// window sweeps use for fast exact arithmetic. Fits `i128` comfortably
    /// for every desk-scale truncation (N ≤ 64).
    pub fn dyadic_view(&self) -> Option<DyadicKernel> {
        if self.truncation > 64 {
            return None;
        }
        let denom_log2 = self.truncation + 1;
        let denom = BigInt::from(2).pow(denom_log2);
        let mut map = BTreeMap::new();
        for (g, c) in &self.flat {
            let scaled = c * BigRational::from_integer(denom.clone());
            debug_assert!(scaled.denom().is_one());
            let v: i128 = i128::try_from(scaled.numer()).ok()?;
            map.insert(*g, v);
        }
        Some(DyadicKernel { denom_log2, map })
    }
}

/// Integer-numerator kernel at fixed power-of-two denominator.
#[derive(Clone, Debug)]
pub struct DyadicKernel {
    pub denom_log2: u32,
    pub map: BTreeMap<GroupElement, i128>,
}

impl DyadicKernel {
    pub fn coeff(&self, g: &GroupElement) -> i128 {
        self.map.get(g).copied().unwrap_or(0)
    }

    /// Torus distance of `num / 2^denom_log2` from zero, exactly, as a
    /// rational.
    pub fn torus_norm_of(&self, num: i128) -> BigRational {
        let denom = 1i128 << self.denom_log2;
        let r = num.rem_euclid(denom);
        let r = r.min(denom - r);
        BigRational::new(BigInt::from(r), BigInt::from(denom))
    }
}

/// The reduced point `x^{(g)}`: kernel coordinates mod 1 in `[-1/2, 1/2)`,
/// restricted to `window`.
pub fn homoclinic_point(w: &LevelledKernel, window: &BoxWindow) -> Configuration<BigRational> {
    let mut out = Configuration::bounded(*window);
    for (g, c) in &w.flat {
        if window.contains(g) {
            out.set(*g, reduce_mod1(c));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DefectReport {
    pub max_defect: BigRational,
    pub argmax: GroupElement,
    pub sites: u64,
}

/// `max_{γ' ∈ window} ‖(ρ^f x)_{γ'}‖` with exact torus arithmetic.
///
/// `x` must be defined on the window dilated by `supp(f)`; a missing site
/// is a hard error, never a silent zero.
pub fn membership_defect(
    x: &Configuration<BigRational>,
    f: &IntElement,
    window: &BoxWindow,
) -> Result<DefectReport, HomoclinicError> {
    let mut max_defect = BigRational::zero();
    let mut argmax = GroupElement::IDENTITY;
    let mut sites = 0u64;
    for site in window.sites() {
        let mut acc = BigRational::zero();
        for (g, c) in f.terms() {
            let target = site.mul(*g);
            match x.value(&target) {
                Some(v) => acc += v * BigRational::from_integer(c.clone()),
                None => return Err(HomoclinicError::WindowTooSmall { missing: target }),
            }
        }
        let d = torus_norm(&acc);
        sites += 1;
        if d > max_defect {
            max_defect = d;
            argmax = site;
        }
    }
    Ok(DefectReport {
        max_defect,
        argmax,
        sites,
    })
}

/// `v⁽ᵏ⁾` truncated at `z^K`: the inverse of `(3+z)^k`, with coefficients
/// `(-1)^n·C(n+k-1, n)/3^{n+k}`.
pub fn v_series(k: u32, trunc: u32) -> RatElement {
    let mut out = RatElement::zero();
    let three = BigInt::from(3);
    for n in 0..=trunc {
        let mag = binomial((n + k - 1) as u64, n as u64);
        let num = if n % 2 == 0 { mag } else { -mag };
        out.add_term(
            GroupElement::new(0, 0, n as i64),
            BigRational::new(num, three.pow(n + k)),
        );
    }
    out
}

/// Exact partial ℓ¹ mass of `v⁽ᵏ⁾` up to `z^K` plus the exact analytic
/// tail, derived from the descending recurrence
/// `T⁽ᵏ⁾_K = (C(K+k, K+1)·x^{K+1} + T⁽ᵏ⁻¹⁾_{K+1}) / (1-x)` at `x = 1/3`
/// (base case `T⁽⁰⁾ = 0`). The two must add to `2⁻ᵏ` on the nose.
pub fn v_norm_split(k: u32, trunc: u32) -> (BigRational, BigRational) {
    let x = BigRational::new(BigInt::one(), BigInt::from(3));
    let mut partial = BigRational::zero();
    for n in 0..=trunc {
        let c = binomial((n + k - 1) as u64, n as u64);
        partial += BigRational::from_integer(c) * pow_rat(&x, n);
    }
    // Tail of Σ_{n>K} C(n+j-1, n) x^n for j = 0..=k via the recurrence.
    let one_minus_x = BigRational::one() - &x;
    let mut tail = BigRational::zero(); // j = 0
    for j in 1..=k {
        // For T^(j) at cutoff K_j: unwinding the recurrence needs the
        // cutoff K + (k - j) at depth j.
        let cutoff = trunc + (k - j);
        let lead = BigRational::from_integer(binomial((cutoff + j) as u64, (cutoff + 1) as u64))
            * pow_rat(&x, cutoff + 1);
        tail = (lead + tail) / one_minus_x.clone();
    }
    let scale = pow_rat(&x, k);
    (partial * &scale, tail * &scale)
}

fn pow_rat(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct Inverse3xyz {
    pub inverse: RatElement,
    /// `‖1 - (3+x+y+z)·u‖₁`, exact.
    pub residual: BigRational,
    pub outer_levels: u32,
    pub central_trunc: u32,
}

/// Truncation of the explicit inverse
/// `f♯ = Σ_M (-1)^M (x+y)^M v^{(M+1)}` of `f = 3+x+y+z`.
pub fn inverse_3xyz(outer_levels: u32, central_trunc: u32) -> Inverse3xyz {
    let mut u = RatElement::zero();
    for m in 0..=outer_levels {
        let power = crate::qbinom::expand_xy_power(m).to_rational();
        let v = v_series(m + 1, central_trunc);
        let term = power.mul(&v);
        u = if m % 2 == 0 { u.add(&term) } else { u.sub(&term) };
    }
    let f = IntElement::from_int_terms([
        (GroupElement::IDENTITY, 3),
        (GroupElement::x(), 1),
        (GroupElement::y(), 1),
        (GroupElement::z(), 1),
    ])
    .to_rational();
    let residual = RatElement::one().sub(&f.mul(&u)).l1_norm();
    Inverse3xyz {
        inverse: u,
        residual,
        outer_levels,
        central_trunc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::qbinom::norm_series;

    #[test]
    fn kernel_head_and_level_norms() {
        let w = build_kernel(8);
        // Only the n = 0 level touches the identity: coefficient 1/2.
        assert_eq!(w.coeff(&GroupElement::IDENTITY), rat(1, 2));
        // Level norms equal the q-binomial norm series T(n) — two
        // independently coded routes.
        let ns = norm_series(8);
        for n in 0..=8u32 {
            assert_eq!(w.level_norm(n).unwrap(), &ns.t[n as usize], "n = {}", n);
        }
        assert_eq!(w.level_norm(2).unwrap(), &rat(3, 2));
    }

    #[test]
    fn kernel_coefficients_are_dyadic() {
        let w = build_kernel(6);
        let denom = BigInt::from(2).pow(7);
        for (_, c) in w.support() {
            // Denominator divides 2^{N+1}.
            let scaled = c * BigRational::from_integer(denom.clone());
            assert!(scaled.denom().is_one());
        }
        let dy = w.dyadic_view().unwrap();
        assert_eq!(dy.denom_log2, 7);
        assert_eq!(dy.coeff(&GroupElement::IDENTITY), 64);
    }

    #[test]
    fn truncated_product_telescopes() {
        // w^(N)·(2-x-y) = (1-z⁻¹)² - 2^{-(N+1)}(x+y)^{N+1}(1-z⁻¹)².
        let n = 12u32;
        let w = build_kernel(n).as_element();
        let fstar = IntElement::from_int_terms([
            (GroupElement::IDENTITY, 2),
            (GroupElement::x(), -1),
            (GroupElement::y(), -1),
        ])
        .to_rational();
        let product = w.mul(&fstar);
        let mult = IntElement::from_int_terms([
            (GroupElement::IDENTITY, 1),
            (GroupElement::new(0, 0, -1), -2),
            (GroupElement::new(0, 0, -2), 1),
        ])
        .to_rational();
        let boundary = crate::qbinom::expand_xy_power(n + 1)
            .to_rational()
            .mul(&mult)
            .scale_rat(&BigRational::new(BigInt::one(), BigInt::from(2).pow(n + 1)));
        let expect = mult.sub(&boundary);
        assert_eq!(product, expect);
    }

    #[test]
    fn homoclinic_point_values() {
        let w = build_kernel(8);
        let window = BoxWindow::radius(3);
        let x = homoclinic_point(&w, &window);
        // w_e = 1/2 reduces to the representative -1/2, torus norm 1/2.
        assert_eq!(x.value(&GroupElement::IDENTITY).unwrap(), rat(-1, 2));
        assert_eq!(torus_norm(&x.value(&GroupElement::IDENTITY).unwrap()), rat(1, 2));
        // Sites beyond the truncation support are zero.
        assert_eq!(x.value(&GroupElement::new(-3, 0, 0)).unwrap(), rat(0, 1));
        // Total windowed torus mass is at most the kernel norm.
        let mut acc = BigRational::zero();
        for (_, v) in x.iter() {
            acc += torus_norm(v);
        }
        assert!(acc <= w.total_norm());
    }

    #[test]
    fn defect_of_zero_and_window_errors() {
        let f = IntElement::from_int_terms([
            (GroupElement::IDENTITY, 2),
            (GroupElement::new(-1, 0, 0), -1),
            (GroupElement::new(0, -1, 0), -1),
        ]);
        let zero = Configuration::<BigRational>::finite();
        let report = membership_defect(&zero, &f, &BoxWindow::radius(2)).unwrap();
        assert_eq!(report.max_defect, BigRational::zero());
        // A bounded configuration on a too-small region errors.
        let small = Configuration::<BigRational>::bounded(BoxWindow::radius(1));
        assert!(matches!(
            membership_defect(&small, &f, &BoxWindow::radius(1)),
            Err(HomoclinicError::WindowTooSmall { .. })
        ));
    }

    fn boundary_mass(n: u32) -> BigRational {
        let mult = multiplier_squared();
        let mut acc = BigInt::zero();
        for poly in qbinom_row(n + 1) {
            acc += poly.mul(&mult).l1_norm();
        }
        BigRational::new(acc, BigInt::from(2).pow(n + 2))
    }

    #[test]
    fn kernel_defect_bounded_by_boundary_level() {
        let f = IntElement::from_int_terms([
            (GroupElement::IDENTITY, 2),
            (GroupElement::new(-1, 0, 0), -1),
            (GroupElement::new(0, -1, 0), -1),
        ]);
        let support: Vec<GroupElement> = f.support().copied().collect();

        // Window reaching the boundary shell N+1 = 3: nonzero defect, still
        // below the exact boundary-level mass.
        let w = build_kernel(2);
        let window = BoxWindow::radius(3);
        let x = homoclinic_point(&w, &window.dilate_for(&support));
        let report = membership_defect(&x, &f, &window).unwrap();
        assert!(report.max_defect > BigRational::zero());
        assert!(report.max_defect <= boundary_mass(2));

        // Deep truncation: the boundary shell misses the window entirely and
        // the defect vanishes identically — the telescoped product is an
        // integer configuration there.
        let w = build_kernel(10);
        let x = homoclinic_point(&w, &window.dilate_for(&support));
        let report = membership_defect(&x, &f, &window).unwrap();
        assert_eq!(report.max_defect, BigRational::zero());
    }

    #[test]
    fn decay_profile_matches_levels() {
        let w = build_kernel(8);
        let shells = w.decay_profile();
        for n in 0..=8u32 {
            assert_eq!(&shells[n as usize], w.level_norm(n).unwrap());
        }
        let total: BigRational = {
            let mut acc = BigRational::zero();
            for s in &shells {
                acc += s;
            }
            acc
        };
        assert_eq!(total, w.total_norm());
    }

    #[test]
    fn v_series_norm_closed_form() {
        for k in 1..=6u32 {
            let (partial, tail) = v_norm_split(k, 24);
            let expect = BigRational::new(BigInt::one(), BigInt::from(2).pow(k));
            assert_eq!(partial + tail, expect, "k = {}", k);
            // Partial sums alone agree with the series coefficients.
            let direct = v_series(k, 24).l1_norm();
            let (partial, _) = v_norm_split(k, 24);
            assert_eq!(direct, partial);
        }
    }

    #[test]
    fn v_series_inverts_central_seed() {
        // (3+z)·v⁽¹⁾ = 1 ± 3^{-(K+1)} z^{K+1}.
        let k_trunc = 10u32;
        let v = v_series(1, k_trunc);
        let seed = IntElement::from_int_terms([
            (GroupElement::IDENTITY, 3),
            (GroupElement::z(), 1),
        ])
        .to_rational();
        let prod = seed.mul(&v);
        let resid = RatElement::one().sub(&prod);
        assert_eq!(resid.len(), 1);
        assert_eq!(
            resid.l1_norm(),
            BigRational::new(BigInt::one(), BigInt::from(3).pow(k_trunc + 1))
        );
    }

    #[test]
    fn inverse_3xyz_improves_with_truncation() {
        let coarse = inverse_3xyz(4, 16);
        let fine = inverse_3xyz(8, 32);
        assert!(fine.residual < coarse.residual);
        // Head coefficient at the identity for the smallest truncation.
        let head = inverse_3xyz(0, 0);
        assert_eq!(head.inverse.coeff(&GroupElement::IDENTITY), rat(1, 3));
    }
}
