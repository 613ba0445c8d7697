//! Toppling stabilization and the symbolic-cover experiments for the
//! stencil `f = 2 - x⁻¹ - y⁻¹`.
//!
//! A toppling subtracts `γ·f*` (that is, `v_γ -= 2`, `v_{γx} += 1`,
//! `v_{γy} += 1`): mass moves only in the positive `x`/`y` directions, so
//! stabilization of the box `A_M = {|l| ≤ M, |m| ≤ M, |n| ≤ M²}` always
//! terminates. Toppled differences lie in the right ideal of `f*`, which
//! the coding map `ξ_g(v) = Σ_γ v_γ w_{γ⁻¹γ'} mod 1` kills — the basis of
//! the equal-entropy cover of the associated principal action by the full
//! 2-shift.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::config::{reduce_mod1, torus_norm, BoxWindow, Configuration};
use crate::group::GroupElement;
use crate::homoclinic::{DyadicKernel, LevelledKernel};
use crate::ring::IntElement;

/// The box `A_M`: `|l| ≤ M`, `|m| ≤ M`, `|n| ≤ M²` in normal coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxRegion {
    pub m: i64,
}

impl BoxRegion {
    pub fn contains(&self, g: &GroupElement) -> bool {
        g.a.abs() <= self.m && g.b.abs() <= self.m && g.c.abs() <= self.m * self.m
    }

    pub fn site_count(&self) -> u64 {
        let side = (2 * self.m + 1) as u64;
        side * side * (2 * self.m * self.m + 1) as u64
    }

    /// Lexicographic site order; the deterministic seed scan of the queue.
    pub fn sites(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let m = self.m;
        let z = m * m;
        (-m..=m).flat_map(move |a| {
            (-m..=m).flat_map(move |b| (-z..=z).map(move |c| GroupElement::new(a, b, c)))
        })
    }

    /// Region that also contains every toppling target: one step in the
    /// positive x and y directions (with the central shear `|c| ≤ M² + M`).
    pub fn spill_region(&self) -> BoxWindow {
        BoxWindow {
            xy: self.m + 1,
            z: self.m * self.m + self.m,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TopplingResult {
    pub stabilized: Configuration<i64>,
    pub topplings: u64,
    /// Sites whose value changed.
    pub affected: BTreeSet<GroupElement>,
    /// Largest value observed outside `A_M` after termination.
    pub outside_max: i64,
    /// False when the toppling cap was hit.
    pub terminated: bool,
}

/// Stabilizes `v` on `A_M`: repeatedly picks a site in `A_M` with value
/// ≥ 2 (FIFO over a lexicographic initial scan) and topples it. On
/// termination every `A_M` value lies in `{0, 1}`; outside values are
/// recorded, never clamped.
pub fn topple_stabilize(v: &Configuration<i64>, m: i64, cap: u64) -> TopplingResult {
    let region = BoxRegion { m };
    let mut values: BTreeMap<GroupElement, i64> =
        v.iter().map(|(g, val)| (*g, *val)).collect();
    let mut queue: VecDeque<GroupElement> = VecDeque::new();
    let mut queued: BTreeSet<GroupElement> = BTreeSet::new();
    for site in region.sites() {
        if values.get(&site).copied().unwrap_or(0) >= 2 {
            queue.push_back(site);
            queued.insert(site);
        }
    }
    let mut topplings = 0u64;
    let mut affected = BTreeSet::new();
    let mut terminated = true;
    while let Some(site) = queue.pop_front() {
        queued.remove(&site);
        // A queued site may have dropped below threshold meanwhile.
        while values.get(&site).copied().unwrap_or(0) >= 2 {
            if topplings >= cap {
                terminated = false;
                queue.clear();
                queued.clear();
                break;
            }
            topplings += 1;
            *values.entry(site).or_insert(0) -= 2;
            affected.insert(site);
            // γ·x = (a+1, b, c-b), γ·y = (a, b+1, c).
            for target in [
                GroupElement::new(site.a + 1, site.b, site.c - site.b),
                GroupElement::new(site.a, site.b + 1, site.c),
            ] {
                let t = values.entry(target).or_insert(0);
                *t += 1;
                affected.insert(target);
                if *t >= 2 && region.contains(&target) && !queued.contains(&target) {
                    queue.push_back(target);
                    queued.insert(target);
                }
            }
        }
        if !terminated {
            break;
        }
    }
    let mut outside_max = 0i64;
    for (g, val) in &values {
        if !region.contains(g) && *val > outside_max {
            outside_max = *val;
        }
    }
    let mut stabilized = Configuration::finite();
    for (g, val) in values {
        stabilized.set(g, val);
    }
    TopplingResult {
        stabilized,
        topplings,
        affected,
        outside_max,
        terminated,
    }
}

/// LIFO-order stabilization, used only to probe order-independence.
pub fn topple_stabilize_lifo(v: &Configuration<i64>, m: i64, cap: u64) -> TopplingResult {
    let region = BoxRegion { m };
    let mut values: BTreeMap<GroupElement, i64> =
        v.iter().map(|(g, val)| (*g, *val)).collect();
    let mut stack: Vec<GroupElement> = region
        .sites()
        .filter(|s| values.get(s).copied().unwrap_or(0) >= 2)
        .collect();
    let mut topplings = 0u64;
    let mut affected = BTreeSet::new();
    let mut terminated = true;
    while let Some(site) = stack.pop() {
        while values.get(&site).copied().unwrap_or(0) >= 2 {
            if topplings >= cap {
                terminated = false;
                stack.clear();
                break;
            }
            topplings += 1;
            *values.entry(site).or_insert(0) -= 2;
            affected.insert(site);
            for target in [
                GroupElement::new(site.a + 1, site.b, site.c - site.b),
                GroupElement::new(site.a, site.b + 1, site.c),
            ] {
                let t = values.entry(target).or_insert(0);
                *t += 1;
                affected.insert(target);
                if *t >= 2 && region.contains(&target) {
                    stack.push(target);
                }
            }
        }
        if !terminated {
            break;
        }
    }
    let mut outside_max = 0i64;
    for (g, val) in &values {
        if !region.contains(g) && *val > outside_max {
            outside_max = *val;
        }
    }
    let mut stabilized = Configuration::finite();
    for (g, val) in values {
        stabilized.set(g, val);
    }
    TopplingResult {
        stabilized,
        topplings,
        affected,
        outside_max,
        terminated,
    }
}

/// `ξ_g(v)_{γ'} = Σ_γ v_γ w_{γ⁻¹γ'} mod 1` on the window, exact.
///
/// Truncation caveat: the kernel only covers shells up to its truncation;
/// `truncated` reports whether some product `γ⁻¹γ'` fell outside the
/// kernel's computed range while `v_γ ≠ 0` (those reads are zero).
#[derive(Clone, Debug)]
pub struct CodingImage {
    pub values: Configuration<BigRational>,
    pub truncated: bool,
}

pub fn coding_map(
    v: &Configuration<i64>,
    w: &LevelledKernel,
    window: &BoxWindow,
) -> CodingImage {
    let dy = w
        .dyadic_view()
        .expect("desk-scale kernels have dyadic views");
    let mut out = Configuration::bounded(*window);
    let mut truncated = false;
    let trunc_shell = w.truncation as i64;
    for site in window.sites() {
        let mut acc: i128 = 0;
        for (g, val) in v.iter() {
            if *val == 0 {
                continue;
            }
            let offset = g.inv().mul(site);
            acc += (*val as i128) * dy.coeff(&offset);
            // Shell heuristic for the truncation flag only (exactness of
            // the computed sum is unaffected).
            if offset.a >= 0 && offset.b >= 0 && offset.xy_shell() > trunc_shell {
                truncated = true;
            }
        }
        let denom = 1i128 << dy.denom_log2;
        out.set(
            site,
            reduce_mod1(&BigRational::new(BigInt::from(acc), BigInt::from(denom))),
        );
    }
    CodingImage {
        values: out,
        truncated,
    }
}

/// One trial of the cover experiment at a single `M`.
#[derive(Clone, Debug)]
pub struct CoverTrial {
    pub m: i64,
    pub topplings: u64,
    pub outside_max: i64,
    pub terminated: bool,
    /// All `A_M` values in `{0,1}` after stabilization.
    pub binary_on_box: bool,
    /// `d(M) = sup_window ‖ξ_g(v) - ξ_g(ṽ_M)‖`, exact.
    pub distance: BigRational,
    /// `b(M) = 4·sup_window Σ_{γ∉A_M} |w_{γ⁻¹γ'}|`, exact.
    pub bound: BigRational,
}

/// `b(M)` alone (it does not depend on the trial data).
pub fn cover_bound(w: &LevelledKernel, m: i64, window: &BoxWindow) -> BigRational {
    let dy = w.dyadic_view().expect("dyadic view");
    let region = BoxRegion { m };
    let denom = BigInt::from(1i128 << dy.denom_log2);
    let mut best = BigRational::zero();
    for site in window.sites() {
        let mut acc: i128 = 0;
        for (kappa, coeff) in &dy.map {
            // γ = γ'·κ⁻¹ runs over the kernel support translated to γ'.
            let gamma = site.mul(kappa.inv());
            if !region.contains(&gamma) {
                acc += coeff.abs();
            }
        }
        let val = BigRational::new(BigInt::from(4i64) * BigInt::from(acc), denom.clone());
        if val > best {
            best = val;
        }
    }
    best
}

/// Runs the cover experiment for one configuration `v ∈ {0,1,2}^…` over a
/// list of box sizes. For each `M`: stabilize on `A_M`, splice `ṽ_M`
/// (stabilized inside, original outside), and compare the coding images.
/// `ξ_g(v) - ξ_g(ṽ_M) = ξ̃_g(v - ṽ_M) mod 1` with `v - ṽ_M` supported on
/// `A_M`, so the difference is a single exact convolution.
pub fn cover_experiment(
    v: &Configuration<i64>,
    m_list: &[i64],
    window: &BoxWindow,
    w: &LevelledKernel,
    cap: u64,
) -> Vec<CoverTrial> {
    let dy = w.dyadic_view().expect("dyadic view");
    let mut out = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let region = BoxRegion { m };
        let result = topple_stabilize(v, m, cap);
        let binary_on_box = result.terminated
            && region.sites().all(|s| {
                let val = result.stabilized.value(&s).unwrap_or(0);
                val == 0 || val == 1
            });
        // delta = v - ṽ_M is v - v̄_M on A_M, zero outside.
        let mut delta: BTreeMap<GroupElement, i64> = BTreeMap::new();
        for site in region.sites() {
            let before = v.value(&site).unwrap_or(0);
            let after = result.stabilized.value(&site).unwrap_or(0);
            if before != after {
                delta.insert(site, before - after);
            }
        }
        let distance = sup_image_norm(&delta, &dy, window);
        let bound = cover_bound(w, m, window);
        out.push(CoverTrial {
            m,
            topplings: result.topplings,
            outside_max: result.outside_max,
            terminated: result.terminated,
            binary_on_box,
            distance,
            bound,
        });
    }
    out
}

fn sup_image_norm(
    delta: &BTreeMap<GroupElement, i64>,
    dy: &DyadicKernel,
    window: &BoxWindow,
) -> BigRational {
    let mut best = BigRational::zero();
    for site in window.sites() {
        let mut acc: i128 = 0;
        for (g, val) in delta {
            acc += (*val as i128) * dy.coeff(&g.inv().mul(site));
        }
        let d = dy.torus_norm_of(acc);
        if d > best {
            best = d;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpecificationError {
    RegionsOverlap { at: GroupElement },
    LiftNotIntegral { at: GroupElement, defect: BigRational },
}

#[derive(Clone, Debug)]
pub struct SpecificationPatch {
    pub result: Configuration<BigRational>,
    /// Largest deviation `‖(ρ^g x^j)_γ - y_γ‖` over the check regions.
    pub max_deviation: BigRational,
    /// The box radius used for `F_ε`.
    pub f_eps_shell: i64,
    pub ok: bool,
}

/// Specification by splicing: given windowed points `x¹, x²` of the
/// stencil's kernel variety and target regions `F₁, F₂` with disjoint
/// `F_ε`-dilations, builds integer lifts `vʲ = lift(xʲ)·f*`, splices them,
/// and codes through the kernel. Succeeds when the coded point is
/// `ε`-close to `ρ^g xʲ` on each `F_j`.
pub fn specification_patch(
    x1: &Configuration<BigRational>,
    x2: &Configuration<BigRational>,
    f1: &[GroupElement],
    f2: &[GroupElement],
    eps: &BigRational,
    w: &LevelledKernel,
    f: &IntElement,
) -> Result<SpecificationPatch, SpecificationError> {
    // F_ε: smallest shell radius with 2‖f‖₁·(tail mass) < ε.
    let norm_f = BigRational::from_integer(f.l1_norm_int());
    let shells = w.decay_profile();
    let mut f_eps_shell = w.truncation as i64;
    let mut tail = BigRational::zero();
    for r in (0..=w.truncation as i64).rev() {
        let with_r = &tail + &shells[r as usize];
        if &(BigRational::from_integer(BigInt::from(2)) * &norm_f) * &with_r < *eps {
            tail = with_r;
            f_eps_shell = r;
        } else {
            break;
        }
    }
    let f_eps: Vec<GroupElement> = w
        .support()
        .map(|(g, _)| *g)
        .filter(|g| g.xy_shell() < f_eps_shell)
        .chain(core::iter::once(GroupElement::IDENTITY))
        .collect();

    // Dilated regions F_ε·F_j, which must not overlap.
    let dilate = |f_j: &[GroupElement]| -> BTreeSet<GroupElement> {
        let mut out = BTreeSet::new();
        for e in &f_eps {
            for g in f_j {
                out.insert(e.mul(*g));
            }
        }
        out
    };
    let d1 = dilate(f1);
    let d2 = dilate(f2);
    if let Some(at) = d1.intersection(&d2).next() {
        return Err(SpecificationError::RegionsOverlap { at: *at });
    }

    // Integer lifts v = lift(x)·f* on the dilated regions.
    let fstar = f.involution();
    let lift_at = |x: &Configuration<BigRational>, site: GroupElement| -> BigRational {
        // (x * f*)_site = Σ_κ x_κ f*_{κ⁻¹·site} = Σ_γ f*_γ x_{site·γ⁻¹}
        let mut acc = BigRational::zero();
        for (g, c) in fstar.terms() {
            if let Some(v) = x.value(&site.mul(g.inv())) {
                acc += v * BigRational::from_integer(c.clone());
            }
        }
        acc
    };
    let mut spliced: BTreeMap<GroupElement, i64> = BTreeMap::new();
    for (region, x) in [(&d1, x1), (&d2, x2)] {
        for site in region {
            let val = lift_at(x, *site);
            let rounded = round_to_int(&val);
            let defect = (&val - BigRational::from_integer(rounded.clone())).abs();
            if defect > BigRational::new(BigInt::from(1), BigInt::from(4)) {
                return Err(SpecificationError::LiftNotIntegral {
                    at: *site,
                    defect,
                });
            }
            let as_i64: i64 = rounded.try_into().unwrap_or(0);
            if as_i64 != 0 {
                spliced.insert(*site, as_i64);
            }
        }
    }
    let mut v = Configuration::finite();
    for (g, val) in &spliced {
        v.set(*g, *val);
    }

    // Code and verify against ρ^g x^j on each F_j.
    let g_mult = IntElement::from_int_terms([
        (GroupElement::IDENTITY, 1),
        (GroupElement::new(0, 0, -1), -2),
        (GroupElement::new(0, 0, -2), 1),
    ]);
    let mut max_deviation = BigRational::zero();
    let mut result = Configuration::finite();
    let dy = w.dyadic_view().expect("dyadic view");
    let mut check = |f_j: &[GroupElement], x: &Configuration<BigRational>| {
        for site in f_j {
            let mut acc: i128 = 0;
            for (g, val) in &spliced {
                acc += (*val as i128) * dy.coeff(&g.inv().mul(*site));
            }
            let denom = 1i128 << dy.denom_log2;
            let y = reduce_mod1(&BigRational::new(BigInt::from(acc), BigInt::from(denom)));
            result.set(*site, y.clone());
            // ρ^g x at site: Σ g_γ x_{site·γ}.
            let mut target = BigRational::zero();
            for (g, c) in g_mult.terms() {
                if let Some(v) = x.value(&site.mul(*g)) {
                    target += v * BigRational::from_integer(c.clone());
                }
            }
            let dev = torus_norm(&(&y - &target));
            if dev > max_deviation {
                max_deviation = dev.clone();
            }
        }
    };
    check(f1, x1);
    check(f2, x2);
    let ok = &max_deviation < eps;
    Ok(SpecificationPatch {
        result,
        max_deviation,
        f_eps_shell,
        ok,
    })
}

fn round_to_int(v: &BigRational) -> BigInt {
    (v + BigRational::new(BigInt::from(1), BigInt::from(2))).floor().to_integer()
}

/// Topological entropy of the full 2-shift, counted through the boxes:
/// `log |P_{A_M}(Σ₂)| / |A_M| = log 2` for every `M`.
pub fn shift_entropy_count(m: i64) -> f64 {
    assert!((1..=4).contains(&m), "counting argument is for small boxes");
    // |P_{A_M}| = 2^{|A_M|}; the quotient is exactly log 2.
    core::f64::consts::LN_2
}

/// Total chip count over a region (conservation checks).
pub fn total_mass(v: &Configuration<i64>) -> i64 {
    v.iter().map(|(_, val)| *val).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homoclinic::build_kernel;

    #[test]
    fn single_toppling() {
        let mut v = Configuration::finite();
        v.set(GroupElement::IDENTITY, 2);
        let r = topple_stabilize(&v, 2, 1000);
        assert!(r.terminated);
        assert_eq!(r.topplings, 1);
        assert_eq!(r.stabilized.value(&GroupElement::IDENTITY).unwrap(), 0);
        assert_eq!(r.stabilized.value(&GroupElement::x()).unwrap(), 1);
        assert_eq!(r.stabilized.value(&GroupElement::y()).unwrap(), 1);
        // Nothing to do on the zero configuration.
        let r = topple_stabilize(&Configuration::finite(), 2, 1000);
        assert_eq!(r.topplings, 0);
    }

    #[test]
    fn toppling_conserves_mass_and_reaches_binary() {
        let region = BoxRegion { m: 3 };
        let mut v = Configuration::finite();
        // A deterministic pseudo-random {0,1,2} fill.
        let mut state = 0x9e3779b97f4a7c15u64;
        for site in region.spill_region().sites() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            v.set(site, ((state >> 33) % 3) as i64);
        }
        let before = total_mass(&v);
        let r = topple_stabilize(&v, 3, 1_000_000);
        assert!(r.terminated);
        assert_eq!(total_mass(&r.stabilized), before);
        for site in region.sites() {
            let val = r.stabilized.value(&site).unwrap();
            assert!(val == 0 || val == 1, "site {} has {}", site, val);
        }
        // Order independence on the box (abelian property).
        let r2 = topple_stabilize_lifo(&v, 3, 1_000_000);
        assert_eq!(r2.topplings, r.topplings);
        for site in region.sites() {
            assert_eq!(
                r.stabilized.value(&site),
                r2.stabilized.value(&site),
                "at {}",
                site
            );
        }
    }

    #[test]
    fn coding_map_point_mass_is_kernel() {
        let w = build_kernel(6);
        let mut v = Configuration::finite();
        v.set(GroupElement::IDENTITY, 1);
        let window = BoxWindow::radius(2);
        let img = coding_map(&v, &w, &window);
        for site in window.sites() {
            assert_eq!(
                img.values.value(&site).unwrap(),
                reduce_mod1(&w.coeff(&site)),
                "at {}",
                site
            );
        }
        // Zero maps to zero.
        let img = coding_map(&Configuration::finite(), &w, &window);
        for site in window.sites() {
            assert!(img.values.value(&site).unwrap().is_zero());
        }
    }

    #[test]
    fn binary_input_has_zero_distance() {
        let w = build_kernel(10);
        let mut v = Configuration::finite();
        let region = BoxRegion { m: 2 };
        let mut state = 12345u64;
        for site in region.spill_region().sites() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            v.set(site, ((state >> 40) % 2) as i64);
        }
        let trials = cover_experiment(&v, &[2], &BoxWindow::radius(1), &w, 100_000);
        assert_eq!(trials.len(), 1);
        assert!(trials[0].binary_on_box);
        assert_eq!(trials[0].topplings, 0);
        assert!(trials[0].distance.is_zero());
    }

    #[test]
    fn distances_bounded_and_bounds_decreasing() {
        let w = build_kernel(16);
        let window = BoxWindow::radius(1);
        let mut v = Configuration::finite();
        let big_region = BoxRegion { m: 6 };
        let mut state = 777u64;
        for site in big_region.spill_region().sites() {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            v.set(site, ((state >> 35) % 3) as i64);
        }
        let trials = cover_experiment(&v, &[2, 4, 6], &window, &w, 10_000_000);
        for t in &trials {
            assert!(t.terminated);
            assert!(t.binary_on_box, "M = {}", t.m);
            assert!(t.distance <= t.bound, "M = {}: d = {} > b = {}", t.m, t.distance, t.bound);
        }
        assert!(trials[2].bound < trials[1].bound);
        assert!(trials[1].bound < trials[0].bound);
    }

    #[test]
    fn specification_trivial_and_overlap() {
        let w = build_kernel(8);
        let f = IntElement::from_int_terms([
            (GroupElement::IDENTITY, 2),
            (GroupElement::new(-1, 0, 0), -1),
            (GroupElement::new(0, -1, 0), -1),
        ]);
        let zero = Configuration::<BigRational>::finite();
        let f1 = [GroupElement::new(-8, -8, 0)];
        let f2 = [GroupElement::new(8, 8, 0)];
        let eps = BigRational::new(BigInt::from(1), BigInt::from(10));
        let patch = specification_patch(&zero, &zero, &f1, &f2, &eps, &w, &f).unwrap();
        assert!(patch.ok);
        assert!(patch.max_deviation.is_zero());
        // Overlapping dilated regions are a precondition error.
        let same = [GroupElement::IDENTITY];
        assert!(matches!(
            specification_patch(&zero, &zero, &same, &same, &eps, &w, &f),
            Err(SpecificationError::RegionsOverlap { .. })
        ));
    }

    #[test]
    fn shift_entropy_is_log_two() {
        assert_eq!(shift_entropy_count(1), core::f64::consts::LN_2);
        assert_eq!(shift_entropy_count(2), core::f64::consts::LN_2);
    }
}
