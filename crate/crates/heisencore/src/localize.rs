//! Invertibility certificates through the local principle.
//!
//! An element of `ℓ¹(ℍ, ℂ)` is invertible iff its image in every quotient
//! by the closed two-sided ideal at a central character `θ ∈ S¹` is.
//! Quotient norms are handled exclusively through upper bounds (twisted ℓ¹
//! norms of representatives), which is all the Neumann-style arguments
//! need. Two certificate shapes cover the circle:
//!
//! * a dominant `(k,l)` fibre — `|f_{(k,l)}(θ)| > Σ_{rest} |f_{(m,n)}(θ)|`
//!   makes the image invertible outright;
//! * a Neumann split `f = A + B` with `A = f_e + Σ sgn(f_γ)·γ` over a small
//!   support subset: an upper bound `U ≥ ‖A⁻¹‖_θ` from exact powers of the
//!   unit part, accepted when `U·‖B‖_θ < 1`.
//!
//! A grid sweep with explicit Lipschitz constants in the chord metric
//! (`|θ^m - θ'^m| ≤ |m|·|θ - θ'|`) turns pointwise checks into a rigorous
//! covering of all of `S¹`. The sweep alone never declares noninvertibility
//! except through an exact character zero in the abelianization at `θ = 1`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use alloc::{format, string::String, vec};

use num_complex::Complex64;
use num_traits::{Float, ToPrimitive, Zero};
use num_traits::Signed;

use crate::cyclo::Cyclotomic;
use crate::group::GroupElement;
use crate::laurent::LaurentPoly;
use crate::ring::IntElement;
use crate::twisted::unit_circle_point;

/// `|p(θ)|` together with the chord-metric Lipschitz constant `Σ|c_j||j|`.
fn fibre_abs(p: &LaurentPoly, theta: Complex64) -> f64 {
    p.eval_c64(theta).norm()
}

/// Dominant-fibre margin at `θ`:
/// `max_{(k,l)} ( |f_{(k,l)}(θ)| - Σ_{(m,n)≠(k,l)} |f_{(m,n)}(θ)| )`.
///
/// A positive value certifies invertibility of the image at `θ`.
pub fn dominant_margin(f: &IntElement, theta: Complex64) -> f64 {
    let fibres = f.int_fibres();
    let values: Vec<f64> = fibres.values().map(|p| fibre_abs(p, theta)).collect();
    let total: f64 = values.iter().sum();
    values
        .iter()
        .map(|v| v - (total - v))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Lipschitz constant of every fibre magnitude (and hence of the margin)
/// in the chord metric: `L = Σ_{(k,l)} Σ_m |f_{(k,l,m)}|·|m|`.
pub fn margin_lipschitz(f: &IntElement) -> f64 {
    f.terms()
        .map(|(g, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * (g.c.abs() as f64))
        .sum()
}

/// A Neumann split: `A = f_e·1 + Σ_{γ ∈ unit_part} sgn(f_γ)·γ`, `B = f - A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub unit_part: Vec<GroupElement>,
}

impl SplitSpec {
    pub fn describe(&self) -> String {
        if self.unit_part.is_empty() {
            String::from("constant")
        } else {
            let mut s = String::from("constant");
            for g in &self.unit_part {
                s += &format!(" + {}", g);
            }
            s
        }
    }
}

/// Why a split certificate failed at a point/arc.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitFailure {
    NoConstantTerm,
    SeriesDiverges { unit_norm: f64, constant: f64 },
    BoundTooLarge { bound: f64 },
}

/// Tries the Neumann split certificate for all `θ` within chord distance
/// `radius` of `theta`; returns the certified bound `U·‖B‖ < 1` at the arc.
///
/// With `radius = 0` this is the pointwise certificate.
pub fn neumann_split_certificate(
    f: &IntElement,
    theta: Complex64,
    split: &SplitSpec,
    n_terms: u32,
    radius: f64,
) -> Result<f64, SplitFailure> {
    let constant = f.constant_coeff();
    if constant.is_zero() {
        return Err(SplitFailure::NoConstantTerm);
    }
    let c_abs = constant.abs().to_f64().unwrap_or(0.0);

    // Unit part a = Σ sgn(f_γ)·γ, exact in the group ring.
    let mut a = IntElement::zero();
    for g in &split.unit_part {
        let coeff = f.coeff(g);
        if coeff.is_zero() || g.is_identity() {
            continue;
        }
        a.add_term(*g, coeff.signum());
    }
    // B = f - constant - a.
    let mut b = f.clone();
    b.add_term(GroupElement::IDENTITY, -constant.clone());
    b = b.sub(&a);

    let arc_upper = |e: &IntElement| -> f64 {
        e.int_fibres()
            .values()
            .map(|p| fibre_abs(p, theta) + p.lipschitz_on_circle() * radius)
            .sum()
    };

    let b_norm = arc_upper(&b);
    let a_norm = arc_upper(&a);
    if a_norm >= c_abs {
        return Err(SplitFailure::SeriesDiverges {
            unit_norm: a_norm,
            constant: c_abs,
        });
    }

    // U ≥ ‖A⁻¹‖_θ from exact powers of a: U = Σ_{n≤N} ‖a^n‖_θ / |c|^{n+1}
    // plus the geometric tail (‖a‖_θ/|c|)^{N+1}/(|c| - ‖a‖_θ).
    let mut u = 0.0;
    let mut power = IntElement::one();
    for n in 0..=n_terms {
        if n > 0 {
            power = power.mul(&a);
        }
        u += arc_upper(&power) / c_abs.powi(n as i32 + 1);
    }
    let ratio = a_norm / c_abs;
    u += ratio.powi(n_terms as i32 + 1) / (c_abs - a_norm);

    let bound = u * b_norm;
    if bound < 1.0 {
        Ok(bound)
    } else {
        Err(SplitFailure::BoundTooLarge { bound })
    }
}

/// The split family tried at every failing grid point: the bare constant,
/// then the constant plus each single and each pair of non-central support
/// elements (signs normalised to units).
pub fn split_family(f: &IntElement) -> Vec<SplitSpec> {
    let noncentral: Vec<GroupElement> = f
        .support()
        .filter(|g| !g.is_central())
        .copied()
        .collect();
    let mut out = vec![SplitSpec { unit_part: Vec::new() }];
    for (i, g) in noncentral.iter().enumerate() {
        out.push(SplitSpec {
            unit_part: vec![*g],
        });
        for h in noncentral.iter().skip(i + 1) {
            out.push(SplitSpec {
                unit_part: vec![*g, *h],
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum PerThetaMethod {
    DominantMargin { margin: f64 },
    NeumannSplit { split: String, bound: f64 },
    Uncovered { margin: f64, best_bound: Option<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerTheta {
    pub index: u32,
    pub theta: Complex64,
    pub method: PerThetaMethod,
}

/// An exact character zero of the abelianization, the only route by which
/// the sweep itself reports noninvertibility.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianZero {
    /// ζ₁ = e^{2πi·j1/m}, ζ₂ = e^{2πi·j2/m}.
    pub order: u32,
    pub j1: u32,
    pub j2: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LocalizationVerdict {
    InvertibleEverywhere,
    NoninvertibleAtOne(AbelianZero),
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct LocalizationCertificate {
    pub verdict: LocalizationVerdict,
    pub grid_size: u32,
    /// Chord step between adjacent grid points.
    pub step: f64,
    pub lipschitz: f64,
    pub per_theta: Vec<PerTheta>,
}

/// Exact zero search of `Σ_γ f_γ ζ₁^{a} ζ₂^{b}` (the `θ = 1` quotient is
/// the commutative algebra over the 2-torus) over root-of-unity pairs of
/// order dividing `orders`.
pub fn abelian_exact_zero(f: &IntElement, orders: &[u32]) -> Option<AbelianZero> {
    for &m in orders {
        for j1 in 0..m {
            for j2 in 0..m {
                let mut acc = Cyclotomic::zero(m);
                for (g, c) in f.terms() {
                    acc.add_power(g.a * j1 as i64 + g.b * j2 as i64, c.clone());
                }
                if acc.is_zero() {
                    return Some(AbelianZero { order: m, j1, j2 });
                }
            }
        }
    }
    None
}

/// Sweeps the circle of central characters with `grid_size` points and
/// assembles a covering certificate. Sound but incomplete: `Inconclusive`
/// is a first-class outcome.
pub fn certify_all_theta(f: &IntElement, grid_size: u32, n_terms: u32) -> LocalizationCertificate {
    assert!(grid_size >= 8, "grid too coarse to mean anything");
    let lipschitz = margin_lipschitz(f);
    let step = 2.0 * Float::sin(core::f64::consts::PI / grid_size as f64);
    let threshold = lipschitz * step;
    // Guard against float rounding in the margin evaluations themselves.
    let eps = 1e-9;

    let splits = split_family(f);
    let mut per_theta = Vec::with_capacity(grid_size as usize);
    let mut all_covered = true;

    for idx in 0..grid_size {
        let theta = unit_circle_point(idx, grid_size);
        let margin = dominant_margin(f, theta);
        let method = if margin > threshold + eps {
            PerThetaMethod::DominantMargin { margin }
        } else {
            // Cover the Voronoi arc of this grid point, chord radius ~step/2.
            let radius = 0.55 * step;
            let mut found: Option<(String, f64)> = None;
            let mut best: Option<f64> = None;
            for split in &splits {
                match neumann_split_certificate(f, theta, split, n_terms, radius) {
                    Ok(bound) if bound < 1.0 - eps => {
                        found = Some((split.describe(), bound));
                        break;
                    }
                    Ok(bound) => {
                        best = Some(best.map_or(bound, |b: f64| b.min(bound)));
                    }
                    Err(SplitFailure::BoundTooLarge { bound }) => {
                        best = Some(best.map_or(bound, |b: f64| b.min(bound)));
                    }
                    Err(_) => {}
                }
            }
            match found {
                Some((split, bound)) => PerThetaMethod::NeumannSplit { split, bound },
                None => {
                    all_covered = false;
                    PerThetaMethod::Uncovered {
                        margin,
                        best_bound: best,
                    }
                }
            }
        };
        per_theta.push(PerTheta {
            index: idx,
            theta,
            method,
        });
    }

    let verdict = if all_covered {
        LocalizationVerdict::InvertibleEverywhere
    } else if let Some(zero) = abelian_exact_zero(f, &[1, 2, 3, 4, 6, 12]) {
        LocalizationVerdict::NoninvertibleAtOne(zero)
    } else {
        LocalizationVerdict::Inconclusive
    };

    LocalizationCertificate {
        verdict,
        grid_size,
        step,
        lipschitz,
        per_theta,
    }
}

/// Fibre magnitudes `(k, l) ↦ |f_{(k,l)}(θ)|`, exposed for reports.
pub fn fibre_magnitudes(f: &IntElement, theta: Complex64) -> BTreeMap<(i64, i64), f64> {
    f.int_fibres()
        .iter()
        .map(|(kl, p)| (*kl, fibre_abs(p, theta)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn minus_one() -> Complex64 {
        Complex64::new(-1.0, 0.0)
    }

    #[test]
    fn margins_for_three_x_y_z() {
        let f = parse_poly("3 + x + y + z").unwrap();
        // θ = i: |3+i| - 2 = √10 - 2
        let m = dominant_margin(&f, Complex64::new(0.0, 1.0));
        assert!((m - (10.0f64.sqrt() - 2.0)).abs() < 1e-12);
        // θ = -1: margin exactly 0, the split certificate must take over.
        let m = dominant_margin(&f, minus_one());
        assert!(m.abs() < 1e-12);
    }

    #[test]
    fn margin_positive_for_central_heavy_example() {
        // 5 + z - z⁻¹ + z² - z⁻² + (four non-central unit terms)
        let f = parse_poly("5 + z - z^-1 + z^2 - z^-2 + x^2 + x^-2 + y^2 + y^-2").unwrap();
        for idx in 0..256 {
            let theta = unit_circle_point(idx, 256);
            assert!(dominant_margin(&f, theta) > 0.9);
        }
    }

    #[test]
    fn split_certificate_for_three_x_y_z_at_minus_one() {
        let f = parse_poly("3 + x + y + z").unwrap();
        let split = SplitSpec {
            unit_part: vec![GroupElement::x(), GroupElement::y()],
        };
        let bound = neumann_split_certificate(&f, minus_one(), &split, 12, 0.0).unwrap();
        assert!(bound < 1.0, "bound = {}", bound);
        assert!(bound > 0.5, "sanity: {}", bound);
        // The bare constant split cannot work here: U ≥ 1/3 and ‖B‖ = 3.
        let bare = neumann_split_certificate(&f, minus_one(), &SplitSpec { unit_part: vec![] }, 12, 0.0);
        assert!(bare.is_err());
    }

    #[test]
    fn trick2_regime() {
        // |a|+|b|+|c| + a·x + b·y + c·z with |a|+|b| > 2, c > 0.
        for (a, b, c) in [(2i64, 1i64, 1i64), (3, -3, 1), (-2, 2, 3), (3, 1, 3)] {
            let s = a.abs() + b.abs() + c.abs();
            let f = parse_poly(&format!("{} + {}*x + {}*y + {}*z", s, a, b, c))
                .or_else(|_| {
                    parse_poly(&format!("{} + {}*x + {}*y + {}*z", s, a, b, c).replace("+ -", "- "))
                })
                .unwrap();
            let split = SplitSpec {
                unit_part: vec![GroupElement::x(), GroupElement::y()],
            };
            let bound = neumann_split_certificate(&f, minus_one(), &split, 16, 0.0).unwrap();
            assert!(bound < 1.0, "(a,b,c)=({},{},{}) bound={}", a, b, c, bound);
        }
    }

    #[test]
    fn certify_examples() {
        let f = parse_poly("3 + x + y + z").unwrap();
        let cert = certify_all_theta(&f, 128, 12);
        assert_eq!(cert.verdict, LocalizationVerdict::InvertibleEverywhere);

        let f = parse_poly("3 + x*y + y*x + z").unwrap();
        let cert = certify_all_theta(&f, 128, 12);
        assert_eq!(cert.verdict, LocalizationVerdict::InvertibleEverywhere);

        let f = parse_poly("4 + x + y + x^-1 + z").unwrap();
        let cert = certify_all_theta(&f, 128, 12);
        assert_eq!(cert.verdict, LocalizationVerdict::InvertibleEverywhere);

        let f = parse_poly("2 - x^-1 - y^-1").unwrap();
        let cert = certify_all_theta(&f, 128, 12);
        match cert.verdict {
            LocalizationVerdict::NoninvertibleAtOne(z) => {
                assert_eq!((z.j1, z.j2), (0, 0));
            }
            v => panic!("expected noninvertible at θ=1, got {:?}", v),
        }
    }

    #[test]
    fn margin_lipschitz_bound_holds_between_grid_points() {
        let f = parse_poly("3 + x^2 + y + z^2").unwrap();
        let grid = 512;
        let l = margin_lipschitz(&f);
        let h = 2.0 * Float::sin(core::f64::consts::PI / grid as f64);
        let mut prev = dominant_margin(&f, unit_circle_point(0, grid));
        for idx in 1..=grid {
            let cur = dominant_margin(&f, unit_circle_point(idx % grid, grid));
            assert!((cur - prev).abs() <= l * h + 1e-9);
            prev = cur;
        }
    }
}
