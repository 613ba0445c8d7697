//! Constructive nonexpansiveness witnesses.
//!
//! For nilpotent groups, nonexpansiveness of a principal action is
//! equivalent to a unit vector killed by some irreducible unitary
//! representation. Two witness families are searched here:
//!
//! * one-dimensional characters `χ` (necessarily trivial on the center):
//!   a zero of `F(ζ₁,ζ₂) = Σ f_{(k,l,m)} ζ₁^k ζ₂^l`;
//! * p-dimensional monomial representations `π(x) = ζ₁·diag(1,θ,…,θ^{p-1})`,
//!   `π(y) = ζ₂·(cyclic shift)`, `π(z) = θ·I` for a primitive p-th root θ:
//!   a zero of `det π̃(f)`.
//!
//! Exact root-of-unity candidates (orders ≤ 12) are tried first in
//! cyclotomic arithmetic so the classical examples come out with residual
//! exactly zero; grid + golden-section refinement handles the rest.

use alloc::vec::Vec;
use alloc::{format, string::String, vec};

use num_complex::Complex64;
use num_traits::{Float, One, ToPrimitive};

use crate::bivar::BivarLaurent;
use crate::cyclo::Cyclotomic;
use crate::ring::IntElement;
use crate::twisted::unit_circle_point;

/// A point on the circle, remembered exactly when it is a root of unity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitPoint {
    RootOfUnity { num: i64, den: i64 },
    Angle(f64),
}

impl UnitPoint {
    pub fn to_c64(self) -> Complex64 {
        let t = match self {
            UnitPoint::RootOfUnity { num, den } => num as f64 / den as f64,
            UnitPoint::Angle(t) => t,
        };
        let (s, c) = Float::sin_cos(core::f64::consts::TAU * t);
        Complex64::new(c, s)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitPoint::RootOfUnity { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            UnitPoint::RootOfUnity { num, den } => format!("e^(2*pi*i*{}/{})", num, den),
            UnitPoint::Angle(t) => format!("e^(2*pi*i*{:.12})", t),
        }
    }
}

const CHAR_TOL: f64 = 1e-9;
const DET_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterWitness {
    pub zeta1: UnitPoint,
    pub zeta2: UnitPoint,
    pub residual: f64,
    /// Confirmed by a zero in exact cyclotomic arithmetic.
    pub exact: bool,
}

/// `F(ζ₁, ζ₂) = Σ_γ f_γ ζ₁^{a(γ)} ζ₂^{b(γ)}` (characters kill z).
pub fn character_value(f: &IntElement, zeta1: Complex64, zeta2: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (g, c) in f.terms() {
        acc += c.to_f64().unwrap_or(f64::NAN) * zeta1.powi(g.a as i32) * zeta2.powi(g.b as i32);
    }
    acc
}

/// Roots of unity of every order ≤ `max_order`, as reduced fractions.
fn root_of_unity_candidates(max_order: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for den in 2..=max_order {
        for num in 1..den {
            if num_integer::gcd(num, den) == 1 {
                out.push((num, den));
            }
        }
    }
    out
}

fn exact_character_zero(f: &IntElement, j1: i64, d1: i64, j2: i64, d2: i64) -> bool {
    let m = num_integer::lcm(d1, d2) as u32;
    let e1 = j1 * (m as i64 / d1);
    let e2 = j2 * (m as i64 / d2);
    let mut acc = Cyclotomic::zero(m);
    for (g, c) in f.terms() {
        acc.add_power(g.a * e1 + g.b * e2, c.clone());
    }
    acc.is_zero()
}

fn golden_refine(mut eval: impl FnMut(f64, f64) -> f64, start: (f64, f64), steps: u32) -> (f64, f64, f64) {
    let phi = 0.618_033_988_749_894_9;
    let (mut t1, mut t2) = start;
    let mut width = 0.08;
    let mut best = eval(t1, t2);
    for _ in 0..steps {
        // Coordinate-wise golden-section shrink around the incumbent.
        for coord in 0..2 {
            let (mut lo, mut hi) = if coord == 0 {
                (t1 - width, t1 + width)
            } else {
                (t2 - width, t2 + width)
            };
            let mut a = hi - phi * (hi - lo);
            let mut b = lo + phi * (hi - lo);
            let mut fa = if coord == 0 { eval(a, t2) } else { eval(t1, a) };
            let mut fb = if coord == 0 { eval(b, t2) } else { eval(t1, b) };
            for _ in 0..24 {
                if fa < fb {
                    hi = b;
                    b = a;
                    fb = fa;
                    a = hi - phi * (hi - lo);
                    fa = if coord == 0 { eval(a, t2) } else { eval(t1, a) };
                } else {
                    lo = a;
                    a = b;
                    fa = fb;
                    b = lo + phi * (hi - lo);
                    fb = if coord == 0 { eval(b, t2) } else { eval(t1, b) };
                }
            }
            let mid = 0.5 * (lo + hi);
            let fmid = if coord == 0 { eval(mid, t2) } else { eval(t1, mid) };
            if fmid <= best {
                best = fmid;
                if coord == 0 {
                    t1 = mid;
                } else {
                    t2 = mid;
                }
            }
        }
        width *= 0.35;
    }
    (t1, t2, best)
}

/// Searches for a character `χ` with `χ̃(f) = 0`. Exact candidates first,
/// then a grid scan with golden-section refinement; a witness is accepted
/// only below `1e-9`.
pub fn character_witness(f: &IntElement, grid: u32, refine_steps: u32) -> Option<CharacterWitness> {
    if f.is_zero() {
        return None;
    }
    for (j1, d1) in root_of_unity_candidates(12) {
        for (j2, d2) in root_of_unity_candidates(12) {
            if exact_character_zero(f, j1, d1, j2, d2) {
                return Some(CharacterWitness {
                    zeta1: UnitPoint::RootOfUnity { num: j1, den: d1 },
                    zeta2: UnitPoint::RootOfUnity { num: j2, den: d2 },
                    residual: 0.0,
                    exact: true,
                });
            }
        }
    }
    // Numeric scan.
    let eval = |t1: f64, t2: f64| -> f64 {
        let z1 = UnitPoint::Angle(t1).to_c64();
        let z2 = UnitPoint::Angle(t2).to_c64();
        character_value(f, z1, z2).norm()
    };
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..grid {
        for j in 0..grid {
            let t1 = i as f64 / grid as f64;
            let t2 = j as f64 / grid as f64;
            let v = eval(t1, t2);
            if v < best.2 {
                best = (t1, t2, v);
            }
        }
    }
    let (t1, t2, residual) = golden_refine(eval, (best.0, best.1), refine_steps);
    if residual < CHAR_TOL {
        Some(CharacterWitness {
            zeta1: UnitPoint::Angle(t1.rem_euclid(1.0)),
            zeta2: UnitPoint::Angle(t2.rem_euclid(1.0)),
            residual,
            exact: false,
        })
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepWitness {
    pub p: u32,
    pub theta: UnitPoint,
    pub zeta1: UnitPoint,
    pub zeta2: UnitPoint,
    pub det_residual: f64,
    pub commutation_defect: f64,
}

/// `π̃(f)` for the monomial family: `π(x) = ζ₁ D`, `π(y) = ζ₂ V`,
/// `π(z) = θ I` with `D = diag(1, θ, …, θ^{p-1})` and `V` the down-shift
/// `V e_j = e_{j+1}`; then `π(x)π(y) = θ·π(y)π(x)`.
pub fn rep_matrix(
    f: &IntElement,
    p: u32,
    theta: Complex64,
    zeta1: Complex64,
    zeta2: Complex64,
) -> Vec<Vec<Complex64>> {
    let p = p as i64;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); p as usize]; p as usize];
    for (g, c) in f.terms() {
        let scalar = c.to_f64().unwrap_or(f64::NAN)
            * zeta1.powi(g.a as i32)
            * zeta2.powi(g.b as i32)
            * theta.powi(g.c as i32);
        // (D^a V^b)_{i,j} = θ^{i·a} [j ≡ i - b (mod p)]
        for i in 0..p {
            let j = (i - g.b).rem_euclid(p);
            m[i as usize][j as usize] += scalar * theta.powi((i * g.a) as i32);
        }
    }
    m
}

/// `|det M|` by Gaussian elimination with partial pivoting (p ≤ 12).
pub fn det_magnitude(mut m: Vec<Vec<Complex64>>) -> f64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                m[a][col]
                    .norm()
                    .partial_cmp(&m[b][col].norm())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
        }
        let diag = m[col][col];
        det *= diag;
        for row in (col + 1)..n {
            let factor = m[row][col] / diag;
            for k in col..n {
                let delta = factor * m[col][k];
                m[row][k] -= delta;
            }
        }
    }
    det.norm()
}

/// `‖π(x)π(y) - θ·π(y)π(x)‖` (max-entry) — a construction self-check.
pub fn commutation_defect(p: u32, theta: Complex64, zeta1: Complex64, zeta2: Complex64) -> f64 {
    let x = rep_matrix(&IntElement::monomial(crate::group::GroupElement::x(), num_bigint::BigInt::one()), p, theta, zeta1, zeta2);
    let y = rep_matrix(&IntElement::monomial(crate::group::GroupElement::y(), num_bigint::BigInt::one()), p, theta, zeta1, zeta2);
    let n = p as usize;
    let mul = |a: &Vec<Vec<Complex64>>, b: &Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k].norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    };
    let xy = mul(&x, &y);
    let yx = mul(&y, &x);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((xy[i][j] - theta * yx[i][j]).norm());
        }
    }
    worst
}

/// Scans the monomial families for `det π̃(f) = 0`, dimensions `1..=p_max`.
/// Ties break deterministically: lowest p, then the candidate enumeration
/// order. Dimension 1 coincides with the character search.
pub fn rep_witness(f: &IntElement, p_max: u32, grid: u32) -> Option<RepWitness> {
    rep_witness_in(f, 1, p_max, grid)
}

/// Same scan restricted to dimensions `p_min..=p_max`, for exhibiting a
/// witness in a specific dimension.
pub fn rep_witness_in(f: &IntElement, p_min: u32, p_max: u32, grid: u32) -> Option<RepWitness> {
    if f.is_zero() || p_max < p_min || p_min < 1 {
        return None;
    }
    let zeta_candidates = root_of_unity_candidates(12);
    for p in p_min..=p_max {
        // Primitive p-th roots θ = e^{2πi·j/p}.
        let thetas: Vec<(i64, i64)> = if p == 1 {
            vec![(0, 1)]
        } else {
            (1..p as i64)
                .filter(|j| num_integer::gcd(*j, p as i64) == 1)
                .map(|j| (j, p as i64))
                .collect()
        };
        for (tj, td) in thetas {
            let theta_pt = UnitPoint::RootOfUnity { num: tj, den: td };
            let theta = theta_pt.to_c64();
            // Exact root-of-unity seeds first.
            for (a1, d1) in &zeta_candidates {
                for (a2, d2) in &zeta_candidates {
                    let z1 = UnitPoint::RootOfUnity { num: *a1, den: *d1 };
                    let z2 = UnitPoint::RootOfUnity { num: *a2, den: *d2 };
                    let det = det_magnitude(rep_matrix(f, p, theta, z1.to_c64(), z2.to_c64()));
                    if det < DET_TOL {
                        return Some(RepWitness {
                            p,
                            theta: theta_pt,
                            zeta1: z1,
                            zeta2: z2,
                            det_residual: det,
                            commutation_defect: commutation_defect(
                                p,
                                theta,
                                z1.to_c64(),
                                z2.to_c64(),
                            ),
                        });
                    }
                }
            }
            // Grid scan with refinement.
            let eval = |t1: f64, t2: f64| -> f64 {
                det_magnitude(rep_matrix(
                    f,
                    p,
                    theta,
                    UnitPoint::Angle(t1).to_c64(),
                    UnitPoint::Angle(t2).to_c64(),
                ))
            };
            let mut best = (0.0, 0.0, f64::INFINITY);
            for i in 0..grid {
                for j in 0..grid {
                    let t1 = i as f64 / grid as f64;
                    let t2 = j as f64 / grid as f64;
                    let v = eval(t1, t2);
                    if v < best.2 {
                        best = (t1, t2, v);
                    }
                }
            }
            let (t1, t2, det) = golden_refine(eval, (best.0, best.1), 24);
            if det < DET_TOL {
                let z1 = UnitPoint::Angle(t1.rem_euclid(1.0));
                let z2 = UnitPoint::Angle(t2.rem_euclid(1.0));
                return Some(RepWitness {
                    p,
                    theta: theta_pt,
                    zeta1: z1,
                    zeta2: z2,
                    det_residual: det,
                    commutation_defect: commutation_defect(p, theta, z1.to_c64(), z2.to_c64()),
                });
            }
        }
    }
    None
}

/// Certificate for emptiness of the unitary variety of a two-variable
/// Laurent polynomial, or a near-zero point when one is found.
#[derive(Clone, Debug, PartialEq)]
pub enum VarietyCertificate {
    Empty {
        min_modulus: f64,
        lipschitz: f64,
        step: f64,
    },
    NearZeroAt {
        xi: UnitPoint,
        theta: UnitPoint,
        value: f64,
    },
    Unknown {
        min_modulus: f64,
        lipschitz: f64,
        step: f64,
    },
}

impl VarietyCertificate {
    pub fn is_empty_certified(&self) -> bool {
        matches!(self, VarietyCertificate::Empty { .. })
    }
}

/// Rigorous grid + Lipschitz test for `𝖴(g) = ∅` on the 2-torus:
/// `min |g| > L·h` with `L = Σ|c|(|d₁|+|d₂|)` certifies emptiness.
pub fn unitary_variety_empty(g: &BivarLaurent, grid: u32) -> VarietyCertificate {
    assert!(grid >= 8);
    let l = g.lipschitz();
    let step = 2.0 * Float::sin(core::f64::consts::PI / grid as f64);
    let mut min_modulus = f64::INFINITY;
    let mut argmin = (0u32, 0u32);
    for i in 0..grid {
        let xi = unit_circle_point(i, grid);
        for j in 0..grid {
            let theta = unit_circle_point(j, grid);
            let v = g.eval(xi, theta).norm();
            if v < min_modulus {
                min_modulus = v;
                argmin = (i, j);
            }
        }
    }
    if min_modulus > l * step {
        VarietyCertificate::Empty {
            min_modulus,
            lipschitz: l,
            step,
        }
    } else if min_modulus < 1e-9 {
        VarietyCertificate::NearZeroAt {
            xi: UnitPoint::RootOfUnity {
                num: argmin.0 as i64,
                den: grid as i64,
            },
            theta: UnitPoint::RootOfUnity {
                num: argmin.1 as i64,
                den: grid as i64,
            },
            value: min_modulus,
        }
    } else {
        VarietyCertificate::Unknown {
            min_modulus,
            lipschitz: l,
            step,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::big;
    use crate::parse::parse_poly;

    #[test]
    fn character_of_stencil() {
        let f = parse_poly("2 - x^-1 - y^-1").unwrap();
        let w = character_witness(&f, 32, 16).unwrap();
        assert!(w.exact);
        assert_eq!(w.zeta1, UnitPoint::RootOfUnity { num: 0, den: 1 });
        assert_eq!(w.zeta2, UnitPoint::RootOfUnity { num: 0, den: 1 });
        assert_eq!(w.residual, 0.0);
    }

    #[test]
    fn character_of_three_x_y_minus_z() {
        let f = parse_poly("3 + x + y - z").unwrap();
        let w = character_witness(&f, 32, 16).unwrap();
        assert!(w.exact);
        // χ(x) = χ(y) = -1 and χ(z) = 1 kill f.
        assert_eq!(w.zeta1, UnitPoint::RootOfUnity { num: 1, den: 2 });
        assert_eq!(w.zeta2, UnitPoint::RootOfUnity { num: 1, den: 2 });
    }

    #[test]
    fn no_character_for_three_x_y_z() {
        let f = parse_poly("3 + x + y + z").unwrap();
        assert!(character_witness(&f, 48, 24).is_none());
        // Characters kill z, so F = 4 + ζ₁ + ζ₂ with minimum 2 at (-1,-1).
        let v = character_value(
            &f,
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        );
        assert!((v.norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn four_dim_rep_witness() {
        // 3 + x² + y² - z⁴ has the dimension-4 monomial witness at θ = i
        // with trivial phases: det(2I₄ + U² + V²) = 0.
        let f = parse_poly("3 + x^2 + y^2 - z^4").unwrap();
        let w = rep_witness_in(&f, 4, 4, 16).unwrap();
        assert_eq!(w.p, 4);
        assert_eq!(w.theta, UnitPoint::RootOfUnity { num: 1, den: 4 });
        assert!(w.det_residual < 1e-12);
        assert!(w.commutation_defect < 1e-12);
        assert_eq!(w.zeta1, UnitPoint::RootOfUnity { num: 0, den: 1 });
        assert_eq!(w.zeta2, UnitPoint::RootOfUnity { num: 0, den: 1 });
        // It also admits a character witness (χ(x) = χ(y) = i), which the
        // ascending scan finds first.
        let w1 = rep_witness(&f, 4, 16).unwrap();
        assert_eq!(w1.p, 1);
        assert!(character_witness(&f, 16, 8).unwrap().exact);
    }

    #[test]
    fn rep_at_p1_is_character() {
        let f = parse_poly("3 + x + y - z").unwrap();
        let w = rep_witness(&f, 1, 16).unwrap();
        assert_eq!(w.p, 1);
        assert!(w.det_residual < 1e-12);
    }

    #[test]
    fn no_rep_witness_for_invertible_example() {
        let f = parse_poly("3 + x + y + z").unwrap();
        assert!(rep_witness(&f, 3, 12).is_none());
    }

    #[test]
    fn variety_certificates() {
        // 2 - ξ: empty (|2-ξ| ≥ 1 on the circle).
        let g = BivarLaurent::from_terms([((0, 0), big(2)), ((1, 0), big(-1))]);
        assert!(unitary_variety_empty(&g, 64).is_empty_certified());
        // 1 - ξ: vanishes at ξ = 1.
        let g = BivarLaurent::from_terms([((0, 0), big(1)), ((1, 0), big(-1))]);
        match unitary_variety_empty(&g, 64) {
            VarietyCertificate::NearZeroAt { value, .. } => assert!(value < 1e-12),
            v => panic!("expected near-zero, got {:?}", v),
        }
    }
}
