//! The expansiveness decision ladder.
//!
//! Expansiveness of the principal action of `f` is equivalent to
//! invertibility of `f` in `ℓ¹(ℍ, ℝ)`; the ladder accumulates certificates
//! for both directions, cheapest first:
//!
//! 1. lopsidedness of `f` itself (a dominant coefficient);
//! 2. a truncated Neumann inverse with exact residual `‖1 - f·u‖₁ < 1`;
//! 3. the circle-covering localization certificate;
//! 4. character witnesses, then monomial representation witnesses;
//! 5. for linear elements, the cocycle scans with exact orbit confirmation.
//!
//! Inconclusive is a first-class outcome. Sound certificates of both kinds
//! at once are an internal invariant violation and reported as such.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cocycle::{
    atomic_orbit_exact, condition1_scan, condition2_scan, decompose_linear_with_grid,
    CocycleHit, LinearDecomposition,
};
use crate::group::GroupElement;
use crate::localize::{certify_all_theta, LocalizationVerdict};
use crate::ring::{IntElement, RatElement};
use crate::witness::{character_witness, rep_witness, CharacterWitness, RepWitness};

/// Exact margin of the dominant coefficient, when positive.
pub fn lopsided_check(f: &IntElement) -> Option<(GroupElement, BigInt)> {
    if f.is_zero() {
        return None;
    }
    let total = f.l1_norm_int();
    let (g, c) = f
        .terms()
        .max_by(|(_, a), (_, b)| a.abs().cmp(&b.abs()))
        .unwrap();
    let margin = c.abs() * BigInt::from(2) - &total;
    if margin.is_positive() {
        Some((*g, margin))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeumannSeed {
    /// Series around the constant coefficient.
    Scalar,
    /// Series around the full central fibre (a lopsided Laurent polynomial
    /// in z), inverted by its own geometric series.
    Central,
}

#[derive(Clone, Debug)]
pub struct NeumannOutcome {
    pub seed: NeumannSeed,
    pub inverse: RatElement,
    /// `‖1 - f·u‖₁`, exact.
    pub residual: BigRational,
    pub certifies: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeumannError {
    NoSeries,
}

fn scalar_seed_inverse(f: &IntElement, n_terms: u32) -> Option<NeumannOutcome> {
    let c = f.constant_coeff();
    if c.is_zero() {
        return None;
    }
    // Common-denominator form: u = U/c^{N+1} with
    // U = Σ_{n≤N} (-1)^n (f - c)^n c^{N-n}, all integer.
    let mut rest = f.clone();
    rest.add_term(GroupElement::IDENTITY, -c.clone());
    let mut u_int = IntElement::zero();
    let mut power = IntElement::one();
    for n in 0..=n_terms {
        if n > 0 {
            power = power.mul(&rest);
        }
        let scale = c.pow(n_terms - n);
        let signed = if n % 2 == 0 { scale } else { -scale };
        u_int = u_int.add(&power.scale(&signed));
    }
    let denom = c.pow(n_terms + 1);
    let residual_num = IntElement::monomial(GroupElement::IDENTITY, denom.clone())
        .sub(&f.mul(&u_int))
        .l1_norm_int();
    let denom_rat = BigRational::from_integer(denom.abs());
    let residual = BigRational::from_integer(residual_num) / &denom_rat;
    let inverse = RatElement::from_terms(
        u_int
            .terms()
            .map(|(g, v)| (*g, BigRational::new(v.clone(), denom.clone()))),
    );
    Some(NeumannOutcome {
        seed: NeumannSeed::Scalar,
        inverse,
        certifies: residual < BigRational::one(),
        residual,
    })
}

/// The central fibre of `f` as `(exponent, coefficient)` pairs.
fn central_fibre(f: &IntElement) -> Vec<(i64, BigInt)> {
    f.terms()
        .filter(|(g, _)| g.is_central())
        .map(|(g, c)| (g.c, c.clone()))
        .collect()
}

/// Neumann series around the whole central fibre `A` (a lopsided Laurent
/// polynomial in z, inverted by its negative-binomial series): with the
/// dominant term `d·z^{j₀}` and remainder `s = A - d·z^{j₀}`,
///
/// ```text
/// A^{-k} = Σ_n (-1)^n C(n+k-1, n) s^n z^{-(k+n)j₀} / d^{k+n},
/// u      = Σ_{M≤N} (-1)^M B^M A^{-(M+1)},   B = f - A.
/// ```
///
/// Everything is assembled over the common denominator `d^{N+1+K}`, so the
/// whole computation is integer arithmetic and one final division.
fn central_seed_inverse(f: &IntElement, n_terms: u32, inner: u32) -> Option<NeumannOutcome> {
    let fibre = central_fibre(f);
    if fibre.is_empty() || fibre.len() == f.len() {
        return None; // nothing central to gain, or f itself is central
    }
    let total: BigInt = fibre.iter().map(|(_, c)| c.abs()).sum();
    let (j0, d) = fibre.iter().max_by_key(|(_, c)| c.abs())?.clone();
    if d.abs() * BigInt::from(2) <= total {
        return None; // not lopsided, the geometric series diverges
    }
    // s = A - d·z^{j₀}, integer central element with ‖s‖₁ < |d|.
    let mut s = IntElement::zero();
    for (j, c) in &fibre {
        if *j != j0 {
            s.add_term(GroupElement::new(0, 0, *j), c.clone());
        }
    }
    let s_pows: Vec<IntElement> = {
        let mut v = alloc::vec![IntElement::one()];
        for n in 1..=inner as usize {
            let next = v[n - 1].mul(&s);
            v.push(next);
        }
        v
    };
    let b = IntElement::from_terms(
        f.terms()
            .filter(|(g, _)| !g.is_central())
            .map(|(g, c)| (*g, c.clone())),
    );
    let denom_exp = n_terms + 1 + inner;
    let mut u_int = IntElement::zero();
    let mut b_pow = IntElement::one();
    for m in 0..=n_terms {
        if m > 0 {
            b_pow = b_pow.mul(&b);
        }
        let k = m + 1;
        // W_k = Σ_n (-1)^n C(n+k-1,n) s^n z^{-(k+n)j₀} d^{denom_exp-k-n}
        let mut w = IntElement::zero();
        for (n, s_n) in s_pows.iter().enumerate() {
            let n_u = n as u32;
            if s_n.is_zero() {
                break;
            }
            let c = crate::qbinom::binomial((n_u + k - 1) as u64, n as u64);
            let scale = c * d.pow(denom_exp - k - n_u);
            let scale = if n % 2 == 0 { scale } else { -scale };
            let shift = IntElement::monomial(
                GroupElement::new(0, 0, -((k as i64 + n as i64) * j0)),
                scale,
            );
            w = w.add(&s_n.mul(&shift));
        }
        let term = b_pow.mul(&w);
        u_int = if m % 2 == 0 {
            u_int.add(&term)
        } else {
            u_int.sub(&term)
        };
    }
    let denom = d.pow(denom_exp);
    let residual_num = IntElement::monomial(GroupElement::IDENTITY, denom.clone())
        .sub(&f.mul(&u_int))
        .l1_norm_int();
    let residual = BigRational::from_integer(residual_num)
        / BigRational::from_integer(denom.abs());
    let inverse = RatElement::from_terms(
        u_int
            .terms()
            .map(|(g, v)| (*g, BigRational::new(v.clone(), denom.clone()))),
    );
    Some(NeumannOutcome {
        seed: NeumannSeed::Central,
        inverse,
        certifies: residual < BigRational::one(),
        residual,
    })
}

/// Attempts the Neumann series around the constant coefficient and, if
/// that fails to certify, around the whole central fibre. The residual is
/// always computed exactly; `residual < 1` is a sound invertibility
/// certificate regardless of how the candidate inverse was produced.
pub fn neumann_inverse(f: &IntElement, n_terms: u32, inner: u32) -> Result<NeumannOutcome, NeumannError> {
    let scalar = scalar_seed_inverse(f, n_terms);
    if let Some(out) = &scalar {
        if out.certifies {
            return Ok(scalar.unwrap());
        }
    }
    if let Some(out) = central_seed_inverse(f, n_terms, inner) {
        if out.certifies || scalar.is_none() {
            return Ok(out);
        }
    }
    scalar.ok_or(NeumannError::NoSeries)
}

/// Replays the constructive direction of the lopsided equivalence: rounds
/// `q·u` to an integer element `h` and checks that `h·f` is lopsided,
/// exactly.
pub fn lopsided_ideal_search(f: &IntElement, n_terms: u32, inner: u32) -> Option<IntElement> {
    let outcome = neumann_inverse(f, n_terms, inner).ok()?;
    if outcome.residual >= BigRational::new(BigInt::one(), BigInt::from(2)) {
        return None;
    }
    let norm_f = f.l1_norm_int();
    // q > ‖f‖₁; larger denominators tolerate more rounding slack.
    for q in [
        &norm_f + BigInt::one(),
        &norm_f * BigInt::from(4),
        &norm_f * BigInt::from(64),
    ] {
        let q_rat = BigRational::from_integer(q.clone());
        let h = IntElement::from_terms(outcome.inverse.terms().map(|(g, c)| {
            let scaled = c * &q_rat;
            (*g, round_rational(&scaled))
        }));
        let hf = h.mul(f);
        if lopsided_check(&hf).is_some() {
            return Some(hf);
        }
    }
    None
}

fn round_rational(v: &BigRational) -> BigInt {
    (v + BigRational::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer()
}

/// Budget knobs for the ladder; every stage can be disabled.
#[derive(Clone, Debug)]
pub struct Budget {
    pub run_lopsided: bool,
    pub run_neumann: bool,
    pub neumann_terms: u32,
    pub neumann_inner: u32,
    pub run_localization: bool,
    pub localization_grid: u32,
    pub localization_terms: u32,
    pub run_characters: bool,
    pub character_grid: u32,
    pub character_refine: u32,
    pub run_representations: bool,
    pub rep_p_max: u32,
    pub rep_grid: u32,
    pub run_cocycle: bool,
    pub cocycle_theta_grid: u32,
    pub cocycle_xi_grid: u32,
    pub cocycle_p_max: u32,
    pub variety_grid: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            run_lopsided: true,
            run_neumann: true,
            neumann_terms: 18,
            neumann_inner: 96,
            run_localization: true,
            localization_grid: 512,
            localization_terms: 14,
            run_characters: true,
            character_grid: 48,
            character_refine: 24,
            run_representations: true,
            rep_p_max: 8,
            rep_grid: 20,
            run_cocycle: true,
            cocycle_theta_grid: 128,
            cocycle_xi_grid: 128,
            cocycle_p_max: 12,
            variety_grid: 128,
        }
    }
}

impl Budget {
    /// A slimmer ladder for bulk sweeps.
    pub fn quick() -> Self {
        Budget {
            neumann_terms: 10,
            neumann_inner: 48,
            localization_grid: 256,
            localization_terms: 12,
            character_grid: 24,
            character_refine: 12,
            rep_p_max: 4,
            rep_grid: 10,
            cocycle_theta_grid: 64,
            cocycle_xi_grid: 64,
            cocycle_p_max: 6,
            variety_grid: 64,
            ..Budget::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Expansive,
    Nonexpansive,
    Inconclusive,
    /// Sound certificates on both sides: an internal invariant violation.
    Contradiction,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    Lopsided {
        at: GroupElement,
        margin: BigInt,
    },
    NeumannResidual {
        seed: NeumannSeed,
        residual: BigRational,
        certifies: bool,
    },
    Localization {
        verdict: LocalizationVerdict,
        grid: u32,
    },
    Character(CharacterWitness),
    Representation(RepWitness),
    CocycleHit {
        hit: CocycleHit,
        confirmed: bool,
    },
    CocycleCrossing {
        theta_lo: f64,
        theta_hi: f64,
        advisory: bool,
    },
    CocycleNotLinear,
}

impl Evidence {
    pub fn describe(&self) -> String {
        match self {
            Evidence::Lopsided { at, margin } => {
                format!("lopsided at {} with margin {}", at, margin)
            }
            Evidence::NeumannResidual {
                seed,
                residual,
                certifies,
            } => format!(
                "neumann series ({:?} seed) residual {} ({})",
                seed,
                residual,
                if *certifies { "certifies" } else { "no certificate" }
            ),
            Evidence::Localization { verdict, grid } => {
                format!("localization over {} characters: {:?}", grid, verdict)
            }
            Evidence::Character(w) => format!(
                "character witness ({}, {}), residual {:e}{}",
                w.zeta1.describe(),
                w.zeta2.describe(),
                w.residual,
                if w.exact { " (exact)" } else { "" }
            ),
            Evidence::Representation(w) => format!(
                "dimension-{} representation witness, |det| = {:e}",
                w.p, w.det_residual
            ),
            Evidence::CocycleHit { hit, confirmed } => format!(
                "cocycle orbit zero {}{}",
                crate::cocycle::describe_hit(hit),
                if *confirmed { " [confirmed]" } else { "" }
            ),
            Evidence::CocycleCrossing {
                theta_lo,
                theta_hi,
                advisory,
            } => format!(
                "mahler-difference sign change in ({:.12}, {:.12}){}",
                theta_lo,
                theta_hi,
                if *advisory { " (advisory)" } else { "" }
            ),
            Evidence::CocycleNotLinear => String::from("not linear in either generator"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Vec<Evidence>,
}

/// Runs the full ladder, accumulating evidence from every enabled stage.
pub fn decide(f: &IntElement, budget: &Budget) -> Verdict {
    let mut evidence = Vec::new();
    let mut expansive = false;
    let mut nonexpansive = false;

    if f.is_zero() {
        // ρ^0 annihilates everything; the action on the full torus shift
        // is never expansive.
        return Verdict {
            status: Status::Nonexpansive,
            evidence: vec![],
        };
    }

    if budget.run_lopsided {
        if let Some((at, margin)) = lopsided_check(f) {
            evidence.push(Evidence::Lopsided { at, margin });
            expansive = true;
        }
    }

    if budget.run_neumann {
        if let Ok(outcome) = neumann_inverse(f, budget.neumann_terms, budget.neumann_inner) {
            if outcome.certifies {
                expansive = true;
            }
            evidence.push(Evidence::NeumannResidual {
                seed: outcome.seed,
                residual: outcome.residual,
                certifies: outcome.certifies,
            });
        }
    }

    if budget.run_localization {
        let cert = certify_all_theta(f, budget.localization_grid, budget.localization_terms);
        match &cert.verdict {
            LocalizationVerdict::InvertibleEverywhere => expansive = true,
            LocalizationVerdict::NoninvertibleAtOne(_) => nonexpansive = true,
            LocalizationVerdict::Inconclusive => {}
        }
        evidence.push(Evidence::Localization {
            verdict: cert.verdict,
            grid: cert.grid_size,
        });
    }

    if budget.run_characters {
        if let Some(w) = character_witness(f, budget.character_grid, budget.character_refine) {
            if w.exact {
                nonexpansive = true;
            }
            evidence.push(Evidence::Character(w));
        }
    }

    if budget.run_representations {
        if let Some(w) = rep_witness(f, budget.rep_p_max, budget.rep_grid) {
            // A monomial witness at an exact root-of-unity tuple is sound;
            // refined numeric minima count as strong evidence only.
            if w.det_residual < 1e-10 && w.zeta1.is_exact() && w.zeta2.is_exact() {
                nonexpansive = true;
            }
            evidence.push(Evidence::Representation(w));
        }
    }

    if budget.run_cocycle {
        match decompose_linear_with_grid(f, budget.variety_grid) {
            Ok(d) => {
                let c2 = condition2_scan(&d, budget.cocycle_p_max, budget.cocycle_xi_grid);
                for hit in c2.hits {
                    let confirmed = hit.exact && !c2.advisory;
                    // An exact orbit zero is sound even without the variety
                    // precondition when it comes from the atomic criterion:
                    // re-check nonvanishing of g₀g₁ along the orbit.
                    let atomic_sound = hit.exact && confirm_atomic(&d, &hit);
                    if confirmed || atomic_sound {
                        nonexpansive = true;
                    }
                    evidence.push(Evidence::CocycleHit {
                        hit,
                        confirmed: confirmed || atomic_sound,
                    });
                }
                let c1 = condition1_scan(&d, budget.cocycle_theta_grid);
                for crossing in c1.crossings {
                    evidence.push(Evidence::CocycleCrossing {
                        theta_lo: crossing.theta_lo,
                        theta_hi: crossing.theta_hi,
                        advisory: c1.advisory,
                    });
                }
            }
            Err(_) => evidence.push(Evidence::CocycleNotLinear),
        }
    }

    let status = match (expansive, nonexpansive) {
        (true, true) => Status::Contradiction,
        (true, false) => Status::Expansive,
        (false, true) => Status::Nonexpansive,
        (false, false) => Status::Inconclusive,
    };
    Verdict { status, evidence }
}

fn confirm_atomic(d: &LinearDecomposition, hit: &CocycleHit) -> bool {
    if let crate::witness::UnitPoint::RootOfUnity { num, den } = hit.xi {
        atomic_orbit_exact(d, hit.p, hit.theta_num as i64, hit.p as i64, num, den)
            == Some(true)
    } else {
        false
    }
}
