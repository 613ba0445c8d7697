//! Exact q-binomial (Gaussian coefficient) machinery.
//!
//! `[n k]_q = Π_{i=0}^{k-1} (1-q^{n-i})/(1-q^{i+1})` is a polynomial of
//! degree `k(n-k)` with nonnegative, symmetric, unimodal integer
//! coefficients. The q-binomial theorem ties it to the group: with
//! `q = z⁻¹`, `(x+y)^n = Σ_k [n k]·x^k y^{n-k}`.
//!
//! Two independent construction routes are kept deliberately: the product
//! formula with exact division (single coefficients) and the q-Pascal
//! recurrence (bulk rows for the norm series); the tests hold them against
//! each other.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::group::GroupElement;
use crate::laurent::LaurentPoly;
use crate::ring::IntElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QBinomError {
    KOutOfRange { n: u32, k: u32 },
    NotAPolynomial { n: u32, k: u32, p: u32 },
    PreconditionViolated(&'static str),
}

impl fmt::Display for QBinomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QBinomError::KOutOfRange { n, k } => write!(f, "k = {} out of range 0..={}", k, n),
            QBinomError::NotAPolynomial { n, k, p } => {
                write!(f, "[{} {}]·(1-q)/(1-q^{}) is not a polynomial", n, k, p)
            }
            QBinomError::PreconditionViolated(msg) => write!(f, "{}", msg),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBinomial {
    pub n: u32,
    pub k: u32,
    pub poly: LaurentPoly,
}

/// `[n k]_q` by the product formula, each step an exact division.
pub fn qbinom(n: u32, k: u32) -> Result<QBinomial, QBinomError> {
    if k > n {
        return Err(QBinomError::KOutOfRange { n, k });
    }
    let mut poly = LaurentPoly::one();
    for i in 0..k {
        poly = poly.mul(&LaurentPoly::one_minus_q_pow((n - i) as i64));
        poly = poly
            .div_exact(&LaurentPoly::one_minus_q_pow((i + 1) as i64))
            .expect("partial products of the Gaussian coefficient are polynomials");
    }
    Ok(QBinomial { n, k, poly })
}

/// The whole row `[n 0], …, [n n]` by the q-Pascal rule
/// `[n k] = [n-1 k-1] + q^k·[n-1 k]`.
pub fn qbinom_row(n: u32) -> Vec<LaurentPoly> {
    let mut row = vec![LaurentPoly::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        next.push(LaurentPoly::one());
        for k in 1..m {
            let shifted = row[k as usize].shift(k as i64);
            next.push(row[k as usize - 1].add(&shifted));
        }
        next.push(LaurentPoly::one());
        row = next;
    }
    row
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(x+y)^n` in the group ring, assembled from the q-binomial theorem with
/// `q = z⁻¹`: the `x^k y^{n-k}` fibre is `[n k]` read off at `z^{-j}`.
pub fn expand_xy_power(n: u32) -> IntElement {
    let row = qbinom_row(n);
    let mut out = IntElement::zero();
    for (k, poly) in row.iter().enumerate() {
        for (j, c) in poly.terms() {
            out.add_term(
                GroupElement::new(k as i64, (n as usize - k) as i64, -j),
                c.clone(),
            );
        }
    }
    out
}

/// Quotient form selector for [`a_quotient`]-style norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientForm {
    /// `A_{n,k,p} = [n k]·(1-q)/(1-q^p)`.
    PrimeDenominator(u32),
    /// `A_{n,k} = [n k]·(1-q^d)/(1-q^n)` with `d = gcd(n, k)`.
    BrunettiDelLungo,
}

/// `[n k]·(1-q)/(1-q^p)`, exact; errors when the division leaves a remainder.
pub fn a_quotient(n: u32, k: u32, p: u32) -> Result<LaurentPoly, QBinomError> {
    let qb = qbinom(n, k)?;
    let num = qb.poly.mul(&LaurentPoly::one_minus_q_pow(1));
    num.div_exact(&LaurentPoly::one_minus_q_pow(p as i64))
        .ok_or(QBinomError::NotAPolynomial { n, k, p })
}

/// `[n k]·(1-q^d)/(1-q^n)` with `d = gcd(n,k)`; a polynomial with
/// nonnegative coefficients for every `0 < k ≤ n`.
pub fn brunetti_quotient(n: u32, k: u32) -> Result<LaurentPoly, QBinomError> {
    if k == 0 || k > n {
        return Err(QBinomError::KOutOfRange { n, k });
    }
    let d = (n as i64).gcd(&(k as i64));
    let qb = qbinom(n, k)?;
    let num = qb.poly.mul(&LaurentPoly::one_minus_q_pow(d));
    num.div_exact(&LaurentPoly::one_minus_q_pow(n as i64))
        .ok_or(QBinomError::NotAPolynomial { n, k, p: n })
}

fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut is_comp = vec![false; limit as usize + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if !is_comp[p as usize] {
            primes.push(p);
            let mut m = p * p;
            while m <= limit {
                is_comp[m as usize] = true;
                m += p;
            }
        }
    }
    primes
}

/// Multiplicity of the prime `p` in `binomial(n, k)` by Kummer's rule:
/// the number of carries when adding `k` and `n-k` in base `p`.
fn kummer_carries(n: u64, k: u64, p: u64) -> u32 {
    let mut carries = 0u32;
    let mut a = k;
    let mut b = n - k;
    let mut carry = 0u64;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = if s >= p { 1 } else { 0 };
        carries += carry as u32;
        a /= p;
        b /= p;
    }
    carries
}

/// The largest prime `p > k` dividing `binomial(n,k)`. Sylvester–Schur
/// guarantees one exists whenever `n ≥ 2k ≥ 2`.
pub fn sylvester_prime(n: u32, k: u32) -> Result<u64, QBinomError> {
    if !(k >= 1 && n >= 2 * k) {
        return Err(QBinomError::PreconditionViolated(
            "sylvester_prime requires n >= 2k >= 2",
        ));
    }
    let primes = sieve_primes(n as u64);
    for &p in primes.iter().rev() {
        if p > k as u64 && kummer_carries(n as u64, k as u64, p) > 0 {
            return Ok(p);
        }
    }
    Err(QBinomError::PreconditionViolated(
        "no prime divisor > k found; Sylvester-Schur violated?",
    ))
}

/// Exact ℓ¹ norm of `[n k]·(1-q)^m` for `m ∈ {0,1,2}`.
pub fn weighted_norm(n: u32, k: u32, m: u32) -> Result<BigInt, QBinomError> {
    if m > 2 {
        return Err(QBinomError::PreconditionViolated("m must be 0, 1 or 2"));
    }
    let qb = qbinom(n, k)?;
    Ok(weighted_norm_of_poly(&qb.poly, m))
}

fn weighted_norm_of_poly(poly: &LaurentPoly, m: u32) -> BigInt {
    let mut p = poly.clone();
    for _ in 0..m {
        p = p.mul(&LaurentPoly::one_minus_q_pow(1));
    }
    p.l1_norm()
}

/// The norm series of the central-multiplier estimate:
/// `S(n) = Σ_k ‖[n k](1-q)‖₁` and `T(n) = 2^{-(n+1)} Σ_k ‖[n k](1-q)²‖₁`,
/// with dyadic block sums `B_j = Σ_{2^j < n ≤ 2^{j+1}} T(n)`.
#[derive(Clone, Debug)]
pub struct NormSeries {
    pub s: Vec<BigRational>,
    pub t: Vec<BigRational>,
    pub t_partial: Vec<BigRational>,
}

impl NormSeries {
    /// `B_j` for `j = 0, 1, …` as far as the computed range allows.
    pub fn block_sums(&self) -> Vec<BigRational> {
        let n_max = self.t.len() - 1;
        let mut blocks = Vec::new();
        let mut j = 0u32;
        loop {
            let lo = 1usize << j;
            let hi = 1usize << (j + 1);
            if hi > n_max {
                break;
            }
            let mut acc = BigRational::zero();
            for n in (lo + 1)..=hi {
                acc += &self.t[n];
            }
            blocks.push(acc);
            j += 1;
        }
        blocks
    }
}

/// Walks the q-Pascal triangle with dense half-rows (`k ≤ n/2`, the other
/// half by symmetry), invoking the visitor on every full row. This is the
/// bulk route: coefficient vectors, no tree maps, no polynomial products.
pub fn visit_dense_rows(n_max: u32, mut visit: impl FnMut(u32, &[Vec<BigInt>])) {
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    visit(0, &row);
    for n in 1..=n_max {
        let half = (n / 2) as usize;
        let prev_half = ((n - 1) / 2) as usize;
        let prev_at = |j: usize| -> &Vec<BigInt> {
            if j <= prev_half {
                &row[j]
            } else {
                &row[(n - 1) as usize - j]
            }
        };
        let mut next: Vec<Vec<BigInt>> = Vec::with_capacity(half + 1);
        next.push(vec![BigInt::one()]);
        for k in 1..=half {
            // [n k] = [n-1 k-1] + q^k [n-1 k], dense with offset k.
            let left = prev_at(k - 1);
            let deg = k * (n as usize - k);
            let mut out = vec![BigInt::zero(); deg + 1];
            out[..left.len()].clone_from_slice(left);
            if k as u32 <= n - 1 {
                for (i, c) in prev_at(k).iter().enumerate() {
                    out[i + k] += c;
                }
            }
            next.push(out);
        }
        row = next;
        visit(n, &row);
    }
}

/// `Σ_j |c_j - c_{j-1}|`: the ℓ¹ norm of `(1-q)·P` straight from dense
/// coefficients.
pub fn first_difference_norm(coeffs: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    let mut prev = BigInt::zero();
    for c in coeffs {
        acc += (c - &prev).abs();
        prev = c.clone();
    }
    acc + prev.abs()
}

/// `Σ_j |c_j - 2c_{j-1} + c_{j-2}|`: the ℓ¹ norm of `(1-q)²·P`.
pub fn second_difference_norm(coeffs: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    let two = BigInt::from(2);
    let n = coeffs.len();
    for j in 0..(n + 2) {
        let c0 = if j < n { coeffs[j].clone() } else { BigInt::zero() };
        let c1 = if j >= 1 && j - 1 < n {
            &coeffs[j - 1] * &two
        } else {
            BigInt::zero()
        };
        let c2 = if j >= 2 && j - 2 < n {
            coeffs[j - 2].clone()
        } else {
            BigInt::zero()
        };
        acc += (c0 - c1 + c2).abs();
    }
    acc
}

/// Exact `S(n)`, `T(n)` for `n ≤ n_max`, via rolling dense q-Pascal rows
/// and the symmetry `[n k] = [n n-k]`.
pub fn norm_series(n_max: u32) -> NormSeries {
    let two = BigInt::from(2);
    let mut s = Vec::with_capacity(n_max as usize + 1);
    let mut t = Vec::with_capacity(n_max as usize + 1);
    visit_dense_rows(n_max, |n, half_row| {
        let mut s_n = BigInt::zero();
        let mut t_n = BigInt::zero();
        for k in 0..=n {
            let idx = (k.min(n - k)) as usize;
            let coeffs = &half_row[idx];
            s_n += first_difference_norm(coeffs);
            t_n += second_difference_norm(coeffs);
        }
        s.push(BigRational::from_integer(s_n));
        t.push(BigRational::new(t_n, two.pow(n + 1)));
    });
    let mut t_partial = Vec::with_capacity(t.len());
    let mut acc = BigRational::zero();
    for v in &t {
        acc += v;
        t_partial.push(acc.clone());
    }
    NormSeries { s, t, t_partial }
}

/// Outcome of the closing-conjecture scan for one `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureScan {
    pub n: u32,
    pub k: u32,
    /// First `m ∈ [n-k, n)` making `B_{n,k}` a nonnegative polynomial.
    pub found: Option<u32>,
    /// Candidates that failed, with the reason.
    pub failures: Vec<(u32, ConjectureFailure)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureFailure {
    NotAPolynomial,
    NegativeCoefficient,
}

/// Scans `B_{n,k} = [n k]·(1-q)/(1-q^n)·(1-q)²/(1-q^m)` over
/// `m ∈ [n-k, n)`. Purely exploratory: reports evidence, never a verdict.
pub fn conjecture_search(n: u32, k: u32) -> Result<ConjectureScan, QBinomError> {
    if !(k >= 1 && n >= 2 * k) {
        return Err(QBinomError::PreconditionViolated(
            "conjecture_search requires n >= 2k >= 2",
        ));
    }
    if (n as i64).gcd(&(k as i64)) != 1 {
        return Err(QBinomError::PreconditionViolated(
            "conjecture_search requires gcd(n, k) = 1",
        ));
    }
    let base = qbinom(n, k)?
        .poly
        .mul(&LaurentPoly::one_minus_q_pow(1))
        .div_exact(&LaurentPoly::one_minus_q_pow(n as i64))
        .expect("gcd(n,k)=1 makes [n k](1-q)/(1-q^n) a polynomial");
    let num = base
        .mul(&LaurentPoly::one_minus_q_pow(1))
        .mul(&LaurentPoly::one_minus_q_pow(1));
    let mut failures = Vec::new();
    let mut found = None;
    for m in (n - k)..n {
        match num.div_exact(&LaurentPoly::one_minus_q_pow(m as i64)) {
            Some(b) => {
                if b.all_nonnegative() {
                    found = Some(m);
                    break;
                } else {
                    failures.push((m, ConjectureFailure::NegativeCoefficient));
                }
            }
            None => failures.push((m, ConjectureFailure::NotAPolynomial)),
        }
    }
    Ok(ConjectureScan {
        n,
        k,
        found,
        failures,
    })
}

/// `|[n k]_{q=θ}|` magnitudes enter the twisted-norm computations; this
/// evaluates the exact polynomial at a complex point.
pub fn qbinom_abs_at(n: u32, k: u32, theta: num_complex::Complex64) -> f64 {
    match qbinom(n, k) {
        Ok(qb) => qb.poly.eval_c64(theta).norm(),
        Err(_) => 0.0,
    }
}
