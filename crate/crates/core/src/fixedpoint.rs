//! The square-summable fixed point of the Cantor transfer operator and the
//! checks around it.
//!
//! The sequence is
//!
//! ```text
//! a_n =  2^{-k}   for even n with 3^k + 1 ≤ n ≤ 3^{k+1} − 1,
//! a_n = −2^{-k}   for even n with −(3^{k+1} − 1) ≤ n ≤ −(3^k + 1),
//! a_n =  0        otherwise,
//! ```
//!
//! and it satisfies `a_k = ½a_{3k−2} + a_{3k} + ½a_{3k+2}` for every `k`,
//! i.e. `R h = h` for `h = Σ a_k z^k`. It lies in ℓ² but not ℓ¹, and the
//! weighted energies `∫ |m0^{(n)}|² |h|² dμ` grow without bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::numbers::{pow2, rat, Rational};
use crate::transfer::{default_tolerance, ConvergenceReport, Filter};

/// A coefficient sequence truncated to `|k| ≤ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorFixedSequence {
    truncation: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl CantorFixedSequence {
    /// Arbitrary sequence; entries outside `|k| ≤ truncation` are dropped.
    pub fn from_coeffs<I>(truncation: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Self {
            truncation,
            coeffs: coeffs
                .into_iter()
                .filter(|(k, c)| k.abs() <= truncation && !c.is_zero())
                .collect(),
        }
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    /// Copy with `a_k` replaced.
    pub fn with_coeff(&self, k: i64, value: Rational) -> Self {
        let mut coeffs = self.coeffs.clone();
        if value.is_zero() {
            coeffs.remove(&k);
        } else {
            coeffs.insert(k, value);
        }
        Self {
            truncation: self.truncation.max(k.abs()),
            coeffs,
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.coeff(0).is_zero()
            && self
                .coeffs
                .iter()
                .all(|(&k, c)| self.coeff(-k) == -c.clone())
    }

    pub fn has_even_support(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_real_terms(self.coeffs.iter().map(|(&k, c)| (k, c.clone())))
    }

    /// `Σ_{|k| ≤ bound} |a_k|`
    pub fn partial_l1(&self, bound: i64) -> Rational {
        self.coeffs
            .range(-bound..=bound)
            .fold(Rational::zero(), |acc, (_, c)| acc + c.abs())
    }

    /// `Σ_{|k| ≤ bound} a_k²`
    pub fn partial_l2(&self, bound: i64) -> Rational {
        self.coeffs
            .range(-bound..=bound)
            .fold(Rational::zero(), |acc, (_, c)| acc + c * c)
    }
}

/// The explicit fixed point truncated to `|n| ≤ K`.
pub fn build_sequence(truncation: i64) -> Result<CantorFixedSequence> {
    if truncation < 2 {
        return Err(Error::TruncationTooSmall(truncation));
    }
    let mut coeffs = BTreeMap::new();
    let mut band = 0u32;
    let mut low: i64 = 1; // 3^band
    while low < truncation {
        let value = pow2(-i64::from(band));
        let first = if (low + 1) % 2 == 0 { low + 1 } else { low + 2 };
        let last = (3 * low - 1).min(truncation);
        let mut n = first;
        while n <= last {
            coeffs.insert(n, value.clone());
            coeffs.insert(-n, -value.clone());
            n += 2;
        }
        band += 1;
        low *= 3;
    }
    Ok(CantorFixedSequence { truncation, coeffs })
}

/// Result of checking `a_k = ½a_{3k−2} + a_{3k} + ½a_{3k+2}` on the range
/// where the truncation cannot interfere.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub max_abs_residual: Rational,
    /// All `|k| ≤ checked_range` were examined.
    pub checked_range: i64,
    /// Nonzero residuals `r_k`, keyed by `k`.
    pub violations: BTreeMap<i64, Rational>,
}

impl Residual {
    pub fn is_exact_fixed_point(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `r_k = a_k − (½a_{3k−2} + a_{3k} + ½a_{3k+2})` for `|k| ≤ ⌊(K−2)/3⌋`.
pub fn fixed_point_residual(seq: &CantorFixedSequence) -> Residual {
    let range = (seq.truncation - 2).div_euclid(3).max(0);
    let half = rat(1, 2);
    let mut violations = BTreeMap::new();
    let mut max_abs = Rational::zero();
    // Only k with a nonzero term can have a nonzero residual.
    let mut candidates: Vec<i64> = Vec::new();
    for &j in seq.coeffs.keys() {
        candidates.push(j);
        for shift in [-2, 0, 2] {
            let t = j + shift;
            if t % 3 == 0 {
                candidates.push(t / 3);
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    for k in candidates.into_iter().filter(|k| k.abs() <= range) {
        let image = &half * seq.coeff(3 * k - 2) + seq.coeff(3 * k) + &half * seq.coeff(3 * k + 2);
        let r = seq.coeff(k) - image;
        if !r.is_zero() {
            if r.abs() > max_abs {
                max_abs = r.abs();
            }
            violations.insert(k, r);
        }
    }
    Residual {
        max_abs_residual: max_abs,
        checked_range: range,
        violations,
    }
}

/// Largest `n` allowed by the truncation guard `2·3ⁿ ≤ K/3`, if any.
pub fn max_growth_steps(truncation: i64) -> Option<u32> {
    (0..40u32)
        .take_while(|&n| 6 * 3i64.pow(n) <= truncation)
        .last()
}

fn check_guard(truncation: i64, n: u32) -> Result<()> {
    let ok = 3i64
        .checked_pow(n)
        .and_then(|p| p.checked_mul(6))
        .map_or(false, |v| v <= truncation);
    if ok {
        Ok(())
    } else {
        Err(Error::TruncationGuard { n, k: truncation })
    }
}

/// The √2-cleared recursion `b⁽ⁿ⁺¹⁾_k = b⁽ⁿ⁾_k + b⁽ⁿ⁾_{k−2·3ⁿ}` with
/// `b⁽⁰⁾ = a`, held densely as integers over a common denominator.
///
/// `b⁽ⁿ⁾ = √2ⁿ · (coefficients of m0^{(n)} h)`, so `S_n = 2⁻ⁿ Σ (b⁽ⁿ⁾_k)²`.
#[derive(Clone, Debug)]
pub struct EnergyRecursion {
    truncation: i64,
    step: u32,
    /// `values[i]` holds `D · b_{i − truncation}`.
    values: Vec<BigInt>,
    denominator: BigInt,
}

impl EnergyRecursion {
    pub fn new(seq: &CantorFixedSequence) -> Self {
        let denominator = seq
            .coeffs
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let len = usize::try_from(2 * seq.truncation + 1).expect("truncation fits in memory");
        let mut values = vec![BigInt::zero(); len];
        for (&k, c) in &seq.coeffs {
            let scaled = c * BigRational::from_integer(denominator.clone());
            values[(k + seq.truncation) as usize] = scaled.to_integer();
        }
        Self {
            truncation: seq.truncation,
            step: 0,
            values,
            denominator,
        }
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    /// `b_k` at the current step.
    pub fn value(&self, k: i64) -> Rational {
        let i = k + self.truncation;
        if i < 0 || i as usize >= self.values.len() {
            return Rational::zero();
        }
        BigRational::new(self.values[i as usize].clone(), self.denominator.clone())
    }

    /// Moves from `b⁽ⁿ⁾` to `b⁽ⁿ⁺¹⁾`; the support grows by `2·3ⁿ`.
    pub fn advance(&mut self) {
        let shift = 2 * 3usize.pow(self.step);
        let old_len = self.values.len();
        self.values.resize(old_len + shift, BigInt::zero());
        for i in (shift..self.values.len()).rev() {
            let (lo, hi) = self.values.split_at_mut(i);
            hi[0] += &lo[i - shift];
        }
        self.step += 1;
    }

    /// `S_n = 2⁻ⁿ Σ_k (b⁽ⁿ⁾_k)²`.
    pub fn energy(&self) -> Rational {
        let sum: BigInt = self.values.iter().map(|v| v * v).sum();
        BigRational::new(sum, &self.denominator * &self.denominator) * pow2(-i64::from(self.step))
    }

    /// `b_k ≥ b_{k+2} ≥ 0` for every even `k` in `[3ⁿ, K − 2·3ⁿ]`.
    pub fn monotone_tail(&self) -> bool {
        let p = 3i64.pow(self.step);
        let start = if p % 2 == 0 { p } else { p + 1 };
        let end = self.truncation - 2 * p;
        let mut k = start;
        while k <= end {
            let a = &self.values[(k + self.truncation) as usize];
            let b = &self.values[(k + 2 + self.truncation) as usize];
            if a < b || b.is_negative() {
                return false;
            }
            k += 2;
        }
        true
    }
}

/// `(n, S_n)` for `n = 0..=n_max`, refusing steps that violate the guard.
pub fn energy_growth(seq: &CantorFixedSequence, n_max: u32) -> Result<Vec<(u32, Rational)>> {
    check_guard(seq.truncation, n_max)?;
    let mut rec = EnergyRecursion::new(seq);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push((0, rec.energy()));
    for _ in 0..n_max {
        rec.advance();
        out.push((rec.step(), rec.energy()));
    }
    Ok(out)
}

/// The monotone-tail property of `b⁽ⁿ⁾` after `n` recursion steps.
pub fn monotone_tail_check(seq: &CantorFixedSequence, n: u32) -> Result<bool> {
    check_guard(seq.truncation, n)?;
    let mut rec = EnergyRecursion::new(seq);
    for _ in 0..n {
        rec.advance();
    }
    Ok(rec.monotone_tail())
}

/// Outcome of testing a finitely supported candidate against the fixed-point
/// equation.
#[derive(Clone, Debug)]
pub struct L1Probe {
    pub is_fixed: bool,
    pub is_constant: bool,
    /// Indices `k` with `(R p)_k ≠ p_k`.
    pub violated: Vec<i64>,
    pub report: ConvergenceReport,
}

impl L1Probe {
    /// A nonconstant exact fixed point would contradict the absence of
    /// continuous nonconstant fixed points.
    pub fn consistent(&self) -> bool {
        !(self.is_fixed && !self.is_constant)
    }
}

/// Iterates the Cantor transfer operator on a finitely supported `p`.
pub fn l1_exclusion_probe(p: &LaurentPoly, iterations: usize) -> Result<L1Probe> {
    let filter = Filter::cantor();
    let image = filter.apply(p);
    let diff = &image - p;
    let violated: Vec<i64> = diff.iter().map(|(k, _)| k).collect();
    let report = filter.iterate_to_invariant(p, iterations, &default_tolerance())?;
    Ok(L1Probe {
        is_fixed: diff.is_zero(),
        is_constant: p.is_constant(),
        violated,
        report,
    })
}
