//! Transfer (Ruelle) operators for `r(z) = z^N` acting on Fourier coefficients.
//!
//! For a filter `m0` with weight `c = |m0|²`,
//!
//! ```text
//! (R f)(x) = (1/N) Σ_{r(y)=x} |m0(y)|² f(y)      (R f)_k = Σ_j c_j f_{Nk-j}
//! ```
//!
//! The coefficient form follows from strong invariance of Haar measure, and
//! keeps everything exact as long as `c` is rational. The √2 normalisation of
//! the usual filters is therefore stored as an exponent, never in a
//! coefficient.

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{div_ceil, LaurentPoly};
use crate::numbers::{format_rational, pow2, rat, to_f64, RatC, Rational};

pub const DEFAULT_MAX_ITER: usize = 200;

/// `10⁻⁹`
pub fn default_tolerance() -> Rational {
    rat(1, 1_000_000_000)
}

/// A low-pass filter `m0 = numerator / √2^half_scale` for the map `z ↦ z^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    numerator: LaurentPoly,
    half_scale: u32,
    branch_count: u32,
    weight: LaurentPoly,
    qmf_valid: bool,
}

impl Filter {
    pub fn new(numerator: LaurentPoly, half_scale: u32, branch_count: u32) -> Result<Self> {
        if numerator.is_zero() {
            return Err(Error::SingularFilter);
        }
        if branch_count < 2 {
            return Err(Error::BranchCount(branch_count));
        }
        let weight = numerator
            .autocorrelation()
            .scale_real(&pow2(-i64::from(half_scale)));
        let qmf_valid = weight_is_qmf(&weight, branch_count);
        Ok(Self {
            numerator,
            half_scale,
            branch_count,
            weight,
            qmf_valid,
        })
    }

    /// `m0(z) = (1 + z²)/√2` with `N = 3`, the middle-third Cantor filter.
    pub fn cantor() -> Self {
        let numerator = LaurentPoly::monomial(0) + LaurentPoly::monomial(2);
        Self::new(numerator, 1, 3).expect("Cantor filter is well formed")
    }

    /// `m0 = 1` for `z ↦ z^N`.
    pub fn trivial(branch_count: u32) -> Result<Self> {
        Self::new(LaurentPoly::one(), 0, branch_count)
    }

    /// `m0(z) = (1 + z)/√2` with `N = 2`.
    pub fn haar() -> Self {
        let numerator = LaurentPoly::monomial(0) + LaurentPoly::monomial(1);
        Self::new(numerator, 1, 2).expect("Haar filter is well formed")
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn half_scale(&self) -> u32 {
        self.half_scale
    }

    pub fn branch_count(&self) -> u32 {
        self.branch_count
    }

    /// `|m0|² = autocorrelation(numerator) / 2^s`.
    pub fn weight_poly(&self) -> &LaurentPoly {
        &self.weight
    }

    /// Exact QMF test: `c_{Nk} = δ_{k0}` for the weight `c`, which is the
    /// coefficient form of `R 1 = 1`.
    pub fn qmf_check(&self) -> bool {
        self.qmf_valid
    }

    /// True when `|m0|² ≡ 1`, so the transfer operator is `R_1`.
    pub fn has_unit_weight(&self) -> bool {
        self.weight == LaurentPoly::one()
    }

    /// `m0` at the angle `θ` (point `e^{2πiθ}`), in floating point.
    pub fn evaluate(&self, theta: &Rational) -> num_complex::Complex64 {
        self.numerator.evaluate(theta) * 2f64.powf(-f64::from(self.half_scale) / 2.0)
    }

    /// One application of the transfer operator, exact on coefficients.
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let n = i64::from(self.branch_count);
        let mut out = LaurentPoly::zero();
        for (i, fi) in f.iter() {
            for (j, cj) in self.weight.iter() {
                let idx = i + j;
                if idx.rem_euclid(n) == 0 {
                    out.add_term(idx / n, cj * fi);
                }
            }
        }
        out
    }

    /// `R^n f`.
    pub fn apply_n(&self, f: &LaurentPoly, n: usize) -> LaurentPoly {
        (0..n).fold(f.clone(), |acc, _| self.apply(&acc))
    }

    /// Index bounds that must contain the support of `R f`.
    pub fn image_support_bounds(&self, f: &LaurentPoly) -> Option<(i64, i64)> {
        let n = i64::from(self.branch_count);
        let lo = f.min_index()? + self.weight.min_index()?;
        let hi = f.max_index()? + self.weight.max_index()?;
        Some((div_ceil(lo, n), hi.div_euclid(n)))
    }

    /// Iterates `f, R f, R² f, …` until the nonconstant ℓ¹ mass drops to
    /// `tol` or `max_iter` applications have been made.
    ///
    /// The mass bounds `‖Rⁿf − const‖_∞`, and because the invariant measure
    /// `ν` satisfies `ν(Rⁿf) = ν(f)`, it also bounds `|ν(f) − const_n|`.
    pub fn iterate_to_invariant(
        &self,
        f: &LaurentPoly,
        max_iter: usize,
        tol: &Rational,
    ) -> Result<ConvergenceReport> {
        if !self.qmf_valid {
            return Err(Error::NotQmf);
        }
        let mut current = f.clone();
        let mut iterates = vec![IterateSummary::of(0, &current)];
        let mut used = 0;
        while iterates.last().map_or(false, |s| &s.mass > tol) && used < max_iter {
            current = self.apply(&current);
            used += 1;
            iterates.push(IterateSummary::of(used, &current));
        }
        let last = iterates.last().expect("at least the initial iterate");
        let limit = (&last.mass <= tol).then(|| last.constant.clone());
        Ok(ConvergenceReport {
            iterates,
            limit,
            iterations_used: used,
            final_iterate: current,
        })
    }

    /// `m0^{(n)}(z) = Π_{j<n} m0(z^{N^j})`, a filter for `z ↦ z^{N^n}`.
    ///
    /// The `n = 0` product is the constant 1, which keeps branch count `N`.
    pub fn composite(&self, n: u32) -> Filter {
        let mut numerator = LaurentPoly::one();
        let mut power: i64 = 1;
        for _ in 0..n {
            numerator = &numerator * &self.numerator.substitute_power(power);
            power *= i64::from(self.branch_count);
        }
        let branch_count = if n == 0 { self.branch_count } else { power as u32 };
        Filter::new(numerator, n * self.half_scale, branch_count)
            .expect("products of nonzero polynomials are nonzero")
    }

    /// `∫ |m0^{(n)}|² |h|² dμ`, computed as the squared ℓ² norm of the
    /// coefficients of `numerator(m0^{(n)}) · h` divided by `2^{ns}`.
    pub fn weighted_energy(&self, h: &LaurentPoly, n: u32) -> Rational {
        let composite = self.composite(n);
        let product = composite.numerator() * h;
        product.squared_norm() * pow2(-i64::from(composite.half_scale()))
    }
}

fn weight_is_qmf(weight: &LaurentPoly, branch_count: u32) -> bool {
    let n = i64::from(branch_count);
    let unit_constant = weight.coeff(0) == RatC::one();
    unit_constant
        && weight
            .iter()
            .all(|(k, _)| k == 0 || k.rem_euclid(n) != 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterateSummary {
    pub n: usize,
    pub constant: RatC,
    /// ℓ¹ mass of the nonconstant coefficients; never negative.
    pub mass: Rational,
}

impl IterateSummary {
    fn of(n: usize, p: &LaurentPoly) -> Self {
        Self {
            n,
            constant: p.haar_integral(),
            mass: p.nonconstant_l1_mass(),
        }
    }
}

/// Trace of an iteration `Rⁿ f → ν(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub iterates: Vec<IterateSummary>,
    /// Constant part of the last iterate, present only when converged.
    pub limit: Option<RatC>,
    pub iterations_used: usize,
    pub final_iterate: LaurentPoly,
}

impl ConvergenceReport {
    pub fn converged(&self) -> bool {
        self.limit.is_some()
    }

    pub fn final_mass(&self) -> &Rational {
        &self.iterates.last().expect("nonempty trace").mass
    }

    /// Best available estimate of `ν(f)` even when not converged, with its
    /// error bound.
    pub fn estimate(&self) -> (&RatC, &Rational) {
        let last = self.iterates.last().expect("nonempty trace");
        (&last.constant, &last.mass)
    }

    pub fn to_json(&self) -> Value {
        let iterates: Vec<Value> = self
            .iterates
            .iter()
            .map(|s| {
                json!([
                    s.n,
                    format_rational(&s.constant.re),
                    format_rational(&s.constant.im),
                    format_rational(&s.mass)
                ])
            })
            .collect();
        let limit = match &self.limit {
            Some(c) => json!({
                "re": format_rational(&c.re),
                "im": format_rational(&c.im),
                "re_float": to_f64(&c.re),
                "im_float": to_f64(&c.im),
            }),
            None => Value::Null,
        };
        json!({
            "iterates": iterates,
            "limit": limit,
            "converged": self.converged(),
            "iterations_used": self.iterations_used,
            "final_mass": format_rational(self.final_mass()),
            "final_mass_float": to_f64(self.final_mass()),
        })
    }
}
