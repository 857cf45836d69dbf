//! Sparse Laurent polynomials with exact complex-rational coefficients.
//!
//! A [`LaurentPoly`] stores `Σ p_k z^k` as a map from the exponent `k` to a
//! nonzero coefficient. It doubles as a finitely supported Fourier series on
//! the unit circle, where `z = e^{2πiθ}` and integration is against Haar
//! measure, so `∫ z^k dμ = δ_{k0}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::numbers::{format_rational, l1_modulus, parse_rational, real, to_f64, RatC, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, RatC>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(RatC::one())
    }

    pub fn constant(c: RatC) -> Self {
        Self::from_terms([(0, c)])
    }

    /// `z^k`
    pub fn monomial(k: i64) -> Self {
        Self::from_terms([(k, RatC::one())])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and zero results dropped.
    pub fn from_terms<I: IntoIterator<Item = (i64, RatC)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn from_real_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(k, c)| (k, real(c))))
    }

    pub(crate) fn add_term(&mut self, k: i64, c: RatC) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, k: i64) -> RatC {
        self.coeffs.get(&k).cloned().unwrap_or_else(RatC::zero)
    }

    pub fn coeff_ref(&self, k: i64) -> Option<&RatC> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &RatC)> + '_ {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    pub fn min_index(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im.is_zero())
    }

    /// Real parts, failing if any coefficient has an imaginary part.
    pub fn real_coeffs(&self) -> Result<Vec<(i64, Rational)>> {
        self.iter()
            .map(|(k, c)| {
                if c.im.is_zero() {
                    Ok((k, c.re.clone()))
                } else {
                    Err(Error::ComplexCoefficient(k))
                }
            })
            .collect()
    }

    pub fn scale(&self, s: &RatC) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c * s)).collect(),
        }
    }

    pub fn scale_real(&self, s: &Rational) -> Self {
        self.scale(&real(s.clone()))
    }

    /// `conj(p)(z) = Σ conj(p_k) z^{-k}`, the pointwise conjugate on the circle.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.conj())).collect(),
        }
    }

    /// `p(z^m)`; `m` must be nonzero.
    pub fn substitute_power(&self, m: i64) -> Self {
        assert!(m != 0, "substitute_power needs a nonzero exponent");
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * m, c.clone())).collect(),
        }
    }

    /// `p · conj(p)`, i.e. `|p|²` on the circle.
    pub fn autocorrelation(&self) -> Self {
        self * &self.conj()
    }

    /// `∫ p dμ` for Haar measure: the constant coefficient.
    pub fn haar_integral(&self) -> RatC {
        self.coeff(0)
    }

    /// `⟨p, q⟩ = Σ_k p_k conj(q_k)`.
    pub fn inner_product(&self, other: &Self) -> RatC {
        let (small, large, flip) = if self.support_len() <= other.support_len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = RatC::zero();
        for (k, a) in small.iter() {
            if let Some(b) = large.coeffs.get(&k) {
                acc = if flip { acc + b * a.conj() } else { acc + a * b.conj() };
            }
        }
        acc
    }

    /// `Σ_{k≠0} (|Re p_k| + |Im p_k|)`; bounds `sup_θ |p(θ) - p_0|`.
    pub fn nonconstant_l1_mass(&self) -> Rational {
        self.iter()
            .filter(|&(k, _)| k != 0)
            .fold(Rational::zero(), |acc, (_, c)| acc + l1_modulus(c))
    }

    pub fn l1_mass(&self) -> Rational {
        self.coeffs
            .values()
            .fold(Rational::zero(), |acc, c| acc + l1_modulus(c))
    }

    /// `Σ_k |p_k|²`
    pub fn squared_norm(&self) -> Rational {
        self.coeffs
            .values()
            .fold(Rational::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Evaluates `Σ p_k e^{2πikθ}` in floating point.
    ///
    /// The phase `kθ mod 1` is reduced exactly before conversion, so each
    /// term carries only a few ulps of error and the total absolute error is
    /// bounded by roughly `support_len · |p|_max · 4ε`.
    pub fn evaluate(&self, theta: &Rational) -> Complex64 {
        let mut acc = Complex64::zero();
        for (k, c) in self.iter() {
            let phase = frac(&(theta * BigInt::from(k)));
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * to_f64(&phase));
            acc += Complex64::new(to_f64(&c.re), to_f64(&c.im)) * w;
        }
        acc
    }

    /// JSON object `{"k": [re_num, re_den, im_num, im_den], ...}`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, c) in self.iter() {
            map.insert(
                k.to_string(),
                Value::Array(vec![
                    big_number(c.re.numer()),
                    big_number(c.re.denom()),
                    big_number(c.im.numer()),
                    big_number(c.im.denom()),
                ]),
            );
        }
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let map = value
            .as_object()
            .ok_or_else(|| Error::Json("polynomial must be a JSON object".into()))?;
        let mut p = Self::zero();
        for (key, entry) in map {
            let k: i64 = key
                .parse()
                .map_err(|_| Error::Json(format!("bad exponent key {key:?}")))?;
            let parts = entry
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| Error::Json(format!("coefficient {key} must be a 4-array")))?;
            let nums = parts
                .iter()
                .map(parse_big_number)
                .collect::<Result<Vec<_>>>()?;
            if nums[1].is_zero() || nums[3].is_zero() {
                return Err(Error::Json(format!("zero denominator at {key}")));
            }
            let re = BigRational::new(nums[0].clone(), nums[1].clone());
            let im = BigRational::new(nums[2].clone(), nums[3].clone());
            p.add_term(k, Complex::new(re, im));
        }
        Ok(p)
    }
}

/// Fractional part in `[0, 1)`.
pub(crate) fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub(crate) fn big_number(n: &BigInt) -> Value {
    Value::Number(
        n.to_string()
            .parse::<Number>()
            .expect("integer literal is a valid JSON number"),
    )
}

pub(crate) fn parse_big_number(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| Error::Json(format!("expected an integer, found {n}"))),
        other => Err(Error::Json(format!("expected an integer, found {other}"))),
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    /// Cauchy product.
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (i, a) in self.iter() {
            for (j, b) in rhs.iter() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coef = if c.im.is_zero() {
                format_rational(&c.re)
            } else {
                format!("({}{}{}i)", format_rational(&c.re),
                    if c.im.is_negative() { "" } else { "+" },
                    format_rational(&c.im))
            };
            match k {
                0 => write!(f, "{coef}")?,
                _ if c.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{coef}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts sums such as `"1 + 1/2 z^2 - 3*z^-1 + 2i z"`. A trailing `i`
    /// on a coefficient makes it imaginary.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut depth = 0i32;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if i > start && depth == 0 => {
                    let prev = bytes[i - 1];
                    if !matches!(prev, b'^' | b'e' | b'E' | b'+' | b'-') {
                        terms.push(&compact[start..i]);
                        start = i;
                    }
                }
                _ => {}
            }
        }
        terms.push(&compact[start..]);

        let mut p = LaurentPoly::zero();
        for term in terms {
            let (k, c) = parse_term(term)?;
            p.add_term(k, c);
        }
        Ok(p)
    }
}

fn parse_term(term: &str) -> Result<(i64, RatC)> {
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (Rational::one(), &term[1..]),
        Some(b'-') => (-Rational::one(), &term[1..]),
        _ => (Rational::one(), term),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {term:?}")));
    }
    let (coef_str, exponent) = match body.find('z') {
        Some(pos) => {
            let rest = &body[pos + 1..];
            let exponent = if rest.is_empty() {
                1
            } else if let Some(e) = rest.strip_prefix('^') {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                e.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
            } else {
                return Err(Error::Parse(format!("unexpected text after z in {term:?}")));
            };
            (body[..pos].trim_end_matches('*'), exponent)
        }
        None => (body, 0),
    };
    let coef_str = coef_str.trim_start_matches('(').trim_end_matches(')');
    let coef = if coef_str.is_empty() {
        real(Rational::one())
    } else {
        parse_complex(coef_str)?
    };
    Ok((exponent, coef * real(sign)))
}

/// `a`, `bi`, `i` or `a+bi` / `a-bi`.
fn parse_complex(s: &str) -> Result<RatC> {
    let Some(body) = s.strip_suffix('i') else {
        return Ok(real(parse_rational(s)?));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_rational(&body[..i])?, &body[i..]),
        None => (Rational::zero(), body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other.trim_start_matches('+'))?,
    };
    Ok(Complex::new(re, im))
}

/// Ceiling division for the support-contraction bound.
pub(crate) fn div_ceil(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat, ratc};
    use proptest::prelude::*;

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(poly("z + z^-1") + poly("-z^-1"), poly("z"));
        assert_eq!(poly("1+z^2") + LaurentPoly::zero(), poly("1+z^2"));
        assert_eq!(
            poly("1 + 1/2 z^2") + poly("1/2 z^-2"),
            LaurentPoly::from_real_terms([(0, int(1)), (2, rat(1, 2)), (-2, rat(1, 2))])
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly("z^2") * poly("z^-2"), LaurentPoly::one());
        assert_eq!(poly("1+z^2") * poly("1+z^-2"), poly("2 + z^2 + z^-2"));
        assert_eq!(poly("3 - z^5") * LaurentPoly::one(), poly("3 - z^5"));
    }

    #[test]
    fn autocorrelation_examples() {
        assert_eq!(poly("1+z^2").autocorrelation(), poly("2 + z^2 + z^-2"));
        assert_eq!(poly("z^7").autocorrelation(), LaurentPoly::one());
        assert_eq!(poly("1+z").autocorrelation(), poly("2 + z + z^-1"));
    }

    #[test]
    fn integral_and_inner_product() {
        assert_eq!(poly("1 + 1/2z^2 + 1/2z^-2").haar_integral(), RatC::one());
        assert_eq!(poly("z^5").haar_integral(), RatC::zero());
        assert_eq!(LaurentPoly::zero().haar_integral(), RatC::zero());
        assert_eq!(poly("z").inner_product(&poly("z")), RatC::one());
        assert_eq!(poly("z").inner_product(&poly("z^2")), RatC::zero());
        let p = poly("1 + 1/2 z^2");
        assert_eq!(p.inner_product(&p), real(rat(5, 4)));
    }

    #[test]
    fn inner_product_conjugates_second_argument() {
        let p = poly("2i z");
        let q = poly("z");
        assert_eq!(p.inner_product(&q), ratc(int(0), int(2)));
        assert_eq!(q.inner_product(&p), ratc(int(0), int(-2)));
    }

    #[test]
    fn evaluate_examples() {
        let p = poly("1+z^2");
        assert!((p.evaluate(&int(0)) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let v = p.evaluate(&rat(1, 3));
        assert!((v.norm_sqr() - 1.0).abs() < 1e-14);
        let expected = Complex64::new(1.0, 0.0)
            + Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI / 3.0);
        assert!((v - expected).norm() < 1e-14);
        assert!((poly("z").evaluate(&rat(1, 4)) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn parse_and_display() {
        let p = poly("1/2z^-2 + 1 - 3*z^4 + 2i z");
        assert_eq!(p.coeff(-2), real(rat(1, 2)));
        assert_eq!(p.coeff(4), real(int(-3)));
        assert_eq!(p.coeff(1), ratc(int(0), int(2)));
        assert_eq!(poly(&p.to_string()), p);
        assert_eq!(poly("z^(-3)"), LaurentPoly::monomial(-3));
        assert!("z^x".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn json_round_trip_and_shape() {
        let p = poly("1/3 z^-4 + 2 + (1/2+3/7i) z^9");
        let v = p.to_json();
        assert_eq!(v["-4"], serde_json::json!([1, 3, 0, 1]));
        assert_eq!(v["9"], serde_json::json!([1, 2, 3, 7]));
        assert_eq!(LaurentPoly::from_json(&v).unwrap(), p);

        let huge = LaurentPoly::from_real_terms([(1, crate::numbers::pow2(-200))]);
        let text = serde_json::to_string(&huge.to_json()).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(LaurentPoly::from_json(&back).unwrap(), huge);

        assert!(LaurentPoly::from_json(&serde_json::json!({"1": [1, 0, 0, 1]})).is_err());
        assert!(LaurentPoly::from_json(&serde_json::json!({"a": [1, 1, 0, 1]})).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
    }

    prop_compose! {
        fn small_poly()(terms in prop::collection::vec(
            (-5i64..=5, small_rational(), small_rational()), 0..5)) -> LaurentPoly {
            LaurentPoly::from_terms(terms.into_iter().map(|(k, re, im)| (k, ratc(re, im))))
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) - &q, p.clone());
        }

        #[test]
        fn conjugation_and_parseval(p in small_poly()) {
            prop_assert_eq!(p.conj().conj(), p.clone());
            let a = p.autocorrelation();
            for (k, c) in a.iter() {
                prop_assert_eq!(a.coeff(-k), c.conj());
            }
            prop_assert_eq!(a.haar_integral(), real(p.squared_norm()));
        }

        #[test]
        fn inner_product_is_positive_definite(p in small_poly()) {
            let ip = p.inner_product(&p);
            prop_assert!(ip.im.is_zero());
            prop_assert!(!ip.re.is_negative());
            prop_assert_eq!(ip.re.is_zero(), p.is_zero());
        }

        #[test]
        fn json_round_trip(p in small_poly()) {
            prop_assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
        }
    }
}
