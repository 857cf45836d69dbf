//! Exact scalar types shared by every module.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exact complex rational `re + i·im`.
pub type RatC = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn real(r: Rational) -> RatC {
    Complex::new(r, Rational::zero())
}

pub fn ratc(re: Rational, im: Rational) -> RatC {
    Complex::new(re, im)
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::from(1u8) << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::from(1u8), p)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `|re| + |im|`, an upper bound for the modulus that stays rational.
pub fn l1_modulus(c: &RatC) -> Rational {
    c.re.abs() + c.im.abs()
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"1e-9"` / `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(s.into()))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(s.into()))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(s.into()))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (digits, frac_len) = match mantissa.split_once('.') {
        Some((a, b)) => (format!("{a}{b}"), b.len() as i64),
        None => (mantissa.to_string(), 0),
    };
    let n: BigInt = digits.parse().map_err(|_| Error::Parse(s.into()))?;
    let ten = BigRational::from_integer(BigInt::from(10));
    let shift = exp - frac_len;
    let scale = num_traits::pow::pow(ten, shift.unsigned_abs() as usize);
    let value = BigRational::from_integer(n);
    Ok(if shift >= 0 { value * scale } else { value / scale })
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
