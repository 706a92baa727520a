//! Fixed-point decimal numbers over arbitrary-size integers.
//!
//! A [`BigDecimal`] is `mantissa * 10^-scale`. Arithmetic never rounds
//! implicitly except where a target scale is passed in, and those operations
//! truncate toward negative infinity. Round-half-even is applied only by
//! [`BigDecimal::round`], which the series drivers call once on their final
//! result.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigDecimal {
    mantissa: BigInt,
    scale: u32,
}

pub fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp as usize)
}

/// Extra working digits for a series with `terms` terms.
pub fn guard_digits(terms: usize) -> u32 {
    10 + (terms.max(1) as f64).log10().ceil() as u32
}

/// Floor of the square root by Newton iteration, stopping once the iterate
/// no longer decreases.
pub fn isqrt(n: &BigUint) -> BigUint {
    nth_root_floor(n, 2)
}

/// Floor of the `k`-th root by Newton iteration.
pub fn nth_root_floor(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1);
    if n.is_zero() || k == 1 {
        return n.clone();
    }
    let bits = n.bits();
    let mut x = BigUint::one() << bits.div_ceil(k as u64);
    let k_big = BigUint::from(k);
    let km1 = BigUint::from(k - 1);
    loop {
        let y = (&km1 * &x + n / num_traits::pow(x.clone(), (k - 1) as usize)) / &k_big;
        if y >= x {
            return x;
        }
        x = y;
    }
}

impl BigDecimal {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        BigDecimal { mantissa, scale }
    }

    pub fn zero() -> Self {
        BigDecimal::new(BigInt::zero(), 0)
    }

    pub fn from_integer<T: Into<BigInt>>(value: T) -> Self {
        BigDecimal::new(value.into(), 0)
    }

    /// `num / den` truncated (floor) at `scale` decimals.
    pub fn from_ratio(num: &BigInt, den: &BigInt, scale: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        BigDecimal::new((num * pow10(scale)).div_floor(den), scale)
    }

    /// Closest `f64` approximation turned into an exact decimal at `scale`.
    pub fn from_f64(value: f64, scale: u32) -> Self {
        let r = num_rational::BigRational::from_float(value).expect("finite float");
        BigDecimal::from_ratio(r.numer(), r.denom(), scale)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigDecimal::new(self.mantissa.abs(), self.scale)
    }

    /// Re-express at `scale` decimals; truncates (floor) when shrinking.
    pub fn with_scale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                BigDecimal::new(&self.mantissa * pow10(scale - self.scale), scale)
            }
            Ordering::Less => BigDecimal::new(
                self.mantissa.div_floor(&pow10(self.scale - scale)),
                scale,
            ),
        }
    }

    /// Round half to even at `digits` decimals.
    pub fn round(&self, digits: u32) -> Self {
        if digits >= self.scale {
            return self.with_scale(digits);
        }
        let base = pow10(self.scale - digits);
        let (q, r) = self.mantissa.div_mod_floor(&base);
        let twice: BigInt = r * 2u32;
        let q = match twice.cmp(&base) {
            Ordering::Less => q,
            Ordering::Greater => q + 1u32,
            Ordering::Equal if q.is_odd() => q + 1u32,
            Ordering::Equal => q,
        };
        BigDecimal::new(q, digits)
    }

    /// Truncate (toward zero) at `digits` decimals.
    pub fn truncate(&self, digits: u32) -> Self {
        if digits >= self.scale {
            return self.with_scale(digits);
        }
        BigDecimal::new(&self.mantissa / pow10(self.scale - digits), digits)
    }

    pub fn mul(&self, other: &BigDecimal, scale: u32) -> Self {
        let raw = BigDecimal::new(&self.mantissa * &other.mantissa, self.scale + other.scale);
        raw.with_scale(scale)
    }

    pub fn mul_int<T: Into<BigInt>>(&self, factor: T) -> Self {
        BigDecimal::new(&self.mantissa * factor.into(), self.scale)
    }

    pub fn div_int<T: Into<BigInt>>(&self, divisor: T) -> Self {
        BigDecimal::new(self.mantissa.div_floor(&divisor.into()), self.scale)
    }

    /// `self / other` at `scale` decimals (floor).
    pub fn div(&self, other: &BigDecimal, scale: u32) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Internal("decimal division by zero".into()));
        }
        // self.m 10^-s1 / (other.m 10^-s2) = self.m * 10^(s2 - s1) / other.m
        let shift = scale as i64 + other.scale as i64 - self.scale as i64;
        let (num, den) = if shift >= 0 {
            (&self.mantissa * pow10(shift as u32), other.mantissa.clone())
        } else {
            (self.mantissa.clone(), &other.mantissa * pow10((-shift) as u32))
        };
        Ok(BigDecimal::new(num.div_floor(&den), scale))
    }

    pub fn recip(&self, scale: u32) -> Result<Self> {
        BigDecimal::from_integer(1).div(self, scale)
    }

    /// Square root at `scale` decimals (floor), by integer Newton iteration.
    pub fn sqrt(&self, scale: u32) -> Result<Self> {
        self.root(2, scale)
    }

    /// Non-negative `k`-th root at `scale` decimals (floor).
    pub fn root(&self, k: u32, scale: u32) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Internal(format!("root of a negative number: {self}")));
        }
        // value = m 10^-s; root = (m 10^(k*scale - s))^(1/k) 10^-scale
        let shift = k as i64 * scale as i64 - self.scale as i64;
        let radicand = if shift >= 0 {
            &self.mantissa * pow10(shift as u32)
        } else {
            &self.mantissa / pow10((-shift) as u32)
        };
        let root = nth_root_floor(radicand.magnitude(), k);
        Ok(BigDecimal::new(BigInt::from_biguint(Sign::Plus, root), scale))
    }

    /// Integer part (floor).
    pub fn floor(&self) -> BigInt {
        self.mantissa.div_floor(&pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        // Keep ~20 significant digits before converting.
        let digits = self.mantissa.magnitude().to_string().len() as u32;
        let drop = digits.saturating_sub(20).min(self.scale);
        let m = &self.mantissa / pow10(drop);
        let s = (self.scale - drop) as i32;
        m.to_f64().unwrap_or(f64::NAN) * 10f64.powi(-s)
    }

    /// Decimal exponent of the magnitude: `floor(log10 |x|)` as a float with
    /// fractional part. Returns `None` for zero.
    pub fn log10_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let text = self.mantissa.magnitude().to_string();
        let lead: f64 = text[..text.len().min(17)].parse().unwrap();
        let lead_log = lead.log10() + (text.len() - text.len().min(17)) as f64;
        Some(lead_log - self.scale as f64)
    }

    /// The digits of `self` after the decimal point, exactly `scale` of them.
    pub fn fraction_digits(&self) -> String {
        let text = self.to_string();
        match text.split_once('.') {
            Some((_, frac)) => frac.to_string(),
            None => String::new(),
        }
    }

    /// `d.ddde-N` with `significant` digits, truncated; "0" for zero.
    pub fn to_scientific(&self, significant: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let text = self.mantissa.magnitude().to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let exponent = text.len() as i64 - 1 - self.scale as i64;
        let kept = &text[..text.len().min(significant.max(1))];
        let (lead, rest) = kept.split_at(1);
        let rest = rest.trim_end_matches('0');
        let dot = if rest.is_empty() { "" } else { "." };
        format!("{sign}{lead}{dot}{rest}e{exponent}")
    }

    fn aligned(&self, other: &BigDecimal) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        (
            self.with_scale(scale).mantissa,
            other.with_scale(scale).mantissa,
            scale,
        )
    }
}

impl Add for &BigDecimal {
    type Output = BigDecimal;
    fn add(self, rhs: &BigDecimal) -> BigDecimal {
        let (a, b, scale) = self.aligned(rhs);
        BigDecimal::new(a + b, scale)
    }
}

impl Sub for &BigDecimal {
    type Output = BigDecimal;
    fn sub(self, rhs: &BigDecimal) -> BigDecimal {
        let (a, b, scale) = self.aligned(rhs);
        BigDecimal::new(a - b, scale)
    }
}

impl Add for BigDecimal {
    type Output = BigDecimal;
    fn add(self, rhs: BigDecimal) -> BigDecimal {
        &self + &rhs
    }
}

impl Sub for BigDecimal {
    type Output = BigDecimal;
    fn sub(self, rhs: BigDecimal) -> BigDecimal {
        &self - &rhs
    }
}

impl Neg for BigDecimal {
    type Output = BigDecimal;
    fn neg(self) -> BigDecimal {
        BigDecimal::new(-self.mantissa, self.scale)
    }
}

impl Ord for BigDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for BigDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for BigDecimal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for BigDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.magnitude().to_string();
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        if self.scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let scale = self.scale as usize;
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}

impl FromStr for BigDecimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let digits = format!("{int}{frac}");
        let magnitude: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| Error::Parse(s.to_string()))?
        };
        let mantissa = if negative { -magnitude } else { magnitude };
        Ok(BigDecimal::new(mantissa, frac.len() as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dec(s: &str) -> BigDecimal {
        s.parse().unwrap()
    }

    #[test]
    fn scientific() {
        let x: BigDecimal = "0.000012345".parse().unwrap();
        assert_eq!(x.to_scientific(3), "1.23e-5");
        assert_eq!(BigDecimal::from_integer(-4000).to_scientific(3), "-4e3");
        assert_eq!(BigDecimal::zero().to_scientific(3), "0");
        assert_eq!(serde_json::to_string(&x).unwrap(), "\"0.000012345\"");
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(dec("3.14").to_string(), "3.14");
        assert_eq!(dec("-0.005").to_string(), "-0.005");
        assert_eq!(dec("42").to_string(), "42");
        assert_eq!(BigDecimal::new(BigInt::from(5), 3).to_string(), "0.005");
        assert!("1.2.3".parse::<BigDecimal>().is_err());
        assert!("abc".parse::<BigDecimal>().is_err());
        assert!("".parse::<BigDecimal>().is_err());
    }

    #[test]
    fn round_half_even() {
        assert_eq!(dec("2.5").round(0).to_string(), "2");
        assert_eq!(dec("3.5").round(0).to_string(), "4");
        assert_eq!(dec("-2.5").round(0).to_string(), "-2");
        assert_eq!(dec("-2.51").round(0).to_string(), "-3");
        assert_eq!(dec("1.2345").round(3).to_string(), "1.234");
        assert_eq!(dec("1.2355").round(3).to_string(), "1.236");
        assert_eq!(dec("0.99996").round(4).to_string(), "1.0000");
    }

    #[test]
    fn division_and_roots() {
        let third = BigDecimal::from_integer(1).div(&BigDecimal::from_integer(3), 10).unwrap();
        assert_eq!(third.to_string(), "0.3333333333");
        let sqrt2 = BigDecimal::from_integer(2).sqrt(30).unwrap();
        assert_eq!(sqrt2.to_string(), "1.414213562373095048801688724209");
        let cbrt = BigDecimal::from_integer(2).root(3, 20).unwrap();
        assert_eq!(cbrt.to_string(), "1.25992104989487316476");
        let sqrt12 = BigDecimal::from_integer(12).sqrt(12).unwrap();
        assert_eq!(sqrt12.to_string(), "3.464101615137");
        assert!(BigDecimal::from_integer(1).div(&BigDecimal::zero(), 5).is_err());
    }

    #[test]
    fn newton_root_is_floor() {
        for n in 0u32..2000 {
            let r = isqrt(&BigUint::from(n));
            let r: u32 = r.try_into().unwrap();
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }

    #[test]
    fn mixed_scale_arithmetic() {
        let a = dec("1.5");
        let b = dec("0.25");
        assert_eq!((&a + &b).to_string(), "1.75");
        assert_eq!((&b - &a).to_string(), "-1.25");
        assert_eq!(a.mul(&b, 4).to_string(), "0.3750");
        assert!(a > b);
        assert_eq!(dec("1.50"), dec("1.50"));
        assert_eq!(dec("1.50").cmp(&dec("1.5")), Ordering::Equal);
    }

    proptest! {
        #[test]
        fn print_parse_fixpoint(m in any::<i64>(), scale in 0u32..30) {
            let x = BigDecimal::new(BigInt::from(m), scale);
            let printed = x.to_string();
            let reparsed: BigDecimal = printed.parse().unwrap();
            prop_assert_eq!(&reparsed, &x);
            prop_assert_eq!(reparsed.to_string(), printed);
        }

        #[test]
        fn rounding_error_is_at_most_half_ulp(m in any::<i64>(), scale in 1u32..20, digits in 0u32..20) {
            let x = BigDecimal::new(BigInt::from(m), scale);
            let r = x.round(digits);
            let err = (&r - &x).abs();
            let half_ulp = BigDecimal::new(BigInt::from(5), digits + 1);
            prop_assert!(err <= half_ulp);
        }
    }
}
