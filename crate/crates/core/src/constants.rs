//! Reference values of the classical constants, plus `exp` and `ln` on
//! [`BigDecimal`].
//!
//! Every routine works at `digits + guard` decimals on plain integer
//! mantissas and rounds once at the end.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decimal::{pow10, BigDecimal};
use crate::error::{Error, Result};
use crate::pi::pi_chudnovsky;

/// Largest precision `reference_constant` accepts.
pub const MAX_REFERENCE_DIGITS: u32 = 500;

const GUARD: u32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constant {
    Pi,
    E,
    Log2,
    Catalan,
    Zeta3,
    Sqrt5,
}

impl Constant {
    pub const ALL: [Constant; 6] = [
        Constant::Pi,
        Constant::E,
        Constant::Log2,
        Constant::Catalan,
        Constant::Zeta3,
        Constant::Sqrt5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
            Constant::Log2 => "log2",
            Constant::Catalan => "catalan",
            Constant::Zeta3 => "zeta3",
            Constant::Sqrt5 => "sqrt5",
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Constant::ALL
            .into_iter()
            .find(|c| c.name() == lower)
            .ok_or_else(|| Error::UnknownConstant(s.to_string()))
    }
}

/// `constant` truncated to `digits` decimals.
pub fn reference_constant(constant: Constant, digits: u32) -> Result<BigDecimal> {
    if digits > MAX_REFERENCE_DIGITS {
        return Err(Error::Precision(format!(
            "reference constants are limited to {MAX_REFERENCE_DIGITS} digits, asked for {digits}"
        )));
    }
    let scale = digits + GUARD;
    let value = match constant {
        Constant::Pi => pi_chudnovsky(scale)?,
        Constant::E => BigDecimal::new(e_mantissa(scale), scale),
        Constant::Log2 => BigDecimal::new(atanh_recip(3, scale) * 2, scale),
        Constant::Catalan => catalan(scale)?,
        Constant::Zeta3 => BigDecimal::new(zeta3_mantissa(scale), scale),
        Constant::Sqrt5 => BigDecimal::from_integer(5).sqrt(scale)?,
    };
    Ok(value.truncate(digits))
}

/// Σ 1/k! at `scale` decimals.
fn e_mantissa(scale: u32) -> BigInt {
    let mut term = pow10(scale);
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term;
        term /= k;
        k += 1;
    }
    sum
}

/// atanh(1/n) = Σ 1/((2k+1) n^(2k+1)) at `scale` decimals.
fn atanh_recip(n: u32, scale: u32) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut power = pow10(scale) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power /= &n2;
        k += 1;
    }
    sum
}

/// atanh(y) for a mantissa `y` at `scale`, |y| well below 1.
fn atanh_mantissa(y: &BigInt, scale: u32) -> BigInt {
    let one = pow10(scale);
    let y2 = (y * y).div_floor(&one);
    let mut power = y.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power = (&power * &y2) / &one;
        k += 1;
    }
    sum
}

/// G = (π/8) ln(2 + √3) + (3/8) Σ_{n≥0} (n!)² / ((2n)! (2n+1)²).
fn catalan(scale: u32) -> Result<BigDecimal> {
    let ws = scale + 5;
    let one = pow10(ws);
    // ln(2 + √3) = 2 atanh(1/√3)
    let inv_sqrt3 = BigDecimal::from_integer(3).sqrt(ws)?.recip(ws)?;
    let log_term = atanh_mantissa(inv_sqrt3.mantissa(), ws) * 2;
    let pi = pi_chudnovsky(ws)?.with_scale(ws);
    let product: BigInt = pi.mantissa() * log_term;
    let first = product.div_floor(&one) / 8;

    let mut ratio = one.clone();
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !ratio.is_zero() {
        sum += &ratio / ((2 * n + 1) * (2 * n + 1));
        n += 1;
        ratio = ratio * n / (2 * (2 * n - 1));
    }
    let value = first + sum * 3 / 8;
    Ok(BigDecimal::new(value, ws).with_scale(scale))
}

/// ζ(3) = (5/2) Σ_{k≥1} (-1)^(k+1) (k!)² / (k³ (2k)!).
fn zeta3_mantissa(scale: u32) -> BigInt {
    let ws = scale + 5;
    let mut ratio: BigInt = pow10(ws) / 2;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !ratio.is_zero() {
        let term = &ratio / (k * k * k);
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
        ratio = ratio * k / (2 * (2 * k - 1));
    }
    (sum * 5 / 2) / pow10(5)
}

/// e^x at `scale` decimals.
pub fn exp(x: &BigDecimal, scale: u32) -> BigDecimal {
    if x.is_negative() {
        let positive = exp(&x.abs(), scale + 2);
        return positive.recip(scale).expect("exp is positive");
    }
    // Halve until the argument is below 1/2^8, then square back up.
    let int_bits = x.floor().bits() as u32;
    let halvings = int_bits + 8;
    let ws = scale + GUARD + halvings + x.log10_abs().map_or(0, |l| (l.max(0.0) * 1.5) as u32);
    let one = pow10(ws);
    let r = x.with_scale(ws).mantissa().clone() >> halvings;
    let mut term = one.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term;
        term = (&term * &r).div_floor(&one) / k;
        k += 1;
    }
    for _ in 0..halvings {
        sum = (&sum * &sum).div_floor(&one);
    }
    BigDecimal::new(sum, ws).with_scale(scale)
}

/// Natural logarithm at `scale` decimals.
pub fn ln(x: &BigDecimal, scale: u32) -> Result<BigDecimal> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::Precision(format!("logarithm of a non-positive number: {x}")));
    }
    let ws = scale + GUARD + x.log10_abs().map_or(0, |l| l.abs() as u32);
    let one = pow10(ws);
    let mut m = x.with_scale(ws).mantissa().clone();
    if m.is_zero() {
        return Err(Error::Precision(format!("{x} underflows at {scale} digits")));
    }
    // x = 2^e r with r in [1, 2)
    let mut e = 0i64;
    let two = &one * 2;
    while m >= two {
        m >>= 1;
        e += 1;
    }
    while m < one {
        m <<= 1;
        e -= 1;
    }
    // ln r = 2 atanh((r - 1)/(r + 1))
    let y = ((&m - &one) * &one).div_floor(&(&m + &one));
    let ln_r = atanh_mantissa(&y, ws) * 2;
    let ln2 = atanh_recip(3, ws) * 2;
    let total = ln_r + ln2 * e;
    Ok(BigDecimal::new(total, ws).with_scale(scale))
}

/// x^k for a non-negative integer exponent, at `scale` decimals.
pub fn powi(x: &BigDecimal, k: u32, scale: u32) -> BigDecimal {
    let ws = scale + GUARD + 2 * (32 - k.leading_zeros());
    let mut result = BigDecimal::new(pow10(ws), ws);
    let mut base = x.with_scale(ws);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base, ws);
        }
        base = base.mul(&base, ws);
        e >>= 1;
    }
    result.with_scale(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    fn at(c: Constant, digits: u32) -> String {
        reference_constant(c, digits).unwrap().to_string()
    }

    fn decimal_of(r: &BigRational, digits: u32) -> String {
        BigDecimal::from_ratio(r.numer(), r.denom(), digits + 5).truncate(digits).to_string()
    }

    #[test]
    fn e_against_factorial_series() {
        let mut sum = BigRational::zero();
        let mut fact = BigInt::one();
        for k in 0..60u32 {
            if k > 0 {
                fact *= k;
            }
            sum += BigRational::new(BigInt::one(), fact.clone());
        }
        assert_eq!(at(Constant::E, 20), "2.71828182845904523536");
        assert_eq!(at(Constant::E, 60), decimal_of(&sum, 60));
    }

    fn alternating_limit(terms: impl Fn(usize) -> f64) -> f64 {
        // Repeated averaging of partial sums (Euler transform).
        let mut partial: Vec<f64> = (0..40)
            .scan(0.0, |s, k| {
                *s += terms(k);
                Some(*s)
            })
            .collect();
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        }
        partial[0]
    }

    #[test]
    fn catalan_against_alternating_series() {
        let g = alternating_limit(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s / ((2 * k + 1) as f64).powi(2)
        });
        assert_eq!(at(Constant::Catalan, 10), "0.9159655941");
        assert!((reference_constant(Constant::Catalan, 30).unwrap().to_f64() - g).abs() < 1e-12);
    }

    #[test]
    fn zeta3_against_direct_sum() {
        // Σ_{k≤n} 1/k³ plus the Euler-Maclaurin tail 1/(2n²) - 1/(2n³) + 1/(4n⁴)
        let n = 2000u32;
        let mut sum = BigRational::zero();
        for k in 1..=n {
            sum += BigRational::new(BigInt::one(), BigInt::from(k).pow(3));
        }
        let nb = BigInt::from(n);
        sum += BigRational::new(BigInt::one(), nb.pow(2) * 2) - BigRational::new(BigInt::one(), nb.pow(3) * 2)
            + BigRational::new(BigInt::one(), nb.pow(4) * 4);
        assert_eq!(at(Constant::Zeta3, 10), "1.2020569031");
        assert_eq!(at(Constant::Zeta3, 15), decimal_of(&sum, 15));
        let alt = alternating_limit(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s / ((k + 1) as f64).powi(3)
        });
        // η(3) = (3/4) ζ(3)
        assert!((at(Constant::Zeta3, 20).parse::<f64>().unwrap() * 0.75 - alt).abs() < 1e-13);
    }

    #[test]
    fn log2_and_sqrt5() {
        let log2 = reference_constant(Constant::Log2, 300).unwrap();
        assert_eq!(ln(&BigDecimal::from_integer(2), 300).unwrap(), log2);
        assert!((log2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let r5 = reference_constant(Constant::Sqrt5, 200).unwrap();
        let sq = r5.mul(&r5, 200);
        assert!((sq - BigDecimal::from_integer(5)).abs() < BigDecimal::new(BigInt::one(), 197));
        assert_eq!(at(Constant::Sqrt5, 10), "2.2360679774");
    }

    #[test]
    fn pi_is_chudnovsky() {
        assert_eq!(at(Constant::Pi, 20), "3.14159265358979323846");
    }

    #[test]
    fn exp_and_ln() {
        let e = reference_constant(Constant::E, 200).unwrap();
        assert_eq!(exp(&BigDecimal::from_integer(1), 200), e);
        for s in ["0.5", "-3.25", "10", "0.001", "42.5"] {
            let x: BigDecimal = s.parse().unwrap();
            let y = exp(&x, 120);
            let back = ln(&y, 100).unwrap();
            let diff = (back - x.with_scale(100)).abs();
            assert!(diff <= BigDecimal::new(BigInt::from(2), 100), "{s}: {diff}");
            assert!((y.to_f64() / s.parse::<f64>().unwrap().exp() - 1.0).abs() < 1e-14);
        }
        assert!(ln(&BigDecimal::zero(), 10).is_err());
        assert!(ln(&"-1".parse().unwrap(), 10).is_err());
    }

    #[test]
    fn limits_and_names() {
        assert!(reference_constant(Constant::E, 501).is_err());
        assert_eq!("Catalan".parse::<Constant>().unwrap(), Constant::Catalan);
        assert!(matches!("gamma".parse::<Constant>(), Err(Error::UnknownConstant(_))));
        for c in Constant::ALL {
            assert_eq!(c.to_string().parse::<Constant>().unwrap(), c);
        }
    }

    #[test]
    fn integer_powers() {
        let x: BigDecimal = "1.5".parse().unwrap();
        assert_eq!(powi(&x, 5, 10).to_string(), "7.5937500000");
        assert_eq!(powi(&x, 0, 3).to_string(), "1.000");
    }
}
