//! π by four series: Madhava's, Machin's arctangent formula, Ramanujan's
//! 1/π series and the Chudnovsky series in its big-integer recurrence form.
//!
//! Every driver works at `digits + guard` decimals in fixed point and rounds
//! half-even to `digits` decimals once at the end.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::decimal::{guard_digits, pow10, BigDecimal};
use crate::error::{Error, Result};

const CHUDNOVSKY_L0: i64 = 13_591_409;
const CHUDNOVSKY_L_STEP: i64 = 545_140_134;
const CHUDNOVSKY_X_STEP: i64 = -262_537_412_640_768_000;
/// 640320^3 / 24, used by the binary-splitting form.
const CHUDNOVSKY_Q_FACTOR: i64 = 10_939_058_860_032_000;
/// Above this many digits `pi_chudnovsky` switches to binary splitting.
pub const BINARY_SPLITTING_THRESHOLD: u32 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PiMethod {
    Madhava,
    Machin,
    Ramanujan,
    Chudnovsky,
}

impl PiMethod {
    pub const ALL: [PiMethod; 4] = [
        PiMethod::Madhava,
        PiMethod::Machin,
        PiMethod::Ramanujan,
        PiMethod::Chudnovsky,
    ];
}

impl fmt::Display for PiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PiMethod::Madhava => "madhava",
            PiMethod::Machin => "machin",
            PiMethod::Ramanujan => "ramanujan",
            PiMethod::Chudnovsky => "chudnovsky",
        };
        f.write_str(name)
    }
}

impl FromStr for PiMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "madhava" => Ok(PiMethod::Madhava),
            "machin" => Ok(PiMethod::Machin),
            "ramanujan" => Ok(PiMethod::Ramanujan),
            "chudnovsky" => Ok(PiMethod::Chudnovsky),
            other => Err(Error::Parse(format!("unknown pi method `{other}`"))),
        }
    }
}

/// A rounded value of π together with the number of series terms summed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiValue {
    pub value: BigDecimal,
    pub terms_used: usize,
}

fn require_positive(value: usize, name: &'static str) -> Result<()> {
    if value == 0 {
        Err(Error::ZeroArgument(name))
    } else {
        Ok(())
    }
}

/// Dispatch on `method`. `terms` is required for Madhava and optional
/// elsewhere, where it caps the number of series terms.
pub fn compute(method: PiMethod, digits: u32, terms: Option<usize>) -> Result<PiValue> {
    require_positive(digits as usize, "digits")?;
    match (method, terms) {
        (PiMethod::Madhava, terms) => {
            // Enough terms for the requested digits when none are given.
            let terms = terms.unwrap_or((digits as f64 / 3f64.log10()).ceil() as usize + 2);
            require_positive(terms, "terms")?;
            let scale = digits + guard_digits(terms);
            Ok(PiValue { value: madhava_sum(terms, scale)?.round(digits), terms_used: terms })
        }
        (PiMethod::Machin, _) => machin(digits),
        (PiMethod::Ramanujan, None) => ramanujan(digits),
        (PiMethod::Chudnovsky, None) => chudnovsky(digits),
        (PiMethod::Ramanujan, Some(terms)) => {
            require_positive(terms, "terms")?;
            let scale = digits + guard_digits(terms);
            Ok(PiValue { value: ramanujan_partial(terms, scale)?.round(digits), terms_used: terms })
        }
        (PiMethod::Chudnovsky, Some(terms)) => {
            require_positive(terms, "terms")?;
            let scale = digits + guard_digits(terms);
            Ok(PiValue { value: chudnovsky_partial(terms, scale)?.round(digits), terms_used: terms })
        }
    }
}

/// `sqrt(12) * sum_{k < terms} (-3)^-k / (2k + 1)`, rounded to `digits`.
pub fn pi_madhava(terms: usize, digits: u32) -> Result<BigDecimal> {
    Ok(compute(PiMethod::Madhava, digits, Some(terms))?.value)
}

/// Unrounded Madhava partial sum at `scale` decimals.
pub fn madhava_sum(terms: usize, scale: u32) -> Result<BigDecimal> {
    require_positive(terms, "terms")?;
    let mut power = pow10(scale);
    let mut sum = BigInt::zero();
    for k in 0..terms {
        let term = &power / (2 * k as u64 + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= 3u32;
    }
    let sqrt12 = BigDecimal::from_integer(12).sqrt(scale)?;
    Ok(BigDecimal::new(sum, scale).mul(&sqrt12, scale))
}

/// arctan(1/x) at `scale` decimals by its Maclaurin series; returns the value
/// and the number of terms used.
fn arctan_recip(x: u32, scale: u32) -> (BigInt, usize) {
    let x2 = BigInt::from(x) * x;
    let mut power = pow10(scale) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k as usize)
}

/// π = 16 arctan(1/5) - 4 arctan(1/239).
pub fn pi_machin(digits: u32) -> Result<BigDecimal> {
    Ok(machin(digits)?.value)
}

fn machin(digits: u32) -> Result<PiValue> {
    require_positive(digits as usize, "digits")?;
    let estimate = (digits as f64 / 25f64.log10()).ceil() as usize + 1;
    let scale = digits + guard_digits(estimate);
    let (a5, n5) = arctan_recip(5, scale);
    let (a239, n239) = arctan_recip(239, scale);
    let pi = BigDecimal::new(a5 * 16 - a239 * 4, scale);
    Ok(PiValue { value: pi.round(digits), terms_used: n5 + n239 })
}

/// Ramanujan's 1/π series: 1/π = (2√2/9801) Σ (4k)!/(k!)^4 (26390k+1103)/396^(4k).
pub fn pi_ramanujan(digits: u32) -> Result<BigDecimal> {
    Ok(ramanujan(digits)?.value)
}

fn ramanujan(digits: u32) -> Result<PiValue> {
    require_positive(digits as usize, "digits")?;
    let estimate = digits as usize / 7 + 2;
    let scale = digits + guard_digits(estimate);
    let (sum, terms) = ramanujan_series(None, scale);
    Ok(PiValue { value: ramanujan_finish(sum, scale)?.round(digits), terms_used: terms })
}

/// Unrounded π from the first `terms` Ramanujan terms at `scale` decimals.
pub fn ramanujan_partial(terms: usize, scale: u32) -> Result<BigDecimal> {
    require_positive(terms, "terms")?;
    let (sum, _) = ramanujan_series(Some(terms), scale);
    ramanujan_finish(sum, scale)
}

/// Sums the series at `scale` decimals until the term underflows, or for
/// exactly `terms` terms.
fn ramanujan_series(terms: Option<usize>, scale: u32) -> (BigInt, usize) {
    let denom_step = BigInt::from(396u32).pow(4);
    // ratio (4k)!/(k!^4 396^(4k)) carried as a fixed-point integer
    let mut ratio = pow10(scale);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        if terms.map_or(ratio.is_zero(), |t| k as usize >= t) {
            break;
        }
        sum += &ratio * (26390 * k + 1103);
        let num = BigInt::from((4 * k + 1) * (4 * k + 2) * (4 * k + 3) * (4 * k + 4));
        let den = BigInt::from(k + 1).pow(4) * &denom_step;
        ratio = ratio * num / den;
        k += 1;
    }
    (sum, k as usize)
}

fn ramanujan_finish(sum: BigInt, scale: u32) -> Result<BigDecimal> {
    // π = 9801 / (2√2 · S)
    let sqrt2 = BigDecimal::from_integer(2).sqrt(scale)?;
    let denom = sqrt2.mul(&BigDecimal::new(sum, scale), scale).mul_int(2);
    BigDecimal::from_integer(9801).div(&denom, scale)
}

/// Big-integer state of the Chudnovsky recurrences at term index `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChudnovskyState {
    pub q: u64,
    /// Linear term 545140134 q + 13591409.
    pub l: BigInt,
    /// Exponential term (-262537412640768000)^q.
    pub x: BigInt,
    /// Multinomial term (6q)! / ((3q)! (q!)^3).
    pub m: BigInt,
    /// 12 q + 6.
    pub k: BigInt,
}

impl Default for ChudnovskyState {
    fn default() -> Self {
        ChudnovskyState {
            q: 0,
            l: BigInt::from(CHUDNOVSKY_L0),
            x: BigInt::one(),
            m: BigInt::one(),
            k: BigInt::from(6),
        }
    }
}

impl ChudnovskyState {
    /// Advance to `q + 1`. The multinomial update must divide exactly.
    pub fn step(&self) -> Result<ChudnovskyState> {
        let k = &self.k;
        let factor: BigInt = k * k * k - k * 16;
        let denom = BigInt::from(self.q + 1).pow(3);
        let (m, rem) = (&self.m * factor).div_rem(&denom);
        if !rem.is_zero() {
            return Err(Error::Internal(format!(
                "Chudnovsky multinomial update is not exact at q = {}",
                self.q
            )));
        }
        Ok(ChudnovskyState {
            q: self.q + 1,
            l: &self.l + CHUDNOVSKY_L_STEP,
            x: &self.x * CHUDNOVSKY_X_STEP,
            m,
            k: k + 12,
        })
    }
}

/// Number of terms the Chudnovsky driver sums for `digits` digits.
pub fn chudnovsky_terms(digits: u32) -> usize {
    digits.div_ceil(14) as usize + 1
}

/// π via Chudnovsky: 426880 √10005 / Σ M_q L_q / X_q.
pub fn pi_chudnovsky(digits: u32) -> Result<BigDecimal> {
    Ok(chudnovsky(digits)?.value)
}

fn chudnovsky(digits: u32) -> Result<PiValue> {
    require_positive(digits as usize, "digits")?;
    let terms = chudnovsky_terms(digits);
    let scale = digits + guard_digits(terms);
    let value = if digits > BINARY_SPLITTING_THRESHOLD {
        chudnovsky_split_at_scale(terms, scale)?
    } else {
        chudnovsky_partial(terms, scale)?
    };
    Ok(PiValue { value: value.round(digits), terms_used: terms })
}

/// Unrounded π from the first `terms` Chudnovsky terms via the recurrences.
pub fn chudnovsky_partial(terms: usize, scale: u32) -> Result<BigDecimal> {
    require_positive(terms, "terms")?;
    let one = pow10(scale);
    let mut state = ChudnovskyState::default();
    let mut sum = BigInt::zero();
    for i in 0..terms {
        // truncating division keeps the per-term error below one ulp
        sum += &state.m * &state.l * &one / &state.x;
        if i + 1 < terms {
            state = state.step()?;
        }
    }
    chudnovsky_finish(&BigDecimal::new(sum, scale), scale)
}

fn chudnovsky_constant(scale: u32) -> Result<BigDecimal> {
    Ok(BigDecimal::from_integer(10005).sqrt(scale)?.mul_int(426_880))
}

fn chudnovsky_finish(sum: &BigDecimal, scale: u32) -> Result<BigDecimal> {
    chudnovsky_constant(scale)?.div(sum, scale)
}

/// Binary splitting over terms `[a, b)`; returns (P, Q, R).
fn split(a: u64, b: u64) -> (BigInt, BigInt, BigInt) {
    if b == a + 1 {
        let p = -BigInt::from(6 * a - 5) * (2 * a - 1) * (6 * a - 1);
        let q = BigInt::from(CHUDNOVSKY_Q_FACTOR) * a * a * a;
        let r = &p * (CHUDNOVSKY_L_STEP as u64 * a + CHUDNOVSKY_L0 as u64);
        return (p, q, r);
    }
    let mid = (a + b) / 2;
    let (pam, qam, ram) = split(a, mid);
    let (pmb, qmb, rmb) = split(mid, b);
    (&pam * &pmb, &qam * &qmb, &qmb * ram + &pam * rmb)
}

/// The same truncated Chudnovsky sum as [`chudnovsky_partial`], evaluated
/// by binary splitting.
pub fn chudnovsky_binary_splitting(digits: u32) -> Result<BigDecimal> {
    require_positive(digits as usize, "digits")?;
    let terms = chudnovsky_terms(digits);
    Ok(chudnovsky_split_at_scale(terms, digits + guard_digits(terms))?.round(digits))
}

fn chudnovsky_split_at_scale(terms: usize, scale: u32) -> Result<BigDecimal> {
    if terms == 1 {
        let sum = BigDecimal::from_integer(CHUDNOVSKY_L0);
        return chudnovsky_finish(&sum, scale);
    }
    let (_, q, r) = split(1, terms as u64);
    // Σ = (13591409 Q + R) / Q
    let num = &q * CHUDNOVSKY_L0 + r;
    let pi = chudnovsky_constant(scale)?.mul_int(q).div(&BigDecimal::from_integer(num), scale)?;
    Ok(pi)
}

/// Correct decimal digits of `value` measured against `reference`.
pub fn correct_digits(value: &BigDecimal, reference: &BigDecimal) -> f64 {
    let err = (value - reference).abs();
    match err.log10_abs() {
        Some(log) => -log,
        None => err.scale() as f64,
    }
}

/// Measured correct digits per term for a partial sum of `terms` terms,
/// judged against a 2000-digit reference.
pub fn digits_per_term(method: PiMethod, terms: usize) -> Result<f64> {
    if terms < 2 {
        return Err(Error::Parse("digits_per_term needs at least two terms".into()));
    }
    let reference = pi_chudnovsky(2000)?;
    let scale = 2000;
    let partial = partial_for(method, terms, scale)?;
    Ok(correct_digits(&partial, &reference) / terms as f64)
}

fn partial_for(method: PiMethod, terms: usize, scale: u32) -> Result<BigDecimal> {
    match method {
        PiMethod::Ramanujan => ramanujan_partial(terms, scale),
        PiMethod::Chudnovsky => chudnovsky_partial(terms, scale),
        PiMethod::Madhava => madhava_sum(terms, scale),
        PiMethod::Machin => Err(Error::Parse(
            "convergence is reported for the madhava, ramanujan and chudnovsky series".into(),
        )),
    }
}

/// Correct digits gained by the `terms`-th term alone.
pub fn digit_gain(method: PiMethod, terms: usize) -> Result<f64> {
    if terms < 2 {
        return Err(Error::Parse("digit_gain needs at least two terms".into()));
    }
    let reference = pi_chudnovsky(2000)?;
    let before = correct_digits(&partial_for(method, terms - 1, 2000)?, &reference);
    let after = correct_digits(&partial_for(method, terms, 2000)?, &reference);
    Ok(after - before)
}
