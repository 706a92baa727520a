//! The Rogers-Ramanujan continued fraction and the Gamma-ratio fraction
//!
//! ```text
//! {Γ((x+1)/4) / Γ((x+3)/4)}² = 4/(x + 1²/(2x + 3²/(2x + 5²/(2x + ...))))
//! ```
//!
//! with Γ from Spouge's approximation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::constants::{exp, ln, powi, reference_constant, Constant};
use crate::contfrac::{eval_cf, CfSpec, Poly, Terms};
use crate::decimal::{pow10, BigDecimal};
use crate::error::{Error, Result};
use crate::pi::pi_chudnovsky;

fn check_unit_interval(q: &BigDecimal) -> Result<()> {
    if q.is_negative() || q.is_zero() || *q >= BigDecimal::from_integer(1) {
        return Err(Error::OutsideUnitInterval(q.to_string()));
    }
    Ok(())
}

/// 1/(1 + q/(1 + q²/(1 + ... + q^depth/1))), the fraction without the
/// q^(1/5) prefactor, at `digits` decimals.
pub fn rogers_ramanujan_fraction(q: &BigDecimal, digits: u32, depth: usize) -> Result<BigDecimal> {
    check_unit_interval(q)?;
    let ws = digits + 20;
    let q = q.with_scale(ws);
    let mut powers = Vec::with_capacity(depth);
    let mut p = q.clone();
    for _ in 0..depth {
        powers.push(p.clone());
        p = p.mul(&q, ws);
    }
    // All terms are positive, so the tail-first evaluation is stable.
    let one = BigDecimal::from_integer(1).with_scale(ws);
    let mut tail = one.clone();
    for qn in powers.iter().rev() {
        tail = &one + &qn.div(&tail, ws)?;
    }
    Ok(one.div(&tail, ws)?.round(digits))
}

/// R(q) = q^(1/5) / (1 + q/(1 + q²/(1 + ...))).
pub fn rogers_ramanujan_r(q: &BigDecimal, digits: u32, depth: usize) -> Result<BigDecimal> {
    let ws = digits + 20;
    let fraction = rogers_ramanujan_fraction(q, ws, depth)?;
    let fifth_root = q.root(5, ws)?;
    Ok(fifth_root.mul(&fraction, ws).round(digits))
}

/// q^(1/5) H(q)/G(q) with both series truncated after `terms` terms, where
/// G(q) = Σ q^(n²)/((1-q)...(1-q^n)) and H(q) = Σ q^(n²+n)/((1-q)...(1-q^n)).
pub fn rogers_ramanujan_series(q: &BigDecimal, digits: u32, terms: usize) -> Result<BigDecimal> {
    check_unit_interval(q)?;
    let ws = digits + 20;
    let q = q.with_scale(ws);
    let one = BigDecimal::from_integer(1).with_scale(ws);
    let (mut g, mut h) = (BigDecimal::zero(), BigDecimal::zero());
    // running values of q^n, q^(n²), and the product (1-q)...(1-q^n)
    let mut qn = one.clone();
    let mut qn2 = one.clone();
    let mut denom = one.clone();
    for n in 0..terms {
        if n > 0 {
            // q^(n²) = q^((n-1)²) q^(2n-1)
            let q_prev = qn.clone();
            qn = qn.mul(&q, ws);
            qn2 = qn2.mul(&q_prev, ws).mul(&qn, ws);
            denom = denom.mul(&(&one - &qn), ws);
        }
        g = &g + &qn2.div(&denom, ws)?;
        h = &h + &qn2.mul(&qn, ws).div(&denom, ws)?;
    }
    let fifth_root = q.root(5, ws)?;
    Ok(fifth_root.mul(&h.div(&g, ws)?, ws).round(digits))
}

/// √((5 + √5)/2) - (√5 + 1)/2, the value of R(e^(-2π)).
pub fn rogers_ramanujan_at_e_minus_2pi(digits: u32) -> Result<BigDecimal> {
    let ws = digits + 20;
    let sqrt5 = reference_constant(Constant::Sqrt5, ws)?;
    let five = BigDecimal::from_integer(5);
    let one = BigDecimal::from_integer(1);
    let inner = (&five + &sqrt5).div_int(2).sqrt(ws)?;
    let phi = (&sqrt5 + &one).div_int(2);
    Ok((inner - phi).round(digits))
}

/// Largest precision `gamma` supports.
pub const MAX_GAMMA_DIGITS: u32 = 300;

/// Spouge's parameter a for a relative error below 10^-digits.
pub fn spouge_parameter(digits: u32) -> u32 {
    let a = (digits as f64 * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI).ln()).ceil() as u32;
    a.max(2)
}

/// Γ(x) for x > 0 at `digits` decimals.
pub fn gamma(x: &BigDecimal, digits: u32) -> Result<BigDecimal> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::Precision(format!("Gamma is only implemented for x > 0, got {x}")));
    }
    if digits > MAX_GAMMA_DIGITS {
        return Err(Error::Precision(format!("Gamma is limited to {MAX_GAMMA_DIGITS} digits")));
    }
    if *x > BigDecimal::from_integer(1000) {
        return Err(Error::Precision(format!("Gamma argument {x} is too large")));
    }
    // Γ(x) = Γ(x + 1)/x, Γ(z + 1) by Spouge with z = x.
    let magnitude = x.to_f64().max(1.0);
    let result_digits = (magnitude * magnitude.log10()).ceil() as u32;
    let a = spouge_parameter(digits + 10 + result_digits);
    let ws = digits + 2 * a + 30 + result_digits;
    let z = x.with_scale(ws);
    let a_dec = BigDecimal::from_integer(a).with_scale(ws);

    let e = exp(&BigDecimal::from_integer(1), ws);
    let two_pi = pi_chudnovsky(ws)?.with_scale(ws).mul_int(2);
    let mut sum = two_pi.sqrt(ws)?;
    // c_k = (-1)^(k-1) (a-k)^(k-1/2) e^(a-k) / (k-1)!
    let mut factorial = BigInt::one();
    for k in 1..a {
        if k > 1 {
            factorial *= k - 1;
        }
        let base = BigInt::from(a - k);
        let power = BigDecimal::from_integer(base.pow(k - 1)).mul(&BigDecimal::from_integer(base).sqrt(ws)?, ws);
        let e_power = powi(&e, a - k, ws);
        let mut c = power.mul(&e_power, ws).div(&BigDecimal::from_integer(factorial.clone()), ws)?;
        if k % 2 == 0 {
            c = -c;
        }
        let denom = &z + &BigDecimal::from_integer(k);
        sum = &sum + &c.div(&denom, ws)?;
    }
    let za = &z + &a_dec;
    let half = BigDecimal::new(BigInt::from(5), 1);
    let log_factor = (&z + &half).mul(&ln(&za, ws)?, ws) - za.clone();
    let factor = exp(&log_factor, ws);
    let gamma_z1 = factor.mul(&sum, ws);
    Ok(gamma_z1.div(&z, ws)?.round(digits))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaRatioCheck {
    pub lhs: BigDecimal,
    pub rhs: BigDecimal,
    pub abs_error: BigDecimal,
    pub depth: usize,
}

/// Depth used by [`gamma_ratio_cf_check`] when none is given.
pub const GAMMA_RATIO_DEPTH: usize = 100_000;

/// The fraction 4/(x + 1²/(2x + 3²/(2x + ...))) as an integer [`CfSpec`].
/// With x = m 10^-s every level is multiplied by 10^s, so a_1 = m,
/// a_n = 2m, b_1 = 4 10^s and b_n = 10^(2s) (2n - 3)².
pub fn gamma_ratio_spec(x: &BigDecimal, depth: usize) -> Result<CfSpec> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::Precision(format!("the Gamma-ratio fraction needs x > 0, got {x}")));
    }
    let m = x.mantissa().clone();
    let s = x.scale();
    let shift = pow10(s);
    let shift2 = pow10(2 * s);
    let a = Terms::with_head(std::slice::from_ref(&m), Poly::constant(&m * 2));
    let b_tail = Poly::from_descending(&[&shift2 * 4, &shift2 * -12, &shift2 * 9])?;
    let b = Terms::with_head(&[shift * 4], b_tail);
    CfSpec::new(BigInt::zero(), a, b, depth)
}

/// Compare {Γ((x+1)/4)/Γ((x+3)/4)}² with the depth-truncated fraction.
pub fn gamma_ratio_cf_check(x: &BigDecimal, digits: u32, depth: usize) -> Result<GammaRatioCheck> {
    let ws = digits + 10;
    let spec = gamma_ratio_spec(x, depth)?;
    let rhs = eval_cf(&spec, ws)?.value;
    let quarter = |shift: i64| {
        let num = x.with_scale(ws + 2) + BigDecimal::from_integer(shift).with_scale(ws + 2);
        num.div_int(4)
    };
    let g1 = gamma(&quarter(1), ws)?;
    let g3 = gamma(&quarter(3), ws)?;
    let ratio = g1.div(&g3, ws)?;
    let lhs = ratio.mul(&ratio, ws);
    let abs_error = (&lhs - &rhs).abs().with_scale(ws);
    Ok(GammaRatioCheck { lhs: lhs.round(digits), rhs: rhs.round(digits), abs_error, depth })
}
