//! Generalized continued fractions
//!
//! ```text
//! a0 + b1/(a1 + b2/(a2 + b3/(a3 + ...)))
//! ```
//!
//! evaluated through the convergent recurrence
//! `h_n = a_n h_{n-1} + b_n h_{n-2}`, `k_n = a_n k_{n-1} + b_n k_{n-2}`,
//! and simple continued fraction expansion of rationals and decimals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::decimal::{guard_digits, pow10, BigDecimal};
use crate::error::{Error, Result};

/// Largest polynomial degree a term generator may have.
pub const MAX_DEGREE: usize = 6;

/// Integer polynomial in n, coefficients stored lowest power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigInt>,
    small: Option<Vec<i128>>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::InvalidContinuedFraction(format!(
                "polynomial degree {} exceeds {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        let small = coeffs.iter().map(|c| c.to_i128()).collect();
        Ok(Poly { coeffs, small })
    }

    /// Coefficients listed from the highest power down, as in "3,7,4" for
    /// 3n² + 7n + 4.
    pub fn from_descending<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Result<Self> {
        Poly::new(coeffs.iter().rev().cloned().map(Into::into).collect())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Poly::new(vec![c.into()]).expect("degree 0")
    }

    /// Parse a comma-separated descending coefficient list.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad polynomial coefficient `{}` in `{text}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Poly::from_descending(&coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients from the highest power down.
    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn eval(&self, n: u64) -> BigInt {
        if let Some(small) = &self.small {
            let x = n as i128;
            let fast = small
                .iter()
                .rev()
                .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c));
            if let Some(v) = fast {
                return BigInt::from(v);
            }
        }
        let x = BigInt::from(n);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.descending().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Partial numerators or denominators for n = 1, 2, ...: an explicit head
/// followed, optionally, by a polynomial tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Terms {
    head: Vec<BigInt>,
    tail: Option<Poly>,
}

impl Terms {
    pub fn list<T: Into<BigInt> + Clone>(values: &[T]) -> Self {
        Terms { head: values.iter().cloned().map(Into::into).collect(), tail: None }
    }

    pub fn poly(p: Poly) -> Self {
        Terms { head: Vec::new(), tail: Some(p) }
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Terms::poly(Poly::constant(c))
    }

    /// Explicit values for the first terms, the polynomial afterwards. The
    /// polynomial is still evaluated at the absolute index n.
    pub fn with_head<T: Into<BigInt> + Clone>(head: &[T], tail: Poly) -> Self {
        Terms { head: head.iter().cloned().map(Into::into).collect(), tail: Some(tail) }
    }

    /// Term `n` (1-based).
    pub fn get(&self, n: usize) -> Option<BigInt> {
        assert!(n >= 1);
        match self.head.get(n - 1) {
            Some(v) => Some(v.clone()),
            None => self.tail.as_ref().map(|p| p.eval(n as u64)),
        }
    }

    /// Number of available terms, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.head.len()),
        }
    }

    pub fn head(&self) -> &[BigInt] {
        &self.head
    }

    pub fn tail(&self) -> Option<&Poly> {
        self.tail.as_ref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfSpec {
    pub a0: BigInt,
    /// Partial denominators a_1, a_2, ...
    pub a: Terms,
    /// Partial numerators b_1, b_2, ...
    pub b: Terms,
    pub depth: usize,
}

impl CfSpec {
    pub fn new<T: Into<BigInt>>(a0: T, a: Terms, b: Terms, depth: usize) -> Result<Self> {
        let spec = CfSpec { a0: a0.into(), a, b, depth };
        for (name, terms) in [("a", &spec.a), ("b", &spec.b)] {
            if let Some(n) = terms.available().filter(|&n| n < depth) {
                return Err(Error::InvalidContinuedFraction(format!(
                    "depth {depth} needs {depth} `{name}` terms, only {n} given"
                )));
            }
        }
        Ok(spec)
    }

    /// The simple continued fraction [c0; c1, c2, ...].
    pub fn simple(terms: &[BigInt]) -> Result<Self> {
        let (first, rest) = terms
            .split_first()
            .ok_or_else(|| Error::InvalidContinuedFraction("empty coefficient list".into()))?;
        CfSpec::new(first.clone(), Terms::list(rest), Terms::constant(1), rest.len())
    }

    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        CfSpec::new(self.a0.clone(), self.a.clone(), self.b.clone(), depth)
    }

    /// (a_n, b_n) for n ≥ 1.
    pub fn term(&self, n: usize) -> Result<(BigInt, BigInt)> {
        match (self.a.get(n), self.b.get(n)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidContinuedFraction(format!("no term at depth {n}"))),
        }
    }
}

/// Streaming convergents. When `working_digits` is set, the four state
/// integers are divided by a common power of ten whenever they grow past
/// twice that many digits; the ratios keep about `working_digits`
/// significant digits.
#[derive(Clone, Debug)]
pub struct Convergents<'a> {
    spec: &'a CfSpec,
    n: usize,
    h_prev: BigInt,
    h: BigInt,
    k_prev: BigInt,
    k: BigInt,
    rescale: Option<(u64, BigInt)>,
    rescaled: bool,
}

impl<'a> Convergents<'a> {
    pub fn exact(spec: &'a CfSpec) -> Self {
        Convergents {
            spec,
            n: 0,
            h_prev: BigInt::one(),
            h: spec.a0.clone(),
            k_prev: BigInt::zero(),
            k: BigInt::one(),
            rescale: None,
            rescaled: false,
        }
    }

    pub fn rescaled(spec: &'a CfSpec, working_digits: u32) -> Self {
        let mut c = Convergents::exact(spec);
        let bits = (2.0 * working_digits as f64 * std::f64::consts::LOG2_10).ceil() as u64;
        c.rescale = Some((bits, pow10(working_digits)));
        c
    }

    /// Current depth n.
    pub fn depth(&self) -> usize {
        self.n
    }

    /// Whether any rescaling happened (the state is no longer exact).
    pub fn was_rescaled(&self) -> bool {
        self.rescaled
    }

    pub fn step(&mut self) -> Result<()> {
        let n = self.n + 1;
        let (a, b) = self.spec.term(n)?;
        let h = &a * &self.h + &b * &self.h_prev;
        let k = &a * &self.k + &b * &self.k_prev;
        self.h_prev = std::mem::replace(&mut self.h, h);
        self.k_prev = std::mem::replace(&mut self.k, k);
        self.n = n;
        if let Some((bits, divisor)) = &self.rescale {
            let size = [&self.h, &self.k, &self.h_prev, &self.k_prev].iter().map(|v| v.bits()).max().unwrap();
            if size > *bits {
                for v in [&mut self.h, &mut self.k, &mut self.h_prev, &mut self.k_prev] {
                    *v = &*v / divisor;
                }
                self.rescaled = true;
            }
        }
        Ok(())
    }

    pub fn advance_to(&mut self, depth: usize) -> Result<()> {
        while self.n < depth {
            self.step()?;
        }
        Ok(())
    }

    /// h_n / k_n at `scale` decimals.
    pub fn value(&self, scale: u32) -> Result<BigDecimal> {
        if self.k.is_zero() {
            return Err(Error::ZeroDenominator(self.n));
        }
        Ok(BigDecimal::from_ratio(&self.h, &self.k, scale))
    }

    /// |h_n/k_n - h_{n-1}/k_{n-1}| at `scale` decimals; `None` at depth 0
    /// or when k_{n-1} = 0.
    pub fn step_change(&self, scale: u32) -> Result<Option<BigDecimal>> {
        if self.n == 0 || self.k_prev.is_zero() {
            return Ok(None);
        }
        let num = (&self.h * &self.k_prev - &self.h_prev * &self.k).abs();
        let den = (&self.k * &self.k_prev).abs();
        if den.is_zero() {
            return Err(Error::ZeroDenominator(self.n));
        }
        Ok(Some(BigDecimal::from_ratio(&num, &den, scale)))
    }

    /// The exact convergent; only meaningful when nothing was rescaled.
    pub fn ratio(&self) -> Result<BigRational> {
        if self.k.is_zero() {
            return Err(Error::ZeroDenominator(self.n));
        }
        Ok(BigRational::new(self.h.clone(), self.k.clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfValue {
    pub value: BigDecimal,
    /// |h_d/k_d - h_{d-1}/k_{d-1}|.
    pub error_estimate: BigDecimal,
    pub depth: usize,
}

/// Value of the depth-truncated fraction, rounded to `digits` decimals.
pub fn eval_cf(spec: &CfSpec, digits: u32) -> Result<CfValue> {
    if spec.depth == 0 {
        return Err(Error::InvalidContinuedFraction("depth must be at least 1".into()));
    }
    let scale = digits + guard_digits(spec.depth) + 10;
    let mut conv = Convergents::rescaled(spec, scale + 10);
    conv.advance_to(spec.depth)?;
    let value = conv.value(scale)?;
    let error_estimate = conv
        .step_change(digits + 10)?
        .ok_or(Error::ZeroDenominator(spec.depth - 1))?;
    Ok(CfValue { value: value.round(digits), error_estimate, depth: spec.depth })
}

/// The depth-truncated fraction as an exact rational.
pub fn exact_value(spec: &CfSpec) -> Result<BigRational> {
    let mut conv = Convergents::exact(spec);
    conv.advance_to(spec.depth)?;
    conv.ratio()
}

/// All convergents p_n/q_n of a simple continued fraction.
pub fn simple_convergents(terms: &[BigInt]) -> Result<Vec<BigRational>> {
    let spec = CfSpec::simple(terms)?;
    let mut conv = Convergents::exact(&spec);
    let mut out = vec![conv.ratio()?];
    while conv.depth() < spec.depth {
        conv.step()?;
        out.push(conv.ratio()?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub terms: Vec<BigInt>,
    /// Set when the input precision ran out before `max_terms` were produced.
    pub truncated: bool,
}

/// Simple continued fraction of an exact rational; terminates with a last
/// coefficient ≥ 2 unless the expansion has a single term.
pub fn simple_cf_rational(x: &BigRational, max_terms: usize) -> Vec<BigInt> {
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while out.len() < max_terms && !den.is_zero() {
        let (q, r) = num.div_mod_floor(&den);
        out.push(q);
        num = std::mem::replace(&mut den, r);
    }
    out
}

/// Decimal digits kept in reserve when expanding an inexact value.
pub const EXPANSION_RESERVE_DIGITS: u32 = 10;

/// Simple continued fraction of a decimal carrying one unit of uncertainty
/// in its last place. A coefficient is emitted only if both ends of the
/// interval [x - ulp, x + ulp] agree on it and the convergent denominators
/// still leave `EXPANSION_RESERVE_DIGITS` digits of precision.
pub fn simple_cf_decimal(x: &BigDecimal, max_terms: usize) -> Expansion {
    let one = pow10(x.scale());
    let lo = BigRational::new(x.mantissa() - 1, one.clone());
    let hi = BigRational::new(x.mantissa() + 1, one);
    let budget = x.scale().saturating_sub(EXPANSION_RESERVE_DIGITS) as f64;

    let (mut ln, mut ld) = (lo.numer().clone(), lo.denom().clone());
    let (mut hn, mut hd) = (hi.numer().clone(), hi.denom().clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut terms = Vec::new();
    while terms.len() < max_terms {
        if ld.is_zero() || hd.is_zero() {
            break;
        }
        let (a_lo, r_lo) = ln.div_mod_floor(&ld);
        let (a_hi, r_hi) = hn.div_mod_floor(&hd);
        if a_lo != a_hi {
            break;
        }
        let q_next = &a_lo * &q + &q_prev;
        let used = 2.0 * q_next.to_f64().unwrap_or(f64::INFINITY).max(1.0).log10();
        if used > budget {
            break;
        }
        terms.push(a_lo);
        q_prev = std::mem::replace(&mut q, q_next);
        ln = std::mem::replace(&mut ld, r_lo);
        hn = std::mem::replace(&mut hd, r_hi);
    }
    let truncated = terms.len() < max_terms;
    Expansion { terms, truncated }
}
