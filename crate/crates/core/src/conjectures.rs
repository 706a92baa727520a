//! Registry of continued-fraction conjectures and their numerical check.
//!
//! The built-in registry is `data/conjectures.txt`; [`parse_registry`] reads
//! the same format from any file.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::constants::{reference_constant, Constant};
use crate::contfrac::{CfSpec, Convergents, Poly, Terms};
use crate::decimal::BigDecimal;
use crate::error::{Error, Result};

pub const BUILTIN_REGISTRY: &str = include_str!("../data/conjectures.txt");
pub const REGISTRY_FORMAT: u32 = 1;

/// Hard limit on continued fraction depth during verification.
pub const DEPTH_CAP: usize = 1_000_000;
/// First depth of the doubling schedule.
pub const START_DEPTH: usize = 16;
pub const MAX_VERIFY_DIGITS: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Unproved,
}

/// How the term generators were obtained from the source formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermSource {
    /// Read directly off the printed fraction.
    Printed,
    /// Fitted to a few printed terms.
    Fitted,
    /// The printed a/b labels were swapped to match the printed terms.
    Relabelled,
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $text:literal),* }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $text),* })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($ty::$variant),)*
                    _ => Err(Error::Parse(format!("unknown {} `{s}`", stringify!($ty).to_lowercase()))),
                }
            }
        }
    };
}

keyword_enum!(Status { Proved => "proved", Unproved => "unproved" });
keyword_enum!(TermSource { Printed => "printed", Fitted => "fitted", Relabelled => "relabelled" });

/// The exact map x -> (p x + q)/(r x + s).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transform {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { p: 1, q: 0, r: 0, s: 1 };

    pub fn apply(&self, x: &BigDecimal, scale: u32) -> Result<BigDecimal> {
        let num = x.mul_int(self.p) + BigDecimal::from_integer(self.q);
        let den = x.mul_int(self.r) + BigDecimal::from_integer(self.s);
        num.div(&den, scale)
    }
}

/// Leading terms as printed: a0, then b_n/a_n pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedTerms {
    pub a0: BigInt,
    pub fractions: Vec<(BigInt, BigInt)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureRecord {
    pub name: String,
    pub constant: Constant,
    pub lhs: String,
    pub transform: Transform,
    pub a0: BigInt,
    pub a: Poly,
    pub b: Poly,
    pub status: Status,
    pub terms: TermSource,
    pub printed: Option<PrintedTerms>,
}

impl ConjectureRecord {
    pub fn spec(&self, depth: usize) -> CfSpec {
        CfSpec::new(self.a0.clone(), Terms::poly(self.a.clone()), Terms::poly(self.b.clone()), depth)
            .expect("polynomial terms are unbounded")
    }

    /// The left-hand side, from the reference constant.
    pub fn target(&self, digits: u32) -> Result<BigDecimal> {
        let x = reference_constant(self.constant, digits + 10)?;
        self.transform.apply(&x, digits)
    }

    /// Check the generators against the printed leading terms.
    pub fn check_printed(&self) -> Result<()> {
        let Some(printed) = &self.printed else { return Ok(()) };
        let mismatch = |what: String| Error::Parse(format!("record `{}`: {what}", self.name));
        if printed.a0 != self.a0 {
            return Err(mismatch(format!("a0 = {} but the printed value is {}", self.a0, printed.a0)));
        }
        for (i, (b, a)) in printed.fractions.iter().enumerate() {
            let n = i as u64 + 1;
            let (gen_a, gen_b) = (self.a.eval(n), self.b.eval(n));
            if (&gen_b, &gen_a) != (b, a) {
                return Err(mismatch(format!("term {n} is {gen_b}/{gen_a}, printed {b}/{a}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ConjectureRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.transform;
        write!(
            f,
            "name={}; constant={}; lhs={}; transform={},{},{},{}; a0={}; a={}; b={}; status={}; terms={}",
            self.name, self.constant, self.lhs, t.p, t.q, t.r, t.s, self.a0, self.a, self.b, self.status, self.terms
        )?;
        if let Some(p) = &self.printed {
            write!(f, "; printed={}", p.a0)?;
            for (b, a) in &p.fractions {
                write!(f, " {b}/{a}")?;
            }
        }
        Ok(())
    }
}

fn parse_int<T: FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim().parse().map_err(|_| Error::Parse(format!("bad {what} `{text}`")))
}

fn parse_printed(text: &str) -> Result<PrintedTerms> {
    let mut parts = text.split_whitespace();
    let a0 = parse_int(parts.next().unwrap_or(""), "printed a0")?;
    let fractions = parts
        .map(|frac| {
            let (b, a) = frac
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("printed term `{frac}` is not b/a")))?;
            Ok((parse_int(b, "printed numerator")?, parse_int(a, "printed denominator")?))
        })
        .collect::<Result<_>>()?;
    Ok(PrintedTerms { a0, fractions })
}

fn parse_record(line: &str) -> Result<ConjectureRecord> {
    let mut fields = std::collections::BTreeMap::new();
    for field in line.split(';').map(str::trim).filter(|f| !f.is_empty()) {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("field `{field}` is not key=value")))?;
        if fields.insert(key.trim(), value.trim()).is_some() {
            return Err(Error::Parse(format!("duplicate field `{}`", key.trim())));
        }
    }
    const KNOWN: [&str; 10] = ["name", "constant", "lhs", "transform", "a0", "a", "b", "status", "terms", "printed"];
    if let Some(unknown) = fields.keys().find(|k| !KNOWN.contains(k)) {
        return Err(Error::Parse(format!("unknown field `{unknown}`")));
    }
    let get = |key: &str| fields.get(key).copied().ok_or_else(|| Error::Parse(format!("missing field `{key}`")));

    let t: Vec<i64> = get("transform")?
        .split(',')
        .map(|v| parse_int(v, "transform coefficient"))
        .collect::<Result<_>>()?;
    let [p, q, r, s] = t[..] else {
        return Err(Error::Parse("transform needs four coefficients p,q,r,s".into()));
    };
    let record = ConjectureRecord {
        name: get("name")?.to_string(),
        constant: get("constant")?.parse()?,
        lhs: fields.get("lhs").unwrap_or(&"").to_string(),
        transform: Transform { p, q, r, s },
        a0: parse_int(get("a0")?, "a0")?,
        a: Poly::parse(get("a")?)?,
        b: Poly::parse(get("b")?)?,
        status: get("status")?.parse()?,
        terms: fields.get("terms").map_or(Ok(TermSource::Printed), |t| t.parse())?,
        printed: fields.get("printed").map(|t| parse_printed(t)).transpose()?,
    };
    record.check_printed()?;
    Ok(record)
}

/// Parse a registry file. The first non-comment line must be `format=1`.
pub fn parse_registry(text: &str) -> Result<Vec<ConjectureRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, header)) if header == format!("format={REGISTRY_FORMAT}") => {}
        Some((n, header)) => return Err(Error::Parse(format!("line {n}: expected format={REGISTRY_FORMAT}, got `{header}`"))),
        None => return Err(Error::Parse("empty registry".into())),
    }
    let mut records: Vec<ConjectureRecord> = Vec::new();
    for (n, line) in lines {
        let record = parse_record(line).map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
        if records.iter().any(|r| r.name == record.name) {
            return Err(Error::Parse(format!("line {n}: duplicate record `{}`", record.name)));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn builtin_registry() -> Vec<ConjectureRecord> {
    parse_registry(BUILTIN_REGISTRY).expect("built-in registry is well formed")
}

pub fn find<'a>(registry: &'a [ConjectureRecord], name: &str) -> Result<&'a ConjectureRecord> {
    registry
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::UnknownConstant(name.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMethod {
    /// Two scheduled depths agreed to digits + 5 places.
    Direct,
    /// The depth cap was reached; the value is a Richardson extrapolation
    /// of the scheduled convergents.
    Richardson,
}

fn scientific<S: serde::Serializer>(x: &BigDecimal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_scientific(3))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub name: String,
    pub status: Status,
    pub digits: u32,
    #[serde(serialize_with = "scientific")]
    pub abs_error: BigDecimal,
    pub depth_used: usize,
    #[serde(rename = "match")]
    pub matched: bool,
    /// Whether plain evaluation settled before the depth cap.
    pub converged: bool,
    pub method: VerifyMethod,
    pub value: BigDecimal,
}

/// Evaluate `record` on the depth schedule 16, 32, 64, ... until two
/// consecutive depths agree to `digits + 5` places or the cap is hit, then
/// compare with the left-hand side.
pub fn verify_conjecture(record: &ConjectureRecord, digits: u32) -> Result<Verification> {
    verify_with_cap(record, digits, DEPTH_CAP)
}

pub fn verify_with_cap(record: &ConjectureRecord, digits: u32, cap: usize) -> Result<Verification> {
    if digits > MAX_VERIFY_DIGITS {
        return Err(Error::Precision(format!("verification is limited to {MAX_VERIFY_DIGITS} digits")));
    }
    let scale = digits + 30;
    let tolerance = BigDecimal::new(BigInt::from(1), digits + 5);
    let spec = record.spec(cap);
    let mut conv = Convergents::rescaled(&spec, scale + 10);
    let mut values: Vec<BigDecimal> = Vec::new();
    let mut depth = START_DEPTH.min(cap.max(1));
    let mut depth_used = depth;
    let mut converged = false;
    while depth <= cap {
        conv.advance_to(depth)?;
        let v = conv.value(scale)?;
        depth_used = depth;
        let settled = values.last().is_some_and(|prev| (&v - prev).abs() < tolerance);
        values.push(v);
        if settled {
            converged = true;
            break;
        }
        depth *= 2;
    }
    let (value, method) = if converged || values.len() < 3 {
        (values.last().unwrap().clone(), VerifyMethod::Direct)
    } else {
        (richardson(&values, scale)?, VerifyMethod::Richardson)
    };
    let target = record.target(scale)?;
    let abs_error = (&value - &target).abs();
    let matched = abs_error < BigDecimal::new(BigInt::from(1), digits);
    Ok(Verification {
        name: record.name.clone(),
        status: record.status,
        digits,
        abs_error,
        depth_used,
        matched,
        converged,
        method,
        value: value.round(digits),
    })
}

/// Richardson extrapolation of values at depths n0 2^j whose error is a
/// series in integer powers of 1/n. The leading power is read off the last
/// three values.
pub fn richardson(values: &[BigDecimal], scale: u32) -> Result<BigDecimal> {
    let m = values.len();
    if m < 3 {
        return Err(Error::Internal("extrapolation needs three values".into()));
    }
    let d1 = (&values[m - 2] - &values[m - 3]).abs().to_f64();
    let d2 = (&values[m - 1] - &values[m - 2]).abs().to_f64();
    let order = if d2 > 0.0 { (d1 / d2).log2().round().max(1.0) as u32 } else { 1 };
    let mut row: Vec<BigDecimal> = values.to_vec();
    let mut power = order;
    while row.len() > 1 {
        let f = BigInt::from(1u8) << power;
        let denom: BigInt = &f - 1;
        row = row
            .windows(2)
            .map(|w| (w[1].mul_int(f.clone()) - w[0].clone()).div_int(denom.clone()).with_scale(scale))
            .collect();
        power += 1;
    }
    Ok(row.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry_loads() {
        let reg = builtin_registry();
        let names: Vec<_> = reg.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["pi", "e", "log2", "catalan", "zeta3"]);
        let pi = find(&reg, "pi").unwrap();
        assert_eq!(pi.status, Status::Proved);
        assert_eq!(pi.terms, TermSource::Fitted);
        assert!(reg[1..].iter().all(|r| r.status == Status::Unproved));
        assert!(find(&reg, "gamma").is_err());
    }

    #[test]
    fn fits_reproduce_printed_terms() {
        let reg = builtin_registry();
        let pi = find(&reg, "pi").unwrap();
        // -1·1/6, -2·3/9, -3·5/12, -4·7/15
        for (n, (b, a)) in [(1, (-1, 6)), (2, (-6, 9)), (3, (-15, 12)), (4, (-28, 15))] {
            assert_eq!(pi.b.eval(n), BigInt::from(b));
            assert_eq!(pi.a.eval(n), BigInt::from(a));
        }
        let log2 = find(&reg, "log2").unwrap();
        assert_eq!((log2.b.eval(2), log2.a.eval(2)), (BigInt::from(-72), BigInt::from(30)));
        let zeta3 = find(&reg, "zeta3").unwrap();
        assert_eq!((zeta3.b.eval(2), zeta3.a.eval(2)), (BigInt::from(-64), BigInt::from(35)));
    }

    #[test]
    fn printed_mismatch_is_rejected() {
        let text = "format=1\nname=x; constant=e; transform=1,0,0,1; a0=3; a=1,3; b=-1,0; status=unproved; printed=3 -1/5";
        let err = parse_registry(text).unwrap_err();
        assert!(err.to_string().contains("printed -1/5"), "{err}");
    }

    #[test]
    fn registry_format_errors() {
        assert!(parse_registry("").is_err());
        assert!(parse_registry("format=2\n").is_err());
        assert!(parse_registry("format=1\nname=x; constant=e").is_err());
        let dup = "format=1\nname=x; constant=e; transform=1,0,0,1; a0=3; a=1,3; b=-1,0; status=proved\n".to_string();
        assert_eq!(parse_registry(&dup).unwrap().len(), 1);
        let twice = format!("{dup}{}", dup.trim_start_matches("format=1\n"));
        assert!(parse_registry(&twice).is_err());
        let extra = "format=1\nname=x; constant=e; transform=1,0,0,1; a0=3; a=1,3; b=-1,0; status=proved; colour=red";
        assert!(parse_registry(extra).is_err());
    }

    #[test]
    fn records_print_and_reparse() {
        let reg = builtin_registry();
        let text = std::iter::once("format=1".to_string())
            .chain(reg.iter().map(ToString::to_string))
            .collect::<Vec<_>>()
            .join("\n");
        assert_eq!(parse_registry(&text).unwrap(), reg);
    }

    #[test]
    fn fast_records_verify_directly() {
        let reg = builtin_registry();
        for name in ["pi", "e", "log2", "catalan"] {
            let v = verify_conjecture(find(&reg, name).unwrap(), 30).unwrap();
            assert!(v.matched, "{name}: {v:?}");
            assert!(v.converged);
            assert_eq!(v.method, VerifyMethod::Direct);
            assert!(v.depth_used <= 1024, "{name}: {}", v.depth_used);
        }
    }

    #[test]
    fn wrong_constant_does_not_match() {
        let mut rec = find(&builtin_registry(), "e").unwrap().clone();
        rec.transform = Transform { p: 1, q: 0, r: 0, s: 2 };
        let v = verify_conjecture(&rec, 20).unwrap();
        assert!(!v.matched);
    }

    #[test]
    fn step_change_is_monotone_beyond_depth_ten() {
        for rec in builtin_registry() {
            let spec = rec.spec(400);
            let mut conv = Convergents::rescaled(&spec, 120);
            conv.advance_to(10).unwrap();
            let mut last = conv.step_change(110).unwrap().unwrap();
            while conv.depth() < 400 {
                conv.step().unwrap();
                let next = conv.step_change(110).unwrap().unwrap();
                assert!(next <= last, "{} at depth {}", rec.name, conv.depth());
                last = next;
            }
        }
    }

    #[test]
    fn richardson_on_a_power_series() {
        // v(n) = 1 + 1/n² - 3/n³ + 2/n⁵
        let values: Vec<BigDecimal> = (0..12)
            .map(|j| {
                let n = BigInt::from(16u64 << j);
                let num = n.pow(5) + n.pow(3) - n.pow(2) * 3 + 2;
                BigDecimal::from_ratio(&num, &n.pow(5), 80)
            })
            .collect();
        let limit = richardson(&values, 80).unwrap();
        assert!((limit - BigDecimal::from_integer(1)).abs() < BigDecimal::new(BigInt::from(1), 60));
    }
}
