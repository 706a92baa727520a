//! Ramanujan sums c_q(n) = Σ_{1≤k≤q, (k,q)=1} cos(2πkn/q) and the
//! Ramanujan-Fourier series of d(n) and σ(n).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::{divisors, gcd, lcm, mobius};
use crate::pi::pi_chudnovsky;

/// c_q(n) = Σ_{d | (q,n)} μ(q/d) d.
pub fn ramanujan_sum(q: u64, n: i64) -> Result<i64> {
    if q == 0 {
        return Err(Error::ZeroArgument("q"));
    }
    let g = gcd(q, n.unsigned_abs());
    Ok(divisors(g)?.into_iter().map(|d| mobius(q / d).unwrap() as i64 * d as i64).sum())
}

/// c_q(n) straight from the cosine sum, in floating point.
pub fn ramanujan_sum_trig(q: u64, n: i64) -> f64 {
    let r = n.rem_euclid(q as i64) as f64;
    (1..=q)
        .filter(|&k| gcd(k, q) == 1)
        .map(|k| (2.0 * std::f64::consts::PI * k as f64 * r / q as f64).cos())
        .sum()
}

/// c_q(0), ..., c_q(len - 1).
pub fn sum_table(q: u64, len: usize) -> Result<Vec<i64>> {
    (0..len as i64).map(|n| ramanujan_sum(q, n)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub cases: u64,
    pub violations: Vec<String>,
}

impl PropertyCheck {
    fn new(name: &str) -> Self {
        PropertyCheck { name: name.to_string(), cases: 0, violations: Vec::new() }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.violations.len() < 20 {
            self.violations.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumPropertyReport {
    pub q_max: u64,
    pub n_max: u64,
    pub checks: Vec<PropertyCheck>,
    /// Σ_{n<q} c_q(n)² for each q: the diagonal of the orthogonality
    /// relation, which works out to q φ(q).
    pub self_products: Vec<(u64, i64)>,
}

impl SumPropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PropertyCheck::passed)
    }
}

/// Largest q_max or n_max `check_sum_properties` accepts.
pub const PROPERTY_LIMIT: u64 = 200;

/// Exhaustive check of periodicity, integrality against the cosine sum,
/// multiplicativity in q, and orthogonality over lcm(q1, q2), for
/// 1 ≤ q ≤ q_max and 0 ≤ n ≤ n_max.
pub fn check_sum_properties(q_max: u64, n_max: u64) -> Result<SumPropertyReport> {
    if q_max == 0 {
        return Err(Error::ZeroArgument("q_max"));
    }
    if q_max > PROPERTY_LIMIT || n_max > PROPERTY_LIMIT {
        return Err(Error::Precision(format!("property checks are limited to {PROPERTY_LIMIT}")));
    }
    let table: Vec<Vec<i64>> = (0..=q_max)
        .map(|q| if q == 0 { Vec::new() } else { sum_table(q, (n_max + q + 1) as usize).unwrap() })
        .collect();
    let c = |q: u64, n: u64| table[q as usize][n as usize];

    let mut periodic = PropertyCheck::new("periodicity c_q(n + q) = c_q(n)");
    let mut integral = PropertyCheck::new("integer values (cosine sum agrees with Möbius formula)");
    let mut multiplicative = PropertyCheck::new("multiplicativity c_{q1 q2}(n) = c_{q1}(n) c_{q2}(n)");
    let mut orthogonal = PropertyCheck::new("orthogonality over lcm(q1, q2)");
    let mut self_products = Vec::new();

    for q in 1..=q_max {
        for n in 0..=n_max {
            periodic.record(c(q, n + q) == c(q, n), || format!("q={q} n={n}"));
            let trig = ramanujan_sum_trig(q, n as i64);
            integral.record((trig - c(q, n) as f64).abs() < 1e-9, || format!("q={q} n={n}: {trig}"));
        }
        let diag: i64 = (0..q).map(|n| ramanujan_sum(q, n as i64).unwrap().pow(2)).sum();
        self_products.push((q, diag));
    }
    for q1 in 1..=q_max {
        for q2 in 1..=q_max {
            if q1 * q2 <= q_max && gcd(q1, q2) == 1 {
                for n in 0..=n_max {
                    let ok = c(q1 * q2, n) == c(q1, n) * c(q2, n);
                    multiplicative.record(ok, || format!("q1={q1} q2={q2} n={n}"));
                }
            }
            if q1 < q2 {
                let l = lcm(q1, q2);
                let total: i64 = (0..l as i64)
                    .map(|n| ramanujan_sum(q1, n).unwrap() * ramanujan_sum(q2, n).unwrap())
                    .sum();
                orthogonal.record(total == 0, || format!("q1={q1} q2={q2}: {total}"));
            }
        }
    }
    Ok(SumPropertyReport {
        q_max,
        n_max,
        checks: vec![periodic, integral, multiplicative, orthogonal],
        self_products,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationTrend {
    pub r: u64,
    pub s: u64,
    pub h: i64,
    /// c_r(h) when r = s, else 0.
    pub limit: f64,
    /// (x, (1/x) Σ_{1≤n≤x} c_r(n) c_s(n + h)).
    pub averages: Vec<(u64, f64)>,
    /// Each average is at least as close to the limit as the previous one.
    pub toward_limit: bool,
}

/// Partial averages of the shifted correlation of c_r and c_s at the given
/// cut-offs. Their limit is c_r(h) for r = s (φ(r) at h = 0) and 0
/// otherwise.
pub fn correlation_trend(r: u64, s: u64, h: i64, cutoffs: &[u64]) -> Result<CorrelationTrend> {
    let limit = if r == s { ramanujan_sum(r, h)? as f64 } else { 0.0 };
    let mut averages = Vec::new();
    let mut total = 0i64;
    let mut n = 0u64;
    for &x in cutoffs {
        while n < x {
            n += 1;
            total += ramanujan_sum(r, n as i64)? * ramanujan_sum(s, n as i64 + h)?;
        }
        averages.push((x, total as f64 / x as f64));
    }
    let toward_limit = averages.windows(2).all(|w| (w[1].1 - limit).abs() <= (w[0].1 - limit).abs() + 1e-12);
    Ok(CorrelationTrend { r, s, h, limit, averages, toward_limit })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RfFunction {
    /// d(n) = -Σ (log q / q) c_q(n)
    DivisorD,
    /// σ(n) = (π² n / 6) Σ c_q(n) / q²
    Sigma,
}

impl std::str::FromStr for RfFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "divisor_d" | "d" => Ok(RfFunction::DivisorD),
            "sigma" => Ok(RfFunction::Sigma),
            _ => Err(Error::Parse(format!("unknown arithmetic function `{s}`"))),
        }
    }
}

/// Partial sum over q = 1..=terms of the Ramanujan-Fourier series.
pub fn rf_partial_sum(func: RfFunction, n: u64, terms: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroArgument("n"));
    }
    if terms == 0 {
        return Err(Error::ZeroArgument("terms"));
    }
    let n_signed = n as i64;
    match func {
        RfFunction::DivisorD => {
            let mut sum = 0.0;
            for q in 1..=terms {
                sum -= (q as f64).ln() / q as f64 * ramanujan_sum(q, n_signed)? as f64;
            }
            Ok(sum)
        }
        RfFunction::Sigma => {
            let pi = pi_chudnovsky(30)?.to_f64();
            let mut sum = 0.0;
            for q in 1..=terms {
                sum += ramanujan_sum(q, n_signed)? as f64 / (q as f64 * q as f64);
            }
            Ok(pi * pi * n as f64 / 6.0 * sum)
        }
    }
}

/// The exact value the series converges to.
pub fn rf_target(func: RfFunction, n: u64) -> Result<u64> {
    let divs = divisors(n)?;
    Ok(match func {
        RfFunction::DivisorD => divs.len() as u64,
        RfFunction::Sigma => divs.iter().sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::totient;

    #[test]
    fn table_for_six() {
        assert_eq!(sum_table(6, 12).unwrap(), vec![2, 1, -1, -2, -1, 1, 2, 1, -1, -2, -1, 1]);
    }

    #[test]
    fn trig_oracle_agrees() {
        for q in 1..=100u64 {
            for n in 0..q as i64 {
                let trig = ramanujan_sum_trig(q, n);
                assert!((trig - ramanujan_sum(q, n).unwrap() as f64).abs() < 1e-9, "q={q} n={n}");
            }
            assert_eq!(ramanujan_sum(q, 0).unwrap(), totient(q).unwrap() as i64);
        }
        assert!((0..50).all(|n| ramanujan_sum(1, n).unwrap() == 1));
        assert_eq!(ramanujan_sum(0, 3), Err(Error::ZeroArgument("q")));
        assert_eq!(ramanujan_sum(6, -1).unwrap(), 1);
    }

    #[test]
    fn small_orthogonality_sums() {
        let sum = |q1, q2, l: i64| -> i64 {
            (0..l).map(|n| ramanujan_sum(q1, n).unwrap() * ramanujan_sum(q2, n).unwrap()).sum()
        };
        assert_eq!(sum(2, 3, 6), 0);
        assert_eq!(sum(4, 6, 12), 0);
        for n in 0..12 {
            assert_eq!(ramanujan_sum(6, n).unwrap(), ramanujan_sum(2, n).unwrap() * ramanujan_sum(3, n).unwrap());
        }
    }

    #[test]
    fn property_suite() {
        let report = check_sum_properties(30, 60).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
        assert!(report.checks.iter().all(|c| c.cases > 0));
        for &(q, v) in &report.self_products {
            assert_eq!(v, (q * totient(q).unwrap()) as i64);
        }
        assert!(check_sum_properties(201, 10).is_err());
    }

    #[test]
    fn correlation_limits() {
        let t = correlation_trend(6, 6, 0, &[1000, 10_000]).unwrap();
        assert_eq!(t.limit, 2.0);
        assert!(t.toward_limit);
        let t = correlation_trend(2, 2, 1, &[999, 9999]).unwrap();
        assert_eq!(t.limit, -1.0);
        assert!(t.toward_limit);
        let t = correlation_trend(3, 5, 2, &[1000, 10_000]).unwrap();
        assert_eq!(t.limit, 0.0);
        assert!(t.toward_limit);
        assert!(t.averages[1].1.abs() < 1e-2);
    }

    #[test]
    fn sigma_series() {
        for (n, target) in [(6, 12.0), (7, 8.0)] {
            let v = rf_partial_sum(RfFunction::Sigma, n, 10_000).unwrap();
            assert!((v - target).abs() < 0.01 * target, "n={n}: {v}");
            assert_eq!(rf_target(RfFunction::Sigma, n).unwrap() as f64, target);
        }
    }

    #[test]
    fn divisor_series_trend() {
        let target = rf_target(RfFunction::DivisorD, 6).unwrap() as f64;
        assert_eq!(target, 4.0);
        let errors: Vec<f64> = [10, 100, 1000, 10_000]
            .iter()
            .map(|&q| (rf_partial_sum(RfFunction::DivisorD, 6, q).unwrap() - target).abs())
            .collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    }
}
