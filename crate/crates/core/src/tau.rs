//! Ramanujan's τ-function: Δ = q ∏_{n≥1} (1 - q^n)^24 = Σ τ(n) q^n.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::is_prime;

/// Largest `n_max` accepted by [`tau_coefficients`].
pub const TAU_LIMIT: usize = 5000;

/// Multiply the truncated series `series` (degrees 0..len) by `factor`,
/// given as its nonzero (degree, coefficient) pairs.
fn mul_sparse(series: &[i128], factor: &[(usize, i128)]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; series.len()];
    for (i, &s) in series.iter().enumerate().filter(|(_, s)| **s != 0) {
        for &(d, f) in factor {
            let Some(slot) = out.get_mut(i + d) else { break };
            *slot = s
                .checked_mul(f)
                .and_then(|p| slot.checked_add(p))
                .ok_or_else(|| Error::Internal("τ coefficient overflowed i128".into()))?;
        }
    }
    Ok(out)
}

fn sparse(series: &[i128]) -> Vec<(usize, i128)> {
    series.iter().enumerate().filter(|(_, c)| **c != 0).map(|(d, &c)| (d, c)).collect()
}

/// τ(1), ..., τ(n_max), exactly.
///
/// E = ∏ (1 - q^n) is built one factor at a time, then multiplied into the
/// running product 24 times; every series is truncated at degree n_max - 1.
pub fn tau_coefficients(n_max: usize) -> Result<Vec<i128>> {
    if n_max > TAU_LIMIT {
        return Err(Error::Precision(format!("τ is computed up to n = {TAU_LIMIT}")));
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let mut euler = vec![0i128; n_max];
    euler[0] = 1;
    for n in 1..n_max {
        euler = mul_sparse(&euler, &[(0, 1), (n, -1)])?;
    }
    let factor = sparse(&euler);
    let mut delta = vec![0i128; n_max];
    delta[0] = 1;
    for _ in 0..24 {
        delta = mul_sparse(&delta, &factor)?;
    }
    // Δ = q E^24, so τ(n) is the coefficient of q^(n-1) in E^24.
    Ok(delta)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauBoundReport {
    pub p_max: u64,
    pub primes_checked: usize,
    /// Largest |τ(p)| / (2 p^(11/2)) and the prime where it occurs.
    pub max_ratio: f64,
    pub max_ratio_prime: u64,
    pub holds: bool,
    pub violations: Vec<u64>,
}

/// Check |τ(p)| ≤ 2 p^(11/2) for every prime p ≤ p_max.
pub fn check_tau_bound(p_max: u64) -> Result<TauBoundReport> {
    let tau = tau_coefficients(p_max as usize)?;
    let mut report = TauBoundReport {
        p_max,
        primes_checked: 0,
        max_ratio: 0.0,
        max_ratio_prime: 0,
        holds: true,
        violations: Vec::new(),
    };
    for p in (2..=p_max).filter(|&p| is_prime(p)) {
        let ratio = (tau[p as usize - 1] as f64).abs() / (2.0 * (p as f64).powf(5.5));
        report.primes_checked += 1;
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.max_ratio_prime = p;
        }
        if ratio > 1.0 {
            report.holds = false;
            report.violations.push(p);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::gcd;
    use num_bigint::BigInt;

    #[test]
    fn leading_coefficients() {
        let tau = tau_coefficients(12).unwrap();
        assert_eq!(tau[..5], [1, -24, 252, -1472, 4830]);
        assert_eq!(tau[5], tau[1] * tau[2]);
        assert_eq!(tau[5], -6048);
        assert_eq!(tau[3], tau[1] * tau[1] - 2048 * tau[0]);
    }

    #[test]
    fn matches_direct_big_integer_product() {
        // oracle: multiply by (1 - q^n) twenty-four times for each n, in BigInt
        let n_max = 40;
        let mut series = vec![BigInt::from(0); n_max];
        series[0] = BigInt::from(1);
        for n in 1..n_max {
            for _ in 0..24 {
                for d in (n..n_max).rev() {
                    let prev = series[d - n].clone();
                    series[d] -= prev;
                }
            }
        }
        let tau = tau_coefficients(n_max).unwrap();
        for (t, s) in tau.iter().zip(&series) {
            assert_eq!(BigInt::from(*t), *s);
        }
    }

    #[test]
    fn multiplicative_and_prime_power_recurrence() {
        let tau = tau_coefficients(4900).unwrap();
        let t = |n: u64| tau[n as usize - 1];
        for m in 1..=70u64 {
            for n in 1..=70u64 {
                if gcd(m, n) == 1 {
                    assert_eq!(t(m * n), t(m) * t(n), "m={m} n={n}");
                }
            }
        }
        for p in [2u64, 3, 5] {
            let p11 = (p as i128).pow(11);
            for j in 1..=4u32 {
                let (hi, mid, lo) = (p.pow(j + 1), p.pow(j), p.pow(j - 1));
                assert_eq!(t(hi), t(p) * t(mid) - p11 * t(lo), "p={p} j={j}");
            }
        }
    }

    #[test]
    fn ramanujan_bound() {
        let report = check_tau_bound(1000).unwrap();
        assert!(report.holds);
        assert_eq!(report.primes_checked, 168);
        assert!(report.max_ratio < 1.0 && report.max_ratio > 0.5);
        let r2 = 24.0 / (2.0 * 2f64.powf(5.5));
        let r3 = 252.0 / (2.0 * 3f64.powf(5.5));
        assert!(r2 < 1.0 && r3 < 1.0);
        assert!(tau_coefficients(5001).is_err());
    }

    #[test]
    fn largest_range_fits() {
        let tau = tau_coefficients(TAU_LIMIT).unwrap();
        assert_eq!(tau.len(), TAU_LIMIT);
    }
}
