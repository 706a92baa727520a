//! Exact integer number theory on machine words.
//!
//! Every quantity in this crate that plays the role of a modulus, a group
//! order or a divisor fits comfortably in a `u64`, so the helpers here stay on
//! native integers and use `u128` for intermediate products.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Prime factorization as `prime -> exponent`.
pub type FactorMap = BTreeMap<u64, u32>;

/// Witnesses that make Miller-Rabin deterministic for every `n < 2^64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<FactorMap> {
    if n == 0 {
        return Err(Error::ZeroArgument("n"));
    }
    let mut factors = FactorMap::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        while rest.is_multiple_of(p) {
            *factors.entry(p).or_insert(0) += 1;
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        *factors.entry(rest).or_insert(0) += 1;
    }
    Ok(factors)
}

/// Euler's totient.
pub fn totient(n: u64) -> Result<u64> {
    let factors = factorize(n)?;
    Ok(factors
        .iter()
        .fold(n, |acc, (&p, _)| acc / p * (p - 1)))
}

/// Möbius function.
pub fn mobius(n: u64) -> Result<i64> {
    let factors = factorize(n)?;
    if factors.values().any(|&e| e > 1) {
        return Ok(0);
    }
    Ok(if factors.len() % 2 == 0 { 1 } else { -1 })
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let factors = factorize(n)?;
    let mut divs = vec![1u64];
    for (&p, &e) in &factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

fn require_odd_prime(q: u64) -> Result<()> {
    if q == 2 || !is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    Ok(())
}

/// Euler's criterion: is `m` a quadratic residue modulo the odd prime `q`?
pub fn legendre_is_qr(m: u64, q: u64) -> Result<bool> {
    require_odd_prime(q)?;
    if m.is_multiple_of(q) {
        return Err(Error::DivisibleByModulus { m, q });
    }
    Ok(pow_mod(m, (q - 1) / 2, q) == 1)
}

/// Smallest square root of `m` modulo the odd prime `q`, via Tonelli-Shanks.
pub fn sqrt_mod(m: u64, q: u64) -> Result<u64> {
    require_odd_prime(q)?;
    let m = m % q;
    if m == 0 || !legendre_is_qr(m, q)? {
        return Err(Error::NoSquareRoot { m, q });
    }
    let root = tonelli_shanks(m, q);
    Ok(root.min(q - root))
}

fn tonelli_shanks(n: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let odd = (p - 1) >> s;
    if s == 1 {
        return pow_mod(n, (p + 1) / 4, p);
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("an odd prime has a non-residue");
    let mut m = s;
    let mut c = pow_mod(z, odd, p);
    let mut t = pow_mod(n, odd, p);
    let mut r = pow_mod(n, odd.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Inverse of `a` modulo `q` in `[1, q)`.
pub fn mod_inverse(a: u64, q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::NotInvertible { a, q });
    }
    let (mut old_r, mut r) = (a as i128 % q as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    Ok(old_s.rem_euclid(q as i128) as u64)
}
