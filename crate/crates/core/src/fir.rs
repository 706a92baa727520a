//! Ramanujan subspaces and the Ramanujan FIR representation.
//!
//! S_q is the column space of the circulant matrix B_q with entries
//! `c_q((j - k) mod q)`; it has dimension φ(q) and its first φ(q) columns
//! form a basis. An N-periodic signal splits uniquely as a sum of
//! components x_q ∈ S_q over the divisors q of N. The decomposition solves
//! the N × N system whose column blocks are those bases, periodically
//! extended to length N.

use std::str::FromStr;

use nalgebra::{Complex, DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{divisors, totient};
use crate::sums::ramanujan_sum;

/// Signals at most this long are decomposed in exact rational arithmetic.
pub const EXACT_LIMIT: usize = 144;

/// One period of an N-periodic sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    samples: Vec<Complex<f64>>,
}

impl Signal {
    pub fn new(samples: Vec<Complex<f64>>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ZeroArgument("signal length"));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::Parse("signal samples must be finite".into()));
        }
        Ok(Signal { samples })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Signal::new(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex<f64>] {
        &self.samples
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|s| s.im == 0.0)
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Smallest p dividing N with x(n + p) = x(n) for all n, comparing
    /// samples to within `tolerance`.
    pub fn minimal_period(&self, tolerance: f64) -> usize {
        minimal_period(&self.samples, tolerance)
    }
}

pub fn minimal_period(samples: &[Complex<f64>], tolerance: f64) -> usize {
    let n = samples.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (0..n).all(|i| (samples[i] - samples[(i + p) % n]).norm() <= tolerance))
        .unwrap_or(n)
}

/// Plain text or CSV: one sample per line, either `re` or `re,im`
/// (whitespace also separates). Blank lines and `#` comments are skipped,
/// and a non-numeric first line is taken as a CSV header.
impl FromStr for Signal {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        let mut seen_line = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> =
                line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            let first = !seen_line;
            seen_line = true;
            match parsed {
                Ok(v) if v.len() == 1 => samples.push(Complex::new(v[0], 0.0)),
                Ok(v) if v.len() == 2 => samples.push(Complex::new(v[0], v[1])),
                Ok(v) => {
                    return Err(Error::Parse(format!("line {}: expected 1 or 2 values, found {}", i + 1, v.len())))
                }
                Err(_) if first => continue,
                Err(_) => return Err(Error::Parse(format!("line {}: cannot parse `{line}`", i + 1))),
            }
        }
        Signal::new(samples)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamanujanBasis {
    pub q: u64,
    /// B_q, row-major: entry (j, k) = c_q((j - k) mod q).
    pub matrix: Vec<Vec<i64>>,
    /// Rank of B_q by exact elimination.
    pub rank: usize,
}

impl RamanujanBasis {
    pub fn dimension(&self) -> usize {
        totient(self.q).unwrap() as usize
    }

    /// The first φ(q) columns.
    pub fn basis_columns(&self) -> Vec<Vec<i64>> {
        (0..self.dimension()).map(|k| self.matrix.iter().map(|row| row[k]).collect()).collect()
    }
}

pub fn ramanujan_basis(q: u64) -> Result<RamanujanBasis> {
    if q == 0 {
        return Err(Error::ZeroArgument("q"));
    }
    let row: Vec<i64> = (0..q as i64).map(|n| ramanujan_sum(q, n)).collect::<Result<_>>()?;
    let qi = q as i64;
    let matrix: Vec<Vec<i64>> =
        (0..qi).map(|j| (0..qi).map(|k| row[(j - k).rem_euclid(qi) as usize]).collect()).collect();
    let rank = integer_rank(&matrix);
    Ok(RamanujanBasis { q, matrix, rank })
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            for c in col + 1..cols {
                m[r][c] = (&m[r][c] * &m[rank][col] - &m[r][col] * &m[rank][c]) / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirComponent {
    pub q: u64,
    pub samples: Vec<Complex<f64>>,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirDecomposition {
    pub n: usize,
    pub mode: SolveMode,
    /// One component per divisor of N, in increasing q.
    pub components: Vec<FirComponent>,
    /// Max-norm of (Σ x_q) - x.
    pub residual_norm: f64,
}

impl FirDecomposition {
    pub fn component(&self, q: u64) -> Option<&FirComponent> {
        self.components.iter().find(|c| c.q == q)
    }

    pub fn total_energy(&self) -> f64 {
        self.components.iter().map(|c| c.energy).sum()
    }
}

/// Column layout of the dictionary: (q, shift j) for each divisor q of N
/// and 0 ≤ j < φ(q). Entry (n, column) is c_q((n - j) mod q).
fn dictionary_layout(n: usize) -> Result<Vec<(u64, u64)>> {
    let mut layout = Vec::with_capacity(n);
    for q in divisors(n as u64)? {
        for j in 0..totient(q)? {
            layout.push((q, j));
        }
    }
    debug_assert_eq!(layout.len(), n);
    Ok(layout)
}

fn dictionary(n: usize, layout: &[(u64, u64)]) -> Result<Vec<Vec<i64>>> {
    let mut rows = vec![vec![0i64; n]; n];
    for (col, &(q, j)) in layout.iter().enumerate() {
        let table: Vec<i64> = (0..q as i64).map(|m| ramanujan_sum(q, m)).collect::<Result<_>>()?;
        for (row, r) in rows.iter_mut().enumerate() {
            r[col] = table[(row as i64 - j as i64).rem_euclid(q as i64) as usize];
        }
    }
    Ok(rows)
}

pub fn fir_decompose(x: &Signal) -> Result<FirDecomposition> {
    let mode = if x.len() <= EXACT_LIMIT { SolveMode::Exact } else { SolveMode::Float };
    fir_decompose_with(x, mode)
}

pub fn fir_decompose_with(x: &Signal, mode: SolveMode) -> Result<FirDecomposition> {
    let n = x.len();
    let layout = dictionary_layout(n)?;
    let d = dictionary(n, &layout)?;
    let parts: [Vec<f64>; 2] = [
        x.samples.iter().map(|s| s.re).collect(),
        x.samples.iter().map(|s| s.im).collect(),
    ];
    let divs = divisors(n as u64)?;
    let mut re_im: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut residual_norm: f64 = 0.0;
    for part in &parts {
        let (blocks, residual) = if part.iter().all(|v| *v == 0.0) {
            (vec![vec![0.0; n]; divs.len()], 0.0)
        } else {
            match mode {
                SolveMode::Exact => solve_exact(&d, &layout, part)?,
                SolveMode::Float => solve_float(&d, &layout, part)?,
            }
        };
        residual_norm = residual_norm.max(residual);
        re_im.push(blocks);
    }
    let components = divs
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let samples: Vec<Complex<f64>> =
                re_im[0][i].iter().zip(&re_im[1][i]).map(|(&re, &im)| Complex::new(re, im)).collect();
            let energy = samples.iter().map(|s| s.norm_sqr()).sum();
            FirComponent { q, samples, energy }
        })
        .collect();
    Ok(FirDecomposition { n, mode, components, residual_norm })
}

/// Block component samples from dictionary coefficients.
fn components_from<T: Clone + Zero + std::ops::AddAssign + std::ops::Mul<Output = T>>(
    d: &[Vec<i64>],
    layout: &[(u64, u64)],
    coeffs: &[T],
    lift: impl Fn(i64) -> T,
) -> Vec<Vec<T>> {
    let n = d.len();
    let mut blocks: Vec<Vec<T>> = Vec::new();
    let mut last = None;
    for (col, &(q, _)) in layout.iter().enumerate() {
        if last != Some(q) {
            blocks.push(vec![T::zero(); n]);
            last = Some(q);
        }
        let block = blocks.last_mut().unwrap();
        for (row, slot) in block.iter_mut().enumerate() {
            if d[row][col] != 0 {
                *slot += coeffs[col].clone() * lift(d[row][col]);
            }
        }
    }
    blocks
}

fn solve_exact(d: &[Vec<i64>], layout: &[(u64, u64)], rhs: &[f64]) -> Result<(Vec<Vec<f64>>, f64)> {
    let n = d.len();
    let target: Vec<BigRational> = rhs
        .iter()
        .map(|&v| BigRational::from_float(v).ok_or_else(|| Error::Parse(format!("sample {v} is not finite"))))
        .collect::<Result<_>>()?;
    // common denominator turns the right-hand side into integers
    let denom = target.iter().fold(BigInt::from(1), |acc, r| num_integer::lcm(acc, r.denom().clone()));
    let mut m: Vec<Vec<BigInt>> = d
        .iter()
        .zip(&target)
        .map(|(row, t)| {
            let mut r: Vec<BigInt> = row.iter().map(|&v| BigInt::from(v)).collect();
            r.push(t.numer() * (&denom / t.denom()));
            r
        })
        .collect();
    // Bareiss forward elimination on [D | b]
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::Internal(format!("Ramanujan dictionary of size {n} is singular")))?;
        m.swap(k, pivot);
        for r in k + 1..n {
            for c in k + 1..=n {
                m[r][c] = (&m[r][c] * &m[k][k] - &m[r][k] * &m[k][c]) / &prev;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= &coeffs[j] * BigRational::from_integer(m[i][j].clone());
        }
        coeffs[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    let scale = BigRational::from_integer(denom);
    let coeffs: Vec<BigRational> = coeffs.into_iter().map(|c| c / &scale).collect();
    let blocks = components_from(d, layout, &coeffs, |v| BigRational::from_integer(BigInt::from(v)));
    let mut residual = BigRational::zero();
    for (row, t) in target.iter().enumerate() {
        let sum = blocks.iter().fold(BigRational::zero(), |acc, b| acc + &b[row]);
        let diff = (sum - t).abs();
        if diff > residual {
            residual = diff;
        }
    }
    let as_f64 = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    let blocks = blocks.iter().map(|b| b.iter().map(as_f64).collect()).collect();
    Ok((blocks, as_f64(&residual)))
}

fn solve_float(d: &[Vec<i64>], layout: &[(u64, u64)], rhs: &[f64]) -> Result<(Vec<Vec<f64>>, f64)> {
    let n = d.len();
    let a = DMatrix::from_fn(n, n, |r, c| d[r][c] as f64);
    let b = DVector::from_column_slice(rhs);
    let coeffs = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Internal(format!("Ramanujan dictionary of size {n} is singular")))?;
    let coeffs: Vec<f64> = coeffs.iter().copied().collect();
    let blocks = components_from(d, layout, &coeffs, |v| v as f64);
    let residual = (0..n)
        .map(|row| (blocks.iter().map(|b| b[row]).sum::<f64>() - rhs[row]).abs())
        .fold(0.0, f64::max);
    Ok((blocks, residual))
}

/// Divisors of N ranked by the energy of their component, largest first
/// (ties by increasing q), with energy as a fraction of the signal's.
pub fn estimate_periods(x: &Signal, top_k: usize) -> Result<Vec<(u64, f64)>> {
    if top_k == 0 {
        return Err(Error::ZeroArgument("top_k"));
    }
    let decomposition = fir_decompose(x)?;
    let total = x.energy();
    let mut ranked: Vec<(u64, f64)> = decomposition
        .components
        .iter()
        .map(|c| (c.q, if total > 0.0 { c.energy / total } else { 0.0 }))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(top_k);
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c_signal(q: u64, n: usize) -> Vec<f64> {
        (0..n as i64).map(|m| ramanujan_sum(q, m).unwrap() as f64).collect()
    }

    /// Orthogonal projection onto S_q inside C^N: x_q(n) = (1/N) Σ_m x(m) c_q(n - m).
    fn projection(x: &[f64], q: u64) -> Vec<f64> {
        let n = x.len() as i64;
        (0..n)
            .map(|i| (0..n).map(|m| x[m as usize] * ramanujan_sum(q, i - m).unwrap() as f64).sum::<f64>() / n as f64)
            .collect()
    }

    #[test]
    fn basis_for_six() {
        let b = ramanujan_basis(6).unwrap();
        assert_eq!(b.matrix[0], vec![2, 1, -1, -2, -1, 1]);
        assert_eq!(b.matrix[1], vec![1, 2, 1, -1, -2, -1]);
        assert_eq!(b.matrix[5], vec![1, -1, -2, -1, 1, 2]);
        assert_eq!(b.rank, 2);
        assert_eq!(b.basis_columns(), vec![vec![2, 1, -1, -2, -1, 1], vec![1, 2, 1, -1, -2, -1]]);
        let one = ramanujan_basis(1).unwrap();
        assert_eq!((one.matrix.clone(), one.rank), (vec![vec![1]], 1));
    }

    #[test]
    fn basis_is_symmetric_circulant_with_rank_phi() {
        for q in 1..=50u64 {
            let b = ramanujan_basis(q).unwrap();
            let n = q as usize;
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(b.matrix[j][k], b.matrix[k][j]);
                    assert_eq!(b.matrix[j][k], b.matrix[(j + 1) % n][(k + 1) % n]);
                }
            }
            assert_eq!(b.rank as u64, totient(q).unwrap(), "q={q}");
        }
    }

    #[test]
    fn c6_lies_in_s6() {
        let x = Signal::from_real(&c_signal(6, 12)).unwrap();
        let d = fir_decompose(&x).unwrap();
        assert_eq!(d.mode, SolveMode::Exact);
        assert_eq!(d.residual_norm, 0.0);
        for c in &d.components {
            let expected = if c.q == 6 { x.samples().to_vec() } else { vec![Complex::new(0.0, 0.0); 12] };
            assert_eq!(c.samples, expected, "q={}", c.q);
        }
        assert_eq!(estimate_periods(&x, 1).unwrap(), vec![(6, 1.0)]);
    }

    #[test]
    fn constant_is_all_period_one() {
        let x = Signal::from_real(&[5.0; 12]).unwrap();
        let d = fir_decompose(&x).unwrap();
        assert_eq!(d.component(1).unwrap().samples, x.samples());
        assert!(d.components.iter().filter(|c| c.q != 1).all(|c| c.energy == 0.0));
    }

    #[test]
    fn sum_of_c3_and_c7() {
        let v: Vec<f64> = c_signal(3, 21).iter().zip(c_signal(7, 21)).map(|(a, b)| a + b).collect();
        let x = Signal::from_real(&v).unwrap();
        let d = fir_decompose(&x).unwrap();
        let nonzero: Vec<u64> = d.components.iter().filter(|c| c.energy > 0.0).map(|c| c.q).collect();
        assert_eq!(nonzero, vec![3, 7]);
        assert_eq!(x.minimal_period(0.0), 21);
        let periods = estimate_periods(&x, 2).unwrap();
        assert_eq!(periods, vec![(7, 0.75), (3, 0.25)]);
    }

    #[test]
    fn noisy_c3_plus_c7() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v: Vec<f64> = c_signal(3, 21)
            .iter()
            .zip(c_signal(7, 21))
            .map(|(a, b)| a + b + rng.gen_range(-1e-6..1e-6))
            .collect();
        let periods = estimate_periods(&Signal::from_real(&v).unwrap(), 3).unwrap();
        let mut top: Vec<u64> = periods[..2].iter().map(|p| p.0).collect();
        top.sort();
        assert_eq!(top, vec![3, 7]);
        assert!(periods[0].1 + periods[1].1 >= 0.98);
        assert!(periods.iter().map(|p| p.1).sum::<f64>() <= 1.0 + 1e-12);
    }

    #[test]
    fn zero_signal_ranks_by_q() {
        let x = Signal::from_real(&[0.0; 12]).unwrap();
        let periods = estimate_periods(&x, 6).unwrap();
        assert_eq!(periods, vec![(1, 0.0), (2, 0.0), (3, 0.0), (4, 0.0), (6, 0.0), (12, 0.0)]);
        assert!(estimate_periods(&x, 0).is_err());
    }

    #[test]
    fn exact_reconstruction_and_projection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=36usize {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-20..=20) as f64 / 4.0).collect();
            let x = Signal::from_real(&v).unwrap();
            let d = fir_decompose(&x).unwrap();
            assert_eq!(d.residual_norm, 0.0, "N={n}");
            for c in &d.components {
                let oracle = projection(&v, c.q);
                for (got, want) in c.samples.iter().zip(&oracle) {
                    assert!((got.re - want).abs() < 1e-9, "N={n} q={}", c.q);
                }
                // each component repeats with period q
                assert!(c.samples.iter().enumerate().all(|(i, s)| *s == c.samples[i % c.q as usize]));
            }
        }
    }

    #[test]
    fn float_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = Signal::from_real(&v).unwrap();
        let exact = fir_decompose_with(&x, SolveMode::Exact).unwrap();
        let float = fir_decompose_with(&x, SolveMode::Float).unwrap();
        assert!(float.residual_norm < 1e-9);
        for (a, b) in exact.components.iter().zip(&float.components) {
            for (s, t) in a.samples.iter().zip(&b.samples) {
                assert!((s - t).norm() < 1e-9);
            }
        }
        let long: Vec<f64> = (0..180).map(|i| ((i % 12) as f64).sin()).collect();
        let d = fir_decompose(&Signal::from_real(&long).unwrap()).unwrap();
        assert_eq!(d.mode, SolveMode::Float);
        assert!(d.residual_norm < 1e-9);
        assert!(d.components.iter().filter(|c| 12 % c.q != 0).all(|c| c.energy < 1e-15));
    }

    #[test]
    fn complex_samples() {
        let v: Vec<Complex<f64>> =
            c_signal(4, 8).iter().zip(c_signal(8, 8)).map(|(&a, b)| Complex::new(a, 2.0 * b)).collect();
        let d = fir_decompose(&Signal::new(v).unwrap()).unwrap();
        let c4 = d.component(4).unwrap();
        let c8 = d.component(8).unwrap();
        assert!(c4.samples.iter().all(|s| s.im == 0.0));
        assert!(c8.samples.iter().all(|s| s.re == 0.0));
    }

    #[test]
    fn lcm_sums_have_full_period() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let qs = [2u64, 3, 4, 5, 6, 7, 8, 9, 10, 12];
        for _ in 0..20 {
            let q1 = qs[rng.gen_range(0..qs.len())];
            let q2 = loop {
                let q = qs[rng.gen_range(0..qs.len())];
                if q != q1 {
                    break q;
                }
            };
            let n = crate::numtheory::lcm(q1, q2) as usize;
            let mut x = vec![0.0; n];
            for q in [q1, q2] {
                let b = ramanujan_basis(q).unwrap();
                let coeffs: Vec<i64> = loop {
                    let c: Vec<i64> = (0..b.dimension()).map(|_| rng.gen_range(-3..=3)).collect();
                    if c.iter().any(|&v| v != 0) {
                        break c;
                    }
                };
                for (i, slot) in x.iter_mut().enumerate() {
                    let row = &b.matrix[i % q as usize];
                    *slot += coeffs.iter().enumerate().map(|(k, c)| (c * row[k]) as f64).sum::<f64>();
                }
            }
            let signal = Signal::from_real(&x).unwrap();
            assert_eq!(signal.minimal_period(0.0), n, "q1={q1} q2={q2}");
        }
    }

    #[test]
    fn parsing() {
        let s: Signal = "value\n1\n2.5\n\n# comment\n-3".parse().unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.is_real());
        let c: Signal = "1,2\n3 4".parse().unwrap();
        assert_eq!(c.samples()[1], Complex::new(3.0, 4.0));
        assert!("1\nx".parse::<Signal>().is_err());
        assert!("1,2,3".parse::<Signal>().is_err());
        assert!("".parse::<Signal>().is_err());
        assert!("nan".parse::<Signal>().is_err());
    }
}
