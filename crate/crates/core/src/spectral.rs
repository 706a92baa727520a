//! Adjacency spectra of regular graphs and the Ramanujan test.
//!
//! Small graphs get a dense symmetric eigendecomposition. Larger graphs use
//! Lanczos with full reorthogonalization on the complement of the trivial
//! eigenvectors: the all-ones vector (eigenvalue `k`) and, for bipartite
//! graphs, the ±1 bipartition vector (eigenvalue `-k`). Cayley graphs of
//! PSL/PGL have few distinct eigenvalues, so the Krylov space usually
//! exhausts before the iteration cap and the Ritz values are exact.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EIGEN_TOLERANCE: f64 = 1e-8;
pub const RAMANUJAN_TOLERANCE: f64 = 1e-6;
/// Largest graph that gets a dense eigendecomposition by default.
pub const DENSE_LIMIT: usize = 2000;
const LANCZOS_MAX_ITERATIONS: usize = 1500;
const LANCZOS_SEED: u64 = 0x5eed_1a2c;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMethod {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub k: usize,
    /// Largest adjacency eigenvalue.
    pub lambda1: f64,
    /// Largest |eigenvalue| once one copy of the top eigenvalue is removed.
    /// For a bipartite graph this is `k`, from the eigenvalue `-k`.
    pub lambda: f64,
    /// Largest |eigenvalue| after also removing `-k` for bipartite graphs.
    pub lambda_nontrivial: f64,
    /// 2 sqrt(k - 1).
    pub bound: f64,
    /// 2 sqrt(k), the weaker bound some LPS statements quote.
    pub bound_weak: f64,
    pub bipartite: bool,
    /// `lambda_nontrivial <= bound + RAMANUJAN_TOLERANCE`.
    pub is_ramanujan: bool,
    pub method: SpectralMethod,
    pub iterations: usize,
}

/// Ramanujan test with the method picked by size.
pub fn spectral_report(graph: &Graph, k: usize) -> Result<SpectralReport> {
    let method = if graph.num_vertices() <= DENSE_LIMIT {
        SpectralMethod::Dense
    } else {
        SpectralMethod::Lanczos
    };
    spectral_report_with(graph, k, method)
}

pub fn spectral_report_with(graph: &Graph, k: usize, method: SpectralMethod) -> Result<SpectralReport> {
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if graph.regular_degree() != Some(k) {
        return Err(Error::NotRegular(k));
    }
    let coloring = graph.bipartition();
    let bipartite = coloring.is_some() && k > 0;
    let (lambda1, lambda, lambda_nontrivial, iterations) = match method {
        SpectralMethod::Dense => {
            let mut eig = dense_eigenvalues(graph);
            let top = eig.pop().expect("nonempty");
            let lambda = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
            if bipartite && !eig.is_empty() {
                eig.remove(0);
            }
            let nontrivial = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
            (top, lambda, nontrivial, 0)
        }
        SpectralMethod::Lanczos => {
            let mut trivial = vec![vec![1.0 / (n as f64).sqrt(); n]];
            if let (true, Some(colors)) = (bipartite, coloring.as_ref()) {
                let s = 1.0 / (n as f64).sqrt();
                trivial.push(colors.iter().map(|&c| if c { -s } else { s }).collect());
            }
            let result = lanczos_extremes(graph, &trivial, LANCZOS_MAX_ITERATIONS, EIGEN_TOLERANCE * 0.1);
            let nontrivial = result.min.abs().max(result.max.abs());
            // A k-regular graph has spectral radius k with the all-ones eigenvector.
            let lambda = if bipartite { k as f64 } else { nontrivial };
            (k as f64, lambda, nontrivial, result.iterations)
        }
    };
    let bound = 2.0 * ((k as f64) - 1.0).max(0.0).sqrt();
    Ok(SpectralReport {
        k,
        lambda1,
        lambda,
        lambda_nontrivial,
        bound,
        bound_weak: 2.0 * (k as f64).sqrt(),
        bipartite,
        is_ramanujan: lambda_nontrivial <= bound + RAMANUJAN_TOLERANCE,
        method,
        iterations,
    })
}

pub fn adjacency_matrix(graph: &Graph) -> DMatrix<f64> {
    let n = graph.num_vertices();
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for &v in graph.neighbors(u) {
            a[(u, v)] += 1.0;
        }
    }
    a
}

/// All adjacency eigenvalues, ascending.
pub fn dense_eigenvalues(graph: &Graph) -> Vec<f64> {
    let eig = SymmetricEigen::new(adjacency_matrix(graph));
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

fn matvec(graph: &Graph, x: &[f64], y: &mut [f64]) {
    for (u, out) in y.iter_mut().enumerate() {
        *out = graph.neighbors(u).iter().map(|&v| x[v]).sum();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(-c, b, v);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LanczosExtremes {
    pub min: f64,
    pub max: f64,
    pub iterations: usize,
    /// Residual bounds |beta_m s_m| for the two Ritz values.
    pub residual: f64,
}

/// Smallest and largest eigenvalue of the adjacency operator restricted to
/// the orthogonal complement of the orthonormal vectors `deflate`.
pub fn lanczos_extremes(graph: &Graph, deflate: &[Vec<f64>], max_iter: usize, tol: f64) -> LanczosExtremes {
    let n = graph.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    orthogonalize(&mut v, deflate);
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = deflate.to_vec();
    let first_krylov = basis.len();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let cap = max_iter.min(n.saturating_sub(deflate.len())).max(1);
    let mut result = LanczosExtremes { min: 0.0, max: 0.0, iterations: 0, residual: f64::INFINITY };

    for j in 0..cap {
        matvec(graph, &v, &mut w);
        let a = dot(&w, &v);
        alpha.push(a);
        axpy(-a, &v, &mut w);
        if let Some(prev) = basis.last().filter(|_| j > 0) {
            let b = *beta.last().unwrap();
            axpy(-b, prev, &mut w);
        }
        basis.push(std::mem::take(&mut v));
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();

        let exhausted = b < 1e-10;
        if exhausted || (j + 1) % 10 == 0 || j + 1 == cap {
            let (lo, hi) = tridiagonal_extremes(&alpha, &beta);
            let r_lo = b * last_component(&alpha, &beta, lo).abs();
            let r_hi = b * last_component(&alpha, &beta, hi).abs();
            result = LanczosExtremes { min: lo, max: hi, iterations: j + 1, residual: r_lo.max(r_hi) };
            if exhausted || result.residual < tol {
                break;
            }
        }
        beta.push(b);
        v = w.iter().map(|x| x / b).collect();
    }
    debug_assert!(basis.len() > first_krylov);
    result
}

/// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) below x.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in alpha.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] };
        d = a - x - if i == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = f64::EPSILON * (a.abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect(alpha: &[f64], beta: &[f64], index: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(alpha, beta, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest and largest eigenvalues of a symmetric tridiagonal matrix.
pub fn tridiagonal_extremes(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let m = alpha.len();
    let radius = (0..m)
        .map(|i| {
            let left = if i > 0 { beta[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < m { beta[i].abs() } else { 0.0 };
            alpha[i].abs() + left + right
        })
        .fold(0.0, f64::max)
        + 1.0;
    (bisect(alpha, beta, 0, -radius, radius), bisect(alpha, beta, m - 1, -radius, radius))
}

/// Last component of the unit eigenvector of the tridiagonal matrix for the
/// eigenvalue `theta`, by inverse iteration.
fn last_component(alpha: &[f64], beta: &[f64], theta: f64) -> f64 {
    let m = alpha.len();
    if m == 1 {
        return 1.0;
    }
    let shift = theta + 1e-10 * (theta.abs() + 1.0);
    let mut x = vec![1.0; m];
    for _ in 0..3 {
        x = solve_tridiagonal(alpha, beta, shift, &x);
        let norm = dot(&x, &x).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return 1.0;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x[m - 1]
}

/// Solve (T - shift I) x = rhs with partial pivoting.
fn solve_tridiagonal(alpha: &[f64], beta: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = alpha.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = alpha[i] - shift;
        if i + 1 < m {
            a[(i, i + 1)] = beta[i];
            a[(i + 1, i)] = beta[i];
        }
    }
    let b = nalgebra::DVector::from_column_slice(rhs);
    match a.lu().solve(&b) {
        Some(x) => x.iter().copied().collect(),
        None => rhs.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CyclicGroup;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < EIGEN_TOLERANCE, "{a} vs {b}");
    }

    #[test]
    fn six_cycle() {
        let r = spectral_report(&Graph::cycle(6), 2).unwrap();
        assert_close(r.lambda1, 2.0);
        assert_close(r.lambda, 2.0);
        assert_close(r.lambda_nontrivial, 1.0);
        assert_close(r.bound, 2.0);
        assert!(r.bipartite);
        assert!(r.is_ramanujan);
    }

    #[test]
    fn complete_graph() {
        let r = spectral_report(&Graph::complete(6), 5).unwrap();
        assert_close(r.lambda1, 5.0);
        assert_close(r.lambda, 1.0);
        assert_close(r.bound, 4.0);
        assert!(!r.bipartite);
        assert!(r.is_ramanujan);
    }

    #[test]
    fn cycle_spectrum_matches_cosines() {
        for n in 3..30 {
            let eig = dense_eigenvalues(&Graph::cycle(n));
            let mut expected: Vec<f64> =
                (0..n).map(|j| 2.0 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos()).collect();
            expected.sort_by(f64::total_cmp);
            for (a, b) in eig.iter().zip(&expected) {
                assert_close(*a, *b);
            }
        }
    }

    #[test]
    fn non_regular_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(spectral_report(&g, 2), Err(Error::NotRegular(2)));
        assert_eq!(spectral_report(&Graph::cycle(5), 3), Err(Error::NotRegular(3)));
    }

    fn circulant(n: u64, steps: &[i64]) -> Graph {
        let z = CyclicGroup::new(n).unwrap();
        let gens: Vec<u64> = steps.iter().flat_map(|&s| [z.element(s), z.element(-s)]).collect();
        crate::graph::cayley_graph(&z, &gens).unwrap()
    }

    #[test]
    fn lanczos_matches_dense_on_small_graphs() {
        let graphs = [
            (Graph::cycle(7), 2),
            (Graph::cycle(12), 2),
            (Graph::complete(9), 8),
            (circulant(31, &[1, 5, 11]), 6),
            (circulant(64, &[1, 3, 7]), 6),
            (circulant(200, &[1, 17, 42, 77]), 8),
            (circulant(150, &[2, 9, 31]), 6),
        ];
        for (g, k) in graphs {
            let dense = spectral_report_with(&g, k, SpectralMethod::Dense).unwrap();
            let iter = spectral_report_with(&g, k, SpectralMethod::Lanczos).unwrap();
            assert_close(dense.lambda, iter.lambda);
            assert_close(dense.lambda_nontrivial, iter.lambda_nontrivial);
            assert_eq!(dense.is_ramanujan, iter.is_ramanujan);
            assert_eq!(dense.bipartite, iter.bipartite);
        }
    }

    #[test]
    fn tridiagonal_bisection() {
        // path graph P_5 has eigenvalues 2 cos(j pi / 6)
        let alpha = [0.0; 5];
        let beta = [1.0; 4];
        let (lo, hi) = tridiagonal_extremes(&alpha, &beta);
        let expected = 2.0 * (std::f64::consts::PI / 6.0).cos();
        assert!((hi - expected).abs() < 1e-12);
        assert!((lo + expected).abs() < 1e-12);
    }
}
