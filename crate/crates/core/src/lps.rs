//! Lubotzky-Phillips-Sarnak graphs X^{p,q}.
//!
//! For primes p, q ≡ 1 (mod 4) the p + 1 solutions of
//! a0² + a1² + a2² + a3² = p with a0 > 0 odd and a1, a2, a3 even give the
//! generators
//!
//! ```text
//! [ a0 + i a1   a2 + i a3 ]
//! [-a2 + i a3   a0 - i a1 ]     with i² ≡ -1 (mod q).
//! ```
//!
//! When p is a square mod q the generators are rescaled to determinant 1
//! and the graph lives on PSL(2, q); otherwise on PGL(2, q).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cayley_graph, is_connected, Graph};
use crate::group::{GroupKind, ProjMatrix, ProjectiveGroup};
use crate::numtheory::{is_prime, legendre_is_qr, mod_inverse, sqrt_mod};
use crate::spectral::{spectral_report, SpectralReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FourSquares {
    pub a0: i64,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
}

/// The p + 1 representations of p with a0 > 0 odd and a1, a2, a3 even, in
/// lexicographic order.
pub fn four_square_solutions(p: u64) -> Result<Vec<FourSquares>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::NotOneModFour { value: p });
    }
    let bound = (p as f64).sqrt() as i64 + 1;
    let target = p as i64;
    let mut out = Vec::new();
    for a0 in (1..=bound).step_by(2) {
        for a1 in (-bound..=bound).filter(|x| x % 2 == 0) {
            for a2 in (-bound..=bound).filter(|x| x % 2 == 0) {
                for a3 in (-bound..=bound).filter(|x| x % 2 == 0) {
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == target {
                        out.push(FourSquares { a0, a1, a2, a3 });
                    }
                }
            }
        }
    }
    debug_assert_eq!(out.len() as u64, p + 1);
    Ok(out)
}

fn check_parameters(p: u64, q: u64) -> Result<()> {
    for v in [p, q] {
        if !is_prime(v) {
            return Err(Error::NotPrime(v));
        }
        if v % 4 != 1 {
            return Err(Error::NotOneModFour { value: v });
        }
    }
    if p == q {
        return Err(Error::LpsParameters(format!("p and q must differ (both are {p})")));
    }
    if (q * q) <= 4 * p {
        return Err(Error::LpsParameters(format!("q = {q} must exceed 2 sqrt(p) for p = {p}")));
    }
    if q > u32::MAX as u64 {
        return Err(Error::LpsParameters(format!("q = {q} is too large")));
    }
    Ok(())
}

/// The group X^{p,q} lives on: PSL when p is a quadratic residue mod q.
pub fn lps_branch(p: u64, q: u64) -> Result<GroupKind> {
    check_parameters(p, q)?;
    Ok(if legendre_is_qr(p, q)? { GroupKind::Psl } else { GroupKind::Pgl })
}

/// The raw generator matrices (entries mod q, before projective reduction),
/// in four-square order.
pub fn generator_matrices(p: u64, q: u64) -> Result<Vec<[i64; 4]>> {
    check_parameters(p, q)?;
    let i = sqrt_mod(q - 1, q)? as i64;
    let qi = q as i64;
    Ok(four_square_solutions(p)?
        .into_iter()
        .map(|s| {
            [s.a0 + i * s.a1, s.a2 + i * s.a3, -s.a2 + i * s.a3, s.a0 - i * s.a1]
                .map(|e| e.rem_euclid(qi))
        })
        .collect())
}

/// Generating set in the branch's own group.
pub fn generating_set(p: u64, q: u64) -> Result<Vec<ProjMatrix>> {
    generating_set_in(p, q, lps_branch(p, q)?)
}

/// Generating set as canonical elements of `kind`. PSL requires p to be a
/// quadratic residue mod q; the matrices are scaled by 1/sqrt(p) with the
/// smaller square root.
pub fn generating_set_in(p: u64, q: u64, kind: GroupKind) -> Result<Vec<ProjMatrix>> {
    let raw = generator_matrices(p, q)?;
    let scale = match kind {
        GroupKind::Pgl => 1,
        GroupKind::Psl => {
            if !legendre_is_qr(p, q)? {
                return Err(Error::NoSquareRoot { m: p, q });
            }
            mod_inverse(sqrt_mod(p, q)?, q)? as i64
        }
    };
    raw.into_iter()
        .map(|m| ProjMatrix::new(m.map(|e| e * scale), q as u32, kind))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpsMetadata {
    pub p: u64,
    pub q: u64,
    pub branch: GroupKind,
    pub vertices: usize,
    pub degree: usize,
    pub connected: bool,
}

#[derive(Clone, Debug)]
pub struct LpsGraph {
    pub graph: Graph,
    pub report: SpectralReport,
    pub metadata: LpsMetadata,
}

/// JSON sidecar written next to an exported edge list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpsSidecar {
    pub p: u64,
    pub q: u64,
    pub branch: GroupKind,
    pub vertices: usize,
    pub degree: usize,
    pub lambda: f64,
    pub lambda_nontrivial: f64,
    pub bound: f64,
    pub bound_weak: f64,
    pub bipartite: bool,
    pub connected: bool,
    pub is_ramanujan: bool,
}

impl LpsGraph {
    pub fn sidecar(&self) -> LpsSidecar {
        LpsSidecar {
            p: self.metadata.p,
            q: self.metadata.q,
            branch: self.metadata.branch,
            vertices: self.metadata.vertices,
            degree: self.metadata.degree,
            lambda: self.report.lambda,
            lambda_nontrivial: self.report.lambda_nontrivial,
            bound: self.report.bound,
            bound_weak: self.report.bound_weak,
            bipartite: self.report.bipartite,
            connected: self.metadata.connected,
            is_ramanujan: self.report.is_ramanujan,
        }
    }
}

/// Cayley graph X^{p,q} without the spectral check.
pub fn lps_graph(p: u64, q: u64) -> Result<(Graph, GroupKind)> {
    let kind = lps_branch(p, q)?;
    let group = ProjectiveGroup::new(q as u32, kind)?;
    let gens = generating_set_in(p, q, kind)?;
    Ok((cayley_graph(&group, &gens)?, kind))
}

/// Construct X^{p,q} and verify it.
pub fn build_lps(p: u64, q: u64) -> Result<LpsGraph> {
    let (graph, branch) = lps_graph(p, q)?;
    let degree = p as usize + 1;
    let report = spectral_report(&graph, degree)?;
    let metadata = LpsMetadata {
        p,
        q,
        branch,
        vertices: graph.num_vertices(),
        degree,
        connected: is_connected(&graph)?,
    };
    Ok(LpsGraph { graph, report, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn brute_force_count(p: i64) -> usize {
        let b = (p as f64).sqrt() as i64 + 1;
        let mut count = 0;
        for a0 in 1..=b {
            for a1 in -b..=b {
                for a2 in -b..=b {
                    for a3 in -b..=b {
                        let even = a1 % 2 == 0 && a2 % 2 == 0 && a3 % 2 == 0;
                        if even && a0 % 2 == 1 && a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn four_squares_of_five() {
        let sols = four_square_solutions(5).unwrap();
        let tuples: Vec<_> = sols.iter().map(|s| (s.a0, s.a1, s.a2, s.a3)).collect();
        assert_eq!(
            tuples,
            vec![(1, -2, 0, 0), (1, 0, -2, 0), (1, 0, 0, -2), (1, 0, 0, 2), (1, 0, 2, 0), (1, 2, 0, 0)]
        );
    }

    #[test]
    fn four_square_counts() {
        assert_eq!(four_square_solutions(13).unwrap().len(), 14);
        assert_eq!(four_square_solutions(29).unwrap().len(), 30);
        for p in (5..=101u64).filter(|&p| is_prime(p) && p % 4 == 1) {
            let sols = four_square_solutions(p).unwrap();
            assert_eq!(sols.len() as u64, p + 1);
            assert_eq!(sols.len(), brute_force_count(p as i64));
            assert!(sols.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(four_square_solutions(7), Err(Error::NotOneModFour { value: 7 }));
        assert_eq!(four_square_solutions(9), Err(Error::NotPrime(9)));
    }

    fn canon(entries: &[[i64; 4]], q: u32, kind: GroupKind) -> Vec<ProjMatrix> {
        let mut v: Vec<_> = entries.iter().map(|&e| ProjMatrix::new(e, q, kind).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn worked_example_generators() {
        let s = [[25, 0, 0, 6], [6, 0, 0, 25], [1, 2, 27, 1], [1, 27, 2, 1], [1, 24, 24, 1], [1, 5, 5, 1]];
        let mut pgl = generating_set_in(5, 29, GroupKind::Pgl).unwrap();
        pgl.sort();
        assert_eq!(pgl, canon(&s, 29, GroupKind::Pgl));

        let s_prime =
            [[26, 0, 0, 19], [19, 0, 0, 26], [8, 16, 13, 8], [8, 13, 16, 8], [8, 18, 18, 8], [8, 11, 11, 8]];
        let mut psl = generating_set(5, 29).unwrap();
        psl.sort();
        assert_eq!(psl, canon(&s_prime, 29, GroupKind::Psl));
        assert!(psl.iter().all(|m| m.determinant() == 1));
    }

    #[test]
    fn raw_matrices_match_printed_set() {
        let raw = generator_matrices(5, 29).unwrap();
        for m in [[25, 0, 0, 6], [6, 0, 0, 25], [1, 2, 27, 1], [1, 27, 2, 1], [1, 24, 24, 1], [1, 5, 5, 1]] {
            assert!(raw.contains(&m), "{m:?}");
        }
    }

    #[test]
    fn generating_sets_are_symmetric() {
        for (p, q) in [(5u64, 13u64), (5, 29), (13, 29), (5, 17), (17, 13)] {
            let Ok(gens) = generating_set(p, q) else { continue };
            assert_eq!(gens.len() as u64, p + 1);
            for g in &gens {
                assert!(gens.contains(&g.inverse()), "({p},{q}) {g}");
            }
        }
    }

    #[test]
    fn branch_selection() {
        assert_eq!(lps_branch(5, 29).unwrap(), GroupKind::Psl);
        assert_eq!(lps_branch(5, 13).unwrap(), GroupKind::Pgl);
        assert_eq!(lps_branch(13, 29).unwrap(), GroupKind::Psl);
        assert_eq!(lps_branch(4, 29), Err(Error::NotPrime(4)));
        assert_eq!(lps_branch(5, 7), Err(Error::NotOneModFour { value: 7 }));
        assert!(matches!(lps_branch(5, 5), Err(Error::LpsParameters(_))));
        assert!(matches!(lps_branch(29, 5), Err(Error::LpsParameters(_))));
        assert!(generating_set_in(5, 13, GroupKind::Psl).is_err());
    }

    #[test]
    fn small_lps_graph() {
        let built = build_lps(5, 13).unwrap();
        assert_eq!(built.metadata.branch, GroupKind::Pgl);
        assert_eq!(built.metadata.vertices, 2184);
        assert_eq!(built.graph.regular_degree(), Some(6));
        assert!(built.metadata.connected);
        assert!(built.graph.is_symmetric());
        assert!(built.report.bipartite);
        assert!(built.report.is_ramanujan, "{:?}", built.report);
        // vertex order is the group enumeration order
        let group = ProjectiveGroup::new(13, GroupKind::Pgl).unwrap();
        let gens = generating_set(5, 13).unwrap();
        let g0 = &group.elements()[0];
        let mut expected: Vec<usize> =
            gens.iter().map(|s| group.index_of(&g0.mul(s)).unwrap()).collect();
        expected.sort();
        assert_eq!(built.graph.neighbors(0), expected.as_slice());
    }
}
