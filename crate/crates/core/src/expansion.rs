//! Exact isoperimetric (expansion) constant by exhaustive subset search.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EXHAUSTIVE_LIMIT: usize = 24;

/// h(X) = min over nonempty proper F of |∂F| / min(|F|, |V - F|), counting
/// parallel edges with multiplicity.
///
/// Walks all subsets in Gray-code order so each step toggles one vertex and
/// updates the boundary count in O(degree).
pub fn expansion_constant(graph: &Graph) -> Result<Ratio<u64>> {
    let n = graph.num_vertices();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooManyVertices { n, limit: EXHAUSTIVE_LIMIT });
    }
    if n < 2 {
        return Err(Error::EmptyGraph);
    }
    let loops: Vec<i64> = (0..n)
        .map(|v| graph.neighbors(v).iter().filter(|&&u| u == v).count() as i64)
        .collect();
    let mut inside = vec![false; n];
    let mut size = 0usize;
    let mut boundary = 0i64;
    let mut best: Option<(u64, u64)> = None;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let neighbors_inside = graph
            .neighbors(v)
            .iter()
            .filter(|&&u| u != v && inside[u])
            .count() as i64;
        let crossing = graph.degree(v) as i64 - loops[v] - 2 * neighbors_inside;
        if inside[v] {
            boundary -= crossing;
            size -= 1;
        } else {
            boundary += crossing;
            size += 1;
        }
        inside[v] = !inside[v];
        if size == 0 || size == n {
            continue;
        }
        let num = boundary as u64;
        let den = size.min(n - size) as u64;
        if best.is_none_or(|(bn, bd)| num * bd < bn * den) {
            best = Some((num, den));
        }
    }
    let (num, den) = best.expect("n >= 2 has a proper subset");
    Ok(Ratio::new(num, den))
}
