//! Undirected multigraphs as sorted adjacency lists, plus the Cayley-graph
//! builder and a plain-text edge-list format.
//!
//! Edge-list format: a header line `n m`, then `m` lines `u v` with 0-based
//! vertex indices. Each undirected edge appears once with `u <= v`; repeated
//! lines are parallel edges.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Build from adjacency lists; lists are sorted and must be symmetric
    /// with multiplicity.
    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let n = adjacency.len();
        for list in &mut adjacency {
            if list.iter().any(|&v| v >= n) {
                return Err(Error::Parse("neighbor index out of range".into()));
            }
            list.sort_unstable();
        }
        let graph = Graph { adjacency };
        if !graph.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(graph)
    }

    /// Build from undirected edges; a loop `(v, v)` adds one entry to `v`'s list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parse(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            adjacency[u].push(v);
            if u != v {
                adjacency[v].push(u);
            }
        }
        Graph::from_adjacency(adjacency)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Graph { adjacency }
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == first).then_some(first)
    }

    /// `u in adj(v)` iff `v in adj(u)`, with equal multiplicity.
    pub fn is_symmetric(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(u, list)| {
            list.iter().all(|&v| {
                let forward = count(list, v);
                let back = count(&self.adjacency[v], u);
                forward == back
            })
        })
    }

    /// Undirected edges with `u <= v`, repeated per multiplicity.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u <= v {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    /// Two-coloring by BFS, or `None` if some component has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.num_vertices();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &self.adjacency[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.num_vertices(), edges.len());
        for (u, v) in edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::from_edges(n, &edges)
    }
}

fn count(list: &[usize], v: usize) -> usize {
    let lo = list.partition_point(|&x| x < v);
    let hi = list.partition_point(|&x| x <= v);
    hi - lo
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace().map(|t| {
        t.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {t:?}")))
    });
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
    }
}

/// BFS from vertex 0 reaches every vertex.
pub fn is_connected(graph: &Graph) -> Result<bool> {
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    Ok(reached == n)
}

/// Cayley graph of `group` with respect to `gens`: vertex `g` is joined to
/// `g s` for every `s` in `gens`. Vertices follow the group's enumeration.
pub fn cayley_graph<G: FiniteGroup>(group: &G, gens: &[G::Element]) -> Result<Graph> {
    for s in gens {
        if group.index_of(s).is_none() {
            return Err(Error::GeneratorNotInGroup);
        }
        if !gens.contains(&group.inverse(s)) {
            return Err(Error::NotSymmetric);
        }
    }
    let adjacency = group
        .elements()
        .iter()
        .map(|g| {
            let mut list: Vec<usize> = gens
                .iter()
                .map(|s| group.index_of(&group.multiply(g, s)).expect("group is closed"))
                .collect();
            list.sort_unstable();
            list
        })
        .collect();
    Ok(Graph { adjacency })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CyclicGroup;

    #[test]
    fn z6_cayley_graphs() {
        let z6 = CyclicGroup::new(6).unwrap();
        let ring = cayley_graph(&z6, &[z6.element(-1), 1]).unwrap();
        assert_eq!(ring, Graph::cycle(6));
        assert!(is_connected(&ring).unwrap());

        let triangles = cayley_graph(&z6, &[z6.element(-2), 2]).unwrap();
        assert_eq!(triangles.regular_degree(), Some(2));
        assert_eq!(triangles.neighbors(0), &[2, 4]);
        assert_eq!(triangles.neighbors(1), &[3, 5]);
        assert!(!is_connected(&triangles).unwrap());
    }

    #[test]
    fn cayley_rejects_bad_generators() {
        let z6 = CyclicGroup::new(6).unwrap();
        assert_eq!(cayley_graph(&z6, &[1]), Err(Error::NotSymmetric));
        assert_eq!(cayley_graph(&z6, &[7, 5]), Err(Error::GeneratorNotInGroup));
    }

    #[test]
    fn involutions_give_single_edges() {
        let z4 = CyclicGroup::new(4).unwrap();
        let g = cayley_graph(&z4, &[2]).unwrap();
        assert_eq!(g.edges(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn bipartition_detection() {
        assert!(Graph::cycle(6).bipartition().is_some());
        assert!(Graph::cycle(5).bipartition().is_none());
        assert!(Graph::complete(4).bipartition().is_none());
    }

    #[test]
    fn edge_list_round_trip_with_multi_edges() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 2)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "3 4\n0 1\n0 1\n1 2\n2 2\n");
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn malformed_edge_lists() {
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("2 1\n0 5\n").is_err());
        assert!(Graph::parse_edge_list("2 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("2 1\n0 x\n").is_err());
    }

    #[test]
    fn asymmetric_adjacency_rejected() {
        assert_eq!(Graph::from_adjacency(vec![vec![1], vec![]]), Err(Error::NotSymmetric));
        assert_eq!(Graph::from_adjacency(vec![vec![1, 1], vec![0]]), Err(Error::NotSymmetric));
    }

    #[test]
    fn empty_graph_connectivity_is_an_error() {
        let g = Graph::from_adjacency(vec![]).unwrap();
        assert_eq!(is_connected(&g), Err(Error::EmptyGraph));
    }
}
