//! Simple undirected graphs on dense vertex indices.

mod catalog;
mod io;
mod mad;
mod planar;

pub use catalog::{catalog, parse_name, CatalogError};
pub use io::{parse_graph_text, read_graph, write_graph_text, GraphReadError};
pub use mad::{mad, mad_brute_force, Mad};
pub use planar::{is_planar, KuratowskiKind, KuratowskiWitness, Planarity, RotationSystem};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} appears twice")]
    ParallelEdge(usize, usize),
    #[error("edge {0}-{1} has an endpoint outside 0..{2}")]
    OutOfRange(usize, usize, usize),
}

/// A finite simple graph. Edges are stored normalised as `(u, v)` with `u < v`
/// and sorted; adjacency lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;
    fn try_from(r: RawGraph) -> Result<Self, GraphError> {
        Graph::new(r.n, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Graph, GraphError> {
        let mut es = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        for w in es.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::ParallelEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &es {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: es, adj })
    }

    /// Builds a graph from edges known to be valid; panics otherwise.
    pub(crate) fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.iter().copied()).expect("valid edge list")
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let e = (u.min(v), u.max(v));
        Graph::from_edges(self.n, &self.edges.iter().copied().filter(|&x| x != e).collect::<Vec<_>>())
    }

    /// Induced subgraph on `verts` (in the given order); vertex `i` of the result is `verts[i]`.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let es: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        Graph::from_edges(verts.len(), &es)
    }

    /// True iff every edge of `sub` is an edge of `self` and `sub` has no extra vertices.
    pub fn contains_subgraph(&self, sub: &Graph) -> bool {
        sub.n <= self.n && sub.edges.iter().all(|&(u, v)| self.has_edge(u, v))
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// A spanning forest as a list of edge indices (BFS from each smallest unvisited vertex).
    pub fn spanning_forest(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        out.push(self.edge_index(u, w).unwrap());
                        q.push_back(w);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn average_degree(&self) -> BigRational {
        if self.n == 0 {
            return BigRational::from_integer(0.into());
        }
        BigRational::new((2 * self.m()).into(), self.n.into())
    }
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    q.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.map_or(true, |b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
    }
    best
}

/// Degeneracy together with the removal order (repeatedly delete a vertex of
/// minimum remaining degree, smallest index first).
pub fn degeneracy(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        d = d.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    (d, order)
}

/// Summary of the structural invariants of a graph.
#[derive(Clone, Debug)]
pub struct StructReport {
    pub girth: Option<usize>,
    pub degeneracy: usize,
    pub degeneracy_order: Vec<usize>,
    pub mad: Mad,
    pub planarity: Planarity,
}

pub fn struct_report(g: &Graph) -> StructReport {
    let (degeneracy, degeneracy_order) = degeneracy(g);
    StructReport {
        girth: girth(g),
        degeneracy,
        degeneracy_order,
        mad: mad(g).unwrap_or_else(|| Mad { value: BigRational::from_integer(0.into()), witness: vec![] }),
        planarity: is_planar(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::new(3, [(0, 1), (1, 0)]), Err(GraphError::ParallelEdge(0, 1)));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(GraphError::OutOfRange(..))));
    }

    #[test]
    fn girth_and_degeneracy_basics() {
        let k5 = catalog("K5", &[]).unwrap();
        assert_eq!(girth(&k5), Some(3));
        assert_eq!(degeneracy(&k5).0, 4);
        let c7 = catalog("C7", &[]).unwrap();
        assert_eq!(girth(&c7), Some(7));
        let p5 = catalog("P5", &[]).unwrap();
        assert_eq!(girth(&p5), None);
        assert_eq!(degeneracy(&p5).0, 1);
        let k33 = catalog("K3,3", &[]).unwrap();
        assert_eq!(girth(&k33), Some(4));
    }

    #[test]
    fn degeneracy_order_is_witness() {
        let g = catalog("W7", &[]).unwrap();
        let (d, order) = degeneracy(&g);
        let mut pos = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for v in 0..g.n() {
            let later = g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count();
            assert!(later <= d);
        }
        assert_eq!(d, 3);
    }
}
