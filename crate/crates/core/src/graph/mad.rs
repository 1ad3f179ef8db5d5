//! Maximum average degree, computed exactly.
//!
//! Dinkelbach iteration on the edge density `|E(S)|/|V(S)|`: for a current
//! density `p/q` we maximise `q|E(S)| - p|V(S)|`, which is a maximum-closure
//! problem on the edge/vertex incidence network and is solved with a min cut.

use super::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct Mad {
    pub value: BigRational,
    /// Vertex set of a densest subgraph (sorted).
    pub witness: Vec<usize>,
}

/// `None` for the graph without vertices.
pub fn mad(g: &Graph) -> Option<Mad> {
    if g.n() == 0 {
        return None;
    }
    let mut best: Vec<usize> = (0..g.n()).collect();
    let (mut p, mut q) = (g.m() as i64, g.n() as i64);
    loop {
        let s = max_closure(g, p, q);
        let e = induced_edges(g, &s) as i64;
        let v = s.len() as i64;
        if s.is_empty() || q * e - p * v <= 0 {
            break;
        }
        best = s;
        p = e;
        q = v;
    }
    let e = induced_edges(g, &best);
    Some(Mad {
        value: BigRational::new(BigInt::from(2 * e), BigInt::from(best.len())),
        witness: best,
    })
}

fn induced_edges(g: &Graph, s: &[usize]) -> usize {
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v] = true;
    }
    g.edges().iter().filter(|&&(u, v)| inside[u] && inside[v]).count()
}

/// Vertex set maximising `q|E(S)| - p|V(S)|` (source side of a min cut).
fn max_closure(g: &Graph, p: i64, q: i64) -> Vec<usize> {
    let m = g.m();
    let n = g.n();
    let src = m + n;
    let sink = src + 1;
    let inf = q * (m as i64 + 1) + 1;
    let mut net = Dinic::new(n + m + 2);
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        net.add(src, i, q);
        net.add(i, m + u, inf);
        net.add(i, m + v, inf);
    }
    for v in 0..n {
        net.add(m + v, sink, p);
    }
    net.max_flow(src, sink);
    let side = net.source_side(src);
    (0..n).filter(|&v| side[m + v]).collect()
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), level: vec![0; n], iter: vec![0; n] }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.head[u] {
                let w = self.to[e];
                if self.cap[e] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[u] + 1;
                    q.push_back(w);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] < self.head[u].len() {
            let e = self.head[u][self.iter[u]];
            let w = self.to[e];
            if self.cap[e] > 0 && self.level[w] == self.level[u] + 1 {
                let d = self.dfs(w, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    fn source_side(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

/// Exhaustive maximum average degree over all vertex subsets (n ≤ 20).
pub fn mad_brute_force(g: &Graph) -> BigRational {
    assert!(g.n() <= 20, "brute force limited to 20 vertices");
    let n = g.n();
    let mut best = BigRational::from_integer(0.into());
    for mask in 1u32..(1 << n) {
        let e = g
            .edges()
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count();
        let r = BigRational::new(BigInt::from(2 * e), BigInt::from(mask.count_ones()));
        if r > best {
            best = r;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn known_values() {
        assert_eq!(mad(&catalog("K5", &[]).unwrap()).unwrap().value, r(4, 1));
        assert_eq!(mad(&catalog("C6", &[]).unwrap()).unwrap().value, r(2, 1));
        let h = catalog("K23_plus_edge", &[]).unwrap();
        assert_eq!(mad(&h).unwrap().value, r(14, 5));
    }

    #[test]
    fn witness_attains_value() {
        // K4 with a long pendant path: the densest part is the K4.
        let g = Graph::new(7, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let m = mad(&g).unwrap();
        assert_eq!(m.value, r(3, 1));
        assert_eq!(m.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn matches_brute_force_on_catalog() {
        for name in ["K4", "K5-", "K3,3", "W6", "F6", "A", "A+", "B", "B+", "C", "C+", "D", "P6", "square_of_path(7)"] {
            let g = catalog(name, &[]).unwrap();
            assert_eq!(mad(&g).unwrap().value, mad_brute_force(&g), "{name}");
        }
    }
}
