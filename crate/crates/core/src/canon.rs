//! Canonical forms of small vertex-coloured graphs.
//!
//! Individualization-refinement: the partition is refined to an equitable one,
//! the first smallest non-singleton cell is branched on, and every discrete
//! leaf yields a certificate (colour sequence plus relabeled adjacency). The
//! minimum certificate is the canonical form. Two leaves with equal
//! certificates give an automorphism; automorphisms fixing the current prefix
//! pointwise prune branches that lie in an already explored orbit.

use crate::graph::Graph;

/// Canonical certificate. Equal forms means isomorphic coloured graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    colours: Vec<usize>,
    /// Row-major adjacency bitsets of the relabeled graph.
    adj: Vec<u64>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    /// Edges of the relabeled graph, `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let w = words(self.n);
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u * w + v / 64] >> (v % 64) & 1 == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Compact text: `n:` then the upper triangle as hex nibbles.
    pub fn code(&self) -> String {
        let w = words(self.n);
        let mut bits = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                bits.push(self.adj[u * w + v / 64] >> (v % 64) & 1 == 1);
            }
        }
        let mut s = format!("{}:", self.n);
        for chunk in bits.chunks(4) {
            let x = chunk.iter().enumerate().fold(0u8, |a, (i, &b)| a | (u8::from(b) << (3 - i)));
            s.push(char::from_digit(x as u32, 16).unwrap());
        }
        s
    }
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

struct Search<'a> {
    n: usize,
    w: usize,
    adj: &'a [u64],
    colours: &'a [usize],
    best: Option<(Vec<u64>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

/// Canonical labeling: `order[i]` is the original vertex placed at position `i`.
pub fn canonical_labeling(g: &Graph, colours: &[usize]) -> (Vec<usize>, CanonicalForm) {
    let n = g.n();
    assert_eq!(colours.len(), n, "one colour per vertex");
    let w = words(n);
    let mut adj = vec![0u64; n * w];
    for &(u, v) in g.edges() {
        adj[u * w + v / 64] |= 1 << (v % 64);
        adj[v * w + u / 64] |= 1 << (u % 64);
    }
    let mut s = Search { n, w, adj: &adj, colours, best: None, autos: Vec::new() };
    let mut keys: Vec<usize> = colours.to_vec();
    keys.sort_unstable();
    keys.dedup();
    let cells: Vec<Vec<usize>> =
        keys.iter().map(|&k| (0..n).filter(|&v| colours[v] == k).collect()).filter(|c: &Vec<usize>| !c.is_empty()).collect();
    if n == 0 {
        return (Vec::new(), CanonicalForm { n: 0, colours: Vec::new(), adj: vec![0] });
    }
    let cells = s.refine(cells);
    s.dfs(cells, &mut Vec::new());
    let (adjc, order) = s.best.expect("at least one leaf");
    let cols = order.iter().map(|&v| colours[v]).collect();
    (order, CanonicalForm { n, colours: cols, adj: adjc })
}

pub fn canonical_form(g: &Graph, colours: &[usize]) -> CanonicalForm {
    canonical_labeling(g, colours).1
}

/// Nontrivial automorphisms met during the canonical search. Not guaranteed
/// to generate the whole group.
pub fn automorphism_generators(g: &Graph, colours: &[usize]) -> Vec<Vec<usize>> {
    let n = g.n();
    let w = words(n);
    let mut adj = vec![0u64; n * w];
    for &(u, v) in g.edges() {
        adj[u * w + v / 64] |= 1 << (v % 64);
        adj[v * w + u / 64] |= 1 << (u % 64);
    }
    if n == 0 {
        return Vec::new();
    }
    let mut s = Search { n, w, adj: &adj, colours, best: None, autos: Vec::new() };
    let mut keys: Vec<usize> = colours.to_vec();
    keys.sort_unstable();
    keys.dedup();
    let cells = keys.iter().map(|&k| (0..n).filter(|&v| colours[v] == k).collect()).collect();
    let cells = s.refine(cells);
    s.dfs(cells, &mut Vec::new());
    s.autos
}

/// Bipartite graph given by biadjacency rows (bit `j` of `rows[i]` joins left
/// `i` to right `j`, `right` columns). With `fixed_sides` the two sides keep
/// their roles; otherwise isomorphisms may exchange them.
pub fn bipartite_form(rows: &[u32], right: usize, fixed_sides: bool) -> CanonicalForm {
    let left = rows.len();
    let n = left + right;
    let mut edges = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..right {
            if r >> j & 1 == 1 {
                edges.push((i, left + j));
            }
        }
    }
    let g = Graph::new(n, edges).expect("simple bipartite graph");
    let colours: Vec<usize> = if fixed_sides { (0..n).map(|v| usize::from(v >= left)).collect() } else { vec![0; n] };
    canonical_form(&g, &colours)
}

/// Fixed-sides canonical biadjacency matrix as 0/1 row strings.
pub fn bipartite_canonical_rows(rows: &[u32], right: usize) -> Vec<String> {
    let f = bipartite_form(rows, right, true);
    let left = rows.len();
    let w = words(f.n);
    (0..left)
        .map(|i| (0..right).map(|j| if f.adj[i * w + (left + j) / 64] >> ((left + j) % 64) & 1 == 1 { '1' } else { '0' }).collect())
        .collect()
}

impl Search<'_> {
    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.w + v / 64] >> (v % 64) & 1 == 1
    }

    /// Refines to the coarsest equitable partition below `cells`. Cells are
    /// split by neighbour counts into the first splitter that separates
    /// anything, with parts ordered by count, so the result is label invariant.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let mut cnt = vec![0usize; self.n];
        'outer: loop {
            for s in 0..cells.len() {
                for c in cnt.iter_mut() {
                    *c = 0;
                }
                for &x in &cells[s] {
                    for v in 0..self.n {
                        if self.has(x, v) {
                            cnt[v] += 1;
                        }
                    }
                }
                let mut out: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
                let mut split = false;
                for cell in &cells {
                    if cell.len() > 1 && cell.iter().any(|&v| cnt[v] != cnt[cell[0]]) {
                        split = true;
                        let mut keys: Vec<usize> = cell.iter().map(|&v| cnt[v]).collect();
                        keys.sort_unstable();
                        keys.dedup();
                        for k in keys {
                            out.push(cell.iter().copied().filter(|&v| cnt[v] == k).collect());
                        }
                    } else {
                        out.push(cell.clone());
                    }
                }
                if split {
                    cells = out;
                    continue 'outer;
                }
            }
            return cells;
        }
    }

    fn dfs(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let target = cells.iter().enumerate().filter(|(_, c)| c.len() > 1).min_by_key(|(i, c)| (c.len(), *i)).map(|(i, _)| i);
        let Some(t) = target else {
            self.leaf(cells.iter().map(|c| c[0]).collect());
            return;
        };
        let mut cand = cells[t].clone();
        cand.sort_unstable();
        let mut done: Vec<usize> = Vec::new();
        for &v in &cand {
            if !done.is_empty() && self.same_orbit(v, &done, prefix) {
                continue;
            }
            let mut next = cells.clone();
            let rest: Vec<usize> = cells[t].iter().copied().filter(|&x| x != v).collect();
            next[t] = vec![v];
            next.insert(t + 1, rest);
            let next = self.refine(next);
            prefix.push(v);
            self.dfs(next, prefix);
            prefix.pop();
            done.push(v);
        }
    }

    /// Whether `v` is in the orbit of an explored vertex under the found
    /// automorphisms that fix `prefix` pointwise.
    fn same_orbit(&self, v: usize, done: &[usize], prefix: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self.autos.iter().filter(|g| prefix.iter().all(|&p| g[p] == p)).collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in gens {
            for x in 0..self.n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        done.iter().any(|&d| find(&mut parent, d) == rv)
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let n = self.n;
        let w = self.w;
        let mut cert = vec![0u64; n * w];
        for i in 0..n {
            for j in 0..n {
                if self.has(order[i], order[j]) {
                    cert[i * w + j / 64] |= 1 << (j % 64);
                }
            }
        }
        // Colours are constant along positions of equal initial cells, so the
        // adjacency alone orders leaves of the same tree.
        debug_assert!(order.windows(2).all(|p| self.colours[p[0]] <= self.colours[p[1]]));
        match &self.best {
            None => self.best = Some((cert, order)),
            Some((b, bo)) => match cert.cmp(b) {
                std::cmp::Ordering::Less => self.best = Some((cert, order)),
                std::cmp::Ordering::Equal => {
                    let mut g = vec![0; n];
                    for i in 0..n {
                        g[bo[i]] = order[i];
                    }
                    if g.iter().enumerate().any(|(i, &x)| i != x) {
                        self.autos.push(g);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}
