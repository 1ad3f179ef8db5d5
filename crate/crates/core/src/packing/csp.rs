//! Constraint search over colour vectors.
//!
//! Each vertex takes an arrangement (an injection `[m] -> L(v)`, a permutation
//! when `m = |L(v)|`). Domains are bitsets over arrangement indices. Full
//! matchings between equal lists use the shared composition/derangement
//! tables; anything else gets an explicit allowed-row table. The search is a
//! depth-first forward-checking search choosing the unassigned vertex with the
//! fewest remaining values (ties by a fixed vertex priority), values in
//! increasing order, so runs are deterministic.

use crate::cover::Cover;
use crate::perm::ArrangementTable;
use std::sync::Arc;

#[derive(Clone, Copy, Debug)]
enum Rel {
    /// Full matching with permutation rank `sigma` (oriented from the arc's tail).
    Perm(u32),
    /// Row table index.
    Rows(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Exhausted,
    Stopped,
    Budget,
}

pub(crate) struct Csp {
    n: usize,
    words: usize,
    tables: Vec<Arc<ArrangementTable>>,
    /// Per vertex index into `tables`.
    vt: Vec<usize>,
    arcs: Vec<Vec<(usize, Rel)>>,
    rows: Vec<Vec<u64>>,
    priority: Vec<usize>,
    /// For each base edge: positions of its two arcs.
    edge_arcs: Vec<[(usize, usize); 2]>,
}

impl Csp {
    /// Problem for `m` colourings on cover `c`. `priority[v]` smaller = chosen earlier on ties.
    pub(crate) fn new(c: &Cover, m: usize, priority: Vec<usize>) -> Csp {
        let n = c.n();
        let mut tables: Vec<Arc<ArrangementTable>> = Vec::new();
        let mut vt = vec![0; n];
        for v in 0..n {
            let s = c.size(v);
            vt[v] = match tables.iter().position(|t| t.k == s) {
                Some(i) => i,
                None => {
                    tables.push(ArrangementTable::get(s, m.min(s)));
                    tables.len() - 1
                }
            };
        }
        let words = tables.iter().map(|t| t.words).max().unwrap_or(1).max(1);
        assert!(words <= 16, "domains above 1024 colour vectors are not supported");
        let mut csp = Csp {
            n,
            words,
            tables,
            vt,
            arcs: vec![Vec::new(); n],
            rows: Vec::new(),
            priority,
            edge_arcs: Vec::new(),
        };
        for (e, &(u, v)) in c.base().edges().iter().enumerate() {
            let mt = c.matching_by_index(e);
            let (ru, rv) = match (mt.as_perm(), m <= c.size(u)) {
                (Some(p), true) => {
                    let r = p.rank() as u32;
                    let t = &csp.tables[csp.vt[u]];
                    (Rel::Perm(r), Rel::Perm(t.perm_inverse[r as usize]))
                }
                _ => {
                    let fwd = csp.build_rows(c, u, v);
                    let bwd = csp.build_rows(c, v, u);
                    csp.rows.push(fwd);
                    csp.rows.push(bwd);
                    (Rel::Rows(csp.rows.len() - 2), Rel::Rows(csp.rows.len() - 1))
                }
            };
            csp.arcs[u].push((v, ru));
            csp.arcs[v].push((u, rv));
            csp.edge_arcs.push([(u, csp.arcs[u].len() - 1), (v, csp.arcs[v].len() - 1)]);
        }
        csp
    }

    fn build_rows(&self, c: &Cover, u: usize, v: usize) -> Vec<u64> {
        let tu = &self.tables[self.vt[u]];
        let tv = &self.tables[self.vt[v]];
        let mt = c.matching(u, v).unwrap();
        let mut rows = vec![0u64; tu.len() * self.words];
        for (ai, a) in tu.arrangements.iter().enumerate() {
            let forb: Vec<Option<usize>> = a.iter().map(|&x| mt.fwd[x]).collect();
            for (bi, b) in tv.arrangements.iter().enumerate() {
                if forb.iter().zip(b).all(|(f, &y)| *f != Some(y)) {
                    rows[ai * self.words + bi / 64] |= 1 << (bi % 64);
                }
            }
        }
        rows
    }

    /// Replaces the permutation of full edge `e` (oriented `u < v`) by rank `r`.
    /// Only valid for problems built from full covers with equal lists.
    pub(crate) fn set_edge_perm(&mut self, e: usize, r: usize) {
        let [(u, iu), (v, iv)] = self.edge_arcs[e];
        let inv = self.tables[self.vt[u]].perm_inverse[r];
        self.arcs[u][iu].1 = Rel::Perm(r as u32);
        self.arcs[v][iv].1 = Rel::Perm(inv);
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn table(&self, v: usize) -> &ArrangementTable {
        &self.tables[self.vt[v]]
    }

    pub(crate) fn arrangement_index(&self, v: usize, a: &[usize]) -> Option<usize> {
        let t = self.table(v);
        if a.len() != t.m || a.iter().any(|&x| x >= t.k) {
            return None;
        }
        let mut seen = vec![false; t.k];
        for &x in a {
            if seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(crate::perm::rank_injection(a, t.k))
    }

    #[inline]
    fn allowed(&self, v: usize, a: usize, rel: Rel) -> &[u64] {
        match rel {
            Rel::Perm(s) => {
                let t = &self.tables[self.vt[v]];
                let b = t.comp[s as usize * t.len() + a] as usize;
                t.der_row(b)
            }
            Rel::Rows(i) => &self.rows[i][a * self.words..(a + 1) * self.words],
        }
    }

    fn full_domain(&self, v: usize, out: &mut [u64]) {
        let len = self.table(v).len();
        for (i, w) in out.iter_mut().enumerate() {
            let lo = i * 64;
            *w = if len >= lo + 64 {
                u64::MAX
            } else if len > lo {
                (1u64 << (len - lo)) - 1
            } else {
                0
            };
        }
    }

    /// Replaces every maximal path of degree-2 vertices between two distinct
    /// vertices of other degree by one composed constraint between its ends.
    /// The interior vertices are returned as chains and should be left
    /// inactive; [`Csp::fill_chain`] recovers their values afterwards.
    pub(crate) fn series_reduce(&mut self) -> Vec<Chain> {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut chains = Vec::new();
        let deg: Vec<usize> = self.arcs.iter().map(Vec::len).collect();
        for u in 0..n {
            if deg[u] == 2 {
                continue;
            }
            for start in 0..deg[u] {
                let (mut x, rel) = self.arcs[u][start];
                let mut prev = u;
                let mut path = vec![(u, rel)];
                let mut interior = Vec::new();
                while deg[x] == 2 && !seen[x] {
                    interior.push(x);
                    let (y, r) = *self.arcs[x].iter().find(|(y, _)| *y != prev).expect("simple graph");
                    path.push((x, r));
                    prev = x;
                    x = y;
                }
                if interior.is_empty() || x == u || deg[x] == 2 {
                    continue;
                }
                for &i in &interior {
                    seen[i] = true;
                }
                let fwd = self.compose(&path);
                let back: Vec<(usize, Rel)> = {
                    let mut b = Vec::new();
                    let mut nodes: Vec<usize> = path.iter().map(|p| p.0).collect();
                    nodes.push(x);
                    for w in nodes.windows(2).rev() {
                        let r = self.arcs[w[1]].iter().find(|(y, _)| *y == w[0]).unwrap().1;
                        b.push((w[1], r));
                    }
                    b
                };
                let bwd = self.compose(&back);
                self.rows.push(fwd);
                self.rows.push(bwd);
                let (rf, rb) = (Rel::Rows(self.rows.len() - 2), Rel::Rows(self.rows.len() - 1));
                self.arcs[u].push((x, rf));
                self.arcs[x].push((u, rb));
                chains.push(Chain { path, end: x });
            }
        }
        chains
    }

    /// Row table of the relation along `path`, each step `(vertex, arc to next)`.
    fn compose(&self, path: &[(usize, Rel)]) -> Vec<u64> {
        let w = self.words;
        let len = self.table(path[0].0).len();
        let mut out = vec![0u64; len * w];
        for a in 0..len {
            let mut cur = vec![0u64; w];
            cur[a / 64] |= 1 << (a % 64);
            for &(v, rel) in path {
                cur = self.image(v, &cur, rel);
            }
            out[a * w..(a + 1) * w].copy_from_slice(&cur);
        }
        out
    }

    /// Union of the values allowed by `rel` over the set `set` at `v`.
    fn image(&self, v: usize, set: &[u64], rel: Rel) -> Vec<u64> {
        let mut next = vec![0u64; self.words];
        for (wi, &bits) in set.iter().enumerate() {
            let mut bits = bits;
            while bits != 0 {
                let a = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for (n, r) in next.iter_mut().zip(self.allowed(v, a, rel)) {
                    *n |= r;
                }
            }
        }
        next
    }

    /// Fills the interior values of `chain` given values at both ends.
    pub(crate) fn fill_chain(&self, chain: &Chain, assign: &mut [usize]) {
        let w = self.words;
        let steps = chain.path.len();
        // reach[j]: values at path position j (j >= 1) from which the end value is reachable.
        let mut reach = vec![vec![0u64; w]; steps + 1];
        let b = assign[chain.end];
        reach[steps][b / 64] |= 1 << (b % 64);
        for j in (1..steps).rev() {
            let (v, rel) = chain.path[j];
            let len = self.table(v).len();
            for a in 0..len {
                if self.allowed(v, a, rel).iter().zip(&reach[j + 1]).any(|(x, y)| x & y != 0) {
                    reach[j][a / 64] |= 1 << (a % 64);
                }
            }
        }
        let mut cur = assign[chain.path[0].0];
        for j in 1..steps {
            let (prev, rel) = chain.path[j - 1];
            let row = self.allowed(prev, cur, rel);
            let (wi, word) = row.iter().zip(&reach[j]).map(|(x, y)| x & y).enumerate().find(|(_, x)| *x != 0).expect("end values are consistent");
            cur = wi * 64 + word.trailing_zeros() as usize;
            assign[chain.path[j].0] = cur;
        }
    }

    /// Depth-first search over `active` vertices given `fixed` values.
    /// `restrict_first` limits the first branching vertex's domain (used for
    /// row symmetry). `on_solution` returns `false` to stop.
    pub(crate) fn search(
        &self,
        fixed: &[Option<usize>],
        active: &[bool],
        restrict_first: Option<&dyn Fn(usize) -> Vec<u64>>,
        budget: u64,
        nodes: &mut u64,
        on_solution: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Outcome {
        let w = self.words;
        let n = self.n;
        let mut doms = vec![0u64; n * w];
        let mut assign = vec![usize::MAX; n];
        for v in 0..n {
            if let Some(a) = fixed[v] {
                assign[v] = a;
            }
        }
        let mut free = 0;
        for v in 0..n {
            if !active[v] || fixed[v].is_some() {
                continue;
            }
            free += 1;
            let d = &mut doms[v * w..(v + 1) * w];
            self.full_domain(v, d);
            for &(x, _) in &self.arcs[v] {
                if let Some(a) = fixed[x] {
                    let rel = self.arcs[x].iter().find(|(y, _)| *y == v).map(|&(_, r)| r).expect("symmetric arcs");
                    let back = self.allowed(x, a, rel);
                    for (dw, bw) in d.iter_mut().zip(back) {
                        *dw &= bw;
                    }
                }
            }
            if d.iter().all(|&x| x == 0) {
                return Outcome::Exhausted;
            }
        }
        if free == 0 {
            return if on_solution(&assign) { Outcome::Exhausted } else { Outcome::Stopped };
        }
        let mut levels = vec![0u64; (free + 1) * n * w];
        levels[..n * w].copy_from_slice(&doms);
        let mut st = State { levels, assign, active: active.to_vec(), free, first: true };
        self.dfs(&mut st, 0, restrict_first, budget, nodes, on_solution)
    }

    fn dfs(
        &self,
        st: &mut State,
        depth: usize,
        restrict_first: Option<&dyn Fn(usize) -> Vec<u64>>,
        budget: u64,
        nodes: &mut u64,
        on_solution: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Outcome {
        let w = self.words;
        let nw = self.n * w;
        let base = depth * nw;
        let mut best = usize::MAX;
        let mut best_key = (u32::MAX, usize::MAX);
        for v in 0..self.n {
            if !st.active[v] || st.assign[v] != usize::MAX {
                continue;
            }
            let c: u32 = st.levels[base + v * w..base + (v + 1) * w].iter().map(|x| x.count_ones()).sum();
            let key = (c, self.priority[v]);
            if key < best_key {
                best_key = key;
                best = v;
            }
        }
        let v = best;
        let mut dom = [0u64; 16];
        let dom = &mut dom[..w];
        dom.copy_from_slice(&st.levels[base + v * w..base + (v + 1) * w]);
        if st.first {
            st.first = false;
            if let Some(f) = restrict_first {
                for (d, r) in dom.iter_mut().zip(f(v)) {
                    *d &= r;
                }
            }
        }
        let next = base + nw;
        for wi in 0..w {
            let mut bits = dom[wi];
            while bits != 0 {
                let a = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                *nodes += 1;
                if *nodes > budget {
                    return Outcome::Budget;
                }
                st.levels.copy_within(base..base + nw, next);
                st.assign[v] = a;
                let mut ok = true;
                for &(x, rel) in &self.arcs[v] {
                    if !st.active[x] || st.assign[x] != usize::MAX {
                        continue;
                    }
                    let row = self.allowed(v, a, rel);
                    let d = &mut st.levels[next + x * w..next + (x + 1) * w];
                    let mut any = 0;
                    for (dw, rw) in d.iter_mut().zip(row) {
                        *dw &= rw;
                        any |= *dw;
                    }
                    if any == 0 {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    st.free -= 1;
                    let r = if st.free == 0 {
                        if on_solution(&st.assign) {
                            Outcome::Exhausted
                        } else {
                            Outcome::Stopped
                        }
                    } else {
                        self.dfs(st, depth + 1, None, budget, nodes, on_solution)
                    };
                    st.free += 1;
                    if r != Outcome::Exhausted {
                        st.assign[v] = usize::MAX;
                        return r;
                    }
                }
                st.assign[v] = usize::MAX;
            }
        }
        Outcome::Exhausted
    }
}

/// A path of degree-2 vertices: `path[0]` is one end, `path[1..]` the
/// interior, each with its arc towards the next vertex; `end` is the other end.
pub(crate) struct Chain {
    path: Vec<(usize, Rel)>,
    end: usize,
}

impl Chain {
    pub(crate) fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        self.path[1..].iter().map(|p| p.0)
    }
}

struct State {
    levels: Vec<u64>,
    assign: Vec<usize>,
    active: Vec<bool>,
    free: usize,
    first: bool,
}
