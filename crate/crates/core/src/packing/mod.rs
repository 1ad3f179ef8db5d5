//! Packings, transversal counting and extension of partial packings.

mod csp;

pub(crate) use csp::{Chain, Csp, Outcome};

use crate::cover::{list_cover, Cover, FullCoverEnumerator};
use crate::graph::{degeneracy, Graph};
use crate::perm::Perm;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingError {
    #[error("packings need all lists of one size")]
    NonUniform,
    #[error("partial packing is not compatible on edge {0}-{1}")]
    Incompatible(usize, usize),
    #[error("partial packing entry at vertex {0} is not an injective colour vector of the right length")]
    BadEntry(usize),
    #[error("frontier vertex {0} is already assigned")]
    FrontierAssigned(usize),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
}

/// `k` disjoint transversals: `columns[v]` lists the colour of `v` in each of the `k` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub k: usize,
    pub columns: Vec<Perm>,
}

impl Packing {
    pub fn row(&self, i: usize) -> Vec<usize> {
        self.columns.iter().map(|c| c.apply(i)).collect()
    }

    /// Independent check: every row is an independent transversal.
    pub fn validate(&self, c: &Cover) -> bool {
        c.fold() == Some(self.k)
            && self.columns.len() == c.n()
            && self.columns.iter().all(|p| p.k() == self.k)
            && (0..self.k).all(|i| c.is_transversal(&self.row(i)))
    }
}

/// Outcome of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult<T> {
    Found(T),
    None,
    Inconclusive,
}

/// Tie-break priority: vertices removed last by the degeneracy ordering come first.
pub fn search_priority(g: &Graph) -> Vec<usize> {
    let (_, order) = degeneracy(g);
    let mut pri = vec![0; g.n()];
    for (i, &v) in order.iter().rev().enumerate() {
        pri[v] = i;
    }
    pri
}

fn first_vertex_rows(csp: &Csp) -> impl Fn(usize) -> Vec<u64> + '_ {
    move |v| {
        let t = csp.table(v);
        let mut bits = vec![0u64; t.words.max(1)];
        for (i, a) in t.arrangements.iter().enumerate() {
            if a.windows(2).all(|w| w[0] < w[1]) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        bits.resize(16, 0);
        bits
    }
}

pub fn find_packing(c: &Cover) -> Result<Option<Packing>, PackingError> {
    match find_packing_with_budget(c, u64::MAX)?.0 {
        SearchResult::Found(p) => Ok(Some(p)),
        SearchResult::None => Ok(None),
        SearchResult::Inconclusive => unreachable!("unbounded search"),
    }
}

/// Packing search with a node budget; also returns the nodes expanded.
pub fn find_packing_with_budget(c: &Cover, budget: u64) -> Result<(SearchResult<Packing>, u64), PackingError> {
    let k = c.fold().ok_or(PackingError::NonUniform)?;
    let mut csp = Csp::new(c, k, search_priority(c.base()));
    let chains = csp.series_reduce();
    Ok(packing_on(&csp, &chains, c.n(), k, budget))
}

fn packing_on(csp: &Csp, chains: &[Chain], n: usize, k: usize, budget: u64) -> (SearchResult<Packing>, u64) {
    let mut nodes = 0;
    let mut found = None;
    let mut active = vec![true; n];
    for ch in chains {
        for v in ch.interior() {
            active[v] = false;
        }
    }
    let fixed = vec![None; n];
    let rows = first_vertex_rows(csp);
    let out = csp.search(&fixed, &active, Some(&rows), budget, &mut nodes, &mut |a| {
        let mut a = a.to_vec();
        for ch in chains {
            csp.fill_chain(ch, &mut a);
        }
        found = Some(a);
        false
    });
    let res = match (out, found) {
        (_, Some(a)) => SearchResult::Found(Packing {
            k,
            columns: a.iter().enumerate().map(|(v, &i)| Perm::new(csp.table(v).arrangements[i].clone()).unwrap()).collect(),
        }),
        (Outcome::Budget, None) => SearchResult::Inconclusive,
        _ => SearchResult::None,
    };
    (res, nodes)
}

/// Number of independent transversals.
pub fn count_transversals(c: &Cover) -> u128 {
    let csp = Csp::new(c, 1, search_priority(c.base()));
    let mut nodes = 0;
    let mut count = 0u128;
    csp.search(&vec![None; c.n()], &vec![true; c.n()], None, u64::MAX, &mut nodes, &mut |_| {
        count += 1;
        true
    });
    count
}

/// All independent transversals in lexicographic order; fails beyond `limit` of them.
pub fn enumerate_transversals(c: &Cover, limit: usize) -> Result<Vec<Vec<usize>>, PackingError> {
    let csp = Csp::new(c, 1, search_priority(c.base()));
    let mut nodes = 0;
    let mut out = Vec::new();
    let mut over = false;
    csp.search(&vec![None; c.n()], &vec![true; c.n()], None, u64::MAX, &mut nodes, &mut |a| {
        if out.len() == limit {
            over = true;
            return false;
        }
        out.push(a.iter().enumerate().map(|(v, &i)| csp.table(v).arrangements[i][0]).collect());
        true
    });
    if over {
        return Err(PackingError::BudgetExceeded(limit as u64));
    }
    out.sort();
    Ok(out)
}

/// Colour vectors on some vertices (all of the same length `m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPacking {
    pub assigned: Vec<Option<Vec<usize>>>,
}

impl PartialPacking {
    pub fn empty(n: usize) -> Self {
        PartialPacking { assigned: vec![None; n] }
    }

    pub fn with(mut self, v: usize, colours: Vec<usize>) -> Self {
        self.assigned[v] = Some(colours);
        self
    }

    fn width(&self) -> Option<usize> {
        self.assigned.iter().flatten().map(Vec::len).next()
    }

    /// Checks compatibility on every edge with both ends assigned.
    pub fn validate(&self, c: &Cover) -> Result<(), PackingError> {
        let m = self.width();
        for (v, a) in self.assigned.iter().enumerate() {
            if let Some(a) = a {
                let mut s = a.clone();
                s.sort_unstable();
                s.dedup();
                if Some(a.len()) != m || s.len() != a.len() || a.iter().any(|&x| x >= c.size(v)) {
                    return Err(PackingError::BadEntry(v));
                }
            }
        }
        for &(u, v) in c.base().edges() {
            if let (Some(a), Some(b)) = (&self.assigned[u], &self.assigned[v]) {
                if !c.compatible(u, a, v, b) {
                    return Err(PackingError::Incompatible(u, v));
                }
            }
        }
        Ok(())
    }
}

/// A reusable extension checker for one cover and colour-vector width `m`.
pub struct Extender {
    csp: Csp,
}

impl Extender {
    pub fn new(c: &Cover, m: usize) -> Self {
        Extender { csp: Csp::new(c, m, search_priority(c.base())) }
    }

    /// Completion of `fixed` (arrangement vectors) on `frontier`, if any.
    /// The caller guarantees `fixed` is a valid partial packing.
    pub fn extend(&self, fixed: &[Option<Vec<usize>>], frontier: &[usize]) -> Option<Vec<Option<Vec<usize>>>> {
        let n = self.csp.n();
        let idx: Vec<Option<usize>> = (0..n)
            .map(|v| fixed[v].as_ref().map(|a| self.csp.arrangement_index(v, a).expect("valid colour vector")))
            .collect();
        let mut active = vec![false; n];
        for &v in frontier {
            active[v] = true;
        }
        let mut nodes = 0;
        let mut sol = None;
        self.csp.search(&idx, &active, None, u64::MAX, &mut nodes, &mut |a| {
            sol = Some(a.to_vec());
            false
        });
        sol.map(|a| {
            (0..n)
                .map(|v| {
                    if active[v] {
                        Some(self.csp.table(v).arrangements[a[v]].clone())
                    } else {
                        fixed[v].clone()
                    }
                })
                .collect()
        })
    }

    pub fn extendable(&self, fixed: &[Option<Vec<usize>>], frontier: &[usize]) -> bool {
        self.extend(fixed, frontier).is_some()
    }

    /// Replaces the permutation on a full edge (index into the base edge list).
    pub fn set_edge_perm(&mut self, e: usize, rank: usize) {
        self.csp.set_edge_perm(e, rank);
    }
}

/// Whether `p` extends to the vertices of `frontier` (others stay unassigned).
pub fn extendable(c: &Cover, p: &PartialPacking, frontier: &[usize]) -> Result<bool, PackingError> {
    Ok(extend(c, p, frontier)?.is_some())
}

pub fn extend(c: &Cover, p: &PartialPacking, frontier: &[usize]) -> Result<Option<PartialPacking>, PackingError> {
    p.validate(c)?;
    if let Some(&v) = frontier.iter().find(|&&v| p.assigned[v].is_some()) {
        return Err(PackingError::FrontierAssigned(v));
    }
    let m = match p.width() {
        Some(m) => m,
        None => frontier.iter().map(|&v| c.size(v)).min().unwrap_or(0),
    };
    if frontier.iter().any(|&v| c.size(v) < m) {
        return Ok(None);
    }
    if frontier.is_empty() {
        return Ok(Some(p.clone()));
    }
    let ext = Extender::new(c, m);
    Ok(ext.extend(&p.assigned, frontier).map(|assigned| PartialPacking { assigned }))
}

/// Verdict of an exhaustive packing-number check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds { checked: u64 },
    Fails { witness: Cover, index: u64 },
    Inconclusive { resume_from: u64 },
}

#[derive(Clone, Debug)]
pub struct UpperReport {
    pub verdict: Verdict,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

/// Checks whether every full `k`-fold correspondence cover of `g` has a packing.
/// Adding matching edges only removes transversals, so full covers suffice.
pub fn corr_packing_upper(g: &Graph, k: usize, budget: u64) -> UpperReport {
    corr_packing_upper_from(g, k, budget, 0)
}

/// Same as [`corr_packing_upper`] but starting at cover index `start`.
pub fn corr_packing_upper_from(g: &Graph, k: usize, budget: u64, start: u64) -> UpperReport {
    let t0 = Instant::now();
    let en = FullCoverEnumerator::with_spanning_forest(g, k);
    let mut checker = FullCoverChecker::new(&en);
    let mut nodes = 0u64;
    let total = en.total();
    for i in start..total {
        if nodes >= budget {
            return UpperReport { verdict: Verdict::Inconclusive { resume_from: i }, nodes_expanded: nodes, elapsed: t0.elapsed() };
        }
        let (has, used) = checker.check(i, budget - nodes);
        nodes += used;
        match has {
            SearchResult::Found(_) => {}
            SearchResult::None => {
                return UpperReport {
                    verdict: Verdict::Fails { witness: en.cover(i), index: i },
                    nodes_expanded: nodes,
                    elapsed: t0.elapsed(),
                }
            }
            SearchResult::Inconclusive => {
                return UpperReport { verdict: Verdict::Inconclusive { resume_from: i }, nodes_expanded: nodes, elapsed: t0.elapsed() }
            }
        }
    }
    UpperReport { verdict: Verdict::Holds { checked: total - start }, nodes_expanded: nodes, elapsed: t0.elapsed() }
}

/// Packing search specialised to the covers of a [`FullCoverEnumerator`]:
/// the constraint tables are built once and only edge permutations change.
pub struct FullCoverChecker<'a> {
    en: &'a FullCoverEnumerator,
    csp: Csp,
    ranks: Vec<usize>,
}

impl<'a> FullCoverChecker<'a> {
    pub fn new(en: &'a FullCoverEnumerator) -> Self {
        let c = en.cover(0);
        FullCoverChecker { en, csp: Csp::new(&c, en.k(), search_priority(en.graph())), ranks: Vec::new() }
    }

    /// Packing search on cover `index`; returns the result and nodes used.
    pub fn check(&mut self, index: u64, budget: u64) -> (SearchResult<Packing>, u64) {
        self.en.perm_ranks(index, &mut self.ranks);
        for &e in self.en.free_edges() {
            self.csp.set_edge_perm(e, self.ranks[e]);
        }
        packing_on(&self.csp, &[], self.en.graph().n(), self.en.k(), budget)
    }
}

/// Checks whether every `k`-fold list cover of `g` has a packing. List systems
/// are enumerated up to colour renaming (new colours appear in increasing
/// order); `seeds` are tried first.
pub fn list_packing_upper(g: &Graph, k: usize, budget: u64, seeds: &[Vec<Vec<i64>>]) -> UpperReport {
    let t0 = Instant::now();
    let mut nodes = 0u64;
    let mut checked = 0u64;
    for (i, lists) in seeds.iter().enumerate() {
        let c = list_cover(g, lists).expect("valid seed lists");
        let (r, used) = find_packing_with_budget(&c, budget.saturating_sub(nodes)).expect("uniform lists");
        nodes += used;
        checked += 1;
        match r {
            SearchResult::None => {
                return UpperReport { verdict: Verdict::Fails { witness: c, index: i as u64 }, nodes_expanded: nodes, elapsed: t0.elapsed() }
            }
            SearchResult::Inconclusive => {
                return UpperReport { verdict: Verdict::Inconclusive { resume_from: 0 }, nodes_expanded: nodes, elapsed: t0.elapsed() }
            }
            SearchResult::Found(_) => {}
        }
    }
    let mut lists: Vec<Vec<i64>> = Vec::with_capacity(g.n());
    let mut result: Option<Verdict> = None;
    list_systems(g.n(), k, 0, &mut lists, &mut |ls| {
        if nodes >= budget {
            result = Some(Verdict::Inconclusive { resume_from: checked });
            return false;
        }
        let c = list_cover(g, ls).expect("valid lists");
        let (r, used) = find_packing_with_budget(&c, budget - nodes).expect("uniform lists");
        nodes += used;
        checked += 1;
        match r {
            SearchResult::Found(_) => true,
            SearchResult::None => {
                result = Some(Verdict::Fails { witness: c, index: checked - 1 });
                false
            }
            SearchResult::Inconclusive => {
                result = Some(Verdict::Inconclusive { resume_from: checked - 1 });
                false
            }
        }
    });
    UpperReport { verdict: result.unwrap_or(Verdict::Holds { checked }), nodes_expanded: nodes, elapsed: t0.elapsed() }
}

/// Restricted-growth enumeration of `n` lists of size `k`: each list takes some
/// already used colours plus a prefix of the unused ones.
pub(crate) fn list_systems(n: usize, k: usize, used: i64, lists: &mut Vec<Vec<i64>>, f: &mut dyn FnMut(&[Vec<i64>]) -> bool) -> bool {
    if lists.len() == n {
        return f(lists);
    }
    for fresh in (0..=k).rev() {
        let old = k - fresh;
        if old as i64 > used || (lists.is_empty() && old > 0) {
            continue;
        }
        let mut combo: Vec<i64> = (0..old as i64).collect();
        loop {
            let mut l = combo.clone();
            l.extend(used..used + fresh as i64);
            lists.push(l);
            let go = list_systems(n, k, used + fresh as i64, lists, f);
            lists.pop();
            if !go {
                return false;
            }
            if !next_combination(&mut combo, used) {
                break;
            }
        }
    }
    true
}

fn next_combination(c: &mut [i64], n: i64) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - (k - i) as i64 {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
