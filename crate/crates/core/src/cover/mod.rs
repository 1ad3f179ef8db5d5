//! Correspondence covers.
//!
//! A cover stores a list size per vertex and, per edge `(u, v)` with `u < v`,
//! a partial injective map from indices of `L(u)` to indices of `L(v)`.
//! List covers additionally carry their colour labels.

mod enumerate;
mod json;

pub use enumerate::FullCoverEnumerator;
pub use json::{CoverJson, CoverJsonError};

use crate::graph::Graph;
use crate::perm::Perm;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("vertex {0} has an empty list")]
    EmptyList(usize),
    #[error("expected {expected} list sizes, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("{0}-{1} is not an edge of the base graph")]
    NotAnEdge(usize, usize),
    #[error("matching on {0}-{1} is not injective or leaves the lists")]
    BadMatching(usize, usize),
    #[error("matching on {0}-{1} given twice")]
    DuplicateMatching(usize, usize),
    #[error("the forest contains a cycle")]
    NotAForest,
    #[error("edge {0}-{1} of the forest is not full")]
    NotFull(usize, usize),
    #[error("the given graph is not a subgraph of the base graph")]
    NotASubgraph,
    #[error("list {0} repeats a colour")]
    RepeatedColour(usize),
}

/// Partial injective map between the lists of an edge `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    /// `fwd[i] = Some(j)` iff `(i_u, j_v)` is a matching edge.
    pub fwd: Vec<Option<usize>>,
    pub bwd: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(su: usize, sv: usize) -> Matching {
        Matching { fwd: vec![None; su], bwd: vec![None; sv] }
    }

    pub fn from_pairs(su: usize, sv: usize, pairs: &[(usize, usize)]) -> Option<Matching> {
        let mut m = Matching::empty(su, sv);
        for &(i, j) in pairs {
            if i >= su || j >= sv || m.fwd[i].is_some() || m.bwd[j].is_some() {
                return None;
            }
            m.fwd[i] = Some(j);
            m.bwd[j] = Some(i);
        }
        Some(m)
    }

    pub fn from_perm(p: &Perm) -> Matching {
        let pairs: Vec<_> = (0..p.k()).map(|i| (i, p.apply(i))).collect();
        Matching::from_pairs(p.k(), p.k(), &pairs).unwrap()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.fwd.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))).collect()
    }

    pub fn size(&self) -> usize {
        self.fwd.iter().filter(|x| x.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.fwd.len() == self.bwd.len() && self.size() == self.fwd.len()
    }

    /// The bijection when full.
    pub fn as_perm(&self) -> Option<Perm> {
        if !self.is_full() {
            return None;
        }
        Perm::new(self.fwd.iter().map(|x| x.unwrap()).collect()).ok()
    }

    pub fn reversed(&self) -> Matching {
        Matching { fwd: self.bwd.clone(), bwd: self.fwd.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cover {
    base: Graph,
    sizes: Vec<usize>,
    /// Indexed like `base.edges()`.
    matchings: Vec<Matching>,
    labels: Option<Vec<Vec<i64>>>,
}

impl Cover {
    /// Builds a cover; edges without an entry get the empty matching.
    /// Pairs are given in the orientation of the supplied edge.
    pub fn new(base: Graph, sizes: Vec<usize>, matchings: &[((usize, usize), Vec<(usize, usize)>)]) -> Result<Cover, CoverError> {
        if sizes.len() != base.n() {
            return Err(CoverError::WrongLength { expected: base.n(), got: sizes.len() });
        }
        if let Some(v) = sizes.iter().position(|&s| s == 0) {
            return Err(CoverError::EmptyList(v));
        }
        let mut ms: Vec<Option<Matching>> = vec![None; base.m()];
        for &((u, v), ref pairs) in matchings {
            let e = base.edge_index(u, v).ok_or(CoverError::NotAnEdge(u, v))?;
            let oriented: Vec<(usize, usize)> =
                if u < v { pairs.clone() } else { pairs.iter().map(|&(i, j)| (j, i)).collect() };
            let (a, b) = base.edges()[e];
            let m = Matching::from_pairs(sizes[a], sizes[b], &oriented).ok_or(CoverError::BadMatching(a, b))?;
            if ms[e].is_some() {
                return Err(CoverError::DuplicateMatching(a, b));
            }
            ms[e] = Some(m);
        }
        let matchings = ms
            .into_iter()
            .enumerate()
            .map(|(e, m)| {
                let (a, b) = base.edges()[e];
                m.unwrap_or_else(|| Matching::empty(sizes[a], sizes[b]))
            })
            .collect();
        Ok(Cover { base, sizes, matchings, labels: None })
    }

    /// Cover with one matching per edge (in `base.edges()` order).
    pub fn from_matchings(base: Graph, sizes: Vec<usize>, matchings: Vec<Matching>) -> Result<Cover, CoverError> {
        let pairs: Vec<_> = base.edges().iter().zip(&matchings).map(|(&e, m)| (e, m.pairs())).collect();
        Cover::new(base, sizes, &pairs)
    }

    /// Full cover with the given bijections (edge order, oriented `u < v`).
    pub fn from_perms(base: Graph, k: usize, perms: &[Perm]) -> Cover {
        assert_eq!(perms.len(), base.m());
        let matchings = perms.iter().map(Matching::from_perm).collect();
        Cover { sizes: vec![k; base.n()], base, matchings, labels: None }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, v: usize) -> usize {
        self.sizes[v]
    }

    pub fn labels(&self) -> Option<&[Vec<i64>]> {
        self.labels.as_deref()
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn matching_by_index(&self, e: usize) -> &Matching {
        &self.matchings[e]
    }

    /// Matching of edge `uv` seen from `u` (maps indices of `L(u)` to `L(v)`).
    pub fn matching(&self, u: usize, v: usize) -> Option<Matching> {
        let e = self.base.edge_index(u, v)?;
        Some(if u < v { self.matchings[e].clone() } else { self.matchings[e].reversed() })
    }

    /// Partner of `i ∈ L(u)` in `L(v)` across edge `uv`.
    pub fn partner(&self, u: usize, i: usize, v: usize) -> Option<usize> {
        let e = self.base.edge_index(u, v)?;
        if u < v {
            self.matchings[e].fwd[i]
        } else {
            self.matchings[e].bwd[i]
        }
    }

    /// `Some(k)` when every list has size `k`.
    pub fn fold(&self) -> Option<usize> {
        let k = *self.sizes.first()?;
        self.sizes.iter().all(|&s| s == k).then_some(k)
    }

    pub fn is_full(&self) -> bool {
        self.matchings.iter().all(Matching::is_full)
    }

    /// Total number of cover vertices and the offset of each list.
    pub fn offsets(&self) -> (usize, Vec<usize>) {
        let mut off = Vec::with_capacity(self.n());
        let mut t = 0;
        for &s in &self.sizes {
            off.push(t);
            t += s;
        }
        (t, off)
    }

    /// Adjacency of the cover graph `H`: lists are cliques, matchings add edges.
    pub fn cover_graph(&self) -> Vec<Vec<usize>> {
        let (total, off) = self.offsets();
        let mut adj = vec![Vec::new(); total];
        for v in 0..self.n() {
            for i in 0..self.sizes[v] {
                for j in 0..self.sizes[v] {
                    if i != j {
                        adj[off[v] + i].push(off[v] + j);
                    }
                }
            }
        }
        for (e, &(u, v)) in self.base.edges().iter().enumerate() {
            for (i, j) in self.matchings[e].pairs() {
                adj[off[u] + i].push(off[v] + j);
                adj[off[v] + j].push(off[u] + i);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Whether `choice` (one list index per vertex) is an independent transversal.
    pub fn is_transversal(&self, choice: &[usize]) -> bool {
        choice.len() == self.n()
            && choice.iter().zip(&self.sizes).all(|(&c, &s)| c < s)
            && self
                .base
                .edges()
                .iter()
                .zip(&self.matchings)
                .all(|(&(u, v), m)| m.fwd[choice[u]] != Some(choice[v]))
    }

    /// Compatibility of two colour vectors on edge `uv`: no coordinate `i` has
    /// `(cu[i], cv[i])` in the matching.
    pub fn compatible(&self, u: usize, cu: &[usize], v: usize, cv: &[usize]) -> bool {
        cu.iter().zip(cv).all(|(&a, &b)| self.partner(u, a, v) != Some(b))
    }

    /// Adds `added` fresh colours to `L(v)` without new matching edges.
    pub fn with_larger_list(&self, v: usize, added: usize) -> Cover {
        let mut c = self.clone();
        c.sizes[v] += added;
        for (e, &(a, b)) in self.base.edges().iter().enumerate() {
            if a == v {
                c.matchings[e].fwd.extend(std::iter::repeat(None).take(added));
            } else if b == v {
                c.matchings[e].bwd.extend(std::iter::repeat(None).take(added));
            }
        }
        if let Some(l) = &mut c.labels {
            let mut next = l.iter().flatten().copied().max().unwrap_or(0) + 1;
            for _ in 0..added {
                l[v].push(next);
                next += 1;
            }
        }
        c
    }

    /// Removes the matching edge `(i, j)` of edge `uv` (`i ∈ L(u)`), if present.
    pub fn without_matching_edge(&self, u: usize, i: usize, v: usize) -> Cover {
        let mut c = self.clone();
        let e = self.base.edge_index(u, v).expect("edge");
        let m = &mut c.matchings[e];
        let (fwd, bwd) = if u < v { (&mut m.fwd, &mut m.bwd) } else { (&mut m.bwd, &mut m.fwd) };
        if let Some(j) = fwd[i].take() {
            bwd[j] = None;
        }
        c.labels = None;
        c
    }

    /// Replaces the matching of edge `uv` (given from `u`'s side).
    pub fn with_matching(&self, u: usize, v: usize, m: Matching) -> Cover {
        let mut c = self.clone();
        let e = self.base.edge_index(u, v).expect("edge");
        c.matchings[e] = if u < v { m } else { m.reversed() };
        c.labels = None;
        c
    }

    /// Relabels every list: index `i` of `L(v)` becomes `relabel[v][i]`.
    pub fn relabeled(&self, relabel: &[Perm]) -> Cover {
        let matchings = self
            .base
            .edges()
            .iter()
            .zip(&self.matchings)
            .map(|(&(u, v), m)| {
                let pairs: Vec<_> = m.pairs().into_iter().map(|(i, j)| (relabel[u].apply(i), relabel[v].apply(j))).collect();
                Matching::from_pairs(self.sizes[u], self.sizes[v], &pairs).unwrap()
            })
            .collect();
        let labels = self.labels.as_ref().map(|ls| {
            ls.iter()
                .enumerate()
                .map(|(v, l)| {
                    let mut out = l.clone();
                    for (i, &c) in l.iter().enumerate() {
                        out[relabel[v].apply(i)] = c;
                    }
                    out
                })
                .collect()
        });
        Cover { base: self.base.clone(), sizes: self.sizes.clone(), matchings, labels }
    }

    pub fn forget_labels(&self) -> Cover {
        Cover { labels: None, ..self.clone() }
    }

    /// Induced cover on `verts` (vertex `i` of the result is `verts[i]`).
    pub fn induced(&self, verts: &[usize]) -> Cover {
        let g = self.base.induced(verts);
        let sizes: Vec<usize> = verts.iter().map(|&v| self.sizes[v]).collect();
        let matchings = g
            .edges()
            .iter()
            .map(|&(a, b)| self.matching(verts[a], verts[b]).unwrap())
            .collect();
        let labels = self.labels.as_ref().map(|l| verts.iter().map(|&v| l[v].clone()).collect());
        Cover { base: g, sizes, matchings, labels }
    }
}

/// The list cover of `g` induced by colour lists (equal colours are matched).
pub fn list_cover(g: &Graph, lists: &[Vec<i64>]) -> Result<Cover, CoverError> {
    if lists.len() != g.n() {
        return Err(CoverError::WrongLength { expected: g.n(), got: lists.len() });
    }
    for (v, l) in lists.iter().enumerate() {
        if l.is_empty() {
            return Err(CoverError::EmptyList(v));
        }
        let mut s = l.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != l.len() {
            return Err(CoverError::RepeatedColour(v));
        }
    }
    let sizes = lists.iter().map(Vec::len).collect();
    let matchings: Vec<_> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let pairs: Vec<_> = lists[u]
                .iter()
                .enumerate()
                .filter_map(|(i, c)| lists[v].iter().position(|d| d == c).map(|j| (i, j)))
                .collect();
            ((u, v), pairs)
        })
        .collect();
    let mut c = Cover::new(g.clone(), sizes, &matchings)?;
    c.labels = Some(lists.to_vec());
    Ok(c)
}

/// Every edge carries the identity bijection on `[k]`.
pub fn full_identity_cover(g: &Graph, k: usize) -> Cover {
    Cover::from_perms(g.clone(), k, &vec![Perm::identity(k); g.m()])
}

/// Relabels lists so that the matchings on `forest` (edge indices) become
/// identities. Returns the new cover and the relabeling (`old index i of L(v)`
/// becomes `relabel[v].apply(i)`).
pub fn untwist(c: &Cover, forest: &[usize]) -> Result<(Cover, Vec<Perm>), CoverError> {
    let g = c.base();
    let mut adj = vec![Vec::new(); g.n()];
    for &e in forest {
        let (u, v) = g.edges()[e];
        if !c.matchings[e].is_full() {
            return Err(CoverError::NotFull(u, v));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut relabel: Vec<Option<Perm>> = vec![None; g.n()];
    let mut edges_seen = 0;
    for root in 0..g.n() {
        if relabel[root].is_some() {
            continue;
        }
        relabel[root] = Some(Perm::identity(c.size(root)));
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if relabel[v].is_some() {
                    continue;
                }
                edges_seen += 1;
                // want new_v(m(i)) = new_u(i), i.e. new_v = new_u ∘ m⁻¹
                let m = c.matching(u, v).unwrap().as_perm().unwrap();
                relabel[v] = Some(relabel[u].as_ref().unwrap().compose(&m.inverse()));
                stack.push(v);
            }
        }
    }
    if edges_seen != forest.len() {
        return Err(CoverError::NotAForest);
    }
    let relabel: Vec<Perm> = relabel.into_iter().map(Option::unwrap).collect();
    Ok((c.relabeled(&relabel), relabel))
}

/// Restriction of `c` to a subgraph on the same vertex indices: all lists kept,
/// matchings kept only on edges of `sub`.
pub fn restrict(c: &Cover, sub: &Graph) -> Result<Cover, CoverError> {
    if sub.n() != c.n() || !c.base().contains_subgraph(sub) {
        return Err(CoverError::NotASubgraph);
    }
    let matchings = sub.edges().iter().map(|&(u, v)| c.matching(u, v).unwrap()).collect();
    let mut out = Cover::from_matchings(sub.clone(), c.sizes.clone(), matchings)?;
    out.labels = c.labels.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;

    #[test]
    fn list_cover_matches_equal_colours() {
        let g = catalog("C3", &[]).unwrap();
        let c = list_cover(&g, &vec![vec![1, 2, 3]; 3]).unwrap();
        assert!(c.is_full());
        assert_eq!(c.fold(), Some(3));
        assert_eq!(c, {
            let mut f = full_identity_cover(&g, 3);
            f.labels = c.labels.clone();
            f
        });
        let d = list_cover(&catalog("P2", &[]).unwrap(), &[vec![1, 2], vec![2, 5]]).unwrap();
        assert_eq!(d.matching(0, 1).unwrap().pairs(), vec![(1, 0)]);
        assert_eq!(d.matching(1, 0).unwrap().pairs(), vec![(0, 1)]);
        assert_eq!(list_cover(&g, &[vec![1], vec![], vec![2]]), Err(CoverError::EmptyList(1)));
    }

    #[test]
    fn untwist_path() {
        let g = catalog("P4", &[]).unwrap();
        let perms = [Perm::new(vec![1, 2, 3, 0]).unwrap(), Perm::new(vec![3, 1, 0, 2]).unwrap(), Perm::new(vec![0, 2, 1, 3]).unwrap()];
        let c = Cover::from_perms(g.clone(), 4, &perms);
        let (u, _) = untwist(&c, &[0, 1, 2]).unwrap();
        assert_eq!(u, full_identity_cover(&g, 4));
    }

    #[test]
    fn untwist_rejects_cycles_and_partial_edges() {
        let g = catalog("C3", &[]).unwrap();
        let c = full_identity_cover(&g, 2);
        assert_eq!(untwist(&c, &[0, 1, 2]).unwrap_err(), CoverError::NotAForest);
        let p = c.without_matching_edge(0, 0, 1);
        assert_eq!(untwist(&p, &[0]).unwrap_err(), CoverError::NotFull(0, 1));
    }

    #[test]
    fn twist_stays_off_forest() {
        let g = catalog("C3", &[]).unwrap();
        let t = Perm::new(vec![1, 0]).unwrap();
        // edges (0,1), (0,2), (1,2)
        let c = Cover::from_perms(g, 2, &[Perm::identity(2), Perm::identity(2), t]);
        let (u, r) = untwist(&c, &[0, 1]).unwrap();
        assert_eq!(u, c);
        assert!(r.iter().all(Perm::is_identity));
    }

    #[test]
    fn restriction() {
        let c4 = catalog("C4", &[]).unwrap();
        let c = full_identity_cover(&c4, 3);
        assert_eq!(restrict(&c, &c4).unwrap(), c);
        let p = Graph::new(4, [(0, 1), (1, 2)]).unwrap();
        let r = restrict(&c, &p).unwrap();
        assert_eq!(r, full_identity_cover(&p, 3));
        let bad = Graph::new(4, [(0, 2)]).unwrap();
        assert_eq!(restrict(&c, &bad), Err(CoverError::NotASubgraph));
    }

    #[test]
    fn compatibility_is_a_derangement_condition() {
        let g = catalog("P2", &[]).unwrap();
        let m = Perm::new(vec![2, 0, 3, 1]).unwrap();
        let c = Cover::from_perms(g, 4, &[m.clone()]);
        for a in crate::perm::all_perms(4) {
            for b in crate::perm::all_perms(4) {
                let direct = c.compatible(0, a.images(), 1, b.images());
                assert_eq!(direct, m.compose(&a).is_derangement_of(&b));
                assert_eq!(direct, c.compatible(1, b.images(), 0, a.images()));
            }
        }
    }
}
