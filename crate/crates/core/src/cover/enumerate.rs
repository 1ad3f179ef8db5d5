//! Indexed enumeration of full covers with identity matchings on a forest.
//!
//! Relabeling every list by the same permutation `g` keeps the forest
//! matchings identities and conjugates the others, so the first non-forest
//! edge only needs one permutation per conjugacy class. Cover `i` is decoded
//! from a mixed-radix index (class representative first, then one
//! lexicographic permutation rank per further edge), which makes runs
//! resumable and splittable.

use super::{Cover, CoverError};
use crate::graph::Graph;
use crate::perm::{conjugacy_reps, Perm};

#[derive(Clone, Debug)]
pub struct FullCoverEnumerator {
    g: Graph,
    k: usize,
    /// Non-forest edge indices, sorted.
    free: Vec<usize>,
    reps: Vec<usize>,
    radix: usize,
}

impl FullCoverEnumerator {
    pub fn new(g: &Graph, k: usize, forest: &[usize]) -> Result<Self, CoverError> {
        let mut parent: Vec<usize> = (0..g.n()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &e in forest {
            let (u, v) = g.edges()[e];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(CoverError::NotAForest);
            }
            parent[a] = b;
        }
        let mut free: Vec<usize> = (0..g.m()).filter(|e| !forest.contains(e)).collect();
        free.sort_unstable();
        let reps = conjugacy_reps(k).iter().map(Perm::rank).collect();
        let radix = (1..=k).product();
        Ok(FullCoverEnumerator { g: g.clone(), k, free, reps, radix })
    }

    /// Enumerator using [`Graph::spanning_forest`].
    pub fn with_spanning_forest(g: &Graph, k: usize) -> Self {
        Self::new(g, k, &g.spanning_forest()).expect("spanning forest is a forest")
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn free_edges(&self) -> &[usize] {
        &self.free
    }

    pub fn total(&self) -> u64 {
        if self.free.is_empty() {
            return 1;
        }
        let mut t = self.reps.len() as u64;
        for _ in 1..self.free.len() {
            t = t.checked_mul(self.radix as u64).expect("enumeration size fits in u64");
        }
        t
    }

    /// Lexicographic permutation rank per edge (forest edges get the identity, rank 0).
    pub fn perm_ranks(&self, index: u64, out: &mut Vec<usize>) {
        out.clear();
        out.resize(self.g.m(), 0);
        if self.free.is_empty() {
            return;
        }
        let mut rest = index;
        for &e in self.free[1..].iter().rev() {
            out[e] = (rest % self.radix as u64) as usize;
            rest /= self.radix as u64;
        }
        out[self.free[0]] = self.reps[rest as usize];
    }

    pub fn cover(&self, index: u64) -> Cover {
        let mut ranks = Vec::new();
        self.perm_ranks(index, &mut ranks);
        let perms: Vec<Perm> = ranks.iter().map(|&r| Perm::unrank(self.k, r)).collect();
        Cover::from_perms(self.g.clone(), self.k, &perms)
    }

    pub fn iter(&self) -> impl Iterator<Item = Cover> + '_ {
        (0..self.total()).map(move |i| self.cover(i))
    }
}
