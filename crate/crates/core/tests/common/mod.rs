//! Random instances shared by the property tests and the acceptance run.
#![allow(dead_code)]

use packlab::cover::{Cover, Matching};
use packlab::derange::{BipartiteGraph, PermMatrix};
use packlab::graph::Graph;
use packlab::perm::{all_perms, Perm};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASE_ONE: [&str; 4] = ["51234786", "45123678", "34512867", "23451687"];
pub const CASE_TWO: [&str; 4] = ["51234786", "45123678", "34512867", "23461587"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(r: &mut ChaCha8Rng, k: usize) -> Perm {
    let mut v: Vec<usize> = (0..k).collect();
    v.shuffle(r);
    Perm::new(v).unwrap()
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn random_full_cover(r: &mut ChaCha8Rng, n: usize, k: usize, p: f64) -> Cover {
    let g = random_graph(r, n, p);
    let perms: Vec<Perm> = (0..g.m()).map(|_| random_perm(r, k)).collect();
    Cover::from_perms(g, k, &perms)
}

/// Lists of size 1..=3 and matchings with some pairs dropped.
pub fn random_partial_cover(r: &mut ChaCha8Rng, n: usize) -> Cover {
    let g = random_graph(r, n, 0.5);
    let sizes: Vec<usize> = (0..n).map(|_| r.gen_range(1..=3)).collect();
    let ms: Vec<Matching> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (sizes[u], sizes[v]);
            let mut left: Vec<usize> = (0..a).collect();
            let mut right: Vec<usize> = (0..b).collect();
            left.shuffle(r);
            right.shuffle(r);
            let pairs: Vec<(usize, usize)> = left.into_iter().zip(right).filter(|_| r.gen_bool(0.7)).collect();
            Matching::from_pairs(a, b, &pairs).unwrap()
        })
        .collect();
    Cover::from_matchings(g, sizes, ms).unwrap()
}

pub fn random_bipartite(r: &mut ChaCha8Rng, n: usize, density: f64) -> BipartiteGraph {
    let rows = (0..n).map(|_| (0..n).fold(0, |a, j| if r.gen_bool(density) { a | 1 << j } else { a })).collect();
    BipartiteGraph::from_rows(n, rows).unwrap()
}

pub fn brute_permanent(g: &BipartiteGraph) -> u64 {
    all_perms(g.n()).iter().filter(|p| (0..g.n()).all(|i| g.has_edge(i, p.apply(i)))).count() as u64
}

/// A sparse 8+8 graph of minimum degree at least 3 and five pairs on
/// distinct rows and columns, taken from the rows' own edges where possible.
pub fn five_pair_instance(r: &mut ChaCha8Rng, extra: usize) -> (BipartiteGraph, Vec<(usize, usize)>) {
    let n = 8;
    let mut rows = vec![0u32; n];
    for row in rows.iter_mut() {
        for j in rand::seq::index::sample(r, n, 3) {
            *row |= 1 << j;
        }
    }
    for _ in 0..extra {
        rows[r.gen_range(0..n)] |= 1 << r.gen_range(0..n);
    }
    for j in 0..n {
        while rows.iter().filter(|&&x| x >> j & 1 == 1).count() < 3 {
            let i = r.gen_range(0..n);
            rows[i] |= 1 << j;
        }
    }
    let g = BipartiteGraph::from_rows(n, rows).unwrap();
    let mut used = 0u32;
    let mut pairs = Vec::new();
    for i in rand::seq::index::sample(r, n, 5) {
        let mut cols: Vec<usize> = (0..n).filter(|&j| used >> j & 1 == 0).collect();
        cols.sort_by_key(|&j| !g.has_edge(i, j));
        let nbrs = cols.iter().take_while(|&&j| g.has_edge(i, j)).count().max(1);
        let j = cols[r.gen_range(0..nbrs)];
        used |= 1 << j;
        pairs.push((i, j));
    }
    (g, pairs)
}

/// Four permutations of `[8]`: either uniform, or one of the two extremal
/// matrices moved by a random relabelling and a few transpositions.
pub fn sample_matrix(r: &mut ChaCha8Rng) -> PermMatrix {
    if r.gen_bool(0.3) {
        return PermMatrix::new((0..4).map(|_| random_perm(r, 8)).collect()).unwrap();
    }
    let base = PermMatrix::from_one_based(if r.gen_bool(0.5) { &CASE_ONE } else { &CASE_TWO }).unwrap();
    let (h, g) = (random_perm(r, 8), random_perm(r, 8));
    let mut rows: Vec<Vec<usize>> = base.rows().iter().map(|p| h.compose(p).compose(&g).images().to_vec()).collect();
    for _ in 0..r.gen_range(0..3) {
        let row = &mut rows[r.gen_range(0..4)];
        let (a, b) = (r.gen_range(0..8), r.gen_range(0..8));
        row.swap(a, b);
    }
    PermMatrix::new(rows.into_iter().map(|v| Perm::new(v).unwrap()).collect()).unwrap()
}
