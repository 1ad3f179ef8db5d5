//! Perfect-matching counts over edge-minimal bipartite graphs of given
//! minimum degree on `n + n` vertices.
//!
//! Every 0/1 matrix has a doubly lexical ordering (rows and columns both
//! non-increasing as binary words), so enumerating only such matrices reaches
//! every isomorphism class. Edge-minimal means every edge has an end of degree
//! exactly `d`; since degrees only grow as rows are added, a partial matrix
//! with an edge whose row has degree above `d` and whose column already
//! exceeds `d` is abandoned. The work is split by first row.

use super::{permanent_rows, BipartiteGraph, DerangeError};
use crate::canon::{bipartite_canonical_rows, bipartite_form, CanonicalForm};
use crate::perm::all_perms;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

#[derive(Clone, Debug)]
pub struct FamilyOptions {
    /// Side size, at most 8.
    pub n: usize,
    /// Search-node budget shared by all shards.
    pub budget: u64,
    /// Canonicalise every representative to count all classes.
    pub classify_all: bool,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { n: 8, budget: u64::MAX, classify_all: false }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FamilyClass {
    /// Fixed-sides canonical biadjacency rows.
    pub rows: Vec<String>,
    pub permanent: u64,
    pub regular: bool,
    /// Components of the bipartite complement with at least one edge:
    /// `C<len>` for cycles, `P<vertices>` for paths, else `X<v>v<e>e`.
    pub complement: String,
    /// Canonical code of the graph with sides interchangeable.
    pub code: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub d: usize,
    /// Doubly lexical edge-minimal matrices visited.
    pub representatives: u64,
    pub nodes: u64,
    /// False when the budget ran out; every other field is then partial.
    pub complete: bool,
    /// Classes as graphs (sides interchangeable), when all were classified.
    pub classes: Option<usize>,
    /// Classes with left and right sides kept apart, when all were classified.
    pub classes_fixed_sides: Option<usize>,
    pub all_classes: Vec<FamilyClass>,
    pub min_positive: Option<u64>,
    /// Classes attaining `min_positive`.
    pub minimizers: Vec<FamilyClass>,
    /// Classes without a perfect matching.
    pub zero_classes: Vec<FamilyClass>,
    pub zero_classes_fixed_sides: usize,
    /// Least permanent of a zero class plus one perfect matching of `K_{n,n}`.
    pub augmented_min: Option<u64>,
}

/// Visits every doubly lexical edge-minimal `n x n` matrix of minimum degree
/// `d` (rows as bitsets, column `j` at bit `n-1-j`). Returns the number of
/// search nodes and whether the enumeration finished within `budget`.
pub fn edge_minimal_family(n: usize, d: usize, budget: u64, visit: &(dyn Fn(&[u32]) + Sync)) -> (u64, bool) {
    assert!(n <= 8 && d <= n, "side size at most 8");
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let firsts: Vec<u32> = (0..1u32 << n).rev().filter(|v| v.count_ones() as usize >= d).collect();
    let full_ties = if n == 0 { 0 } else { (1u32 << (n - 1)) - 1 };
    firsts.par_iter().for_each(|&first| {
        let mut e = Enum { n, d: d as u32, budget, nodes: &nodes, stop: &stop, visit, rows: [0; 8], colsum: [0; 8] };
        e.place(0, first, full_ties);
    });
    (nodes.into_inner(), !stop.into_inner())
}

struct Enum<'a> {
    n: usize,
    d: u32,
    budget: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    visit: &'a (dyn Fn(&[u32]) + Sync),
    rows: [u32; 8],
    colsum: [u32; 8],
}

impl Enum<'_> {
    fn col_bit(&self, v: u32, j: usize) -> u32 {
        v >> (self.n - 1 - j) & 1
    }

    /// Tries `v` as row `r`; recurses if it is admissible.
    fn place(&mut self, r: usize, v: u32, ties: u32) {
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.stop.store(true, Ordering::Relaxed);
            return;
        }
        let n = self.n;
        // Columns j, j+1 still equal above row r must stay ordered.
        let mut nties = 0u32;
        for j in 0..n.saturating_sub(1) {
            if ties >> j & 1 == 1 {
                let (a, b) = (self.col_bit(v, j), self.col_bit(v, j + 1));
                if a < b {
                    return;
                }
                if a == b {
                    nties |= 1 << j;
                }
            }
        }
        for j in 0..n {
            self.colsum[j] += self.col_bit(v, j);
        }
        self.rows[r] = v;
        let left = (n - r - 1) as u32;
        let mut good = (0..n).all(|j| self.colsum[j] + left >= self.d);
        if good {
            'rows: for i in 0..=r {
                let row = self.rows[i];
                if row.count_ones() > self.d {
                    for j in 0..n {
                        if self.col_bit(row, j) == 1 && self.colsum[j] > self.d {
                            good = false;
                            break 'rows;
                        }
                    }
                }
            }
        }
        if good {
            if r + 1 == n {
                (self.visit)(&self.rows[..n]);
            } else {
                for w in (0..=v).rev() {
                    if w.count_ones() >= self.d {
                        self.place(r + 1, w, nties);
                    }
                }
            }
        }
        for j in 0..n {
            self.colsum[j] -= self.col_bit(v, j);
        }
    }
}

fn is_regular(rows: &[u32], n: usize) -> bool {
    let g = BipartiteGraph { n, rows: rows.to_vec() };
    let mut all = g.left_degrees();
    all.extend(g.right_degrees());
    all.iter().all(|&x| x == all[0])
}

fn complement_shape(rows: &[u32], n: usize) -> String {
    let full = (1u32 << n) - 1;
    let comp: Vec<u32> = rows.iter().map(|r| !r & full).collect();
    // Vertices 0..n left, n..2n right.
    let mut seen = vec![false; 2 * n];
    let mut parts: Vec<(usize, usize, bool)> = Vec::new();
    let deg = |x: usize| -> usize {
        if x < n {
            comp[x].count_ones() as usize
        } else {
            comp.iter().filter(|&&r| r >> (x - n) & 1 == 1).count()
        }
    };
    for s in 0..2 * n {
        if seen[s] || deg(s) == 0 {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let (mut verts, mut degsum, mut max2) = (0, 0, true);
        while let Some(x) = stack.pop() {
            verts += 1;
            degsum += deg(x);
            max2 &= deg(x) <= 2;
            let nbrs: Vec<usize> = if x < n {
                (0..n).filter(|&j| comp[x] >> j & 1 == 1).map(|j| n + j).collect()
            } else {
                (0..n).filter(|&i| comp[i] >> (x - n) & 1 == 1).collect()
            };
            for y in nbrs {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        parts.push((verts, degsum / 2, max2));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let names: Vec<String> = parts
        .iter()
        .map(|&(v, e, m2)| {
            if m2 && e == v {
                format!("C{v}")
            } else if m2 && e + 1 == v {
                format!("P{v}")
            } else {
                format!("X{v}v{e}e")
            }
        })
        .collect();
    if names.is_empty() {
        "empty".into()
    } else {
        names.join("+")
    }
}

fn class_info(rows: &[u32], n: usize, form: &CanonicalForm) -> FamilyClass {
    FamilyClass {
        rows: bipartite_canonical_rows(rows, n),
        permanent: permanent_rows(rows),
        regular: is_regular(rows, n),
        complement: complement_shape(rows, n),
        code: form.code(),
    }
}

/// Groups matrices into classes as graphs; returns one `FamilyClass` per
/// class (sorted by code) and the number of fixed-sides classes.
fn classify(mats: &[Vec<u32>], n: usize) -> (Vec<FamilyClass>, usize) {
    let forms: Vec<(CanonicalForm, CanonicalForm)> =
        mats.par_iter().map(|m| (bipartite_form(m, n, false), bipartite_form(m, n, true))).collect();
    let mut graph: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut fixed = std::collections::BTreeSet::new();
    for (i, (g, f)) in forms.iter().enumerate() {
        graph.entry(g.clone()).or_insert(i);
        fixed.insert(f.clone());
    }
    let classes = graph.iter().map(|(form, &i)| class_info(&mats[i], n, form)).collect();
    (classes, fixed.len())
}

/// Exhaustive report for minimum degree `d` on `n + n` vertices.
pub fn min_permanent_family(d: usize, opts: &FamilyOptions) -> Result<FamilyReport, DerangeError> {
    let n = opts.n;
    if n == 0 || n > 8 {
        return Err(DerangeError::TooLarge(n));
    }
    if d == 0 || d > n {
        return Err(DerangeError::Precondition(format!("minimum degree {d} outside 1..={n}")));
    }
    struct Acc {
        reps: u64,
        min_pos: u64,
        min_mats: Vec<Vec<u32>>,
        zero: Vec<Vec<u32>>,
        all: Vec<Vec<u32>>,
    }
    let acc = std::sync::Mutex::new(Acc { reps: 0, min_pos: u64::MAX, min_mats: Vec::new(), zero: Vec::new(), all: Vec::new() });
    let classify_all = opts.classify_all;
    let (nodes, complete) = edge_minimal_family(n, d, opts.budget, &|rows: &[u32]| {
        let p = permanent_rows(rows);
        let mut a = acc.lock().unwrap();
        a.reps += 1;
        if classify_all {
            a.all.push(rows.to_vec());
        }
        if p == 0 {
            a.zero.push(rows.to_vec());
        } else if p < a.min_pos {
            a.min_pos = p;
            a.min_mats = vec![rows.to_vec()];
        } else if p == a.min_pos {
            a.min_mats.push(rows.to_vec());
        }
    });
    let mut a = acc.into_inner().unwrap();
    // Shards finish in any order; sort so class representatives are stable.
    a.min_mats.sort_unstable();
    a.zero.sort_unstable();
    a.all.sort_unstable();
    let (minimizers, _) = classify(&a.min_mats, n);
    let (zero_classes, zero_fixed) = classify(&a.zero, n);
    let (all_classes, classes, classes_fixed_sides) = if classify_all {
        let (c, f) = classify(&a.all, n);
        let len = c.len();
        (c, Some(len), Some(f))
    } else {
        (Vec::new(), None, None)
    };
    let augmented_min = if zero_classes.is_empty() {
        None
    } else {
        let perms = all_perms(n);
        zero_classes
            .iter()
            .map(|c| {
                let rows = parse_rows(&c.rows);
                perms
                    .par_iter()
                    .map(|m| {
                        let aug: Vec<u32> = (0..n).map(|i| rows[i] | 1 << m.apply(i)).collect();
                        permanent_rows(&aug)
                    })
                    .min()
                    .unwrap()
            })
            .min()
    };
    Ok(FamilyReport {
        n,
        d,
        representatives: a.reps,
        nodes,
        complete,
        classes,
        classes_fixed_sides,
        all_classes,
        min_positive: (a.min_pos != u64::MAX).then_some(a.min_pos),
        minimizers,
        zero_classes,
        zero_classes_fixed_sides: zero_fixed,
        augmented_min,
    })
}

/// Rows of a `FamilyClass` back to bitsets (bit `j` for column `j`).
fn parse_rows(rows: &[String]) -> Vec<u32> {
    rows.iter().map(|r| r.chars().enumerate().fold(0, |a, (j, c)| a | u32::from(c == '1') << j)).collect()
}

/// Whether some perfect matching uses fewer than four of the five `pairs`.
pub fn check_five_pairs(g: &BipartiteGraph, pairs: &[(usize, usize)]) -> Result<bool, DerangeError> {
    let n = g.n();
    if pairs.len() != 5 {
        return Err(DerangeError::Precondition(format!("expected 5 pairs, got {}", pairs.len())));
    }
    if pairs.iter().any(|&(i, j)| i >= n || j >= n) {
        return Err(DerangeError::Precondition("pair out of range".into()));
    }
    if g.min_degree() < 3 {
        return Err(DerangeError::Precondition("minimum degree below 3".into()));
    }
    if n > super::MAX_PERMANENT_N {
        return Err(DerangeError::TooLarge(n));
    }
    // dp[mask]: fewest marked pairs in a matching of the first popcount rows onto `mask`.
    let mut dp = vec![u8::MAX; 1 << n];
    dp[0] = 0;
    for mask in 0..(1usize << n) {
        let c = dp[mask];
        let r = mask.count_ones() as usize;
        if c == u8::MAX || r == n {
            continue;
        }
        let mut free = g.rows()[r] as usize & !mask;
        while free != 0 {
            let j = free.trailing_zeros() as usize;
            free &= free - 1;
            let cost = c + u8::from(pairs.contains(&(r, j)));
            let t = mask | 1 << j;
            dp[t] = dp[t].min(cost);
        }
    }
    match dp[(1 << n) - 1] {
        u8::MAX => Err(DerangeError::NoPerfectMatching),
        best => Ok(best < 4),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derange::PermMatrix;
    use crate::perm::Perm;
    use std::collections::BTreeSet;
    use std::sync::Mutex;

    /// Oracle: all 0/1 matrices of side `n`, filtered by the definition.
    fn brute_classes(n: usize, d: u32) -> BTreeSet<CanonicalForm> {
        let mut out = BTreeSet::new();
        for code in 0u64..1 << (n * n) {
            let rows: Vec<u32> = (0..n).map(|i| (code >> (i * n) & ((1 << n) - 1)) as u32).collect();
            let rd: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
            let cd: Vec<u32> = (0..n).map(|j| rows.iter().filter(|&&r| r >> j & 1 == 1).count() as u32).collect();
            if rd.iter().chain(&cd).any(|&x| x < d) {
                continue;
            }
            let minimal = (0..n).all(|i| (0..n).all(|j| rows[i] >> j & 1 == 0 || rd[i] == d || cd[j] == d));
            if minimal {
                out.insert(bipartite_form(&rows, n, true));
            }
        }
        out
    }

    #[test]
    fn enumeration_reaches_every_class() {
        for (n, d) in [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            let got = Mutex::new(BTreeSet::new());
            let (_, complete) = edge_minimal_family(n, d as usize, u64::MAX, &|rows: &[u32]| {
                got.lock().unwrap().insert(bipartite_form(rows, n, true));
            });
            assert!(complete);
            assert_eq!(got.into_inner().unwrap(), brute_classes(n, d), "n={n} d={d}");
        }
    }

    #[test]
    fn budget_flags_partial() {
        let r = min_permanent_family(3, &FamilyOptions { budget: 1000, ..Default::default() }).unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn degree_six_family() {
        let r = min_permanent_family(6, &FamilyOptions { classify_all: true, ..Default::default() }).unwrap();
        assert!(r.complete);
        assert_eq!(r.classes, Some(11));
        assert_eq!(r.min_positive, Some(4738));
        let mut shapes: Vec<&str> = r.minimizers.iter().map(|c| c.complement.as_str()).collect();
        shapes.sort_unstable();
        assert_eq!(shapes, ["C10+C6", "C16"]);
        assert!(r.zero_classes.is_empty());
    }

    #[test]
    fn five_pairs_examples() {
        let g = PermMatrix::new(vec![Perm::identity(8)]).unwrap().allowed_graph();
        assert_eq!(check_five_pairs(&g, &[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]), Ok(true));
        assert!(matches!(check_five_pairs(&g, &[(0, 0)]), Err(DerangeError::Precondition(_))));
        let diag = [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)];
        // Two copies of K_{4,4}: the diagonal can be avoided inside each block.
        let rows: Vec<u32> = (0..8).map(|i| if i < 4 { 0b1111 } else { 0b1111_0000 }).collect();
        assert_eq!(check_five_pairs(&BipartiteGraph::from_rows(8, rows).unwrap(), &diag), Ok(true));
        // Five left vertices see only four right ones.
        let rows: Vec<u32> = (0..8).map(|i| if i < 5 { 0b1111 } else { 0xFF }).collect();
        assert_eq!(check_five_pairs(&BipartiteGraph::from_rows(8, rows).unwrap(), &diag), Err(DerangeError::NoPerfectMatching));
    }
}
