//! Derangements, permanents and the bipartite matching counts behind them.
//!
//! A common derangement of permutations `p_1, .., p_r` of `[k]` is a perfect
//! matching of the bipartite graph on positions and values whose edge `(i, j)`
//! is present unless `j = p_t(i)` for some `t`. Every count here is therefore a
//! permanent of a 0/1 matrix, computed exactly by a subset DP.

mod bad;
mod family;
mod triples;

pub use bad::{
    agreement_witness, bad_permutations, bad_permutations_direct, hall_deficiencies, may_have_bad_rows, BadPermutation,
    BadReport,
};
pub use family::{
    check_five_pairs, edge_minimal_family, min_permanent_family, FamilyClass, FamilyOptions, FamilyReport,
};
pub use triples::{classify_triples_5, TripleReport};

use crate::perm::{all_perms, conjugacy_reps, Perm};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerangeError {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },
    #[error("size {0} is beyond the supported range")]
    TooLarge(usize),
    #[error("no permutations given")]
    Empty,
    #[error("permutations of different sizes ({0} and {1})")]
    MixedSizes(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("the graph has no perfect matching")]
    NoPerfectMatching,
}

/// Number of derangements of `[k]`.
pub fn count_derangements(k: usize) -> u128 {
    crate::perm::derangement_number(k)
}

/// Square 0/1 matrix; bit `j` of `rows[i]` is the entry `(i, j)`, read as the
/// edge between left vertex `i` and right vertex `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BipartiteGraph {
    n: usize,
    rows: Vec<u32>,
}

/// Largest side handled by the permanent DP (`2^n` states).
pub const MAX_PERMANENT_N: usize = 20;

impl BipartiteGraph {
    pub fn from_rows(n: usize, rows: Vec<u32>) -> Result<Self, DerangeError> {
        if n > 32 {
            return Err(DerangeError::TooLarge(n));
        }
        if let Some((i, _)) = rows.iter().enumerate().find(|(_, &r)| n < 32 && r >> n != 0) {
            return Err(DerangeError::NonSquare { rows: rows.len(), row: i, len: 32 - rows[i].leading_zeros() as usize });
        }
        if rows.len() != n {
            return Err(DerangeError::NonSquare { rows: rows.len(), row: rows.len().min(n), len: n });
        }
        Ok(BipartiteGraph { n, rows })
    }

    pub fn from_matrix(m: &[Vec<u8>]) -> Result<Self, DerangeError> {
        let n = m.len();
        if n > 32 {
            return Err(DerangeError::TooLarge(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, r) in m.iter().enumerate() {
            if r.len() != n {
                return Err(DerangeError::NonSquare { rows: n, row: i, len: r.len() });
            }
            let mut bits = 0u32;
            for (j, &x) in r.iter().enumerate() {
                match x {
                    0 => {}
                    1 => bits |= 1 << j,
                    _ => return Err(DerangeError::Parse(format!("entry ({i},{j}) is {x}, expected 0 or 1"))),
                }
            }
            rows.push(bits);
        }
        Ok(BipartiteGraph { n, rows })
    }

    /// Matrix file: `n`, then `n` rows of 0/1 (digits may be separated by
    /// spaces). Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, DerangeError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| DerangeError::Parse("empty input".into()))?
            .parse()
            .map_err(|e| DerangeError::Parse(format!("size line: {e}")))?;
        let mut m = Vec::new();
        for l in lines {
            let row: Result<Vec<u8>, _> = l
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| DerangeError::Parse(format!("bad character {c:?}"))))
                .collect();
            m.push(row?);
        }
        if m.len() != n {
            return Err(DerangeError::NonSquare { rows: m.len(), row: m.len().min(n), len: n });
        }
        Self::from_matrix(&m)
    }

    pub fn complete(n: usize) -> Self {
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        BipartiteGraph { n, rows: vec![full; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|j| self.rows.iter().filter(|&&r| r >> j & 1 == 1).count()).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.left_degrees().into_iter().chain(self.right_degrees()).min().unwrap_or(0)
    }

    /// Bipartite complement inside `K_{n,n}`.
    pub fn complement(&self) -> Self {
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        BipartiteGraph { n: self.n, rows: self.rows.iter().map(|r| !r & full).collect() }
    }

    pub fn to_matrix_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for r in &self.rows {
            for j in 0..self.n {
                s.push(if r >> j & 1 == 1 { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

/// Number of perfect matchings.
pub fn permanent(g: &BipartiteGraph) -> Result<u64, DerangeError> {
    if g.n > MAX_PERMANENT_N {
        return Err(DerangeError::TooLarge(g.n));
    }
    Ok(permanent_rows(&g.rows))
}

/// Subset DP over matched columns: row `popcount(mask)` is matched next.
pub(crate) fn permanent_rows(rows: &[u32]) -> u64 {
    let n = rows.len();
    let mut dp = vec![0u64; 1 << n];
    dp[0] = 1;
    for mask in 0..(1usize << n) {
        let c = dp[mask];
        if c == 0 {
            continue;
        }
        let r = mask.count_ones() as usize;
        if r == n {
            continue;
        }
        let mut free = rows[r] as usize & !mask;
        while free != 0 {
            let j = free.trailing_zeros();
            free &= free - 1;
            let t = mask | 1 << j;
            dp[t] = dp[t].checked_add(c).expect("permanent fits in u64");
        }
    }
    dp[(1 << n) - 1]
}

/// Kuhn's augmenting paths; cheaper than counting when only existence matters.
pub(crate) fn has_perfect_matching_rows(rows: &[u32]) -> bool {
    let n = rows.len();
    let mut match_r = [usize::MAX; 32];
    fn aug(u: usize, rows: &[u32], seen: &mut u32, match_r: &mut [usize; 32]) -> bool {
        let mut cand = rows[u] & !*seen;
        while cand != 0 {
            let j = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            *seen |= 1 << j;
            if match_r[j] == usize::MAX || aug(match_r[j], rows, seen, match_r) {
                match_r[j] = u;
                return true;
            }
        }
        false
    }
    (0..n).all(|u| {
        let mut seen = 0u32;
        aug(u, rows, &mut seen, &mut match_r)
    })
}

/// Rows that are permutations of the same `[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermMatrix {
    k: usize,
    rows: Vec<Perm>,
}

impl PermMatrix {
    pub fn new(rows: Vec<Perm>) -> Result<Self, DerangeError> {
        let k = rows.first().ok_or(DerangeError::Empty)?.k();
        if let Some(p) = rows.iter().find(|p| p.k() != k) {
            return Err(DerangeError::MixedSizes(k, p.k()));
        }
        if k > 32 {
            return Err(DerangeError::TooLarge(k));
        }
        Ok(PermMatrix { k, rows })
    }

    /// One permutation per string, 1-based one-line notation.
    pub fn from_one_based(rows: &[&str]) -> Result<Self, DerangeError> {
        let ps: Result<Vec<Perm>, _> = rows.iter().map(|s| Perm::from_one_based(s)).collect();
        Self::new(ps.map_err(|e| DerangeError::Parse(e.to_string()))?)
    }

    /// Permutation file: one permutation per line, either a run of 1-based
    /// digits (`51234786`) or whitespace/comma separated 1-based entries.
    pub fn parse(text: &str) -> Result<Self, DerangeError> {
        let mut rows = Vec::new();
        for l in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let p = if l.contains(|c: char| c.is_whitespace() || c == ',') {
                let v: Result<Vec<usize>, _> =
                    l.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(str::parse::<usize>).collect();
                let v = v.map_err(|e| DerangeError::Parse(format!("{l:?}: {e}")))?;
                if v.contains(&0) {
                    return Err(DerangeError::Parse(format!("{l:?}: entries are 1-based")));
                }
                Perm::new(v.into_iter().map(|x| x - 1).collect())
            } else {
                Perm::from_one_based(l)
            };
            rows.push(p.map_err(|e| DerangeError::Parse(e.to_string()))?);
        }
        Self::new(rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Perm] {
        &self.rows
    }

    pub fn with_row(&self, p: Perm) -> Result<Self, DerangeError> {
        let mut rows = self.rows.clone();
        rows.push(p);
        Self::new(rows)
    }

    /// Bitset of values in column `i`.
    pub fn column_values(&self, i: usize) -> u32 {
        self.rows.iter().fold(0, |a, p| a | 1 << p.apply(i))
    }

    /// The graph whose perfect matchings are the common derangements:
    /// position `i` is joined to value `j` unless `j` occurs in column `i`.
    pub fn allowed_graph(&self) -> BipartiteGraph {
        let full = if self.k == 32 { u32::MAX } else { (1u32 << self.k) - 1 };
        BipartiteGraph { n: self.k, rows: (0..self.k).map(|i| full & !self.column_values(i)).collect() }
    }
}

/// Number of permutations disagreeing with every given one in every position.
pub fn common_derangements(perms: &[Perm]) -> Result<u64, DerangeError> {
    permanent(&PermMatrix::new(perms.to_vec())?.allowed_graph())
}

/// Same count by listing all of `S_k`; the independent path for small `k`.
pub fn common_derangements_by_enumeration(perms: &[Perm]) -> Result<u64, DerangeError> {
    let a = PermMatrix::new(perms.to_vec())?;
    if a.k > 9 {
        return Err(DerangeError::TooLarge(a.k));
    }
    Ok(all_perms(a.k).iter().filter(|t| a.rows.iter().all(|p| t.is_derangement_of(p))).count() as u64)
}

/// Minimum number of common derangements over all pairs of permutations of
/// `[k]`, with a pair attaining it. Replacing every permutation `p` by
/// `h ∘ p ∘ g` maps common derangements bijectively, so the first can be the
/// identity and the second a conjugacy class representative.
pub fn min_common_derangements_of_pairs(k: usize) -> Result<(u64, Perm), DerangeError> {
    if k == 0 || k > MAX_PERMANENT_N {
        return Err(DerangeError::TooLarge(k));
    }
    let id = Perm::identity(k);
    let mut best: Option<(u64, Perm)> = None;
    for s in conjugacy_reps(k) {
        let c = common_derangements(&[id.clone(), s.clone()])?;
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, s));
        }
    }
    Ok(best.expect("S_k is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Counts perfect matchings by trying every permutation.
    fn brute_perm(rows: &[u32]) -> u64 {
        all_perms(rows.len()).iter().filter(|p| (0..rows.len()).all(|i| rows[i] >> p.apply(i) & 1 == 1)).count() as u64
    }

    #[test]
    fn derangement_numbers() {
        assert_eq!(count_derangements(5), 44);
        assert_eq!(count_derangements(8), 14833);
        assert_eq!(count_derangements(4), 9);
        assert_eq!(count_derangements(0), 1);
        assert_eq!(count_derangements(1), 0);
    }

    #[test]
    fn permanent_examples() {
        assert_eq!(permanent(&BipartiteGraph::complete(8)).unwrap(), 40320);
        let id_free = PermMatrix::new(vec![Perm::identity(8)]).unwrap().allowed_graph();
        assert_eq!(permanent(&id_free).unwrap(), 14833);
        // Complement of a 16-cycle: position i misses values i and i+1.
        let rows: Vec<u32> = (0..8).map(|i| 0xFF & !(1u32 << i | 1 << ((i + 1) % 8))).collect();
        assert_eq!(permanent(&BipartiteGraph::from_rows(8, rows).unwrap()).unwrap(), 4738);
        assert_eq!(permanent(&BipartiteGraph::from_rows(0, vec![]).unwrap()).unwrap(), 1);
    }

    #[test]
    fn permanent_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let rows: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
            assert_eq!(permanent_rows(&rows), brute_perm(&rows));
            assert_eq!(has_perfect_matching_rows(&rows), brute_perm(&rows) > 0);
        }
    }

    #[test]
    fn parse_and_errors() {
        let g = BipartiteGraph::parse("# demo\n3\n110\n0 1 1\n1,0,1\n").unwrap();
        assert_eq!(permanent(&g).unwrap(), 2);
        assert_eq!(BipartiteGraph::parse(&g.to_matrix_text()).unwrap(), g);
        assert!(matches!(BipartiteGraph::parse("2\n11\n1\n"), Err(DerangeError::NonSquare { .. })));
        assert!(matches!(BipartiteGraph::parse("2\n11\n"), Err(DerangeError::NonSquare { .. })));
        assert!(matches!(BipartiteGraph::from_matrix(&[vec![1, 2], vec![0, 1]]), Err(DerangeError::Parse(_))));
        let a = PermMatrix::parse("51234786\n4 5 1 2 3 6 7 8\n").unwrap();
        assert_eq!(a.rows()[1].to_one_based(), "45123678");
        assert!(PermMatrix::parse("123\n1234\n").is_err());
        assert!(PermMatrix::parse("113\n").is_err());
    }

    #[test]
    fn common_derangement_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(1..=7);
            let r = rng.gen_range(1..=4);
            let ps: Vec<Perm> = (0..r)
                .map(|_| {
                    let mut v: Vec<usize> = (0..k).collect();
                    v.shuffle(&mut rng);
                    Perm::new(v).unwrap()
                })
                .collect();
            assert_eq!(common_derangements(&ps).unwrap(), common_derangements_by_enumeration(&ps).unwrap());
        }
        assert_eq!(common_derangements(&[Perm::identity(5)]).unwrap(), 44);
    }

    #[test]
    fn pair_minimum_for_five() {
        // Oracle: every pair of permutations of [5], counted by enumeration.
        let all = all_perms(5);
        let mut m = u64::MAX;
        for p in &all {
            for q in &all {
                m = m.min(all.iter().filter(|t| t.is_derangement_of(p) && t.is_derangement_of(q)).count() as u64);
            }
        }
        assert_eq!(m, 12);
        assert_eq!(min_common_derangements_of_pairs(5).unwrap().0, 12);
    }

    #[test]
    fn pair_minimum_for_eight() {
        let (m, s) = min_common_derangements_of_pairs(8).unwrap();
        assert_eq!(m, 4738);
        assert_eq!(common_derangements_by_enumeration(&[Perm::identity(8), s]).unwrap(), 4738);
    }
}
