//! Permutations of `[k] = {0, .., k-1}` and injective arrangements.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("not a permutation: {0:?}")]
pub struct NotAPermutation(pub Vec<usize>);

/// A bijection of `[k]`; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = NotAPermutation;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm, NotAPermutation> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || seen[x] {
                return Err(NotAPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(k: usize) -> Perm {
        Perm { images: (0..k).collect() }
    }

    /// Parses one-line notation with 1-based digits, e.g. `"51234786"`.
    pub fn from_one_based(s: &str) -> Result<Perm, NotAPermutation> {
        let v: Vec<usize> = s.chars().map(|c| c.to_digit(36).map_or(usize::MAX, |d| d as usize).wrapping_sub(1)).collect();
        Perm::new(v)
    }

    pub fn to_one_based(&self) -> String {
        self.images.iter().map(|&x| std::char::from_digit(x as u32 + 1, 36).unwrap()).collect()
    }

    pub fn k(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.k()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.compose(self).compose(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Disagrees with `other` in every position.
    pub fn is_derangement_of(&self, other: &Perm) -> bool {
        self.images.iter().zip(&other.images).all(|(a, b)| a != b)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i == x).count()
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.k()];
        let mut out = Vec::new();
        for s in 0..self.k() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.k()];
        let mut out = Vec::new();
        for s in 0..self.k() {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.images[x];
            }
            out.push(c);
        }
        out
    }

    /// Lexicographic rank among all permutations of `[k]`.
    pub fn rank(&self) -> usize {
        rank_injection(&self.images, self.k())
    }

    pub fn unrank(k: usize, r: usize) -> Perm {
        Perm { images: unrank_injection(k, k, r) }
    }
}

/// All permutations of `[k]` in lexicographic order.
pub fn all_perms(k: usize) -> Vec<Perm> {
    all_arrangements(k, k).into_iter().map(|images| Perm { images }).collect()
}

/// All injections `[m] -> [k]` as image vectors, in lexicographic order.
pub fn all_arrangements(k: usize, m: usize) -> Vec<Vec<usize>> {
    assert!(m <= k);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    let mut used = vec![false; k];
    fn rec(k: usize, m: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(k, m, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(k, m, &mut cur, &mut used, &mut out);
    out
}

fn falling(k: usize, j: usize) -> usize {
    (0..j).map(|i| k - i).product()
}

/// Lexicographic rank of an injection `[m] -> [k]` (`m = a.len()`).
pub fn rank_injection(a: &[usize], k: usize) -> usize {
    let m = a.len();
    let mut used = vec![false; k];
    let mut r = 0;
    for (i, &x) in a.iter().enumerate() {
        let smaller = (0..x).filter(|&y| !used[y]).count();
        r += smaller * falling(k - i - 1, m - i - 1);
        used[x] = true;
    }
    r
}

pub fn unrank_injection(k: usize, m: usize, mut r: usize) -> Vec<usize> {
    let mut used = vec![false; k];
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let block = falling(k - i - 1, m - i - 1);
        let mut t = r / block;
        r %= block;
        let x = (0..k).find(|&y| !used[y] && {
            if t == 0 {
                true
            } else {
                t -= 1;
                false
            }
        });
        let x = x.expect("rank in range");
        used[x] = true;
        out.push(x);
    }
    out
}

/// Integer partitions of `k` (parts non-increasing).
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// The representative of a cycle type: cycles on consecutive points, longest first.
pub fn cycle_type_rep(parts: &[usize]) -> Perm {
    let k: usize = parts.iter().sum();
    let mut images: Vec<usize> = (0..k).collect();
    let mut start = 0;
    for &p in parts {
        for i in 0..p {
            images[start + i] = start + (i + 1) % p;
        }
        start += p;
    }
    Perm { images }
}

/// One permutation per conjugacy class of `S_k`, ordered by the number of moved
/// points and then by the longest cycle (for `k = 4`: identity, transposition,
/// 3-cycle, double transposition, 4-cycle).
pub fn conjugacy_reps(k: usize) -> Vec<Perm> {
    let mut parts = partitions(k);
    let moved = |p: &Vec<usize>| p.iter().filter(|&&x| x > 1).sum::<usize>();
    parts.sort_by_key(|p| (moved(p), p[0]));
    parts.iter().map(|p| cycle_type_rep(p)).collect()
}

/// Number of derangements of `[k]` (exact, checked arithmetic).
pub fn derangement_number(k: usize) -> u128 {
    let (mut a, mut b) = (1u128, 0u128); // D0, D1
    if k == 0 {
        return 1;
    }
    for n in 2..=k as u128 {
        let c = (n - 1).checked_mul(a.checked_add(b).expect("overflow")).expect("overflow");
        a = b;
        b = c;
    }
    b
}

/// Precomputed data for arrangements `[m] -> [k]`: composition with permutations
/// of `[k]` and "derangement" bitsets (`b` disagrees with `a` in every position).
#[derive(Debug)]
pub struct ArrangementTable {
    pub k: usize,
    pub m: usize,
    pub arrangements: Vec<Vec<usize>>,
    /// Words per bitset over arrangements.
    pub words: usize,
    /// `comp[pi * len + a]` = index of `pi ∘ a`.
    pub comp: Vec<u32>,
    /// `der[a * words ..]` = bitset of arrangements disagreeing with `a` everywhere.
    pub der: Vec<u64>,
    /// Index of the inverse permutation for each permutation index.
    pub perm_inverse: Vec<u32>,
}

impl ArrangementTable {
    fn build(k: usize, m: usize) -> ArrangementTable {
        let arrangements = all_arrangements(k, m);
        let len = arrangements.len();
        let words = len.div_ceil(64);
        let perms = all_perms(k);
        let mut comp = vec![0u32; perms.len() * len];
        for (pi, p) in perms.iter().enumerate() {
            for (ai, a) in arrangements.iter().enumerate() {
                let img: Vec<usize> = a.iter().map(|&x| p.apply(x)).collect();
                comp[pi * len + ai] = rank_injection(&img, k) as u32;
            }
        }
        let mut der = vec![0u64; len * words];
        for (ai, a) in arrangements.iter().enumerate() {
            for (bi, b) in arrangements.iter().enumerate() {
                if a.iter().zip(b).all(|(x, y)| x != y) {
                    der[ai * words + bi / 64] |= 1 << (bi % 64);
                }
            }
        }
        let perm_inverse = perms.iter().map(|p| p.inverse().rank() as u32).collect();
        ArrangementTable { k, m, arrangements, words, comp, der, perm_inverse }
    }

    pub fn len(&self) -> usize {
        self.arrangements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangements.is_empty()
    }

    /// Shared table for `(k, m)`, built on first use.
    pub fn get(k: usize, m: usize) -> Arc<ArrangementTable> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<ArrangementTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&(k, m)) {
            return t.clone();
        }
        let t = Arc::new(ArrangementTable::build(k, m));
        cache.lock().unwrap().entry((k, m)).or_insert(t).clone()
    }

    pub fn der_row(&self, a: usize) -> &[u64] {
        &self.der[a * self.words..(a + 1) * self.words]
    }
}
