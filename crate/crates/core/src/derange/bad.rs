//! Bad fifth rows: permutations `σ` such that the rows of `A` together with
//! `σ` have no common derangement.

use super::{has_perfect_matching_rows, DerangeError, PermMatrix};
use crate::perm::{all_perms, Perm};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct BadPermutation {
    pub perm: Perm,
    /// Every `(|I|, |N(I)|)` with `|N(I)| < |I|` in the allowed graph, sorted.
    pub deficiencies: Vec<(usize, usize)>,
    /// First of `(5,3)`, `(5,4)`, `(4,3)` present, else the largest deficiency.
    pub tag: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct BadReport {
    pub bad: Vec<BadPermutation>,
    pub by_tag: BTreeMap<String, usize>,
    /// 1, 2 or 3 by the first tag kind present among the bad rows; 0 if none.
    pub case: u8,
    /// For more than 24 bad rows: a permutation and a 5-set of positions such
    /// that every bad row agrees with it on at least four of them.
    pub agreement: Option<(Perm, Vec<usize>)>,
}

impl BadReport {
    pub fn count(&self) -> usize {
        self.bad.len()
    }
}

const TAG_ORDER: [(usize, usize); 3] = [(5, 3), (5, 4), (4, 3)];

fn check_size(a: &PermMatrix) -> Result<(), DerangeError> {
    if a.k() > 9 {
        return Err(DerangeError::TooLarge(a.k()));
    }
    Ok(())
}

/// All bad rows, each tested by searching for a perfect matching.
pub fn bad_permutations_direct(a: &PermMatrix) -> Result<Vec<Perm>, DerangeError> {
    check_size(a)?;
    let k = a.k();
    let full = (1u32 << k) - 1;
    let base: Vec<u32> = (0..k).map(|i| full & !a.column_values(i)).collect();
    let mut rows = base.clone();
    Ok(all_perms(k)
        .into_iter()
        .filter(|s| {
            for i in 0..k {
                rows[i] = base[i] & !(1 << s.apply(i));
            }
            !has_perfect_matching_rows(&rows)
        })
        .collect())
}

/// Hall deficiencies of the allowed graph of `A` plus `σ`, as
/// `(|I|, |N(I)|)` pairs over all index sets `I`.
pub fn hall_deficiencies(a: &PermMatrix, sigma: &Perm) -> Vec<(usize, usize)> {
    let cols: Vec<u32> = (0..a.k()).map(|i| a.column_values(i)).collect();
    let mut nb = Vec::new();
    deficiencies_with(&cols, sigma, &mut nb)
}

/// `nb[set]` is built from `nb[set minus its lowest element]`.
fn deficiencies_with(cols: &[u32], sigma: &Perm, nb: &mut Vec<u32>) -> Vec<(usize, usize)> {
    let k = cols.len();
    let full = (1u32 << k) - 1;
    nb.clear();
    nb.resize(1 << k, 0);
    let mut out = Vec::new();
    for set in 1u32..1 << k {
        let low = set.trailing_zeros() as usize;
        let u = nb[(set & (set - 1)) as usize] | (full & !cols[low] & !(1 << sigma.apply(low)));
        nb[set as usize] = u;
        let (i, j) = (set.count_ones() as usize, u.count_ones() as usize);
        if j < i {
            out.push((i, j));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Cheap necessary condition for any bad row to exist. A Hall violator `I`
/// for `A` plus `σ` needs at least `k - |I| + 1` values present in every
/// column of `I`. `σ` puts one value into each column, so such a value is
/// either in every column of `I` already or missing from exactly one, and
/// two values cannot both rely on the same missing column.
pub fn may_have_bad_rows(a: &PermMatrix) -> bool {
    let k = a.k();
    let cols: Vec<u32> = (0..k).map(|i| a.column_values(i)).collect();
    (1u32..1 << k).any(|set| {
        let size = set.count_ones() as usize;
        let mut everywhere = 0;
        let mut rescue_cols = 0u32;
        for v in 0..k {
            let missing: Vec<usize> = (0..k).filter(|&i| set >> i & 1 == 1 && cols[i] >> v & 1 == 0).collect();
            match missing.len() {
                0 => everywhere += 1,
                1 => rescue_cols |= 1 << missing[0],
                _ => {}
            }
        }
        everywhere + rescue_cols.count_ones() as usize + size > k
    })
}

/// Bad rows found through Hall's condition, with their deficiency tags.
pub fn bad_permutations(a: &PermMatrix) -> Result<BadReport, DerangeError> {
    check_size(a)?;
    if !may_have_bad_rows(a) {
        return Ok(BadReport { bad: Vec::new(), by_tag: BTreeMap::new(), case: 0, agreement: None });
    }
    let cols: Vec<u32> = (0..a.k()).map(|i| a.column_values(i)).collect();
    let mut nb = Vec::new();
    let mut bad = Vec::new();
    for s in all_perms(a.k()) {
        let d = deficiencies_with(&cols, &s, &mut nb);
        if d.is_empty() {
            continue;
        }
        let tag = TAG_ORDER.iter().copied().find(|t| d.contains(t)).unwrap_or(*d.last().unwrap());
        bad.push(BadPermutation { perm: s, deficiencies: d, tag });
    }
    let mut by_tag = BTreeMap::new();
    for b in &bad {
        *by_tag.entry(format!("({},{})", b.tag.0, b.tag.1)).or_insert(0) += 1;
    }
    let case = TAG_ORDER.iter().position(|t| bad.iter().any(|b| b.tag == *t)).map_or(0, |p| p as u8 + 1);
    let perms: Vec<Perm> = bad.iter().map(|b| b.perm.clone()).collect();
    let agreement = if perms.len() > 24 { agreement_witness(&perms, 5, 4) } else { None };
    Ok(BadReport { bad, by_tag, case, agreement })
}

/// A permutation `σ` and a set `I` of `size` positions such that every given
/// permutation agrees with `σ` on at least `min_agree` positions of `I`.
///
/// `σ` restricted to `I` must agree with the first permutation on all but
/// `size - min_agree` positions, so for the usual `size - min_agree = 1` the
/// candidates are the first permutation with at most one entry changed.
pub fn agreement_witness(perms: &[Perm], size: usize, min_agree: usize) -> Option<(Perm, Vec<usize>)> {
    assert!(min_agree + 1 >= size, "only one disagreement is searched");
    let first = perms.first()?;
    let k = first.k();
    let mut set: Vec<usize> = (0..size).collect();
    loop {
        // Candidate restrictions to `set`.
        let base: Vec<usize> = set.iter().map(|&i| first.apply(i)).collect();
        let mut cands = vec![base.clone()];
        if min_agree < size {
            for p in 0..size {
                for v in 0..k {
                    if v != base[p] {
                        let mut c = base.clone();
                        c[p] = v;
                        cands.push(c);
                    }
                }
            }
        }
        for c in cands {
            let injective = c.iter().enumerate().all(|(x, a)| c[x + 1..].iter().all(|b| b != a));
            if !injective {
                continue;
            }
            if perms.iter().all(|t| set.iter().zip(&c).filter(|&(&i, &v)| t.apply(i) == v).count() >= min_agree) {
                let mut images = vec![usize::MAX; k];
                for (&i, &v) in set.iter().zip(&c) {
                    images[i] = v;
                }
                let mut unused = (0..k).filter(|v| !c.contains(v));
                for x in images.iter_mut() {
                    if *x == usize::MAX {
                        *x = unused.next().unwrap();
                    }
                }
                return Some((Perm::new(images).unwrap(), set));
            }
        }
        if !next_combination(&mut set, k) {
            return None;
        }
    }
}

/// Next `c.len()`-subset of `[n]` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
