//! Fractional packings of covers of cycles with lists of sizes 2 and 3, and
//! the twelve-row mixture used for series joins.

use super::{frac, is_fractionally_packable, FracError};
use crate::cover::Cover;
use crate::graph::Graph;
use crate::Rational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct CycleProfileReport {
    pub n: usize,
    /// Placements of three 3-lists up to rotation and reflection.
    pub profiles: usize,
    pub covers_checked: usize,
    pub all_feasible: bool,
    pub first_infeasible: Option<Cover>,
    /// Placements of exactly two 3-lists up to symmetry.
    pub two_three_profiles: usize,
    /// How many of them have a cover with no fractional packing.
    pub two_three_with_witness: usize,
    pub witness: Option<Cover>,
}

/// Least image of a placement bitmask under the dihedral group of `C_n`.
fn canonical_mask(mask: u32, n: usize) -> u32 {
    let bit = |m: u32, i: usize| m >> i & 1;
    let mut best = u32::MAX;
    for r in 0..n {
        for refl in [false, true] {
            let mut img = 0;
            for i in 0..n {
                let j = if refl { (n - i + r) % n } else { (i + r) % n };
                img |= bit(mask, i) << j;
            }
            best = best.min(img);
        }
    }
    best
}

/// All injections of `[a]` into `[b]`, `a <= b`.
fn injections(a: usize, b: usize) -> Vec<Vec<usize>> {
    fn go(a: usize, b: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        for j in 0..b {
            if !cur.contains(&j) {
                cur.push(j);
                go(a, b, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(a, b, &mut Vec::new(), &mut out);
    out
}

/// Maximum matchings between lists of sizes `a` and `b`, as pairs.
fn maximum_matchings(a: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
    if a <= b {
        injections(a, b).into_iter().map(|f| f.into_iter().enumerate().collect()).collect()
    } else {
        injections(b, a).into_iter().map(|f| f.into_iter().enumerate().map(|(j, i)| (i, j)).collect()).collect()
    }
}

/// Every cover of `C_n` with the given list sizes and maximum matchings, up to
/// relabelling the lists along the path `0, 1, ..., n-1`. Adding matching edges
/// never helps, so these cover all cases that matter for feasibility.
fn cycle_covers(sizes: &[usize]) -> Vec<Cover> {
    let n = sizes.len();
    let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
    // Per path edge, the possible matchings after relabelling the later list.
    let options: Vec<Vec<Vec<(usize, usize)>>> = (0..n - 1)
        .map(|i| {
            let (a, b) = (sizes[i], sizes[i + 1]);
            if a <= b {
                vec![(0..a).map(|j| (j, j)).collect()]
            } else {
                // Sizes 3 then 2: the later list meets all but one earlier colour.
                assert_eq!(a, b + 1, "only list sizes 2 and 3 are supported");
                (0..a)
                    .map(|skip| (0..a).filter(|&x| x != skip).enumerate().map(|(j, x)| (x, j)).collect())
                    .collect()
            }
        })
        .collect();
    let closing = maximum_matchings(sizes[n - 1], sizes[0]);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n - 1];
    loop {
        for cl in &closing {
            let mut ms: Vec<((usize, usize), Vec<(usize, usize)>)> =
                (0..n - 1).map(|i| ((i, i + 1), options[i][idx[i]].clone())).collect();
            ms.push(((n - 1, 0), cl.clone()));
            out.push(Cover::new(g.clone(), sizes.to_vec(), &ms).unwrap());
        }
        let mut p = 0;
        while p < n - 1 {
            idx[p] += 1;
            if idx[p] < options[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == n - 1 {
            return out;
        }
    }
}

fn sizes_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).map(|i| if mask >> i & 1 == 1 { 3 } else { 2 }).collect()
}

/// Checks all covers of `C_n` with three 3-lists and the rest 2-lists, and
/// looks for an infeasible cover with only two 3-lists for every placement.
pub fn cycle_profiles(n: usize) -> Result<CycleProfileReport, FracError> {
    if !(3..=8).contains(&n) {
        return Err(FracError::Precondition("cycle length must be between 3 and 8".into()));
    }
    let masks = |ones: u32| -> Vec<u32> {
        (0u32..1 << n).filter(|m| m.count_ones() == ones && canonical_mask(*m, n) == *m).collect()
    };
    let mut r = CycleProfileReport {
        n,
        profiles: 0,
        covers_checked: 0,
        all_feasible: true,
        first_infeasible: None,
        two_three_profiles: 0,
        two_three_with_witness: 0,
        witness: None,
    };
    for mask in masks(3) {
        r.profiles += 1;
        for c in cycle_covers(&sizes_of(mask, n)) {
            r.covers_checked += 1;
            if !is_fractionally_packable(&c)? {
                r.all_feasible = false;
                r.first_infeasible.get_or_insert(c);
            }
        }
    }
    for mask in masks(2) {
        r.two_three_profiles += 1;
        for c in cycle_covers(&sizes_of(mask, n)) {
            if !is_fractionally_packable(&c)? {
                r.two_three_with_witness += 1;
                r.witness.get_or_insert(c);
                break;
            }
        }
    }
    Ok(r)
}

/// Rows `(c(x1), c(x2), c(y2))` with their weights.
pub const MIXTURE_ROWS: [([u8; 3], (i64, i64)); 12] = [
    ([1, 2, 1], (1, 18)),
    ([1, 2, 3], (1, 9)),
    ([1, 3, 1], (1, 18)),
    ([1, 3, 2], (1, 9)),
    ([2, 1, 2], (1, 18)),
    ([2, 1, 3], (1, 9)),
    ([2, 3, 1], (1, 9)),
    ([2, 3, 2], (1, 18)),
    ([3, 1, 2], (1, 9)),
    ([3, 1, 3], (1, 18)),
    ([3, 2, 1], (1, 9)),
    ([3, 2, 3], (1, 18)),
];

#[derive(Clone, Debug, Serialize)]
pub struct Table2Report {
    #[serde(serialize_with = "crate::ratser::ser")]
    pub total: Rational,
    /// Keys are `"a,b"`.
    #[serde(serialize_with = "crate::ratser::ser")]
    pub x1_x2: BTreeMap<String, Rational>,
    #[serde(serialize_with = "crate::ratser::ser")]
    pub x2_y2: BTreeMap<String, Rational>,
    #[serde(serialize_with = "crate::ratser::ser")]
    pub x1_y2: BTreeMap<String, Rational>,
    pub ok: bool,
}

/// Marginals of the twelve-row mixture: every proper pair on `x1 x2` and on
/// `x2 y2` gets `1/6`, every pair on `x1 y2` gets `1/9`.
pub fn verify_table2() -> Table2Report {
    let mut total = Rational::zero();
    let mut x1_x2 = BTreeMap::new();
    let mut x2_y2 = BTreeMap::new();
    let mut x1_y2 = BTreeMap::new();
    let key = |a: u8, b: u8| format!("{a},{b}");
    for (row, (p, q)) in MIXTURE_ROWS {
        let w = Rational::new(p.into(), q.into());
        total += &w;
        *x1_x2.entry(key(row[0], row[1])).or_insert_with(Rational::zero) += &w;
        *x2_y2.entry(key(row[1], row[2])).or_insert_with(Rational::zero) += &w;
        *x1_y2.entry(key(row[0], row[2])).or_insert_with(Rational::zero) += &w;
    }
    let mut ok = total == Rational::one();
    for a in 1..=3u8 {
        for b in 1..=3u8 {
            let get = |m: &BTreeMap<String, Rational>| m.get(&key(a, b)).cloned().unwrap_or_else(Rational::zero);
            let proper = if a != b { frac(1, 6) } else { Rational::zero() };
            ok &= get(&x1_x2) == proper && get(&x2_y2) == proper && get(&x1_y2) == frac(1, 9);
        }
    }
    Table2Report { total, x1_x2, x2_y2, x1_y2, ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::full_identity_cover;
    use crate::frac::{has_fractional_packing, FracResult};

    #[test]
    fn mixture_marginals() {
        let r = verify_table2();
        assert!(r.ok);
        assert_eq!(r.total, Rational::one());
        assert_eq!(r.x1_x2["1,2"], frac(1, 6));
        assert_eq!(r.x1_y2["1,1"], frac(1, 9));
    }

    #[test]
    fn masks_up_to_symmetry() {
        let count = |n: usize, k: u32| (0u32..1 << n).filter(|m| m.count_ones() == k && canonical_mask(*m, n) == *m).count();
        assert_eq!(count(6, 3), 3);
        assert_eq!(count(5, 2), 2);
        assert_eq!(count(4, 3), 1);
    }

    #[test]
    fn matchings_are_maximum() {
        assert_eq!(maximum_matchings(2, 3).len(), 6);
        assert_eq!(maximum_matchings(3, 2).len(), 6);
        assert_eq!(maximum_matchings(3, 3).len(), 6);
        assert_eq!(cycle_covers(&[3, 3, 3, 2]).len(), 3 * 6);
    }

    #[test]
    fn c4_three_three_lists() {
        let r = cycle_profiles(4).unwrap();
        assert!(r.all_feasible);
        assert_eq!(r.two_three_with_witness, r.two_three_profiles);
    }

    #[test]
    fn c5_witness_with_two_three_lists() {
        let r = cycle_profiles(5).unwrap();
        assert!(r.all_feasible);
        let w = r.witness.unwrap();
        assert_eq!(w.sizes().iter().filter(|&&s| s == 3).count(), 2);
        assert!(!is_fractionally_packable(&w).unwrap());
    }

    #[test]
    fn triangle_full_identity() {
        let c = full_identity_cover(&Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap(), 3);
        match has_fractional_packing(&c).unwrap() {
            FracResult::Packing(d) => {
                assert!(d.validate(&c));
                assert!(d.support.len() <= 6);
            }
            r => panic!("{r:?}"),
        }
    }
}
