//! Common derangements of triples of permutations of `[5]`.
//!
//! Left multiplication by `p_1^{-1}` maps common derangements of
//! `(p_1, p_2, p_3)` to those of `(id, p_1^{-1} p_2, p_1^{-1} p_3)` and keeps
//! both the "derangement of each other" relation and the Latin-square shape
//! below, so the first permutation is fixed to the identity.

use crate::perm::{all_perms, Perm};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    /// Triples examined (first permutation the identity).
    pub triples: usize,
    /// Number of common derangements -> number of triples.
    pub histogram: BTreeMap<u32, usize>,
    /// Least count over pairs `(id, p)`.
    pub pair_minimum: u32,
    /// No triple has exactly one common derangement.
    pub zero_or_at_least_two: bool,
    pub exactly_two: usize,
    /// In every triple with exactly two, the two are derangements of each other.
    pub two_are_mutual_derangements: bool,
    pub zero: usize,
    /// Every triple without a common derangement has the 3-cycle shape.
    pub zero_has_cycle_shape: bool,
    /// Conversely, every triple of that shape has no common derangement.
    pub cycle_shape_forces_zero: bool,
    /// Largest number of third permutations with no common derangement, over pairs.
    pub max_blocking_choices: usize,
    pub pairs_with_two_blocking_choices: usize,
    /// When there are two such choices they are never derangements of each other.
    pub two_blocking_choices_not_mutual: bool,
}

impl TripleReport {
    pub fn all_hold(&self) -> bool {
        self.pair_minimum == 12
            && self.zero_or_at_least_two
            && self.two_are_mutual_derangements
            && self.zero_has_cycle_shape
            && self.max_blocking_choices <= 2
            && self.two_blocking_choices_not_mutual
    }
}

/// Whether `(p1, p2, p3)` arises from `p1` by cycling three values: on the
/// positions `p1` sends into the support of some 3-cycle `c`, `p2` agrees with
/// `c ∘ p1` and `p3` with `c^2 ∘ p1` (the other two positions are free).
pub fn has_cycle_shape(p1: &Perm, p2: &Perm, p3: &Perm) -> bool {
    let k = p1.k();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if a == b || b == c || a == c {
                    continue;
                }
                // The 3-cycle a -> b -> c -> a.
                let cyc = |x: usize| if x == a { b } else if x == b { c } else if x == c { a } else { x };
                let ok = (0..k).filter(|&i| [a, b, c].contains(&p1.apply(i))).all(|i| {
                    let v = p1.apply(i);
                    p2.apply(i) == cyc(v) && p3.apply(i) == cyc(cyc(v))
                });
                if ok {
                    return true;
                }
            }
        }
    }
    false
}

pub fn classify_triples_5() -> TripleReport {
    let perms = all_perms(5);
    let np = perms.len();
    // der[x] = set of permutations that are derangements of perms[x].
    let der: Vec<u128> = perms
        .iter()
        .map(|p| perms.iter().enumerate().filter(|(_, t)| t.is_derangement_of(p)).fold(0u128, |a, (j, _)| a | 1 << j))
        .collect();
    let id = 0;
    debug_assert!(perms[id].is_identity());
    let mut r = TripleReport {
        triples: 0,
        histogram: BTreeMap::new(),
        pair_minimum: u32::MAX,
        zero_or_at_least_two: true,
        exactly_two: 0,
        two_are_mutual_derangements: true,
        zero: 0,
        zero_has_cycle_shape: true,
        cycle_shape_forces_zero: true,
        max_blocking_choices: 0,
        pairs_with_two_blocking_choices: 0,
        two_blocking_choices_not_mutual: true,
    };
    for s2 in 0..np {
        let pair = der[id] & der[s2];
        r.pair_minimum = r.pair_minimum.min(pair.count_ones());
        let mut blocking = Vec::new();
        for s3 in 0..np {
            let common = pair & der[s3];
            let c = common.count_ones();
            r.triples += 1;
            *r.histogram.entry(c).or_default() += 1;
            let shaped = has_cycle_shape(&perms[id], &perms[s2], &perms[s3]);
            if shaped && c != 0 {
                r.cycle_shape_forces_zero = false;
            }
            match c {
                0 => {
                    r.zero += 1;
                    blocking.push(s3);
                    if !shaped {
                        r.zero_has_cycle_shape = false;
                    }
                }
                1 => r.zero_or_at_least_two = false,
                2 => {
                    r.exactly_two += 1;
                    let t1 = common.trailing_zeros() as usize;
                    let t2 = 127 - common.leading_zeros() as usize;
                    if !perms[t1].is_derangement_of(&perms[t2]) {
                        r.two_are_mutual_derangements = false;
                    }
                }
                _ => {}
            }
        }
        r.max_blocking_choices = r.max_blocking_choices.max(blocking.len());
        if blocking.len() == 2 {
            r.pairs_with_two_blocking_choices += 1;
            if perms[blocking[0]].is_derangement_of(&perms[blocking[1]]) {
                r.two_blocking_choices_not_mutual = false;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derange::{common_derangements, common_derangements_by_enumeration};

    #[test]
    fn examples() {
        let id = Perm::identity(5);
        assert_eq!(common_derangements(&[id.clone(), id.clone(), id.clone()]).unwrap(), 44);
        let c = Perm::new(vec![1, 2, 0, 4, 3]).unwrap();
        let c2 = Perm::new(vec![2, 0, 1, 3, 4]).unwrap();
        assert!(has_cycle_shape(&id, &c, &c2));
        assert_eq!(common_derangements(&[id.clone(), c.clone(), c2.clone()]).unwrap(), 0);
        assert!(!has_cycle_shape(&id, &c2, &Perm::identity(5)));
    }

    #[test]
    fn lemma_holds() {
        let r = classify_triples_5();
        assert_eq!(r.triples, 120 * 120);
        assert!(r.all_hold(), "{r:?}");
        assert!(r.cycle_shape_forces_zero);
        assert!(r.pairs_with_two_blocking_choices > 0);
        assert!(r.exactly_two > 0);
    }

    #[test]
    fn histogram_matches_enumeration_on_a_slice() {
        // Oracle: direct counting for triples (id, p, q) with p among the first 6.
        let perms = all_perms(5);
        let mut h: BTreeMap<u32, usize> = BTreeMap::new();
        for p in &perms[..6] {
            for q in &perms {
                let c = common_derangements_by_enumeration(&[perms[0].clone(), p.clone(), q.clone()]).unwrap();
                *h.entry(c as u32).or_default() += 1;
            }
        }
        let mut h2: BTreeMap<u32, usize> = BTreeMap::new();
        for p in &perms[..6] {
            for q in &perms {
                let c = common_derangements(&[perms[0].clone(), p.clone(), q.clone()]).unwrap();
                *h2.entry(c as u32).or_default() += 1;
            }
        }
        assert_eq!(h, h2);
        assert_eq!(h.values().sum::<usize>(), 720);
    }
}
