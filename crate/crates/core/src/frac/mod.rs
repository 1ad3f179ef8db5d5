//! Fractional packings: probability distributions on independent transversals
//! in which every element of `L(v)` is chosen with probability `1/|L(v)|`.
//!
//! Feasibility is decided by an exact LP over the transversal columns. When it
//! fails the solver returns a certificate: a fractional clique of the cover
//! graph heavier than the largest list when one exists, otherwise the raw
//! Farkas vector of the marginal equations.

mod compose;
mod cycles;
pub mod lp;

pub use compose::{
    compose_via_t, extension_lp, suppress_degree2, Hypothesis, Suppression, SuppressionCase, SuppressReport,
};
pub use cycles::{cycle_profiles, verify_table2, CycleProfileReport, Table2Report};

use crate::cover::{Cover, Matching};
use crate::packing::{enumerate_transversals, Packing};
use crate::Rational;
use lp::{Column, LpOutcome};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default cap on transversal columns.
pub const TRANSVERSAL_LIMIT: usize = 200_000;

/// Cap on maximal independent sets for the clique LP.
const INDEPENDENT_SET_LIMIT: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FracError {
    #[error("more than {0} independent transversals")]
    TooManyTransversals(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(Hypothesis),
    #[error("the composed distribution does not have the required marginals")]
    CompositionFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalDistribution {
    /// One list index per vertex.
    pub support: Vec<Vec<usize>>,
    #[serde(serialize_with = "crate::ratser::ser")]
    pub weights: Vec<Rational>,
}

impl TransversalDistribution {
    /// Drops zero weights and merges repeated transversals.
    pub fn new(pairs: impl IntoIterator<Item = (Vec<usize>, Rational)>) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (t, w) in pairs {
            *map.entry(t).or_insert_with(Rational::zero) += w;
        }
        let (support, weights) = map.into_iter().filter(|(_, w)| !w.is_zero()).unzip();
        TransversalDistribution { support, weights }
    }

    /// `P(index i chosen at v)`.
    pub fn marginal(&self, v: usize, i: usize) -> Rational {
        self.support.iter().zip(&self.weights).filter(|(t, _)| t[v] == i).fold(Rational::zero(), |s, (_, w)| s + w)
    }

    /// Checks every defining property exactly.
    pub fn validate(&self, c: &Cover) -> bool {
        if self.support.len() != self.weights.len() || self.weights.iter().any(|w| w.is_negative()) {
            return false;
        }
        if !self.support.iter().all(|t| c.is_transversal(t)) {
            return false;
        }
        if self.weights.iter().fold(Rational::zero(), |s, w| s + w) != Rational::one() {
            return false;
        }
        let (total, off) = c.offsets();
        let mut marg = vec![Rational::zero(); total];
        for (t, w) in self.support.iter().zip(&self.weights) {
            for (v, &i) in t.iter().enumerate() {
                marg[off[v] + i] += w;
            }
        }
        (0..c.n()).all(|v| (0..c.size(v)).all(|i| marg[off[v] + i] == Rational::new(1.into(), c.size(v).into())))
    }
}

/// Weights on the cover vertices, `weights[v][i]` for index `i` of `L(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FractionalClique {
    #[serde(serialize_with = "crate::ratser::ser")]
    pub weights: Vec<Vec<Rational>>,
    #[serde(serialize_with = "crate::ratser::ser")]
    pub total: Rational,
}

impl FractionalClique {
    pub fn new(weights: Vec<Vec<Rational>>) -> Self {
        let total = weights.iter().flatten().fold(Rational::zero(), |s, w| s + w);
        FractionalClique { weights, total }
    }
}

/// `y` on the cover vertices with `sum_{x in I} y_x <= 0` for every
/// independent transversal `I` and `sum_x y_x / |L(v_x)| > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FarkasCertificate {
    #[serde(serialize_with = "crate::ratser::ser")]
    pub y: Vec<Vec<Rational>>,
}

impl FarkasCertificate {
    pub fn verify(&self, c: &Cover) -> Result<bool, FracError> {
        let ts = transversals(c, TRANSVERSAL_LIMIT)?;
        let ok_cols = ts.iter().all(|t| {
            let s = t.iter().enumerate().fold(Rational::zero(), |s, (v, &i)| s + &self.y[v][i]);
            !s.is_positive()
        });
        let rhs = self.y.iter().enumerate().fold(Rational::zero(), |s, (v, ys)| {
            s + ys.iter().fold(Rational::zero(), |a, b| a + b) / Rational::from_integer(c.size(v).into())
        });
        Ok(ok_cols && rhs.is_positive())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    Clique(FractionalClique),
    Farkas(FarkasCertificate),
    /// Some list is empty after reduction.
    EmptyList(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FracResult {
    Packing(TransversalDistribution),
    Infeasible(Certificate),
}

impl FracResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FracResult::Packing(_))
    }
}

fn transversals(c: &Cover, limit: usize) -> Result<Vec<Vec<usize>>, FracError> {
    enumerate_transversals(c, limit).map_err(|_| FracError::TooManyTransversals(limit))
}

fn frac(p: usize, q: usize) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Marginal equations: one row per cover vertex, one column per transversal.
fn marginal_system(c: &Cover, ts: &[Vec<usize>]) -> (Vec<Column>, Vec<Rational>) {
    let (total, off) = c.offsets();
    let cols = ts.iter().map(|t| t.iter().enumerate().map(|(v, &i)| (off[v] + i, Rational::one())).collect()).collect();
    let mut b = vec![Rational::zero(); total];
    for v in 0..c.n() {
        for i in 0..c.size(v) {
            b[off[v] + i] = frac(1, c.size(v));
        }
    }
    (cols, b)
}

fn per_vertex(c: &Cover, flat: &[Rational]) -> Vec<Vec<Rational>> {
    let (_, off) = c.offsets();
    (0..c.n()).map(|v| flat[off[v]..off[v] + c.size(v)].to_vec()).collect()
}

/// Decides whether `c` has a fractional packing.
pub fn has_fractional_packing(c: &Cover) -> Result<FracResult, FracError> {
    has_fractional_packing_with_limit(c, TRANSVERSAL_LIMIT)
}

pub fn has_fractional_packing_with_limit(c: &Cover, limit: usize) -> Result<FracResult, FracError> {
    let ts = transversals(c, limit)?;
    let (cols, b) = marginal_system(c, &ts);
    match lp::feasible_point(&cols, &b) {
        Ok(x) => Ok(FracResult::Packing(TransversalDistribution::new(ts.into_iter().zip(x)))),
        Err(y) => {
            let k = *c.sizes().iter().max().unwrap_or(&0);
            if let Some(clique) = fractional_clique(c) {
                if clique.total > Rational::from_integer(k.into()) {
                    return Ok(FracResult::Infeasible(Certificate::Clique(clique)));
                }
            }
            Ok(FracResult::Infeasible(Certificate::Farkas(FarkasCertificate { y: per_vertex(c, &y) })))
        }
    }
}

/// Feasibility only.
pub fn is_fractionally_packable(c: &Cover) -> Result<bool, FracError> {
    let ts = transversals(c, TRANSVERSAL_LIMIT)?;
    let (cols, b) = marginal_system(c, &ts);
    Ok(lp::feasible_point(&cols, &b).is_ok())
}

/// Maximal independent sets of the cover graph as bitsets (at most 128 vertices).
fn maximal_independent_sets(c: &Cover, limit: usize) -> Option<Vec<u128>> {
    let adj = c.cover_graph();
    let n = adj.len();
    if n > 128 {
        return None;
    }
    let all: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    // Neighbourhoods in the complement.
    let non: Vec<u128> = adj
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let nb = a.iter().fold(0u128, |s, &y| s | 1 << y);
            all & !nb & !(1 << x)
        })
        .collect();
    let mut out = Vec::new();
    // Bron-Kerbosch with pivoting on the complement.
    fn bk(r: u128, mut p: u128, mut x: u128, non: &[u128], out: &mut Vec<u128>, limit: usize) -> bool {
        if p == 0 && x == 0 {
            out.push(r);
            return out.len() <= limit;
        }
        let px = p | x;
        let mut best = 0u128;
        let mut best_count = -1i32;
        let mut s = px;
        while s != 0 {
            let u = s.trailing_zeros() as usize;
            s &= s - 1;
            let cnt = (p & non[u]).count_ones() as i32;
            if cnt > best_count {
                best_count = cnt;
                best = non[u];
            }
        }
        let mut cand = p & !best;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if !bk(r | 1 << v, p & non[v], x & non[v], non, out, limit) {
                return false;
            }
            p &= !(1 << v);
            x |= 1 << v;
        }
        true
    }
    bk(0, all, 0, &non, &mut out, limit).then_some(out)
}

/// Fractional chromatic number of the cover graph with an optimal fractional
/// clique, from the LP over maximal independent sets.
pub fn fractional_clique(c: &Cover) -> Option<FractionalClique> {
    let sets = maximal_independent_sets(c, INDEPENDENT_SET_LIMIT)?;
    let (total, _) = c.offsets();
    // min sum lambda_S  s.t.  sum_{S ∋ x} lambda_S - s_x = 1.
    let mut cols: Vec<Column> = sets
        .iter()
        .map(|&s| (0..total).filter(|&x| s >> x & 1 == 1).map(|x| (x, Rational::one())).collect())
        .collect();
    let mut cost = vec![Rational::one(); cols.len()];
    for x in 0..total {
        cols.push(vec![(x, -Rational::one())]);
        cost.push(Rational::zero());
    }
    match lp::solve(&cols, &vec![Rational::one(); total], &cost) {
        LpOutcome::Optimal { y, .. } => Some(FractionalClique::new(per_vertex(c, &y))),
        _ => None,
    }
}

/// Heaviest independent set of the cover graph under `w` (at most one index
/// per list), by branch and bound.
pub fn max_weight_independent(c: &Cover, w: &[Vec<Rational>]) -> (Rational, Vec<Option<usize>>) {
    let n = c.n();
    // Suffix sums of the per-vertex maxima bound what the rest can add.
    let best_at: Vec<Rational> =
        w.iter().map(|ws| ws.iter().filter(|x| x.is_positive()).max().cloned().unwrap_or_else(Rational::zero)).collect();
    let mut suffix = vec![Rational::zero(); n + 1];
    for v in (0..n).rev() {
        suffix[v] = &suffix[v + 1] + &best_at[v];
    }
    struct St<'a> {
        c: &'a Cover,
        w: &'a [Vec<Rational>],
        suffix: Vec<Rational>,
        cur: Vec<Option<usize>>,
        best: Rational,
        best_set: Vec<Option<usize>>,
    }
    fn go(st: &mut St, v: usize, acc: Rational) {
        if acc > st.best {
            st.best = acc.clone();
            st.best_set = st.cur.clone();
        }
        if v == st.c.n() || &acc + &st.suffix[v] <= st.best {
            return;
        }
        for i in 0..st.c.size(v) {
            if !st.w[v][i].is_positive() {
                continue;
            }
            let clash = st.c.base().neighbors(v).iter().any(|&u| {
                st.cur[u].is_some_and(|j| st.c.partner(u, j, v) == Some(i))
            });
            if clash {
                continue;
            }
            st.cur[v] = Some(i);
            let next = &acc + &st.w[v][i];
            go(st, v + 1, next);
            st.cur[v] = None;
        }
        go(st, v + 1, acc);
    }
    let mut st = St { c, w, suffix, cur: vec![None; n], best: Rational::zero(), best_set: vec![None; n] };
    go(&mut st, 0, Rational::zero());
    (st.best, st.best_set)
}

/// Whether `w` is a fractional clique of the cover graph, and its total.
pub fn verify_fractional_clique(c: &Cover, w: &FractionalClique) -> (bool, Rational) {
    let total = w.weights.iter().flatten().fold(Rational::zero(), |s, x| s + x);
    let shaped = w.weights.len() == c.n() && w.weights.iter().zip(c.sizes()).all(|(ws, &s)| ws.len() == s);
    if !shaped {
        return (false, total);
    }
    let in_range = w.weights.iter().flatten().all(|x| !x.is_negative() && *x <= Rational::one());
    let ok = in_range && max_weight_independent(c, &w.weights).0 <= Rational::one();
    (ok, total)
}

/// Whether adding `added` unmatched colours to `L(v)` keeps a feasible cover feasible.
pub fn check_monotonicity(c: &Cover, v: usize, added: usize) -> Result<bool, FracError> {
    if v >= c.n() {
        return Err(FracError::Precondition(format!("no vertex {v}")));
    }
    if !is_fractionally_packable(c)? {
        return Err(FracError::Precondition("the cover has no fractional packing".into()));
    }
    is_fractionally_packable(&c.with_larger_list(v, added))
}

/// The uniform distribution on the rows of a packing.
pub fn uniform_from_packing(p: &Packing) -> TransversalDistribution {
    let w = frac(1, p.k);
    TransversalDistribution::new((0..p.k).map(|r| (p.row(r), w.clone())))
}

/// Adds matching edges until every matching has size `min(|L(u)|, |L(v)|)`,
/// pairing unmatched indices in increasing order.
pub fn augment_matchings(c: &Cover) -> Cover {
    let ms: Vec<Matching> = c
        .base()
        .edges()
        .iter()
        .zip(c.matchings())
        .map(|(&(u, v), m)| {
            let mut pairs = m.pairs();
            let free_u: Vec<usize> = (0..c.size(u)).filter(|&i| m.fwd[i].is_none()).collect();
            let free_v: Vec<usize> = (0..c.size(v)).filter(|&j| m.bwd[j].is_none()).collect();
            pairs.extend(free_u.into_iter().zip(free_v));
            Matching::from_pairs(c.size(u), c.size(v), &pairs).unwrap()
        })
        .collect();
    Cover::from_matchings(c.base().clone(), c.sizes().to_vec(), ms).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::full_identity_cover;
    use crate::graph::Graph;
    use crate::packing::find_packing;

    #[test]
    fn k2_identity_is_uniform() {
        let c = full_identity_cover(&Graph::new(2, [(0, 1)]).unwrap(), 2);
        match has_fractional_packing(&c).unwrap() {
            FracResult::Packing(d) => {
                assert!(d.validate(&c));
                assert_eq!(d.support, vec![vec![0, 1], vec![1, 0]]);
                assert_eq!(d.weights, vec![frac(1, 2), frac(1, 2)]);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn triangle_two_fold_has_clique_certificate() {
        let c = full_identity_cover(&Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap(), 2);
        match has_fractional_packing(&c).unwrap() {
            FracResult::Infeasible(Certificate::Clique(w)) => {
                assert_eq!(w.total, frac(3, 1));
                assert!(verify_fractional_clique(&c, &w).0);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn mixed_sizes_fall_back_to_farkas() {
        // K3 with lists 1,1,2 identity-matched: the two 1-lists collide.
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = Cover::new(g, vec![1, 1, 2], &[((0, 1), vec![(0, 0)])]).unwrap();
        match has_fractional_packing(&c).unwrap() {
            FracResult::Infeasible(Certificate::Clique(w)) => assert!(verify_fractional_clique(&c, &w).0),
            FracResult::Infeasible(Certificate::Farkas(f)) => assert!(f.verify(&c).unwrap()),
            r => panic!("{r:?}"),
        }
        // A 1-list matched into a 2-list: the partner can never be chosen.
        let c = Cover::new(Graph::new(2, [(0, 1)]).unwrap(), vec![1, 2], &[((0, 1), vec![(0, 0)])]).unwrap();
        match has_fractional_packing(&c).unwrap() {
            FracResult::Infeasible(Certificate::Farkas(f)) => assert!(f.verify(&c).unwrap()),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn clique_check() {
        let c = full_identity_cover(&Graph::new(2, [(0, 1)]).unwrap(), 2);
        let zero = FractionalClique::new(vec![vec![Rational::zero(); 2]; 2]);
        assert_eq!(verify_fractional_clique(&c, &zero), (true, Rational::zero()));
        let half = FractionalClique::new(vec![vec![frac(1, 2); 2]; 2]);
        assert_eq!(verify_fractional_clique(&c, &half), (true, frac(2, 1)));
        let heavy = FractionalClique::new(vec![vec![frac(2, 3); 2]; 2]);
        assert!(!verify_fractional_clique(&c, &heavy).0);
    }

    #[test]
    fn packing_gives_feasible_uniform_distribution() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let c = full_identity_cover(&g, 3);
        let p = find_packing(&c).unwrap().unwrap();
        assert!(uniform_from_packing(&p).validate(&c));
    }

    #[test]
    fn monotone_on_c4() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let c = full_identity_cover(&g, 2);
        assert!(check_monotonicity(&c, 0, 0).unwrap());
        assert!(check_monotonicity(&c, 1, 1).unwrap());
        assert!(check_monotonicity(&c, 2, 2).unwrap());
    }

    #[test]
    fn augmenting_reaches_maximum() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let c = Cover::new(g, vec![2, 3], &[((0, 1), vec![(1, 0)])]).unwrap();
        let a = augment_matchings(&c);
        assert_eq!(a.matching_by_index(0).pairs(), vec![(0, 1), (1, 0)]);
    }
}
