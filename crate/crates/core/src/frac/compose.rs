//! Building fractional packings from pieces: extension from `G - T` to `T`,
//! and suppression of degree-2 vertices.

use super::{augment_matchings, frac, has_fractional_packing, lp, transversals, FracError, FracResult,
    TransversalDistribution, TRANSVERSAL_LIMIT};
use crate::cover::Cover;
use crate::Rational;
use lp::Column;
use num_traits::One;
use serde::Serialize;
use std::fmt;

/// Which requirement of the extension step failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    EmptyT,
    NotAVertex(usize),
    /// A vertex of `T` with `count > 1` neighbours outside `T`.
    TooManyOutsideNeighbours { u: usize, count: usize },
    /// Not `2 <= |L(u)| <= |L(v)|` for `u` in `T` with outside neighbour `v`.
    ListSizes { u: usize, v: usize },
    /// The cover of `G - T` has no fractional packing.
    OutsideInfeasible,
    /// The reduced cover of `T` for this transversal of `G - T` has none.
    ReducedInfeasible { outside: Vec<usize> },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::EmptyT => write!(f, "T is empty"),
            Hypothesis::NotAVertex(v) => write!(f, "{v} is not a vertex"),
            Hypothesis::TooManyOutsideNeighbours { u, count } => {
                write!(f, "vertex {u} of T has {count} neighbours outside T")
            }
            Hypothesis::ListSizes { u, v } => write!(f, "need 2 <= |L({u})| <= |L({v})|"),
            Hypothesis::OutsideInfeasible => write!(f, "the cover of G - T has no fractional packing"),
            Hypothesis::ReducedInfeasible { outside } => {
                write!(f, "the reduced cover of T has no fractional packing for outside transversal {outside:?}")
            }
        }
    }
}

fn hyp(h: Hypothesis) -> FracError {
    FracError::Hypothesis(h)
}

/// Keeps the indices with `keep[v][i]`; returns the cover and, per vertex,
/// the old index of each new one. Fails with the first emptied vertex.
pub(crate) fn reduce_lists(c: &Cover, keep: &[Vec<bool>]) -> Result<(Cover, Vec<Vec<usize>>), usize> {
    let maps: Vec<Vec<usize>> = keep.iter().map(|k| (0..k.len()).filter(|&i| k[i]).collect()).collect();
    if let Some(v) = maps.iter().position(Vec::is_empty) {
        return Err(v);
    }
    let mut inv: Vec<Vec<Option<usize>>> = keep.iter().map(|k| vec![None; k.len()]).collect();
    for (v, m) in maps.iter().enumerate() {
        for (new, &old) in m.iter().enumerate() {
            inv[v][old] = Some(new);
        }
    }
    let pairs: Vec<_> = c
        .base()
        .edges()
        .iter()
        .zip(c.matchings())
        .map(|(&(u, v), m)| {
            let ps = m.pairs().into_iter().filter_map(|(i, j)| Some((inv[u][i]?, inv[v][j]?))).collect();
            ((u, v), ps)
        })
        .collect();
    let sizes = maps.iter().map(Vec::len).collect();
    Ok((Cover::new(c.base().clone(), sizes, &pairs).expect("reduced cover"), maps))
}

struct Split {
    t: Vec<usize>,
    rest: Vec<usize>,
}

fn split(c: &Cover, t: &[usize]) -> Result<Split, FracError> {
    if t.is_empty() {
        return Err(hyp(Hypothesis::EmptyT));
    }
    if let Some(&v) = t.iter().find(|&&v| v >= c.n()) {
        return Err(hyp(Hypothesis::NotAVertex(v)));
    }
    let mut t = t.to_vec();
    t.sort_unstable();
    t.dedup();
    let rest = (0..c.n()).filter(|v| t.binary_search(v).is_err()).collect();
    Ok(Split { t, rest })
}

/// Lists of `T` with the neighbours of the outside transversal removed.
fn reduced_t_cover(c: &Cover, s: &Split, outside: &[usize]) -> Result<(Cover, Vec<Vec<usize>>), usize> {
    let mut chosen = vec![None; c.n()];
    for (j, &v) in s.rest.iter().enumerate() {
        chosen[v] = Some(outside[j]);
    }
    let keep: Vec<Vec<bool>> = s
        .t
        .iter()
        .map(|&u| {
            (0..c.size(u))
                .map(|i| c.base().neighbors(u).iter().all(|&v| chosen[v].is_none() || c.partner(u, i, v) != chosen[v]))
                .collect()
        })
        .collect();
    reduce_lists(&c.induced(&s.t), &keep)
}

fn join(c: &Cover, s: &Split, outside: &[usize], map: &[Vec<usize>], inner: &[usize]) -> Vec<usize> {
    let mut tr = vec![0; c.n()];
    for (j, &v) in s.rest.iter().enumerate() {
        tr[v] = outside[j];
    }
    for (j, &u) in s.t.iter().enumerate() {
        tr[u] = map[j][inner[j]];
    }
    tr
}

/// A fractional packing of `c` assembled from `G - T` and `T`: draw a
/// transversal `I_0` of `G - T`, remove `N[I_0]` from the lists of `T`, and
/// draw a transversal of what is left. Matchings are first made maximum.
pub fn compose_via_t(c: &Cover, t: &[usize]) -> Result<TransversalDistribution, FracError> {
    let s = split(c, t)?;
    let in_t: Vec<bool> = (0..c.n()).map(|v| s.t.binary_search(&v).is_ok()).collect();
    for &u in &s.t {
        let out: Vec<usize> = c.base().neighbors(u).iter().copied().filter(|&v| !in_t[v]).collect();
        if out.len() > 1 {
            return Err(hyp(Hypothesis::TooManyOutsideNeighbours { u, count: out.len() }));
        }
        if let Some(&v) = out.first() {
            if c.size(u) < 2 || c.size(u) > c.size(v) {
                return Err(hyp(Hypothesis::ListSizes { u, v }));
            }
        }
    }
    let a = augment_matchings(c);
    let outside = if s.rest.is_empty() {
        TransversalDistribution { support: vec![vec![]], weights: vec![Rational::one()] }
    } else {
        match has_fractional_packing(&a.induced(&s.rest))? {
            FracResult::Packing(d) => d,
            FracResult::Infeasible(_) => return Err(hyp(Hypothesis::OutsideInfeasible)),
        }
    };
    let mut parts = Vec::new();
    for (i0, p0) in outside.support.iter().zip(&outside.weights) {
        let bad = || hyp(Hypothesis::ReducedInfeasible { outside: i0.clone() });
        let (ct, map) = reduced_t_cover(&a, &s, i0).map_err(|_| bad())?;
        let FracResult::Packing(dt) = has_fractional_packing(&ct)? else {
            return Err(bad());
        };
        for (it, pt) in dt.support.iter().zip(&dt.weights) {
            parts.push((join(c, &s, i0, &map, it), p0 * pt));
        }
    }
    let d = TransversalDistribution::new(parts);
    if !d.validate(c) {
        return Err(FracError::CompositionFailed);
    }
    Ok(d)
}

/// Whether a given distribution on `G - T` extends to a fractional packing of
/// `c`: one variable per (outside transversal, transversal of its reduced `T`
/// cover). `outside` is indexed by the vertices outside `T` in increasing order.
pub fn extension_lp(
    c: &Cover,
    t: &[usize],
    outside: &TransversalDistribution,
) -> Result<Option<TransversalDistribution>, FracError> {
    let s = split(c, t)?;
    let tc = c.induced(&s.t);
    let (tt, toff) = tc.offsets();
    let rows = outside.support.len() + tt;
    let mut b = outside.weights.clone();
    for (j, _) in s.t.iter().enumerate() {
        for _ in 0..tc.size(j) {
            b.push(frac(1, tc.size(j)));
        }
    }
    debug_assert_eq!(b.len(), rows);
    let mut cols: Vec<Column> = Vec::new();
    let mut labels = Vec::new();
    for (r, i0) in outside.support.iter().enumerate() {
        let Ok((ct, map)) = reduced_t_cover(c, &s, i0) else {
            return Ok(None);
        };
        for it in transversals(&ct, TRANSVERSAL_LIMIT)? {
            let mut col = vec![(r, Rational::one())];
            for (j, &i) in it.iter().enumerate() {
                col.push((outside.support.len() + toff[j] + map[j][i], Rational::one()));
            }
            cols.push(col);
            labels.push(join(c, &s, i0, &map, &it));
        }
    }
    Ok(lp::feasible_point(&cols, &b).ok().map(|x| TransversalDistribution::new(labels.into_iter().zip(x))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SuppressionCase {
    /// `|L(v)| = 2`.
    TwoList,
    /// `|L(v)| = 3` and the colour of `v` missed by `u` is also missed by `w`.
    Aligned,
    /// `|L(v)| = 3` otherwise; two reduced covers are mixed.
    Twisted,
}

/// A reduced cover of `G - v + uw` (vertex `v` removed, later ones shifted
/// down) and its share in the final mixture.
#[derive(Clone, Debug, Serialize)]
pub struct Suppression {
    pub cover: Cover,
    #[serde(serialize_with = "crate::ratser::ser")]
    pub share: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuppressReport {
    pub case: SuppressionCase,
    pub u: usize,
    pub w: usize,
    pub reduced: Vec<Suppression>,
    pub reduced_feasible: Vec<bool>,
    pub original_feasible: bool,
    /// The packing of `c` lifted from packings of the reduced covers.
    pub lifted: Option<TransversalDistribution>,
    /// If every reduced cover is feasible, the lifted distribution validates.
    pub transfer_ok: bool,
}

/// Colour names after relabelling (index `0` is the first named colour).
struct Names {
    u: [usize; 2],
    v: [usize; 3],
    w: [usize; 2],
}

/// Builds `G - v + uw` with the new edge matching `pairs` (indices of `L(u)`, `L(w)`).
fn suppressed(c: &Cover, v: usize, u: usize, w: usize, pairs: &[(usize, usize)]) -> Cover {
    let verts: Vec<usize> = (0..c.n()).filter(|&x| x != v).collect();
    let idx = |x: usize| if x > v { x - 1 } else { x };
    let ind = c.induced(&verts);
    let g = ind.base().with_edge(idx(u), idx(w)).expect("u and w are non-adjacent");
    let mut ms: Vec<((usize, usize), Vec<(usize, usize)>)> =
        ind.base().edges().iter().zip(ind.matchings()).map(|(&e, m)| (e, m.pairs())).collect();
    ms.push(((idx(u), idx(w)), pairs.to_vec()));
    Cover::new(g, ind.sizes().to_vec(), &ms).expect("suppressed cover")
}

/// Checks the degree-2 suppression step on `c` at `v`: builds the reduced
/// cover(s), solves them, and lifts their packings back to `c`.
pub fn suppress_degree2(c: &Cover, v: usize) -> Result<SuppressReport, FracError> {
    let pre = |m: &str| FracError::Precondition(m.to_string());
    if v >= c.n() || c.base().degree(v) != 2 {
        return Err(pre("v must have degree 2"));
    }
    let (mut u, mut w) = (c.base().neighbors(v)[0], c.base().neighbors(v)[1]);
    if c.base().has_edge(u, w) {
        return Err(pre("the neighbours of v must be non-adjacent"));
    }
    if c.size(u) != 2 {
        std::mem::swap(&mut u, &mut w);
    }
    let sizes = (c.size(u), c.size(v), c.size(w));
    if !matches!(sizes, (2, 2, 2) | (2, 3, 2) | (2, 2, 3)) {
        return Err(pre("list sizes around v must be (2,2,2), (2,3,2) or (2,2,3)"));
    }
    let a = augment_matchings(c);
    let uv = |i: usize| a.partner(u, i, v).expect("maximum matching");
    let vw = |j: usize| a.partner(v, j, w);
    let vu = |j: usize| a.partner(v, j, u);
    let (case, names) = if sizes.1 == 2 {
        let (v1, v2) = (uv(0), uv(1));
        let n = Names { u: [0, 1], v: [v1, v2, usize::MAX], w: [vw(v1).unwrap(), vw(v2).unwrap()] };
        (SuppressionCase::TwoList, n)
    } else {
        let missed_by_u = (0..3).find(|&j| vu(j).is_none()).unwrap();
        let missed_by_w = (0..3).find(|&j| vw(j).is_none()).unwrap();
        if missed_by_u == missed_by_w {
            let (v1, v2) = (uv(0), uv(1));
            let n = Names { u: [0, 1], v: [v1, v2, missed_by_u], w: [vw(v1).unwrap(), vw(v2).unwrap()] };
            (SuppressionCase::Aligned, n)
        } else {
            // v2 is matched on both sides, v1 only to u, v3 only to w.
            let v2 = (0..3).find(|&j| j != missed_by_u && j != missed_by_w).unwrap();
            let (v1, v3) = (missed_by_w, missed_by_u);
            let n = Names {
                u: [vu(v1).unwrap(), vu(v2).unwrap()],
                v: [v1, v2, v3],
                w: [vw(v3).unwrap(), vw(v2).unwrap()],
            };
            (SuppressionCase::Twisted, n)
        }
    };
    let [u1, u2] = names.u;
    let [w1, w2] = names.w;
    let alpha = suppressed(&a, v, u, w, &[(u1, w2), (u2, w1)]);
    let mut reduced = vec![Suppression { cover: alpha, share: Rational::one() }];
    if case == SuppressionCase::Twisted {
        let beta = suppressed(&a, v, u, w, &[(u2, w2), (u1, w1)]);
        reduced[0].share = frac(2, 3);
        reduced.push(Suppression { cover: beta, share: frac(1, 3) });
    }
    let solved: Vec<FracResult> = reduced.iter().map(|r| has_fractional_packing(&r.cover)).collect::<Result<_, _>>()?;
    let reduced_feasible: Vec<bool> = solved.iter().map(FracResult::is_feasible).collect();
    let original_feasible = has_fractional_packing(c)?.is_feasible();

    let lift = |tr: &[usize], colour: usize| -> Vec<usize> {
        let mut out = tr.to_vec();
        out.insert(v, colour);
        out
    };
    let iu = if u > v { u - 1 } else { u };
    let [v1, v2, v3] = names.v;
    let lifted = if reduced_feasible.iter().all(|&f| f) {
        let mut parts = Vec::new();
        for (k, (r, res)) in reduced.iter().zip(&solved).enumerate() {
            let FracResult::Packing(d) = res else { unreachable!() };
            for (tr, p) in d.support.iter().zip(&d.weights) {
                let p = p * &r.share;
                let first = tr[iu] == u1;
                let choices: Vec<(usize, Rational)> = match (case, k, first) {
                    (SuppressionCase::TwoList, _, true) => vec![(v2, Rational::one())],
                    (SuppressionCase::TwoList, _, false) => vec![(v1, Rational::one())],
                    (SuppressionCase::Aligned, _, true) => vec![(v2, frac(2, 3)), (v3, frac(1, 3))],
                    (SuppressionCase::Aligned, _, false) => vec![(v1, frac(2, 3)), (v3, frac(1, 3))],
                    (SuppressionCase::Twisted, 0, true) => vec![(v2, Rational::one())],
                    (SuppressionCase::Twisted, 0, false) => vec![(v1, frac(1, 2)), (v3, frac(1, 2))],
                    (SuppressionCase::Twisted, _, true) => vec![(v3, Rational::one())],
                    (SuppressionCase::Twisted, _, false) => vec![(v1, Rational::one())],
                };
                for (col, q) in choices {
                    parts.push((lift(tr, col), &p * q));
                }
            }
        }
        Some(TransversalDistribution::new(parts))
    } else {
        None
    };
    let transfer_ok = match &lifted {
        Some(d) => d.validate(c),
        None => true,
    };
    Ok(SuppressReport { case, u, w, reduced, reduced_feasible, original_feasible, lifted, transfer_ok })
}
