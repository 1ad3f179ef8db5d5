//! Explicit graphs and covers, each with a list of claims that can be
//! re-checked from scratch.

use crate::cover::{list_cover, Cover, FullCoverEnumerator};
use crate::frac::{
    extension_lp, has_fractional_packing, is_fractionally_packable, max_weight_independent, verify_fractional_clique,
    FracResult, FractionalClique, TransversalDistribution,
};
use crate::graph::{catalog, girth, is_planar, mad, Graph};
use crate::packing::{count_transversals, find_packing};
use crate::perm::Perm;
use crate::Rational;
use num_traits::One;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Planar(bool),
    GirthAtLeast(usize),
    /// The cover (of uniform list size) has no packing.
    NoPacking,
    Transversals(u128),
    /// Vertices with equal lists induce connected subgraphs.
    SameListClassesConnected,
    FractionallyInfeasible,
    /// The attached fractional clique is valid and has this total.
    CliqueTotal(Rational),
    /// Every independent set of the cover graph has at most `bound` vertices
    /// (only marked ones counted when `marked_only`).
    IndependentSetsAtMost { marked_only: bool, bound: usize },
    /// Each outside vertex sees each of its colours with probability `1/|L|`.
    OutsideMarginalsUniform,
    /// The attached outside distribution does not extend to `T`.
    ExtensionInfeasible,
    /// It does extend once this outside vertex is deleted.
    ExtensionFeasibleWithout(usize),
    Mad(Rational),
    /// No induced subtree all of whose vertices have exactly one neighbour outside it.
    NoQualifyingSubtree,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Planar(b) => write!(f, "planar = {b}"),
            Claim::GirthAtLeast(g) => write!(f, "girth >= {g}"),
            Claim::NoPacking => write!(f, "no packing"),
            Claim::Transversals(t) => write!(f, "{t} independent transversals"),
            Claim::SameListClassesConnected => write!(f, "vertices with equal lists induce connected subgraphs"),
            Claim::FractionallyInfeasible => write!(f, "no fractional packing"),
            Claim::CliqueTotal(t) => write!(f, "attached fractional clique is valid with total {t}"),
            Claim::IndependentSetsAtMost { marked_only: false, bound } => {
                write!(f, "independent sets of the cover graph have at most {bound} vertices")
            }
            Claim::IndependentSetsAtMost { marked_only: true, bound } => {
                write!(f, "independent sets of the cover graph have at most {bound} marked vertices")
            }
            Claim::OutsideMarginalsUniform => write!(f, "outside distribution has uniform marginals"),
            Claim::ExtensionInfeasible => write!(f, "outside distribution does not extend to T"),
            Claim::ExtensionFeasibleWithout(v) => write!(f, "outside distribution extends once vertex {v} is removed"),
            Claim::Mad(m) => write!(f, "mad = {m}"),
            Claim::NoQualifyingSubtree => write!(f, "no induced subtree with exactly one outside neighbour per vertex"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ConstructedInstance {
    pub name: String,
    pub graph: Graph,
    pub cover: Cover,
    pub claims: Vec<Claim>,
    pub clique: Option<FractionalClique>,
    /// Marked cover vertices, `marks[v][i]`.
    pub marks: Option<Vec<Vec<bool>>>,
    /// `T` and a distribution on the transversals of `G - T`.
    pub outside: Option<(Vec<usize>, TransversalDistribution)>,
}

impl ConstructedInstance {
    fn new(name: &str, cover: Cover, claims: Vec<Claim>) -> Self {
        ConstructedInstance {
            name: name.to_string(),
            graph: cover.base().clone(),
            cover,
            claims,
            clique: None,
            marks: None,
            outside: None,
        }
    }

    /// Re-checks every claim.
    pub fn verify(&self) -> Vec<ClaimCheck> {
        self.claims.iter().map(|c| self.check(c)).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.verify().iter().all(|c| c.holds)
    }

    fn check(&self, claim: &Claim) -> ClaimCheck {
        let (holds, detail) = match claim {
            Claim::Planar(b) => {
                let p = is_planar(&self.graph).is_planar();
                (p == *b, format!("planar = {p}"))
            }
            Claim::GirthAtLeast(g) => {
                let gi = girth(&self.graph);
                (gi.map_or(true, |x| x >= *g), format!("girth = {gi:?}"))
            }
            Claim::NoPacking => match find_packing(&self.cover) {
                Ok(None) => (true, "search exhausted".into()),
                Ok(Some(_)) => (false, "packing found".into()),
                Err(e) => (false, e.to_string()),
            },
            Claim::Transversals(t) => {
                let got = count_transversals(&self.cover);
                (got == *t, format!("{got} transversals"))
            }
            Claim::SameListClassesConnected => {
                let ok = same_list_classes_connected(&self.cover);
                (ok, String::new())
            }
            Claim::FractionallyInfeasible => match is_fractionally_packable(&self.cover) {
                Ok(f) => (!f, format!("feasible = {f}")),
                Err(e) => (false, e.to_string()),
            },
            Claim::CliqueTotal(t) => match &self.clique {
                Some(w) => {
                    let (ok, total) = verify_fractional_clique(&self.cover, w);
                    (ok && total == *t, format!("valid = {ok}, total = {total}"))
                }
                None => (false, "no clique attached".into()),
            },
            Claim::IndependentSetsAtMost { marked_only, bound } => {
                let w: Vec<Vec<Rational>> = (0..self.cover.n())
                    .map(|v| {
                        (0..self.cover.size(v))
                            .map(|i| {
                                let marked = self.marks.as_ref().is_some_and(|m| m[v][i]);
                                if !marked_only || marked {
                                    Rational::one()
                                } else {
                                    Rational::from_integer(0.into())
                                }
                            })
                            .collect()
                    })
                    .collect();
                let (best, _) = max_weight_independent(&self.cover, &w);
                (best <= Rational::from_integer((*bound).into()), format!("maximum = {best}"))
            }
            Claim::OutsideMarginalsUniform => match &self.outside {
                Some((t, d)) => {
                    let rest: Vec<usize> = (0..self.cover.n()).filter(|v| !t.contains(v)).collect();
                    let ok = d.validate(&self.cover.induced(&rest));
                    (ok, String::new())
                }
                None => (false, "no distribution attached".into()),
            },
            Claim::ExtensionInfeasible => match &self.outside {
                Some((t, d)) => match extension_lp(&self.cover, t, d) {
                    Ok(r) => (r.is_none(), format!("extends = {}", r.is_some())),
                    Err(e) => (false, e.to_string()),
                },
                None => (false, "no distribution attached".into()),
            },
            Claim::ExtensionFeasibleWithout(x) => match &self.outside {
                Some((t, d)) => {
                    let (c, t2, d2) = drop_outside_vertex(&self.cover, t, d, *x);
                    match extension_lp(&c, &t2, &d2) {
                        Ok(r) => (r.is_some(), format!("extends = {}", r.is_some())),
                        Err(e) => (false, e.to_string()),
                    }
                }
                None => (false, "no distribution attached".into()),
            },
            Claim::Mad(m) => {
                let got = mad(&self.graph).map(|x| x.value);
                (got.as_ref() == Some(m), format!("mad = {got:?}"))
            }
            Claim::NoQualifyingSubtree => {
                let found = qualifying_subtree(&self.graph);
                (found.is_none(), format!("{found:?}"))
            }
        };
        ClaimCheck { claim: claim.to_string(), holds, detail }
    }
}

/// Deletes outside vertex `x`, shifting `T` and dropping `x` from the distribution.
fn drop_outside_vertex(
    c: &Cover,
    t: &[usize],
    d: &TransversalDistribution,
    x: usize,
) -> (Cover, Vec<usize>, TransversalDistribution) {
    let keep: Vec<usize> = (0..c.n()).filter(|&v| v != x).collect();
    let shift = |v: usize| if v > x { v - 1 } else { v };
    let rest: Vec<usize> = (0..c.n()).filter(|v| !t.contains(v)).collect();
    let pos = rest.iter().position(|&v| v == x).expect("outside vertex");
    let d2 = TransversalDistribution::new(d.support.iter().zip(&d.weights).map(|(tr, w)| {
        let mut tr = tr.clone();
        tr.remove(pos);
        (tr, w.clone())
    }));
    (c.induced(&keep), t.iter().map(|&v| shift(v)).collect(), d2)
}

fn same_list_classes_connected(c: &Cover) -> bool {
    let Some(labels) = c.labels() else {
        return false;
    };
    let mut keys: Vec<Vec<i64>> = labels
        .iter()
        .map(|l| {
            let mut s = l.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let per_vertex = keys.clone();
    keys.sort();
    keys.dedup();
    keys.iter().all(|k| {
        let class: Vec<usize> = (0..c.n()).filter(|&v| per_vertex[v] == *k).collect();
        c.base().induced(&class).is_connected()
    })
}

/// An induced subtree in which every vertex has exactly one neighbour outside.
pub fn qualifying_subtree(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    assert!(n <= 24, "exhaustive subset search");
    (1u32..1 << n).find_map(|mask| {
        let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let sub = g.induced(&s);
        let tree = sub.is_connected() && sub.m() + 1 == s.len();
        let one_out = s.iter().all(|&v| g.neighbors(v).iter().filter(|&&w| mask >> w & 1 == 0).count() == 1);
        (tree && one_out).then_some(s)
    })
}

fn smallest_odd_at_least(g: usize) -> usize {
    if g % 2 == 1 {
        g
    } else {
        g + 1
    }
}

/// Planar graph of girth at least `g` with a 3-list assignment that has no
/// packing: three odd cycles with rotating lists `{1,2,3}`, `{1,2,4}`,
/// `{1,3,4}`, chords `x_i x_{i+2}` replaced by paths of length `g` that
/// alternate inside and outside, and three paths tying the cycles together.
/// Path vertices inherit the list of their ends.
pub fn girth_construction(g: usize) -> ConstructedInstance {
    assert!(g >= 3);
    let n = smallest_odd_at_least(g);
    let lists = [vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4]];
    // Cycle x in {A, B, C} = {0, 1, 2}; vertex i is 1-based.
    let id = |x: usize, i: usize| x * n + i - 1;
    let list_of = |x: usize, i: usize| if i % 2 == 1 { lists[x].clone() } else { lists[(x + 1) % 3].clone() };
    let mut edges = Vec::new();
    let mut vlists: Vec<Vec<i64>> = Vec::new();
    for x in 0..3 {
        for i in 1..=n {
            vlists.push(list_of(x, i));
        }
    }
    for x in 0..3 {
        for i in 1..=n {
            edges.push((id(x, i), id(x, i % n + 1)));
        }
    }
    let mut add_path = |a: usize, b: usize, list: Vec<i64>, edges: &mut Vec<(usize, usize)>| {
        let mut prev = a;
        for _ in 0..g - 1 {
            let v = vlists.len();
            vlists.push(list.clone());
            edges.push((prev, v));
            prev = v;
        }
        edges.push((prev, b));
    };
    for x in 0..3 {
        for i in 1..=n - 2 {
            add_path(id(x, i), id(x, i + 2), list_of(x, i), &mut edges);
        }
    }
    // a1-c2, b1-a2, c1-b2.
    for (x, y) in [(0, 2), (1, 0), (2, 1)] {
        add_path(id(x, 1), id(y, 2), list_of(x, 1), &mut edges);
    }
    let graph = Graph::new(vlists.len(), edges).expect("simple graph");
    let cover = list_cover(&graph, &vlists).expect("list cover");
    ConstructedInstance::new(
        &format!("girth_construction({g})"),
        cover,
        vec![Claim::Planar(true), Claim::GirthAtLeast(g), Claim::SameListClassesConnected, Claim::NoPacking],
    )
}

/// Vertices `0..5` of `K_5` minus the edge `0-2`, on a pentagon. The bold
/// edges `0->4`, `1->0` carry `sigma = (1 2 3)` and `2->1`, `3->2` carry its
/// inverse, read from the tail; the other edges are identity matchings.
pub fn k5_minus_bad_cover() -> ConstructedInstance {
    let g = Graph::new(5, [(0, 1), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
    let sigma = Perm::new(vec![0, 2, 3, 1]).unwrap();
    let bold = [(0, 4, sigma.clone()), (1, 0, sigma.clone()), (2, 1, sigma.inverse()), (3, 2, sigma.inverse())];
    let perms: Vec<Perm> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            bold.iter()
                .find_map(|(a, b, p)| {
                    if (*a, *b) == (u, v) {
                        Some(p.clone())
                    } else if (*a, *b) == (v, u) {
                        Some(p.inverse())
                    } else {
                        None
                    }
                })
                .unwrap_or_else(|| Perm::identity(4))
        })
        .collect();
    let cover = Cover::from_perms(g, 4, &perms);
    ConstructedInstance::new("k5_minus_bad_cover", cover, vec![Claim::Transversals(54), Claim::NoPacking])
}

/// Triangle `x1 x2 x3` (vertices 0, 1, 2) with `x12`, `x13`, `x23` (3, 4, 5)
/// attached to both ends; 3-lists on the triangle and 2-lists outside. The
/// attached clique gives `2/7` to marked vertices and `1/7` to the rest.
pub fn outerplanar_2tree_cover() -> ConstructedInstance {
    let g = Graph::new(6, [(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (4, 0), (4, 2), (5, 1), (5, 2)]).unwrap();
    let ms = vec![
        ((0, 1), vec![(0, 0), (2, 1), (1, 2)]),
        ((0, 2), vec![(0, 0), (1, 1), (2, 2)]),
        ((1, 2), vec![(1, 0), (0, 1), (2, 2)]),
        ((3, 0), vec![(0, 0), (1, 1)]),
        ((3, 1), vec![(0, 0), (1, 1)]),
        ((4, 0), vec![(0, 1), (1, 2)]),
        ((4, 2), vec![(0, 0), (1, 2)]),
        ((5, 2), vec![(0, 1), (1, 2)]),
        ((5, 1), vec![(0, 1), (1, 2)]),
    ];
    let cover = Cover::new(g, vec![3, 3, 3, 2, 2, 2], &ms).unwrap();
    let marks = vec![
        vec![true; 3],
        vec![true; 3],
        vec![false, false, true],
        vec![false; 2],
        vec![false; 2],
        vec![false; 2],
    ];
    let sevenths = |k: i64| Rational::new(k.into(), 7.into());
    let weights = marks.iter().map(|m| m.iter().map(|&b| sevenths(if b { 2 } else { 1 })).collect()).collect();
    let mut inst = ConstructedInstance::new(
        "outerplanar_2tree_cover",
        cover,
        vec![
            Claim::FractionallyInfeasible,
            Claim::CliqueTotal(sevenths(22)),
            Claim::IndependentSetsAtMost { marked_only: false, bound: 6 },
            Claim::IndependentSetsAtMost { marked_only: true, bound: 3 },
        ],
    );
    inst.clique = Some(FractionalClique::new(weights));
    inst.marks = Some(marks);
    inst
}

/// `T = {u, v}` (vertices 0, 1) joined by an identity matching, with pendant
/// neighbours `a1, a2` (2, 3) on `u` and `b1, b2` (4, 5) on `v`, all 4-fold.
/// Colour `j` of `a1`/`b1` meets colour `j` of `u`/`v`; `a2`/`b2` use
/// `0->0, 1->2, 2->3, 3->1`. The outside colourings
/// `(0,0,0,0), (1,2,1,2), (2,3,2,3), (3,1,3,1)` each get `1/4`.
pub fn nonextendable_fractional_example() -> ConstructedInstance {
    let g = Graph::new(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
    let id = Perm::identity(4);
    let twist = Perm::new(vec![0, 2, 3, 1]).unwrap();
    // Edges are stored from the smaller end, i.e. from u or v to the pendant.
    let perms: Vec<Perm> = g
        .edges()
        .iter()
        .map(|&(_, b)| if b == 3 || b == 5 { twist.inverse() } else { id.clone() })
        .collect();
    let cover = Cover::from_perms(g, 4, &perms);
    let quarter = Rational::new(1.into(), 4.into());
    let outside = TransversalDistribution::new(
        [[0, 0, 0, 0], [1, 2, 1, 2], [2, 3, 2, 3], [3, 1, 3, 1]].iter().map(|t| (t.to_vec(), quarter.clone())),
    );
    let mut inst = ConstructedInstance::new(
        "nonextendable_fractional_example",
        cover,
        vec![Claim::OutsideMarginalsUniform, Claim::ExtensionInfeasible, Claim::ExtensionFeasibleWithout(3)],
    );
    inst.outside = Some((vec![0, 1], outside));
    inst
}

/// `K_{2,3}` plus an edge inside the 3-side, with a full 3-fold cover that has
/// no fractional packing (the first one found in enumeration order).
pub fn k23_plus_edge() -> ConstructedInstance {
    let g = catalog("K23_plus_edge", &[]).expect("catalog graph");
    let en = FullCoverEnumerator::with_spanning_forest(&g, 3);
    let witness = en
        .iter()
        .find(|c| matches!(has_fractional_packing(c), Ok(FracResult::Infeasible(_))))
        .expect("an infeasible 3-fold cover exists");
    ConstructedInstance::new(
        "k23_plus_edge",
        witness,
        vec![Claim::Mad(Rational::new(14.into(), 5.into())), Claim::NoQualifyingSubtree, Claim::FractionallyInfeasible],
    )
}

/// Names accepted by [`construct`].
pub const NAMES: [&str; 5] =
    ["girth", "k5_minus", "outerplanar_2tree", "nonextendable", "k23_plus_edge"];

pub fn construct(name: &str, g: usize) -> Option<ConstructedInstance> {
    Some(match name {
        "girth" | "girth_construction" => girth_construction(g),
        "k5_minus" | "k5_minus_bad_cover" => k5_minus_bad_cover(),
        "outerplanar_2tree" | "outerplanar_2tree_cover" => outerplanar_2tree_cover(),
        "nonextendable" | "nonextendable_fractional_example" => nonextendable_fractional_example(),
        "k23_plus_edge" => k23_plus_edge(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::{compose_via_t, FracError, Hypothesis};

    fn assert_claims(inst: &ConstructedInstance) {
        for c in inst.verify() {
            assert!(c.holds, "{}: {} ({})", inst.name, c.claim, c.detail);
        }
    }

    #[test]
    fn k5_minus() {
        assert_claims(&k5_minus_bad_cover());
    }

    #[test]
    fn outerplanar() {
        let inst = outerplanar_2tree_cover();
        assert_claims(&inst);
        match has_fractional_packing(&inst.cover).unwrap() {
            FracResult::Infeasible(crate::frac::Certificate::Clique(w)) => {
                assert!(w.total > Rational::from_integer(3.into()));
                assert!(verify_fractional_clique(&inst.cover, &w).0);
            }
            r => panic!("{r:?}"),
        }
        let doubled = FractionalClique::new(
            inst.clique.as_ref().unwrap().weights.iter().map(|ws| ws.iter().map(|w| w * Rational::from_integer(2.into())).collect()).collect(),
        );
        assert!(!verify_fractional_clique(&inst.cover, &doubled).0);
    }

    #[test]
    fn nonextendable() {
        let inst = nonextendable_fractional_example();
        assert_claims(&inst);
        assert_eq!(
            compose_via_t(&inst.cover, &[0, 1]),
            Err(FracError::Hypothesis(Hypothesis::TooManyOutsideNeighbours { u: 0, count: 2 }))
        );
    }

    #[test]
    fn k23() {
        assert_claims(&k23_plus_edge());
    }

    #[test]
    fn girth_small() {
        let inst = girth_construction(3);
        assert_eq!(inst.graph.n(), 9 + 3 * 2 + 3 * 2);
        assert_claims(&inst);
    }

    #[test]
    fn girth_five_and_six() {
        let g5 = girth_construction(5);
        assert_eq!(g5.graph.n(), 15 + 12 * 4);
        assert_eq!(girth(&g5.graph), Some(5));
        assert_claims(&g5);
        let g6 = girth_construction(6);
        assert!(girth(&g6.graph).unwrap() >= 6);
        assert_claims(&g6);
    }

    #[test]
    fn subtree_found_in_a_path() {
        // In C5 any edge is such a subtree, a single vertex is not.
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(qualifying_subtree(&c5), Some(vec![0, 1]));
    }
}
