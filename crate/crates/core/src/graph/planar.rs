//! Planarity testing with certificates.
//!
//! Each biconnected block is embedded with the Demoucron–Malgrange–Pertuiset
//! face-insertion algorithm; the block rotations are glued at cut vertices.
//! The resulting rotation system is checked with Euler's formula. Non-planar
//! graphs are shrunk edge by edge to a minimal non-planar subgraph, which is a
//! subdivision of K5 or K3,3.

use super::Graph;
use serde::Serialize;

/// Cyclic order of neighbours around each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    /// Branch vertices (5 for K5; for K3,3 the two sides, 3 + 3).
    pub branch: Vec<usize>,
    /// Subdivided edges as vertex paths between branch vertices.
    pub paths: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Planarity {
    Planar(RotationSystem),
    NonPlanar(KuratowskiWitness),
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar(_))
    }
}

pub fn is_planar(g: &Graph) -> Planarity {
    match embed(g) {
        Some(rot) => Planarity::Planar(rot),
        None => Planarity::NonPlanar(kuratowski(g)),
    }
}

/// Planar embedding, or `None` if the graph is not planar.
pub fn embed(g: &Graph) -> Option<RotationSystem> {
    if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
        return None;
    }
    let mut rotation = vec![Vec::new(); g.n()];
    for block in blocks(g) {
        let rot = if block.len() == 1 {
            let (u, v) = block[0];
            vec![(u, vec![v]), (v, vec![u])]
        } else {
            embed_block(g.n(), &block)?
        };
        for (v, order) in rot {
            rotation[v].extend(order);
        }
    }
    let rs = RotationSystem { rotation };
    debug_assert!(rs.is_planar_embedding_of(g));
    Some(rs)
}

impl RotationSystem {
    /// Faces traced by the rule: after dart `u -> v` comes `v -> succ_v(u)`.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.rotation.len();
        let mut pos = vec![std::collections::HashMap::new(); n];
        for v in 0..n {
            for (i, &w) in self.rotation[v].iter().enumerate() {
                pos[v].insert(w, i);
            }
        }
        let mut used = std::collections::HashSet::new();
        let mut faces = Vec::new();
        for u in 0..n {
            for &v in &self.rotation[u] {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while used.insert((a, b)) {
                    face.push(a);
                    let rot = &self.rotation[b];
                    let i = pos[b][&a];
                    let c = rot[(i + 1) % rot.len()];
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Checks that the rotations list exactly the neighbourhoods of `g` and that
    /// every component satisfies `V - E + F = 2`.
    pub fn is_planar_embedding_of(&self, g: &Graph) -> bool {
        if self.rotation.len() != g.n() {
            return false;
        }
        for v in 0..g.n() {
            let mut r = self.rotation[v].clone();
            r.sort_unstable();
            if r != g.neighbors(v) {
                return false;
            }
        }
        let faces = self.faces();
        let comps = g.components();
        let mut comp_of = vec![0; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut f = vec![0i64; comps.len()];
        for face in &faces {
            f[comp_of[face[0]]] += 1;
        }
        comps.iter().enumerate().all(|(i, c)| {
            let e = c.iter().map(|&v| g.degree(v)).sum::<usize>() as i64 / 2;
            let faces_here = if e == 0 { 1 } else { f[i] };
            c.len() as i64 - e + faces_here == 2
        })
    }
}

/// Biconnected blocks as edge lists (Hopcroft–Tarjan with an edge stack).
fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent, next neighbour index)
        let mut dfs = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (u, parent, ref mut i)) = dfs.last_mut() {
            if *i < g.degree(u) {
                let w = g.neighbors(u)[*i];
                *i += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    dfs.push((w, u, 0));
                } else if disc[w] < disc[u] {
                    stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                dfs.pop();
                if let Some(&(p, _, _)) = dfs.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = stack.pop() {
                            block.push(e);
                            if e == (p, u) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Embeds one biconnected block (at least a cycle). Returns per-vertex rotations.
fn embed_block(n: usize, block: &[(usize, usize)]) -> Option<Vec<(usize, Vec<usize>)>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in block {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let verts: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    let mut in_h = vec![false; n];
    let mut h_edges = std::collections::HashSet::new();
    // initial cycle: edge (u, v) plus a shortest u-v path avoiding it
    let (u0, v0) = block[0];
    let path = bfs_path(&adj, u0, |x| x == v0, |a, b| !((a == u0 && b == v0) || (a == v0 && b == u0)))?;
    let cycle = path;
    for i in 0..cycle.len() {
        let a = cycle[i];
        let b = cycle[(i + 1) % cycle.len()];
        in_h[a] = true;
        h_edges.insert((a.min(b), a.max(b)));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let total_edges = block.len();
    while h_edges.len() < total_edges {
        let frags = fragments(&adj, &verts, &in_h, &h_edges);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, fr) in frags.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| fr.attach.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            if admissible.is_empty() {
                return None;
            }
            if admissible.len() == 1 {
                choice = Some((fi, admissible[0]));
                break;
            }
            if choice.is_none() {
                choice = Some((fi, admissible[0]));
            }
        }
        let (fi, face_idx) = choice.expect("at least one fragment");
        let fr = &frags[fi];
        let a = fr.attach[0];
        let b = fr.attach[1];
        let p = fragment_path(&adj, fr, &in_h, a, b);
        for w in p.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &x in &p {
            in_h[x] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &p);
        faces.push(f1);
        faces.push(f2);
    }
    // rotation from faces: for consecutive u -> v -> w on a face, succ_v(u) = w
    let mut succ: Vec<std::collections::HashMap<usize, usize>> = vec![Default::default(); n];
    for f in &faces {
        let l = f.len();
        for i in 0..l {
            let (u, v, w) = (f[i], f[(i + 1) % l], f[(i + 2) % l]);
            succ[v].insert(u, w);
        }
    }
    let mut out = Vec::new();
    for &v in &verts {
        let start = adj[v][0];
        let mut order = vec![start];
        let mut cur = succ[v][&start];
        while cur != start {
            order.push(cur);
            cur = succ[v][&cur];
        }
        if order.len() != adj[v].len() {
            return None;
        }
        out.push((v, order));
    }
    Some(out)
}

struct Fragment {
    /// Attachment vertices (sorted, at least two in a block).
    attach: Vec<usize>,
    /// Interior vertices (empty for a chord).
    inner: Vec<usize>,
}

fn fragments(
    adj: &[Vec<usize>],
    verts: &[usize],
    in_h: &[bool],
    h_edges: &std::collections::HashSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &u in verts {
        if !in_h[u] {
            continue;
        }
        for &v in &adj[u] {
            if u < v && in_h[v] && !h_edges.contains(&(u, v)) {
                out.push(Fragment { attach: vec![u, v], inner: vec![] });
            }
        }
    }
    let mut seen = vec![false; adj.len()];
    for &s in verts {
        if in_h[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut attach = Vec::new();
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &y in &adj[x] {
                if in_h[y] {
                    attach.push(y);
                } else if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        attach.sort_unstable();
        attach.dedup();
        out.push(Fragment { attach, inner: comp });
    }
    out
}

fn fragment_path(adj: &[Vec<usize>], fr: &Fragment, in_h: &[bool], a: usize, b: usize) -> Vec<usize> {
    if fr.inner.is_empty() {
        return vec![a, b];
    }
    let mut inner = vec![false; adj.len()];
    for &x in &fr.inner {
        inner[x] = true;
    }
    // walk from a into the fragment interior and out to b
    let path = bfs_path(
        adj,
        a,
        |x| x == b,
        |x, y| (x == a && inner[y]) || (inner[x] && (inner[y] || y == b)),
    )
    .expect("fragment connects its attachments");
    debug_assert!(path[1..path.len() - 1].iter().all(|&x| !in_h[x]));
    path
}

/// Shortest path from `s` to a vertex satisfying `goal`, using only steps allowed by `ok`.
fn bfs_path(
    adj: &[Vec<usize>],
    s: usize,
    goal: impl Fn(usize) -> bool,
    ok: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[s] = s;
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX && ok(x, y) {
                prev[y] = x;
                if goal(y) {
                    let mut p = vec![y];
                    let mut c = y;
                    while c != s {
                        c = prev[c];
                        p.push(c);
                    }
                    p.reverse();
                    return Some(p);
                }
                q.push_back(y);
            }
        }
    }
    None
}

/// Splits an oriented face along a path whose endpoints lie on it.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let l = face.len();
    let a = path[0];
    let b = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let j = face.iter().position(|&x| x == b).unwrap();
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut k = i;
    loop {
        f1.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % l;
    }
    f1.extend(inner.iter().rev());
    let mut f2 = Vec::new();
    let mut k = j;
    loop {
        f2.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % l;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

/// Minimal non-planar subgraph by greedy edge deletion, classified by its branch vertices.
fn kuratowski(g: &Graph) -> KuratowskiWitness {
    let mut h = g.clone();
    for &(u, v) in g.edges() {
        let smaller = h.without_edge(u, v);
        if embed(&smaller).is_none() {
            h = smaller;
        }
    }
    let branch: Vec<usize> = (0..h.n()).filter(|&v| h.degree(v) >= 3).collect();
    let kind = if branch.len() == 5 { KuratowskiKind::K5 } else { KuratowskiKind::K33 };
    let is_branch = |v: usize| h.degree(v) >= 3;
    let mut paths = Vec::new();
    for &b in &branch {
        for &first in h.neighbors(b) {
            let mut p = vec![b, first];
            let (mut prev, mut cur) = (b, first);
            while !is_branch(cur) {
                let nxt = *h.neighbors(cur).iter().find(|&&x| x != prev).unwrap();
                prev = cur;
                cur = nxt;
                p.push(cur);
            }
            if b < cur {
                paths.push(p);
            }
        }
    }
    paths.sort();
    let branch = match kind {
        KuratowskiKind::K5 => branch,
        KuratowskiKind::K33 => {
            // two-colour the branch vertices by path adjacency
            let b0 = branch[0];
            let mut side0: Vec<usize> = vec![b0];
            let opp: Vec<usize> = paths
                .iter()
                .filter_map(|p| {
                    let (s, t) = (p[0], *p.last().unwrap());
                    if s == b0 {
                        Some(t)
                    } else if t == b0 {
                        Some(s)
                    } else {
                        None
                    }
                })
                .collect();
            side0.extend(branch.iter().copied().filter(|x| *x != b0 && !opp.contains(x)));
            side0.sort_unstable();
            let mut opp = opp;
            opp.sort_unstable();
            side0.into_iter().chain(opp).collect()
        }
    };
    KuratowskiWitness { kind, branch, paths }
}

impl KuratowskiWitness {
    /// Checks the witness is a subdivision of K5 / K3,3 inside `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        let nb = match self.kind {
            KuratowskiKind::K5 => 5,
            KuratowskiKind::K33 => 6,
        };
        if self.branch.len() != nb {
            return false;
        }
        let mut expected: Vec<(usize, usize)> = Vec::new();
        match self.kind {
            KuratowskiKind::K5 => {
                for i in 0..5 {
                    for j in i + 1..5 {
                        expected.push((self.branch[i], self.branch[j]));
                    }
                }
            }
            KuratowskiKind::K33 => {
                for i in 0..3 {
                    for j in 3..6 {
                        expected.push((self.branch[i], self.branch[j]));
                    }
                }
            }
        }
        let norm = |a: usize, b: usize| (a.min(b), a.max(b));
        let mut got: Vec<(usize, usize)> =
            self.paths.iter().map(|p| norm(p[0], *p.last().unwrap())).collect();
        got.sort_unstable();
        let mut exp: Vec<_> = expected.iter().map(|&(a, b)| norm(a, b)).collect();
        exp.sort_unstable();
        if got != exp {
            return false;
        }
        let mut used = std::collections::HashSet::new();
        for p in &self.paths {
            if p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
                return false;
            }
            for &x in &p[1..p.len() - 1] {
                if self.branch.contains(&x) || !used.insert(x) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;

    #[test]
    fn small_non_planar() {
        for (name, kind) in [("K5", KuratowskiKind::K5), ("K3,3", KuratowskiKind::K33)] {
            let g = catalog(name, &[]).unwrap();
            match is_planar(&g) {
                Planarity::NonPlanar(w) => {
                    assert_eq!(w.kind, kind);
                    assert!(w.validate(&g));
                }
                _ => panic!("{name} reported planar"),
            }
        }
    }

    #[test]
    fn planar_catalog_graphs() {
        for name in ["K4", "K5-", "W8", "F7", "C9", "P4", "square_of_path(8)", "G+(7,3,3)"] {
            let g = catalog(name, &[]).unwrap();
            match is_planar(&g) {
                Planarity::Planar(r) => assert!(r.is_planar_embedding_of(&g), "{name}"),
                _ => panic!("{name} reported non-planar"),
            }
        }
    }

    #[test]
    fn petersen_has_witness() {
        let mut es = Vec::new();
        for i in 0..5 {
            es.push((i, (i + 1) % 5));
            es.push((i, i + 5));
            es.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = Graph::new(10, es).unwrap();
        match is_planar(&g) {
            Planarity::NonPlanar(w) => assert!(w.validate(&g)),
            _ => panic!("Petersen reported planar"),
        }
    }

    #[test]
    fn disconnected_and_cut_vertices() {
        // two triangles sharing a vertex, plus a pendant and an isolated vertex
        let g = Graph::new(7, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
        match is_planar(&g) {
            Planarity::Planar(r) => assert!(r.is_planar_embedding_of(&g)),
            _ => panic!(),
        }
    }
}
