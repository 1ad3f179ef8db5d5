//! Named graphs.
//!
//! Labelings are fixed so that test vectors stay stable:
//! * `Pn`, `Cn`: vertices in path/cycle order.
//! * `Wn`, `Fn`: hub is vertex 0, rim/path is `1..n`.
//! * `Ka,b`: side `0..a`, then side `a..a+b`.
//! * `Kn-`: the missing edge is `{0, 1}`.
//! * `A`, `A+`: K3,3 with top `0,1,2` and bottom `3,4,5`; `A` adds `1-2`, `A+`
//!   adds `1-2` and `4-5`.
//! * `B`, `B+`, `C`, `C+`: top row `t0..t3 = 0..3`, bottom row `b0,b1,b2 = 4,5,6`,
//!   and for `C` the middle vertex `m = 7`; the `+` variants add `t2-t3`.
//! * `D`: the K4 on `0..4`, the triangle `4,5,6`, and the edges `5-0`, `6-1`, `2-4`.
//! * `G(n,r,s)`, `G+(n,r,s)`: path `v1..vn` is `0..n`.
//! * `K23_plus_edge`: K2,3 with sides `{0,1}` and `{2,3,4}` plus the edge `2-3`.
//! * `square_of_path(n)`: `i ~ j` iff `1 <= |i-j| <= 2`.

use super::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("parameters violate the constraints for `{0}`: {1}")]
    BadParameters(String, String),
}

/// Looks up a named graph. Parameters may be embedded in the name (`C7`,
/// `K3,3`, `G+(7,3,3)`, `square_of_path(6)`) or passed separately, e.g.
/// `catalog("cycle", &[7])`. A bare `C` is the eight-vertex cubic graph, not a cycle.
pub fn catalog(name: &str, params: &[usize]) -> Result<Graph, CatalogError> {
    let (base, mut ps) = parse_name(name)?;
    ps.extend_from_slice(params);
    build(&base, &ps, name)
}

/// Splits a name into a base identifier and its numeric parameters.
pub fn parse_name(name: &str) -> Result<(String, Vec<usize>), CatalogError> {
    let unknown = || CatalogError::UnknownName(name.to_string());
    let s = name.trim();
    let fixed = ["A", "A+", "B", "B+", "C", "C+", "D", "K23_plus_edge", "K2,3+e"];
    if fixed.contains(&s) {
        let base = match s {
            "K2,3+e" => "K23_plus_edge",
            "C" => "Ccubic",
            "C+" => "Ccubic+",
            _ => s,
        };
        return Ok((base.to_string(), vec![]));
    }
    if let Some(open) = s.find('(') {
        let base = &s[..open];
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
        let ps = parse_list(inner).ok_or_else(unknown)?;
        return Ok((base.to_string(), ps));
    }
    for (prefix, base) in [("K_{", "K"), ("C_", "C"), ("P_", "P"), ("W_", "W"), ("F_", "F")] {
        if let Some(rest) = s.strip_prefix(prefix) {
            let rest = rest.trim_end_matches('}');
            return parse_name(&format!("{base}{rest}")).map_err(|_| unknown());
        }
    }
    let letter: String = s.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    let rest = &s[letter.len()..];
    match letter.as_str() {
        "K" => {
            if let Some(num) = rest.strip_suffix('-').or_else(|| rest.strip_suffix("_minus")) {
                let n = num.parse().map_err(|_| unknown())?;
                return Ok(("K-".into(), vec![n]));
            }
            let ps = parse_list(rest).ok_or_else(unknown)?;
            match ps.len() {
                1 => Ok(("K".into(), ps)),
                2 => Ok(("Kab".into(), ps)),
                _ => Err(unknown()),
            }
        }
        "C" | "P" | "W" | "F" => {
            let n = rest.parse().map_err(|_| unknown())?;
            Ok((letter, vec![n]))
        }
        "cycle" | "path" | "wheel" | "fan" | "complete" | "complete_minus" | "complete_bipartite" if rest.is_empty() => {
            let base = match letter.as_str() {
                "cycle" => "C",
                "path" => "P",
                "wheel" => "W",
                "fan" => "F",
                "complete" => "K",
                "complete_minus" => "K-",
                _ => "Kab",
            };
            Ok((base.into(), vec![]))
        }
        _ => Err(unknown()),
    }
}

fn parse_list(s: &str) -> Option<Vec<usize>> {
    if s.is_empty() {
        return Some(vec![]);
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

fn build(base: &str, ps: &[usize], name: &str) -> Result<Graph, CatalogError> {
    let bad = |why: &str| CatalogError::BadParameters(name.to_string(), why.to_string());
    let need = |k: usize| -> Result<(), CatalogError> {
        if ps.len() == k {
            Ok(())
        } else {
            Err(bad(&format!("expected {k} parameter(s)")))
        }
    };
    let g = match base {
        "K" => {
            need(1)?;
            complete(ps[0])
        }
        "K-" => {
            need(1)?;
            if ps[0] < 2 {
                return Err(bad("need n >= 2"));
            }
            complete(ps[0]).without_edge(0, 1)
        }
        "Kab" => {
            need(2)?;
            let (a, b) = (ps[0], ps[1]);
            let es: Vec<_> = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
            Graph::from_edges(a + b, &es)
        }
        "C" => {
            need(1)?;
            if ps[0] < 3 {
                return Err(bad("cycles need n >= 3"));
            }
            cycle(ps[0])
        }
        "P" => {
            need(1)?;
            if ps[0] < 1 {
                return Err(bad("paths need n >= 1"));
            }
            path(ps[0])
        }
        "W" | "F" => {
            need(1)?;
            let n = ps[0];
            if n < 4 {
                return Err(bad("need n >= 4"));
            }
            let mut es: Vec<_> = (1..n).map(|i| (0, i)).collect();
            es.extend((1..n - 1).map(|i| (i, i + 1)));
            if base == "W" {
                es.push((n - 1, 1));
            }
            Graph::from_edges(n, &es)
        }
        "A" | "A+" => {
            let mut es: Vec<_> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
            es.push((1, 2));
            if base == "A+" {
                es.push((4, 5));
            }
            Graph::from_edges(6, &es)
        }
        "B" | "B+" => {
            let (t0, t1, t2, t3, b0, b1, b2) = (0, 1, 2, 3, 4, 5, 6);
            let mut es = vec![
                (t0, b0), (t0, b1), (t0, t1), (t1, b0), (t1, b2),
                (t2, b0), (t2, b1), (t2, b2), (t3, b0), (t3, b1), (t3, b2),
            ];
            if base == "B+" {
                es.push((t2, t3));
            }
            Graph::from_edges(7, &es)
        }
        "Ccubic" => cubic_c(false),
        "Ccubic+" => cubic_c(true),
        "D" => Graph::from_edges(
            7,
            &[(5, 0), (0, 1), (1, 2), (2, 0), (5, 4), (4, 6), (6, 5), (6, 1), (1, 3), (3, 0), (3, 2), (2, 4)],
        ),
        "G" | "G+" => {
            need(3)?;
            let (n, r, s) = (ps[0], ps[1], ps[2]);
            let plus = base == "G+";
            let standard = 2 <= r && r <= s && n >= 2 && r + s + 2 >= n && r + s < n;
            let exceptional = plus && r == 1 && n >= 4 && s + 3 == n;
            if !(standard || exceptional) {
                return Err(bad("need 2 <= r <= s and n-2 <= r+s <= n-1 (or G+(n,1,n-3), n >= 4)"));
            }
            // 1-based v_i is vertex i-1
            let mut es: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            es.extend((1..=r).map(|i| (0, n - i - 1)));
            es.extend((1..=s).map(|i| (i, n - 1)));
            if plus {
                es.push((0, n - 1));
            }
            es.sort_unstable();
            es.dedup();
            Graph::new(n, es).map_err(|e| bad(&e.to_string()))?
        }
        "K23_plus_edge" => Graph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3)]),
        "square_of_path" => {
            need(1)?;
            let n = ps[0];
            let mut es: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
            es.extend((0..n.saturating_sub(2)).map(|i| (i, i + 2)));
            Graph::from_edges(n, &es)
        }
        _ => return Err(CatalogError::UnknownName(name.to_string())),
    };
    Ok(g)
}

fn complete(n: usize) -> Graph {
    let es: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &es)
}

fn cycle(n: usize) -> Graph {
    let es: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &es)
}

fn path(n: usize) -> Graph {
    let es: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &es)
}

/// The cubic graph `C`/`C+`, kept separate because `C<n>` names cycles.
fn cubic_c(plus: bool) -> Graph {
    let (t0, t1, t2, t3, b0, b1, b2, m) = (0, 1, 2, 3, 4, 5, 6, 7);
    let mut es = vec![
        (t0, b1), (t0, t1), (t1, b2), (t2, b0), (t2, b1), (t2, b2),
        (t3, b0), (t3, b1), (t3, b2), (t0, m), (m, t1), (b0, m),
    ];
    if plus {
        es.push((t2, t3));
    }
    Graph::from_edges(8, &es)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degeneracy, is_planar};

    #[test]
    fn sizes() {
        let cases = [
            ("K5-", 5, 9), ("K5_minus", 5, 9), ("K3,3", 6, 9), ("K_{3,3}", 6, 9), ("A", 6, 10), ("A+", 6, 11),
            ("B", 7, 11), ("B+", 7, 12), ("C", 8, 12), ("C+", 8, 13), ("D", 7, 12), ("W5", 5, 8),
            ("F5", 5, 7), ("G+(6,2,3)", 6, 11), ("G+(7,3,3)", 7, 13), ("G(7,3,3)", 7, 12),
            ("K23_plus_edge", 5, 7), ("square_of_path(6)", 6, 9), ("C6", 6, 6), ("P4", 4, 3),
        ];
        for (name, n, m) in cases {
            let g = catalog(name, &[]).unwrap();
            assert_eq!((g.n(), g.m()), (n, m), "{name}");
        }
    }

    #[test]
    fn g733_plus_edges() {
        let g = catalog("G+(7,3,3)", &[]).unwrap();
        let expected = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6),
            (0, 3), (0, 4), (0, 5), (1, 6), (2, 6), (3, 6), (0, 6),
        ];
        for (u, v) in expected {
            assert!(g.has_edge(u, v));
        }
        assert_eq!(g.m(), expected.len());
    }

    #[test]
    fn fig2_graphs_contain_degree_three_path_or_triangle() {
        // the cubic graph C and the K4 inside D
        let c = catalog("C", &[]).unwrap();
        assert!((0..8).all(|v| c.degree(v) == 3));
        let d = catalog("D", &[]).unwrap();
        for u in 0..4 {
            for v in u + 1..4 {
                assert!(d.has_edge(u, v));
            }
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(catalog("G(7,1,5)", &[]), Err(CatalogError::BadParameters(..))));
        assert!(catalog("G+(6,1,3)", &[]).is_ok());
        assert!(matches!(catalog("Q7", &[]), Err(CatalogError::UnknownName(_))));
        assert!(matches!(catalog("C2", &[]), Err(CatalogError::BadParameters(..))));
    }

    #[test]
    fn series_parallel_members_are_two_degenerate() {
        for name in ["K23_plus_edge", "F6", "C7", "P5", "square_of_path(7)", "K2,5"] {
            let g = catalog(name, &[]).unwrap();
            assert!(degeneracy(&g).0 <= 2, "{name}");
            assert!(is_planar(&g).is_planar());
        }
    }
}
