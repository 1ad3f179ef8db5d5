//! JSON form of a cover:
//! `{"graph":{"n":..,"edges":[[u,v],..]},"lists":[..],"matchings":[{"edge":[u,v],"map":[[i,j],..]},..]}`.
//! `lists` holds either sizes or colour-label arrays.

use super::{Cover, CoverError};
use crate::graph::{Graph, GraphError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoverJsonError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("lists must be all sizes or all label arrays")]
    MixedLists,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoverJson {
    pub graph: GraphJson,
    pub lists: Vec<ListJson>,
    pub matchings: Vec<MatchingJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum ListJson {
    Size(usize),
    Labels(Vec<i64>),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatchingJson {
    pub edge: [usize; 2],
    pub map: Vec<[usize; 2]>,
}

impl Serialize for Cover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl Cover {
    pub fn to_json_value(&self) -> CoverJson {
        let graph = GraphJson { n: self.n(), edges: self.base().edges().iter().map(|&(u, v)| [u, v]).collect() };
        let lists = match self.labels() {
            Some(ls) => ls.iter().cloned().map(ListJson::Labels).collect(),
            None => self.sizes().iter().copied().map(ListJson::Size).collect(),
        };
        let matchings = self
            .base()
            .edges()
            .iter()
            .zip(self.matchings())
            .map(|(&(u, v), m)| MatchingJson { edge: [u, v], map: m.pairs().into_iter().map(|(i, j)| [i, j]).collect() })
            .collect();
        CoverJson { graph, lists, matchings }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serialisable")
    }

    pub fn from_json_value(j: &CoverJson) -> Result<Cover, CoverJsonError> {
        let g = Graph::new(j.graph.n, j.graph.edges.iter().map(|e| (e[0], e[1])))?;
        let all_sizes = j.lists.iter().all(|l| matches!(l, ListJson::Size(_)));
        let all_labels = j.lists.iter().all(|l| matches!(l, ListJson::Labels(_)));
        if !all_sizes && !all_labels {
            return Err(CoverJsonError::MixedLists);
        }
        let sizes: Vec<usize> = j
            .lists
            .iter()
            .map(|l| match l {
                ListJson::Size(s) => *s,
                ListJson::Labels(v) => v.len(),
            })
            .collect();
        let ms: Vec<_> = j
            .matchings
            .iter()
            .map(|m| ((m.edge[0], m.edge[1]), m.map.iter().map(|p| (p[0], p[1])).collect()))
            .collect();
        let mut c = Cover::new(g, sizes, &ms)?;
        if all_labels && !j.lists.is_empty() {
            let labels: Vec<Vec<i64>> = j
                .lists
                .iter()
                .map(|l| match l {
                    ListJson::Labels(v) => v.clone(),
                    ListJson::Size(_) => unreachable!(),
                })
                .collect();
            for (v, l) in labels.iter().enumerate() {
                let mut s = l.clone();
                s.sort_unstable();
                s.dedup();
                if s.len() != l.len() {
                    return Err(CoverError::RepeatedColour(v).into());
                }
            }
            c.labels = Some(labels);
        }
        Ok(c)
    }

    pub fn from_json(s: &str) -> Result<Cover, CoverJsonError> {
        Cover::from_json_value(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::list_cover;
    use crate::graph::catalog;

    #[test]
    fn round_trip_sizes_and_labels() {
        let g = catalog("C5", &[]).unwrap();
        let c = list_cover(&g, &[vec![1, 2, 3], vec![2, 3, 4], vec![1, 4, 7], vec![3, 9, 1], vec![2, 8, 5]]).unwrap();
        let s = c.to_json();
        let back = Cover::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), s);
        let plain = c.forget_labels();
        let s2 = plain.to_json();
        assert!(s2.contains("\"lists\":[3,3,3,3,3]"));
        assert_eq!(Cover::from_json(&s2).unwrap(), plain);
    }

    #[test]
    fn reversed_edges_are_normalised() {
        let s = r#"{"graph":{"n":2,"edges":[[1,0]]},"lists":[2,3],"matchings":[{"edge":[1,0],"map":[[2,0]]}]}"#;
        let c = Cover::from_json(s).unwrap();
        assert_eq!(c.matching(0, 1).unwrap().pairs(), vec![(0, 2)]);
    }

    #[test]
    fn rejects_bad_maps() {
        let s = r#"{"graph":{"n":2,"edges":[[0,1]]},"lists":[2,2],"matchings":[{"edge":[0,1],"map":[[0,0],[1,0]]}]}"#;
        assert!(Cover::from_json(s).is_err());
    }
}
