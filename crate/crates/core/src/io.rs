//! JSON documents for graphs and orderings, and DOT export.
//!
//! Graph: `{"n": 3, "edges": [[0,1],[1,2]]}` with 0-based ids, `u != v`, and
//! each unordered pair at most once. Ordering: `{"order": [v_1, ..., v_n]}`
//! listing vertices from smallest to largest.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgePairSet, Graph, Vertex, VertexOrdering};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrderingDoc {
    pub order: Vec<Vertex>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut seen = std::collections::HashSet::new();
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u >= self.n || v >= self.n {
                return Err(Error::Parse(format!(
                    "edges[{i}] = [{u},{v}]: vertex out of range for n = {}",
                    self.n
                )));
            }
            if u == v {
                return Err(Error::Parse(format!("edges[{i}] = [{u},{v}]: self-loop")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse(format!("edges[{i}] = [{u},{v}]: duplicate edge")));
            }
        }
        Graph::from_edges(self.n, self.edges.iter().map(|&[u, v]| (u, v)))
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    doc.to_graph()
}

pub fn serialize_graph(g: &Graph) -> String {
    serde_json::to_string(&GraphDoc::from(g)).expect("graph document serialises")
}

pub fn parse_ordering(text: &str) -> Result<VertexOrdering> {
    let doc: OrderingDoc = serde_json::from_str(text)?;
    VertexOrdering::from_order(doc.order).map_err(|e| Error::Parse(format!("order: {e}")))
}

pub fn serialize_ordering(l: &VertexOrdering) -> String {
    serde_json::to_string(&OrderingDoc {
        order: l.order().to_vec(),
    })
    .expect("ordering document serialises")
}

pub fn pairs_to_json(set: &EdgePairSet) -> Vec<[Vertex; 2]> {
    set.iter().map(|(u, v)| [u, v]).collect()
}

/// DOT rendering of `g`. `extra` pairs not already in `g` are drawn dashed;
/// `succ` is drawn as a directed chain.
pub fn to_dot(g: &Graph, extra: Option<&EdgePairSet>, succ: Option<&[Vertex]>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    if let Some(extra) = extra {
        for (u, v) in extra.iter().filter(|&(u, v)| !g.has_edge(u, v)) {
            let _ = writeln!(out, "  {u} -- {v} [style=dashed];");
        }
    }
    if let Some(succ) = succ {
        for w in succ.windows(2) {
            let _ = writeln!(out, "  {} -- {} [dir=forward, color=blue];", w[0], w[1]);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_graph(r#"{"n":2,"edges":[[0,1]]}"#).unwrap(), Graph::complete(2));
        assert_eq!(parse_graph(r#"{"n":1,"edges":[]}"#).unwrap(), Graph::empty(1));
        let err = parse_graph(r#"{"n":3,"edges":[[0,1],[1,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("self-loop"), "{err}");
        assert!(err.to_string().contains("edges[1]"), "{err}");
        let err = parse_graph(r#"{"n":3,"edges":[[0,1],[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let err = parse_graph(r#"{"n":3,"edges":[[0,7]]}"#).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        assert!(parse_graph(r#"{"n":3,"edge":[]}"#).is_err());
    }

    #[test]
    fn ordering_doc() {
        let l = parse_ordering(r#"{"order":[2,0,1]}"#).unwrap();
        assert_eq!(l.order(), &[2, 0, 1]);
        assert_eq!(serialize_ordering(&l), r#"{"order":[2,0,1]}"#);
        assert!(parse_ordering(r#"{"order":[0,0]}"#).is_err());
    }

    #[test]
    fn dot_marks_augmentation() {
        let g = Graph::path(3);
        let f = EdgePairSet::from_pairs([(0, 2), (0, 1)]).unwrap();
        let dot = to_dot(&g, Some(&f), Some(&[0, 1, 2]));
        assert!(dot.starts_with("graph G {"));
        assert!(dot.contains("0 -- 2 [style=dashed];"));
        assert!(!dot.contains("0 -- 1 [style=dashed];"));
        assert!(dot.contains("1 -- 2 [dir=forward"));
    }
}
