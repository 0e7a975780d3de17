//! Two encodings of arbitrary graphs into very simple ordered hosts: a
//! partial matching under a linear order, and a star forest under a
//! successor relation. Both come with exact decoders.
//!
//! Matching-encoding positions are 1-based in the interval arithmetic; host
//! vertex `p - 1` is position `p`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, SuccessorRelation, Vertex, VertexOrdering};
use crate::io::GraphDoc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedMatchingEncoding {
    pub host: Graph,
    pub order: VertexOrdering,
    /// 1-based `(D_i, D_i + d̂_i - 1)` per original vertex.
    pub intervals: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarForestEncoding {
    pub host: Graph,
    pub succ: SuccessorRelation,
    /// `(v⁻¹, v, v⁺¹)` host ids per original vertex.
    pub vertex_gadgets: Vec<[Vertex; 3]>,
    /// `(e⁻¹, e, e⁺¹)` host ids per edge, edges in lexicographic order.
    pub edge_gadgets: Vec<[Vertex; 3]>,
}

pub fn is_partial_matching(g: &Graph) -> bool {
    g.max_degree() <= 1
}

/// Every component has at most one vertex of degree above 1.
pub fn is_star_forest(g: &Graph) -> bool {
    g.components()
        .iter()
        .all(|c| c.iter().filter(|&&v| g.degree(v) > 1).count() <= 1)
}

/// `D_1, ..., D_n` for the hatted degrees.
fn interval_starts(dhat: &[usize]) -> Vec<usize> {
    let mut starts = Vec::with_capacity(dhat.len());
    let mut sum = 0;
    for (i, &d) in dhat.iter().enumerate() {
        starts.push(2 * (i + 1) - 1 + sum);
        sum += d;
    }
    starts
}

pub fn encode_matching_order(g: &Graph) -> OrderedMatchingEncoding {
    let n = g.n();
    let dhat: Vec<usize> = (0..n).map(|v| g.degree(v).max(1)).collect();
    let starts = interval_starts(&dhat);
    let size = if n == 0 { 0 } else { starts[n - 1] + dhat[n - 1] - 1 };
    let mut edges = Vec::with_capacity(n.saturating_sub(1) + g.m());
    for &d in &starts[1.min(n)..] {
        edges.push((d - 2 - 1, d - 1 - 1));
    }
    // neighbour lists are sorted by id, so index = rank among neighbours
    let rank = |of: Vertex, among: Vertex| g.neighbors(among).binary_search(&of).expect("adjacent");
    for (i, j) in g.edges() {
        let k = rank(j, i);
        let l = rank(i, j);
        edges.push((starts[i] + k - 1, starts[j] + l - 1));
    }
    let host = Graph::from_edges(size, edges).expect("slots are distinct by construction");
    OrderedMatchingEncoding {
        host,
        order: VertexOrdering::identity(size),
        intervals: starts.iter().zip(&dhat).map(|(&s, &d)| (s, s + d - 1)).collect(),
    }
}

/// Intervals are the maximal runs between edges joining order-consecutive
/// elements; every other host edge joins two intervals.
pub fn decode_matching_order(host: &Graph, order: &VertexOrdering) -> Result<Graph> {
    let size = host.n();
    if order.len() != size {
        return Err(Error::Decode(format!(
            "order has {} elements but the host has {size}",
            order.len()
        )));
    }
    if !is_partial_matching(host) {
        return Err(Error::Decode("host has a vertex of degree above 1".into()));
    }
    let seq = order.order();
    let mut interval_of = vec![None; size];
    let mut n = 0;
    let mut i = 0;
    while i < size {
        let run_start = i;
        while i < size && !(i + 1 < size && host.has_edge(seq[i], seq[i + 1])) {
            interval_of[seq[i]] = Some(n);
            i += 1;
        }
        if i == run_start {
            return Err(Error::Decode(format!("empty interval before position {}", i + 1)));
        }
        n += 1;
        if i < size {
            // separator pair at i, i + 1
            i += 2;
            if i >= size {
                return Err(Error::Decode("encoding ends with a separator".into()));
            }
        }
    }
    let mut edges = Vec::new();
    for (a, b) in host.edges() {
        match (interval_of[a], interval_of[b]) {
            (Some(x), Some(y)) if x != y => edges.push((x, y)),
            (Some(_), Some(_)) => return Err(Error::Decode(format!("host edge [{a},{b}] stays inside one interval"))),
            (None, None) if order.rank(a).abs_diff(order.rank(b)) == 1 => {}
            _ => return Err(Error::Decode(format!("host edge [{a},{b}] touches a separator gap"))),
        }
    }
    Graph::from_edges(n, edges).map_err(|e| Error::Decode(e.to_string()))
}

pub fn encode_starforest_successor(g: &Graph) -> StarForestEncoding {
    let n = g.n();
    let edge_list: Vec<(Vertex, Vertex)> = g.edges().collect();
    let total = 3 * (n + edge_list.len());
    let vertex_gadgets: Vec<[Vertex; 3]> = (0..n).map(|v| [3 * v, 3 * v + 1, 3 * v + 2]).collect();
    let edge_gadgets: Vec<[Vertex; 3]> = (0..edge_list.len())
        .map(|t| {
            let b = 3 * n + 3 * t;
            [b, b + 1, b + 2]
        })
        .collect();
    let mut edges = Vec::with_capacity(2 * n + 2 * edge_list.len());
    for [a, v, b] in &vertex_gadgets {
        edges.push((*a, *v));
        edges.push((*v, *b));
    }
    // v precedes w in succ because vertex gadgets follow id order
    for (&(v, w), [lo, _, hi]) in edge_list.iter().zip(&edge_gadgets) {
        edges.push((vertex_gadgets[v][1], *lo));
        edges.push((vertex_gadgets[w][1], *hi));
    }
    StarForestEncoding {
        host: Graph::from_edges(total, edges).expect("gadget wiring is simple"),
        succ: SuccessorRelation::new((0..total).collect()).expect("identity is a permutation"),
        vertex_gadgets,
        edge_gadgets,
    }
}

/// Reads consecutive triples of the successor relation: vertex gadgets have
/// a middle joined to both ends, edge gadgets an isolated middle.
pub fn decode_starforest_successor(host: &Graph, succ: &SuccessorRelation) -> Result<Graph> {
    let total = host.n();
    let seq = succ.order();
    if seq.len() != total || total % 3 != 0 {
        return Err(Error::Decode(format!(
            "successor of length {} over {total} host vertices is not a union of triples",
            seq.len()
        )));
    }
    let blocks: Vec<&[Vertex]> = seq.chunks(3).collect();
    let n = blocks
        .iter()
        .take_while(|b| host.degree(b[1]) >= 2 && host.has_edge(b[0], b[1]) && host.has_edge(b[1], b[2]))
        .count();
    let mut vertex_of = vec![None; total];
    for (v, b) in blocks[..n].iter().enumerate() {
        if host.degree(b[0]) != 1 || host.degree(b[2]) != 1 {
            return Err(Error::Decode(format!("vertex gadget {v} has an end of degree other than 1")));
        }
        vertex_of[b[1]] = Some(v);
    }
    let endpoint = |x: Vertex| -> Result<Vertex> {
        match host.neighbors(x) {
            [y] => vertex_of[*y].ok_or_else(|| Error::Decode(format!("{x} is not wired to a vertex gadget"))),
            _ => Err(Error::Decode(format!("edge gadget end {x} must have exactly one neighbour"))),
        }
    };
    let mut edges = Vec::with_capacity(blocks.len() - n);
    for b in &blocks[n..] {
        if host.degree(b[1]) != 0 {
            return Err(Error::Decode(format!("gadget middle {} is neither a vertex nor an edge", b[1])));
        }
        let (v, w) = (endpoint(b[0])?, endpoint(b[2])?);
        if v >= w {
            return Err(Error::Decode(format!(
                "edge gadget at {} joins {v} to {w} against the successor order",
                b[0]
            )));
        }
        edges.push((v, w));
    }
    let wired: usize = blocks[..n].iter().map(|b| host.degree(b[1]) - 2).sum();
    if wired != 2 * edges.len() {
        return Err(Error::Decode("vertex gadgets carry edges not belonging to any edge gadget".into()));
    }
    Graph::from_edges(n, edges).map_err(|e| Error::Decode(e.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingTables {
    /// Add this to a host id to get the position used by the intervals.
    pub position_offset: usize,
    /// 0-based host ids `[first, last]` of every vertex's interval.
    pub intervals: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingDoc {
    pub host: GraphDoc,
    pub order: Vec<Vertex>,
    pub tables: MatchingTables,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarForestTables {
    pub vertices: Vec<[Vertex; 3]>,
    pub edges: Vec<[Vertex; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarForestDoc {
    pub host: GraphDoc,
    pub succ: Vec<Vertex>,
    pub tables: StarForestTables,
}

impl OrderedMatchingEncoding {
    pub fn to_doc(&self) -> MatchingDoc {
        MatchingDoc {
            host: GraphDoc::from(&self.host),
            order: self.order.order().to_vec(),
            tables: MatchingTables {
                position_offset: 1,
                intervals: self.intervals.iter().map(|&(a, b)| [a - 1, b - 1]).collect(),
            },
        }
    }

    pub fn decode(&self) -> Result<Graph> {
        decode_matching_order(&self.host, &self.order)
    }
}

impl StarForestEncoding {
    pub fn to_doc(&self) -> StarForestDoc {
        StarForestDoc {
            host: GraphDoc::from(&self.host),
            succ: self.succ.order().to_vec(),
            tables: StarForestTables {
                vertices: self.vertex_gadgets.clone(),
                edges: self.edge_gadgets.clone(),
            },
        }
    }

    pub fn decode(&self) -> Result<Graph> {
        decode_starforest_successor(&self.host, &self.succ)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_examples() {
        let e = encode_matching_order(&Graph::empty(4));
        assert_eq!(e.intervals, vec![(1, 1), (4, 4), (7, 7), (10, 10)]);
        assert_eq!(e.host.m(), 3);
        assert_eq!(e.decode().unwrap(), Graph::empty(4));

        let k2 = Graph::complete(2);
        let e = encode_matching_order(&k2);
        assert_eq!(e.intervals, vec![(1, 1), (4, 4)]);
        let mut edges: Vec<_> = e.host.edges().collect();
        edges.sort();
        // positions {1,4} and {2,3}, shifted to ids
        assert_eq!(edges, vec![(0, 3), (1, 2)]);
        assert_eq!(e.decode().unwrap(), k2);

        let star = Graph::star(3);
        let e = encode_matching_order(&star);
        assert_eq!(e.intervals[0], (1, 3));
        assert!(e.intervals[1..].iter().all(|&(a, b)| a == b));
        assert!(is_partial_matching(&e.host));
        assert_eq!(e.decode().unwrap(), star);

        let e0 = encode_matching_order(&Graph::empty(0));
        assert_eq!(e0.host.n(), 0);
        assert_eq!(e0.decode().unwrap(), Graph::empty(0));
    }

    #[test]
    fn matching_decode_rejects_garbage() {
        let host = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(decode_matching_order(&host, &VertexOrdering::identity(3)).is_err());
        let host = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        assert!(decode_matching_order(&host, &VertexOrdering::identity(4)).is_err());
    }

    #[test]
    fn starforest_examples() {
        let e = encode_starforest_successor(&Graph::empty(2));
        assert_eq!(e.host.n(), 6);
        assert_eq!(e.host.m(), 4);
        assert!(is_star_forest(&e.host));
        assert_eq!(e.decode().unwrap(), Graph::empty(2));

        let k2 = Graph::complete(2);
        let e = encode_starforest_successor(&k2);
        assert_eq!(e.host.n(), 9);
        assert_eq!(e.host.neighbors(1), &[0, 2, 6]);
        assert_eq!(e.host.degree(7), 0);
        assert_eq!(e.decode().unwrap(), k2);

        let c5 = Graph::cycle(5);
        let e = encode_starforest_successor(&c5);
        assert!(is_star_forest(&e.host));
        assert_eq!(e.decode().unwrap(), c5);
    }

    #[test]
    fn star_forest_checker() {
        assert!(is_star_forest(&Graph::star(4)));
        assert!(!is_star_forest(&Graph::path(4)));
        assert!(!is_star_forest(&Graph::cycle(3)));
    }
}
