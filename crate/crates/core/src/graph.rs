//! Simple undirected graphs on dense vertex ids, vertex orderings, and the
//! small set types the constructions pass around.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates, and
    /// out-of-range ids.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj, m })
    }

    /// Like [`Graph::from_edges`] but silently collapses repeated pairs.
    /// Self-loops and out-of-range ids are still errors.
    pub fn from_edges_dedup(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { adj, m: m / 2 })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    /// Star with centre 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn edge_set(&self) -> EdgePairSet {
        EdgePairSet {
            pairs: self.edges().collect(),
        }
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }

    /// A graph is a tree when it is connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m + 1 == self.n() && self.is_connected()
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in the
    /// given order. Returns the subgraph and the old id of each new vertex.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut m = 0;
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != usize::MAX {
                    adj[i].push(index[w]);
                    if i < index[w] {
                        m += 1;
                    }
                }
            }
            adj[i].sort_unstable();
        }
        (Graph { adj, m }, vertices.to_vec())
    }

    /// Breadth-first distances from `source`, `usize::MAX` when unreachable.
    pub fn distances_from(&self, source: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

fn check_vertex(v: Vertex, n: usize) -> Result<()> {
    if v >= n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// A set of unordered vertex pairs `{u, v}` with `u != v`, stored as `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgePairSet {
    pairs: BTreeSet<(Vertex, Vertex)>,
}

impl EdgePairSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let pairs = pairs
            .into_iter()
            .map(|(u, v)| if u == v { Err(Error::SelfLoop(u)) } else { Ok((u.min(v), u.max(v))) })
            .collect::<Result<Vec<_>>>()?;
        // bulk construction from a sorted list
        Ok(EdgePairSet {
            pairs: pairs.into_iter().collect(),
        })
    }

    /// Inserts `{u, v}`; returns whether the pair was new.
    pub fn insert(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(self.pairs.insert((u.min(v), u.max(v))))
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.pairs.contains(&(u.min(v), u.max(v)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.pairs.iter().map(|&(_, v)| v).max()
    }

    /// Degree of every vertex `0..n` in the graph spanned by the pairs.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for (u, v) in self.iter() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// The pairs as a graph on `n` vertices.
    pub fn to_graph(&self, n: usize) -> Result<Graph> {
        Graph::from_edges(n, self.iter())
    }

    pub fn union(&self, other: &EdgePairSet) -> EdgePairSet {
        EdgePairSet {
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }
}

impl FromIterator<(Vertex, Vertex)> for EdgePairSet {
    /// Panics on a self-pair; use [`EdgePairSet::from_pairs`] for fallible input.
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex)>>(iter: I) -> Self {
        EdgePairSet::from_pairs(iter).expect("self-pair in EdgePairSet")
    }
}

/// A linear order `L` on `0..n`. Ranks are 0-based internally: `rank(v) == 0`
/// for the `L`-smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrdering {
    order: Vec<Vertex>,
    position: Vec<usize>,
}

impl VertexOrdering {
    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            order: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    /// From the vertices listed smallest-first. Must be a permutation of `0..n`.
    pub fn from_order(order: Vec<Vertex>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (rank, &v) in order.iter().enumerate() {
            check_vertex(v, n)?;
            if position[v] != usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} appears twice in the ordering"
                )));
            }
            position[v] = rank;
        }
        Ok(VertexOrdering { order, position })
    }

    /// From 0-based ranks indexed by vertex.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut order = vec![usize::MAX; n];
        for (v, &r) in ranks.iter().enumerate() {
            if r >= n || order[r] != usize::MAX {
                return Err(Error::InvalidInput(format!("rank {r} of vertex {v} is invalid")));
            }
            order[r] = v;
        }
        Ok(VertexOrdering {
            order,
            position: ranks,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: Vertex) -> usize {
        self.position[v]
    }

    /// `u <_L v`
    #[inline]
    pub fn less(&self, u: Vertex, v: Vertex) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn ranks(&self) -> &[usize] {
        &self.position
    }

    /// `L` restricted to `vertices` and relabelled like [`Graph::induced`].
    pub fn restrict(&self, vertices: &[Vertex]) -> VertexOrdering {
        let mut idx: Vec<usize> = (0..vertices.len()).collect();
        idx.sort_by_key(|&i| self.position[vertices[i]]);
        VertexOrdering::from_order(idx).expect("restriction is a permutation")
    }
}

/// A successor relation: the vertices listed along a single directed
/// Hamiltonian path. The relation is the set of consecutive pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuccessorRelation {
    order: Vec<Vertex>,
}

impl SuccessorRelation {
    pub fn new(order: Vec<Vertex>) -> Result<Self> {
        VertexOrdering::from_order(order.clone())?;
        Ok(SuccessorRelation { order })
    }

    /// Recovers the path from a set of ordered pairs on `0..n`, checking that
    /// they form a single directed path through every vertex.
    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        if n == 0 {
            return if pairs.is_empty() {
                Ok(SuccessorRelation { order: Vec::new() })
            } else {
                Err(Error::InvalidInput("pairs on an empty universe".into()))
            };
        }
        if pairs.len() != n - 1 {
            return Err(Error::InvalidInput(format!(
                "{} pairs, a successor relation on {n} elements has {}",
                pairs.len(),
                n - 1
            )));
        }
        let mut next = vec![usize::MAX; n];
        let mut has_pred = vec![false; n];
        for &(a, b) in pairs {
            check_vertex(a, n)?;
            check_vertex(b, n)?;
            if next[a] != usize::MAX || has_pred[b] || a == b {
                return Err(Error::InvalidInput(format!("pair ({a},{b}) breaks the path")));
            }
            next[a] = b;
            has_pred[b] = true;
        }
        let start = (0..n)
            .find(|&v| !has_pred[v])
            .ok_or_else(|| Error::InvalidInput("pairs form a cycle".into()))?;
        let mut order = Vec::with_capacity(n);
        let mut cur = start;
        loop {
            order.push(cur);
            if next[cur] == usize::MAX || order.len() > n {
                break;
            }
            cur = next[cur];
        }
        if order.len() != n {
            return Err(Error::InvalidInput("pairs do not form a single path".into()));
        }
        Ok(SuccessorRelation { order })
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The ordered consecutive pairs `(s_i, s_{i+1})`.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.order.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// The underlying undirected pairs.
    pub fn undirected(&self) -> EdgePairSet {
        self.pairs().into_iter().collect()
    }
}

/// `G + F`: the graph with edge set `E(G) ∪ F`.
pub fn add_edges(g: &Graph, f: &EdgePairSet) -> Result<Graph> {
    if let Some(v) = f.max_vertex() {
        check_vertex(v, g.n())?;
    }
    Graph::from_edges_dedup(g.n(), g.edges().chain(f.iter()))
}

/// `G • K_t`: vertex `(v, i)` is encoded as `v * t + i`.
pub fn lex_product_clique(g: &Graph, t: usize) -> Result<Graph> {
    if t == 0 {
        return Err(Error::InvalidInput("lexicographic product needs t >= 1".into()));
    }
    let n = g.n();
    let mut edges = Vec::with_capacity(g.m() * t * t + n * t * (t - 1) / 2);
    for v in 0..n {
        for i in 0..t {
            for j in i + 1..t {
                edges.push((v * t + i, v * t + j));
            }
        }
    }
    for (u, v) in g.edges() {
        for i in 0..t {
            for j in 0..t {
                edges.push((u * t + i, v * t + j));
            }
        }
    }
    Graph::from_edges(n * t, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(Graph::from_edges(3, [(0, 1), (1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn add_edges_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(add_edges(&k2, &EdgePairSet::new()).unwrap(), k2);
        let two = Graph::empty(2);
        let f = EdgePairSet::from_pairs([(0, 1)]).unwrap();
        assert_eq!(add_edges(&two, &f).unwrap(), k2);
        let p3 = Graph::path(3);
        let f = EdgePairSet::from_pairs([(0, 2)]).unwrap();
        let tri = add_edges(&p3, &f).unwrap();
        assert_eq!(tri.m(), 3);
        assert_eq!(tri, Graph::complete(3));
        // existing edges collapse
        let f = EdgePairSet::from_pairs([(0, 1)]).unwrap();
        assert_eq!(add_edges(&p3, &f).unwrap(), p3);
        let bad = EdgePairSet::from_pairs([(0, 5)]).unwrap();
        assert!(matches!(add_edges(&p3, &bad), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn lex_product_examples() {
        let p3 = Graph::path(3);
        assert_eq!(lex_product_clique(&p3, 1).unwrap(), p3);
        let k4 = lex_product_clique(&Graph::complete(2), 2).unwrap();
        assert_eq!(k4, Graph::complete(4));
        let g = lex_product_clique(&p3, 3).unwrap();
        assert_eq!((g.n(), g.m()), (9, 27));
        assert!(lex_product_clique(&p3, 0).is_err());
    }

    #[test]
    fn successor_from_pairs() {
        let s = SuccessorRelation::from_pairs(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(s.order(), &[2, 0, 1]);
        assert!(SuccessorRelation::from_pairs(3, &[(0, 1), (1, 0)]).is_err());
        assert!(SuccessorRelation::from_pairs(4, &[(0, 1), (2, 3), (3, 2)]).is_err());
        assert!(SuccessorRelation::from_pairs(1, &[]).unwrap().pairs().is_empty());
    }

    #[test]
    fn ordering_roundtrip() {
        let l = VertexOrdering::from_order(vec![2, 0, 1]).unwrap();
        assert_eq!(l.rank(2), 0);
        assert!(l.less(0, 1) && l.less(2, 0));
        assert_eq!(VertexOrdering::from_ranks(l.ranks().to_vec()).unwrap(), l);
        assert!(VertexOrdering::from_order(vec![0, 0]).is_err());
        let r = l.restrict(&[0, 2]);
        assert_eq!(r.order(), &[1, 0]);
    }
}
