//! Spanning trees of maximum degree 3 whose addition keeps admissibility
//! bounded by the strong colouring number of twice the radius.
//!
//! For a connected graph and ordering `L`, the Union-Find sweep builds a
//! spanning tree `U` whose edges attach every vertex `u` to one neighbour in
//! each component of `G[{x >_L u}]` next to `u`. Rooting `U` at the `L`-least
//! vertex and replacing each star of children by a chain gives the
//! degree-3 tree `T`. Components are then joined by a path through
//! low-degree vertices.

use std::collections::VecDeque;

use serde::Serialize;

use crate::colnum::{adm_wrt_budget, col_wrt, DEFAULT_ADM_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{add_edges, EdgePairSet, Graph, Vertex, VertexOrdering};
use crate::unionfind::UnionFind;

/// Rooted elimination tree `S(G, L)` of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTree {
    pub parent: Vec<Option<Vertex>>,
    pub root: Vertex,
}

impl EliminationTree {
    pub fn children(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                out[p].push(v);
            }
        }
        out
    }

    /// Whether `a` is an ancestor of `b` (every vertex is its own ancestor).
    pub fn is_ancestor(&self, a: Vertex, b: Vertex) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    /// The vertex set of the subtree rooted at `v`.
    pub fn subtree(&self, v: Vertex) -> Vec<Vertex> {
        let children = self.children();
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&children[out[i]]);
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(())
}

/// Vertices from `L`-largest to `L`-smallest.
fn descending(l: &VertexOrdering) -> impl Iterator<Item = Vertex> + '_ {
    l.order().iter().rev().copied()
}

/// Sweeps from the `L`-largest vertex: when `u` is reached, the classes hold
/// the components of `G[{x >_L u}]`, and the `L`-least vertex of each class
/// next to `u` becomes a child of `u`.
pub fn build_elimination_tree(g: &Graph, l: &VertexOrdering) -> Result<EliminationTree> {
    require_connected(g)?;
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut top: Vec<Vertex> = (0..n).collect();
    let mut parent = vec![None; n];
    for u in descending(l) {
        for &w in g.neighbors(u) {
            if !l.less(u, w) {
                continue;
            }
            let (ru, rw) = (uf.find(u), uf.find(w));
            if ru != rw {
                parent[top[rw]] = Some(u);
                uf.union(ru, rw);
                let root = uf.find(u);
                top[root] = u;
            }
        }
    }
    Ok(EliminationTree {
        parent,
        root: l.order()[0],
    })
}

/// The edge set `B` of the spanning tree `U`.
pub fn build_tree_u(g: &Graph, l: &VertexOrdering) -> Result<EdgePairSet> {
    require_connected(g)?;
    Ok(tree_u_edges(g, l).into_iter().collect())
}

/// The Union-Find sweep itself, returning edges in the order they are added.
/// The caller guarantees connectivity.
pub fn tree_u_edges(g: &Graph, l: &VertexOrdering) -> Vec<(Vertex, Vertex)> {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut larger: Vec<Vertex> = Vec::new();
    for u in descending(l) {
        larger.clear();
        larger.extend(g.neighbors(u).iter().copied().filter(|&w| l.less(u, w)));
        larger.sort_unstable_by_key(|&w| l.rank(w));
        for &w in &larger {
            if uf.union(u, w) {
                edges.push((u, w));
            }
        }
    }
    edges
}

/// Rooted at the `L`-least vertex, each vertex `u` with children
/// `x_1 <_L ... <_L x_p` contributes `u x_1, x_1 x_2, ..., x_{p-1} x_p`.
pub fn build_degree3_tree(g: &Graph, l: &VertexOrdering, u: &EdgePairSet) -> Result<EdgePairSet> {
    let n = g.n();
    let tree = u.to_graph(n).map_err(|e| Error::NotATree(format!("U is not a simple graph on the vertex set: {e}")))?;
    if !tree.is_tree() {
        return Err(Error::NotATree(format!(
            "U has {} edges on {n} vertices and must be a spanning tree",
            tree.m()
        )));
    }
    let root = l.order()[0];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut f = EdgePairSet::new();
    let mut children = Vec::new();
    while let Some(x) = queue.pop_front() {
        children.clear();
        for &c in tree.neighbors(x) {
            if !seen[c] {
                seen[c] = true;
                parent[c] = x;
                children.push(c);
                queue.push_back(c);
            }
        }
        children.sort_unstable_by_key(|&c| l.rank(c));
        let mut prev = x;
        for &c in &children {
            f.insert(prev, c)?;
            prev = c;
        }
    }
    Ok(f)
}

/// Edges of the degree-3 spanning tree, before any measurement. Components
/// are taken in order of their `L`-least vertex and chained through the
/// `L`-least vertex of degree at most 1 in each component tree.
pub fn degree3_spanning_tree(g: &Graph, l: &VertexOrdering) -> Result<EdgePairSet> {
    let mut comps = g.components();
    comps.sort_by_key(|c| c.iter().map(|&v| l.rank(v)).min());
    let mut f = EdgePairSet::new();
    let mut glue: Vec<Vertex> = Vec::with_capacity(comps.len());
    for comp in &comps {
        let (h, ids) = g.induced(comp);
        let lh = l.restrict(comp);
        let u = tree_u_edges(&h, &lh).into_iter().collect();
        let t = build_degree3_tree(&h, &lh, &u)?;
        let deg = t.degrees(h.n());
        let low = lh
            .order()
            .iter()
            .copied()
            .find(|&x| deg[x] <= 1)
            .expect("every finite tree has a vertex of degree at most 1");
        glue.push(ids[low]);
        for (a, b) in t.iter() {
            f.insert(ids[a], ids[b])?;
        }
    }
    for w in glue.windows(2) {
        f.insert(w[0], w[1])?;
    }
    Ok(f)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanTreeReport {
    #[serde(rename = "F", serialize_with = "crate::spantree::pairs")]
    pub f: EdgePairSet,
    pub components: usize,
    pub max_degree: usize,
    pub spanning_tree: bool,
    pub adm_after: usize,
    pub col_2r_before: usize,
    /// `2 + 2 · col_2r(G, L)`
    pub bound: usize,
    pub bound_ok: bool,
}

pub(crate) fn pairs<S: serde::Serializer>(set: &EdgePairSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter().map(|(u, v)| [u, v]))
}

pub fn low_degree_spanning_tree(g: &Graph, l: &VertexOrdering, r: usize) -> Result<SpanTreeReport> {
    low_degree_spanning_tree_budget(g, l, r, DEFAULT_ADM_BUDGET)
}

pub fn low_degree_spanning_tree_budget(
    g: &Graph,
    l: &VertexOrdering,
    r: usize,
    budget: u64,
) -> Result<SpanTreeReport> {
    if g.n() == 0 {
        return Err(Error::InvalidInput("graph has no vertices".into()));
    }
    let f = degree3_spanning_tree(g, l)?;
    let t = f.to_graph(g.n())?;
    let gf = add_edges(g, &f)?;
    let adm_after = adm_wrt_budget(&gf, l, r, budget)?;
    let col_2r_before = col_wrt(g, l, 2 * r);
    let bound = 2 + 2 * col_2r_before;
    Ok(SpanTreeReport {
        components: g.components().len(),
        max_degree: t.max_degree(),
        spanning_tree: t.is_tree(),
        adm_after,
        col_2r_before,
        bound,
        bound_ok: adm_after <= bound,
        f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(usize, usize)]) -> EdgePairSet {
        EdgePairSet::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn elimination_tree_of_path() {
        let t = build_elimination_tree(&Graph::path(4), &VertexOrdering::identity(4)).unwrap();
        assert_eq!(t.parent, vec![None, Some(0), Some(1), Some(2)]);
        let k1 = build_elimination_tree(&Graph::empty(1), &VertexOrdering::identity(1)).unwrap();
        assert_eq!(k1.root, 0);
        assert!(matches!(
            build_elimination_tree(&Graph::empty(2), &VertexOrdering::identity(2)),
            Err(Error::NotConnected)
        ));
    }

    #[test]
    fn tree_u_examples() {
        let tri = Graph::complete(3);
        let b = build_tree_u(&tri, &VertexOrdering::identity(3)).unwrap();
        // 2 joins nobody; 1 picks up 2; 0 picks up the class {1, 2} once
        assert_eq!(b, set(&[(0, 1), (1, 2)]));
        let t = crate::random::random_tree(3, 30);
        let l = crate::random::random_ordering(4, 30);
        assert_eq!(build_tree_u(&t, &l).unwrap(), t.edge_set());
    }

    #[test]
    fn degree3_examples() {
        let p = Graph::path(5);
        let id = VertexOrdering::identity(5);
        assert_eq!(build_degree3_tree(&p, &id, &p.edge_set()).unwrap(), p.edge_set());
        let star = Graph::star(4);
        let f = build_degree3_tree(&star, &VertexOrdering::identity(5), &star.edge_set()).unwrap();
        assert_eq!(f, set(&[(0, 1), (1, 2), (2, 3), (3, 4)]));
        assert!(build_degree3_tree(&star, &VertexOrdering::identity(5), &set(&[(0, 1)])).is_err());
    }

    #[test]
    fn glue_two_edges() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let rep = low_degree_spanning_tree(&g, &VertexOrdering::identity(4), 1).unwrap();
        assert_eq!(rep.f, set(&[(0, 1), (0, 2), (2, 3)]));
        assert!(rep.spanning_tree && rep.max_degree <= 3 && rep.bound_ok);
        assert_eq!(rep.components, 2);
    }

    #[test]
    fn single_vertex_report() {
        let rep = low_degree_spanning_tree(&Graph::empty(1), &VertexOrdering::identity(1), 2).unwrap();
        assert!(rep.f.is_empty());
        assert_eq!((rep.adm_after, rep.col_2r_before, rep.bound_ok), (1, 1, true));
    }
}
