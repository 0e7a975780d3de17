//! Successor relations from Hamiltonian paths in the cube of a spanning tree.

use num_bigint::BigUint;
use serde::Serialize;

use crate::colnum::{adm_wrt_budget, col_wrt, heuristic_ordering, DEFAULT_ADM_BUDGET};
use crate::density::bound_h;
use crate::error::{Error, Result};
use crate::graph::{add_edges, EdgePairSet, Graph, SuccessorRelation, Vertex, VertexOrdering};
use crate::spantree::degree3_spanning_tree;

/// A Hamiltonian path of the cube of `host_tree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubePath {
    pub order: Vec<Vertex>,
    pub host_tree: EdgePairSet,
}

impl CubePath {
    /// Consecutive vertices at tree distance at most 3, and every vertex once.
    pub fn is_valid(&self) -> bool {
        let n = self.order.len();
        let Ok(tree) = self.host_tree.to_graph(n) else {
            return false;
        };
        VertexOrdering::from_order(self.order.clone()).is_ok()
            && self.order.windows(2).all(|w| within_distance(&tree, w[0], w[1], 3))
    }
}

/// Whether `b` is at most `d` hops from `a`.
pub fn within_distance(g: &Graph, a: Vertex, b: Vertex, d: usize) -> bool {
    if a == b {
        return true;
    }
    let mut seen = std::collections::HashSet::from([a]);
    let mut frontier = vec![a];
    for _ in 0..d {
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in g.neighbors(x) {
                if y == b {
                    return true;
                }
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    false
}

/// Hamiltonian path in the cube of a tree on `0..n`, breaking ties by id.
pub fn ham_path_in_cube(tree: &EdgePairSet, n: usize) -> Result<CubePath> {
    ham_path_in_cube_with(tree, &VertexOrdering::identity(n))
}

/// As [`ham_path_in_cube`], starting at the `L`-least vertex and always
/// splicing through the `L`-least available neighbour.
///
/// For an edge `ab`, the path of the component through `ab` runs from `a`
/// to `b`: cut `ab`, walk the side of `a` from `a` to one of its remaining
/// neighbours `a'`, then the side of `b` from a neighbour `b'` to `b`. The
/// splice `a' b'` has tree distance 3.
pub fn ham_path_in_cube_with(tree: &EdgePairSet, l: &VertexOrdering) -> Result<CubePath> {
    let n = l.len();
    let t = tree
        .to_graph(n)
        .map_err(|e| Error::NotATree(format!("edge set is not a simple graph on {n} vertices: {e}")))?;
    if !t.is_tree() {
        return Err(Error::NotATree(format!(
            "{} edges on {n} vertices do not form a tree",
            t.m()
        )));
    }
    // adjacency with edge ids, sorted by rank
    let mut ids = std::collections::HashMap::with_capacity(t.m());
    for (i, e) in tree.iter().enumerate() {
        ids.insert(e, i);
    }
    let adj: Vec<Vec<(Vertex, usize)>> = (0..n)
        .map(|v| {
            let mut list: Vec<(Vertex, usize)> = t
                .neighbors(v)
                .iter()
                .map(|&w| (w, ids[&(v.min(w), v.max(w))]))
                .collect();
            list.sort_unstable_by_key(|&(w, _)| l.rank(w));
            list
        })
        .collect();
    let mut cut = vec![false; t.m()];
    let mut next = vec![0usize; n];
    let mut least_uncut = |v: Vertex, cut: &[bool]| -> Option<(Vertex, usize)> {
        while next[v] < adj[v].len() && cut[adj[v][next[v]].1] {
            next[v] += 1;
        }
        adj[v].get(next[v]).copied()
    };

    enum Task {
        Pair(Vertex, Vertex, usize),
        Single(Vertex),
    }
    let root = l.order()[0];
    let mut order = Vec::with_capacity(n);
    let mut stack = match least_uncut(root, &cut) {
        Some((c, e)) => vec![Task::Pair(root, c, e)],
        None => vec![Task::Single(root)],
    };
    while let Some(task) = stack.pop() {
        match task {
            Task::Single(v) => order.push(v),
            Task::Pair(a, b, e) => {
                cut[e] = true;
                let second = match least_uncut(b, &cut) {
                    Some((b2, e2)) => Task::Pair(b2, b, e2),
                    None => Task::Single(b),
                };
                let first = match least_uncut(a, &cut) {
                    Some((a2, e2)) => Task::Pair(a, a2, e2),
                    None => Task::Single(a),
                };
                stack.push(second);
                stack.push(first);
            }
        }
    }
    Ok(CubePath {
        order,
        host_tree: tree.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SuccessorReport {
    pub order: Vec<Vertex>,
    #[serde(serialize_with = "crate::spantree::pairs")]
    pub sbar: EdgePairSet,
    #[serde(rename = "F", serialize_with = "crate::spantree::pairs")]
    pub f: EdgePairSet,
    pub sbar_max_degree: usize,
    pub cube_path_ok: bool,
    /// `adm_r(G + S̄, L)`, absent when the search budget ran out.
    pub adm_after: Option<usize>,
    /// `adm_{40r+1}(G + F, L)`, absent when the search budget ran out.
    pub adm_tree: Option<usize>,
    /// `col_{40r+1}(G + F, L)`
    pub col_tree: usize,
    /// `h(r, y)` with `y = adm_tree`, or `col_tree` when that is absent.
    pub bound: String,
    pub bound_from: &'static str,
    pub bound_ok: Option<bool>,
}

pub fn build_successor(
    g: &Graph,
    l: &VertexOrdering,
    r: usize,
) -> Result<(SuccessorRelation, SuccessorReport)> {
    build_successor_budget(g, l, r, DEFAULT_ADM_BUDGET)
}

pub fn build_successor_budget(
    g: &Graph,
    l: &VertexOrdering,
    r: usize,
    budget: u64,
) -> Result<(SuccessorRelation, SuccessorReport)> {
    if g.n() == 0 {
        return Err(Error::InvalidInput("graph has no vertices".into()));
    }
    if r == 0 {
        return Err(Error::InvalidInput("the successor ceiling needs r >= 1".into()));
    }
    let f = degree3_spanning_tree(g, l)?;
    let path = ham_path_in_cube_with(&f, l)?;
    let s = SuccessorRelation::new(path.order.clone())?;
    let sbar = s.undirected();
    let sbar_max_degree = sbar.degrees(g.n()).into_iter().max().unwrap_or(0);

    let big = 40 * r + 1;
    let gs = add_edges(g, &sbar)?;
    let gf = add_edges(g, &f)?;
    let adm_after = optional(adm_wrt_budget(&gs, l, r, budget))?;
    let adm_tree = optional(adm_wrt_budget(&gf, l, big, budget))?;
    let col_tree = col_wrt(&gf, l, big);
    let (y, bound_from) = match adm_tree {
        Some(a) => (a, "adm"),
        None => (col_tree, "col"),
    };
    let bound = bound_h(r as u64, y as u64);
    let bound_ok = adm_after.map(|a| BigUint::from(a) <= bound);
    let report = SuccessorReport {
        order: path.order.clone(),
        sbar,
        f,
        sbar_max_degree,
        cube_path_ok: path.is_valid(),
        adm_after,
        adm_tree,
        col_tree,
        bound: bound.to_string(),
        bound_from,
        bound_ok,
    };
    Ok((s, report))
}

/// Budget exhaustion becomes `None`; other errors propagate.
fn optional(res: Result<usize>) -> Result<Option<usize>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub ordering: Vec<Vertex>,
    #[serde(flatten)]
    pub successor: SuccessorReport,
    /// `adm ≤ col ≤ adm^(40r+1)` at radius `40r+1` on `G + F`, when adm is known.
    pub gen_col_ok: Option<bool>,
}

/// Degeneracy ordering, then [`build_successor`].
pub fn succ_pipeline(g: &Graph, r: usize, budget: u64) -> Result<(VertexOrdering, SuccessorRelation, PipelineReport)> {
    let l = heuristic_ordering(g);
    let (s, rep) = build_successor_budget(g, &l, r, budget)?;
    let big = 40 * r as u32 + 1;
    let gen_col_ok = rep.adm_tree.map(|a| {
        a <= rep.col_tree && BigUint::from(rep.col_tree) <= BigUint::from(a).pow(big)
    });
    let report = PipelineReport {
        ordering: l.order().to_vec(),
        successor: rep,
        gen_col_ok,
    };
    Ok((l, s, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_path_small() {
        assert_eq!(ham_path_in_cube(&EdgePairSet::new(), 1).unwrap().order, vec![0]);
        let e = EdgePairSet::from_pairs([(0, 1)]).unwrap();
        assert_eq!(ham_path_in_cube(&e, 2).unwrap().order, vec![0, 1]);
        let star = Graph::star(3).edge_set();
        let p = ham_path_in_cube(&star, 4).unwrap();
        assert!(p.is_valid());
        assert!(ham_path_in_cube(&Graph::cycle(4).edge_set(), 4).is_err());
        assert!(ham_path_in_cube(&EdgePairSet::from_pairs([(0, 1)]).unwrap(), 3).is_err());
    }

    #[test]
    fn cube_path_long_path_no_overflow() {
        let n = 100_000;
        let p = Graph::path(n).edge_set();
        let c = ham_path_in_cube(&p, n).unwrap();
        assert_eq!(c.order.len(), n);
        assert!(c.order.windows(2).all(|w| w[0].abs_diff(w[1]) <= 3));
    }

    #[test]
    fn cube_path_random_trees() {
        for seed in 0..50 {
            let t = crate::random::random_tree(seed, 60);
            assert!(ham_path_in_cube(&t.edge_set(), 60).unwrap().is_valid());
        }
    }

    #[test]
    fn successor_examples() {
        let (s, rep) = build_successor(&Graph::empty(1), &VertexOrdering::identity(1), 1).unwrap();
        assert!(s.pairs().is_empty());
        assert_eq!(rep.adm_after, Some(1));
        let c6 = Graph::cycle(6);
        let (_, s, rep) = succ_pipeline(&c6, 1, 100_000).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(rep.successor.bound_ok, Some(true));
        assert!(rep.successor.sbar_max_degree <= 2);
    }
}
