//! Seeded generators. Every function is a pure function of its arguments.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexOrdering};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform graph with exactly `m` edges on `n` vertices.
pub fn random_graph(seed: u64, n: usize, m: usize) -> Result<Graph> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return Err(Error::InvalidInput(format!(
            "{m} edges requested, at most {max} fit on {n} vertices"
        )));
    }
    let mut rng = rng(seed);
    let edges = sample_pairs(&mut rng, n, m, &HashSet::new());
    Graph::from_edges(n, edges)
}

/// Random labelled tree: attach each vertex to an earlier one, then relabel.
pub fn random_tree(seed: u64, n: usize) -> Graph {
    let mut rng = rng(seed);
    tree_with(&mut rng, n, usize::MAX)
}

/// Random tree whose maximum degree is at most `max_degree` (>= 2).
pub fn random_bounded_degree_tree(seed: u64, n: usize, max_degree: usize) -> Graph {
    assert!(max_degree >= 2, "trees of maximum degree < 2 are paths of length <= 1");
    let mut rng = rng(seed);
    tree_with(&mut rng, n, max_degree)
}

fn tree_with(rng: &mut ChaCha8Rng, n: usize, max_degree: usize) -> Graph {
    let mut label: Vec<Vertex> = (0..n).collect();
    label.shuffle(rng);
    let mut deg = vec![0usize; n];
    let mut open: Vec<Vertex> = Vec::new();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 0..n {
        if v > 0 {
            let i = rng.gen_range(0..open.len());
            let p = open[i];
            edges.push((label[p], label[v]));
            deg[p] += 1;
            deg[v] += 1;
            if deg[p] >= max_degree {
                open.swap_remove(i);
            }
        }
        open.push(v);
    }
    Graph::from_edges(n, edges).expect("generated tree is simple")
}

/// Connected graph with `m >= n - 1` edges: a random tree plus uniform extra edges.
pub fn random_connected_graph(seed: u64, n: usize, m: usize) -> Result<Graph> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max || m + 1 < n {
        return Err(Error::InvalidInput(format!(
            "a connected graph on {n} vertices needs between {} and {max} edges, got {m}",
            n.saturating_sub(1)
        )));
    }
    let mut rng = rng(seed);
    let tree = tree_with(&mut rng, n, usize::MAX);
    let existing: HashSet<(Vertex, Vertex)> = tree.edges().collect();
    let mut edges: Vec<_> = tree.edges().collect();
    edges.extend(sample_pairs(&mut rng, n, m - tree.m(), &existing));
    Graph::from_edges(n, edges)
}

pub fn random_ordering(seed: u64, n: usize) -> VertexOrdering {
    let mut rng = rng(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    VertexOrdering::from_order(order).expect("shuffle is a permutation")
}

/// Graph with `parts >= 1` connected components of random sizes, each a
/// random connected graph with about `extra` additional edges per part,
/// under a random relabelling.
pub fn random_multi_component_graph(seed: u64, n: usize, parts: usize, extra: usize) -> Result<Graph> {
    if parts == 0 || parts > n {
        return Err(Error::InvalidInput(format!("cannot split {n} vertices into {parts} components")));
    }
    let mut rng = rng(seed);
    // split n into `parts` positive sizes
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(&mut rng);
    cuts.truncate(parts - 1);
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(n);
    let mut label: Vec<Vertex> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut edges = Vec::new();
    for w in cuts.windows(2) {
        let size = w[1] - w[0];
        let max = size * (size - 1) / 2;
        let m = (size - 1 + rng.gen_range(0..=extra)).min(max);
        let part = random_connected_graph(rng.gen(), size, m)?;
        edges.extend(part.edges().map(|(a, b)| (label[w[0] + a], label[w[0] + b])));
    }
    Graph::from_edges(n, edges)
}

/// Random poset: each pair of a random linear extension is related with
/// probability `p` before closing.
pub fn random_poset(seed: u64, n: usize, p: f64) -> crate::poset::Poset {
    let mut rng = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    crate::poset::validate_poset(n, pairs).expect("pairs follow a linear extension")
}

/// Random undirected clique-expression of width `k` with `leaves` leaves:
/// edge operations come in symmetric pairs.
pub fn random_clique_expression(seed: u64, k: usize, leaves: usize) -> crate::clique::CliqueExpression {
    use crate::clique::{CliqueExpression, Op, EDGE_REL};
    assert!(k >= 1 && leaves >= 1, "need a colour and a leaf");
    let mut rng = rng(seed);
    let mut nodes = Vec::new();
    // bottom-up: a pool of subtrees merged pairwise at random
    let mut pool: Vec<usize> = (0..leaves)
        .map(|_| {
            nodes.push(Op::Leaf(rng.gen_range(1..=k)));
            nodes.len() - 1
        })
        .collect();
    let decorate = |nodes: &mut Vec<Op>, mut cur: usize, rng: &mut ChaCha8Rng| {
        for _ in 0..rng.gen_range(0..=2) {
            let (i, j) = (rng.gen_range(1..=k), rng.gen_range(1..=k));
            if rng.gen_bool(0.6) {
                for (from, to) in [(i, j), (j, i)] {
                    nodes.push(Op::Edge {
                        rel: EDGE_REL.into(),
                        from,
                        to,
                        child: cur,
                    });
                    cur = nodes.len() - 1;
                    if i == j {
                        break;
                    }
                }
            } else {
                nodes.push(Op::Rename { from: i, to: j, child: cur });
                cur = nodes.len() - 1;
            }
        }
        cur
    };
    while pool.len() > 1 {
        let a = pool.swap_remove(rng.gen_range(0..pool.len()));
        let b = pool.swap_remove(rng.gen_range(0..pool.len()));
        nodes.push(Op::Oplus(a, b));
        let top = nodes.len() - 1;
        let merged = decorate(&mut nodes, top, &mut rng);
        pool.push(merged);
    }
    let root = decorate(&mut nodes, pool[0], &mut rng);
    CliqueExpression::new(nodes, root, k).expect("generated expression is well formed")
}

/// `count` distinct pairs avoiding `exclude`. Dense requests enumerate all
/// candidate pairs; sparse ones use rejection sampling.
fn sample_pairs(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
    exclude: &HashSet<(Vertex, Vertex)>,
) -> Vec<(Vertex, Vertex)> {
    let max = n * n.saturating_sub(1) / 2;
    if count == 0 {
        return Vec::new();
    }
    if count * 3 >= max.saturating_sub(exclude.len()) {
        let mut all: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|p| !exclude.contains(p))
            .collect();
        all.shuffle(rng);
        all.truncate(count);
        return all;
    }
    let mut chosen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let p = (u.min(v), u.max(v));
        if !exclude.contains(&p) && chosen.insert(p) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trees() {
        assert_eq!(random_tree(7, 1), Graph::empty(1));
        for seed in 0..20 {
            let t = random_tree(seed, 50);
            assert_eq!(t.m(), 49);
            assert!(t.is_connected());
            let b = random_bounded_degree_tree(seed, 60, 3);
            assert!(b.is_tree() && b.max_degree() <= 3);
        }
    }

    #[test]
    fn determinism() {
        assert_eq!(random_graph(3, 10, 15).unwrap(), random_graph(3, 10, 15).unwrap());
        assert_eq!(random_graph(3, 10, 15).unwrap().m(), 15);
        assert_eq!(random_graph(1, 5, 10).unwrap(), Graph::complete(5));
        assert!(random_graph(1, 5, 11).is_err());
        assert_eq!(random_ordering(9, 12), random_ordering(9, 12));
    }

    #[test]
    fn connected_generator() {
        for seed in 0..20 {
            let g = random_connected_graph(seed, 30, 45).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.m(), 45);
        }
        assert!(random_connected_graph(0, 10, 8).is_err());
    }

    #[test]
    fn multi_component() {
        for seed in 0..20 {
            let g = random_multi_component_graph(seed, 20, 3, 4).unwrap();
            assert_eq!(g.components().len(), 3);
        }
    }

    #[test]
    fn posets_and_expressions() {
        let p = random_poset(5, 12, 0.3);
        assert_eq!(p.n(), 12);
        let e = random_clique_expression(2, 3, 20);
        assert_eq!(e.leaf_count(), 20);
        assert_eq!(e, random_clique_expression(2, 3, 20));
    }
}
