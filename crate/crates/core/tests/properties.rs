use std::collections::BTreeSet;

use proptest::prelude::*;
use succinv::clique::{eval_expression, order_augment, verify_order_augmented, EDGE_REL};
use succinv::colnum::{adm_wrt, col_wrt, sreach};
use succinv::encodings::{
    decode_matching_order, decode_starforest_successor, encode_matching_order, encode_starforest_successor,
    is_partial_matching, is_star_forest,
};
use succinv::poset::{brute_width, check_lifted, lift_order, min_chain_cover};
use succinv::random::{
    random_bounded_degree_tree, random_clique_expression, random_connected_graph, random_graph, random_ordering,
    random_poset,
};
use succinv::spantree::{build_elimination_tree, build_tree_u, degree3_spanning_tree};
use succinv::successor::ham_path_in_cube_with;
use succinv::verify::{elimination_tree_oracle, eltree_properties, tree_u_valid};
use succinv::walk::{full_encoding, interpret_successor, three_walk_from_tree};
use succinv::{Graph, Vertex, VertexOrdering};

/// All simple paths from `v` of length `1..=r` that end below `v` and whose
/// inner vertices lie above `v`, as vertex lists without `v`.
fn admissible_paths(g: &Graph, l: &VertexOrdering, v: Vertex, r: usize) -> Vec<Vec<Vertex>> {
    fn go(g: &Graph, l: &VertexOrdering, v: Vertex, r: usize, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let last = *path.last().unwrap_or(&v);
        if path.len() == r {
            return;
        }
        for &w in g.neighbors(last) {
            if w == v || path.contains(&w) {
                continue;
            }
            path.push(w);
            if l.less(w, v) {
                out.push(path.clone());
            } else {
                go(g, l, v, r, path, out);
            }
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(g, l, v, r, &mut Vec::new(), &mut out);
    out
}

fn max_disjoint(paths: &[Vec<Vertex>], used: &mut BTreeSet<Vertex>, from: usize) -> usize {
    let mut best = 0;
    for i in from..paths.len() {
        if paths[i].iter().all(|x| !used.contains(x)) {
            used.extend(paths[i].iter().copied());
            best = best.max(1 + max_disjoint(paths, used, i + 1));
            for x in &paths[i] {
                used.remove(x);
            }
        }
    }
    best
}

fn adm_oracle(g: &Graph, l: &VertexOrdering, r: usize) -> usize {
    (0..g.n())
        .map(|v| 1 + max_disjoint(&admissible_paths(g, l, v, r), &mut BTreeSet::new(), 0))
        .max()
        .unwrap_or(0)
}

fn small_graph() -> impl Strategy<Value = (Graph, VertexOrdering)> {
    (1usize..=7, any::<u64>()).prop_flat_map(|(n, seed)| {
        let max_m = n * (n - 1) / 2;
        (0..=max_m).prop_map(move |m| (random_graph(seed, n, m).unwrap(), random_ordering(seed ^ 9, n)))
    })
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = (Graph, VertexOrdering)> {
    (1usize..=max_n, any::<u64>(), 0usize..=20).prop_map(|(n, seed, extra)| {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        (random_connected_graph(seed, n, m).unwrap(), random_ordering(seed ^ 3, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn adm_matches_path_packing_oracle((g, l) in small_graph(), r in 0usize..=3) {
        prop_assert_eq!(adm_wrt(&g, &l, r).unwrap(), adm_oracle(&g, &l, r));
    }

    #[test]
    fn sreach_holds_v_and_smaller_vertices((g, l) in small_graph(), r in 0usize..=4) {
        for v in 0..g.n() {
            let s = sreach(&g, &l, v, r);
            prop_assert!(s.contains(&v));
            prop_assert!(s.iter().all(|&u| u == v || l.less(u, v)));
        }
    }

    #[test]
    fn colouring_numbers_monotone_in_r((g, l) in small_graph(), r in 0usize..=3) {
        prop_assert!(col_wrt(&g, &l, r) <= col_wrt(&g, &l, r + 1));
        prop_assert!(adm_wrt(&g, &l, r).unwrap() <= adm_wrt(&g, &l, r + 1).unwrap());
        prop_assert!(adm_wrt(&g, &l, r).unwrap() <= col_wrt(&g, &l, r));
    }

    #[test]
    fn elimination_tree_agrees_with_recursive_definition((g, l) in connected_graph(12)) {
        let t = build_elimination_tree(&g, &l).unwrap();
        prop_assert_eq!(&t.parent, &elimination_tree_oracle(&g, &l));
        prop_assert_eq!(eltree_properties(&g, &l, &t), [true; 4]);
    }

    #[test]
    fn tree_u_and_degree3_tree((g, l) in connected_graph(40)) {
        let u = build_tree_u(&g, &l).unwrap();
        prop_assert_eq!(u.len() + 1, g.n());
        prop_assert!(u.iter().all(|(a, b)| g.has_edge(a, b)));
        prop_assert!(tree_u_valid(&g, &l, &u));
        let f = degree3_spanning_tree(&g, &l).unwrap();
        let t = f.to_graph(g.n()).unwrap();
        prop_assert!(t.is_tree());
        prop_assert!(t.max_degree() <= 3);
    }

    #[test]
    fn cube_path_is_hamiltonian(seed in any::<u64>(), n in 1usize..=60) {
        let t = random_bounded_degree_tree(seed, n, 3);
        let l = random_ordering(seed ^ 5, n);
        let p = ham_path_in_cube_with(&t.edge_set(), &l).unwrap();
        prop_assert!(p.is_valid());
    }

    #[test]
    fn walk_interpretation_recovers_w1(seed in any::<u64>(), n in 1usize..=40) {
        let t = random_bounded_degree_tree(seed, n, 3);
        let walk = three_walk_from_tree(&t.edge_set(), n).unwrap();
        let enc = full_encoding(&t, &walk, 3).unwrap();
        let expected: BTreeSet<(Vertex, Vertex)> = enc.w1().seq.windows(2).map(|w| (w[0], w[1])).collect();
        prop_assert_eq!(interpret_successor(&enc), expected);
    }

    #[test]
    fn encodings_round_trip(seed in any::<u64>(), n in 0usize..=12, density in 0usize..=30) {
        let m = density.min(n * n.saturating_sub(1) / 2);
        let g = random_graph(seed, n, m).unwrap();
        let me = encode_matching_order(&g);
        prop_assert!(is_partial_matching(&me.host));
        prop_assert_eq!(decode_matching_order(&me.host, &me.order).unwrap().edge_set(), g.edge_set());
        let se = encode_starforest_successor(&g);
        prop_assert!(is_star_forest(&se.host));
        prop_assert_eq!(decode_starforest_successor(&se.host, &se.succ).unwrap().edge_set(), g.edge_set());
    }

    #[test]
    fn order_augmentation_keeps_edges_and_orders(seed in any::<u64>(), k in 1usize..=3, leaves in 1usize..=12) {
        let e = random_clique_expression(seed, k, leaves);
        let t = order_augment(&e).unwrap();
        prop_assert_eq!(t.width(), 2 * k);
        prop_assert_eq!(eval_expression(&t).relation(EDGE_REL), eval_expression(&e).relation(EDGE_REL));
        prop_assert!(verify_order_augmented(&e, &t).ok);
    }

    #[test]
    fn chain_cover_is_optimal_and_lifts(seed in any::<u64>(), n in 0usize..=12, p in 0.0f64..0.6) {
        let poset = random_poset(seed, n, p);
        let cover = min_chain_cover(&poset);
        prop_assert!(cover.is_valid_for(&poset));
        prop_assert_eq!(cover.width(), brute_width(&poset).unwrap());
        let succ = lift_order(&poset, &cover).unwrap();
        prop_assert_eq!(check_lifted(&poset, &cover, succ.order()), (true, true));
    }
}
