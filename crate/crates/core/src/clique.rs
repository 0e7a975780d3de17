//! Clique-expressions over coloured structures with binary relations, their
//! bottom-up evaluation, and the order-augmenting transformation that doubles
//! the colour set to generate a linear order along with the structure.
//!
//! Expressions are stored in an arena. Colours are 1-based. In transformed
//! expressions over input width `k`, colour `(i, a)` is stored as `i` and
//! `(i, b)` as `k + i`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ORDER_REL: &str = "<";
pub const EDGE_REL: &str = "E";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Leaf(usize),
    Oplus(usize, usize),
    Edge { rel: String, from: usize, to: usize, child: usize },
    Rename { from: usize, to: usize, child: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueExpression {
    nodes: Vec<Op>,
    root: usize,
    width: usize,
}

/// Nested JSON form of a node.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum NodeDoc {
    Leaf { color: usize },
    Oplus { left: Box<NodeDoc>, right: Box<NodeDoc> },
    Edge { rel: String, from: usize, to: usize, child: Box<NodeDoc> },
    Rename { from: usize, to: usize, child: Box<NodeDoc> },
}

/// Either a bare node (width = largest colour mentioned) or an explicit width.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpressionDoc {
    Sized { width: usize, root: NodeDoc },
    Bare(NodeDoc),
}

impl CliqueExpression {
    /// Validates child indices, acyclicity, and colours in `1..=width`.
    pub fn new(nodes: Vec<Op>, root: usize, width: usize) -> Result<Self> {
        let e = CliqueExpression { nodes, root, width };
        e.validate()?;
        Ok(e)
    }

    fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if self.root >= n {
            return Err(Error::InvalidInput("root index out of range".into()));
        }
        let mut indeg = vec![0usize; n];
        for op in &self.nodes {
            for c in children(op) {
                if c >= n {
                    return Err(Error::InvalidInput(format!("child index {c} out of range")));
                }
                indeg[c] += 1;
            }
            for colour in colours_of(op) {
                if colour == 0 || colour > self.width {
                    return Err(Error::InvalidInput(format!(
                        "colour {colour} outside 1..={}",
                        self.width
                    )));
                }
            }
        }
        // every node reached exactly once from the root
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        let mut count = 0;
        while let Some(t) = stack.pop() {
            if seen[t] {
                return Err(Error::InvalidInput(format!("node {t} is shared or on a cycle")));
            }
            seen[t] = true;
            count += 1;
            stack.extend(children(&self.nodes[t]));
        }
        if indeg[self.root] != 0 || count != n {
            return Err(Error::InvalidInput("nodes do not form a single rooted tree".into()));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Op] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|op| matches!(op, Op::Leaf(_))).count()
    }

    pub fn oplus_count(&self) -> usize {
        self.nodes.iter().filter(|op| matches!(op, Op::Oplus(..))).count()
    }

    /// Colours appearing anywhere in the expression.
    pub fn colours_used(&self) -> BTreeSet<usize> {
        self.nodes.iter().flat_map(colours_of).collect()
    }

    pub fn relations(&self) -> BTreeSet<&str> {
        self.nodes
            .iter()
            .filter_map(|op| match op {
                Op::Edge { rel, .. } => Some(rel.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Nodes in an order where every child precedes its parent, with the
    /// left child's subtree before the right child's.
    fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
                continue;
            }
            stack.push((t, true));
            let cs = children(&self.nodes[t]);
            for &c in cs.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Left/right status of every node: the root is left, the second child
    /// of a `⊕` is right, its first child left, unary nodes pass their
    /// status down. `true` means left.
    pub fn left_nodes(&self) -> Vec<bool> {
        let mut left = vec![true; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            match self.nodes[t] {
                Op::Leaf(_) => {}
                Op::Oplus(a, b) => {
                    left[a] = true;
                    left[b] = false;
                    stack.extend([a, b]);
                }
                Op::Edge { child, .. } | Op::Rename { child, .. } => {
                    left[child] = left[t];
                    stack.push(child);
                }
            }
        }
        left
    }

    pub fn from_doc(doc: &ExpressionDoc) -> Result<Self> {
        let (root_doc, width) = match doc {
            ExpressionDoc::Sized { width, root } => (root, Some(*width)),
            ExpressionDoc::Bare(root) => (root, None),
        };
        let mut nodes = Vec::new();
        let root = push_doc(root_doc, &mut nodes);
        let width = width.unwrap_or_else(|| nodes.iter().flat_map(colours_of).max().unwrap_or(1));
        CliqueExpression::new(nodes, root, width)
    }

    pub fn to_doc(&self) -> ExpressionDoc {
        let mut built: Vec<Option<NodeDoc>> = vec![None; self.nodes.len()];
        for t in self.post_order() {
            let mut take = |c: usize| Box::new(built[c].take().expect("child built first"));
            let doc = match &self.nodes[t] {
                Op::Leaf(c) => NodeDoc::Leaf { color: *c },
                Op::Oplus(a, b) => NodeDoc::Oplus {
                    left: take(*a),
                    right: take(*b),
                },
                Op::Edge { rel, from, to, child } => NodeDoc::Edge {
                    rel: rel.clone(),
                    from: *from,
                    to: *to,
                    child: take(*child),
                },
                Op::Rename { from, to, child } => NodeDoc::Rename {
                    from: *from,
                    to: *to,
                    child: take(*child),
                },
            };
            built[t] = Some(doc);
        }
        ExpressionDoc::Sized {
            width: self.width,
            root: built[self.root].take().expect("root built"),
        }
    }
}

fn push_doc(doc: &NodeDoc, nodes: &mut Vec<Op>) -> usize {
    let op = match doc {
        NodeDoc::Leaf { color } => Op::Leaf(*color),
        NodeDoc::Oplus { left, right } => {
            let a = push_doc(left, nodes);
            let b = push_doc(right, nodes);
            Op::Oplus(a, b)
        }
        NodeDoc::Edge { rel, from, to, child } => Op::Edge {
            rel: rel.clone(),
            from: *from,
            to: *to,
            child: push_doc(child, nodes),
        },
        NodeDoc::Rename { from, to, child } => Op::Rename {
            from: *from,
            to: *to,
            child: push_doc(child, nodes),
        },
    };
    nodes.push(op);
    nodes.len() - 1
}

fn children(op: &Op) -> Vec<usize> {
    match *op {
        Op::Leaf(_) => Vec::new(),
        Op::Oplus(a, b) => vec![a, b],
        Op::Edge { child, .. } | Op::Rename { child, .. } => vec![child],
    }
}

fn colours_of(op: &Op) -> Vec<usize> {
    match *op {
        Op::Leaf(c) => vec![c],
        Op::Oplus(..) => Vec::new(),
        Op::Edge { from, to, .. } | Op::Rename { from, to, .. } => vec![from, to],
    }
}

/// Parses expression JSON; nesting depth is not limited.
pub fn parse_expression(text: &str) -> Result<CliqueExpression> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let doc = ExpressionDoc::deserialize(&mut de)?;
    de.end()?;
    CliqueExpression::from_doc(&doc)
}

/// Vertices are numbered by left-to-right leaf order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredStructure {
    pub colours: Vec<usize>,
    pub relations: BTreeMap<String, BTreeSet<(usize, usize)>>,
}

impl ColoredStructure {
    pub fn n(&self) -> usize {
        self.colours.len()
    }

    pub fn relation(&self, name: &str) -> BTreeSet<(usize, usize)> {
        self.relations.get(name).cloned().unwrap_or_default()
    }
}

pub fn eval_expression(e: &CliqueExpression) -> ColoredStructure {
    let order = e.post_order();
    // leaf ids in left-to-right order; each subtree owns a contiguous range
    let mut range = vec![(0usize, 0usize); e.nodes.len()];
    let mut colours = Vec::with_capacity(e.leaf_count());
    let mut relations: BTreeMap<String, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for &t in &order {
        match &e.nodes[t] {
            Op::Leaf(c) => {
                range[t] = (colours.len(), colours.len() + 1);
                colours.push(*c);
            }
            Op::Oplus(a, b) => range[t] = (range[*a].0, range[*b].1),
            Op::Edge { rel, from, to, child } => {
                let (lo, hi) = range[*child];
                range[t] = (lo, hi);
                let set = relations.entry(rel.clone()).or_default();
                let src: Vec<usize> = (lo..hi).filter(|&v| colours[v] == *from).collect();
                let dst: Vec<usize> = (lo..hi).filter(|&v| colours[v] == *to).collect();
                for &u in &src {
                    for &v in &dst {
                        if u != v {
                            set.insert((u, v));
                        }
                    }
                }
            }
            Op::Rename { from, to, child } => {
                let (lo, hi) = range[*child];
                range[t] = (lo, hi);
                for c in &mut colours[lo..hi] {
                    if *c == *from {
                        *c = *to;
                    }
                }
            }
        }
    }
    ColoredStructure { colours, relations }
}

/// Symbolic name of a transformed colour for input width `k`.
pub fn colour_label(c: usize, k: usize) -> String {
    if c <= k {
        format!("({c},a)")
    } else {
        format!("({},b)", c - k)
    }
}

/// The transformation generating `(G, <)`: the width doubles, every
/// subexpression carries side-`a` colours when it is a left node and side-`b`
/// colours otherwise, and every `⊕` orders its left part before its right.
pub fn order_augment(e: &CliqueExpression) -> Result<CliqueExpression> {
    if let Some(bad) = e.relations().into_iter().find(|&r| r != EDGE_REL) {
        return Err(Error::InvalidInput(format!(
            "order augmentation expects only relation {EDGE_REL}, found '{bad}'"
        )));
    }
    let k = e.width;
    let left = e.left_nodes();
    let mut nodes: Vec<Op> = Vec::with_capacity(e.nodes.len() * 2);
    let mut image = vec![usize::MAX; e.nodes.len()];
    let push = |nodes: &mut Vec<Op>, op: Op| {
        nodes.push(op);
        nodes.len() - 1
    };
    for t in e.post_order() {
        let root = match &e.nodes[t] {
            Op::Leaf(c) => push(&mut nodes, Op::Leaf(if left[t] { *c } else { k + c })),
            Op::Rename { from, to, child } => {
                let v = push(
                    &mut nodes,
                    Op::Rename {
                        from: k + from,
                        to: k + to,
                        child: image[*child],
                    },
                );
                push(&mut nodes, Op::Rename { from: *from, to: *to, child: v })
            }
            Op::Edge { from, to, child, .. } => {
                let (i, j) = (*from, *to);
                let mut cur = image[*child];
                // bottom to top: v4, v3, v2, v1
                for (f, g) in [(k + i, k + j), (i, k + j), (k + i, j), (i, j)] {
                    cur = push(
                        &mut nodes,
                        Op::Edge {
                            rel: EDGE_REL.into(),
                            from: f,
                            to: g,
                            child: cur,
                        },
                    );
                }
                cur
            }
            Op::Oplus(a, b) => {
                let mut cur = push(&mut nodes, Op::Oplus(image[*a], image[*b]));
                for i in (1..=k).rev() {
                    for j in (1..=k).rev() {
                        cur = push(
                            &mut nodes,
                            Op::Edge {
                                rel: ORDER_REL.into(),
                                from: i,
                                to: k + j,
                                child: cur,
                            },
                        );
                    }
                }
                for i in (1..=k).rev() {
                    let (from, to) = if left[t] { (k + i, i) } else { (i, k + i) };
                    cur = push(&mut nodes, Op::Rename { from, to, child: cur });
                }
                cur
            }
        };
        image[t] = root;
    }
    CliqueExpression::new(nodes, image[e.root], 2 * k)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderAugmentReport {
    pub vertices: usize,
    pub same_vertex_count: bool,
    pub edges_preserved: bool,
    pub irreflexive: bool,
    pub antisymmetric: bool,
    pub transitive: bool,
    pub total: bool,
    pub order_pairs: usize,
    pub width_original: usize,
    pub width_transformed: usize,
    pub colours_used: usize,
    /// Declared width doubles, and when the expression has a `⊕` its colour
    /// set has exactly that many colours.
    pub width_ok: bool,
    pub ok: bool,
}

pub fn verify_order_augmented(original: &CliqueExpression, transformed: &CliqueExpression) -> OrderAugmentReport {
    let a = eval_expression(original);
    let b = eval_expression(transformed);
    let n = b.n();
    let lt = b.relation(ORDER_REL);
    let irreflexive = lt.iter().all(|&(u, v)| u != v);
    let antisymmetric = lt.iter().all(|&(u, v)| !lt.contains(&(v, u)));
    let total = (0..n).all(|u| (u + 1..n).all(|v| lt.contains(&(u, v)) || lt.contains(&(v, u))));
    let transitive = {
        let mut succ = vec![Vec::new(); n];
        for &(u, v) in &lt {
            succ[u].push(v);
        }
        lt.iter().all(|&(u, v)| succ[v].iter().all(|&w| lt.contains(&(u, w))))
    };
    let width_transformed = transformed.width();
    let colours_used = transformed.colours_used().len();
    let width_ok = width_transformed == 2 * original.width()
        && (transformed.oplus_count() == 0 || colours_used == width_transformed);
    let same_vertex_count = a.n() == n;
    let edges_preserved = a.relation(EDGE_REL) == b.relation(EDGE_REL);
    let ok = same_vertex_count && edges_preserved && irreflexive && antisymmetric && transitive && total && width_ok;
    OrderAugmentReport {
        vertices: n,
        same_vertex_count,
        edges_preserved,
        irreflexive,
        antisymmetric,
        transitive,
        total,
        order_pairs: lt.len(),
        width_original: original.width(),
        width_transformed,
        colours_used,
        width_ok,
        ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(c: usize) -> NodeDoc {
        NodeDoc::Leaf { color: c }
    }

    fn oplus(a: NodeDoc, b: NodeDoc) -> NodeDoc {
        NodeDoc::Oplus {
            left: Box::new(a),
            right: Box::new(b),
        }
    }

    fn expr(width: usize, root: NodeDoc) -> CliqueExpression {
        CliqueExpression::from_doc(&ExpressionDoc::Sized { width, root }).unwrap()
    }

    #[test]
    fn eval_examples() {
        let single = eval_expression(&expr(1, leaf(1)));
        assert_eq!(single.colours, vec![1]);
        assert!(single.relations.is_empty());

        let k2 = NodeDoc::Edge {
            rel: "E".into(),
            from: 2,
            to: 1,
            child: Box::new(NodeDoc::Edge {
                rel: "E".into(),
                from: 1,
                to: 2,
                child: Box::new(oplus(leaf(1), leaf(2))),
            }),
        };
        let s = eval_expression(&expr(2, k2));
        assert_eq!(s.relation("E"), BTreeSet::from([(0, 1), (1, 0)]));

        let renamed = NodeDoc::Rename {
            from: 1,
            to: 2,
            child: Box::new(leaf(1)),
        };
        assert_eq!(eval_expression(&expr(2, renamed)).colours, vec![2]);
    }

    #[test]
    fn self_colour_edges_skip_loops() {
        let e = NodeDoc::Edge {
            rel: "E".into(),
            from: 1,
            to: 1,
            child: Box::new(oplus(leaf(1), leaf(1))),
        };
        let s = eval_expression(&expr(1, e));
        assert_eq!(s.relation("E"), BTreeSet::from([(0, 1), (1, 0)]));
    }

    #[test]
    fn augment_leaf() {
        let e = expr(3, leaf(2));
        let t = order_augment(&e).unwrap();
        assert_eq!(t.nodes(), &[Op::Leaf(2)]);
        assert_eq!(t.width(), 6);
        let rep = verify_order_augmented(&e, &t);
        assert!(rep.ok);
        assert_eq!(rep.order_pairs, 0);
    }

    #[test]
    fn augment_oplus_orders_left_first() {
        let e = expr(1, oplus(leaf(1), leaf(1)));
        let t = order_augment(&e).unwrap();
        let s = eval_expression(&t);
        assert_eq!(s.relation(ORDER_REL), BTreeSet::from([(0, 1)]));
        // 1 rename + 1 order edge + the ⊕ + two leaves
        assert_eq!(t.nodes().len(), 5);
        assert!(verify_order_augmented(&e, &t).ok);
    }

    #[test]
    fn augment_three_leaves() {
        let e = expr(2, oplus(oplus(leaf(1), leaf(2)), leaf(2)));
        let t = order_augment(&e).unwrap();
        let rep = verify_order_augmented(&e, &t);
        assert!(rep.ok, "{rep:?}");
        assert_eq!(rep.order_pairs, 3);
        assert_eq!(rep.colours_used, 4);
        assert_eq!(colour_label(1, 2), "(1,a)");
        assert_eq!(colour_label(4, 2), "(2,b)");
    }

    #[test]
    fn augment_rejects_other_relations() {
        let e = NodeDoc::Edge {
            rel: "R".into(),
            from: 1,
            to: 1,
            child: Box::new(leaf(1)),
        };
        assert!(order_augment(&expr(1, e)).is_err());
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let text = r#"{"op":"edge","rel":"E","from":1,"to":2,"child":{"op":"oplus","left":{"op":"leaf","color":1},"right":{"op":"leaf","color":2}}}"#;
        let e = parse_expression(text).unwrap();
        assert_eq!(e.width(), 2);
        let doc = serde_json::to_string(&e.to_doc()).unwrap();
        assert_eq!(parse_expression(&doc).unwrap(), e);
        assert!(parse_expression(r#"{"width":1,"root":{"op":"leaf","color":2}}"#).is_err());
        assert!(parse_expression(r#"{"op":"leaf"}"#).is_err());
        assert!(CliqueExpression::new(vec![Op::Oplus(0, 0)], 0, 1).is_err());
    }
}
