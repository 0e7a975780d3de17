//! Strong reachability, colouring numbers and admissibility with respect to a
//! fixed ordering, plus exhaustive optima for tiny graphs.
//!
//! Reachability sets include the start vertex, and admissibility counts the
//! trivial length-zero path, so both quantities are at least 1.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexOrdering};

/// Node-expansion budget per vertex for [`adm_wrt`].
pub const DEFAULT_ADM_BUDGET: u64 = 10_000_000;

/// Largest vertex count accepted by [`brute_optimum`].
pub const BRUTE_OPTIMUM_MAX_N: usize = 9;

/// The vertices strongly `r`-reachable from `v`, sorted by id.
pub fn sreach(g: &Graph, l: &VertexOrdering, v: Vertex, r: usize) -> Vec<Vertex> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut out = sreach_into(g, l, v, r, &mut dist);
    out.sort_unstable();
    out
}

/// BFS inside `{x >_L v}`; smaller vertices are recorded but never expanded.
/// `dist` must be all `usize::MAX` and is restored before returning.
fn sreach_into(
    g: &Graph,
    l: &VertexOrdering,
    v: Vertex,
    r: usize,
    dist: &mut [usize],
) -> Vec<Vertex> {
    let rv = l.rank(v);
    let mut out = vec![v];
    let mut touched = vec![v];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x];
        if d == r {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y] != usize::MAX {
                continue;
            }
            dist[y] = d + 1;
            touched.push(y);
            if l.rank(y) < rv {
                out.push(y);
            } else {
                queue.push_back(y);
            }
        }
    }
    for t in touched {
        dist[t] = usize::MAX;
    }
    out
}

/// `col_r(G, L)`: the largest strong reachability set. Returns 0 for `n = 0`.
pub fn col_wrt(g: &Graph, l: &VertexOrdering, r: usize) -> usize {
    let mut dist = vec![usize::MAX; g.n()];
    (0..g.n())
        .map(|v| sreach_into(g, l, v, r, &mut dist).len())
        .max()
        .unwrap_or(0)
}

/// `adm_r(G, L)` with the default per-vertex budget.
pub fn adm_wrt(g: &Graph, l: &VertexOrdering, r: usize) -> Result<usize> {
    adm_wrt_budget(g, l, r, DEFAULT_ADM_BUDGET)
}

pub fn adm_wrt_budget(g: &Graph, l: &VertexOrdering, r: usize, budget: u64) -> Result<usize> {
    let mut best = 0;
    for v in 0..g.n() {
        best = best.max(adm_vertex(g, l, v, r, budget)?);
    }
    Ok(best)
}

/// `adm_r[G, L, v]`, exact.
///
/// Every smaller neighbour is taken as a direct one-edge path: any optimal
/// family can be rewritten to do so. The remaining paths leave `v` through a
/// larger neighbour and are found by branch and bound, seeded with a
/// vertex-disjoint flow bound that ignores path lengths.
pub fn adm_vertex(g: &Graph, l: &VertexOrdering, v: Vertex, r: usize, budget: u64) -> Result<usize> {
    if r == 0 {
        return Ok(1);
    }
    let rv = l.rank(v);
    let smaller = g.neighbors(v).iter().filter(|&&u| l.rank(u) < rv).count();
    if r == 1 {
        return Ok(1 + smaller);
    }

    let n = g.n();
    let is_target: Vec<bool> = (0..n)
        .map(|t| l.rank(t) < rv && !g.has_edge(v, t))
        .collect();

    // hops from the nearest target, moving only through larger vertices
    let mut dt = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for t in (0..n).filter(|&t| is_target[t]) {
        dt[t] = 0;
        queue.push_back(t);
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dt[y] == usize::MAX && l.rank(y) > rv {
                dt[y] = dt[x] + 1;
                queue.push_back(y);
            }
        }
    }
    // hops from v through larger vertices
    let mut dv = vec![usize::MAX; n];
    dv[v] = 0;
    queue.push_back(v);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dv[y] == usize::MAX && l.rank(y) > rv {
                dv[y] = dv[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let viable: Vec<bool> = (0..n)
        .map(|x| dv[x] != usize::MAX && dt[x] != usize::MAX && dv[x] + dt[x] <= r)
        .collect();
    let starts: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&x| viable[x]).collect();
    if starts.is_empty() {
        return Ok(1 + smaller);
    }

    let bound = flow_bound(g, v, &viable, &is_target, &dv, r);
    let mut used = vec![false; n];
    used[v] = true;
    let mut search = PathPacking {
        g,
        r,
        v,
        is_target: &is_target,
        viable: &viable,
        dt: &dt,
        starts: &starts,
        used,
        best: 0,
        bound,
        nodes: 0,
        budget,
    };
    search.family(0, 0)?;
    Ok(1 + smaller + search.best)
}

struct PathPacking<'a> {
    g: &'a Graph,
    r: usize,
    v: Vertex,
    is_target: &'a [bool],
    viable: &'a [bool],
    dt: &'a [usize],
    starts: &'a [Vertex],
    used: Vec<bool>,
    best: usize,
    bound: usize,
    nodes: u64,
    budget: u64,
}

impl PathPacking<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                vertex: self.v,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn done(&self) -> bool {
        self.best >= self.bound
    }

    fn family(&mut self, i: usize, count: usize) -> Result<()> {
        self.tick()?;
        self.best = self.best.max(count);
        if self.done() || i == self.starts.len() || count + (self.starts.len() - i) <= self.best {
            return Ok(());
        }
        let x = self.starts[i];
        if !self.used[x] {
            self.used[x] = true;
            self.extend(x, 1, i, count)?;
            self.used[x] = false;
            if self.done() {
                return Ok(());
            }
        }
        self.family(i + 1, count)
    }

    /// The current path ends at `x` after `len` edges.
    fn extend(&mut self, x: Vertex, len: usize, i: usize, count: usize) -> Result<()> {
        self.tick()?;
        let g = self.g;
        for &y in g.neighbors(x) {
            if self.used[y] {
                continue;
            }
            if self.is_target[y] {
                if len < self.r {
                    self.used[y] = true;
                    self.family(i + 1, count + 1)?;
                    self.used[y] = false;
                }
            } else if self.viable[y] && len + 1 + self.dt[y] <= self.r {
                self.used[y] = true;
                self.extend(y, len + 1, i, count)?;
                self.used[y] = false;
            }
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Maximum number of paths from `v` to targets that are disjoint apart from
/// `v`, through viable vertices, without the length restriction.
fn flow_bound(
    g: &Graph,
    v: Vertex,
    viable: &[bool],
    is_target: &[bool],
    dv: &[usize],
    r: usize,
) -> usize {
    // node x splits into in = 2x, out = 2x + 1; sink = 2n
    let n = g.n();
    let sink = 2 * n;
    let mut net = FlowNet::new(2 * n + 1);
    for x in 0..n {
        if viable[x] {
            net.add(2 * x, 2 * x + 1);
            for &y in g.neighbors(x) {
                if viable[y] {
                    net.add(2 * x + 1, 2 * y);
                } else if is_target[y] && dv[x] < r {
                    net.add(2 * x + 1, 2 * y);
                }
            }
        } else if is_target[x] {
            net.add(2 * x, 2 * x + 1);
            net.add(2 * x + 1, sink);
        }
    }
    for &y in g.neighbors(v) {
        if viable[y] {
            net.add(2 * v + 1, 2 * y);
        }
    }
    net.max_flow(2 * v + 1, sink)
}

/// Unit-capacity residual network.
struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u8>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, a: usize, b: usize) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(1);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; self.head.len()];
            let mut queue = VecDeque::from([s]);
            via[s] = usize::MAX - 1;
            while let Some(a) = queue.pop_front() {
                if a == t {
                    break;
                }
                for &e in &self.head[a] {
                    let b = self.to[e];
                    if self.cap[e] > 0 && via[b] == usize::MAX {
                        via[b] = e;
                        queue.push_back(b);
                    }
                }
            }
            if via[t] == usize::MAX {
                return flow;
            }
            let mut b = t;
            while b != s {
                let e = via[b];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                b = self.to[e ^ 1];
            }
            flow += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Col,
    Adm,
}

/// Minimum of `col_r` or `adm_r` over all orderings, with the
/// lexicographically first witness. Only for `n <= 9`.
pub fn brute_optimum(g: &Graph, r: usize, objective: Objective) -> Result<(usize, VertexOrdering)> {
    let n = g.n();
    if n > BRUTE_OPTIMUM_MAX_N {
        return Err(Error::SizeLimit {
            what: "brute_optimum vertex count",
            size: n,
            limit: BRUTE_OPTIMUM_MAX_N,
        });
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    let mut dist = vec![usize::MAX; n];
    loop {
        let l = VertexOrdering::from_order(perm.clone()).expect("permutation");
        let cap = best.as_ref().map_or(usize::MAX, |b| b.0);
        // stop evaluating an ordering once it cannot beat the incumbent
        let mut value = 0;
        for v in 0..n {
            let here = match objective {
                Objective::Col => sreach_into(g, &l, v, r, &mut dist).len(),
                Objective::Adm => adm_vertex(g, &l, v, r, DEFAULT_ADM_BUDGET)?,
            };
            value = value.max(here);
            if value >= cap {
                break;
            }
        }
        if value < cap {
            best = Some((value, perm.clone()));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (value, order) = best.unwrap_or((0, Vec::new()));
    Ok((value, VertexOrdering::from_order(order)?))
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Degeneracy ordering: repeatedly remove a minimum-degree vertex (smallest
/// id on ties) and place it last among the vertices not yet placed.
pub fn heuristic_ordering(g: &Graph) -> VertexOrdering {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut heap: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = vec![0; n];
    let mut slot = n;
    while let Some((_, v)) = heap.pop_first() {
        slot -= 1;
        order[slot] = v;
        removed[v] = true;
        for &w in g.neighbors(v) {
            if !removed[w] {
                heap.remove(&(deg[w], w));
                deg[w] -= 1;
                heap.insert((deg[w], w));
            }
        }
    }
    VertexOrdering::from_order(order).expect("every vertex placed once")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sreach_examples() {
        let k1 = Graph::empty(1);
        assert_eq!(sreach(&k1, &VertexOrdering::identity(1), 0, 5), vec![0]);
        let p = Graph::path(3);
        let id = VertexOrdering::identity(3);
        assert_eq!(sreach(&p, &id, 2, 1), vec![1, 2]);
        assert_eq!(sreach(&p, &id, 2, 2), vec![1, 2]);
        // through larger vertices
        let l = VertexOrdering::from_order(vec![0, 2, 1]).unwrap();
        assert_eq!(sreach(&p, &l, 2, 2), vec![0, 2]);
        assert_eq!(sreach(&p, &l, 2, 1), vec![2]);
    }

    #[test]
    fn col_examples() {
        assert_eq!(col_wrt(&Graph::empty(1), &VertexOrdering::identity(1), 3), 1);
        assert_eq!(col_wrt(&Graph::path(5), &VertexOrdering::identity(5), 3), 2);
        let k4 = Graph::complete(4);
        let l = VertexOrdering::from_order(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(col_wrt(&k4, &l, 1), 4);
    }

    #[test]
    fn adm_examples() {
        let k1 = Graph::empty(1);
        assert_eq!(adm_wrt(&k1, &VertexOrdering::identity(1), 4).unwrap(), 1);
        let star = Graph::star(3);
        let centre_last = VertexOrdering::from_order(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(adm_wrt(&star, &centre_last, 1).unwrap(), 4);
        assert_eq!(adm_wrt(&Graph::path(5), &VertexOrdering::identity(5), 2).unwrap(), 2);
        assert_eq!(adm_wrt(&star, &centre_last, 0).unwrap(), 1);
    }

    #[test]
    fn adm_long_paths() {
        // v = 0 is largest; two disjoint routes 0-1-2 and 0-3-4 to smaller 2 and 4,
        // with 1 and 3 larger than the targets but smaller than nothing else.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4), (1, 4)]).unwrap();
        // order: 2, 4 smallest; then 0; then 1, 3
        let l = VertexOrdering::from_order(vec![2, 4, 0, 1, 3]).unwrap();
        assert_eq!(adm_vertex(&g, &l, 0, 2, DEFAULT_ADM_BUDGET).unwrap(), 3);
        assert_eq!(adm_vertex(&g, &l, 0, 1, DEFAULT_ADM_BUDGET).unwrap(), 1);
    }

    #[test]
    fn budget_is_reported() {
        let g = Graph::complete(8);
        let l = VertexOrdering::identity(8);
        let err = adm_wrt_budget(&Graph::cycle(8), &l, 6, 1).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1, .. }));
        assert_eq!(adm_wrt(&g, &l, 3).unwrap(), 8);
    }

    #[test]
    fn brute_examples() {
        let (v, l) = brute_optimum(&Graph::empty(1), 2, Objective::Col).unwrap();
        assert_eq!((v, l.len()), (1, 1));
        assert_eq!(brute_optimum(&Graph::cycle(4), 1, Objective::Col).unwrap().0, 3);
        assert_eq!(brute_optimum(&Graph::complete(4), 2, Objective::Adm).unwrap().0, 4);
        assert!(matches!(
            brute_optimum(&Graph::empty(10), 1, Objective::Col),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn heuristic_examples() {
        assert_eq!(heuristic_ordering(&Graph::empty(1)).order(), &[0]);
        let t = crate::random::random_tree(5, 40);
        assert_eq!(col_wrt(&t, &heuristic_ordering(&t), 1), 2);
        let k4 = Graph::complete(4);
        assert_eq!(col_wrt(&k4, &heuristic_ordering(&k4), 1), 4);
        // star: leaves go last one by one, centre ends up among the first two
        let star = Graph::star(4);
        assert_eq!(col_wrt(&star, &heuristic_ordering(&star), 1), 2);
    }

    #[test]
    fn permutations_enumerate_all() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }
}
