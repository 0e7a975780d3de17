//! Finite posets: validation with closure, minimum chain covers through
//! bipartite matching, brute-force width, and the chain-indexed linear order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fo::{var, FOStructure, Formula};
use crate::graph::{SuccessorRelation, Vertex};

pub const BRUTE_WIDTH_MAX_N: usize = 18;
pub const LE: &str = "le";

/// `le[a][b]` iff `a ≤ b`; reflexive and transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    le: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetDoc {
    pub n: usize,
    #[serde(default)]
    pub le: Vec<[usize; 2]>,
}

impl PosetDoc {
    pub fn to_poset(&self) -> Result<Poset> {
        validate_poset(self.n, self.le.iter().map(|&[a, b]| (a, b)))
    }
}

impl Poset {
    pub fn n(&self) -> usize {
        self.le.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le[a][b] || self.le[b][a]
    }

    /// All pairs `a ≤ b`, reflexive ones included.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| self.le[a][b]).map(move |b| (a, b)))
            .collect()
    }

    pub fn to_doc(&self) -> PosetDoc {
        PosetDoc {
            n: self.n(),
            le: self.pairs().into_iter().filter(|(a, b)| a != b).map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// Closes `pairs` reflexively and transitively, then checks antisymmetry.
pub fn validate_poset(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Poset> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in pairs {
        for v in [a, b] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        le[a][b] = true;
    }
    for k in 0..n {
        let via = le[k].clone();
        for row in le.iter_mut() {
            if row[k] {
                for (x, &y) in row.iter_mut().zip(&via) {
                    *x |= y;
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if le[a][b] && le[b][a] {
                return Err(Error::Antisymmetry(a, b));
            }
        }
    }
    Ok(Poset { le })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCover {
    /// Disjoint chains, each ascending, ordered by first element.
    pub chains: Vec<Vec<usize>>,
}

impl ChainCover {
    pub fn width(&self) -> usize {
        self.chains.len()
    }

    /// 0-based chain index of every element.
    pub fn chain_index(&self, n: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; n];
        for (j, c) in self.chains.iter().enumerate() {
            for &v in c {
                idx[v] = j;
            }
        }
        idx
    }

    pub fn is_valid_for(&self, p: &Poset) -> bool {
        let n = p.n();
        let mut seen = vec![false; n];
        for c in &self.chains {
            if c.is_empty() {
                return false;
            }
            for &v in c {
                if v >= n || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            if !c.windows(2).all(|w| p.lt(w[0], w[1])) {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Minimum chain partition: a maximum matching between the two copies of
/// the strict order links each element to its chain successor.
pub fn min_chain_cover(p: &Poset) -> ChainCover {
    let n = p.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| p.lt(a, b)).collect()).collect();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for a in 0..n {
        let mut visited = vec![false; n];
        augment(a, &adj, &mut match_right, &mut visited);
    }
    let mut next = vec![None; n];
    let mut has_prev = vec![false; n];
    for (b, m) in match_right.iter().enumerate() {
        if let Some(a) = *m {
            next[a] = Some(b);
            has_prev[b] = true;
        }
    }
    let chains = (0..n)
        .filter(|&v| !has_prev[v])
        .map(|start| {
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(b) = next[cur] {
                chain.push(b);
                cur = b;
            }
            chain
        })
        .collect();
    ChainCover { chains }
}

// Kuhn's augmenting path search, iterative to survive long chains.
fn augment(start: usize, adj: &[Vec<usize>], match_right: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    // frames: (left vertex, next edge index, right vertex taken to get here)
    let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(start, 0, None)];
    while let Some(&mut (a, ref mut i, _)) = stack.last_mut() {
        if *i >= adj[a].len() {
            stack.pop();
            continue;
        }
        let b = adj[a][*i];
        *i += 1;
        if visited[b] {
            continue;
        }
        visited[b] = true;
        match match_right[b] {
            None => {
                // flip the path: each frame's left vertex takes the right
                // vertex of the frame above it
                let mut take = b;
                while let Some((a, _, via)) = stack.pop() {
                    match_right[take] = Some(a);
                    match via {
                        Some(v) => take = v,
                        None => break,
                    }
                }
                return true;
            }
            Some(a2) => stack.push((a2, 0, Some(b))),
        }
    }
    false
}

/// Largest antichain size by branch and bound over subsets.
pub fn brute_width(p: &Poset) -> Result<usize> {
    let n = p.n();
    if n > BRUTE_WIDTH_MAX_N {
        return Err(Error::SizeLimit {
            what: "poset for brute-force width",
            size: n,
            limit: BRUTE_WIDTH_MAX_N,
        });
    }
    let incomparable: Vec<u32> = (0..n)
        .map(|a| (0..n).filter(|&b| b != a && !p.comparable(a, b)).fold(0u32, |m, b| m | 1 << b))
        .collect();
    fn go(cands: u32, size: usize, best: &mut usize, inc: &[u32]) {
        if cands == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cands.count_ones() as usize <= *best {
            return;
        }
        let v = cands.trailing_zeros() as usize;
        let rest = cands & !(1 << v);
        go(rest & inc[v], size + 1, best, inc);
        go(rest, size, best, inc);
    }
    let mut best = 0;
    go(if n == 0 { 0 } else { (1u32 << n) - 1 }, 0, &mut best, &incomparable);
    Ok(best)
}

/// Chains in index order, each ascending.
pub fn lift_order(p: &Poset, cover: &ChainCover) -> Result<SuccessorRelation> {
    if !cover.is_valid_for(p) {
        return Err(Error::InvalidInput("chain cover does not partition the poset into chains".into()));
    }
    SuccessorRelation::new(cover.chains.concat())
}

/// Name of the unary predicate for `λ'(v) = (colour, chain)`, chain 1-based.
pub fn colour_chain_name(colour: usize, chain: usize) -> String {
    format!("col{colour},{chain}")
}

/// The order formula over `colours × [w]` with the poset order named `le`.
pub fn phi_le(colours: usize, w: usize) -> Formula {
    let (x, y) = (var("x"), var("y"));
    let mut disjuncts = Vec::new();
    for i in 1..=w {
        for j in i + 1..=w {
            for cx in 0..colours {
                for cy in 0..colours {
                    disjuncts.push(Formula::And(vec![
                        Formula::un(&colour_chain_name(cx, i), &x),
                        Formula::un(&colour_chain_name(cy, j), &y),
                    ]));
                }
            }
        }
    }
    for i in 1..=w {
        for cx in 0..colours {
            for cy in 0..colours {
                disjuncts.push(Formula::And(vec![
                    Formula::un(&colour_chain_name(cx, i), &x),
                    Formula::un(&colour_chain_name(cy, i), &y),
                    Formula::rel(LE, &x, &y),
                ]));
            }
        }
    }
    Formula::Or(disjuncts)
}

/// The coloured poset with colouring `λ'`; `lambda[v] < colours`.
pub fn coloured_structure(p: &Poset, cover: &ChainCover, lambda: &[usize], colours: usize) -> Result<FOStructure> {
    let n = p.n();
    if lambda.len() != n || lambda.iter().any(|&c| c >= colours) {
        return Err(Error::InvalidInput(format!(
            "colouring must assign one of {colours} colours to each of {n} elements"
        )));
    }
    let mut s = FOStructure::new(n);
    s.add_binary(LE, p.pairs())?;
    let idx = cover.chain_index(n);
    for j in 1..=cover.width() {
        for c in 0..colours {
            let members = (0..n).filter(|&v| idx[v] + 1 == j && lambda[v] == c);
            s.add_unary(&colour_chain_name(c, j), members)?;
        }
    }
    Ok(s)
}

/// Whether the order defined by the formula equals the non-strict version of
/// the lifted sequence.
pub fn phi_le_matches(p: &Poset, cover: &ChainCover, lambda: &[usize], colours: usize) -> Result<bool> {
    let s = coloured_structure(p, cover, lambda, colours)?;
    let defined = crate::fo::define_relation(&s, &phi_le(colours, cover.width()))?;
    let seq = lift_order(p, cover)?;
    let mut pos = vec![0; p.n()];
    for (i, &v) in seq.order().iter().enumerate() {
        pos[v] = i;
    }
    let expected = (0..p.n())
        .flat_map(|a| (0..p.n()).map(move |b| (a, b)))
        .filter(|&(a, b)| pos[a] <= pos[b])
        .collect();
    Ok(defined == expected)
}

#[derive(Debug, Clone, Serialize)]
pub struct PosetReport {
    pub n: usize,
    pub chains: Vec<Vec<Vertex>>,
    pub width: usize,
    pub brute_width: Option<usize>,
    pub lifted: Vec<Vertex>,
    pub lifted_total: bool,
    pub extends_within_chains: bool,
    pub ok: bool,
}

pub fn analyse_poset(p: &Poset) -> Result<PosetReport> {
    let cover = min_chain_cover(p);
    let lifted = lift_order(p, &cover)?;
    let brute = match brute_width(p) {
        Ok(w) => Some(w),
        Err(Error::SizeLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    let (total, within) = check_lifted(p, &cover, lifted.order());
    let ok = total && within && cover.is_valid_for(p) && brute.map_or(true, |b| b == cover.width());
    Ok(PosetReport {
        n: p.n(),
        width: cover.width(),
        chains: cover.chains,
        brute_width: brute,
        lifted: lifted.order().to_vec(),
        lifted_total: total,
        extends_within_chains: within,
        ok,
    })
}

/// (strict total order on positions, agrees with `≤` inside each chain)
pub fn check_lifted(p: &Poset, cover: &ChainCover, seq: &[Vertex]) -> (bool, bool) {
    let n = p.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in seq.iter().enumerate() {
        if v < n {
            pos[v] = i;
        }
    }
    let total = seq.len() == n && pos.iter().all(|&x| x != usize::MAX);
    let idx = cover.chain_index(n);
    let within = total
        && (0..n).all(|a| {
            (0..n).all(|b| a == b || idx[a] != idx[b] || (pos[a] < pos[b]) == p.lt(a, b))
        });
    (total, within)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Poset {
        // ⊥ = 0, a = 1, b = 2, ⊤ = 3
        validate_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn validation() {
        let anti = validate_poset(3, []).unwrap();
        assert_eq!(anti.pairs(), vec![(0, 0), (1, 1), (2, 2)]);
        let chain = validate_poset(3, [(0, 1), (1, 2)]).unwrap();
        assert!(chain.le(0, 2));
        assert!(matches!(validate_poset(2, [(0, 1), (1, 0)]), Err(Error::Antisymmetry(0, 1))));
        assert!(validate_poset(2, [(0, 2)]).is_err());
    }

    #[test]
    fn covers() {
        let anti = validate_poset(4, []).unwrap();
        assert_eq!(min_chain_cover(&anti).chains, vec![vec![0], vec![1], vec![2], vec![3]]);
        let total = validate_poset(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(min_chain_cover(&total).chains, vec![vec![2, 0, 3, 1]]);
        let d = diamond();
        let c = min_chain_cover(&d);
        assert_eq!(c.width(), 2);
        assert!(c.is_valid_for(&d));
        assert_eq!(brute_width(&d).unwrap(), 2);
        assert_eq!(brute_width(&anti).unwrap(), 4);
        assert_eq!(brute_width(&total).unwrap(), 1);
    }

    #[test]
    fn lifting_diamond() {
        let d = diamond();
        let cover = ChainCover {
            chains: vec![vec![0, 1, 3], vec![2]],
        };
        let seq = lift_order(&d, &cover).unwrap();
        assert_eq!(seq.order(), &[0, 1, 3, 2]);
        assert_eq!(check_lifted(&d, &cover, seq.order()), (true, true));
        assert!(phi_le_matches(&d, &cover, &[0, 1, 0, 1], 2).unwrap());
        let bad = ChainCover {
            chains: vec![vec![1, 2], vec![0, 3]],
        };
        assert!(lift_order(&d, &bad).is_err());
    }

    #[test]
    fn long_chain_matching() {
        let n = 400;
        let p = validate_poset(n, (0..n - 1).map(|i| (i, i + 1)));
        let c = min_chain_cover(&p.unwrap());
        assert_eq!(c.width(), 1);
    }
}
