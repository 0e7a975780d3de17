//! Shallow-minor edge densities at brute-force scale, and the closed-form
//! ceilings used by the successor construction.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{max_of, Scalar};

/// Largest vertex count for exact `∇_0` (subset enumeration).
pub const NABLA0_MAX_N: usize = 20;
/// Largest vertex count for exact `∇_1` (branch-set enumeration).
pub const NABLA1_MAX_N: usize = 7;

/// Exact `∇_r(G)` for `r ∈ {0, 1}`: the largest `|E(H)| / |V(H)|` over
/// depth-`r` minors `H` of `G`. The empty minor has density 0.
pub fn nabla_brute<S: Scalar>(g: &Graph, r: usize) -> Result<S> {
    match r {
        0 => nabla0(g),
        1 => nabla1(g),
        _ => Err(Error::InvalidInput(format!(
            "exact shallow-minor density is only available for r <= 1, got {r}"
        ))),
    }
}

fn nabla0<S: Scalar>(g: &Graph) -> Result<S> {
    let n = g.n();
    if n > NABLA0_MAX_N {
        return Err(Error::SizeLimit {
            what: "nabla_0 vertex count",
            size: n,
            limit: NABLA0_MAX_N,
        });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    // best (edges, vertices) pair, compared by cross-multiplication
    let mut best = (0u64, 1u64);
    for set in 1u32..(1u32 << n) {
        let mut twice = 0u64;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice += (masks[v] & set).count_ones() as u64;
        }
        let e = twice / 2;
        let p = set.count_ones() as u64;
        if e * best.1 > best.0 * p {
            best = (e, p);
        }
    }
    Ok(S::from_ratio(best.0, best.1))
}

/// Enumerates vertex labellings in restricted-growth form: label 0 means
/// unused, labels 1.. name branch sets in order of first appearance. A branch
/// set has radius at most 1 when some member is adjacent to all others.
fn nabla1<S: Scalar>(g: &Graph) -> Result<S> {
    let n = g.n();
    if n > NABLA1_MAX_N {
        return Err(Error::SizeLimit {
            what: "nabla_1 vertex count",
            size: n,
            limit: NABLA1_MAX_N,
        });
    }
    let mut label = vec![0usize; n];
    let mut densities: Vec<(u64, u64)> = vec![(0, 1)];
    fn walk(g: &Graph, i: usize, sets: usize, label: &mut [usize], out: &mut Vec<(u64, u64)>) {
        let n = g.n();
        if i == n {
            if sets > 0 {
                if let Some(e) = minor_edges(g, label, sets) {
                    out.push((e, sets as u64));
                }
            }
            return;
        }
        for c in 0..=sets + 1 {
            label[i] = c;
            let grown = if c == sets + 1 { sets + 1 } else { sets };
            walk(g, i + 1, grown, label, out);
        }
        label[i] = 0;
    }
    walk(g, 0, 0, &mut label, &mut densities);
    let best = densities
        .into_iter()
        .max_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)))
        .expect("empty minor present");
    Ok(S::from_ratio(best.0, best.1))
}

/// Edge count of the minor given by the branch sets, or `None` when some set
/// is not a radius-1 star.
fn minor_edges(g: &Graph, label: &[usize], sets: usize) -> Option<u64> {
    let n = g.n();
    for s in 1..=sets {
        let members: Vec<usize> = (0..n).filter(|&v| label[v] == s).collect();
        let has_centre = members
            .iter()
            .any(|&c| members.iter().all(|&x| x == c || g.has_edge(c, x)));
        if !has_centre {
            return None;
        }
    }
    let mut adjacent = vec![false; (sets + 1) * (sets + 1)];
    let mut count = 0;
    for (u, v) in g.edges() {
        let (a, b) = (label[u], label[v]);
        if a != 0 && b != 0 && a != b {
            let key = a.min(b) * (sets + 1) + a.max(b);
            if !adjacent[key] {
                adjacent[key] = true;
                count += 1;
            }
        }
    }
    Some(count)
}

/// A certified upper bound on `∇_r(G)` for every `r`: a minor with `p` vertices
/// has at most `min(p(p-1)/2, |E(G)|)` edges and `p <= n`.
pub fn nabla_upper_bound<S: Scalar>(g: &Graph) -> S {
    let m = g.m() as u64;
    let values = (1..=g.n() as u64).map(|p| {
        let e = (p * (p - 1) / 2).min(m);
        S::from_ratio(e, p)
    });
    max_of(values.chain(std::iter::once(S::zero()))).expect("non-empty")
}

/// `g(r, x) = 6r · (5 · 9² · (10r+1)² · x)³`.
pub fn bound_g(r: u64, x: &BigUint) -> BigUint {
    let inner = BigUint::from(405u64) * BigUint::from((10 * r + 1).pow(2)) * x;
    BigUint::from(6 * r) * inner.pow(3)
}

/// `h(r, y) = g(r, y^(40r+1))`: the ceiling on `adm_r(G + S̄, L)` in terms of
/// an admissibility (or colouring-number) value `y` of `G + F`.
pub fn bound_h(r: u64, y: u64) -> BigUint {
    let exp = u32::try_from(40 * r + 1).expect("radius fits the exponent");
    bound_g(r, &BigUint::from(y).pow(exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn nabla_examples() {
        assert_eq!(nabla_brute::<Q>(&Graph::empty(1), 0).unwrap(), Q::from_integer(0));
        assert_eq!(nabla_brute::<Q>(&Graph::complete(4), 0).unwrap(), Q::new(3, 2));
        assert_eq!(nabla_brute::<Q>(&Graph::cycle(4), 1).unwrap(), Q::from_integer(1));
        assert_eq!(nabla_brute::<Q>(&Graph::cycle(4), 0).unwrap(), Q::from_integer(1));
        assert_eq!(nabla_brute::<Q>(&Graph::path(2), 1).unwrap(), Q::new(1, 2));
        assert_eq!(nabla_brute::<f64>(&Graph::complete(4), 0).unwrap(), 1.5);
        assert!(nabla_brute::<Q>(&Graph::empty(8), 1).is_err());
        assert!(nabla_brute::<Q>(&Graph::empty(3), 2).is_err());
    }

    #[test]
    fn depth_one_contracts_stars() {
        // C_5 contracts to K_4? no: contracting gives C_4 / triangle, density 1
        assert_eq!(nabla_brute::<Q>(&Graph::cycle(5), 1).unwrap(), Q::from_integer(1));
        // K_{1,3} plus edges between leaves 1-2 and 2-3: a fan; contains K_4 minus edge
        let fan = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap();
        assert_eq!(nabla_brute::<Q>(&fan, 0).unwrap(), Q::new(5, 4));
        assert_eq!(nabla_brute::<Q>(&fan, 1).unwrap(), Q::new(5, 4));
    }

    #[test]
    fn upper_bound_dominates() {
        for g in [Graph::complete(5), Graph::cycle(6), Graph::path(4), Graph::empty(3)] {
            let ub: Q = nabla_upper_bound(&g);
            assert!(nabla_brute::<Q>(&g, 0).unwrap() <= ub);
            if g.n() <= NABLA1_MAX_N {
                assert!(nabla_brute::<Q>(&g, 1).unwrap() <= ub);
            }
        }
        assert_eq!(nabla_upper_bound::<Q>(&Graph::complete(4)), Q::new(3, 2));
    }

    #[test]
    fn bound_constants() {
        assert_eq!(bound_h(1, 1).to_string(), "706110112050750");
        assert_eq!(bound_g(1, &BigUint::from(1u8)), bound_h(1, 1));
        assert_eq!(
            bound_h(1, 2).to_string(),
            "7508650632357446365702155592886504546137439993856000"
        );
        assert_eq!(bound_h(2, 1).to_string(), "68369449665541500");
        assert!(bound_h(1, 2) > bound_h(1, 1));
    }
}
