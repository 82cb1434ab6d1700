//! Independent brute-force oracles shared by the integration tests. None of
//! them call the library routine they are compared against.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use egw_core::hypergraph::{Hypergraph, Pairing, PairingStrategy, VertexId};
use egw_core::sat::CnfFormula;
use egw_core::tree::{BinaryTree, TreeBuilder};

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// A random full binary tree with about `target` nodes (odd, at least 1).
pub fn random_tree(rng: &mut impl Rng, target: usize) -> BinaryTree {
    let mut b = TreeBuilder::new();
    while b.len() + 2 <= target {
        let leaves = b.leaves();
        let v = leaves[rng.gen_range(0..leaves.len())];
        b.split(v);
    }
    b.finish()
}

/// Leaves of the subtree of `v` by distance, found by walking parent links
/// up from every leaf.
pub fn leaf_counts_oracle(t: &BinaryTree, v: usize, horizon: usize) -> Vec<u64> {
    let mut counts = vec![0u64; horizon];
    for leaf in t.leaves() {
        let mut d = 0;
        let mut cur = leaf;
        while cur != v {
            match t.parent(cur) {
                Some(p) => {
                    cur = p;
                    d += 1;
                }
                None => break,
            }
        }
        if cur == v && d < horizon {
            counts[d] += 1;
        }
    }
    counts
}

pub fn edge_sets(h: &Hypergraph) -> Vec<HashSet<VertexId>> {
    h.edges().map(|e| e.into_iter().collect()).collect()
}

pub fn brute_degrees(h: &Hypergraph) -> Vec<usize> {
    let sets = edge_sets(h);
    (0..h.num_vertices()).map(|v| sets.iter().filter(|e| e.contains(&v)).count()).collect()
}

/// `|N(e)|` by pairwise intersection.
pub fn brute_neighborhoods(h: &Hypergraph) -> Vec<usize> {
    let sets = edge_sets(h);
    (0..sets.len())
        .map(|i| {
            (0..sets.len())
                .filter(|&j| j != i && !sets[i].is_disjoint(&sets[j]))
                .count()
        })
        .collect()
}

/// Truth-table satisfiability over the declared variables.
pub fn brute_sat(f: &CnfFormula) -> bool {
    let n = f.num_vars();
    assert!(n <= 22, "truth table too large");
    (0u64..1 << n).any(|a| {
        f.clauses().iter().all(|c| {
            c.iter().any(|&l| {
                let val = a >> (l.unsigned_abs() - 1) & 1 == 1;
                if l > 0 {
                    val
                } else {
                    !val
                }
            })
        })
    })
}

/// MU(1) by definition: unsatisfiable, minimal, deficiency one.
pub fn brute_mu1(f: &CnfFormula) -> bool {
    let m = f.num_clauses();
    let vars: HashSet<u32> = f.clauses().iter().flatten().map(|l| l.unsigned_abs()).collect();
    if m as i64 - vars.len() as i64 != 1 || brute_sat(f) {
        return false;
    }
    (0..m).all(|i| {
        let rest: Vec<Vec<i32>> = f
            .clauses()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| c.iter().map(|&l| l as i32).collect())
            .collect();
        brute_sat(&CnfFormula::new_permissive(f.num_vars(), to_lits(rest)).unwrap())
    })
}

fn to_lits(cs: Vec<Vec<i32>>) -> Vec<Vec<egw_core::sat::Literal>> {
    cs.into_iter()
        .map(|c| c.into_iter().map(|l| l as egw_core::sat::Literal).collect())
        .collect()
}

/// A random formula with clauses of width `k` over `n` variables.
pub fn random_cnf(rng: &mut impl Rng, n: usize, m: usize, k: usize) -> CnfFormula {
    let vars: Vec<i64> = (1..=n as i64).collect();
    let clauses = (0..m)
        .map(|_| {
            vars.choose_multiple(rng, k.min(n))
                .map(|&v| (if rng.gen_bool(0.5) { v } else { -v }) as egw_core::sat::Literal)
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Does Maker, following the strategy, always own an edge? Every Breaker
/// selection (one vertex per pair plus the leftover) is tried as a set.
pub fn brute_pairing_wins(h: &Hypergraph, s: &PairingStrategy) -> bool {
    let pairs = &s.pairing.pairs;
    assert!(pairs.len() <= 20);
    let sets = edge_sets(h);
    (0u32..1 << pairs.len()).all(|sel| {
        let mut breaker: HashSet<VertexId> = s.pairing.leftover.into_iter().collect();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            breaker.insert(if sel >> i & 1 == 1 { a } else { b });
        }
        sets.iter().any(|e| e.is_disjoint(&breaker))
    })
}

/// Plain minimax over the full game tree, no pruning or memo.
pub fn brute_maker_wins(h: &Hypergraph, maker_first: bool) -> bool {
    let nv = h.num_vertices();
    assert!(nv <= 12);
    let edges: Vec<u32> = h.edges().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    fn go(edges: &[u32], nv: usize, m: u32, b: u32, maker: bool) -> bool {
        if edges.iter().any(|&e| e & m == e) {
            return true;
        }
        let free: Vec<u32> = (0..nv as u32).filter(|&v| (m | b) >> v & 1 == 0).collect();
        if free.is_empty() {
            return false;
        }
        if maker {
            free.iter().any(|&v| go(edges, nv, m | 1 << v, b, false))
        } else {
            free.iter().all(|&v| go(edges, nv, m, b | 1 << v, true))
        }
    }
    go(&edges, nv, 0, 0, maker_first)
}

/// Exhaustive search for a proper 2-coloring giving paired vertices
/// different colors (each pair is one bit).
pub fn brute_p_coloring_exists(h: &Hypergraph, p: &Pairing) -> bool {
    assert!(p.leftover.is_none() && p.pairs.len() <= 20);
    let sets = edge_sets(h);
    (0u32..1 << p.pairs.len()).any(|sel| {
        let mut red = HashSet::new();
        for (i, &(a, b)) in p.pairs.iter().enumerate() {
            red.insert(if sel >> i & 1 == 1 { a } else { b });
        }
        sets.iter().all(|e| {
            let r = e.iter().filter(|v| red.contains(v)).count();
            r != 0 && r != e.len()
        })
    })
}

/// A random perfect pairing of `0..nv` (`nv` even).
pub fn random_pairing(rng: &mut impl Rng, nv: usize) -> Pairing {
    let mut vs: Vec<VertexId> = (0..nv).collect();
    vs.shuffle(rng);
    Pairing::new(vs.chunks(2).map(|c| (c[0], c[1])).collect(), None)
}

/// A random `k`-uniform hypergraph on `nv` vertices with `m` distinct edges.
pub fn random_uniform(rng: &mut impl Rng, nv: usize, m: usize, k: usize) -> Hypergraph {
    let all: Vec<VertexId> = (0..nv).collect();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut tries = 0;
    while edges.len() < m && tries < 100 * m + 100 {
        tries += 1;
        let mut e: Vec<VertexId> = all.choose_multiple(rng, k).copied().collect();
        e.sort_unstable();
        if seen.insert(e.clone()) {
            edges.push(e);
        }
    }
    Hypergraph::new(names(nv), edges).unwrap()
}

/// Exact rational `p/q` with `q > 0`, printed as an integer when `q = 1`.
pub fn fraction_string(p: BigInt, q: BigInt) -> String {
    fn gcd(a: BigInt, b: BigInt) -> BigInt {
        if b.is_zero() {
            a.abs()
        } else {
            let r = &a % &b;
            gcd(b, r)
        }
    }
    let g = gcd(p.clone(), q.clone());
    let (p, q) = (p / &g, q / &g);
    if q.is_one() {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

/// `e` bracketed by `Σ_{j ≤ N} 1/j!` and that sum plus `2/(N+1)!`, as
/// fractions over the common denominator `N!·(N+1)`.
fn e_bracket(terms: u32) -> (BigUint, BigUint, BigUint) {
    let mut fact = BigUint::one();
    for j in 1..=terms {
        fact *= j;
    }
    let den = &fact * (terms + 1);
    let mut num = BigUint::zero();
    let mut term = den.clone();
    for j in 0..=terms {
        if j > 0 {
            term /= j;
        }
        num += &term;
    }
    let hi = &num + 2u32;
    (num, hi, den)
}

/// `⌊a / (e·b)⌋` exactly, or `None` if the bracket is too coarse.
pub fn floor_div_e(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    let (lo, hi, den) = e_bracket(60);
    // a / (e b) lies between a·den / (hi·b) and a·den / (lo·b).
    let upper = (a * &den) / (&lo * b);
    let lower = (a * &den) / (&hi * b);
    (upper == lower).then_some(upper)
}

/// The ten bound-table values for `k`, from big-integer arithmetic.
pub fn bound_values_oracle(k: u32) -> Vec<String> {
    let p2 = |j: u32| BigUint::one() << j;
    let kb = BigUint::from(k);
    let one = BigUint::one();
    let big = |x: BigUint| BigInt::from(x);
    let minus_one = |p: BigUint, q: BigUint| fraction_string(big(p) - big(q.clone()), big(q));
    vec![
        floor_div_e(&p2(k), &kb).unwrap().to_string(),
        floor_div_e(&p2(k + 1), &kb).unwrap().to_string(),
        minus_one(p2(k), kb.clone()),
        minus_one(p2(k + 1), kb.clone()),
        minus_one(p2(k - 1) * 63u32, &kb * 64u32),
        (floor_div_e(&p2(k), &one).unwrap() - 1u32).to_string(),
        (p2(k) - 2u32).to_string(),
        (p2(k - 1) - 1u32).to_string(),
        (p2(k - 1) + p2(k - 2)).to_string(),
        minus_one(p2(k - 1) * 63u32, BigUint::from(64u32)),
    ]
}

pub fn as_u64(x: &BigUint) -> u64 {
    x.to_u64().unwrap()
}
