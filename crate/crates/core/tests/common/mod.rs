//! Independent oracles shared by the integration tests.
//!
//! Nothing here uses cotrees, canonical codes or the polarity DP. Graphs are
//! handled through adjacency queries only.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use copolar_core::{Cotree, Graph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Induced P4 search over all ordered quadruples.
pub fn is_p4_free(g: &Graph) -> bool {
    let n = g.order();
    for a in 0..n {
        for b in 0..n {
            if b == a || !g.has_edge(a, b) {
                continue;
            }
            for c in 0..n {
                if c == a || c == b || !g.has_edge(b, c) || g.has_edge(a, c) {
                    continue;
                }
                for d in 0..n {
                    if d == a || d == b || d == c {
                        continue;
                    }
                    if g.has_edge(c, d) && !g.has_edge(a, d) && !g.has_edge(b, d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn degrees(g: &Graph) -> Vec<usize> {
    (0..g.order()).map(|v| g.degree(v)).collect()
}

/// Isomorphism by backtracking over vertex maps, pruned by degree.
pub fn isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return false;
    }
    let (dg, dh) = (degrees(g), degrees(h));
    let mut sg = dg.clone();
    let mut sh = dh.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return false;
    }
    fn extend(g: &Graph, h: &Graph, dg: &[usize], dh: &[usize], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let u = map.len();
        if u == g.order() {
            return true;
        }
        for x in 0..h.order() {
            if used[x] || dg[u] != dh[x] {
                continue;
            }
            if (0..u).any(|w| g.has_edge(u, w) != h.has_edge(x, map[w])) {
                continue;
            }
            map.push(x);
            used[x] = true;
            if extend(g, h, dg, dh, map, used) {
                return true;
            }
            map.pop();
            used[x] = false;
        }
        false
    }
    extend(g, h, &dg, &dh, &mut Vec::with_capacity(n), &mut vec![false; n])
}

/// Applies `perm` to the vertex labels.
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.order(), &edges).unwrap()
}

fn add_vertex(g: &Graph, nbrs: u64) -> Graph {
    let n = g.order();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.extend((0..n).filter(|v| nbrs >> v & 1 == 1).map(|v| (v, n)));
    Graph::from_edges(n + 1, &edges).unwrap()
}

/// Cograph isomorphism classes of orders `1..=n_max`, indexed by order.
///
/// Every cograph of order n+1 loses a vertex to a cograph of order n, so
/// extending each class representative by every neighbourhood reaches all
/// classes. Duplicates are removed with [`isomorphic`].
pub fn census(n_max: usize) -> Vec<Vec<Graph>> {
    let mut levels = vec![Vec::new(), vec![Graph::edgeless(1).unwrap()]];
    for n in 1..n_max {
        let mut buckets: HashMap<(usize, Vec<usize>), Vec<Graph>> = HashMap::new();
        for g in &levels[n] {
            for nbrs in 0..1u64 << n {
                let h = add_vertex(g, nbrs);
                if !is_p4_free(&h) {
                    continue;
                }
                let mut key = degrees(&h);
                key.sort_unstable();
                let bucket = buckets.entry((h.edge_count(), key)).or_default();
                if !bucket.iter().any(|x| isomorphic(x, &h)) {
                    bucket.push(h);
                }
            }
        }
        levels.push(buckets.into_values().flatten().collect());
    }
    levels.truncate(n_max + 1);
    levels
}

/// Number of classes of the relation whose closed neighbourhoods are `rows`,
/// restricted to `set`, or `None` when it is not an equivalence.
fn classes(rows: &[u64], set: u64) -> Option<usize> {
    let mut count = 0;
    let mut seen = 0u64;
    for v in (0..rows.len()).filter(|v| set >> v & 1 == 1) {
        let class = rows[v] & set;
        let mut members = class;
        while members != 0 {
            let u = members.trailing_zeros() as usize;
            members &= members - 1;
            if rows[u] & set != class {
                return None;
            }
        }
        if seen & 1 << v == 0 {
            count += 1;
            seen |= class;
        }
    }
    Some(count)
}

/// Every (parts of A, cliques of B) over all bipartitions V = A ∪ B where
/// G[A] is complete multipartite and G[B] is a disjoint union of cliques.
pub fn exact_signatures(g: &Graph) -> BTreeSet<(usize, usize)> {
    let n = g.order();
    let full = (1u64 << n) - 1;
    let adj: Vec<u64> = (0..n)
        .map(|v| (0..n).filter(|&u| u == v || g.has_edge(u, v)).fold(0, |m, u| m | 1 << u))
        .collect();
    // non-adjacency, closed
    let non: Vec<u64> = (0..n).map(|v| (!adj[v] | 1 << v) & full).collect();
    let mut out = BTreeSet::new();
    for a in 0..=full {
        if let (Some(p), Some(c)) = (classes(&non, a), classes(&adj, full & !a)) {
            out.insert((p, c));
        }
    }
    out
}

/// `None` stands for an unbounded parameter.
pub fn polar(sigs: &BTreeSet<(usize, usize)>, s: Option<usize>, k: Option<usize>) -> bool {
    sigs.iter()
        .any(|&(p, c)| s.is_none_or(|s| p <= s) && k.is_none_or(|k| c <= k))
}

pub fn is_minimal_obstruction(g: &Graph, s: Option<usize>, k: Option<usize>) -> bool {
    !polar(&exact_signatures(g), s, k)
        && (0..g.order()).all(|v| polar(&exact_signatures(&g.delete_vertex(v)), s, k))
}

/// A random cotree of order `n` with leaves labelled `0..n`.
pub fn random_cotree<R: Rng>(rng: &mut R, n: usize) -> Cotree {
    fn build<R: Rng>(rng: &mut R, n: usize, next: &mut usize) -> Cotree {
        if n == 1 {
            *next += 1;
            return Cotree::Leaf(*next - 1);
        }
        let parts = rng.gen_range(2..=n.min(4));
        let mut sizes = vec![1; parts];
        for _ in parts..n {
            let i = rng.gen_range(0..parts);
            sizes[i] += 1;
        }
        let children = sizes.into_iter().map(|m| build(rng, m, next)).collect();
        if rng.gen_bool(0.5) {
            Cotree::union(children)
        } else {
            Cotree::join(children)
        }
    }
    build(rng, n, &mut 0)
}

/// A random cograph of order `n` with shuffled labels.
pub fn random_cograph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let g = random_cotree(rng, n).realize().unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    relabel(&g, &perm)
}
