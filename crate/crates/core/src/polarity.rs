//! (s,k)-polarity of cographs.
//!
//! A partition `(A, B)` of the vertices has *signature* `(s, k)` when `G[A]`
//! is complete multipartite with exactly `s` parts and `G[B]` is a cluster
//! with exactly `k` components. The [`PolarProfile`] of a graph is the set of
//! all signatures it admits; `G` is `(s, k)`-polar iff some admitted
//! signature is at most `(s, k)` componentwise.
//!
//! Profiles are computed bottom-up on the cotree. For a union of two parts
//! the cluster counts add, while the multipartite sides only combine when at
//! most one of them is nonempty or both are independent sets. Join is the
//! mirror image: part counts add, and the cluster sides only combine when at
//! most one is nonempty or both are cliques.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::cotree::{Cotree, CotreeError, Op, Recognition};
use crate::graph::{Graph, GraphError, VertexSet};

/// Largest order the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarityError {
    #[error("graph of order {0} is beyond the brute-force limit of {BRUTE_FORCE_LIMIT}")]
    TooLarge(usize),
    #[error("graph is not a cograph: {0:?} induces P4")]
    NotCograph([usize; 4]),
    #[error("reconstructed partition failed validation for signature {0}")]
    WitnessRejected(Signature),
    #[error(transparent)]
    Cotree(#[from] CotreeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Exact part and component counts of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub s: usize,
    pub k: usize,
}

impl Signature {
    pub const fn new(s: usize, k: usize) -> Self {
        Self { s, k }
    }

    pub fn dominated_by(&self, other: &Signature) -> bool {
        self.s <= other.s && self.k <= other.k
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.k)
    }
}

/// A polarity parameter: a bound on parts or components, or no bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Finite(usize),
    Unbounded,
}

impl Param {
    /// The bound as a count for a graph of order `n`; no graph needs more than `n`.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Param::Finite(x) => x.min(n),
            Param::Unbounded => n,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Param::Finite(x) => Some(x),
            Param::Unbounded => None,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(x) => write!(f, "{x}"),
            Param::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected a non-negative integer or \"inf\", found {0:?}")]
pub struct ParamParseError(pub alloc::string::String);

impl FromStr for Param {
    type Err = ParamParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "INF" | "infinity" | "∞" => Ok(Param::Unbounded),
            t => t
                .parse()
                .map(Param::Finite)
                .map_err(|_| ParamParseError(t.into())),
        }
    }
}

/// Exact set of admitted signatures: bit `k` of `rows[s]` is set iff `(s, k)` is admitted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolarProfile {
    order: usize,
    rows: Vec<u128>,
}

fn upward(mask: u128) -> u128 {
    if mask == 0 {
        0
    } else {
        !0u128 << mask.trailing_zeros()
    }
}

fn row_bits(mut mask: u128) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(k)
        }
    })
}

/// `{a + b : a ∈ x, b ∈ y}` on bit sets.
fn sumset(x: u128, y: u128) -> u128 {
    row_bits(x).fold(0, |acc, i| acc | y << i)
}

/// Cluster counts of two joined parts: either side empty, or both single cliques.
fn join_clusters(x: u128, y: u128) -> u128 {
    let mut out = 0;
    if y & 1 != 0 {
        out |= x;
    }
    if x & 1 != 0 {
        out |= y;
    }
    if x & 2 != 0 && y & 2 != 0 {
        out |= 2;
    }
    out
}

impl PolarProfile {
    /// Profile of the order-zero graph: only the empty partition.
    pub fn empty() -> Self {
        Self {
            order: 0,
            rows: alloc::vec![1],
        }
    }

    /// Profile of `K1`: the vertex is one part or one clique.
    pub fn single() -> Self {
        Self {
            order: 1,
            rows: alloc::vec![1 << 1, 1 << 0],
        }
    }

    pub fn from_signatures<I>(order: usize, sigs: I) -> Self
    where
        I: IntoIterator<Item = Signature>,
    {
        let mut rows = alloc::vec![0u128; order + 1];
        for sig in sigs {
            assert!(sig.s <= order && sig.k <= order, "signature {sig} exceeds order {order}");
            rows[sig.s] |= 1 << sig.k;
        }
        Self { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, sig: Signature) -> bool {
        self.rows.get(sig.s).is_some_and(|r| sig.k <= self.order && r >> sig.k & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// All admitted signatures in lexicographic order.
    pub fn signatures(&self) -> impl Iterator<Item = Signature> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, &row)| row_bits(row).map(move |k| Signature { s, k }))
    }

    /// Signatures not dominated by any other admitted signature.
    pub fn minimal(&self) -> Vec<Signature> {
        let mut out = Vec::new();
        let mut best_k = usize::MAX;
        for (s, &row) in self.rows.iter().enumerate() {
            if row != 0 {
                let k = row.trailing_zeros() as usize;
                if k < best_k {
                    out.push(Signature { s, k });
                    best_k = k;
                }
            }
        }
        out
    }

    /// Every `(s, k)` with `s, k ≤ order` dominating an admitted signature.
    pub fn dominance_closure(&self) -> PolarProfile {
        let all = (1u128 << (self.order + 1)) - 1;
        let mut acc = 0u128;
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                acc |= upward(row);
                acc & all
            })
            .collect();
        PolarProfile {
            order: self.order,
            rows,
        }
    }

    /// An admitted signature within the bounds `(s, k)`, if the graph is `(s, k)`-polar.
    pub fn admits(&self, s: Param, k: Param) -> Option<Signature> {
        let (s_max, k_max) = (s.resolve(self.order), k.resolve(self.order));
        let within = (1u128 << (k_max + 1)) - 1;
        self.rows[..=s_max]
            .iter()
            .enumerate()
            .find(|(_, &row)| row & within != 0)
            .map(|(s, &row)| Signature {
                s,
                k: (row & within).trailing_zeros() as usize,
            })
    }

    pub fn is_polar(&self, s: Param, k: Param) -> bool {
        self.admits(s, k).is_some()
    }

    /// Profile of the disjoint union of two graphs.
    pub fn union(&self, other: &Self) -> Self {
        let order = self.order + other.order;
        let mut rows = alloc::vec![0u128; order + 1];
        let (p, q) = (&self.rows, &other.rows);
        rows[0] = sumset(p[0], q[0]);
        for (s, &row) in p.iter().enumerate().skip(1) {
            rows[s] |= sumset(row, q[0]);
        }
        for (s, &row) in q.iter().enumerate().skip(1) {
            rows[s] |= sumset(p[0], row);
        }
        // Two independent sets side by side stay one independent part.
        if p.len() > 1 && q.len() > 1 {
            rows[1] |= sumset(p[1], q[1]);
        }
        Self { order, rows }
    }

    /// Profile of the join of two graphs.
    pub fn join(&self, other: &Self) -> Self {
        let order = self.order + other.order;
        let mut rows = alloc::vec![0u128; order + 1];
        for (s1, &x) in self.rows.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (s2, &y) in other.rows.iter().enumerate().filter(|(_, &y)| y != 0) {
                rows[s1 + s2] |= join_clusters(x, y);
            }
        }
        Self { order, rows }
    }

    /// Profile of the complement: every signature transposed.
    pub fn transpose(&self) -> Self {
        Self::from_signatures(self.order, self.signatures().map(|x| Signature::new(x.k, x.s)))
    }
}

impl fmt::Debug for PolarProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolarProfile(n={}, ", self.order)?;
        f.debug_set().entries(self.signatures().map(|x| (x.s, x.k))).finish()?;
        write!(f, ")")
    }
}

/// Signature of a union or join of two parts with the given signatures.
pub fn combine(op: Op, a: Signature, b: Signature) -> Option<Signature> {
    match op {
        Op::Union => {
            let s = match (a.s, b.s) {
                (0, s) | (s, 0) => s,
                (1, 1) => 1,
                _ => return None,
            };
            Some(Signature::new(s, a.k + b.k))
        }
        Op::Join => {
            let k = match (a.k, b.k) {
                (0, k) | (k, 0) => k,
                (1, 1) => 1,
                _ => return None,
            };
            Some(Signature::new(a.s + b.s, k))
        }
    }
}

/// Profile computed by dynamic programming over the cotree.
pub fn profile_dp(t: &Cotree) -> Result<PolarProfile, PolarityError> {
    t.validate()?;
    Ok(dp(t))
}

fn dp(t: &Cotree) -> PolarProfile {
    match t {
        Cotree::Leaf(_) => PolarProfile::single(),
        Cotree::Node(_, ch) if ch.is_empty() => PolarProfile::empty(),
        Cotree::Node(op, ch) => {
            let mut it = ch.iter().map(dp);
            let first = it.next().unwrap();
            it.fold(first, |acc, p| match op {
                Op::Union => acc.union(&p),
                Op::Join => acc.join(&p),
            })
        }
    }
}

/// Profile by checking all `2^n` vertex bipartitions directly.
pub fn profile_bruteforce(g: &Graph) -> Result<PolarProfile, PolarityError> {
    let n = g.order();
    if n > BRUTE_FORCE_LIMIT {
        return Err(PolarityError::TooLarge(n));
    }
    let all = g.vertex_mask();
    let mut rows = alloc::vec![0u128; n + 1];
    for a in 0..=all {
        let (multipartite, s) = g.multipartite_in(a);
        if !multipartite {
            continue;
        }
        let (cluster, k) = g.cluster_in(all & !a);
        if cluster {
            rows[s] |= 1 << k;
        }
    }
    Ok(PolarProfile { order: n, rows })
}

/// An explicit partition claimed to have a given signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionWitness {
    pub a: VertexSet,
    pub b: VertexSet,
    pub signature: Signature,
}

/// Checks a witness directly against the graph, without any profile machinery.
pub fn validate_witness(g: &Graph, w: &PartitionWitness) -> bool {
    let n = g.order();
    if w.a.order() != n || w.b.order() != n {
        return false;
    }
    if w.a.bits() & w.b.bits() != 0 || (w.a.bits() | w.b.bits()) != g.vertex_mask() {
        return false;
    }
    let (Ok(ga), Ok(gb)) = (g.induced_subgraph(&w.a), g.induced_subgraph(&w.b)) else {
        return false;
    };
    let (multipartite, parts) = ga.is_complete_multipartite();
    let (cluster, comps) = gb.is_cluster();
    multipartite && cluster && parts == w.signature.s && comps == w.signature.k
}

/// Cotree annotated with the profiles of every subtree and of every prefix
/// of every child list, kept for witness reconstruction.
#[derive(Clone, Debug)]
pub struct PolarityAnalysis {
    root: Memo,
    order: usize,
}

#[derive(Clone, Debug)]
enum Memo {
    Leaf(usize, PolarProfile),
    Node {
        op: Op,
        children: Vec<Memo>,
        // prefix[j] = profile of children[0..=j]
        prefix: Vec<PolarProfile>,
        profile: PolarProfile,
    },
}

impl Memo {
    fn build(t: &Cotree) -> Memo {
        match t {
            Cotree::Leaf(v) => Memo::Leaf(*v, PolarProfile::single()),
            Cotree::Node(op, ch) => {
                let children: Vec<Memo> = ch.iter().map(Memo::build).collect();
                let mut prefix: Vec<PolarProfile> = Vec::with_capacity(children.len());
                for c in &children {
                    let next = match prefix.last() {
                        None => c.profile().clone(),
                        Some(acc) if *op == Op::Union => acc.union(c.profile()),
                        Some(acc) => acc.join(c.profile()),
                    };
                    prefix.push(next);
                }
                let profile = prefix.last().cloned().unwrap_or_else(PolarProfile::empty);
                Memo::Node {
                    op: *op,
                    children,
                    prefix,
                    profile,
                }
            }
        }
    }

    fn profile(&self) -> &PolarProfile {
        match self {
            Memo::Leaf(_, p) => p,
            Memo::Node { profile, .. } => profile,
        }
    }

    /// Vertex masks `(A, B)` realising `sig`, which must be admitted here.
    fn realise(&self, sig: Signature) -> Option<(u64, u64)> {
        match self {
            Memo::Leaf(v, _) => match (sig.s, sig.k) {
                (1, 0) => Some((1 << v, 0)),
                (0, 1) => Some((0, 1 << v)),
                _ => None,
            },
            Memo::Node { children, .. } if children.is_empty() => {
                (sig == Signature::new(0, 0)).then_some((0, 0))
            }
            Memo::Node {
                op,
                children,
                prefix,
                ..
            } => realise_prefix(*op, children, prefix, children.len() - 1, sig),
        }
    }
}

fn realise_prefix(
    op: Op,
    children: &[Memo],
    prefix: &[PolarProfile],
    j: usize,
    sig: Signature,
) -> Option<(u64, u64)> {
    if j == 0 {
        return children[0].realise(sig);
    }
    let last = &children[j];
    for x in prefix[j - 1].signatures() {
        for y in last.profile().signatures() {
            if combine(op, x, y) == Some(sig) {
                let (a1, b1) = realise_prefix(op, children, prefix, j - 1, x)?;
                let (a2, b2) = last.realise(y)?;
                return Some((a1 | a2, b1 | b2));
            }
        }
    }
    None
}

impl PolarityAnalysis {
    pub fn new(t: &Cotree) -> Result<Self, PolarityError> {
        t.validate()?;
        Ok(Self {
            root: Memo::build(t),
            order: t.order(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn profile(&self) -> &PolarProfile {
        self.root.profile()
    }

    /// A partition with exactly the signature `sig`, if one exists.
    pub fn witness(&self, sig: Signature) -> Option<PartitionWitness> {
        if !self.profile().contains(sig) {
            return None;
        }
        let (a, b) = self.root.realise(sig)?;
        Some(PartitionWitness {
            a: VertexSet::from_bits(self.order, a).ok()?,
            b: VertexSet::from_bits(self.order, b).ok()?,
            signature: sig,
        })
    }
}

/// Result of a polarity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub polar: bool,
    pub profile: PolarProfile,
    /// Present exactly when `polar`; always validated against the graph.
    pub witness: Option<PartitionWitness>,
}

/// Decides `(s, k)`-polarity of a cograph given by its cotree.
pub fn is_polar_cotree(t: &Cotree, s: Param, k: Param) -> Result<Verdict, PolarityError> {
    let g = t.realize()?;
    decide(&g, t, s, k)
}

/// Decides `(s, k)`-polarity of a graph, which must be a cograph.
pub fn is_polar(g: &Graph, s: Param, k: Param) -> Result<Verdict, PolarityError> {
    match crate::cotree::recognize(g) {
        Recognition::Cograph(t) => decide(g, &t, s, k),
        Recognition::NotCograph(cert) => Err(PolarityError::NotCograph(cert.path)),
    }
}

fn decide(g: &Graph, t: &Cotree, s: Param, k: Param) -> Result<Verdict, PolarityError> {
    let analysis = PolarityAnalysis::new(t)?;
    let profile = analysis.profile().clone();
    let Some(sig) = profile.admits(s, k) else {
        return Ok(Verdict {
            polar: false,
            profile,
            witness: None,
        });
    };
    let witness = analysis
        .witness(sig)
        .filter(|w| validate_witness(g, w))
        .ok_or(PolarityError::WitnessRejected(sig))?;
    Ok(Verdict {
        polar: true,
        profile,
        witness: Some(witness),
    })
}
