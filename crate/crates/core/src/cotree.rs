//! Cotrees: recognition of cographs, realization, and canonical codes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::graph::{bits, Graph, GraphError, MAX_ORDER};

/// Label of an internal cotree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// Disjoint union (label 0).
    Union,
    /// Join (label 1).
    Join,
}

impl Op {
    pub fn flip(self) -> Self {
        match self {
            Op::Union => Op::Join,
            Op::Join => Op::Union,
        }
    }

    fn tag(self) -> u8 {
        match self {
            Op::Union => TAG_UNION,
            Op::Join => TAG_JOIN,
        }
    }
}

const TAG_LEAF: u8 = 0;
const TAG_UNION: u8 = 1;
const TAG_JOIN: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CotreeError {
    #[error("internal node with {0} children (at least two required)")]
    Arity(usize),
    #[error("child carries the same label as its parent")]
    NotAlternating,
    #[error("leaf labels are not a permutation of 0..{0}")]
    LeafLabels(usize),
    #[error("malformed canonical code")]
    BadCode,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A rooted tree whose leaves are graph vertices and whose internal nodes
/// are unions or joins of their children.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Cotree {
    Leaf(usize),
    Node(Op, Vec<Cotree>),
}

/// Four vertices `a-b-c-d` inducing a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P4Certificate {
    pub path: [usize; 4],
}

impl P4Certificate {
    /// Checks that consecutive vertices are adjacent and no other pair is.
    pub fn validate(&self, g: &Graph) -> bool {
        let p = self.path;
        if p.iter().any(|&v| v >= g.order()) {
            return false;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] == p[j] || g.has_edge(p[i], p[j]) != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of cograph recognition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Cograph(Cotree),
    NotCograph(P4Certificate),
}

impl Recognition {
    pub fn cotree(self) -> Option<Cotree> {
        match self {
            Recognition::Cograph(t) => Some(t),
            Recognition::NotCograph(_) => None,
        }
    }
}

/// Builds the cotree of `g`, or returns an induced `P4`.
///
/// Splits on components when `g` is disconnected and on co-components when
/// its complement is; when neither splits a set of two or more vertices, that
/// set induces a `P4`.
pub fn recognize(g: &Graph) -> Recognition {
    if g.order() == 0 {
        return Recognition::Cograph(Cotree::empty());
    }
    match split(g, g.vertex_mask()) {
        Ok(t) => Recognition::Cograph(t),
        Err(cert) => {
            debug_assert!(cert.validate(g));
            Recognition::NotCograph(cert)
        }
    }
}

fn split(g: &Graph, mask: u64) -> Result<Cotree, P4Certificate> {
    if mask.count_ones() == 1 {
        return Ok(Cotree::Leaf(mask.trailing_zeros() as usize));
    }
    let comps = g.components_in(mask);
    if comps.len() > 1 {
        let children = comps.into_iter().map(|c| split(g, c)).collect::<Result<_, _>>()?;
        return Ok(Cotree::Node(Op::Union, children));
    }
    let cocomps = g.co_components_in(mask);
    if cocomps.len() > 1 {
        let children = cocomps.into_iter().map(|c| split(g, c)).collect::<Result<_, _>>()?;
        return Ok(Cotree::Node(Op::Join, children));
    }
    Err(find_p4(g, mask).expect("a prime set of two or more vertices induces a P4"))
}

/// Every induced `a-b-c-d` contains the induced `P3` `a-b-c` extended at one
/// end, so scanning all `P3`s and both extensions is exhaustive.
fn find_p4(g: &Graph, mask: u64) -> Option<P4Certificate> {
    for b in bits(mask) {
        let nb = g.neighbors(b) & mask;
        for a in bits(nb) {
            let na = g.neighbors(a);
            for c in bits(nb & !na & !((1u64 << (a + 1)) - 1)) {
                let nc = g.neighbors(c);
                let outside = mask & !(1 << a | 1 << b | 1 << c) & !g.neighbors(b);
                let tail = outside & nc & !na;
                if tail != 0 {
                    let d = tail.trailing_zeros() as usize;
                    return Some(P4Certificate { path: [a, b, c, d] });
                }
                let head = outside & na & !nc;
                if head != 0 {
                    let d = head.trailing_zeros() as usize;
                    return Some(P4Certificate { path: [d, a, b, c] });
                }
            }
        }
    }
    None
}

impl Cotree {
    /// The cotree of the order-zero graph: a union root without children.
    pub fn empty() -> Cotree {
        Cotree::Node(Op::Union, Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Cotree::Node(_, ch) if ch.is_empty())
    }

    /// Builds a node, splicing same-labelled children and collapsing unary nodes.
    pub fn node(op: Op, children: Vec<Cotree>) -> Cotree {
        let mut flat = Vec::with_capacity(children.len());
        for child in children {
            match child {
                Cotree::Node(o, grand) if o == op => flat.extend(grand),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Cotree::Node(op, flat)
        }
    }

    pub fn union(children: Vec<Cotree>) -> Cotree {
        Cotree::node(Op::Union, children)
    }

    pub fn join(children: Vec<Cotree>) -> Cotree {
        Cotree::node(Op::Join, children)
    }

    /// Number of leaves, i.e. the order of the realized graph.
    pub fn order(&self) -> usize {
        match self {
            Cotree::Leaf(_) => 1,
            Cotree::Node(_, ch) => ch.iter().map(Cotree::order).sum(),
        }
    }

    pub fn op(&self) -> Option<Op> {
        match self {
            Cotree::Leaf(_) => None,
            Cotree::Node(op, _) => Some(*op),
        }
    }

    pub fn children(&self) -> &[Cotree] {
        match self {
            Cotree::Leaf(_) => &[],
            Cotree::Node(_, ch) => ch,
        }
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Cotree::Leaf(v) => out.push(*v),
            Cotree::Node(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Checks arity, alternation, and that leaves are labelled `0..order`.
    pub fn validate(&self) -> Result<(), CotreeError> {
        if *self == Cotree::empty() {
            return Ok(());
        }
        self.check_shape(None)?;
        let mut leaves = self.leaves();
        let n = leaves.len();
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge(n).into());
        }
        leaves.sort_unstable();
        if leaves.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(CotreeError::LeafLabels(n));
        }
        Ok(())
    }

    fn check_shape(&self, parent: Option<Op>) -> Result<(), CotreeError> {
        if let Cotree::Node(op, ch) = self {
            if ch.len() < 2 {
                return Err(CotreeError::Arity(ch.len()));
            }
            if parent == Some(*op) {
                return Err(CotreeError::NotAlternating);
            }
            for c in ch {
                c.check_shape(Some(*op))?;
            }
        }
        Ok(())
    }

    /// Normalized copy: same-label chains spliced, unary nodes removed.
    /// Fails on internal nodes without children.
    pub fn normalize(&self) -> Result<Cotree, CotreeError> {
        match self {
            Cotree::Leaf(v) => Ok(Cotree::Leaf(*v)),
            t if *t == Cotree::empty() => Ok(Cotree::empty()),
            Cotree::Node(_, ch) if ch.is_empty() => Err(CotreeError::Arity(0)),
            Cotree::Node(op, ch) => {
                let children = ch.iter().map(Cotree::normalize).collect::<Result<_, _>>()?;
                Ok(Cotree::node(*op, children))
            }
        }
    }

    /// The labelled graph: leaves adjacent iff their lowest common ancestor is a join.
    pub fn realize(&self) -> Result<Graph, CotreeError> {
        self.validate()?;
        let mut rows = alloc::vec![0u64; self.order()];
        self.fill_rows(&mut rows);
        Ok(Graph::from_rows_unchecked(rows))
    }

    /// Fills adjacency rows and returns the leaf mask of this subtree.
    fn fill_rows(&self, rows: &mut [u64]) -> u64 {
        match self {
            Cotree::Leaf(v) => 1 << v,
            Cotree::Node(op, ch) => {
                let masks: Vec<u64> = ch.iter().map(|c| c.fill_rows(rows)).collect();
                let all = masks.iter().fold(0, |a, m| a | m);
                if *op == Op::Join {
                    for &m in &masks {
                        for v in bits(m) {
                            rows[v] |= all & !m;
                        }
                    }
                }
                all
            }
        }
    }

    /// Swaps every label; realizes the complement.
    pub fn flip(&self) -> Cotree {
        match self {
            Cotree::Leaf(v) => Cotree::Leaf(*v),
            Cotree::Node(op, ch) => Cotree::Node(op.flip(), ch.iter().map(Cotree::flip).collect()),
        }
    }

    /// Removes leaf `v`, shifting larger labels down so the result matches
    /// `Graph::delete_vertex`. Returns `None` when `v` was the only leaf.
    pub fn without_vertex(&self, v: usize) -> Option<Cotree> {
        match self {
            Cotree::Leaf(x) if *x == v => None,
            Cotree::Leaf(x) => Some(Cotree::Leaf(if *x > v { x - 1 } else { *x })),
            Cotree::Node(op, ch) => {
                let kept: Vec<_> = ch.iter().filter_map(|c| c.without_vertex(v)).collect();
                match kept.len() {
                    0 => None,
                    _ => Some(Cotree::node(*op, kept)),
                }
            }
        }
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        let mut bytes = Vec::new();
        bytes.push(match self {
            Cotree::Leaf(_) => TAG_LEAF,
            Cotree::Node(op, _) => op.tag(),
        });
        bytes.extend(self.shape());
        CanonicalCode(bytes)
    }

    /// Label-free serialization: `[leaves, arity, children...]` with children sorted.
    fn shape(&self) -> Vec<u8> {
        match self {
            Cotree::Leaf(_) => alloc::vec![1, 0],
            Cotree::Node(_, ch) => {
                let mut parts: Vec<Vec<u8>> = ch.iter().map(Cotree::shape).collect();
                parts.sort_unstable();
                let leaves: usize = parts.iter().map(|p| p[0] as usize).sum();
                let mut out = Vec::with_capacity(2 + parts.iter().map(Vec::len).sum::<usize>());
                out.push(leaves as u8);
                out.push(parts.len() as u8);
                parts.iter().for_each(|p| out.extend_from_slice(p));
                out
            }
        }
    }

    /// Nested `U(...)` / `J(...)` text with vertex ids at the leaves.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Cotree::Leaf(v) => out.push_str(&alloc::format!("{v}")),
            Cotree::Node(op, ch) => {
                out.push(if *op == Op::Union { 'U' } else { 'J' });
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.render_into(out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Debug for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Isomorphism-invariant key of a cotree: a root tag byte followed by a
/// length-prefixed preorder serialization with sorted children.
///
/// Labels alternate, so only the root tag is stored; flipping a cotree changes
/// the first byte and nothing else. Byte order sorts by order first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub(crate) fn from_parts(root: Option<Op>, shape: &[u8]) -> Self {
        let mut bytes = Vec::with_capacity(shape.len() + 1);
        bytes.push(root.map_or(TAG_LEAF, Op::tag));
        bytes.extend_from_slice(shape);
        CanonicalCode(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Order of the represented cograph.
    pub fn order(&self) -> usize {
        self.0.get(1).copied().unwrap_or(0) as usize
    }

    /// Code of the complement.
    pub fn flipped(&self) -> CanonicalCode {
        let mut bytes = self.0.clone();
        bytes[0] = match bytes[0] {
            TAG_UNION => TAG_JOIN,
            TAG_JOIN => TAG_UNION,
            t => t,
        };
        CanonicalCode(bytes)
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| alloc::format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str) -> Result<Self, CotreeError> {
        if !hex.len().is_multiple_of(2) || !hex.is_ascii() {
            return Err(CotreeError::BadCode);
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| CotreeError::BadCode))
            .collect::<Result<Vec<_>, _>>()?;
        let code = CanonicalCode(bytes);
        code.to_cotree()?;
        Ok(code)
    }

    /// Decodes into a normalized cotree with leaves numbered in preorder.
    pub fn to_cotree(&self) -> Result<Cotree, CotreeError> {
        let (&tag, shape) = self.0.split_first().ok_or(CotreeError::BadCode)?;
        let root = match tag {
            TAG_LEAF => None,
            TAG_UNION => Some(Op::Union),
            TAG_JOIN => Some(Op::Join),
            _ => return Err(CotreeError::BadCode),
        };
        if tag == TAG_UNION && shape == [0, 0] {
            return Ok(Cotree::empty());
        }
        let mut pos = 0;
        let mut next_leaf = 0;
        let tree = decode_shape(shape, &mut pos, root, &mut next_leaf)?;
        if pos != shape.len() || (root.is_none() != matches!(tree, Cotree::Leaf(_))) {
            return Err(CotreeError::BadCode);
        }
        Ok(tree)
    }
}

fn decode_shape(
    shape: &[u8],
    pos: &mut usize,
    op: Option<Op>,
    next_leaf: &mut usize,
) -> Result<Cotree, CotreeError> {
    let leaves = *shape.get(*pos).ok_or(CotreeError::BadCode)? as usize;
    let arity = *shape.get(*pos + 1).ok_or(CotreeError::BadCode)? as usize;
    *pos += 2;
    if arity == 0 {
        if leaves != 1 {
            return Err(CotreeError::BadCode);
        }
        let v = *next_leaf;
        *next_leaf += 1;
        return Ok(Cotree::Leaf(v));
    }
    let op = op.ok_or(CotreeError::BadCode)?;
    if arity < 2 {
        return Err(CotreeError::BadCode);
    }
    let children = (0..arity)
        .map(|_| decode_shape(shape, pos, Some(op.flip()), next_leaf))
        .collect::<Result<Vec<_>, _>>()?;
    if children.iter().map(Cotree::order).sum::<usize>() != leaves {
        return Err(CotreeError::BadCode);
    }
    Ok(Cotree::Node(op, children))
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Canonical code of a cograph, or `None` for graphs containing an induced `P4`.
pub fn cograph_code(g: &Graph) -> Option<CanonicalCode> {
    recognize(g).cotree().map(|t| t.canonical_code())
}

/// Graph isomorphism: canonical codes for cographs, backtracking otherwise.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return false;
    }
    match (recognize(g), recognize(h)) {
        (Recognition::Cograph(a), Recognition::Cograph(b)) => {
            a.canonical_code() == b.canonical_code()
        }
        (Recognition::NotCograph(_), Recognition::NotCograph(_)) => {
            // Same order and size: an induced copy is an isomorphism.
            g.contains_induced(h).is_some()
        }
        _ => false,
    }
}
