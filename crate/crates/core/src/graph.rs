//! Finite simple graphs on at most 64 vertices.
//!
//! Every vertex row is a single `u64`, so neighbourhood intersections and
//! component sweeps are word operations. Graphs are immutable once built.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Largest supported order; one machine word per adjacency row.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex set of order {set} used with a graph of order {graph}")]
    OrderMismatch { set: usize, graph: usize },
    #[error("malformed graph6 string: {0}")]
    Graph6(&'static str),
}

#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the positions of the set bits of `mask`, lowest first.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A subset of the vertices `0..order` of some host graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    order: usize,
    bits: u64,
}

impl VertexSet {
    pub fn empty(order: usize) -> Result<Self, GraphError> {
        if order > MAX_ORDER {
            return Err(GraphError::TooLarge(order));
        }
        Ok(Self { order, bits: 0 })
    }

    pub fn full(order: usize) -> Result<Self, GraphError> {
        if order > MAX_ORDER {
            return Err(GraphError::TooLarge(order));
        }
        Ok(Self {
            order,
            bits: low_mask(order),
        })
    }

    pub fn from_vertices<I>(order: usize, vertices: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(order)?;
        for v in vertices {
            set.insert(v)?;
        }
        Ok(set)
    }

    /// Builds a set from a raw bit mask; bits at or above `order` are rejected.
    pub fn from_bits(order: usize, bits: u64) -> Result<Self, GraphError> {
        if order > MAX_ORDER {
            return Err(GraphError::TooLarge(order));
        }
        if bits & !low_mask(order) != 0 {
            return Err(GraphError::VertexOutOfRange {
                vertex: 63 - bits.leading_zeros() as usize,
                order,
            });
        }
        Ok(Self { order, bits })
    }

    pub fn insert(&mut self, v: usize) -> Result<(), GraphError> {
        if v >= self.order {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.order,
            });
        }
        self.bits |= 1 << v;
        Ok(())
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.order && self.bits >> v & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Vertices of the host not in this set.
    pub fn complement(&self) -> Self {
        Self {
            order: self.order,
            bits: !self.bits & low_mask(self.order),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bits(self.bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite simple graph with vertices `0..order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Result<Self, GraphError> {
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge(n));
        }
        Ok(Self {
            rows: alloc::vec![0; n],
        })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::edgeless(n)?;
        let all = low_mask(n);
        for (v, row) in g.rows.iter_mut().enumerate() {
            *row = all & !(1 << v);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::edgeless(n)?;
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.rows[u] |= 1 << v;
            g.rows[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, checking symmetry and loops.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self, GraphError> {
        let n = rows.len();
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge(n));
        }
        for (v, &row) in rows.iter().enumerate() {
            if row >> v & 1 == 1 {
                return Err(GraphError::SelfLoop(v));
            }
            if row & !low_mask(n) != 0 {
                return Err(GraphError::VertexOutOfRange {
                    vertex: 63 - row.leading_zeros() as usize,
                    order: n,
                });
            }
            for u in bits(row) {
                if rows[u] >> v & 1 == 0 {
                    return Err(GraphError::Graph6("asymmetric adjacency"));
                }
            }
        }
        Ok(Self { rows })
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(Self::from_rows(rows.clone()).is_ok());
        Self { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// Bit mask of all vertices.
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.order())
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet {
            order: self.order(),
            bits: self.vertex_mask(),
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && v < self.order() && self.rows[u] >> v & 1 == 1
    }

    /// Neighbourhood of `v` as a bit mask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, &row)| bits(row & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.order != self.order() {
            return Err(GraphError::OrderMismatch {
                set: s.order,
                graph: self.order(),
            });
        }
        Ok(())
    }

    /// The subgraph induced by `s`, relabelled order-preservingly to `0..|s|`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Self, GraphError> {
        self.check_set(s)?;
        Ok(self.induced_by_mask(s.bits))
    }

    pub(crate) fn induced_by_mask(&self, mask: u64) -> Self {
        let keep: Vec<usize> = bits(mask).collect();
        let rows = keep
            .iter()
            .map(|&u| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &v)| self.rows[u] >> v & 1 == 1)
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Self { rows }
    }

    /// The graph with vertex `v` removed; later vertices shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Self {
        self.induced_by_mask(self.vertex_mask() & !(1 << v))
    }

    pub fn complement(&self) -> Self {
        let all = self.vertex_mask();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(v, &row)| !row & all & !(1 << v))
            .collect();
        Self { rows }
    }

    fn combine(&self, other: &Self, cross: bool) -> Result<Self, GraphError> {
        let (n, m) = (self.order(), other.order());
        if n + m > MAX_ORDER {
            return Err(GraphError::TooLarge(n + m));
        }
        let left = low_mask(n);
        let right = low_mask(m) << n;
        let mut rows = Vec::with_capacity(n + m);
        rows.extend(self.rows.iter().map(|&r| if cross { r | right } else { r }));
        rows.extend(
            other
                .rows
                .iter()
                .map(|&r| if cross { r << n | left } else { r << n }),
        );
        Ok(Self { rows })
    }

    /// `self + other`: this graph's vertices first, then `other`'s shifted.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, GraphError> {
        self.combine(other, false)
    }

    /// `self ⊕ other`: the disjoint union plus every cross edge.
    pub fn join(&self, other: &Self) -> Result<Self, GraphError> {
        self.combine(other, true)
    }

    /// Connected components, ordered by least vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let order = self.order();
        self.components_in(self.vertex_mask())
            .into_iter()
            .map(|bits| VertexSet { order, bits })
            .collect()
    }

    /// Components of the subgraph induced by `mask`, as masks ordered by least vertex.
    pub fn components_in(&self, mask: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut rest = mask;
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.rows[v] & mask & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// Components of the complement of the subgraph induced by `mask`.
    pub fn co_components_in(&self, mask: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut rest = mask;
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = !self.rows[v] & mask & !comp & !(1 << v);
                comp |= fresh;
                frontier |= fresh;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    /// Whether `mask` induces a complete graph.
    pub fn is_clique_in(&self, mask: u64) -> bool {
        bits(mask).all(|v| (self.rows[v] | 1 << v) & mask == mask)
    }

    /// Whether `mask` induces an edgeless graph.
    pub fn is_independent_in(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.rows[v] & mask == 0)
    }

    /// Cluster test on the subgraph induced by `mask`: every component complete.
    /// Returns the component count alongside the verdict.
    pub fn cluster_in(&self, mask: u64) -> (bool, usize) {
        let comps = self.components_in(mask);
        let ok = comps
            .iter()
            .all(|&c| bits(c).all(|v| (self.rows[v] | 1 << v) & c == c));
        (ok, comps.len())
    }

    /// Complete-multipartite test on the subgraph induced by `mask`: every
    /// co-component independent. Returns the part count alongside the verdict.
    pub fn multipartite_in(&self, mask: u64) -> (bool, usize) {
        let parts = self.co_components_in(mask);
        let ok = parts.iter().all(|&p| self.is_independent_in(p));
        (ok, parts.len())
    }

    /// Whether every component is complete, with the number of components.
    pub fn is_cluster(&self) -> (bool, usize) {
        self.cluster_in(self.vertex_mask())
    }

    /// Whether the complement is a cluster, with the number of parts.
    pub fn is_complete_multipartite(&self) -> (bool, usize) {
        self.multipartite_in(self.vertex_mask())
    }

    /// Searches for an induced copy of `pattern`, returning its vertex set.
    pub fn contains_induced(&self, pattern: &Graph) -> Option<VertexSet> {
        let m = pattern.order();
        if m > self.order() {
            return None;
        }
        // Map pattern vertices in order of decreasing degree: constrained ones first.
        let mut seq: Vec<usize> = (0..m).collect();
        seq.sort_by_key(|&u| core::cmp::Reverse(pattern.degree(u)));
        let mut image = alloc::vec![usize::MAX; m];
        if self.extend_embedding(pattern, &seq, 0, &mut image, 0) {
            let bits = image.iter().fold(0u64, |acc, &v| acc | 1 << v);
            Some(VertexSet {
                order: self.order(),
                bits,
            })
        } else {
            None
        }
    }

    fn extend_embedding(
        &self,
        pattern: &Graph,
        seq: &[usize],
        depth: usize,
        image: &mut [usize],
        used: u64,
    ) -> bool {
        if depth == seq.len() {
            return true;
        }
        let u = seq[depth];
        let need = pattern.degree(u);
        let mut candidates = self.vertex_mask() & !used;
        for &w in &seq[..depth] {
            let gw = self.rows[image[w]];
            candidates &= if pattern.has_edge(u, w) { gw } else { !gw };
        }
        for v in bits(candidates) {
            if self.degree(v) < need {
                continue;
            }
            image[u] = v;
            if self.extend_embedding(pattern, seq, depth + 1, image, used | 1 << v) {
                return true;
            }
        }
        image[u] = usize::MAX;
        false
    }

    /// Header-less graph6 encoding.
    pub fn to_graph6(&self) -> String {
        let n = self.order();
        let mut out = String::new();
        if n <= 62 {
            out.push((n as u8 + 63) as char);
        } else {
            out.push('~');
            for shift in [12, 6, 0] {
                out.push(((n >> shift & 0x3f) as u8 + 63) as char);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = acc << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(((acc << (6 - filled)) + 63) as char);
        }
        out
    }

    /// Decodes graph6, tolerating an optional `>>graph6<<` header and trailing whitespace.
    pub fn from_graph6(text: &str) -> Result<Self, GraphError> {
        let text = text.trim_end();
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let bytes = text.as_bytes();
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(GraphError::Graph6("byte outside the printable range 63..=126"));
        }
        let (n, body) = match bytes {
            [] => return Err(GraphError::Graph6("empty input")),
            [126, 126, ..] => return Err(GraphError::Graph6("order too large")),
            [126, rest @ ..] => {
                if rest.len() < 3 {
                    return Err(GraphError::Graph6("truncated order field"));
                }
                let n = rest[..3]
                    .iter()
                    .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
                (n, &rest[3..])
            }
            [first, rest @ ..] => ((first - 63) as usize, rest),
        };
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge(n));
        }
        let pairs = n * n.saturating_sub(1) / 2;
        if body.len() != pairs.div_ceil(6) {
            return Err(GraphError::Graph6("body length does not match order"));
        }
        let mut rows = alloc::vec![0u64; n];
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[idx / 6] - 63;
                if byte >> (5 - idx % 6) & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
                idx += 1;
            }
        }
        if pairs % 6 != 0 {
            let last = body[body.len() - 1] - 63;
            if last & low_mask(6 - pairs % 6) as u8 != 0 {
                return Err(GraphError::Graph6("nonzero padding bits"));
            }
        }
        Ok(Self { rows })
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str("graph ");
        out.push_str(if name.is_empty() { "G" } else { name });
        out.push_str(" {\n");
        for v in 0..self.order() {
            out.push_str(&alloc::format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&alloc::format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} ", self.order())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    fn e(n: usize) -> Graph {
        Graph::edgeless(n).unwrap()
    }

    fn p(n: usize) -> Graph {
        Graph::path(n).unwrap()
    }

    fn c(n: usize) -> Graph {
        Graph::cycle(n).unwrap()
    }

    fn union(a: &Graph, b: &Graph) -> Graph {
        a.disjoint_union(b).unwrap()
    }

    fn join(a: &Graph, b: &Graph) -> Graph {
        a.join(b).unwrap()
    }

    #[test]
    fn induced_subgraph_examples() {
        let p4 = p(4);
        let mid = VertexSet::from_vertices(4, [1, 2]).unwrap();
        assert_eq!(p4.induced_subgraph(&mid).unwrap(), k(2));
        assert_eq!(p4.induced_subgraph(&p4.vertices()).unwrap(), p4);
        let c4 = c(4);
        let three = VertexSet::from_vertices(4, [0, 1, 2]).unwrap();
        assert_eq!(c4.induced_subgraph(&three).unwrap(), p(3));
        assert_eq!(
            c4.induced_subgraph(&VertexSet::empty(4).unwrap()).unwrap(),
            e(0)
        );
        assert!(c4.induced_subgraph(&VertexSet::empty(3).unwrap()).is_err());
    }

    #[test]
    fn complement_examples() {
        let two_k2 = union(&k(2), &k(2));
        let comp = two_k2.complement();
        assert_eq!(comp.edge_count(), 4);
        assert!(comp.components().len() == 1 && (0..4).all(|v| comp.degree(v) == 2));
        assert_eq!(k(3).complement(), e(3));
    }

    #[test]
    fn union_and_join_layout() {
        assert_eq!(union(&k(1), &k(1)), e(2));
        assert_eq!(join(&k(1), &k(1)), k(2));
        let g = union(&p(3), &c(4));
        assert_eq!(union(&g, &e(0)), g);
        let h = join(&k(1), &c(4));
        assert_eq!(h.order(), 5);
        assert_eq!(h.degree(0), 4);
        assert!((1..5).all(|v| h.degree(v) == 3));
        // vertex layout: left operand first
        let pk = union(&p(3), &k(2));
        assert!(pk.has_edge(3, 4) && pk.has_edge(0, 1) && !pk.has_edge(2, 3));
        assert!(e(40).disjoint_union(&e(30)).is_err());
    }

    #[test]
    fn components_examples() {
        let g = union(&p(3), &union(&k(2), &k(2)));
        let sizes: Vec<usize> = g.components().iter().map(VertexSet::len).collect();
        assert_eq!(sizes, vec![3, 2, 2]);
        let k33 = join(&e(3), &e(3));
        assert_eq!(k33.components().len(), 1);
        assert_eq!(e(5).components().len(), 5);
        assert!(e(0).components().is_empty());
    }

    #[test]
    fn class_predicates() {
        let three_k2 = union(&k(2), &union(&k(2), &k(2)));
        assert_eq!(three_k2.is_cluster(), (true, 3));
        assert_eq!(p(3).is_cluster(), (false, 1));
        let remark = union(&k(1), &union(&three_k2, &e(0)));
        assert_eq!(remark.is_cluster(), (true, 4));
        assert_eq!(c(4).is_complete_multipartite(), (true, 2));
        assert_eq!(e(6).is_complete_multipartite(), (true, 1));
        assert_eq!(join(&k(1), &c(4)).is_complete_multipartite(), (true, 3));
        assert!(p(3).is_complete_multipartite().0);
        assert!(!union(&k(1), &k(2)).is_complete_multipartite().0);
    }

    #[test]
    fn contains_induced_examples() {
        assert!(p(4).contains_induced(&p(3)).is_some());
        let hit = c(4).contains_induced(&p(3)).unwrap();
        assert_eq!(c(4).induced_subgraph(&hit).unwrap().edge_count(), 2);
        assert!(c(4).contains_induced(&k(3)).is_none());
        let g = join(&k(1), &union(&k(2), &p(3)));
        assert!(g.contains_induced(&union(&k(2), &k(2))).is_some());
        assert!(g.contains_induced(&c(4)).is_none());
        assert!(p(3).contains_induced(&p(4)).is_none());
    }

    #[test]
    fn clique_and_independent_masks() {
        let g = union(&k(3), &p(3));
        assert!(g.is_clique_in(0b000111));
        assert!(!g.is_clique_in(0b111000));
        assert!(g.is_independent_in(0b101001));
        assert!(g.is_clique_in(0));
    }

    #[test]
    fn graph6_known_strings() {
        // Reference encodings from the graph6 format description.
        assert_eq!(e(0).to_graph6(), "?");
        assert_eq!(k(1).to_graph6(), "@");
        assert_eq!(k(2).to_graph6(), "A_");
        assert_eq!(k(4).to_graph6(), "C~");
        let five = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(five.to_graph6(), "DQc");
        assert_eq!(Graph::from_graph6("DQc").unwrap(), five);
        assert_eq!(Graph::from_graph6(">>graph6<<C~\n").unwrap(), k(4));
        let big = c(63);
        let s = big.to_graph6();
        assert!(s.starts_with("~??~"));
        assert_eq!(Graph::from_graph6(&s).unwrap(), big);
        assert!(Graph::from_graph6("D").is_err());
        assert!(Graph::from_graph6("A`").is_err());
    }

    #[test]
    fn dot_output() {
        let dot = p(3).to_dot("P3");
        assert!(dot.starts_with("graph P3 {\n"));
        assert!(dot.contains("  0 -- 1;\n") && dot.contains("  1 -- 2;\n"));
    }
}
