//! Enumeration of unlabeled cographs and mining of minimal `(s, k)`-polar
//! obstructions.
//!
//! Cographs are generated as canonical codes. A disconnected class of order
//! `n` is a multiset of at least two connected classes whose orders sum to
//! `n`; a connected class of order at least two is the complement of a
//! disconnected one, which on codes only changes the root tag. Multisets are
//! drawn in nondecreasing shape order, so each class is produced once and
//! its code is already sorted.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cotree::{CanonicalCode, Cotree, Op};
use crate::expr::CographExpr;
use crate::graph::Graph;
use crate::polarity::{
    profile_dp, validate_witness, Param, PolarityAnalysis, PolarityError,
};

/// Largest order the enumerator produces.
pub const MAX_ENUMERATION_ORDER: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("order bound {requested} exceeds the supported maximum of {MAX_ENUMERATION_ORDER}")]
    Bound { requested: usize },
    #[error(transparent)]
    Polarity(#[from] PolarityError),
}

/// Generator of one canonical code per isomorphism class of cographs.
///
/// Shapes of connected classes are kept for every order produced so far;
/// larger orders are composed from them on demand.
#[derive(Clone, Debug)]
pub struct Enumerator {
    n_max: usize,
    // disconnected[m]: sorted shapes of the disconnected classes of order m
    disconnected: Vec<Vec<Box<[u8]>>>,
}

const LEAF_SHAPE: [u8; 2] = [1, 0];

impl Enumerator {
    pub fn new(n_max: usize) -> Result<Self, ObstructionError> {
        if n_max > MAX_ENUMERATION_ORDER {
            return Err(ObstructionError::Bound { requested: n_max });
        }
        Ok(Self {
            n_max,
            disconnected: alloc::vec![Vec::new(), Vec::new()],
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn connected(&self, m: usize) -> &[Box<[u8]>] {
        &self.disconnected[m]
    }

    fn connected_len(&self, m: usize) -> usize {
        if m == 1 {
            1
        } else {
            self.disconnected[m].len()
        }
    }

    fn connected_shape(&self, m: usize, idx: usize) -> &[u8] {
        if m == 1 {
            &LEAF_SHAPE
        } else {
            &self.connected(m)[idx]
        }
    }

    fn ensure(&mut self, n: usize) {
        while self.disconnected.len() <= n {
            let m = self.disconnected.len();
            let mut out = Vec::new();
            let mut stack = Vec::new();
            self.compose(m, m, 1, 0, &mut stack, &mut out);
            out.sort_unstable();
            self.disconnected.push(out);
        }
    }

    /// Extends `stack` by connected classes `(order, index)` no smaller than
    /// `(min_order, min_idx)` until their orders sum to `total`.
    fn compose(
        &self,
        total: usize,
        rem: usize,
        min_order: usize,
        min_idx: usize,
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<Box<[u8]>>,
    ) {
        for m in min_order..=rem {
            // A single part of the full order is connected, not a union.
            if m == total {
                break;
            }
            let start = if m == min_order { min_idx } else { 0 };
            for idx in start..self.connected_len(m) {
                stack.push((m, idx));
                if m == rem {
                    out.push(self.assemble(total, stack));
                } else if rem - m >= m {
                    self.compose(total, rem - m, m, idx, stack, out);
                }
                stack.pop();
            }
        }
    }

    fn assemble(&self, total: usize, parts: &[(usize, usize)]) -> Box<[u8]> {
        let mut shape = Vec::with_capacity(2 + 4 * total);
        shape.push(total as u8);
        shape.push(parts.len() as u8);
        for &(m, idx) in parts {
            shape.extend_from_slice(self.connected_shape(m, idx));
        }
        shape.into_boxed_slice()
    }

    /// Codes of all cographs of order `n`, in code order.
    pub fn codes_of_order(&mut self, n: usize) -> Result<Vec<CanonicalCode>, ObstructionError> {
        if n > self.n_max {
            return Err(ObstructionError::Bound { requested: n });
        }
        Ok(match n {
            0 => alloc::vec![Cotree::empty().canonical_code()],
            1 => alloc::vec![CanonicalCode::from_parts(None, &LEAF_SHAPE)],
            _ => {
                self.ensure(n);
                let shapes = &self.disconnected[n];
                let union = shapes.iter().map(|s| CanonicalCode::from_parts(Some(Op::Union), s));
                let join = shapes.iter().map(|s| CanonicalCode::from_parts(Some(Op::Join), s));
                union.chain(join).collect()
            }
        })
    }

    /// Number of cographs of order `n`.
    pub fn count(&mut self, n: usize) -> Result<usize, ObstructionError> {
        if n > self.n_max {
            return Err(ObstructionError::Bound { requested: n });
        }
        Ok(match n {
            0 | 1 => 1,
            _ => {
                self.ensure(n);
                2 * self.disconnected[n].len()
            }
        })
    }
}

/// Normalized cotrees of every order `1..=N`, one per isomorphism class,
/// ordered by `(order, code)`.
pub struct CographStream {
    enumerator: Enumerator,
    next_order: usize,
    pending: alloc::vec::IntoIter<CanonicalCode>,
}

impl Iterator for CographStream {
    type Item = Cotree;

    fn next(&mut self) -> Option<Cotree> {
        loop {
            if let Some(code) = self.pending.next() {
                return Some(code.to_cotree().expect("enumerated codes decode"));
            }
            if self.next_order > self.enumerator.n_max() {
                return None;
            }
            let n = self.next_order;
            self.next_order += 1;
            self.pending = self.enumerator.codes_of_order(n).ok()?.into_iter();
        }
    }
}

pub fn enumerate_cographs(n_max: usize) -> Result<CographStream, ObstructionError> {
    Ok(CographStream {
        enumerator: Enumerator::new(n_max)?,
        next_order: 1,
        pending: Vec::new().into_iter(),
    })
}

/// Component count and number of isolated vertices.
pub fn classify_type(g: &Graph) -> (usize, usize) {
    let comps = g.components();
    let trivial = comps.iter().filter(|c| c.len() == 1).count();
    (comps.len(), trivial)
}

/// True iff the cograph is not `(s, k)`-polar but every single-vertex
/// deletion is. Polarity is hereditary, so checking single deletions covers
/// every proper induced subgraph.
pub fn is_minimal_obstruction(t: &Cotree, s: Param, k: Param) -> Result<bool, PolarityError> {
    if profile_dp(t)?.is_polar(s, k) {
        return Ok(false);
    }
    for v in 0..t.order() {
        let sub = t.without_vertex(v).unwrap_or_else(Cotree::empty);
        if !profile_dp(&sub)?.is_polar(s, k) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Mined,
    Catalog,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Mined => "mined",
            Provenance::Catalog => "catalog",
        })
    }
}

/// A minimal obstruction together with its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionRecord {
    pub code: CanonicalCode,
    pub order: usize,
    pub expression: String,
    pub s: Param,
    pub k: Param,
    pub components: usize,
    pub trivial: usize,
    pub provenance: Provenance,
    pub graph6: String,
}

impl ObstructionRecord {
    pub fn new(t: &Cotree, s: Param, k: Param, provenance: Provenance) -> Result<Self, PolarityError> {
        let g = t.realize()?;
        let (components, trivial) = classify_type(&g);
        Ok(Self {
            code: t.canonical_code(),
            order: g.order(),
            expression: CographExpr::describe(t).to_string(),
            s,
            k,
            components,
            trivial,
            provenance,
            graph6: g.to_graph6(),
        })
    }

    /// The `(c, i)` type.
    pub fn kind(&self) -> (usize, usize) {
        (self.components, self.trivial)
    }

    pub fn cotree(&self) -> Cotree {
        self.code.to_cotree().expect("record codes decode")
    }

    pub fn graph(&self) -> Graph {
        self.cotree().realize().expect("record cotrees realize")
    }
}

/// Outcome of examining one cograph class.
#[derive(Clone, Debug, Default)]
pub struct Examined {
    pub record: Option<ObstructionRecord>,
    /// Polar verdicts reached, each with a validated witness when validation is on.
    pub polar_verdicts: usize,
    pub witnesses_validated: usize,
}

/// Decides whether the class with this code is a minimal obstruction.
///
/// With `validate` set, every polar verdict reached along the way is backed
/// by a reconstructed partition checked against the graph itself.
pub fn examine(
    code: &CanonicalCode,
    s: Param,
    k: Param,
    validate: bool,
) -> Result<Examined, PolarityError> {
    let t = code.to_cotree()?;
    let mut out = Examined::default();
    let g = if validate { Some(t.realize()?) } else { None };
    if polar_checked(&t, g.as_ref(), s, k, &mut out)? {
        return Ok(out);
    }
    for v in 0..t.order() {
        let sub = t.without_vertex(v).unwrap_or_else(Cotree::empty);
        let gv = g.as_ref().map(|g| g.delete_vertex(v));
        if !polar_checked(&sub, gv.as_ref(), s, k, &mut out)? {
            return Ok(out);
        }
    }
    out.record = Some(ObstructionRecord::new(&t, s, k, Provenance::Mined)?);
    Ok(out)
}

fn polar_checked(
    t: &Cotree,
    g: Option<&Graph>,
    s: Param,
    k: Param,
    out: &mut Examined,
) -> Result<bool, PolarityError> {
    let Some(g) = g else {
        let polar = profile_dp(t)?.is_polar(s, k);
        out.polar_verdicts += polar as usize;
        return Ok(polar);
    };
    let analysis = PolarityAnalysis::new(t)?;
    let Some(sig) = analysis.profile().admits(s, k) else {
        return Ok(false);
    };
    out.polar_verdicts += 1;
    match analysis.witness(sig) {
        Some(w) if validate_witness(g, &w) => {
            out.witnesses_validated += 1;
            Ok(true)
        }
        _ => Err(PolarityError::WitnessRejected(sig)),
    }
}

/// Totals over a mining run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MiningStats {
    pub classes: usize,
    pub polar_verdicts: usize,
    pub witnesses_validated: usize,
}

impl MiningStats {
    pub fn absorb(&mut self, e: &Examined) {
        self.classes += 1;
        self.polar_verdicts += e.polar_verdicts;
        self.witnesses_validated += e.witnesses_validated;
    }

    pub fn merge(&mut self, other: &MiningStats) {
        self.classes += other.classes;
        self.polar_verdicts += other.polar_verdicts;
        self.witnesses_validated += other.witnesses_validated;
    }
}

/// Records of one mining run, sorted by `(order, code)`.
#[derive(Clone, Debug)]
pub struct MiningReport {
    pub s: Param,
    pub k: Param,
    pub bound: usize,
    pub records: Vec<ObstructionRecord>,
    pub stats: MiningStats,
}

impl MiningReport {
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| (a.order, &a.code).cmp(&(b.order, &b.code)));
    }

    /// The same report restricted to a smaller bound.
    pub fn truncated(&self, bound: usize) -> MiningReport {
        MiningReport {
            s: self.s,
            k: self.k,
            bound,
            records: self.records.iter().filter(|r| r.order <= bound).cloned().collect(),
            stats: self.stats,
        }
    }
}

/// Strategy for running a mining job; the CLI supplies a parallel one.
pub trait Miner {
    fn mine(&self, s: Param, k: Param, n_max: usize) -> Result<MiningReport, ObstructionError>;
}

/// Single-threaded miner.
#[derive(Clone, Copy, Debug, Default)]
pub struct SerialMiner {
    pub validate_witnesses: bool,
}

impl Miner for SerialMiner {
    fn mine(&self, s: Param, k: Param, n_max: usize) -> Result<MiningReport, ObstructionError> {
        let mut en = Enumerator::new(n_max)?;
        let mut report = MiningReport {
            s,
            k,
            bound: n_max,
            records: Vec::new(),
            stats: MiningStats::default(),
        };
        for n in 1..=n_max {
            for code in en.codes_of_order(n)? {
                let e = examine(&code, s, k, self.validate_witnesses)?;
                report.stats.absorb(&e);
                report.records.extend(e.record);
            }
        }
        report.sort();
        Ok(report)
    }
}

pub fn mine_obstructions(
    s: Param,
    k: Param,
    n_max: usize,
) -> Result<Vec<ObstructionRecord>, ObstructionError> {
    Ok(SerialMiner::default().mine(s, k, n_max)?.records)
}

/// Memoizes mining runs by parameters; a run at a larger bound answers
/// every smaller one.
pub struct MiningCache<M> {
    miner: M,
    runs: BTreeMap<(Param, Param), MiningReport>,
}

impl<M: Miner> MiningCache<M> {
    pub fn new(miner: M) -> Self {
        Self {
            miner,
            runs: BTreeMap::new(),
        }
    }

    pub fn miner(&self) -> &M {
        &self.miner
    }

    pub fn get(&mut self, s: Param, k: Param, n_max: usize) -> Result<MiningReport, ObstructionError> {
        if let Some(r) = self.runs.get(&(s, k)) {
            if r.bound >= n_max {
                return Ok(r.truncated(n_max));
            }
        }
        let report = self.miner.mine(s, k, n_max)?;
        self.runs.insert((s, k), report.clone());
        Ok(report)
    }

    /// Totals over every run performed so far.
    pub fn stats(&self) -> MiningStats {
        let mut total = MiningStats::default();
        self.runs.values().for_each(|r| total.merge(&r.stats));
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotree::recognize;

    fn tree(src: &str) -> Cotree {
        recognize(&CographExpr::parse(src).unwrap().eval().unwrap()).cotree().unwrap()
    }

    #[test]
    fn small_counts() {
        let mut en = Enumerator::new(10).unwrap();
        let counts: Vec<usize> = (1..=10).map(|n| en.count(n).unwrap()).collect();
        assert_eq!(counts, [1, 2, 4, 10, 24, 66, 180, 522, 1532, 4624]);
        assert!(en.codes_of_order(11).is_err());
        assert!(Enumerator::new(16).is_err());
    }

    #[test]
    fn codes_are_canonical_and_distinct() {
        let mut en = Enumerator::new(8).unwrap();
        for n in 1..=8 {
            let codes = en.codes_of_order(n).unwrap();
            assert!(codes.windows(2).all(|w| w[0] < w[1]));
            for c in &codes {
                let t = c.to_cotree().unwrap();
                assert_eq!(&t.canonical_code(), c);
                assert_eq!(t.order(), n);
                assert!(recognize(&t.realize().unwrap()).cotree().is_some());
            }
        }
    }

    #[test]
    fn order_two() {
        let got: Vec<String> = enumerate_cographs(2)
            .unwrap()
            .filter(|t| t.order() == 2)
            .map(|t| CographExpr::describe(&t).to_string())
            .collect();
        assert_eq!(got, ["2K1", "K2"]);
    }

    #[test]
    fn minimality_examples() {
        let inf = Param::Unbounded;
        assert!(is_minimal_obstruction(&tree("K1 + 3K2"), inf, Param::Finite(2)).unwrap());
        assert!(is_minimal_obstruction(&tree("2K2"), Param::Finite(1), Param::Finite(1)).unwrap());
        assert!(is_minimal_obstruction(&tree("C4"), Param::Finite(1), Param::Finite(1)).unwrap());
        assert!(!is_minimal_obstruction(&tree("4K2"), inf, Param::Finite(2)).unwrap());
        assert!(!is_minimal_obstruction(&tree("P3"), inf, Param::Finite(2)).unwrap());
    }

    #[test]
    fn types() {
        let g = |s: &str| CographExpr::parse(s).unwrap().eval().unwrap();
        assert_eq!(classify_type(&g("3K1 + (K1 * C4)")), (4, 3));
        assert_eq!(classify_type(&g("P3 + C4")), (2, 0));
        assert_eq!(classify_type(&g("K1 + 3K2")), (4, 1));
    }

    #[test]
    fn small_mining_runs() {
        let one = Param::Finite(1);
        let split = mine_obstructions(one, one, 6).unwrap();
        let names: Vec<&str> = split.iter().map(|r| r.expression.as_str()).collect();
        assert_eq!(names, ["2K2", "C4"]);
        let co_p3 = mine_obstructions(Param::Unbounded, Param::Finite(0), 4).unwrap();
        assert_eq!(co_p3.len(), 1);
        assert_eq!(co_p3[0].expression, "K1 + K2");
    }

    #[test]
    fn validated_mining_matches_plain() {
        let (s, k) = (Param::Finite(2), Param::Finite(1));
        let plain = SerialMiner::default().mine(s, k, 7).unwrap();
        let checked = SerialMiner { validate_witnesses: true }.mine(s, k, 7).unwrap();
        assert_eq!(plain.records, checked.records);
        assert_eq!(checked.stats.polar_verdicts, checked.stats.witnesses_validated);
        assert!(checked.stats.witnesses_validated > 0);
    }

    #[test]
    fn cache_truncates() {
        let mut cache = MiningCache::new(SerialMiner::default());
        let big = cache.get(Param::Unbounded, Param::Unbounded, 7).unwrap();
        let small = cache.get(Param::Unbounded, Param::Unbounded, 5).unwrap();
        assert_eq!(small.bound, 5);
        assert!(small.records.iter().all(|r| r.order <= 5));
        assert!(small.records.len() <= big.records.len());
    }
}
