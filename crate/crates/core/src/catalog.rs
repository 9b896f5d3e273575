//! Named obstruction families and structural claims, checked against mining.
//!
//! Each claim compares a set of expected cographs with a set of mined
//! records, both keyed by canonical code. Expected sets come from catalog
//! files, from families instantiated at a concrete `k`, or from recursive
//! constructions over records mined at level `k - 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cotree::{cograph_code, recognize, CanonicalCode};
use crate::expr::{CographExpr, ExprError};
use crate::graph::{Graph, GraphError};
use crate::obstruction::{
    is_minimal_obstruction, Miner, MiningCache, MiningStats, ObstructionError, ObstructionRecord,
};
use crate::polarity::{profile_dp, Param, PolarityError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("claim {claim} does not apply at k = {k:?} (valid: {range})")]
    OutOfRange {
        claim: &'static str,
        k: Option<usize>,
        range: KRange,
    },
    #[error("claim {0} is not an expression list")]
    NoList(&'static str),
    #[error("catalog file {0} is missing")]
    MissingFile(String),
    #[error("{file}:{line}: {source}")]
    Parse {
        file: String,
        line: usize,
        source: ExprError,
    },
    #[error("{file}:{line}: {source}")]
    Eval {
        file: String,
        line: usize,
        source: GraphError,
    },
    #[error(transparent)]
    Mining(#[from] ObstructionError),
    #[error(transparent)]
    Polarity(#[from] PolarityError),
}

/// Values of `k` a claim is stated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KRange {
    /// The claim has no `k` parameter.
    Free,
    Exactly(usize),
    AtLeast(usize),
}

impl KRange {
    pub fn admits(self, k: usize) -> bool {
        match self {
            KRange::Free => true,
            KRange::Exactly(x) => k == x,
            KRange::AtLeast(x) => k >= x,
        }
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRange::Free => f.write_str("no k"),
            KRange::Exactly(x) => write!(f, "k = {x}"),
            KRange::AtLeast(x) => write!(f, "k >= {x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    List,
    Count,
    Recursion,
    Property,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Fig1,
    Polar,
    Inf0,
    Split,
    Pol21,
    Pol22,
    Thm21,
    Thm22,
    Connected,
    ConnectedOneS,
    Remark4,
    Thm15,
    Thm17,
    Thm18,
    TypeK1K,
    TypeKK1,
    Thm19,
    Cor20(u8),
    Thm11,
    Lemma5,
    Lemma7,
    Conj1,
    Conj2,
}

#[derive(Clone, Copy, Debug)]
pub struct Claim {
    pub id: &'static str,
    pub summary: &'static str,
    pub range: KRange,
    kind: Kind,
}

impl Claim {
    pub fn category(&self) -> Category {
        match self.kind {
            Kind::Pol21 | Kind::Pol22 => Category::Count,
            Kind::Thm15 | Kind::Thm17 | Kind::Thm19 | Kind::Thm11 => Category::Recursion,
            Kind::Lemma5 | Kind::Lemma7 => Category::Property,
            Kind::Conj1 | Kind::Conj2 => Category::Conjecture,
            _ => Category::List,
        }
    }

    /// Mining bound used when none is given.
    pub fn default_bound(&self, k: Option<usize>) -> usize {
        let k = k.unwrap_or(0);
        match self.kind {
            Kind::Fig1 | Kind::Polar | Kind::Pol21 => 10,
            Kind::Inf0 | Kind::Split => 6,
            Kind::Thm21 => 9,
            Kind::Thm22 | Kind::Pol22 => 12,
            Kind::Conj1 | Kind::Conj2 => 3 * (k + 1) + 1,
            _ => 3 * (k + 1),
        }
    }
}

const fn claim(id: &'static str, summary: &'static str, range: KRange, kind: Kind) -> Claim {
    Claim {
        id,
        summary,
        range,
        kind,
    }
}

static CLAIMS: &[Claim] = &[
    claim("fig1", "minimal (1,inf) obstructions are the four listed graphs", KRange::Free, Kind::Fig1),
    claim("thm2", "minimal (inf,inf) obstructions are P3 + H and its complement", KRange::Free, Kind::Polar),
    claim("inf0", "the only minimal (inf,0) obstruction is ~P3", KRange::Free, Kind::Inf0),
    claim("split", "minimal (1,1) obstructions are 2K2 and C4", KRange::Free, Kind::Split),
    claim("pol21", "there are 9 minimal (2,1) obstructions", KRange::Free, Kind::Pol21),
    claim("pol22", "there are 48 minimal (2,2) obstructions", KRange::Free, Kind::Pol22),
    claim("thm21", "the 23 minimal (inf,2) obstructions", KRange::Exactly(2), Kind::Thm21),
    claim("thm22", "the 49 minimal (inf,3) obstructions", KRange::Exactly(3), Kind::Thm22),
    claim("thm6-connected", "connected (inf,k) obstructions are ~(P3 + H)", KRange::AtLeast(2), Kind::Connected),
    claim("thm3-connected", "connected minimal (1,k) obstructions", KRange::AtLeast(2), Kind::ConnectedOneS),
    claim("remark4", "K1 + (k+1)K2 is the only cluster obstruction", KRange::AtLeast(0), Kind::Remark4),
    claim("thm15", "obstructions with a P3 component are P3 + H", KRange::AtLeast(2), Kind::Thm15),
    claim("thm17", "type (2,1) obstructions are K1 + (K1 * H')", KRange::AtLeast(2), Kind::Thm17),
    claim("thm18", "type (k+2,k+1) obstructions", KRange::AtLeast(2), Kind::Thm18),
    claim("cor-type-k+1-k", "type (k+1,k) obstructions are kK1 + H", KRange::AtLeast(2), Kind::TypeK1K),
    claim("cor-type-k-k-1", "type (k,k-1) obstructions are (k-1)K1 + H", KRange::AtLeast(3), Kind::TypeKK1),
    claim("thm19", "type (c,p) obstructions with p <= c-2 are K2 + G'", KRange::AtLeast(1), Kind::Thm19),
    claim("cor20-item1", "pK1 + (k-p+1)K2 + K{p,p}, unique of type (k+2,p)", KRange::AtLeast(1), Kind::Cor20(1)),
    claim("cor20-item2", "pK1 + (k-p)K2 + (~K2 * (K2 + pK1)), unique of type (k+1,p)", KRange::AtLeast(1), Kind::Cor20(2)),
    claim("cor20-item3", "pK1 + (k-p-1)K2 + (K1 * (2K2 + pK1)), unique of type (k,p)", KRange::AtLeast(2), Kind::Cor20(3)),
    claim("thm11", "type (c,0) obstructions without P3 components are H1 + H2", KRange::AtLeast(1), Kind::Thm11),
    claim("lemma5", "component constraints of (inf,k) obstructions", KRange::AtLeast(0), Kind::Lemma5),
    claim("lemma7", "no isolated vertices implies two non-complete components", KRange::AtLeast(2), Kind::Lemma7),
    claim("conj1", "exactly one obstruction per type (c,i), 1 <= i <= c-2 <= k", KRange::AtLeast(0), Kind::Conj1),
    claim("conj2", "every (inf,k) obstruction has order at most 3(k+1)", KRange::AtLeast(0), Kind::Conj2),
];

pub fn claims() -> &'static [Claim] {
    CLAIMS
}

pub fn find_claim(id: &str) -> Result<&'static Claim, CatalogError> {
    CLAIMS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| CatalogError::UnknownClaim(id.into()))
}

/// Catalog files by name; the built-in set can be overridden file by file.
#[derive(Clone, Debug)]
pub struct Catalog {
    files: BTreeMap<String, String>,
}

pub const FILE_NAMES: [&str; 3] = ["fig1.txt", "thm21.txt", "thm22.txt"];

impl Catalog {
    pub fn builtin() -> Self {
        let texts = [
            include_str!("../catalog/fig1.txt"),
            include_str!("../catalog/thm21.txt"),
            include_str!("../catalog/thm22.txt"),
        ];
        Self {
            files: FILE_NAMES
                .iter()
                .zip(texts)
                .map(|(n, t)| (String::from(*n), String::from(t)))
                .collect(),
        }
    }

    pub fn set_file(&mut self, name: &str, text: String) {
        self.files.insert(name.into(), text);
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    pub fn files(&self) -> impl Iterator<Item = (&str, &str)> {
        self.files.iter().map(|(n, t)| (n.as_str(), t.as_str()))
    }

    fn entries(&self, name: &str) -> Result<Vec<CographExpr>, CatalogError> {
        let text = self
            .file(name)
            .ok_or_else(|| CatalogError::MissingFile(name.into()))?;
        parse_catalog(name, text)
    }
}

/// Parses a catalog file: one expression per line, `#` starts a comment.
pub fn parse_catalog(file: &str, text: &str) -> Result<Vec<CographExpr>, CatalogError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let e = CographExpr::parse(line).map_err(|source| CatalogError::Parse {
            file: file.into(),
            line: i + 1,
            source,
        })?;
        e.eval().map_err(|source| CatalogError::Eval {
            file: file.into(),
            line: i + 1,
            source,
        })?;
        out.push(e);
    }
    Ok(out)
}

/// `n` copies of `atom`, or nothing when `n` is zero.
fn rep(n: usize, atom: &str) -> Option<String> {
    match n {
        0 => None,
        1 => Some(atom.into()),
        _ if atom.len() > 2 && !atom.starts_with('(') => Some(format!("{n}({atom})")),
        _ => Some(format!("{n}{atom}")),
    }
}

fn sum(parts: impl IntoIterator<Item = Option<String>>) -> String {
    parts.into_iter().flatten().collect::<Vec<_>>().join(" + ")
}

fn paren(s: &str) -> String {
    format!("({s})")
}

fn with_isolated(n: usize, hs: &[String]) -> Vec<String> {
    hs.iter()
        .map(|h| sum([rep(n, "K1"), Some(paren(h))]))
        .collect()
}

fn bip(p: usize) -> String {
    format!("K{{{p},{p}}}")
}

fn parse_all(strs: &[String]) -> Vec<CographExpr> {
    strs.iter()
        .map(|s| CographExpr::parse(s).expect("generated expressions parse"))
        .collect()
}

fn check_range(c: &Claim, k: Option<usize>) -> Result<Option<usize>, CatalogError> {
    let err = || CatalogError::OutOfRange {
        claim: c.id,
        k,
        range: c.range,
    };
    match (c.range, k) {
        (KRange::Free, _) => Ok(None),
        (KRange::Exactly(x), None) => Ok(Some(x)),
        (r, Some(k)) if r.admits(k) => Ok(Some(k)),
        _ => Err(err()),
    }
}

fn type_k1k(k: usize) -> Vec<String> {
    let hs = [
        "~(2P3)".into(),
        "(P3 + K2) * K1".into(),
        "2K2 * K2".into(),
        "K1 * (C4 + K1)".into(),
        "K1 * ~(P3 + K2)".into(),
        "~K2 * (P3 + K1)".into(),
        format!("~K2 * ({})", sum([Some("K2".into()), rep(k, "K1")])),
    ];
    with_isolated(k, &hs)
}

fn type_kk1(k: usize) -> Vec<String> {
    let hs = [
        "K1 * (C4 + 2K1)".into(),
        "K1 * 2P3".into(),
        "K1 * (K1 + ~(P3 + K2))".into(),
        "K1 * (K2 + ~(P3 + K1))".into(),
        "K2 * (K1 + 2K2)".into(),
        "K1 * (K1 + K2 + P3)".into(),
        "K1 * (K1 + (K1 * 2K2))".into(),
        format!("K1 * ({})", sum([rep(k - 1, "K1"), Some("2K2".into())])),
    ];
    with_isolated(k - 1, &hs)
}

fn cor20_item(item: u8, k: usize, p: usize) -> String {
    match item {
        1 => sum([rep(p, "K1"), rep(k + 1 - p, "K2"), Some(bip(p))]),
        2 => sum([
            rep(p, "K1"),
            rep(k - p, "K2"),
            Some(format!("(~K2 * (K2 + {}))", rep(p, "K1").unwrap())),
        ]),
        _ => sum([
            rep(p, "K1"),
            rep(k - p - 1, "K2"),
            Some(format!("(K1 * (2K2 + {}))", rep(p, "K1").unwrap())),
        ]),
    }
}

/// `p` ranges of the three families: (largest `p` for membership, largest for uniqueness, components).
fn cor20_shape(item: u8, k: usize) -> (usize, usize, usize) {
    match item {
        1 => (k + 1, k, k + 2),
        2 => (k, k.saturating_sub(1), k + 1),
        _ => (k.saturating_sub(1), k.saturating_sub(2), k),
    }
}

/// Concrete expression list of a list-style claim.
pub fn instantiate(
    catalog: &Catalog,
    id: &str,
    k: Option<usize>,
) -> Result<Vec<CographExpr>, CatalogError> {
    let c = find_claim(id)?;
    let k = check_range(c, k)?;
    let kk = k.unwrap_or(0);
    let strs: Vec<String> = match c.kind {
        Kind::Fig1 => return catalog.entries("fig1.txt"),
        Kind::Thm21 => return catalog.entries("thm21.txt"),
        Kind::Thm22 => return catalog.entries("thm22.txt"),
        Kind::Polar => {
            let mut v = Vec::new();
            for h in catalog.entries("fig1.txt")? {
                v.push(format!("P3 + ({h})"));
                v.push(format!("~(P3 + ({h}))"));
            }
            v
        }
        Kind::Inf0 => alloc::vec!["~P3".into()],
        Kind::Split => alloc::vec!["2K2".into(), "C4".into()],
        Kind::Connected => catalog
            .entries("fig1.txt")?
            .iter()
            .map(|h| format!("~(P3 + ({h}))"))
            .collect(),
        Kind::ConnectedOneS => {
            let mut v: Vec<String> =
                catalog.entries("fig1.txt")?.iter().map(ToString::to_string).collect();
            v.push(bip(kk + 1));
            v.push(format!("~K2 * ({})", sum([Some("K2".into()), rep(kk, "K1")])));
            v.push(format!("K1 * ({})", sum([Some("2K2".into()), rep(kk - 1, "K1")])));
            v
        }
        Kind::Remark4 => alloc::vec![sum([Some("K1".into()), rep(kk + 1, "K2")])],
        Kind::Thm18 => with_isolated(kk + 1, &[bip(kk + 1), "K1 * C4".into()]),
        Kind::TypeK1K => type_k1k(kk),
        Kind::TypeKK1 => type_kk1(kk),
        Kind::Cor20(item) => {
            let (last, _, _) = cor20_shape(item, kk);
            (1..=last).map(|p| cor20_item(item, kk, p)).collect()
        }
        _ => return Err(CatalogError::NoList(c.id)),
    };
    Ok(parse_all(&strs))
}

/// Which mined records a list claim speaks about, given `k`.
type Scope = fn(&ObstructionRecord, usize) -> bool;

/// Outcome of checking one claim at one `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub claim: String,
    pub k: Option<usize>,
    /// Largest order mined for the claim's own level.
    pub bound: usize,
    pub passed: bool,
    pub expected: usize,
    pub found: usize,
    /// Expected graphs absent from the mined set.
    pub missing: Vec<String>,
    /// Mined graphs the claim does not predict, or property violations.
    pub extra: Vec<String>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

type Keyed = BTreeMap<CanonicalCode, String>;

fn keyed_records<'a>(rs: impl IntoIterator<Item = &'a ObstructionRecord>) -> Keyed {
    rs.into_iter()
        .map(|r| (r.code.clone(), r.expression.clone()))
        .collect()
}

fn code_of(g: &Graph) -> CanonicalCode {
    cograph_code(g).expect("catalog graphs are cographs")
}

fn describe(g: &Graph) -> String {
    let t = recognize(g).cotree().expect("catalog graphs are cographs");
    CographExpr::describe(&t).to_string()
}

fn keyed_graphs(gs: impl IntoIterator<Item = Graph>) -> Keyed {
    gs.into_iter().map(|g| (code_of(&g), describe(&g))).collect()
}

fn is_p3(g: &Graph) -> bool {
    g.order() == 3 && g.edge_count() == 2
}

fn components(g: &Graph) -> Vec<Graph> {
    g.components()
        .iter()
        .map(|c| g.induced_subgraph(c).expect("component of host"))
        .collect()
}

fn has_p3_component(g: &Graph) -> bool {
    components(g).iter().any(is_p3)
}

fn polar(g: &Graph, s: Param, k: Param) -> bool {
    let t = recognize(g).cotree().expect("cograph");
    profile_dp(&t).expect("valid cotree").is_polar(s, k)
}

fn union(a: &Graph, b: &Graph) -> Graph {
    a.disjoint_union(b).expect("order within limits")
}

fn join(a: &Graph, b: &Graph) -> Graph {
    a.join(b).expect("order within limits")
}

fn k1() -> Graph {
    Graph::complete(1).unwrap()
}

fn k2s(n: usize) -> Graph {
    (0..n).fold(Graph::edgeless(0).unwrap(), |acc, _| {
        union(&acc, &Graph::complete(2).unwrap())
    })
}

fn eval_str(s: &str) -> Graph {
    CographExpr::parse(s).unwrap().eval().unwrap()
}

/// Runs claims against a miner, reusing mined sets across claims.
pub struct Verifier<M> {
    catalog: Catalog,
    cache: MiningCache<M>,
    bound: Option<usize>,
}

const INF: Param = Param::Unbounded;

fn fin(x: usize) -> Param {
    Param::Finite(x)
}

impl<M: Miner> Verifier<M> {
    pub fn new(catalog: Catalog, miner: M) -> Self {
        Self {
            catalog,
            cache: MiningCache::new(miner),
            bound: None,
        }
    }

    /// Mines every claim to `n` instead of its default bound.
    pub fn with_bound(mut self, n: Option<usize>) -> Self {
        self.bound = n;
        self
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn stats(&self) -> MiningStats {
        self.cache.stats()
    }

    pub fn records(
        &mut self,
        s: Param,
        k: Param,
        n: usize,
    ) -> Result<Vec<ObstructionRecord>, CatalogError> {
        Ok(self.cache.get(s, k, n)?.records)
    }

    /// Every applicable claim at `k`, in registry order.
    pub fn verify_all(&mut self, k: usize) -> Result<Vec<Verdict>, CatalogError> {
        CLAIMS
            .iter()
            .filter(|c| c.range.admits(k))
            .map(|c| self.verify(c.id, Some(k)))
            .collect()
    }

    pub fn verify(&mut self, id: &str, k: Option<usize>) -> Result<Verdict, CatalogError> {
        let c = find_claim(id)?;
        match c.category() {
            Category::List | Category::Count => self.verify_list(id, k),
            Category::Recursion => self.verify_recursion(id, k),
            Category::Property => self.verify_property(id, k),
            Category::Conjecture => {
                let k = check_range(c, k)?.unwrap_or(0);
                let bound = self.bound.unwrap_or(c.default_bound(Some(k)));
                let [one, two] = self.check_conjectures(k, bound)?;
                Ok(if c.kind == Kind::Conj1 { one } else { two })
            }
        }
    }

    fn bound_for(&self, c: &Claim, k: Option<usize>) -> usize {
        self.bound.unwrap_or(c.default_bound(k))
    }

    /// Set equality between a claim's expression list and the mined records in its scope.
    pub fn verify_list(&mut self, id: &str, k: Option<usize>) -> Result<Verdict, CatalogError> {
        let c = find_claim(id)?;
        let k = check_range(c, k)?;
        let n = self.bound_for(c, k);
        let kk = k.unwrap_or(0);
        let level = |x: usize| (INF, fin(x));
        let (params, scope): ((Param, Param), Scope) = match c.kind {
            Kind::Fig1 => ((fin(1), INF), |_, _| true),
            Kind::Polar => ((INF, INF), |_, _| true),
            Kind::Inf0 => (level(0), |_, _| true),
            Kind::Split => ((fin(1), fin(1)), |_, _| true),
            Kind::Pol21 => ((fin(2), fin(1)), |_, _| true),
            Kind::Pol22 => ((fin(2), fin(2)), |_, _| true),
            Kind::Thm21 | Kind::Thm22 => (level(kk), |_, _| true),
            Kind::Connected => (level(kk), |r, _| r.components == 1),
            Kind::ConnectedOneS => ((fin(1), fin(kk)), |r, _| r.components == 1),
            Kind::Remark4 => (level(kk), |r, _| r.graph().is_cluster().0),
            Kind::Thm18 => (level(kk), |r, k| r.kind() == (k + 2, k + 1)),
            Kind::TypeK1K => (level(kk), |r, k| r.kind() == (k + 1, k)),
            Kind::TypeKK1 => (level(kk), |r, k| r.kind() == (k, k - 1)),
            Kind::Cor20(_) => (level(kk), |_, _| true),
            _ => return Err(CatalogError::NoList(c.id)),
        };
        let records = self.records(params.0, params.1, n)?;
        let mut notes = Vec::new();

        if let Kind::Pol21 | Kind::Pol22 = c.kind {
            let expected = if c.kind == Kind::Pol21 { 9 } else { 48 };
            let found = records.len();
            notes.push(format!("count only; obstructions above order {n} are not searched"));
            if found != expected {
                let names: Vec<&str> = records.iter().map(|r| r.expression.as_str()).collect();
                notes.push(format!("found: {}", names.join("; ")));
            }
            return Ok(Verdict {
                claim: c.id.into(),
                k,
                bound: n,
                passed: found == expected,
                expected,
                found,
                missing: Vec::new(),
                extra: Vec::new(),
                notes,
            });
        }

        let exprs = instantiate(&self.catalog, id, k)?;
        let graphs: Vec<Graph> = exprs.iter().map(|e| e.eval().expect("checked on load")).collect();
        let mut expected: Keyed = BTreeMap::new();
        for (e, g) in exprs.iter().zip(&graphs) {
            if expected.insert(code_of(g), e.to_string()).is_some() {
                notes.push(format!("duplicate entry up to isomorphism: {e}"));
            }
        }
        let duplicates = expected.len() != exprs.len();

        let mut found: Keyed = keyed_records(records.iter().filter(|r| scope(r, kk)));
        if let Kind::Cor20(item) = c.kind {
            // Membership for every listed p, uniqueness only within the stated p range.
            let (_, unique, comps) = cor20_shape(item, kk);
            let all = keyed_records(&records);
            found = records
                .iter()
                .filter(|r| r.components == comps && (1..=unique).contains(&r.trivial))
                .map(|r| (r.code.clone(), r.expression.clone()))
                .collect();
            for code in expected.keys() {
                if let Some(name) = all.get(code) {
                    found.insert(code.clone(), name.clone());
                }
            }
        }
        if c.kind == Kind::Polar {
            let closed = found.keys().all(|code| found.contains_key(&code.flipped()));
            notes.push(format!("closed under complement: {closed}"));
            if !closed {
                notes.push("complement closure fails".into());
            }
        }
        let mut v = compare(c.id, k, n, &expected, &found, notes);
        v.passed &= !duplicates && v.notes.iter().all(|s| s != "complement closure fails");
        v.expected = exprs.len();
        Ok(v)
    }

    /// Both directions of a recursive construction at a concrete `k`.
    pub fn verify_recursion(&mut self, id: &str, k: Option<usize>) -> Result<Verdict, CatalogError> {
        let c = find_claim(id)?;
        let k = check_range(c, k)?.unwrap_or(0);
        let n = self.bound_for(c, Some(k));
        let here = self.records(INF, fin(k), n)?;
        let mut notes = Vec::new();
        let (expected, found) = match c.kind {
            Kind::Thm17 => {
                let lower = n.saturating_sub(2);
                notes.push(format!("level k-1 mined to order {lower}"));
                let prev = self.records(INF, fin(k - 1), lower)?;
                let expected = keyed_graphs(
                    prev.iter()
                        .filter(|r| r.components >= 2)
                        .map(ObstructionRecord::graph)
                        .filter(|h| polar(h, fin(1), fin(k)))
                        .map(|h| union(&k1(), &join(&k1(), &h))),
                );
                let found = keyed_records(here.iter().filter(|r| r.kind() == (2, 1)));
                (expected, found)
            }
            Kind::Thm19 => {
                let lower = n.saturating_sub(2);
                notes.push(format!("level k-1 mined to order {lower}"));
                let prev = self.records(INF, fin(k - 1), lower)?;
                let mut expected = Keyed::new();
                let mut found = Keyed::new();
                for cc in 3..=k + 2 {
                    for p in 1..=cc - 2 {
                        let e = keyed_graphs(
                            prev.iter()
                                .filter(|r| r.kind() == (cc - 1, p))
                                .map(ObstructionRecord::graph)
                                .filter(|g| polar(g, fin(1), fin(k)))
                                .map(|g| union(&k2s(1), &g)),
                        );
                        let f = keyed_records(here.iter().filter(|r| r.kind() == (cc, p)));
                        notes.push(format!("type ({cc},{p}): {} constructed, {} mined", e.len(), f.len()));
                        expected.extend(e);
                        found.extend(f);
                    }
                }
                (expected, found)
            }
            Kind::Thm15 => {
                let lower = n.saturating_sub(3);
                notes.push(format!("(1,j) obstructions mined to order {lower}"));
                let fig1: BTreeSet<CanonicalCode> = self
                    .records(fin(1), INF, lower)?
                    .iter()
                    .map(|r| r.code.clone())
                    .collect();
                let p3 = Graph::path(3).unwrap();
                let mut hs = alloc::vec![union(&p3, &k2s(k - 1))];
                hs.push(union(&k2s(k - 2), &eval_str("K1 * 2K2")));
                for j in 1..k {
                    for r in self.records(fin(1), fin(j), lower)? {
                        if r.components == 1 && !fig1.contains(&r.code) {
                            hs.push(union(&k2s(k - j - 1), &r.graph()));
                        }
                    }
                }
                if k >= 3 {
                    for code in &fig1 {
                        hs.push(code.to_cotree().and_then(|t| t.realize()).map_err(PolarityError::from)?);
                    }
                }
                let expected = keyed_graphs(hs.iter().map(|h| union(&p3, h)));
                let found = keyed_records(here.iter().filter(|r| has_p3_component(&r.graph())));
                (expected, found)
            }
            Kind::Thm11 => {
                let lower = n.saturating_sub(2);
                notes.push(format!("(1,j) obstructions mined to order {lower}"));
                let expected = self.thm11_expected(k, n, lower)?;
                let found = keyed_records(here.iter().filter(|r| {
                    r.components >= 2 && r.trivial == 0 && !has_p3_component(&r.graph())
                }));
                (expected, found)
            }
            _ => unreachable!("not a recursion claim"),
        };
        Ok(compare(c.id, Some(k), n, &expected, &found, notes))
    }

    fn thm11_expected(&mut self, k: usize, n: usize, lower: usize) -> Result<Keyed, CatalogError> {
        let special = |j: usize| union(&k2s(j - 2), &eval_str("K1 * 2K2"));
        // candidates[j]: the graphs allowed as H_i when k_i = j
        let mut candidates: BTreeMap<usize, Vec<Graph>> = BTreeMap::new();
        for j in 1..=k {
            let mut v = Vec::new();
            let jk2 = code_of(&k2s(j));
            for r in self.records(fin(1), fin(j - 1), lower)? {
                let fig1 = is_minimal_obstruction(&r.cotree(), fin(1), INF)?;
                if !fig1 && r.code != jk2 {
                    v.push(r.graph());
                }
            }
            if j >= 2 {
                v.push(special(j));
            }
            candidates.insert(j, v);
        }
        let cond4 = |hi: &Graph, ki: usize, other: &Graph| -> Result<bool, CatalogError> {
            if code_of(hi) != code_of(&special(ki)) || ki < 2 {
                return Ok(true);
            }
            let t = recognize(other).cotree().expect("cograph");
            if !is_minimal_obstruction(&t, fin(1), fin(ki - 1))? {
                return Ok(true);
            }
            let non_k2 = components(other).iter().filter(|c| c.order() != 2).count();
            Ok(non_k2 == 1)
        };
        let mut out = Keyed::new();
        for k1 in 1..=k {
            let k2 = k + 1 - k1;
            for h1 in &candidates[&k1] {
                for h2 in &candidates[&k2] {
                    if h1.order() + h2.order() > n {
                        continue;
                    }
                    if !(cond4(h1, k1, h2)? && cond4(h2, k2, h1)?) {
                        continue;
                    }
                    let g = union(h1, h2);
                    if !has_p3_component(&g) {
                        out.insert(code_of(&g), describe(&g));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Component constraints every mined `(inf, k)` record must satisfy.
    pub fn verify_property(&mut self, id: &str, k: Option<usize>) -> Result<Verdict, CatalogError> {
        let c = find_claim(id)?;
        let k = check_range(c, k)?.unwrap_or(0);
        let n = self.bound_for(c, Some(k));
        let records = self.records(INF, fin(k), n)?;
        let mut violations = Vec::new();
        let mut checked = 0;
        for r in &records {
            let comps = components(&r.graph());
            let (cc, i) = r.kind();
            let complete: Vec<&Graph> = comps
                .iter()
                .filter(|g| g.edge_count() * 2 == g.order() * (g.order() - 1))
                .collect();
            let non_complete = comps.len() - complete.len();
            let mut fail = |why: &str| violations.push(format!("{}: {why}", r.expression));
            match c.kind {
                Kind::Lemma5 => {
                    checked += 1;
                    if cc > k + 2 {
                        fail("more than k+2 components");
                    }
                    if i == cc {
                        fail("no non-trivial component");
                    }
                    if i > k + 1 {
                        fail("more than k+1 trivial components");
                    }
                    if i >= 1 && non_complete > 1 {
                        fail("isolated vertex with two non-complete components");
                    }
                    if complete.iter().any(|g| g.order() > 2) {
                        fail("complete component of order above two");
                    }
                    if !(i < cc && cc - 1 <= k + 1) {
                        fail("type outside 0 <= i <= c-1 <= k+1");
                    }
                }
                _ => {
                    if cc >= 2 && i == 0 {
                        checked += 1;
                        if non_complete < 2 {
                            fail("fewer than two non-complete components");
                        }
                    }
                }
            }
        }
        Ok(Verdict {
            claim: c.id.into(),
            k: Some(k),
            bound: n,
            passed: violations.is_empty(),
            expected: checked,
            found: checked - violations.len(),
            missing: Vec::new(),
            extra: violations,
            notes: alloc::vec![format!("{checked} records checked")],
        })
    }

    /// Per-type uniqueness and the order bound, over `(inf, k)` records mined to `n`.
    pub fn check_conjectures(&mut self, k: usize, n: usize) -> Result<[Verdict; 2], CatalogError> {
        let records = self.records(INF, fin(k), n)?;
        let mut cells: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
        for cc in 3..=k + 2 {
            for i in 1..=cc - 2 {
                cells.insert((cc, i), Vec::new());
            }
        }
        for r in &records {
            if let Some(v) = cells.get_mut(&r.kind()) {
                v.push(&r.expression);
            }
        }
        let missing: Vec<String> = cells
            .iter()
            .filter(|(_, v)| v.is_empty())
            .map(|((c, i), _)| format!("type ({c},{i}): none"))
            .collect();
        let extra: Vec<String> = cells
            .iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|((c, i), v)| format!("type ({c},{i}): {}", v.join("; ")))
            .collect();
        let mut notes = Vec::new();
        if n < 3 * (k + 1) {
            notes.push(format!("bound {n} is below 3(k+1) = {}", 3 * (k + 1)));
        }
        let conj1 = Verdict {
            claim: "conj1".into(),
            k: Some(k),
            bound: n,
            passed: missing.is_empty() && extra.is_empty(),
            expected: cells.len(),
            found: cells.values().filter(|v| v.len() == 1).count(),
            missing,
            extra,
            notes: notes.clone(),
        };
        let limit = 3 * (k + 1);
        let max = records.iter().map(|r| r.order).max().unwrap_or(0);
        let over: Vec<String> = records
            .iter()
            .filter(|r| r.order > limit)
            .map(|r| format!("{} (order {})", r.expression, r.order))
            .collect();
        notes.push(format!("max order {max}, limit {limit}"));
        let conj2 = Verdict {
            claim: "conj2".into(),
            k: Some(k),
            bound: n,
            passed: over.is_empty(),
            expected: limit,
            found: max,
            missing: Vec::new(),
            extra: over,
            notes,
        };
        Ok([conj1, conj2])
    }
}

fn compare(
    id: &str,
    k: Option<usize>,
    bound: usize,
    expected: &Keyed,
    found: &Keyed,
    notes: Vec<String>,
) -> Verdict {
    let missing: Vec<String> = expected
        .iter()
        .filter(|(c, _)| !found.contains_key(*c))
        .map(|(_, e)| e.clone())
        .collect();
    let extra: Vec<String> = found
        .iter()
        .filter(|(c, _)| !expected.contains_key(*c))
        .map(|(_, e)| e.clone())
        .collect();
    Verdict {
        claim: id.into(),
        k,
        bound,
        passed: missing.is_empty() && extra.is_empty(),
        expected: expected.len(),
        found: found.len(),
        missing,
        extra,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruction::SerialMiner;

    fn verifier() -> Verifier<SerialMiner> {
        Verifier::new(Catalog::builtin(), SerialMiner::default())
    }

    #[test]
    fn builtin_files_parse() {
        let cat = Catalog::builtin();
        assert_eq!(instantiate(&cat, "fig1", None).unwrap().len(), 4);
        assert_eq!(instantiate(&cat, "thm21", Some(2)).unwrap().len(), 23);
        assert_eq!(instantiate(&cat, "thm22", Some(3)).unwrap().len(), 49);
        assert_eq!(instantiate(&cat, "thm2", None).unwrap().len(), 8);
    }

    #[test]
    fn families_at_concrete_k() {
        let cat = Catalog::builtin();
        let names = |id: &str, k: usize| -> Vec<String> {
            instantiate(&cat, id, Some(k)).unwrap().iter().map(ToString::to_string).collect()
        };
        assert_eq!(names("remark4", 2), ["K1 + 3K2"]);
        assert_eq!(names("thm18", 2), ["3K1 + K{3,3}", "3K1 + (K1 * C4)"]);
        assert_eq!(
            names("cor20-item1", 2),
            ["K1 + 2K2 + K{1,1}", "2K1 + K2 + K{2,2}", "3K1 + K{3,3}"]
        );
        assert_eq!(names("cor20-item3", 3)[0], "K1 + K2 + (K1 * (2K2 + K1))");
        assert_eq!(names("cor-type-k-k-1", 3).len(), 8);
        assert_eq!(names("thm3-connected", 2)[4..], ["K{3,3}", "~K2 * (K2 + 2K1)", "K1 * (2K2 + K1)"]);
    }

    #[test]
    fn range_and_unknown() {
        let cat = Catalog::builtin();
        assert!(matches!(instantiate(&cat, "nope", None), Err(CatalogError::UnknownClaim(_))));
        assert!(matches!(
            instantiate(&cat, "thm21", Some(3)),
            Err(CatalogError::OutOfRange { .. })
        ));
        assert!(matches!(instantiate(&cat, "thm17", Some(2)), Err(CatalogError::NoList(_))));
    }

    #[test]
    fn bad_catalog_line_reports_position() {
        let err = parse_catalog("x.txt", "# c\nK1 * C4\nP4\n").unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 3, .. }));
    }

    #[test]
    fn small_claims_pass() {
        let mut v = verifier();
        for id in ["fig1", "thm2", "inf0", "split", "pol21"] {
            let r = v.verify(id, None).unwrap();
            assert!(r.passed, "{r:?}");
        }
        let r = v.verify("thm21", Some(2)).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!((r.expected, r.found), (23, 23));
    }

    #[test]
    fn k2_structure() {
        let mut v = verifier();
        for r in v.verify_all(2).unwrap() {
            if r.claim != "pol22" {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn overridden_file_is_checked() {
        let mut cat = Catalog::builtin();
        cat.set_file("fig1.txt", "K1 * C4\nK2 * 2K2\n~(2P3)\n".into());
        let mut v = Verifier::new(cat, SerialMiner::default());
        let r = v.verify("fig1", None).unwrap();
        assert!(!r.passed);
        assert_eq!(r.extra, ["K1 * (K2 + P3)"]);
    }
}
