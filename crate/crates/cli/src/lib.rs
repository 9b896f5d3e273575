//! The `copolar` command-line tool.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use copolar_core::catalog::{self, Catalog, CatalogError, Category, Verdict, Verifier};
use copolar_core::cotree::{recognize, Recognition};
use copolar_core::expr::CographExpr;
use copolar_core::obstruction::{classify_type, Enumerator, Miner, ObstructionError, ObstructionRecord};
use copolar_core::polarity::{
    is_polar, profile_bruteforce, PartitionWitness, PolarityError, PolarProfile,
};
use copolar_core::{Graph, Param};
use serde_json::{json, Value};

pub mod parallel;

pub use parallel::ParallelMiner;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "copolar", version, about = "Cographs, polar partitions and their minimal obstructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for mining (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression such as "K1 * (K2 + P3)".
    Eval {
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Build the cotree of a graph, or find an induced P4.
    Recognize {
        /// Expression, graph6 string, graph6 file, or "-" for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Decide (s,k)-polarity and print a validated witness.
    Polarity {
        input: String,
        #[arg(long, default_value = "inf")]
        s: Param,
        #[arg(long, default_value = "inf")]
        k: Param,
        /// Cross-check against exhaustive search over all bipartitions.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print every achievable (parts, cliques) signature.
    Profile {
        input: String,
        #[arg(long)]
        oracle: bool,
    },
    /// Mine minimal (s,k)-polar obstructions as JSON lines.
    Mine {
        #[arg(long)]
        s: Param,
        #[arg(long)]
        k: Param,
        #[arg(long)]
        n_max: usize,
    },
    /// Check a named claim, or "all" claims applicable at --k.
    Verify {
        claim: String,
        #[arg(long)]
        k: Option<usize>,
        /// Mining bound for every claim, instead of each claim's default.
        #[arg(long)]
        n_max: Option<usize>,
        /// Directory of catalog files overriding the built-in ones.
        #[arg(long)]
        catalog_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Count cographs of each order.
    Census {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Inspect or export the claim catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// List claim ids.
    List,
    /// Write built-in files and every list claim instantiated at --k into a directory.
    Emit {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        catalog_dir: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Graph6,
    Dot,
    Table,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Io(io::Error),
    NotCograph([usize; 4]),
    Bound(String),
    UnknownClaim(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::NotCograph(_) => 3,
            CliError::Bound(_) => 4,
            CliError::UnknownClaim(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::NotCograph(p) => write!(f, "not a cograph: vertices {p:?} induce P4"),
            CliError::Bound(m) => write!(f, "{m}"),
            CliError::UnknownClaim(m) => write!(f, "{m}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ObstructionError> for CliError {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::Bound { .. } => CliError::Bound(e.to_string()),
            ObstructionError::Polarity(p) => p.into(),
        }
    }
}

impl From<PolarityError> for CliError {
    fn from(e: PolarityError) -> Self {
        match e {
            PolarityError::NotCograph(p) => CliError::NotCograph(p),
            PolarityError::TooLarge(_) => CliError::Bound(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::UnknownClaim(_) | CatalogError::OutOfRange { .. } | CatalogError::NoList(_) => {
                CliError::UnknownClaim(e.to_string())
            }
            CatalogError::Mining(m) => m.into(),
            CatalogError::Polarity(p) => p.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

/// Reads a graph given as a graph6 file, `-` for stdin, an expression, or a graph6 string.
pub fn read_graph(input: &str) -> Result<Graph, CliError> {
    let from_g6 = |text: &str| {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .unwrap_or("");
        Graph::from_graph6(line).map_err(|e| CliError::Parse(format!("graph6: {e}")))
    };
    if input == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return from_g6(&text);
    }
    if Path::new(input).is_file() {
        return from_g6(&fs::read_to_string(input)?);
    }
    match CographExpr::parse(input) {
        Ok(e) => e.eval().map_err(|e| CliError::Bound(e.to_string())),
        Err(expr_err) => Graph::from_graph6(input.trim()).map_err(|_| {
            CliError::Parse(format!("{input:?}: {expr_err}"))
        }),
    }
}

fn param_json(p: Param) -> Value {
    match p {
        Param::Finite(x) => json!(x),
        Param::Unbounded => json!("inf"),
    }
}

fn profile_json(p: &PolarProfile) -> Value {
    let pairs = |it: &mut dyn Iterator<Item = copolar_core::Signature>| -> Vec<[usize; 2]> {
        it.map(|x| [x.s, x.k]).collect()
    };
    json!({
        "n": p.order(),
        "signatures": pairs(&mut p.minimal().into_iter()),
        "exact": pairs(&mut p.signatures()),
    })
}

fn witness_json(w: &PartitionWitness) -> Value {
    json!({
        "a": w.a.iter().collect::<Vec<_>>(),
        "b": w.b.iter().collect::<Vec<_>>(),
        "s": w.signature.s,
        "k": w.signature.k,
    })
}

pub fn record_json(r: &ObstructionRecord, bound: usize) -> Value {
    json!({
        "version": VERSION,
        "bound": bound,
        "code": r.code.to_hex(),
        "graph6": r.graph6,
        "order": r.order,
        "c": r.components,
        "i": r.trivial,
        "s": param_json(r.s),
        "k": param_json(r.k),
        "expression": r.expression,
        "provenance": r.provenance.to_string(),
    })
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "claim": v.claim,
        "k": v.k,
        "bound": v.bound,
        "status": v.status(),
        "expected": v.expected,
        "found": v.found,
        "missing": v.missing,
        "extra": v.extra,
        "notes": v.notes,
    })
}

fn load_catalog(dir: Option<&Path>) -> Result<Catalog, CliError> {
    let mut cat = Catalog::builtin();
    if let Some(dir) = dir {
        let mut entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
        entries.sort_by_key(|e| e.file_name());
        for e in entries {
            let path = e.path();
            if path.extension().is_some_and(|x| x == "txt") {
                let name = e.file_name().to_string_lossy().into_owned();
                cat.set_file(&name, fs::read_to_string(&path)?);
            }
        }
    }
    Ok(cat)
}

/// Runs one command; the returned code is 0 on success and 1 when a check fails.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let mut out = String::new();
    let result = dispatch(cli, &mut out);
    match &cli.out {
        Some(path) => fs::write(path, &out)?,
        None => print!("{out}"),
    }
    result
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<u8, CliError> {
    match &cli.command {
        Command::Eval { expr, format } => {
            let e = CographExpr::parse(expr).map_err(|err| {
                CliError::Parse(format!("{expr:?}: {err}"))
            })?;
            let g = e.eval().map_err(|err| CliError::Bound(err.to_string()))?;
            emit_graph(out, &e.to_string(), &g, *format);
            Ok(0)
        }
        Command::Recognize { input, format } => {
            let g = read_graph(input)?;
            match recognize(&g) {
                Recognition::Cograph(t) => {
                    let code = t.canonical_code();
                    let expr = CographExpr::describe(&t).to_string();
                    if *format == Format::Json {
                        let v = json!({
                            "version": VERSION,
                            "cograph": true,
                            "cotree": t.render(),
                            "code": code.to_hex(),
                            "expression": expr,
                        });
                        writeln!(out, "{v}").unwrap();
                    } else {
                        writeln!(out, "cograph     yes").unwrap();
                        writeln!(out, "cotree      {}", t.render()).unwrap();
                        writeln!(out, "code        {}", code.to_hex()).unwrap();
                        writeln!(out, "expression  {expr}").unwrap();
                    }
                    Ok(0)
                }
                Recognition::NotCograph(cert) => {
                    if *format == Format::Json {
                        let v = json!({"version": VERSION, "cograph": false, "p4": cert.path});
                        writeln!(out, "{v}").unwrap();
                    } else {
                        writeln!(out, "cograph     no").unwrap();
                        writeln!(out, "p4          {:?}", cert.path).unwrap();
                    }
                    Err(CliError::NotCograph(cert.path))
                }
            }
        }
        Command::Polarity {
            input,
            s,
            k,
            oracle,
            format,
        } => {
            let g = read_graph(input)?;
            let verdict = is_polar(&g, *s, *k)?;
            let mut agree = None;
            if *oracle {
                let bf = profile_bruteforce(&g)?;
                agree = Some(
                    bf.dominance_closure() == verdict.profile.dominance_closure()
                        && bf.is_polar(*s, *k) == verdict.polar,
                );
            }
            let word = if verdict.polar { "POLAR" } else { "NOT-POLAR" };
            if *format == Format::Json {
                let mut v = json!({
                    "version": VERSION,
                    "s": param_json(*s),
                    "k": param_json(*k),
                    "polar": verdict.polar,
                    "profile": profile_json(&verdict.profile),
                    "witness": verdict.witness.as_ref().map(witness_json),
                });
                if let Some(a) = agree {
                    v["oracle_agrees"] = json!(a);
                }
                writeln!(out, "{v}").unwrap();
            } else {
                writeln!(out, "{word} (s={s}, k={k})").unwrap();
                writeln!(out, "profile {}", profile_json(&verdict.profile)).unwrap();
                if let Some(w) = &verdict.witness {
                    let a: Vec<_> = w.a.iter().collect();
                    let b: Vec<_> = w.b.iter().collect();
                    writeln!(out, "witness A={a:?} B={b:?} signature={}", w.signature).unwrap();
                }
                if let Some(a) = agree {
                    writeln!(out, "oracle {}", if a { "agrees" } else { "DISAGREES" }).unwrap();
                }
            }
            Ok(if agree == Some(false) { 1 } else { 0 })
        }
        Command::Profile { input, oracle } => {
            let g = read_graph(input)?;
            let t = match recognize(&g) {
                Recognition::Cograph(t) => t,
                Recognition::NotCograph(c) => return Err(CliError::NotCograph(c.path)),
            };
            let p = copolar_core::polarity::profile_dp(&t)?;
            let mut v = profile_json(&p);
            v["version"] = json!(VERSION);
            let mut code = 0;
            if *oracle {
                let agrees = profile_bruteforce(&g)? == p;
                v["oracle_agrees"] = json!(agrees);
                code = u8::from(!agrees);
            }
            writeln!(out, "{v}").unwrap();
            Ok(code)
        }
        Command::Mine { s, k, n_max } => {
            let miner = ParallelMiner::new(cli.workers, true);
            let report = miner.mine(*s, *k, *n_max)?;
            for r in &report.records {
                writeln!(out, "{}", record_json(r, report.bound)).unwrap();
            }
            eprintln!(
                "mined ({s},{k}) to order {}: {} records from {} classes, {} witnesses validated",
                report.bound,
                report.records.len(),
                report.stats.classes,
                report.stats.witnesses_validated
            );
            Ok(0)
        }
        Command::Verify {
            claim,
            k,
            n_max,
            catalog_dir,
            format,
        } => {
            let cat = load_catalog(catalog_dir.as_deref())?;
            let miner = ParallelMiner::new(cli.workers, true);
            let mut verifier = Verifier::new(cat, miner).with_bound(*n_max);
            let verdicts = if claim == "all" {
                let k = k.ok_or_else(|| CliError::UnknownClaim("\"all\" needs --k".into()))?;
                verifier.verify_all(k)?
            } else {
                vec![verifier.verify(claim, *k)?]
            };
            let passed = verdicts.iter().filter(|v| v.passed).count();
            if *format == Format::Json {
                let v = json!({
                    "version": VERSION,
                    "results": verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
                    "passed": passed,
                    "total": verdicts.len(),
                });
                writeln!(out, "{v}").unwrap();
            } else {
                write_verdict_table(out, &verdicts);
            }
            Ok(if passed == verdicts.len() { 0 } else { 1 })
        }
        Command::Census { n_max, format } => {
            let mut en = Enumerator::new(*n_max)?;
            let counts: Vec<usize> = (1..=*n_max).map(|n| en.count(n)).collect::<Result<_, _>>()?;
            let total: usize = counts.iter().sum();
            if *format == Format::Json {
                let v = json!({
                    "version": VERSION,
                    "bound": n_max,
                    "counts": counts.iter().enumerate().map(|(i, c)| json!({"order": i + 1, "count": c})).collect::<Vec<_>>(),
                    "total": total,
                });
                writeln!(out, "{v}").unwrap();
            } else {
                writeln!(out, "order  count").unwrap();
                for (i, c) in counts.iter().enumerate() {
                    writeln!(out, "{:<5}  {c}", i + 1).unwrap();
                }
                writeln!(out, "total  {total}").unwrap();
            }
            Ok(0)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for c in catalog::claims() {
                    let cat = match c.category() {
                        Category::List => "list",
                        Category::Count => "count",
                        Category::Recursion => "recursion",
                        Category::Property => "property",
                        Category::Conjecture => "conjecture",
                    };
                    writeln!(out, "{:<16} {:<10} {:<8} {}", c.id, cat, c.range.to_string(), c.summary).unwrap();
                }
                Ok(0)
            }
            CatalogAction::Emit { k, dir, catalog_dir } => {
                let cat = load_catalog(catalog_dir.as_deref())?;
                fs::create_dir_all(dir)?;
                for (name, text) in cat.files() {
                    fs::write(dir.join(name), text)?;
                }
                for c in catalog::claims() {
                    if c.category() != Category::List || !c.range.admits(*k) {
                        continue;
                    }
                    let exprs = catalog::instantiate(&cat, c.id, Some(*k))?;
                    let mut text = format!("# {} at k = {k}\n", c.summary);
                    exprs.iter().for_each(|e| writeln!(text, "{e}").unwrap());
                    let file = format!("{}-k{k}.txt", c.id);
                    fs::write(dir.join(&file), text)?;
                    writeln!(out, "{file}").unwrap();
                }
                Ok(0)
            }
        },
    }
}

fn emit_graph(out: &mut String, expr: &str, g: &Graph, format: Format) {
    let (c, i) = classify_type(g);
    match format {
        Format::Graph6 => writeln!(out, "{}", g.to_graph6()).unwrap(),
        Format::Dot => out.push_str(&g.to_dot("G")),
        Format::Json => {
            let v = json!({
                "version": VERSION,
                "expression": expr,
                "graph6": g.to_graph6(),
                "order": g.order(),
                "edges": g.edge_count(),
                "components": c,
                "type": [c, i],
            });
            writeln!(out, "{v}").unwrap();
        }
        Format::Table => {
            writeln!(out, "expression  {expr}").unwrap();
            writeln!(out, "graph6      {}", g.to_graph6()).unwrap();
            writeln!(out, "order       {}", g.order()).unwrap();
            writeln!(out, "edges       {}", g.edge_count()).unwrap();
            writeln!(out, "components  {c}").unwrap();
            writeln!(out, "type        ({c},{i})").unwrap();
        }
    }
}

fn write_verdict_table(out: &mut String, verdicts: &[Verdict]) {
    writeln!(out, "{:<16} {:>3} {:>5}  {:<6} {:>8} {:>6}", "claim", "k", "bound", "status", "expected", "found").unwrap();
    for v in verdicts {
        let k = v.k.map_or("-".to_string(), |k| k.to_string());
        writeln!(
            out,
            "{:<16} {:>3} {:>5}  {:<6} {:>8} {:>6}",
            v.claim,
            k,
            v.bound,
            v.status(),
            v.expected,
            v.found
        )
        .unwrap();
        for m in &v.missing {
            writeln!(out, "    missing  {m}").unwrap();
        }
        for x in &v.extra {
            writeln!(out, "    extra    {x}").unwrap();
        }
        if !v.passed {
            for n in &v.notes {
                writeln!(out, "    note     {n}").unwrap();
            }
        }
    }
    let passed = verdicts.iter().filter(|v| v.passed).count();
    writeln!(out, "{passed}/{} claims passed", verdicts.len()).unwrap();
}
