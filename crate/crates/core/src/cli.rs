//! Command-line front end. Each subcommand renders JSON or DOT text; the
//! `latrep` binary only parses arguments and prints.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dot::{filter_lattice_dot, ideal_graph_dot, lattice_dot, prime_poset_dot};
use crate::error::{Error, Result};
use crate::filters::{enumerate_filters, prime_poset};
use crate::lattice::{birkhoff_iso_check, Birkhoff, FiniteLattice};
use crate::lazylf::plugin::{serve_plugin, PluginLattice};
use crate::lazylf::{
    interval, parse_covering, parse_elem, BFin, Covering, FiniteAdapter, LocallyFiniteLattice, NGrid, ZGrid,
    DEFAULT_WINDOW_LIMIT,
};
use crate::poset::{Poset, PosetJson, DEFAULT_IDEAL_LIMIT};
use crate::repr::{components_finite, conjecture_probe, SymbolicIdeals};
use crate::transpose::{classify_prime, classify_prime_symbolic};
use crate::verify::{random_distributive_lattice, random_poset, run_suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "latrep", version, about = "Distributive lattice representations, prime filters and transpose chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct OutArgs {
    /// Write JSON output to this file instead of stdout.
    #[arg(long = "json", value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the property suites; exit status 0 iff nothing failed.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_poset: usize,
        #[arg(long, default_value_t = 500)]
        instances: usize,
        /// Random lattices for the filter checks.
        #[arg(long, default_value_t = 200)]
        lattice_instances: usize,
        /// Cases per check on infinite lattices.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 32)]
        budget: usize,
        #[arg(long, default_value_t = 10)]
        radius: i64,
        /// Largest window, in elements.
        #[arg(long, default_value_t = DEFAULT_WINDOW_LIMIT)]
        limit: usize,
        /// Corrupt one meet entry to exercise failure reporting.
        #[arg(long)]
        inject_fault: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classify the separator of a covering by downward transposes.
    Classify {
        /// `LATTICE COVERING`, or just `COVERING` with --plugin. Coverings
        /// are literals such as "(0,0)<(1,0)" or "{1,3}<{1,3,5}".
        #[arg(required = true, num_args = 1..=2, value_names = ["LATTICE", "COVERING"])]
        args: Vec<String>,
        #[arg(long, default_value_t = 32)]
        budget: usize,
        /// Oracle program, or a .json/.jsonl table.
        #[arg(long)]
        plugin: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Materialize the interval [a, b] as a finite lattice.
    Window {
        /// `LATTICE A B`, or just `A B` with --plugin.
        #[arg(required = true, num_args = 2..=3, value_names = ["LATTICE", "A", "B"])]
        args: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_WINDOW_LIMIT)]
        limit: usize,
        #[arg(long)]
        plugin: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Component classes of ideals at finite difference.
    Components {
        /// Built-in lattice name, or a poset JSON file.
        source: String,
        #[arg(long, default_value_t = DEFAULT_IDEAL_LIMIT)]
        limit: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check the Birkhoff isomorphism on a lattice or on the ideals of a poset.
    Birkhoff {
        source: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Emit Graphviz text.
    Dot {
        object: DotObject,
        source: String,
        #[arg(long, default_value_t = crate::dot::DEFAULT_DOT_LIMIT)]
        limit: usize,
    },
    /// Generate a random poset or distributive lattice (JSON).
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_poset: usize,
        /// Largest ideal lattice accepted for `lattice`.
        #[arg(long, default_value_t = 16)]
        limit: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Widths of lattice windows and prime regions next to component counts.
    Probe {
        lattice: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3, 4])]
        radius: Vec<i64>,
        #[arg(long, default_value_t = DEFAULT_WINDOW_LIMIT)]
        limit: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Answer oracle requests for a built-in on stdin/stdout.
    Serve { lattice: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotObject {
    Lattice,
    FilterLattice,
    PrimePoset,
    IdealGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Poset,
    Lattice,
}

/// A built-in selected by name: `zgridN`, `ngridN`, `bfin`, `divN`,
/// `boolK`, `chainK`.
pub enum Named {
    Z(ZGrid),
    N(NGrid),
    B(BFin),
    F(FiniteAdapter),
}

fn suffix(name: &str, prefix: &str) -> Option<Result<u64>> {
    name.strip_prefix(prefix).map(|rest| {
        rest.parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad size in lattice name {name:?}")))
    })
}

pub fn named_finite(name: &str) -> Result<Option<FiniteLattice>> {
    if let Some(k) = suffix(name, "div") {
        let k = k?;
        if k == 0 {
            return Err(Error::Parse("div0 is not a lattice".into()));
        }
        return Ok(Some(FiniteLattice::divisors(k)));
    }
    if let Some(k) = suffix(name, "bool") {
        return Ok(Some(FiniteLattice::boolean(k? as usize)));
    }
    if let Some(k) = suffix(name, "chain") {
        let k = k? as usize;
        if k == 0 {
            return Err(Error::EmptyLattice);
        }
        return Ok(Some(FiniteLattice::chain(k)));
    }
    Ok(None)
}

pub fn named(name: &str) -> Result<Named> {
    let dim = |k: u64| {
        if k == 0 {
            Err(Error::Parse(format!("{name}: dimension must be positive")))
        } else {
            Ok(k as usize)
        }
    };
    if let Some(k) = suffix(name, "zgrid") {
        return Ok(Named::Z(ZGrid::new(dim(k?)?)));
    }
    if let Some(k) = suffix(name, "ngrid") {
        return Ok(Named::N(NGrid::new(dim(k?)?)));
    }
    if name == "bfin" {
        return Ok(Named::B(BFin));
    }
    match named_finite(name)? {
        Some(l) => Ok(Named::F(FiniteAdapter::new(l)?)),
        None => Err(Error::UnsupportedLattice(format!(
            "unknown lattice {name:?}; expected zgridN, ngridN, bfin, divN, boolK or chainK"
        ))),
    }
}

/// Element literals: JSON or set/tuple notation for the infinite built-ins,
/// labels (or indices) for finite lattices.
trait CliLattice: SymbolicIdeals {
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn labels(&self) -> Option<Vec<String>> {
        None
    }
}

macro_rules! json_literals {
    ($($t:ty),*) => {$(
        impl CliLattice for $t {
            fn parse(&self, s: &str) -> Result<Self::Elem> {
                let x = parse_elem(s)?;
                self.validate(&x)?;
                Ok(x)
            }
        }
    )*};
}
json_literals!(ZGrid, NGrid, BFin);

impl CliLattice for FiniteAdapter {
    fn parse(&self, s: &str) -> Result<usize> {
        let l = self.lattice();
        let t = s.trim();
        (0..l.len())
            .find(|&i| l.label(i) == t)
            .or_else(|| t.parse::<usize>().ok().filter(|&i| i < l.len()))
            .ok_or_else(|| Error::Parse(format!("{t:?} is not an element of {}", self.name())))
    }

    fn labels(&self) -> Option<Vec<String>> {
        let l = self.lattice();
        Some((0..l.len()).map(|i| l.label(i)).collect())
    }
}

macro_rules! dispatch {
    ($named:expr, $l:ident => $body:expr) => {
        match $named {
            Named::Z($l) => $body,
            Named::N($l) => $body,
            Named::B($l) => $body,
            Named::F($l) => $body,
        }
    };
}

fn split_covering(s: &str) -> Result<(String, String)> {
    let parts: Vec<&str> = s.splitn(2, ['<', '⋖']).collect();
    match parts.as_slice() {
        [a, b] => Ok((a.to_string(), b.to_string())),
        _ => Err(Error::Parse(format!("covering {s:?} must look like x<y"))),
    }
}

fn classify_named<L: CliLattice>(l: &L, covering: &str, budget: usize) -> Result<Value> {
    let (a, b) = split_covering(covering)?;
    let c = Covering::new(l, l.parse(&a)?, l.parse(&b)?)?;
    let mut v = classify_prime_symbolic(l, &c, budget)?.to_json();
    if let Some(labels) = l.labels() {
        v["labels"] = json!(labels);
    }
    Ok(v)
}

/// Splits positionals into an optional leading lattice name and `n` operands.
fn split_lattice(args: &[String], n: usize, plugin: bool) -> Result<(Option<&str>, &[String])> {
    match (args.len() - n, plugin) {
        (0, true) => Ok((None, args)),
        (1, false) => Ok((Some(args[0].as_str()), &args[1..])),
        (0, false) => Err(Error::Parse("missing lattice name (or --plugin)".into())),
        _ => Err(Error::Parse("give either a lattice name or --plugin, not both".into())),
    }
}

pub fn cmd_classify(lattice: Option<&str>, covering: &str, budget: usize, plugin: Option<&str>) -> Result<Value> {
    match (plugin, lattice) {
        (Some(path), _) => {
            let l = PluginLattice::open(path)?;
            let (a, b) = parse_covering(covering)?;
            let c = Covering::new(&l, a, b)?;
            Ok(classify_prime(&l, &c, budget)?.to_json())
        }
        (None, Some(name)) => dispatch!(named(name)?, l => classify_named(&l, covering, budget)),
        (None, None) => Err(Error::Parse("classify needs a lattice name or --plugin".into())),
    }
}

#[derive(Serialize)]
struct WindowJson<E> {
    lattice: String,
    bounds: (E, E),
    size: usize,
    elements: Vec<E>,
    rank: Vec<usize>,
    covers: Vec<(usize, usize)>,
    distributive: bool,
}

fn window_of<L: LocallyFiniteLattice + ?Sized>(l: &L, a: L::Elem, b: L::Elem, limit: usize) -> Result<Value> {
    let w = interval(l, &a, &b, limit)?;
    let mut covers = w.lattice().poset().covers().to_vec();
    covers.sort();
    Ok(serde_json::to_value(WindowJson {
        lattice: l.name(),
        bounds: (a, b),
        size: w.len(),
        elements: w.elements().to_vec(),
        rank: (0..w.len()).map(|i| w.rank(i)).collect(),
        covers,
        distributive: w.lattice().is_distributive(),
    })?)
}

pub fn cmd_window(lattice: Option<&str>, a: &str, b: &str, limit: usize, plugin: Option<&str>) -> Result<Value> {
    match (plugin, lattice) {
        (Some(path), _) => {
            let l = PluginLattice::open(path)?;
            window_of(&l, parse_elem(a)?, parse_elem(b)?, limit)
        }
        (None, Some(name)) => dispatch!(named(name)?, l => window_of(&l, l.parse(a)?, l.parse(b)?, limit)),
        (None, None) => Err(Error::Parse("window needs a lattice name or --plugin".into())),
    }
}

fn read_poset(path: &str) -> Result<Poset> {
    let text = fs::read_to_string(path)?;
    let j: PosetJson = serde_json::from_str(&text)?;
    Poset::from_json(&j)
}

/// A lattice by name, or the ideal lattice of a poset file.
fn finite_source(source: &str) -> Result<(FiniteLattice, Option<Poset>)> {
    match named_finite(source)? {
        Some(l) => Ok((l, None)),
        None => {
            let p = read_poset(source)?;
            Ok((p.ideal_lattice(DEFAULT_IDEAL_LIMIT)?, Some(p)))
        }
    }
}

pub fn cmd_components(source: &str, limit: usize) -> Result<Value> {
    let report = match named(source) {
        Ok(Named::Z(l)) => l.components(),
        Ok(Named::N(l)) => l.components(),
        Ok(Named::B(l)) => l.components(),
        Ok(Named::F(l)) => l.components(),
        Err(Error::UnsupportedLattice(_)) => components_finite(&read_poset(source)?, limit)?.report(),
        Err(e) => return Err(e),
    };
    Ok(serde_json::to_value(report)?)
}

pub fn cmd_birkhoff(source: &str) -> Result<Value> {
    let (l, _) = finite_source(source)?;
    let report = birkhoff_iso_check(&l)?;
    let b = Birkhoff::new(&l)?;
    let irreducibles: Vec<String> = b.irreducibles().iter().map(|&x| l.label(x)).collect();
    let mut v = serde_json::to_value(&report)?;
    v["irreducibles"] = json!(irreducibles);
    v["irreducibleOrder"] = serde_json::to_value(b.ji_poset().to_json())?;
    Ok(v)
}

pub fn cmd_dot(object: DotObject, source: &str, limit: usize) -> Result<String> {
    let (l, poset) = finite_source(source)?;
    match object {
        DotObject::Lattice => lattice_dot(&l, limit),
        DotObject::FilterLattice => filter_lattice_dot(&enumerate_filters(&l, DEFAULT_IDEAL_LIMIT)?, limit),
        DotObject::PrimePoset => prime_poset_dot(&l, &prime_poset(&l)?, limit),
        DotObject::IdealGraph => {
            let p = match poset {
                Some(p) => p,
                None => {
                    let b = Birkhoff::new(&l)?;
                    let labels = b.irreducibles().iter().map(|&x| l.label(x)).collect();
                    b.ji_poset().clone().with_labels(labels)
                }
            };
            ideal_graph_dot(&components_finite(&p, DEFAULT_IDEAL_LIMIT)?, limit)
        }
    }
}

pub fn cmd_gen(kind: GenKind, seed: u64, max_poset: usize, limit: usize) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = match kind {
        GenKind::Poset => random_poset(&mut rng, max_poset),
        GenKind::Lattice => {
            let l = random_distributive_lattice(&mut rng, max_poset, limit);
            Birkhoff::new(&l)?.ji_poset().clone()
        }
    };
    Ok(serde_json::to_value(p.to_json())?)
}

pub fn cmd_probe(lattice: &str, radii: &[i64], limit: usize) -> Result<Value> {
    let report = dispatch!(named(lattice)?, l => conjecture_probe(&l, radii, limit)?);
    Ok(serde_json::to_value(report)?)
}

pub fn cmd_verify(cfg: &SuiteConfig) -> (Value, bool) {
    let report = run_suite(cfg);
    let passed = report.passed;
    (serde_json::to_value(&report).expect("reports serialize"), passed)
}

fn emit(out: &OutArgs, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match &out.json {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Verify {
            seed,
            max_poset,
            instances,
            lattice_instances,
            cases,
            budget,
            radius,
            limit,
            inject_fault,
            out,
        } => {
            let cfg = SuiteConfig {
                seed,
                max_poset,
                instances,
                lattice_instances,
                cases,
                budget,
                radius,
                window_limit: limit,
                inject_fault,
                ..SuiteConfig::default()
            };
            let (v, passed) = cmd_verify(&cfg);
            emit(&out, &v)?;
            if passed {
                eprintln!("all {} checks passed", v["totalInstances"]);
                Ok(0)
            } else {
                eprintln!("FAILED {}", v["firstFailure"].as_str().unwrap_or("unknown"));
                Ok(1)
            }
        }
        Command::Classify {
            args,
            budget,
            plugin,
            out,
        } => {
            let (lattice, rest) = split_lattice(&args, 1, plugin.is_some())?;
            emit(&out, &cmd_classify(lattice, &rest[0], budget, plugin.as_deref())?)?;
            Ok(0)
        }
        Command::Window {
            args,
            limit,
            plugin,
            out,
        } => {
            let (lattice, rest) = split_lattice(&args, 2, plugin.is_some())?;
            emit(&out, &cmd_window(lattice, &rest[0], &rest[1], limit, plugin.as_deref())?)?;
            Ok(0)
        }
        Command::Components { source, limit, out } => {
            emit(&out, &cmd_components(&source, limit)?)?;
            Ok(0)
        }
        Command::Birkhoff { source, out } => {
            let v = cmd_birkhoff(&source)?;
            emit(&out, &v)?;
            Ok(if v["holds"].as_bool() == Some(true) { 0 } else { 1 })
        }
        Command::Dot { object, source, limit } => {
            io::stdout().write_all(cmd_dot(object, &source, limit)?.as_bytes())?;
            Ok(0)
        }
        Command::Gen {
            kind,
            seed,
            max_poset,
            limit,
            out,
        } => {
            emit(&out, &cmd_gen(kind, seed, max_poset, limit)?)?;
            Ok(0)
        }
        Command::Probe { lattice, radius, limit, out } => {
            emit(&out, &cmd_probe(&lattice, &radius, limit)?)?;
            Ok(0)
        }
        Command::Serve { lattice } => {
            let stdin = io::stdin().lock();
            let stdout = io::stdout().lock();
            dispatch!(named(&lattice)?, l => serve_plugin(&l, stdin, stdout)?);
            Ok(0)
        }
    }
}
