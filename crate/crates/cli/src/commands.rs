//! Subcommands and their argument definitions.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use geomcensus::catalog::{is_geometric_line, Classifier};
use geomcensus::census::{run_census, CensusConfig};
use geomcensus::grassmann::Instance;
use serde::Serialize;

use crate::cache::{self, Origin};
use crate::error::{exit, CliError, CliResult};
use crate::manifest::{run_suite, EntryStatus, Manifest, SuiteOptions};
use crate::report::{self, report_doc, SubspaceDoc, Verdict};
use crate::spec::GeometrySpec;

pub const CACHE_ENV: &str = "GEOMCENSUS_CACHE";
pub const DEFAULT_CACHE: &str = ".geomcensus-cache";
pub const DEFAULT_MAX_VERTICES: u128 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "geomcensus", version, about = "Blocking-set censuses in finite classical geometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a geometry and store it in the cache.
    Build(BuildArgs),
    /// Enumerate and classify all vertex sets of the given size without a common opposite.
    Census(CensusArgs),
    /// Classify one vertex set.
    Classify(ClassifyArgs),
    /// Run every census listed in a TOML manifest.
    VerifySuite(SuiteArgs),
    /// Inspect or clear the geometry cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// Geometry, e.g. "W(3,2)", "H(3,4) i=1" or "Q+(5,2) halfspin:A".
    pub spec: String,
    /// Vertex type (vector dimension of the vertices).
    #[arg(long = "type")]
    pub type_index: Option<usize>,
    #[command(flatten)]
    pub store: StoreArgs,
}

#[derive(Debug, Args)]
pub struct StoreArgs {
    /// Cache directory.
    #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE)]
    pub cache: PathBuf,
    /// Build in memory without touching the cache.
    #[arg(long)]
    pub no_cache: bool,
    /// Refuse geometries with more estimated vertices than this.
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: u128,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Set size; defaults to the line size.
    #[arg(long)]
    pub size: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Witnesses kept per family.
    #[arg(long, default_value_t = 64)]
    pub witness_cap: usize,
    /// Compare each set with the geometric-line predicate.
    #[arg(long)]
    pub check_theorem_b: bool,
    /// Only search sets containing vertex 0 and scale counts; valid only when
    /// the automorphism group is known to be vertex-transitive.
    #[arg(long)]
    pub symmetry: bool,
    /// Seconds before the search stops and reports partial counts.
    #[arg(long)]
    pub time_budget: Option<f64>,
    /// JSON report path; the CSV table is written next to it. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Vertex indices, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub members: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    pub manifest: PathBuf,
    /// Summary JSON path; defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub store: StoreArgs,
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    /// List cache entries.
    Ls {
        #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE)]
        cache: PathBuf,
    },
    /// Remove the entries for a spec, or everything with --all.
    Rm {
        spec: Option<String>,
        #[arg(long, conflicts_with = "spec")]
        all: bool,
        #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE)]
        cache: PathBuf,
    },
}

fn write_file(path: &Path, data: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, data).map_err(|e| CliError::io(path, e))
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::io("<output>", e)
}

fn obtain(g: &GeometryArgs) -> CliResult<(GeometrySpec, Instance, Option<(PathBuf, Origin)>)> {
    let spec = GeometrySpec::parse(&g.spec)?.with_type(g.type_index)?;
    if g.store.no_cache {
        let inst = spec.build(g.store.max_vertices)?;
        return Ok((spec, inst, None));
    }
    let (inst, path, origin) = cache::load_or_build(&g.store.cache, &spec, g.store.max_vertices)?;
    Ok((spec, inst, Some((path, origin))))
}

#[derive(Serialize)]
struct BuildDoc {
    spec: String,
    vertices: usize,
    lines: usize,
    line_size: usize,
    objects: usize,
    order: Option<(usize, usize)>,
    cache: Option<PathBuf>,
    origin: Option<&'static str>,
}

pub fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (spec, inst, stored) = obtain(&a.geometry)?;
    let info = geomcensus::census::GeometryInfo::of(&inst);
    let doc = BuildDoc {
        spec: spec.to_string(),
        vertices: info.num_vertices,
        lines: inst.geometry.lines().len(),
        line_size: info.line_size,
        objects: info.num_objects,
        order: info.order,
        origin: stored.as_ref().map(|(_, o)| match o {
            Origin::Built => "built",
            Origin::Cached => "cached",
            Origin::Rebuilt => "rebuilt",
        }),
        cache: stored.map(|(p, _)| p),
    };
    out.write_all(report::to_json(&doc)?.as_bytes()).map_err(io_err)?;
    Ok(exit::PASS)
}

pub fn census_config(a: &CensusArgs) -> CensusConfig {
    CensusConfig {
        size: a.size,
        jobs: a.jobs,
        witness_cap: a.witness_cap,
        time_budget: a.time_budget.map(Duration::from_secs_f64),
        symmetry: a.symmetry,
        check_theorem_b: a.check_theorem_b,
    }
}

pub fn cmd_census(a: &CensusArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    if a.time_budget.is_some_and(|t| !t.is_finite() || t < 0.0) {
        return Err(CliError::Usage("--time-budget must be a non-negative number of seconds".into()));
    }
    let (spec, inst, _) = obtain(&a.geometry)?;
    let cfg = census_config(a);
    let census = run_census(&inst, &cfg)?;
    let report = &census.report;
    let doc = report_doc(&spec, &inst, &cfg, report);
    let json = report::to_json(&doc)?;
    match &a.out {
        Some(path) => {
            write_file(path, json.as_bytes())?;
            let mut csv = Vec::new();
            report::write_csv(&mut csv, report)?;
            write_file(&path.with_extension("csv"), &csv)?;
        }
        None => out.write_all(json.as_bytes()).map_err(io_err)?,
    }
    let verdict = Verdict::of(report);
    let summary: Vec<String> = report.families.iter().map(|f| format!("{}:{}", f.label, f.count)).collect();
    let _ = writeln!(err, "{spec} size {}: {} [{}]", report.size, summary.join(", "), verdict_text(verdict));
    if verdict == Verdict::Violation {
        if report.unclassified() > 0 {
            let _ = writeln!(err, "  {} unclassified sets", report.unclassified());
        }
        if let Some(c) = &report.minimality.counterexample {
            let _ = writeln!(err, "  smaller set without common opposite: {c:?}");
        }
        if let Some((t, why)) = report.theorem_b.as_ref().and_then(|b| b.violations.first()) {
            let _ = writeln!(err, "  geometric-line check: {t:?} {why}");
        }
    }
    Ok(verdict.exit_code())
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Violation => "THEOREM VIOLATION",
        Verdict::BudgetExceeded => "budget exceeded, partial",
    }
}

#[derive(Serialize)]
struct ClassifyDoc {
    spec: String,
    members: Vec<usize>,
    member_subspaces: Vec<SubspaceDoc>,
    label: String,
    common: Option<SubspaceDoc>,
    residue_order: Option<(usize, usize)>,
    transversals: Option<usize>,
    subgq_points: Option<usize>,
    subgq_order: Option<(usize, usize)>,
    all_matches: Vec<String>,
    common_opposites: usize,
    geometric_line: bool,
}

pub fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (spec, inst, _) = obtain(&a.geometry)?;
    let n = inst.geometry.num_vertices();
    let mut members = a.members.clone();
    members.sort_unstable();
    members.dedup();
    if let Some(&bad) = members.iter().find(|&&v| v >= n) {
        return Err(CliError::Usage(format!("vertex {bad} out of range; {spec} has {n} vertices")));
    }
    let classifier = Classifier::new(&inst);
    let c = classifier.classify(&members);
    let doc = ClassifyDoc {
        spec: spec.to_string(),
        member_subspaces: members.iter().map(|&v| SubspaceDoc::of(&inst.geometry.vertices()[v].space)).collect(),
        label: c.label.name().to_string(),
        common: c.witness.common.as_ref().map(SubspaceDoc::of),
        residue_order: c.witness.residue_order,
        transversals: c.witness.transversals,
        subgq_points: c.witness.subgq_points,
        subgq_order: c.witness.subgq_order,
        all_matches: classifier.all_matches(&members).iter().map(|m| m.label.name().to_string()).collect(),
        common_opposites: inst.opposition.common_opposites(&members).count(),
        geometric_line: is_geometric_line(&inst.opposition, &members),
        members,
    };
    out.write_all(report::to_json(&doc)?.as_bytes()).map_err(io_err)?;
    Ok(exit::PASS)
}

pub fn cmd_verify_suite(a: &SuiteArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let manifest = Manifest::load(&a.manifest)?;
    let opts = SuiteOptions {
        cache_dir: (!a.store.no_cache).then_some(a.store.cache.as_path()),
        max_vertices: a.store.max_vertices,
        jobs: a.jobs,
    };
    let summary = run_suite(&manifest, &opts, |r| {
        let status = match r.status {
            EntryStatus::Pass => "PASS",
            EntryStatus::Fail => "FAIL",
            EntryStatus::Refused => "REFUSED",
            EntryStatus::BudgetExceeded => "BUDGET",
        };
        let _ = writeln!(err, "{status} {} {} ({:.0} ms)", r.name, r.spec, r.elapsed_ms);
        for f in &r.failures {
            let _ = writeln!(err, "    {f}");
        }
    });
    let json = report::to_json(&summary)?;
    match &a.out {
        Some(path) => write_file(path, json.as_bytes())?,
        None => out.write_all(json.as_bytes()).map_err(io_err)?,
    }
    Ok(summary.exit_code())
}

pub fn cmd_cache(c: &CacheCommand, out: &mut dyn Write) -> CliResult<i32> {
    match c {
        CacheCommand::Ls { cache: dir } => {
            for e in cache::list(dir)? {
                let line = match &e.meta {
                    Ok(m) => format!(
                        "{}\t{}\t{} vertices\t{} bytes\tversion {}",
                        e.path.display(),
                        m.spec,
                        m.num_vertices,
                        e.bytes,
                        m.code_version
                    ),
                    Err(why) => format!("{}\tunreadable: {why}", e.path.display()),
                };
                writeln!(out, "{line}").map_err(io_err)?;
            }
        }
        CacheCommand::Rm { spec, all, cache: dir } => {
            let spec = match (spec, all) {
                (Some(s), _) => Some(GeometrySpec::parse(s)?),
                (None, true) => None,
                (None, false) => return Err(CliError::Usage("cache rm needs a spec or --all".into())),
            };
            for p in cache::remove(dir, spec.as_ref())? {
                writeln!(out, "removed {}", p.display()).map_err(io_err)?;
            }
        }
    }
    Ok(exit::PASS)
}

/// Runs a parsed command line; errors print to `err` and map to exit code 2.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Census(a) => cmd_census(a, out, err),
        Command::Classify(a) => cmd_classify(a, out),
        Command::VerifySuite(a) => cmd_verify_suite(a, out, err),
        Command::Cache(c) => cmd_cache(c, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit::USAGE
        }
    }
}
