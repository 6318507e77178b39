//! Census suites described in TOML.
//!
//! ```toml
//! [[instance]]
//! name = "fano"
//! spec = "PG(2,2)"
//! type = 1
//! size = 3
//! check_theorem_b = true
//! naive_oracle = true
//! time_budget = 60
//! [instance.expect]
//! GrassmannLine = 7
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use geomcensus::catalog::FamilyLabel;
use geomcensus::census::{naive_blockers, run_census, CensusConfig};
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::error::{CliError, CliResult};
use crate::spec::GeometrySpec;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, rename = "instance")]
    pub instances: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: Option<String>,
    pub spec: String,
    #[serde(rename = "type")]
    pub type_index: Option<usize>,
    pub size: Option<usize>,
    /// Expected family counts; the census must find exactly these families.
    #[serde(default)]
    pub expect: BTreeMap<String, u64>,
    /// Expected counts scaled to the whole geometry, under `symmetry`.
    #[serde(default)]
    pub expect_scaled: BTreeMap<String, u64>,
    #[serde(default)]
    pub check_theorem_b: bool,
    /// Compare with the unpruned enumerator.
    #[serde(default)]
    pub naive_oracle: bool,
    #[serde(default)]
    pub symmetry: bool,
    /// Seconds.
    pub time_budget: Option<f64>,
    pub witness_cap: Option<usize>,
}

impl Manifest {
    pub fn parse(path: &Path, text: &str) -> CliResult<Manifest> {
        let m: Manifest = toml::from_str(text).map_err(|e| CliError::Manifest { path: path.into(), reason: e.to_string() })?;
        for (k, e) in m.instances.iter().enumerate() {
            for label in e.expect.keys().chain(e.expect_scaled.keys()) {
                if FamilyLabel::from_name(label).is_none() {
                    return Err(CliError::Manifest {
                        path: path.into(),
                        reason: format!("instance {}: unknown family {label:?}", k + 1),
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> CliResult<Manifest> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Manifest::parse(path, &text)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub spec: String,
    pub status: EntryStatus,
    pub failures: Vec<String>,
    pub counts: BTreeMap<String, u64>,
    pub scaled_counts: BTreeMap<String, u64>,
    pub naive_checked: Option<bool>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Pass,
    Fail,
    Refused,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub schema_version: u32,
    pub entries: Vec<EntryResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        use crate::error::exit;
        if self.ok() {
            exit::PASS
        } else if self.entries.iter().any(|e| e.status == EntryStatus::Refused) {
            exit::USAGE
        } else if self.entries.iter().all(|e| matches!(e.status, EntryStatus::Pass | EntryStatus::BudgetExceeded)) {
            exit::BUDGET
        } else {
            exit::VIOLATION
        }
    }
}

/// Largest number of candidate sets the naive comparison will enumerate.
pub const NAIVE_LIMIT: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

pub struct SuiteOptions<'a> {
    pub cache_dir: Option<&'a Path>,
    pub max_vertices: u128,
    pub jobs: Option<usize>,
}

pub fn run_entry(k: usize, e: &ManifestEntry, opts: &SuiteOptions) -> EntryResult {
    let start = Instant::now();
    let mut res = EntryResult {
        name: e.name.clone().unwrap_or_else(|| format!("#{}", k + 1)),
        spec: e.spec.clone(),
        status: EntryStatus::Pass,
        failures: Vec::new(),
        counts: BTreeMap::new(),
        scaled_counts: BTreeMap::new(),
        naive_checked: None,
        elapsed_ms: 0.0,
    };
    let built = GeometrySpec::parse(&e.spec).and_then(|s| s.with_type(e.type_index)).and_then(|s| {
        let inst = match opts.cache_dir {
            Some(dir) => cache::load_or_build(dir, &s, opts.max_vertices)?.0,
            None => s.build(opts.max_vertices)?,
        };
        Ok((s, inst))
    });
    let (spec, inst) = match built {
        Ok(x) => x,
        Err(err) => {
            res.status = EntryStatus::Refused;
            res.failures.push(err.to_string());
            res.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
            return res;
        }
    };
    res.spec = spec.to_string();
    let cfg = CensusConfig {
        size: e.size,
        jobs: opts.jobs,
        witness_cap: e.witness_cap.unwrap_or(64),
        time_budget: e.time_budget.map(Duration::from_secs_f64),
        symmetry: e.symmetry,
        check_theorem_b: e.check_theorem_b,
    };
    let census = match run_census(&inst, &cfg) {
        Ok(c) => c,
        Err(err) => {
            res.status = EntryStatus::Refused;
            res.failures.push(err.to_string());
            return res;
        }
    };
    let report = &census.report;
    for f in &report.families {
        res.counts.insert(f.label.name().to_string(), f.count);
        if let Some(sc) = f.scaled_count {
            res.scaled_counts.insert(f.label.name().to_string(), sc);
        }
    }
    if !report.complete {
        res.status = EntryStatus::BudgetExceeded;
        res.failures.push("time budget exhausted; counts are partial".into());
        res.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
        return res;
    }
    let mut fail = |msg: String| res.failures.push(msg);
    if report.unclassified() > 0 {
        fail(format!("{} unclassified blockers", report.unclassified()));
    }
    if report.unsound > 0 {
        fail(format!("{} blockers failed the soundness recheck", report.unsound));
    }
    if !report.minimality.verified {
        fail(format!("minimality failed: {:?}", report.minimality.counterexample));
    }
    if let Some(b) = &report.theorem_b {
        if !b.ok {
            fail(format!("geometric-line check failed: {:?}", b.violations.first()));
        }
    }
    let check = |want: &BTreeMap<String, u64>, got: &BTreeMap<String, u64>, what: &str, out: &mut Vec<String>| {
        if want.is_empty() {
            return;
        }
        for (label, &n) in want {
            match got.get(label) {
                Some(&m) if m == n => {}
                Some(&m) => out.push(format!("{what} {label}: expected {n}, found {m}")),
                None => out.push(format!("{what} {label}: expected {n}, found none")),
            }
        }
        for label in got.keys().filter(|l| !want.contains_key(*l)) {
            out.push(format!("unexpected family {label} ({what} {})", got[label]));
        }
    };
    check(&e.expect, &res.counts, "count", &mut res.failures);
    check(&e.expect_scaled, &res.scaled_counts, "scaled count", &mut res.failures);
    if e.naive_oracle {
        let n = inst.geometry.num_vertices();
        if binomial(n, report.size) > NAIVE_LIMIT || cfg.symmetry {
            res.failures.push(format!("naive oracle requested but C({n},{}) exceeds {NAIVE_LIMIT}", report.size));
        } else {
            let naive = naive_blockers(inst.opposition.rows(), inst.opposition.num_objects(), report.size);
            let same = naive == census.blockers;
            res.naive_checked = Some(same);
            if !same {
                res.failures.push(format!("naive enumerator found {} sets, pruned search {}", naive.len(), census.blockers.len()));
            }
        }
    }
    if !res.failures.is_empty() {
        res.status = EntryStatus::Fail;
    }
    res.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    res
}

pub fn run_suite(m: &Manifest, opts: &SuiteOptions, mut progress: impl FnMut(&EntryResult)) -> SuiteSummary {
    let mut entries = Vec::new();
    for (k, e) in m.instances.iter().enumerate() {
        let r = run_entry(k, e, opts);
        progress(&r);
        entries.push(r);
    }
    let passed = entries.iter().filter(|e| e.status == EntryStatus::Pass).count();
    SuiteSummary { schema_version: crate::report::SCHEMA_VERSION, failed: entries.len() - passed, passed, entries }
}
