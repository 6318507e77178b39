//! Exhaustive search for vertex sets without a common opposite, with
//! classification, minimality and geometric-line verdicts.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bits::BitRow;
use crate::catalog::{is_geometric_line, Classification, Classifier, FamilyLabel};
use crate::error::{Error, Result};
use crate::forms::Family;
use crate::grassmann::{Ambient, GeometryKind, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    /// Target set size; the line size when `None`.
    pub size: Option<usize>,
    /// Worker threads; rayon's default when `None`.
    pub jobs: Option<usize>,
    pub witness_cap: usize,
    pub time_budget: Option<Duration>,
    /// Restrict to sets containing vertex 0. Only sound when the operator
    /// knows the automorphism group is transitive on vertices.
    pub symmetry: bool,
    pub check_theorem_b: bool,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig { size: None, jobs: None, witness_cap: 64, time_budget: None, symmetry: false, check_theorem_b: false }
    }
}

/// Raw output of the pruned search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Sorted index tuples of size `m` with no common opposite, in lexicographic order.
    pub blockers: Vec<Vec<usize>>,
    /// Smaller sets with no common opposite, found where the search pruned.
    pub violations: Vec<Vec<usize>>,
    pub nodes: u64,
    /// False when the time budget stopped the search.
    pub complete: bool,
}

struct Search<'a> {
    rows: &'a [BitRow],
    columns: &'a [BitRow],
    m: usize,
    stop: &'a AtomicBool,
    deadline: Option<Instant>,
    nodes: &'a AtomicU64,
}

#[derive(Default)]
struct Found {
    blockers: Vec<Vec<usize>>,
    violations: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn n(&self) -> usize {
        self.rows.len()
    }

    fn tick(&self, local: &mut u64) -> bool {
        *local += 1;
        if *local % 4096 == 0 {
            self.nodes.fetch_add(4096, Ordering::Relaxed);
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        self.stop.load(Ordering::Relaxed)
    }

    /// Extends `set` (whose surviving objects are `alive`) by vertices above its last.
    fn descend(&self, set: &mut Vec<usize>, alive: &BitRow, out: &mut Found, local: &mut u64) {
        if self.tick(local) {
            return;
        }
        let n = self.n();
        let last = *set.last().unwrap();
        if set.len() + 1 == self.m {
            self.last_level(set, alive, out);
            return;
        }
        // Sets that cannot reach size m are still walked so that every smaller
        // blocking set is reported.
        for v in last + 1..n {
            let next = alive.and(&self.rows[v]);
            set.push(v);
            if next.is_empty() {
                out.violations.push(set.clone());
            } else {
                self.descend(set, &next, out, local);
            }
            set.pop();
        }
    }

    /// Final vertices `v` with `alive ∩ opp(v) = ∅`.
    fn last_level(&self, set: &mut Vec<usize>, alive: &BitRow, out: &mut Found) {
        let n = self.n();
        let last = *set.last().unwrap();
        if last + 1 >= n {
            return;
        }
        let mut cand = BitRow::full(n);
        cand.clear_through(last);
        if alive.count() < n - last {
            for o in alive.iter() {
                cand = cand.and_not(&self.columns[o]);
                if cand.is_empty() {
                    return;
                }
            }
        } else {
            for v in cand.to_vec() {
                if !alive.is_disjoint(&self.rows[v]) {
                    cand.remove(v);
                }
            }
        }
        for v in cand.iter() {
            let mut t = set.clone();
            t.push(v);
            out.blockers.push(t);
        }
    }

    fn branch(&self, first: usize) -> Found {
        let mut out = Found::default();
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop.store(true, Ordering::Relaxed);
        }
        if self.stop.load(Ordering::Relaxed) {
            return out;
        }
        let mut local = 0u64;
        let alive = self.rows[first].clone();
        let mut set = vec![first];
        if alive.is_empty() {
            if self.m == 1 {
                out.blockers.push(set);
            } else {
                out.violations.push(set);
            }
        } else if self.m > 1 {
            self.descend(&mut set, &alive, &mut out, &mut local);
        }
        self.nodes.fetch_add(local % 4096, Ordering::Relaxed);
        out
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Pruned depth-first search over a relation given by per-vertex rows and
/// per-object columns. Sets are extended only by larger indices and each
/// branch keeps the objects opposite all members so far.
pub fn search(rows: &[BitRow], columns: &[BitRow], m: usize, cfg: &CensusConfig) -> Result<SearchResult> {
    let n = rows.len();
    if m == 0 || n == 0 {
        return Ok(SearchResult { blockers: Vec::new(), violations: Vec::new(), nodes: 0, complete: true });
    }
    let stop = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let deadline = cfg.time_budget.map(|d| Instant::now() + d);
    let s = Search { rows, columns, m, stop: &stop, deadline, nodes: &nodes };
    let firsts: Vec<usize> = if cfg.symmetry { vec![0] } else { (0..n).collect() };
    let parts: Vec<Found> = with_pool(cfg.jobs, || firsts.par_iter().map(|&v| s.branch(v)).collect())?;
    let mut blockers = Vec::new();
    let mut violations = Vec::new();
    for p in parts {
        blockers.extend(p.blockers);
        violations.extend(p.violations);
    }
    blockers.sort();
    violations.sort();
    Ok(SearchResult { blockers, violations, nodes: nodes.load(Ordering::Relaxed), complete: !stop.load(Ordering::Relaxed) })
}

/// All `m`-sets of vertices with no common opposite object.
pub fn find_blockers(inst: &Instance, m: usize, cfg: &CensusConfig) -> Result<SearchResult> {
    let opp = &inst.opposition;
    let columns: Vec<BitRow> = (0..opp.num_objects()).map(|o| opp.column(o).clone()).collect();
    search(opp.rows(), &columns, m, cfg)
}

/// Every `m`-subset, tested from scratch without pruning.
pub fn naive_blockers(rows: &[BitRow], num_objects: usize, m: usize) -> Vec<Vec<usize>> {
    let n = rows.len();
    if m == 0 || m > n {
        return Vec::new();
    }
    (0..=n - m)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let mut idx: Vec<usize> = (first..first + m).collect();
            loop {
                let mut acc = BitRow::full(num_objects);
                for &v in &idx {
                    acc.and_assign(&rows[v]);
                }
                if acc.is_empty() {
                    found.push(idx.clone());
                }
                // Next combination with the first entry fixed.
                let mut j = m;
                loop {
                    if j == 1 {
                        return found;
                    }
                    j -= 1;
                    if idx[j] < n - m + j {
                        idx[j] += 1;
                        for k in j + 1..m {
                            idx[k] = idx[k - 1] + 1;
                        }
                        break;
                    }
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityVerdict {
    /// Largest size checked: all sets up to this size admit a common opposite.
    pub size: usize,
    pub verified: bool,
    pub counterexample: Option<Vec<usize>>,
    pub complete: bool,
}

/// Checks that every set of at most `s_line` vertices admits a common opposite.
pub fn verify_minimality(inst: &Instance, s_line: usize, cfg: &CensusConfig) -> Result<MinimalityVerdict> {
    let r = find_blockers(inst, s_line, cfg)?;
    let counterexample = r.violations.first().or(r.blockers.first()).cloned();
    Ok(MinimalityVerdict { size: s_line, verified: counterexample.is_none() && r.complete, counterexample, complete: r.complete })
}

/// Parameters of the geometry a census ran on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryInfo {
    pub family: Option<Family>,
    pub kind: GeometryKind,
    pub proj_dim: usize,
    pub q: usize,
    pub rank: usize,
    pub order: Option<(usize, usize)>,
    pub type_index: usize,
    pub line_size: usize,
    pub num_vertices: usize,
    pub num_objects: usize,
}

impl GeometryInfo {
    pub fn of(inst: &Instance) -> GeometryInfo {
        let g = &inst.geometry;
        let (family, proj_dim, q, rank, order) = match &inst.ambient {
            Ambient::Projective(p) => (None, p.proj_dim(), p.field().order(), p.proj_dim(), None),
            Ambient::Polar(p) => (Some(p.form().family()), p.form().n() - 1, p.field().order(), p.rank(), Some(p.order())),
        };
        GeometryInfo {
            family,
            kind: g.kind().clone(),
            proj_dim,
            q,
            rank,
            order,
            type_index: g.type_index(),
            line_size: g.line_size(),
            num_vertices: g.num_vertices(),
            num_objects: inst.opposition.num_objects(),
        }
    }

    /// Settings where ovoid and spread families are not geometric lines: small
    /// Hermitian spaces at type `r - 1` and elliptic quadrics at type `r`, with
    /// the line size odd (so `s` even).
    pub fn is_exceptional(&self) -> bool {
        let s_even = self.line_size % 2 == 1;
        let case = match self.family {
            Some(Family::Hermitian) => self.proj_dim % 2 == 1 && self.type_index + 1 == self.rank,
            Some(Family::Elliptic) => self.type_index == self.rank,
            _ => false,
        };
        s_even && case
    }
}

/// A reported member set with its classification evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub members: Vec<usize>,
    pub classification: Classification,
    pub geometric_line: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub label: FamilyLabel,
    pub count: u64,
    /// Count scaled to the whole geometry under the symmetry restriction.
    pub scaled_count: Option<u64>,
    pub geometric_lines: Option<u64>,
    pub witnesses: Vec<WitnessRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBVerdict {
    pub ok: bool,
    pub checked: u64,
    /// Families accepted as non-geometric because the setting is exceptional.
    pub exceptions: Vec<(FamilyLabel, u64)>,
    pub violations: Vec<(Vec<usize>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub geometry: GeometryInfo,
    pub size: usize,
    pub symmetry: bool,
    pub families: Vec<FamilyReport>,
    pub total: u64,
    pub minimality: MinimalityVerdict,
    /// Smaller sets without common opposite (expected none), capped.
    pub violations: Vec<Vec<usize>>,
    /// Blockers whose common-opposite set did not re-check as empty.
    pub unsound: u64,
    pub theorem_b: Option<TheoremBVerdict>,
    pub nodes: u64,
    pub complete: bool,
    pub elapsed: Duration,
}

impl CensusReport {
    pub fn count(&self, label: FamilyLabel) -> u64 {
        self.families.iter().find(|f| f.label == label).map_or(0, |f| f.count)
    }

    pub fn labels(&self) -> Vec<FamilyLabel> {
        self.families.iter().map(|f| f.label).collect()
    }

    pub fn unclassified(&self) -> u64 {
        self.count(FamilyLabel::Unclassified)
    }

    /// Every blocker classified, minimality holds and, if checked, the
    /// geometric-line verdict agrees.
    pub fn passes(&self) -> bool {
        self.complete
            && self.unclassified() == 0
            && self.unsound == 0
            && self.minimality.verified
            && self.theorem_b.as_ref().is_none_or(|b| b.ok)
    }
}

/// Full census output: the report plus every blocker and its classification.
#[derive(Clone, Debug)]
pub struct Census {
    pub report: CensusReport,
    pub blockers: Vec<Vec<usize>>,
    pub classifications: Vec<Classification>,
}

/// Geometric-line verdicts against the family predictions: line families must
/// be geometric lines; ovoid and spread families must not be, and may only
/// occur in the exceptional settings.
pub fn verify_theorem_b(inst: &Instance, blockers: &[Vec<usize>], classes: &[Classification]) -> TheoremBVerdict {
    let info = GeometryInfo::of(inst);
    let geo: Vec<bool> = blockers.par_iter().map(|t| is_geometric_line(&inst.opposition, t)).collect();
    theorem_b_from(&info, blockers, classes, &geo)
}

fn theorem_b_from(info: &GeometryInfo, blockers: &[Vec<usize>], classes: &[Classification], geo: &[bool]) -> TheoremBVerdict {
    let mut exceptions: BTreeMap<FamilyLabel, u64> = BTreeMap::new();
    let mut violations = Vec::new();
    for ((t, c), &g) in blockers.iter().zip(classes).zip(geo) {
        let label = c.label;
        if label == FamilyLabel::Unclassified {
            violations.push((t.clone(), "unclassified".to_string()));
        } else if label.is_line_family() {
            if !g {
                violations.push((t.clone(), format!("{label} is not a geometric line")));
            }
        } else if !info.is_exceptional() {
            violations.push((t.clone(), format!("{label} outside the exceptional settings")));
        } else if g {
            violations.push((t.clone(), format!("{label} is a geometric line")));
        } else {
            *exceptions.entry(label).or_default() += 1;
        }
    }
    TheoremBVerdict {
        ok: violations.is_empty(),
        checked: blockers.len() as u64,
        exceptions: exceptions.into_iter().collect(),
        violations,
    }
}

/// Runs the search, classifies every blocker and assembles the report.
pub fn run_census(inst: &Instance, cfg: &CensusConfig) -> Result<Census> {
    let start = Instant::now();
    let info = GeometryInfo::of(inst);
    let m = cfg.size.unwrap_or(info.line_size);
    if m < 2 {
        return Err(Error::InvalidParameter(format!("census size must be at least 2, got {m}")));
    }
    let found = find_blockers(inst, m, cfg)?;
    let classifier = Classifier::new(inst);
    let (classes, sound, geo) = with_pool(cfg.jobs, || {
        let classes: Vec<Classification> = found.blockers.par_iter().map(|t| classifier.classify(t)).collect();
        let sound = found.blockers.par_iter().filter(|t| inst.opposition.common_opposites(t).is_empty()).count();
        let geo: Option<Vec<bool>> = cfg
            .check_theorem_b
            .then(|| found.blockers.par_iter().map(|t| is_geometric_line(&inst.opposition, t)).collect());
        (classes, sound, geo)
    })?;

    let scale = |count: u64| -> Option<u64> {
        cfg.symmetry.then(|| count * info.num_vertices as u64 / m as u64)
    };
    let mut families: BTreeMap<FamilyLabel, FamilyReport> = BTreeMap::new();
    for (k, (t, c)) in found.blockers.iter().zip(&classes).enumerate() {
        let fam = families.entry(c.label).or_insert_with(|| FamilyReport {
            label: c.label,
            count: 0,
            scaled_count: None,
            geometric_lines: geo.as_ref().map(|_| 0),
            witnesses: Vec::new(),
        });
        fam.count += 1;
        let g = geo.as_ref().map(|g| g[k]);
        if g == Some(true) {
            *fam.geometric_lines.as_mut().unwrap() += 1;
        }
        if fam.witnesses.len() < cfg.witness_cap {
            fam.witnesses.push(WitnessRecord { members: t.clone(), classification: c.clone(), geometric_line: g });
        }
    }
    for fam in families.values_mut() {
        fam.scaled_count = scale(fam.count);
    }
    let theorem_b = geo.as_ref().map(|g| theorem_b_from(&info, &found.blockers, &classes, g));
    let counterexample = found.violations.first().cloned();
    let minimality = MinimalityVerdict {
        size: m - 1,
        verified: counterexample.is_none() && found.complete,
        counterexample,
        complete: found.complete,
    };
    let report = CensusReport {
        geometry: info,
        size: m,
        symmetry: cfg.symmetry,
        total: found.blockers.len() as u64,
        families: families.into_values().collect(),
        minimality,
        violations: found.violations.iter().take(cfg.witness_cap).cloned().collect(),
        unsound: (found.blockers.len() - sound) as u64,
        theorem_b,
        nodes: found.nodes,
        complete: found.complete,
        elapsed: start.elapsed(),
    };
    Ok(Census { report, blockers: found.blockers, classifications: classes })
}
