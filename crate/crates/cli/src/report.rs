//! JSON and CSV renderings of census reports.

use std::io::Write;

use geomcensus::catalog::FamilyLabel;
use geomcensus::census::{CensusConfig, CensusReport, WitnessRecord};
use geomcensus::grassmann::{GeometryKind, Instance};
use geomcensus::linalg::Subspace;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;
use crate::spec::{class_name, GeometrySpec};

pub const SCHEMA_VERSION: u32 = 1;

/// Keys holding wall-clock data; everything else is deterministic.
pub const TIMING_KEYS: [&str; 1] = ["timing"];

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceDoc {
    pub dim: usize,
    /// Reduced echelon basis; entries are field element indices.
    pub basis: Vec<Vec<u8>>,
}

impl SubspaceDoc {
    pub fn of(s: &Subspace) -> SubspaceDoc {
        SubspaceDoc { dim: s.dim(), basis: s.basis().iter().map(|r| r.iter().map(|x| x.index() as u8).collect()).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryDoc {
    pub family: String,
    pub kind: String,
    pub proj_dim: usize,
    pub q: usize,
    pub rank: usize,
    pub order: Option<(usize, usize)>,
    #[serde(rename = "type")]
    pub type_index: usize,
    pub line_size: usize,
    pub vertices: usize,
    pub objects: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigDoc {
    pub size: usize,
    pub witness_cap: usize,
    pub symmetry: bool,
    pub check_theorem_b: bool,
    pub time_budget_secs: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessDoc {
    pub members: Vec<usize>,
    pub member_subspaces: Vec<SubspaceDoc>,
    pub common: Option<SubspaceDoc>,
    pub residue_order: Option<(usize, usize)>,
    pub transversals: Option<usize>,
    pub subgq_points: Option<usize>,
    pub subgq_order: Option<(usize, usize)>,
    /// Expected subquadrangle order from the quadrangle `(s, t)` the set lives
    /// in: `(s/t, t)` for ovoids and `(s, t/s)` for spreads.
    pub predicted_subgq_order: Option<(usize, usize)>,
    pub subgq_order_matches: Option<bool>,
    pub geometric_line: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyDoc {
    pub label: String,
    pub count: u64,
    pub scaled_count: Option<u64>,
    pub geometric_lines: Option<u64>,
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityDoc {
    pub size: usize,
    pub verified: bool,
    pub complete: bool,
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBDoc {
    pub ok: bool,
    pub checked: u64,
    pub exceptions: Vec<(String, u64)>,
    pub violations: Vec<(Vec<usize>, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchDoc {
    pub nodes: u64,
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimingDoc {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub tool_version: String,
    pub spec: String,
    pub verdict: Verdict,
    pub geometry: GeometryDoc,
    pub config: ConfigDoc,
    pub total: u64,
    pub unclassified: u64,
    pub unsound: u64,
    pub families: Vec<FamilyDoc>,
    pub minimality: MinimalityDoc,
    pub violations: Vec<Vec<usize>>,
    pub theorem_b: Option<TheoremBDoc>,
    pub search: SearchDoc,
    pub timing: TimingDoc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Violation,
    BudgetExceeded,
}

impl Verdict {
    pub fn of(report: &CensusReport) -> Verdict {
        if !report.complete {
            Verdict::BudgetExceeded
        } else if report.passes() {
            Verdict::Pass
        } else {
            Verdict::Violation
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => crate::error::exit::PASS,
            Verdict::Violation => crate::error::exit::VIOLATION,
            Verdict::BudgetExceeded => crate::error::exit::BUDGET,
        }
    }
}

fn kind_name(kind: &GeometryKind) -> String {
    match kind {
        GeometryKind::ProjectiveGrassmannian { .. } => "ProjectiveGrassmannian".into(),
        GeometryKind::PolarGrassmannian { .. } => "PolarGrassmannian".into(),
        GeometryKind::DualPolar => "DualPolar".into(),
        GeometryKind::HalfSpin { class } => format!("HalfSpin{}", class_name(*class)),
    }
}

/// Subquadrangle order implied by the label and the order of the quadrangle
/// the set was recognized in.
pub fn predicted_subgq_order(label: FamilyLabel, base: (usize, usize)) -> Option<(usize, usize)> {
    let (s, t) = base;
    match label {
        FamilyLabel::GQOvoidInSubGQ | FamilyLabel::OvoidInIdealSubGQ if s % t == 0 => Some((s / t, t)),
        FamilyLabel::GQSpreadInSubGQ | FamilyLabel::SpreadInSubGQ if t % s == 0 => Some((s, t / s)),
        _ => None,
    }
}

fn witness_doc(inst: &Instance, order: Option<(usize, usize)>, w: &WitnessRecord) -> WitnessDoc {
    let c = &w.classification;
    let base = c.witness.residue_order.or(order);
    let predicted = base.and_then(|b| predicted_subgq_order(c.label, b));
    WitnessDoc {
        members: w.members.clone(),
        member_subspaces: w.members.iter().map(|&v| SubspaceDoc::of(&inst.geometry.vertices()[v].space)).collect(),
        common: c.witness.common.as_ref().map(SubspaceDoc::of),
        residue_order: c.witness.residue_order,
        transversals: c.witness.transversals,
        subgq_points: c.witness.subgq_points,
        subgq_order: c.witness.subgq_order,
        predicted_subgq_order: predicted,
        subgq_order_matches: predicted.zip(c.witness.subgq_order).map(|(p, m)| p == m),
        geometric_line: w.geometric_line,
    }
}

pub fn report_doc(spec: &GeometrySpec, inst: &Instance, cfg: &CensusConfig, report: &CensusReport) -> ReportDoc {
    let g = &report.geometry;
    ReportDoc {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.to_string(),
        verdict: Verdict::of(report),
        geometry: GeometryDoc {
            family: spec.family.symbol().to_string(),
            kind: kind_name(&g.kind),
            proj_dim: g.proj_dim,
            q: g.q,
            rank: g.rank,
            order: g.order,
            type_index: g.type_index,
            line_size: g.line_size,
            vertices: g.num_vertices,
            objects: g.num_objects,
        },
        config: ConfigDoc {
            size: report.size,
            witness_cap: cfg.witness_cap,
            symmetry: cfg.symmetry,
            check_theorem_b: cfg.check_theorem_b,
            time_budget_secs: cfg.time_budget.map(|d| d.as_secs_f64()),
        },
        total: report.total,
        unclassified: report.unclassified(),
        unsound: report.unsound,
        families: report
            .families
            .iter()
            .map(|f| FamilyDoc {
                label: f.label.name().to_string(),
                count: f.count,
                scaled_count: f.scaled_count,
                geometric_lines: f.geometric_lines,
                witnesses: f.witnesses.iter().map(|w| witness_doc(inst, g.order, w)).collect(),
            })
            .collect(),
        minimality: MinimalityDoc {
            size: report.minimality.size,
            verified: report.minimality.verified,
            complete: report.minimality.complete,
            counterexample: report.minimality.counterexample.clone(),
        },
        violations: report.violations.clone(),
        theorem_b: report.theorem_b.as_ref().map(|b| TheoremBDoc {
            ok: b.ok,
            checked: b.checked,
            exceptions: b.exceptions.iter().map(|(l, n)| (l.name().to_string(), *n)).collect(),
            violations: b.violations.clone(),
        }),
        search: SearchDoc { nodes: report.nodes, complete: report.complete },
        timing: TimingDoc { elapsed_ms: report.elapsed.as_secs_f64() * 1000.0 },
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

/// The JSON value with timing fields removed, for comparisons.
pub fn without_timing(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        for k in TIMING_KEYS {
            map.remove(k);
        }
    }
    v
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    count: u64,
    scaled_count: Option<u64>,
    geometric_lines: Option<u64>,
}

pub fn write_csv<W: Write>(out: W, report: &CensusReport) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for f in &report.families {
        w.serialize(CsvRow {
            family: f.label.name(),
            count: f.count,
            scaled_count: f.scaled_count,
            geometric_lines: f.geometric_lines,
        })?;
    }
    w.flush().map_err(|e| crate::error::CliError::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use geomcensus::census::run_census;

    use super::*;

    fn run(spec: &str, cfg: &CensusConfig) -> (GeometrySpec, Instance, CensusReport) {
        let spec: GeometrySpec = spec.parse().unwrap();
        let inst = spec.build(100_000).unwrap();
        let report = run_census(&inst, cfg).unwrap().report;
        (spec, inst, report)
    }

    #[test]
    fn json_fields() {
        let cfg = CensusConfig { check_theorem_b: true, ..CensusConfig::default() };
        let (spec, inst, report) = run("W(3,2) i=1", &cfg);
        let v = serde_json::to_value(report_doc(&spec, &inst, &cfg, &report)).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["spec"], "W(3,2) i=1");
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["geometry"]["order"], serde_json::json!([2, 2]));
        assert_eq!(v["geometry"]["vertices"], 15);
        assert_eq!(v["total"], 35);
        let fams: Vec<(String, u64)> = v["families"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| (f["label"].as_str().unwrap().to_string(), f["count"].as_u64().unwrap()))
            .collect();
        assert_eq!(fams, vec![("GrassmannLine".into(), 15), ("HyperbolicLineInResidue".into(), 20)]);
        assert_eq!(v["families"][0]["witnesses"][0]["member_subspaces"][0]["dim"], 1);
        assert_eq!(v["theorem_b"]["ok"], true);
        assert!(v["timing"]["elapsed_ms"].is_number());
    }

    #[test]
    fn deterministic_modulo_timing() {
        let a = CensusConfig { jobs: Some(1), ..CensusConfig::default() };
        let b = CensusConfig { jobs: Some(4), ..CensusConfig::default() };
        let (spec, inst, ra) = run("Q(4,2) i=2", &a);
        let (_, _, rb) = run("Q(4,2) i=2", &b);
        let va = without_timing(serde_json::to_value(report_doc(&spec, &inst, &a, &ra)).unwrap());
        let vb = without_timing(serde_json::to_value(report_doc(&spec, &inst, &b, &rb)).unwrap());
        assert_eq!(to_json(&va).unwrap(), to_json(&vb).unwrap());
    }

    #[test]
    fn csv_table() {
        let cfg = CensusConfig::default();
        let (_, _, report) = run("W(3,2)", &cfg);
        let mut out = Vec::new();
        write_csv(&mut out, &report).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "family,count,scaled_count,geometric_lines\nGrassmannLine,15,,\nHyperbolicLineInResidue,20,,\n"
        );
    }

    #[test]
    fn spread_order_prediction() {
        let cfg = CensusConfig::default();
        let (spec, inst, report) = run("Q-(5,2) i=2", &cfg);
        let v = serde_json::to_value(report_doc(&spec, &inst, &cfg, &report)).unwrap();
        let spread = v["families"].as_array().unwrap().iter().find(|f| f["label"] == "GQSpreadInSubGQ").unwrap();
        for w in spread["witnesses"].as_array().unwrap() {
            assert_eq!(w["subgq_order"], serde_json::json!([2, 2]));
            assert_eq!(w["subgq_order_matches"], true);
        }
        assert_eq!(predicted_subgq_order(FamilyLabel::GQOvoidInSubGQ, (4, 2)), Some((2, 2)));
        assert_eq!(predicted_subgq_order(FamilyLabel::GrassmannLine, (4, 2)), None);
    }
}
