//! Recognizers for every family of vertex sets without a common opposite, and
//! the geometric-line predicate.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::forms::{Family, FormKind};
use crate::grassmann::{Ambient, GeometryKind, Instance, OppositionContext, PointLineGeometry};
use crate::linalg::Subspace;
use crate::spaces::{PolarSpace, ResidueMap};

/// Family labels, in the order the classifier tries them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyLabel {
    GrassmannLine,
    DualPolarLine,
    HalfSpinLine,
    HyperbolicLineInResidue,
    DualHyperbolicLineInResidue,
    OvoidInIdealSubGQ,
    SpreadInSubGQ,
    GQOvoidInSubGQ,
    GQSpreadInSubGQ,
    Unclassified,
}

impl FamilyLabel {
    pub const ALL: [FamilyLabel; 10] = [
        FamilyLabel::GrassmannLine,
        FamilyLabel::DualPolarLine,
        FamilyLabel::HalfSpinLine,
        FamilyLabel::HyperbolicLineInResidue,
        FamilyLabel::DualHyperbolicLineInResidue,
        FamilyLabel::OvoidInIdealSubGQ,
        FamilyLabel::SpreadInSubGQ,
        FamilyLabel::GQOvoidInSubGQ,
        FamilyLabel::GQSpreadInSubGQ,
        FamilyLabel::Unclassified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyLabel::GrassmannLine => "GrassmannLine",
            FamilyLabel::DualPolarLine => "DualPolarLine",
            FamilyLabel::HalfSpinLine => "HalfSpinLine",
            FamilyLabel::HyperbolicLineInResidue => "HyperbolicLineInResidue",
            FamilyLabel::DualHyperbolicLineInResidue => "DualHyperbolicLineInResidue",
            FamilyLabel::OvoidInIdealSubGQ => "OvoidInIdealSubGQ",
            FamilyLabel::SpreadInSubGQ => "SpreadInSubGQ",
            FamilyLabel::GQOvoidInSubGQ => "GQOvoidInSubGQ",
            FamilyLabel::GQSpreadInSubGQ => "GQSpreadInSubGQ",
            FamilyLabel::Unclassified => "Unclassified",
        }
    }

    pub fn from_name(s: &str) -> Option<FamilyLabel> {
        FamilyLabel::ALL.into_iter().find(|l| l.name() == s)
    }

    /// Line-like families; the rest are ovoids or spreads of subquadrangles.
    pub fn is_line_family(self) -> bool {
        matches!(
            self,
            FamilyLabel::GrassmannLine
                | FamilyLabel::DualPolarLine
                | FamilyLabel::HalfSpinLine
                | FamilyLabel::HyperbolicLineInResidue
                | FamilyLabel::DualHyperbolicLineInResidue
        )
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evidence attached to a classification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    /// Subspace shared by all members.
    pub common: Option<Subspace>,
    /// Order `(s, t)` of the residue the set was recognized in.
    pub residue_order: Option<(usize, usize)>,
    /// Number of transversals for reguli.
    pub transversals: Option<usize>,
    /// Point count and order of the subquadrangle, in the orientation of the
    /// quadrangle whose vertices the set consists of.
    pub subgq_points: Option<usize>,
    pub subgq_order: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub label: FamilyLabel,
    pub witness: Witness,
}

/// A finite generalized quadrangle given by its incidence.
#[derive(Clone, Debug)]
pub struct Quadrangle {
    lines: Vec<BitRow>,
    point_lines: Vec<Vec<usize>>,
    collinear: Vec<BitRow>,
    order: (usize, usize),
}

impl Quadrangle {
    /// Builds from point sets of the lines; `order` is read off the first
    /// line and the first point.
    pub fn from_lines(num_points: usize, lines: Vec<BitRow>) -> Quadrangle {
        let mut point_lines = vec![Vec::new(); num_points];
        for (li, l) in lines.iter().enumerate() {
            for p in l.iter() {
                point_lines[p].push(li);
            }
        }
        let collinear = (0..num_points)
            .map(|p| {
                let mut row = BitRow::from_indices(num_points, [p]);
                for &l in &point_lines[p] {
                    row.or_assign(&lines[l]);
                }
                row
            })
            .collect();
        let s = lines.first().map_or(0, |l| l.count().saturating_sub(1));
        let t = point_lines.first().map_or(0, |pl| pl.len().saturating_sub(1));
        Quadrangle { lines, point_lines, collinear, order: (s, t) }
    }

    pub fn from_polar(ps: &PolarSpace) -> Result<Quadrangle> {
        if ps.rank() != 2 {
            return Err(Error::InvalidParameter(format!("rank {} is not 2", ps.rank())));
        }
        Ok(Quadrangle::from_lines(ps.num_points(), ps.lines().iter().map(|l| l.points.clone()).collect()))
    }

    /// Points and lines interchanged.
    pub fn dual(&self) -> Quadrangle {
        let nl = self.lines.len();
        let lines = self.point_lines.iter().map(|pl| BitRow::from_indices(nl, pl.iter().copied())).collect();
        Quadrangle::from_lines(nl, lines)
    }

    pub fn num_points(&self) -> usize {
        self.point_lines.len()
    }

    pub fn lines(&self) -> &[BitRow] {
        &self.lines
    }

    pub fn collinear(&self, p: usize) -> &BitRow {
        &self.collinear[p]
    }

    pub fn order(&self) -> (usize, usize) {
        self.order
    }

    /// The closure `T ∪ {x1^⊥ ∩ x2^⊥}` of a pairwise non-collinear set, with
    /// the induced lines (ambient lines meeting it in at least two points).
    pub fn subgq_closure(&self, t: &[usize]) -> Result<SubQuadrangle> {
        for (a, &x) in t.iter().enumerate() {
            if let Some(&y) = t[a + 1..].iter().find(|&&y| self.collinear[x].contains(y)) {
                return Err(Error::Collinear(x, y));
            }
        }
        let mut points = BitRow::from_indices(self.num_points(), t.iter().copied());
        for (a, &x) in t.iter().enumerate() {
            for &y in &t[a + 1..] {
                points.or_assign(&self.collinear[x].and(&self.collinear[y]));
            }
        }
        let lines = self.lines.iter().map(|l| l.and(&points)).filter(|l| l.count() >= 2).collect();
        Ok(SubQuadrangle { points, lines })
    }

    /// Whether `t` is an ovoid of an ideal subquadrangle of order `(s', t)`
    /// with `s' t = s`; returns the subquadrangle's point count and order.
    pub fn ovoid_in_ideal_subgq(&self, t: &[usize]) -> Option<(usize, (usize, usize))> {
        if t.len() < 2 {
            return None;
        }
        let sub = self.subgq_closure(t).ok()?;
        let order = sub.audit(self).ok()?;
        let (s, tt) = self.order;
        if order.1 != tt || order.0 * tt != s {
            return None;
        }
        let tset = BitRow::from_indices(self.num_points(), t.iter().copied());
        if !sub.lines.iter().all(|l| l.intersection_count(&tset) == 1) {
            return None;
        }
        Some((sub.points.count(), order))
    }
}

/// A point set of a quadrangle with its induced lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubQuadrangle {
    pub points: BitRow,
    pub lines: Vec<BitRow>,
}

impl SubQuadrangle {
    /// Checks the quadrangle axioms on the induced structure and returns its order.
    pub fn audit(&self, ambient: &Quadrangle) -> std::result::Result<(usize, usize), String> {
        let first = self.lines.first().ok_or("no induced lines")?;
        let s = first.count() - 1;
        if let Some(l) = self.lines.iter().find(|l| l.count() != s + 1) {
            return Err(format!("induced line {l:?} does not have {} points", s + 1));
        }
        let mut t = None;
        for p in self.points.iter() {
            let through = self.lines.iter().filter(|l| l.contains(p)).count();
            if through < 2 {
                return Err(format!("point {p} is on {through} induced lines"));
            }
            match t {
                None => t = Some(through - 1),
                Some(t) if t + 1 != through => return Err(format!("point {p} is on {through} lines, expected {}", t + 1)),
                _ => {}
            }
            for l in &self.lines {
                if !l.contains(p) && ambient.collinear[p].intersection_count(l) != 1 {
                    return Err(format!("point {p} and induced line {l:?} violate the quadrangle axiom"));
                }
            }
        }
        Ok((s, t.unwrap()))
    }
}

/// Whether every opposite-type object is non-opposite to exactly one or to
/// all members of `t`.
pub fn is_geometric_line(opp: &OppositionContext, t: &[usize]) -> bool {
    let n = t.len();
    (0..opp.num_objects()).all(|o| {
        let non = t.iter().filter(|&&v| !opp.is_opposite(v, o)).count();
        non == 1 || non == n
    })
}

/// Whether `t` (sorted) is a line of the geometry.
pub fn is_grassmann_line(g: &PointLineGeometry, t: &[usize]) -> Result<bool> {
    if t.len() != g.line_size() {
        return Err(Error::DimensionMismatch(t.len(), g.line_size()));
    }
    let mut sorted = t.to_vec();
    sorted.sort_unstable();
    Ok(g.is_line(&sorted))
}

/// Residue of a singular subspace together with lazily built quadrangles.
#[derive(Debug)]
struct ResidueEntry {
    map: ResidueMap,
    quad: OnceLock<Option<Quadrangle>>,
    dual: OnceLock<Option<Quadrangle>>,
}

impl ResidueEntry {
    fn quadrangle(&self) -> Option<&Quadrangle> {
        self.quad.get_or_init(|| self.map.polar().and_then(|p| Quadrangle::from_polar(p).ok())).as_ref()
    }

    fn dual(&self) -> Option<&Quadrangle> {
        self.dual.get_or_init(|| self.quadrangle().map(Quadrangle::dual)).as_ref()
    }
}

/// Classifies vertex sets of one instance, caching residues by base subspace.
pub struct Classifier<'a> {
    inst: &'a Instance,
    residues: Mutex<HashMap<Subspace, Arc<ResidueEntry>>>,
    top: OnceLock<Option<(Quadrangle, Quadrangle)>>,
}

impl<'a> Classifier<'a> {
    pub fn new(inst: &'a Instance) -> Classifier<'a> {
        Classifier { inst, residues: Mutex::new(HashMap::new()), top: OnceLock::new() }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    fn polar(&self) -> Option<&PolarSpace> {
        self.inst.ambient.polar()
    }

    fn residue(&self, u: &Subspace) -> Option<Arc<ResidueEntry>> {
        let ps = self.polar()?;
        if let Some(e) = self.residues.lock().unwrap().get(u) {
            return Some(e.clone());
        }
        let map = ps.residue(u).ok()?;
        let entry = Arc::new(ResidueEntry { map, quad: OnceLock::new(), dual: OnceLock::new() });
        Some(self.residues.lock().unwrap().entry(u.clone()).or_insert(entry).clone())
    }

    /// The quadrangle of a rank-2 ambient and its dual.
    fn top_quadrangles(&self) -> Option<&(Quadrangle, Quadrangle)> {
        self.top
            .get_or_init(|| {
                let q = Quadrangle::from_polar(self.polar()?).ok()?;
                let d = q.dual();
                Some((q, d))
            })
            .as_ref()
    }

    /// Meet of all members of `t`.
    fn common(&self, t: &[usize]) -> Subspace {
        let f = self.field();
        let vs = self.inst.geometry.vertices();
        t[1..].iter().fold(vs[t[0]].space.clone(), |acc, &v| acc.meet(f, &vs[v].space).unwrap())
    }

    fn field(&self) -> &crate::fields::FieldSpec {
        match &self.inst.ambient {
            Ambient::Polar(p) => p.field(),
            Ambient::Projective(p) => p.field(),
        }
    }

    fn is_symplectic_like(ps: &PolarSpace) -> bool {
        match ps.form().family() {
            Family::Symplectic => true,
            Family::Parabolic => ps.field().characteristic() == 2,
            _ => false,
        }
    }

    /// Case (1) in the guise matching the geometry kind.
    pub fn line(&self, t: &[usize]) -> Option<Classification> {
        let g = &self.inst.geometry;
        if !is_grassmann_line(g, t).unwrap_or(false) {
            return None;
        }
        let label = match g.kind() {
            GeometryKind::ProjectiveGrassmannian { .. } | GeometryKind::PolarGrassmannian { .. } => FamilyLabel::GrassmannLine,
            GeometryKind::DualPolar => FamilyLabel::DualPolarLine,
            GeometryKind::HalfSpin { .. } => FamilyLabel::HalfSpinLine,
        };
        let witness = Witness { common: Some(self.common(t)), ..Witness::default() };
        Some(Classification { label, witness })
    }

    /// Members share a subspace `U` of vector dimension `i - 1` and form a
    /// hyperbolic line in the residue of `U`.
    pub fn hyperbolic_line_in_residue(&self, t: &[usize]) -> Option<Classification> {
        let ps = self.polar()?;
        let i = self.inst.geometry.type_index();
        if !Self::is_symplectic_like(ps) || i >= ps.rank() || t.len() < 2 {
            return None;
        }
        if !matches!(self.inst.geometry.kind(), GeometryKind::PolarGrassmannian { .. }) {
            return None;
        }
        let u = self.common(t);
        if u.dim() + 1 != i {
            return None;
        }
        let entry = self.residue(&u)?;
        let res = entry.map.polar()?;
        let f = ps.field();
        let vs = self.inst.geometry.vertices();
        let pts: Vec<usize> = t.iter().map(|&v| entry.map.push_point(f, &vs[v].space)).collect::<Result<_>>().ok()?;
        let h = res.hyperbolic_line(pts[0], pts[1]).ok()?;
        let set = BitRow::from_indices(res.num_points(), pts.iter().copied());
        if set != h {
            return None;
        }
        let witness = Witness { common: Some(u), residue_order: Some(res.order()), ..Witness::default() };
        Some(Classification { label: FamilyLabel::HyperbolicLineInResidue, witness })
    }

    /// Generators sharing a subspace of codimension 2, forming a regulus in
    /// its residue (detected by transversal closure).
    pub fn dual_hyperbolic_line_in_residue(&self, t: &[usize]) -> Option<Classification> {
        let ps = self.polar()?;
        let r = ps.rank();
        let family_ok = match ps.form().family() {
            Family::Parabolic | Family::Hyperbolic => true,
            Family::Symplectic => ps.field().characteristic() == 2,
            _ => false,
        };
        if !family_ok || self.inst.geometry.type_index() != r || t.len() < 2 {
            return None;
        }
        let u = self.common(t);
        if u.dim() + 2 != r {
            return None;
        }
        let entry = self.residue(&u)?;
        let res = entry.map.polar()?;
        let f = ps.field();
        let vs = self.inst.geometry.vertices();
        let mut members = Vec::with_capacity(t.len());
        for &v in t {
            let x = entry.map.push(f, &vs[v].space).ok()?;
            members.push(res.singular_index(&x)?);
        }
        let lines = res.lines();
        let meets_all = |set: &[usize]| -> Vec<usize> {
            (0..lines.len()).filter(|&l| set.iter().all(|&m| !lines[l].points.is_disjoint(&lines[m].points))).collect()
        };
        let transversals = meets_all(&members);
        if transversals.len() != members.len() {
            return None;
        }
        let mut back = meets_all(&transversals);
        members.sort_unstable();
        back.sort_unstable();
        if back != members {
            return None;
        }
        let witness = Witness {
            common: Some(u),
            residue_order: Some(res.order()),
            transversals: Some(transversals.len()),
            ..Witness::default()
        };
        Some(Classification { label: FamilyLabel::DualHyperbolicLineInResidue, witness })
    }

    /// Shared machinery of cases (5) and (6): the members share a subspace of
    /// vector dimension `r - 2`, whose residue is a quadrangle; `dual` selects
    /// whether members become points or lines there.
    fn subgq_in_residue(&self, t: &[usize], dual: bool, label: FamilyLabel) -> Option<Classification> {
        let ps = self.polar()?;
        let r = ps.rank();
        let u = self.common(t);
        if u.dim() + 2 != r {
            return None;
        }
        let entry = self.residue(&u)?;
        let res = entry.map.polar()?;
        let f = ps.field();
        let vs = self.inst.geometry.vertices();
        let mut members = Vec::with_capacity(t.len());
        for &v in t {
            let x = entry.map.push(f, &vs[v].space).ok()?;
            let idx = if dual { res.singular_index(&x)? } else { entry.map.push_point(f, &vs[v].space).ok()? };
            members.push(idx);
        }
        let quad = if dual { entry.dual()? } else { entry.quadrangle()? };
        let (count, order) = quad.ovoid_in_ideal_subgq(&members)?;
        let order = if dual { (order.1, order.0) } else { order };
        let witness = Witness {
            common: Some(u),
            residue_order: Some(res.order()),
            subgq_points: Some(count),
            subgq_order: Some(order),
            ..Witness::default()
        };
        Some(Classification { label, witness })
    }

    /// Hermitian of rank at least 3, members of vector dimension `r - 1`.
    pub fn ovoid_in_ideal_subgq(&self, t: &[usize]) -> Option<Classification> {
        let ps = self.polar()?;
        let r = ps.rank();
        if ps.form().kind() != FormKind::Hermitian || r < 3 || self.inst.geometry.type_index() + 1 != r {
            return None;
        }
        self.subgq_in_residue(t, false, FamilyLabel::OvoidInIdealSubGQ)
    }

    /// Elliptic of rank at least 3, members are generators.
    pub fn spread_in_subgq(&self, t: &[usize]) -> Option<Classification> {
        let ps = self.polar()?;
        let r = ps.rank();
        if ps.form().family() != Family::Elliptic || r < 3 || self.inst.geometry.type_index() != r {
            return None;
        }
        self.subgq_in_residue(t, true, FamilyLabel::SpreadInSubGQ)
    }

    fn gq_case(&self, t: &[usize], dual: bool, label: FamilyLabel) -> Option<Classification> {
        let ps = self.polar()?;
        if ps.rank() != 2 || self.inst.geometry.type_index() != 1 + dual as usize {
            return None;
        }
        let (q, d) = self.top_quadrangles()?;
        let quad = if dual { d } else { q };
        // Vertex indices coincide with point indices (type 1) or line indices (type 2).
        let (count, order) = quad.ovoid_in_ideal_subgq(t)?;
        let order = if dual { (order.1, order.0) } else { order };
        let witness = Witness { subgq_points: Some(count), subgq_order: Some(order), ..Witness::default() };
        Some(Classification { label, witness })
    }

    /// Rank 2, points: ovoid of an ideal subquadrangle.
    pub fn gq_ovoid_in_subgq(&self, t: &[usize]) -> Option<Classification> {
        self.gq_case(t, false, FamilyLabel::GQOvoidInSubGQ)
    }

    /// Rank 2, lines: spread of a subquadrangle (an ovoid of the dual).
    pub fn gq_spread_in_subgq(&self, t: &[usize]) -> Option<Classification> {
        self.gq_case(t, true, FamilyLabel::GQSpreadInSubGQ)
    }

    /// Every label whose recognizer accepts `t`, in classifier order.
    pub fn all_matches(&self, t: &[usize]) -> Vec<Classification> {
        let mut sorted = t.to_vec();
        sorted.sort_unstable();
        let t = &sorted[..];
        [
            self.line(t),
            self.hyperbolic_line_in_residue(t),
            self.dual_hyperbolic_line_in_residue(t),
            self.ovoid_in_ideal_subgq(t),
            self.spread_in_subgq(t),
            self.gq_ovoid_in_subgq(t),
            self.gq_spread_in_subgq(t),
        ]
        .into_iter()
        .flatten()
        .collect()
    }

    /// The first matching label, or `Unclassified`.
    pub fn classify(&self, t: &[usize]) -> Classification {
        let mut sorted = t.to_vec();
        sorted.sort_unstable();
        let t = &sorted[..];
        let tries: [&dyn Fn(&[usize]) -> Option<Classification>; 7] = [
            &|t| self.line(t),
            &|t| self.hyperbolic_line_in_residue(t),
            &|t| self.dual_hyperbolic_line_in_residue(t),
            &|t| self.ovoid_in_ideal_subgq(t),
            &|t| self.spread_in_subgq(t),
            &|t| self.gq_ovoid_in_subgq(t),
            &|t| self.gq_spread_in_subgq(t),
        ];
        tries
            .iter()
            .find_map(|f| f(t))
            .unwrap_or(Classification { label: FamilyLabel::Unclassified, witness: Witness::default() })
    }
}

/// One-shot classification; prefer a shared [`Classifier`] for many sets.
pub fn classify(inst: &Instance, t: &[usize]) -> Classification {
    Classifier::new(inst).classify(t)
}

/// Counts, for an ovoid `t` of a subquadrangle with point set `sub`, how many
/// members each quadrangle point is collinear with, split by membership in `sub`.
pub fn ovoid_collinearity_profile(quad: &Quadrangle, sub: &BitRow, t: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let tset = BitRow::from_indices(quad.num_points(), t.iter().copied());
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for p in 0..quad.num_points() {
        let k = quad.collinear(p).intersection_count(&tset);
        if sub.contains(p) {
            inside.push(k);
        } else {
            outside.push(k);
        }
    }
    (inside, outside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldSpec;
    use crate::forms::standard_form;
    use crate::spaces::ProjectiveSpace;

    fn polar(fam: Family, d: usize, q: usize) -> PolarSpace {
        let f = Arc::new(FieldSpec::of_order(q).unwrap());
        PolarSpace::build(standard_form(fam, d, f).unwrap()).unwrap()
    }

    #[test]
    fn label_order_and_names() {
        let mut sorted = FamilyLabel::ALL;
        sorted.sort();
        assert_eq!(sorted, FamilyLabel::ALL);
        for l in FamilyLabel::ALL {
            assert_eq!(FamilyLabel::from_name(l.name()), Some(l));
        }
    }

    #[test]
    fn grassmann_line_examples() {
        let pg = ProjectiveSpace::new(Arc::new(FieldSpec::of_order(2).unwrap()), 3).unwrap();
        let inst = Instance::projective(pg, 1).unwrap();
        let g = &inst.geometry;
        let l = g.lines()[17].clone();
        assert!(is_grassmann_line(g, &l).unwrap());
        let mut rev = l.clone();
        rev.reverse();
        assert!(is_grassmann_line(g, &rev).unwrap());
        let off = (0..g.num_vertices()).find(|v| !l.contains(v)).unwrap();
        let mut swapped = l.clone();
        swapped[0] = off;
        assert!(!is_grassmann_line(g, &swapped).unwrap());
        assert!(is_grassmann_line(g, &l[..2]).is_err());
        let c = classify(&inst, &l);
        assert_eq!(c.label, FamilyLabel::GrassmannLine);
        // A pencil: the members share a point and span a plane.
        let f = FieldSpec::of_order(2).unwrap();
        assert_eq!(c.witness.common.unwrap().dim(), 1);
        let span = l[1..].iter().fold(g.vertices()[l[0]].space.clone(), |a, &v| a.join(&f, &g.vertices()[v].space).unwrap());
        assert_eq!(span.dim(), 3);
    }

    #[test]
    fn dual_polar_lines_share_a_submaximal() {
        let inst = Instance::polar(polar(Family::Symplectic, 5, 2), 3).unwrap();
        let cl = Classifier::new(&inst);
        for l in inst.geometry.lines().iter().step_by(37) {
            let c = cl.classify(l);
            assert_eq!(c.label, FamilyLabel::DualPolarLine);
            assert_eq!(c.witness.common.unwrap().dim(), 2);
        }
    }

    fn hyperbolic_triple(ps: &PolarSpace) -> Vec<usize> {
        let y = (0..ps.num_points()).find(|&y| !ps.is_collinear(0, y)).unwrap();
        ps.hyperbolic_line(0, y).unwrap().to_vec()
    }

    #[test]
    fn hyperbolic_line_examples() {
        let w = polar(Family::Symplectic, 3, 2);
        let h = hyperbolic_triple(&w);
        let inst = Instance::polar(w, 1).unwrap();
        let cl = Classifier::new(&inst);
        let c = cl.classify(&h);
        assert_eq!(c.label, FamilyLabel::HyperbolicLineInResidue);
        assert_eq!(c.witness.common.as_ref().unwrap().dim(), 0);
        assert!(cl.hyperbolic_line_in_residue(&inst.geometry.lines()[0]).is_none());
        // With s = t a hyperbolic line is also an ovoid of an order-(1,t) subquadrangle.
        let ov = cl.gq_ovoid_in_subgq(&h).unwrap();
        assert_eq!(ov.witness.subgq_order, Some((1, 2)));
        assert!(is_geometric_line(&inst.opposition, &h));
    }

    #[test]
    fn hyperbolic_line_in_point_residue() {
        let w6 = polar(Family::Symplectic, 5, 2);
        let f = w6.field().clone();
        let p = w6.singulars(0)[0].space.clone();
        let res = w6.residue(&p).unwrap();
        let h = hyperbolic_triple(res.polar().unwrap());
        let lifted: Vec<Subspace> = h
            .iter()
            .map(|&x| {
                let pt = Subspace::span_of(&f, &res.polar().unwrap().points().vectors()[x]);
                res.lift(&f, &pt).unwrap()
            })
            .collect();
        let inst = Instance::polar(w6, 2).unwrap();
        let t: Vec<usize> = lifted.iter().map(|s| inst.geometry.vertex_index(s).unwrap()).collect();
        let cl = Classifier::new(&inst);
        let c = cl.classify(&t);
        assert_eq!(c.label, FamilyLabel::HyperbolicLineInResidue);
        assert_eq!(c.witness.common, Some(p));
        assert_eq!(c.witness.residue_order, Some((2, 2)));
        assert!(inst.opposition.common_opposites(&t).is_empty());
    }

    #[test]
    fn regulus_examples() {
        let q4 = polar(Family::Parabolic, 4, 2);
        let inst = Instance::polar(q4, 2).unwrap();
        let ps = inst.ambient.polar().unwrap();
        let lines = ps.lines();
        // Two opposite lines and their transversals.
        let a = 0;
        let b = (0..lines.len()).find(|&b| lines[a].points.is_disjoint(&lines[b].points)).unwrap();
        let tr: Vec<usize> = (0..lines.len())
            .filter(|&l| !lines[l].points.is_disjoint(&lines[a].points) && !lines[l].points.is_disjoint(&lines[b].points))
            .collect();
        assert_eq!(tr.len(), 3);
        let regulus: Vec<usize> =
            (0..lines.len()).filter(|&l| tr.iter().all(|&m| !lines[l].points.is_disjoint(&lines[m].points))).collect();
        assert_eq!(regulus.len(), 3);
        let cl = Classifier::new(&inst);
        let c = cl.classify(&regulus);
        assert_eq!(c.label, FamilyLabel::DualHyperbolicLineInResidue);
        assert_eq!(c.witness.transversals, Some(3));
        assert_eq!(c.witness.common.as_ref().unwrap().dim(), 0);
        assert!(cl.dual_hyperbolic_line_in_residue(&inst.geometry.lines()[0]).is_none());
        assert!(inst.opposition.common_opposites(&regulus).is_empty());
    }

    #[test]
    fn closure_examples() {
        let w = polar(Family::Symplectic, 3, 2);
        let q = Quadrangle::from_polar(&w).unwrap();
        assert_eq!(q.order(), (2, 2));
        assert_eq!(q.dual().order(), (2, 2));
        let h = hyperbolic_triple(&w);
        let sub = q.subgq_closure(&h).unwrap();
        let hrow = BitRow::from_indices(15, h.iter().copied());
        assert_eq!(sub.points, hrow.or(&w.perp_set(&hrow)));
        assert_eq!(sub.audit(&q), Ok((1, 2)));
        let pair = q.subgq_closure(&h[..2]).unwrap();
        assert_eq!(pair.points, BitRow::from_indices(15, h[..2].iter().copied()).or(&w.collinear(h[0]).and(w.collinear(h[1]))));
        let l = w.lines()[0].points.to_vec();
        assert_eq!(q.subgq_closure(&l).unwrap_err(), Error::Collinear(l[0], l[1]));
        assert!(q.ovoid_in_ideal_subgq(&l).is_none());
    }

    #[test]
    fn hermitian_quadrangle_dual_orders() {
        let h = polar(Family::Hermitian, 3, 4);
        let q = Quadrangle::from_polar(&h).unwrap();
        assert_eq!(q.order(), (4, 2));
        let d = q.dual();
        assert_eq!(d.order(), (2, 4));
        assert_eq!(d.num_points(), 27);
    }

    #[test]
    fn geometric_line_examples() {
        let pg = ProjectiveSpace::new(Arc::new(FieldSpec::of_order(3).unwrap()), 2).unwrap();
        let inst = Instance::projective(pg, 0).unwrap();
        for l in inst.geometry.lines() {
            assert!(is_geometric_line(&inst.opposition, l));
        }
        // Three points of a line plus nothing else is not a geometric line in PG(2,3).
        let l = &inst.geometry.lines()[0];
        assert!(!is_geometric_line(&inst.opposition, &l[..3]));
    }

    #[test]
    fn classification_is_permutation_stable() {
        let w = polar(Family::Symplectic, 3, 3);
        let h = hyperbolic_triple(&w);
        let inst = Instance::polar(w, 1).unwrap();
        let cl = Classifier::new(&inst);
        let base = cl.classify(&h);
        assert_eq!(base.label, FamilyLabel::HyperbolicLineInResidue);
        let mut p = h.clone();
        p.rotate_left(1);
        assert_eq!(cl.classify(&p), base);
        p.reverse();
        assert_eq!(cl.classify(&p), base);
    }
}
