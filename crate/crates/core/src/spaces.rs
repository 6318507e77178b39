//! Projective and polar spaces as concrete point-line geometries.
//!
//! A [`PolarSpace`] materializes the singular points of a form, a packed
//! collinearity relation and the full inventory of singular subspaces. Point
//! indices follow the canonical order of the underlying 1-spaces, so every
//! geometry built from the same form is labelled identically.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldSpec};
use crate::forms::Form;
use crate::linalg::{encode, enumerate_subspaces, express, normalize, Subspace, Vector};

/// A subspace together with the indices of the points it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub space: Subspace,
    pub points: BitRow,
}

/// Maps normalized vectors to point indices.
#[derive(Clone, Debug)]
pub struct PointTable {
    q: usize,
    vectors: Vec<Vector>,
    index: HashMap<u64, usize>,
}

impl PointTable {
    fn new(q: usize, vectors: Vec<Vector>) -> PointTable {
        let index = vectors.iter().enumerate().map(|(i, v)| (encode(v, q), i)).collect();
        PointTable { q, vectors, index }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Index of the point spanned by `v`, if it is one of ours.
    pub fn lookup(&self, f: &FieldSpec, v: &[FieldElement]) -> Option<usize> {
        let v = normalize(f, v)?;
        self.index.get(&encode(&v, self.q)).copied()
    }

    /// Point set of a subspace; `None` if it has a point outside the table.
    pub fn point_set(&self, f: &FieldSpec, s: &Subspace) -> Option<BitRow> {
        let mut row = BitRow::new(self.len());
        for v in s.points(f) {
            row.insert(self.index.get(&encode(&v, self.q)).copied()?);
        }
        Some(row)
    }
}

/// `PG(n, q)` with its point table; other inventories are enumerated on demand.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: Arc<FieldSpec>,
    proj_dim: usize,
    points: PointTable,
}

impl ProjectiveSpace {
    pub fn new(field: Arc<FieldSpec>, proj_dim: usize) -> Result<ProjectiveSpace> {
        if proj_dim < 1 {
            return Err(Error::InvalidParameter("projective dimension must be at least 1".into()));
        }
        let vectors = enumerate_subspaces(&field, proj_dim + 1, 1)?.into_iter().map(|s| s.basis()[0].clone()).collect();
        let points = PointTable::new(field.order(), vectors);
        Ok(ProjectiveSpace { field, proj_dim, points })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn proj_dim(&self) -> usize {
        self.proj_dim
    }

    pub fn points(&self) -> &PointTable {
        &self.points
    }

    /// All subspaces of projective dimension `d` with their point sets, canonical order.
    pub fn flats(&self, d: usize) -> Result<Vec<Flat>> {
        let subs = enumerate_subspaces(&self.field, self.proj_dim + 1, d + 1)?;
        Ok(subs
            .into_par_iter()
            .map(|space| {
                let points = self.points.point_set(&self.field, &space).unwrap();
                Flat { space, points }
            })
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct PolarSpace {
    form: Form,
    points: PointTable,
    collinear: Vec<BitRow>,
    /// `singulars[d]`: singular subspaces of projective dimension `d`, sorted.
    singulars: Vec<Vec<Flat>>,
    order: (usize, usize),
}

impl PolarSpace {
    /// Builds the polar space of a nondegenerate form of Witt index at least 2.
    pub fn build(form: Form) -> Result<PolarSpace> {
        let witt = form.witt_index();
        if witt < 2 {
            return Err(Error::NoLines(witt));
        }
        let f = form.field_arc().clone();
        let n = form.n();
        let vectors: Vec<Vector> = enumerate_subspaces(&f, n, 1)?
            .into_iter()
            .map(|s| s.basis()[0].clone())
            .filter(|v| form.is_isotropic(v))
            .collect();
        let points = PointTable::new(f.order(), vectors);
        let np = points.len();
        let collinear: Vec<BitRow> = (0..np)
            .into_par_iter()
            .map(|i| {
                let u = &points.vectors[i];
                BitRow::from_indices(
                    np,
                    (0..np).filter(|&j| form.eval_bilinear(u, &points.vectors[j]).unwrap().is_zero()),
                )
            })
            .collect();
        let mut singulars = vec![(0..np)
            .map(|i| Flat {
                space: Subspace::span_of(&f, &points.vectors[i]),
                points: BitRow::from_indices(np, [i]),
            })
            .collect::<Vec<_>>()];
        for _ in 1..witt {
            let next = extend_level(&f, &points, &collinear, singulars.last().unwrap());
            singulars.push(next);
        }
        let mut space = PolarSpace { form, points, collinear, singulars, order: (0, 0) };
        let s = space.singulars[1][0].points.count() - 1;
        let r = space.rank();
        let t = space.supersets(r - 2, r - 1)[0].len() - 1;
        space.order = (s, t);
        Ok(space)
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn field(&self) -> &FieldSpec {
        self.form.field()
    }

    pub fn rank(&self) -> usize {
        self.singulars.len()
    }

    /// `(s, t)`: points per line minus one, generators per submaximal minus one.
    pub fn order(&self) -> (usize, usize) {
        self.order
    }

    pub fn points(&self) -> &PointTable {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Collinearity row of point `p`; every point is collinear with itself.
    pub fn collinear(&self, p: usize) -> &BitRow {
        &self.collinear[p]
    }

    pub fn collinearity(&self) -> &[BitRow] {
        &self.collinear
    }

    pub fn is_collinear(&self, x: usize, y: usize) -> bool {
        self.collinear[x].contains(y)
    }

    /// Singular subspaces of projective dimension `d`.
    pub fn singulars(&self, d: usize) -> &[Flat] {
        &self.singulars[d]
    }

    pub fn lines(&self) -> &[Flat] {
        &self.singulars[1]
    }

    pub fn generators(&self) -> &[Flat] {
        self.singulars.last().unwrap()
    }

    /// Index of a singular subspace within its level.
    pub fn singular_index(&self, s: &Subspace) -> Option<usize> {
        let d = s.dim().checked_sub(1)?;
        self.singulars.get(d)?.binary_search_by(|fl| fl.space.cmp(s)).ok()
    }

    pub fn point_set(&self, s: &Subspace) -> Option<BitRow> {
        self.points.point_set(self.field(), s)
    }

    /// For each singular subspace of dimension `low`, the indices of those of
    /// dimension `high` containing it.
    pub fn supersets(&self, low: usize, high: usize) -> Vec<Vec<usize>> {
        let upper = &self.singulars[high];
        self.singulars[low]
            .par_iter()
            .map(|l| upper.iter().enumerate().filter(|(_, u)| l.points.is_subset(&u.points)).map(|(i, _)| i).collect())
            .collect()
    }

    /// Points collinear with every point of `set` (all points for an empty set).
    pub fn perp_set(&self, set: &BitRow) -> BitRow {
        let mut acc = BitRow::full(self.num_points());
        for p in set.iter() {
            acc.and_assign(&self.collinear[p]);
        }
        acc
    }

    /// Points of the polar space in `s^perp` for a subspace `s` given by its points.
    pub fn perp_of_points(&self, points: &[usize]) -> BitRow {
        self.perp_set(&BitRow::from_indices(self.num_points(), points.iter().copied()))
    }

    /// `{x, y}^perp^perp` for non-collinear `x`, `y`.
    pub fn hyperbolic_line(&self, x: usize, y: usize) -> Result<BitRow> {
        if self.is_collinear(x, y) {
            return Err(Error::Collinear(x, y));
        }
        let pair = BitRow::from_indices(self.num_points(), [x, y]);
        Ok(self.perp_set(&self.perp_set(&pair)))
    }

    /// Whether `h` equals `{u, v}^perp` for every two distinct points of `h^perp`.
    pub fn is_large_hyperbolic_line(&self, h: &BitRow) -> bool {
        let hp = self.perp_set(h).to_vec();
        if hp.len() < 2 {
            return false;
        }
        let np = self.num_points();
        hp.iter().enumerate().all(|(i, &u)| {
            hp[i + 1..].iter().all(|&v| self.perp_set(&BitRow::from_indices(np, [u, v])) == *h)
        })
    }

    /// Audits the four polar space axioms exhaustively.
    pub fn audit_axioms(&self) -> std::result::Result<(), String> {
        let lines = self.lines();
        if lines.is_empty() {
            return Err("no lines".into());
        }
        if let Some(l) = lines.iter().find(|l| l.points.count() < 3) {
            return Err(format!("thin line {:?}", l.points));
        }
        let bad = (0..self.num_points()).into_par_iter().find_any(|&p| {
            lines.iter().any(|l| {
                let k = l.points.intersection_count(&self.collinear[p]);
                k != 1 && k != l.points.count()
            })
        });
        if let Some(p) = bad {
            return Err(format!("point {p} violates the one-or-all axiom"));
        }
        if let Some(p) = (0..self.num_points()).find(|&p| self.collinear[p].count() == self.num_points()) {
            return Err(format!("point {p} is collinear with every point"));
        }
        Ok(())
    }

    /// Audits that every line has `s+1` points and every submaximal lies in `t+1` generators.
    pub fn audit_order(&self) -> std::result::Result<(), String> {
        let (s, t) = self.order;
        if let Some(l) = self.lines().iter().find(|l| l.points.count() != s + 1) {
            return Err(format!("line {:?} does not have {} points", l.points, s + 1));
        }
        let r = self.rank();
        if let Some(c) = self.supersets(r - 2, r - 1).iter().find(|c| c.len() != t + 1) {
            return Err(format!("submaximal in {} generators, expected {}", c.len(), t + 1));
        }
        Ok(())
    }

    /// The residue of a singular subspace, realized on `U^perp / U`.
    pub fn residue(&self, u: &Subspace) -> Result<ResidueMap> {
        if u.ambient() != self.form.n() {
            return Err(Error::AmbientMismatch(u.ambient(), self.form.n()));
        }
        if !self.form.is_singular(u) {
            return Err(Error::NotSingular);
        }
        let r = self.rank();
        if u.dim() >= r {
            return Err(Error::InvalidParameter("a generator has an empty residue".into()));
        }
        let f = self.field();
        let perp = self.form.perp(u)?;
        let mut rows: Vec<Vector> = u.basis().to_vec();
        let mut complement = Vec::new();
        for v in perp.basis() {
            let trial = Subspace::from_rows(f, self.form.n(), &[rows.clone(), vec![v.clone()]].concat())?;
            if trial.dim() > rows.len() {
                rows.push(v.clone());
                complement.push(v.clone());
            }
        }
        let induced = self.form.restrict(&complement)?;
        let space = if u.dim() == 0 {
            ResidueSpace::Polar(Box::new(self.clone()))
        } else if r - u.dim() >= 2 {
            ResidueSpace::Polar(Box::new(PolarSpace::build(induced)?))
        } else {
            let pts = enumerate_subspaces(induced.field(), induced.n(), 1)?
                .into_iter()
                .filter(|p| induced.is_isotropic(&p.basis()[0]))
                .collect();
            ResidueSpace::Pencil(pts)
        };
        Ok(ResidueMap { base: u.clone(), carrier: rows, complement, space })
    }

    /// `proj_U(W) = W^perp meet U`.
    pub fn project(&self, u: &Subspace, w: &Subspace) -> Result<Subspace> {
        self.form.perp(w)?.meet(self.field(), u)
    }
}

/// One level of singular subspaces from the previous one by adjoining a point
/// of the perp with index above every point already present.
fn extend_level(f: &FieldSpec, points: &PointTable, collinear: &[BitRow], level: &[Flat]) -> Vec<Flat> {
    let n = points.vectors[0].len();
    let mut found: Vec<Flat> = level
        .par_iter()
        .flat_map_iter(|s| {
            let mut perp = BitRow::full(points.len());
            for p in s.points.iter() {
                perp.and_assign(&collinear[p]);
            }
            let top = s.points.iter().last().unwrap();
            perp.clear_through(top);
            perp.iter()
                .map(|p| {
                    let mut rows = s.space.basis().to_vec();
                    rows.push(points.vectors[p].clone());
                    let space = Subspace::from_rows(f, n, &rows).unwrap();
                    let pts = points.point_set(f, &space).expect("span of collinear points is singular");
                    Flat { space, points: pts }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    found.par_sort_by(|a, b| a.space.cmp(&b.space));
    found.dedup_by(|a, b| a.space == b.space);
    found
}

#[derive(Clone, Debug)]
pub enum ResidueSpace {
    Polar(Box<PolarSpace>),
    /// Rank-one residue: the singular points of `U^perp / U`.
    Pencil(Vec<Subspace>),
}

/// `Res(U)` with maps between subspaces through `U` and subspaces of the quotient.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    base: Subspace,
    /// Basis of `U^perp`: the basis of `U` followed by `complement`.
    carrier: Vec<Vector>,
    complement: Vec<Vector>,
    space: ResidueSpace,
}

impl ResidueMap {
    pub fn base(&self) -> &Subspace {
        &self.base
    }

    pub fn space(&self) -> &ResidueSpace {
        &self.space
    }

    pub fn polar(&self) -> Option<&PolarSpace> {
        match &self.space {
            ResidueSpace::Polar(p) => Some(p),
            ResidueSpace::Pencil(_) => None,
        }
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }

    /// The subspace of `U^perp / U` corresponding to `y`, which must contain `U`
    /// and lie in `U^perp`.
    pub fn push(&self, f: &FieldSpec, y: &Subspace) -> Result<Subspace> {
        if !y.contains(f, &self.base)? {
            return Err(Error::NotInResidue);
        }
        let k = self.base.dim();
        let mut rows = Vec::with_capacity(y.dim());
        for v in y.basis() {
            let c = express(f, &self.carrier, v).ok_or(Error::NotInResidue)?;
            rows.push(c[k..].to_vec());
        }
        Subspace::from_rows(f, self.complement.len(), &rows)
    }

    /// The subspace through `U` corresponding to `x` in the quotient.
    pub fn lift(&self, f: &FieldSpec, x: &Subspace) -> Result<Subspace> {
        if x.ambient() != self.complement.len() {
            return Err(Error::AmbientMismatch(x.ambient(), self.complement.len()));
        }
        let mut rows = self.base.basis().to_vec();
        for c in x.basis() {
            let mut v = vec![FieldElement::ZERO; self.base.ambient()];
            for (coef, b) in c.iter().zip(&self.complement) {
                for j in 0..v.len() {
                    v[j] = f.add(v[j], f.mul(*coef, b[j]));
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(f, self.base.ambient(), &rows)
    }

    /// Index of the residue point determined by a singular subspace one
    /// dimension above `U`.
    pub fn push_point(&self, f: &FieldSpec, y: &Subspace) -> Result<usize> {
        let x = self.push(f, y)?;
        let polar = self.polar().ok_or(Error::NotInResidue)?;
        if x.dim() != 1 {
            return Err(Error::DimensionMismatch(x.dim(), 1));
        }
        polar.points().lookup(f, &x.basis()[0]).ok_or(Error::NotInResidue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{standard_form, Family};

    pub(crate) fn polar(fam: Family, d: usize, q: usize) -> PolarSpace {
        let f = Arc::new(FieldSpec::of_order(q).unwrap());
        PolarSpace::build(standard_form(fam, d, f).unwrap()).unwrap()
    }

    /// Counts of singular k-spaces in a rank-r space of order (s, t).
    fn singular_count(r: u32, k: u32, s: u64, t: u64) -> u64 {
        let mut gb_num = 1u64;
        let mut gb_den = 1u64;
        for i in 0..k {
            gb_num *= s.pow(r - i) - 1;
            gb_den *= s.pow(i + 1) - 1;
        }
        let mut prod = 1u64;
        for j in 0..k {
            prod *= s.pow(r - j - 1) * t + 1;
        }
        gb_num / gb_den * prod
    }

    #[test]
    fn build_examples() {
        let w = polar(Family::Symplectic, 3, 2);
        assert_eq!(w.num_points(), 15);
        assert_eq!(w.lines().len(), 15);
        assert_eq!(w.order(), (2, 2));
        assert_eq!(w.rank(), 2);
        let h = polar(Family::Hermitian, 3, 4);
        assert_eq!(h.order(), (4, 2));
        assert_eq!(h.num_points(), 45);
        assert_eq!(h.lines().len(), 27);
        let e = polar(Family::Elliptic, 5, 2);
        assert_eq!(e.order(), (2, 4));
        let hy = polar(Family::Hyperbolic, 5, 2);
        assert_eq!(hy.order(), (2, 1));
        assert_eq!(hy.rank(), 3);
        let f = Arc::new(FieldSpec::of_order(2).unwrap());
        assert_eq!(PolarSpace::build(standard_form(Family::Elliptic, 3, f).unwrap()).unwrap_err(), Error::NoLines(1));
    }

    #[test]
    fn inventories_match_counting_formula() {
        let cases = [
            (Family::Symplectic, 3, 2),
            (Family::Symplectic, 5, 2),
            (Family::Symplectic, 3, 3),
            (Family::Parabolic, 4, 2),
            (Family::Parabolic, 4, 3),
            (Family::Hyperbolic, 5, 2),
            (Family::Elliptic, 5, 2),
            (Family::Elliptic, 7, 2),
            (Family::Hermitian, 3, 4),
            (Family::Hermitian, 4, 4),
        ];
        for (fam, d, q) in cases {
            let ps = polar(fam, d, q);
            let (s, t) = ps.order();
            let r = ps.rank();
            for k in 1..=r {
                assert_eq!(
                    ps.singulars(k - 1).len() as u64,
                    singular_count(r as u32, k as u32, s as u64, t as u64),
                    "{fam:?}({d},{q}) k={k}"
                );
            }
            ps.audit_axioms().unwrap();
            ps.audit_order().unwrap();
        }
    }

    #[test]
    fn levels_are_canonical_and_singular() {
        let ps = polar(Family::Symplectic, 5, 2);
        for d in 0..ps.rank() {
            let lvl = ps.singulars(d);
            assert!(lvl.windows(2).all(|w| w[0].space < w[1].space));
            for fl in lvl {
                assert!(ps.form().is_singular(&fl.space));
                assert_eq!(fl.space.dim(), d + 1);
                assert_eq!(ps.singular_index(&fl.space).map(|i| &lvl[i]), Some(fl));
            }
        }
    }

    #[test]
    fn perp_set_examples() {
        let w = polar(Family::Symplectic, 3, 2);
        let p = BitRow::from_indices(15, [0]);
        let pp = w.perp_set(&p);
        assert!(pp.contains(0));
        assert_eq!(pp.count(), 7);
        // A line's perp is the line itself in a quadrangle.
        let l = &w.lines()[0];
        assert_eq!(w.perp_set(&l.points), l.points);
        // Two opposite generators of W(5,2) have an empty common perp.
        let w6 = polar(Family::Symplectic, 5, 2);
        let g = w6.generators();
        let opp = g.iter().find(|h| h.points.is_disjoint(&g[0].points)).unwrap();
        assert!(w6.perp_set(&g[0].points.or(&opp.points)).is_empty());
    }

    #[test]
    fn hyperbolic_line_examples() {
        let w = polar(Family::Symplectic, 3, 2);
        let y = (0..15).find(|&y| !w.is_collinear(0, y)).unwrap();
        let h = w.hyperbolic_line(0, y).unwrap();
        assert_eq!(h.count(), 3);
        assert_eq!(h, w.hyperbolic_line(y, 0).unwrap());
        assert!(w.is_large_hyperbolic_line(&h));
        let hp = w.perp_set(&BitRow::from_indices(15, [0, y]));
        for p in h.iter() {
            assert!(hp.is_subset(w.collinear(p)));
        }
        assert_eq!(w.hyperbolic_line(0, 0).unwrap_err(), Error::Collinear(0, 0));

        let hy = polar(Family::Hyperbolic, 5, 2);
        let y = (0..hy.num_points()).find(|&y| !hy.is_collinear(0, y)).unwrap();
        let h = hy.hyperbolic_line(0, y).unwrap();
        assert_eq!(h.to_vec(), vec![0, y]);
        assert!(!hy.is_large_hyperbolic_line(&h));
    }

    #[test]
    fn residue_examples() {
        let w6 = polar(Family::Symplectic, 5, 2);
        let f = w6.field().clone();
        let p = w6.singulars(0)[0].space.clone();
        let res = w6.residue(&p).unwrap();
        let rp = res.polar().unwrap();
        assert_eq!(rp.order(), (2, 2));
        assert_eq!(rp.rank(), 2);
        assert_eq!(rp.num_points(), 15);

        let zero = w6.residue(&Subspace::zero(6)).unwrap();
        assert_eq!(zero.polar().unwrap().num_points(), w6.num_points());

        let h5 = polar(Family::Hermitian, 5, 4);
        assert_eq!(h5.rank(), 3);
        let hr = h5.residue(&h5.singulars(0)[0].space).unwrap();
        let hrp = hr.polar().unwrap();
        assert_eq!(hrp.rank(), 2);
        assert_eq!(hrp.order(), h5.order());

        // A submaximal has a pencil of t+1 generators as residue.
        let line = &w6.lines()[0].space;
        match w6.residue(line).unwrap().space() {
            ResidueSpace::Pencil(pts) => assert_eq!(pts.len(), 3),
            _ => panic!("expected a pencil"),
        }
        let not_singular = Subspace::from_rows(
            &f,
            6,
            &[w6.points().vectors()[0].clone(), w6.points().vectors()[(1..63).find(|&j| !w6.is_collinear(0, j)).unwrap()].clone()],
        )
        .unwrap();
        assert_eq!(w6.residue(&not_singular).unwrap_err(), Error::NotSingular);
    }

    #[test]
    fn residue_push_lift_roundtrip_and_collinearity() {
        for (fam, d, q) in [(Family::Symplectic, 5, 2), (Family::Elliptic, 7, 2), (Family::Parabolic, 6, 2)] {
            let ps = polar(fam, d, q);
            let f = ps.field().clone();
            let u = ps.singulars(0)[3].space.clone();
            let res = ps.residue(&u).unwrap();
            let rp = res.polar().unwrap();
            assert_eq!(rp.rank(), ps.rank() - 1);
            // Lines through U map bijectively onto residue points.
            let through: Vec<&Flat> = ps.lines().iter().filter(|l| l.space.contains(&f, &u).unwrap()).collect();
            assert_eq!(through.len(), rp.num_points());
            let idx: Vec<usize> = through.iter().map(|l| res.push_point(&f, &l.space).unwrap()).collect();
            for l in &through {
                let x = res.push(&f, &l.space).unwrap();
                assert_eq!(res.lift(&f, &x).unwrap(), l.space);
                assert_eq!(res.push(&f, &res.lift(&f, &x).unwrap()).unwrap(), x);
            }
            for (a, &ia) in through.iter().zip(&idx) {
                for (b, &ib) in through.iter().zip(&idx) {
                    let span = a.space.join(&f, &b.space).unwrap();
                    assert_eq!(ps.form().is_singular(&span), rp.is_collinear(ia, ib));
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let w = polar(Family::Symplectic, 3, 2);
        let f = w.field().clone();
        let l = &w.lines()[0];
        assert_eq!(w.project(&l.space, &l.space).unwrap(), l.space);
        let m = w.lines().iter().find(|m| m.points.is_disjoint(&l.points) && {
            // opposite: no point of l collinear with all of m
            l.points.iter().all(|p| !m.points.is_subset(w.collinear(p)))
        }).unwrap();
        assert_eq!(w.project(&l.space, &m.space).unwrap().dim(), 0);
        // A point off the line projects onto a single point of it.
        let p = (0..15).find(|p| !l.points.contains(*p)).unwrap();
        let pt = Subspace::span_of(&f, &w.points().vectors()[p]);
        assert_eq!(w.project(&l.space, &pt).unwrap().dim(), 1);
        let w6 = polar(Family::Symplectic, 5, 2);
        let g = w6.generators();
        let h = g.iter().find(|h| h.points.is_disjoint(&g[0].points)).unwrap();
        assert_eq!(w6.project(&g[0].space, &h.space).unwrap().dim(), 0);
    }
}
