//! Alternating, quadratic and Hermitian forms and the standard models of the
//! classical polar space families.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldSpec};
use crate::linalg::{nullspace, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuadricKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    Alternating,
    Quadratic(QuadricKind),
    Hermitian,
}

/// The classical families, named as in `W(2r-1,q)`, `Q(2n,q)`, `Q+(2n-1,q)`,
/// `Q-(2n+1,q)` and `H(n,q^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Symplectic,
    Parabolic,
    Hyperbolic,
    Elliptic,
    Hermitian,
}

impl Family {
    pub fn form_kind(self) -> FormKind {
        match self {
            Family::Symplectic => FormKind::Alternating,
            Family::Parabolic => FormKind::Quadratic(QuadricKind::Parabolic),
            Family::Hyperbolic => FormKind::Quadratic(QuadricKind::Hyperbolic),
            Family::Elliptic => FormKind::Quadratic(QuadricKind::Elliptic),
            Family::Hermitian => FormKind::Hermitian,
        }
    }

    pub fn of_kind(kind: FormKind) -> Family {
        match kind {
            FormKind::Alternating => Family::Symplectic,
            FormKind::Quadratic(QuadricKind::Parabolic) => Family::Parabolic,
            FormKind::Quadratic(QuadricKind::Hyperbolic) => Family::Hyperbolic,
            FormKind::Quadratic(QuadricKind::Elliptic) => Family::Elliptic,
            FormKind::Hermitian => Family::Hermitian,
        }
    }

    /// Checks `proj_dim` and the field order against the family's constraints.
    pub fn validate(self, proj_dim: usize, field_order: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidParameter(format!("{self:?} in dimension {proj_dim}: {why}")));
        match self {
            Family::Symplectic | Family::Hyperbolic | Family::Elliptic if proj_dim % 2 == 0 || proj_dim < 1 => {
                bad("projective dimension must be odd")
            }
            Family::Parabolic if proj_dim % 2 == 1 || proj_dim < 2 => bad("projective dimension must be even and >= 2"),
            Family::Hermitian if proj_dim < 1 => bad("projective dimension must be >= 1"),
            Family::Hermitian if crate::fields::prime_power(field_order).is_some_and(|(_, e)| e % 2 == 1) => {
                bad("field order must be a square")
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone)]
pub struct Form {
    kind: FormKind,
    n: usize,
    /// Gram matrix (alternating, Hermitian) or upper-triangular coefficients of Q.
    matrix: Vec<Vector>,
    /// Gram matrix of the (associated) bilinear or sesquilinear form.
    polar: Vec<Vector>,
    field: Arc<FieldSpec>,
    sub_order: Option<usize>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("matrix", &self.matrix)
            .field("field", &self.field.order())
            .finish()
    }
}

impl Form {
    /// Validates the matrix shape, the kind-specific symmetry and nondegeneracy.
    pub fn new(kind: FormKind, field: Arc<FieldSpec>, matrix: Vec<Vector>) -> Result<Form> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedMatrix { row: i, len: row.len(), expected: n });
            }
        }
        let f = &*field;
        let sub_order = match kind {
            FormKind::Hermitian => {
                Some(f.sub_order().ok_or(Error::NotASquare { order: f.order(), sub_order: 0 })?)
            }
            _ => None,
        };
        let polar = match kind {
            FormKind::Alternating => {
                for i in 0..n {
                    if !matrix[i][i].is_zero() {
                        return Err(Error::InvalidParameter("alternating Gram has nonzero diagonal".into()));
                    }
                    for j in 0..n {
                        if matrix[i][j] != f.neg(matrix[j][i]) {
                            return Err(Error::InvalidParameter("alternating Gram is not antisymmetric".into()));
                        }
                    }
                }
                matrix.clone()
            }
            FormKind::Hermitian => {
                let s = sub_order.unwrap();
                for i in 0..n {
                    for j in 0..n {
                        if matrix[i][j] != f.conjugate(matrix[j][i], s)? {
                            return Err(Error::InvalidParameter("Gram is not Hermitian".into()));
                        }
                    }
                }
                matrix.clone()
            }
            FormKind::Quadratic(_) => {
                for i in 0..n {
                    for j in 0..i {
                        if !matrix[i][j].is_zero() {
                            return Err(Error::InvalidParameter("quadratic coefficients must be upper-triangular".into()));
                        }
                    }
                }
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match i.cmp(&j) {
                                std::cmp::Ordering::Less => matrix[i][j],
                                std::cmp::Ordering::Greater => matrix[j][i],
                                std::cmp::Ordering::Equal => f.add(matrix[i][i], matrix[i][i]),
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        let form = Form { kind, n, matrix, polar, field, sub_order };
        if !form.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        Ok(form)
    }

    #[inline]
    pub fn kind(&self) -> FormKind {
        self.kind
    }

    #[inline]
    pub fn family(&self) -> Family {
        Family::of_kind(self.kind)
    }

    /// Vector-space dimension of the ambient space.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn matrix(&self) -> &[Vector] {
        &self.matrix
    }

    fn conj(&self, a: FieldElement) -> FieldElement {
        match self.sub_order {
            Some(s) => self.field.pow(a, s),
            None => a,
        }
    }

    fn check_len(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(v.len(), self.n));
        }
        Ok(())
    }

    fn polar_unchecked(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let f = &*self.field;
        let mut acc = FieldElement::ZERO;
        for i in 0..self.n {
            if u[i].is_zero() {
                continue;
            }
            let mut row = FieldElement::ZERO;
            for j in 0..self.n {
                row = f.add(row, f.mul(self.polar[i][j], self.conj(v[j])));
            }
            acc = f.add(acc, f.mul(u[i], row));
        }
        acc
    }

    fn quadratic_unchecked(&self, v: &[FieldElement]) -> FieldElement {
        let f = &*self.field;
        let mut acc = FieldElement::ZERO;
        for i in 0..self.n {
            if v[i].is_zero() {
                continue;
            }
            for j in i..self.n {
                acc = f.add(acc, f.mul(self.matrix[i][j], f.mul(v[i], v[j])));
            }
        }
        acc
    }

    /// `B(u, v)`; for quadratic forms the polarization `Q(u+v) - Q(u) - Q(v)`,
    /// for Hermitian forms `sum u_i G_ij conj(v_j)`.
    pub fn eval_bilinear(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.polar_unchecked(u, v))
    }

    pub fn eval_quadratic(&self, v: &[FieldElement]) -> Result<FieldElement> {
        if !matches!(self.kind, FormKind::Quadratic(_)) {
            return Err(Error::KindMismatch("eval_quadratic needs a quadratic form"));
        }
        self.check_len(v)?;
        Ok(self.quadratic_unchecked(v))
    }

    /// Whether `<v>` is a point of the polar space (singular for quadrics).
    pub fn is_isotropic(&self, v: &[FieldElement]) -> bool {
        match self.kind {
            FormKind::Alternating => true,
            FormKind::Quadratic(_) => self.quadratic_unchecked(v).is_zero(),
            FormKind::Hermitian => self.polar_unchecked(v, v).is_zero(),
        }
    }

    pub fn perp(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.n {
            return Err(Error::AmbientMismatch(s.ambient(), self.n));
        }
        let f = &*self.field;
        // B(b, x) = 0 is linear in x after conjugating the coefficient row.
        let rows: Vec<Vector> = s
            .basis()
            .iter()
            .map(|b| {
                (0..self.n)
                    .map(|j| {
                        let c = (0..self.n).fold(FieldElement::ZERO, |acc, i| f.add(acc, f.mul(b[i], self.polar[i][j])));
                        match self.sub_order {
                            Some(q) => f.pow(c, q),
                            None => c,
                        }
                    })
                    .collect()
            })
            .collect();
        let ns = nullspace(f, &rows, self.n)?;
        Subspace::from_rows(f, self.n, &ns)
    }

    pub fn radical(&self) -> Subspace {
        self.perp(&Subspace::full(&self.field, self.n)).unwrap()
    }

    fn is_nondegenerate(&self) -> bool {
        let rad = self.radical();
        match self.kind {
            // Only the null set has to avoid the radical.
            FormKind::Quadratic(_) => {
                rad.vectors(&self.field).iter().all(|v| v.iter().all(|x| x.is_zero()) || !self.is_isotropic(v))
            }
            _ => rad.dim() == 0,
        }
    }

    /// Totally isotropic (alternating/Hermitian) or totally singular (quadratic).
    pub fn is_singular(&self, s: &Subspace) -> bool {
        if s.ambient() != self.n {
            return false;
        }
        let b = s.basis();
        let f = &*self.field;
        match self.kind {
            FormKind::Quadratic(_) => {
                // Q(u+v) = Q(u) + Q(v) + B(u,v): basis values and pairwise sums suffice.
                b.iter().all(|u| self.quadratic_unchecked(u).is_zero())
                    && b.iter().enumerate().all(|(i, u)| {
                        b[i + 1..].iter().all(|v| {
                            let w: Vector = u.iter().zip(v).map(|(&x, &y)| f.add(x, y)).collect();
                            self.quadratic_unchecked(&w).is_zero()
                        })
                    })
            }
            _ => b.iter().enumerate().all(|(i, u)| b[i..].iter().all(|v| self.polar_unchecked(u, v).is_zero())),
        }
    }

    /// Largest dimension of a singular subspace, by greedy extension (all maximal
    /// singular subspaces of a nondegenerate form have equal dimension).
    pub fn witt_index(&self) -> usize {
        let f = &*self.field;
        let mut s = Subspace::zero(self.n);
        loop {
            let perp = self.perp(&s).unwrap();
            let next = perp.points(f).into_iter().find(|v| !s.contains_vector(f, v) && self.is_isotropic(v));
            match next {
                Some(v) => {
                    let mut rows = s.basis().to_vec();
                    rows.push(v);
                    s = Subspace::from_rows(f, self.n, &rows).unwrap();
                    debug_assert!(self.is_singular(&s));
                }
                None => return s.dim(),
            }
        }
    }

    /// The form induced on the span of `basis`, written in coordinates of `basis`.
    pub fn restrict(&self, basis: &[Vector]) -> Result<Form> {
        let k = basis.len();
        let matrix: Vec<Vector> = match self.kind {
            FormKind::Quadratic(_) => (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| match i.cmp(&j) {
                            std::cmp::Ordering::Less => self.polar_unchecked(&basis[i], &basis[j]),
                            std::cmp::Ordering::Equal => self.quadratic_unchecked(&basis[i]),
                            std::cmp::Ordering::Greater => FieldElement::ZERO,
                        })
                        .collect()
                })
                .collect(),
            _ => (0..k).map(|i| (0..k).map(|j| self.polar_unchecked(&basis[i], &basis[j])).collect()).collect(),
        };
        Form::new(self.kind, self.field.clone(), matrix)
    }
}

/// Least `(b, c)` (by element index) with `x^2 + bxy + cy^2` anisotropic.
fn least_anisotropic_binary(f: &FieldSpec) -> (FieldElement, FieldElement) {
    for b in f.elements() {
        for c in f.elements() {
            let has_root = f.elements().any(|t| f.add(f.add(f.mul(t, t), f.mul(b, t)), c).is_zero());
            if !has_root {
                return (b, c);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

/// The fixed standard model of `family` in `PG(proj_dim, field)`.
pub fn standard_form(family: Family, proj_dim: usize, field: Arc<FieldSpec>) -> Result<Form> {
    family.validate(proj_dim, field.order())?;
    let n = proj_dim + 1;
    let f = &*field;
    let one = FieldElement::ONE;
    let mut m = vec![vec![FieldElement::ZERO; n]; n];
    match family {
        Family::Symplectic => {
            for i in 0..n / 2 {
                m[2 * i][2 * i + 1] = one;
                m[2 * i + 1][2 * i] = f.neg(one);
            }
        }
        Family::Hyperbolic => {
            for i in 0..n / 2 {
                m[2 * i][2 * i + 1] = one;
            }
        }
        Family::Parabolic => {
            m[0][0] = one;
            for i in 1..=proj_dim / 2 {
                m[2 * i - 1][2 * i] = one;
            }
        }
        Family::Elliptic => {
            let h = n / 2 - 1;
            for i in 0..h {
                m[2 * i][2 * i + 1] = one;
            }
            let (b, c) = least_anisotropic_binary(f);
            m[2 * h][2 * h] = one;
            m[2 * h][2 * h + 1] = b;
            m[2 * h + 1][2 * h + 1] = c;
        }
        Family::Hermitian => {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = one;
            }
        }
    }
    Form::new(family.form_kind(), field, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::enumerate_subspaces;

    fn field(q: usize) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::of_order(q).unwrap())
    }

    fn e(i: usize, n: usize) -> Vector {
        let mut v = vec![FieldElement::ZERO; n];
        v[i] = FieldElement::ONE;
        v
    }

    /// Exhaustive maximum over all subspaces; independent of the greedy route.
    fn witt_oracle(form: &Form) -> usize {
        let f = form.field();
        (0..=form.n())
            .rev()
            .find(|&k| enumerate_subspaces(f, form.n(), k).unwrap().iter().any(|s| form.is_singular(s)))
            .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let w = standard_form(Family::Symplectic, 3, field(2)).unwrap();
        assert_eq!(w.eval_bilinear(&e(0, 4), &e(1, 4)).unwrap(), FieldElement::ONE);
        let h = standard_form(Family::Hyperbolic, 3, field(2)).unwrap();
        let v = vec![FieldElement::ONE, FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO];
        assert_eq!(h.eval_quadratic(&v).unwrap(), FieldElement::ONE);
        assert!(w.eval_quadratic(&v).is_err());
        assert!(w.eval_bilinear(&v, &e(0, 3)).is_err());
        // Hermitian over GF(4): f(v,v) = sum v_i^3; (1, omega, 0, 0) gives 1 + 1 = 0.
        let herm = standard_form(Family::Hermitian, 3, field(4)).unwrap();
        let f4 = herm.field().clone();
        let v = vec![FieldElement::ONE, f4.element(2), FieldElement::ZERO, FieldElement::ZERO];
        assert_eq!(herm.eval_bilinear(&v, &v).unwrap(), FieldElement::ZERO);
        let u = vec![f4.element(2), FieldElement::ZERO, FieldElement::ZERO, FieldElement::ZERO];
        // omega * conj(omega) = omega^3 = 1.
        assert_eq!(herm.eval_bilinear(&u, &u).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn standard_models_have_expected_witt_index() {
        let cases = [
            (Family::Symplectic, 3, 2, 2),
            (Family::Symplectic, 5, 3, 3),
            (Family::Parabolic, 4, 2, 2),
            (Family::Parabolic, 4, 3, 2),
            (Family::Hyperbolic, 5, 2, 3),
            (Family::Hyperbolic, 3, 3, 2),
            (Family::Elliptic, 5, 2, 2),
            (Family::Elliptic, 3, 3, 1),
            (Family::Elliptic, 5, 4, 2),
            (Family::Hermitian, 3, 4, 2),
            (Family::Hermitian, 4, 4, 2),
        ];
        for (fam, d, q, w) in cases {
            let form = standard_form(fam, d, field(q)).unwrap();
            assert_eq!(form.witt_index(), w, "{fam:?}({d},{q})");
            if form.n() <= 6 && q <= 3 {
                assert_eq!(witt_oracle(&form), w, "{fam:?}({d},{q}) oracle");
            }
        }
    }

    #[test]
    fn family_parameter_checks() {
        assert!(standard_form(Family::Symplectic, 4, field(2)).is_err());
        assert!(standard_form(Family::Parabolic, 5, field(2)).is_err());
        assert!(standard_form(Family::Hermitian, 3, field(2)).is_err());
        assert!(standard_form(Family::Hermitian, 3, field(8)).is_err());
    }

    #[test]
    fn perp_examples() {
        let w4 = standard_form(Family::Symplectic, 3, field(2)).unwrap();
        assert_eq!(w4.perp(&Subspace::zero(4)).unwrap().dim(), 4);
        let p = Subspace::span_of(w4.field(), &e(0, 4));
        let pp = w4.perp(&p).unwrap();
        assert_eq!(pp.dim(), 3);
        assert!(pp.contains(w4.field(), &p).unwrap());
        let w6 = standard_form(Family::Symplectic, 5, field(2)).unwrap();
        let line = Subspace::from_rows(w6.field(), 6, &[e(0, 6), e(2, 6)]).unwrap();
        assert!(w6.is_singular(&line));
        let lp = w6.perp(&line).unwrap();
        assert_eq!(lp.dim(), 4);
        assert!(lp.contains(w6.field(), &line).unwrap());
    }

    #[test]
    fn perp_is_involutive_and_reversing() {
        // Parabolic forms in characteristic 2 have a degenerate polarization and are excluded.
        for (fam, d, q) in [(Family::Symplectic, 3, 3), (Family::Parabolic, 4, 3), (Family::Hermitian, 2, 4), (Family::Elliptic, 3, 2)] {
            let form = standard_form(fam, d, field(q)).unwrap();
            let f = form.field();
            let n = form.n();
            for k in 0..=n {
                for s in enumerate_subspaces(f, n, k).unwrap() {
                    let p = form.perp(&s).unwrap();
                    assert_eq!(p.dim() + s.dim(), n);
                    assert_eq!(form.perp(&p).unwrap(), s);
                }
            }
            let lines = enumerate_subspaces(f, n, 2).unwrap();
            let planes = enumerate_subspaces(f, n, 3.min(n)).unwrap();
            for a in lines.iter().take(20) {
                for b in planes.iter().filter(|b| b.contains(f, a).unwrap()).take(3) {
                    assert!(form.perp(a).unwrap().contains(f, &form.perp(b).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn char2_quadrics_polarize_to_alternating() {
        for (fam, d, q) in [(Family::Parabolic, 4, 2), (Family::Elliptic, 5, 2), (Family::Hyperbolic, 3, 4), (Family::Parabolic, 2, 4)] {
            let form = standard_form(fam, d, field(q)).unwrap();
            let f = form.field();
            for v in Subspace::full(f, form.n()).vectors(f) {
                assert!(form.eval_bilinear(&v, &v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn singularity_is_hereditary() {
        let form = standard_form(Family::Hyperbolic, 5, field(2)).unwrap();
        let f = form.field();
        let planes: Vec<_> = enumerate_subspaces(f, 6, 3).unwrap().into_iter().filter(|s| form.is_singular(s)).collect();
        assert_eq!(planes.len(), 30);
        let lines = enumerate_subspaces(f, 6, 2).unwrap();
        for pl in &planes {
            for l in lines.iter().filter(|l| pl.contains(f, l).unwrap()) {
                assert!(form.is_singular(l));
            }
        }
        assert!(form.is_singular(&Subspace::zero(6)));
        let w = standard_form(Family::Symplectic, 3, field(3)).unwrap();
        for p in enumerate_subspaces(w.field(), 4, 1).unwrap() {
            assert!(w.is_singular(&p));
        }
    }

    #[test]
    fn singular_test_matches_full_point_check() {
        for (fam, d, q) in [(Family::Parabolic, 4, 3), (Family::Elliptic, 5, 2), (Family::Hermitian, 3, 4)] {
            let form = standard_form(fam, d, field(q)).unwrap();
            let f = form.field();
            for s in enumerate_subspaces(f, form.n(), 2).unwrap() {
                let all = s.points(f).iter().all(|v| form.is_isotropic(v))
                    && s.basis().iter().all(|u| s.basis().iter().all(|v| form.eval_bilinear(u, v).unwrap().is_zero()));
                assert_eq!(form.is_singular(&s), all);
            }
        }
    }

    #[test]
    fn degenerate_forms_are_rejected() {
        let f = field(3);
        let m = vec![vec![FieldElement::ZERO; 2]; 2];
        assert_eq!(Form::new(FormKind::Alternating, f.clone(), m).unwrap_err(), Error::Degenerate);
        let not_anti = vec![
            vec![FieldElement::ZERO, FieldElement::ONE],
            vec![FieldElement::ONE, FieldElement::ZERO],
        ];
        assert!(Form::new(FormKind::Alternating, f, not_anti).is_err());
    }
}
