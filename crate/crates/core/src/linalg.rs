//! Exact linear algebra over GF(q): canonical subspaces in reduced row-echelon form.

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldSpec};

pub type Vector = Vec<FieldElement>;

/// A linear subspace of GF(q)^n stored by its unique RREF basis.
///
/// Derived ordering compares RREF bases row by row, which for subspaces of equal
/// ambient and dimension is the lexicographic order on the flattened matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

/// In-place Gauss-Jordan elimination; returns the pivot columns.
fn row_reduce(f: &FieldSpec, rows: &mut Vec<Vector>, n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(src) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, src);
        let inv = f.inv(rows[r][col]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col];
                for j in 0..n {
                    let v = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], v);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(f: &FieldSpec, rows: &[Vector], n: usize) -> Result<Vec<Vector>> {
    let s = Subspace::from_rows(f, n, rows)?;
    let free: Vec<usize> = (0..n).filter(|c| !s.pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&fc| {
            let mut v = vec![FieldElement::ZERO; n];
            v[fc] = FieldElement::ONE;
            for (row, &pc) in s.basis.iter().zip(&s.pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect())
}

/// Scales `v` so its first nonzero entry is 1; `None` for the zero vector.
pub fn normalize(f: &FieldSpec, v: &[FieldElement]) -> Option<Vector> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(*lead).unwrap();
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

/// Base-q integer key of a vector.
pub fn encode(v: &[FieldElement], q: usize) -> u64 {
    v.iter().fold(0u64, |acc, x| acc * q as u64 + x.index() as u64)
}

/// Number of k-dimensional subspaces of GF(q)^n.
pub fn gaussian_binomial(n: usize, k: usize, q: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(f: &FieldSpec, ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; ambient];
                v[i] = FieldElement::ONE;
                v
            })
            .collect::<Vec<_>>();
        Subspace::from_rows(f, ambient, &rows).unwrap()
    }

    /// Row space of `rows` in canonical form.
    pub fn from_rows(f: &FieldSpec, ambient: usize, rows: &[Vector]) -> Result<Subspace> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ambient {
                return Err(Error::RaggedMatrix { row: i, len: row.len(), expected: ambient });
            }
            if let Some(x) = row.iter().find(|x| x.index() >= f.order()) {
                return Err(Error::InvalidParameter(format!("entry {} not in GF({})", x.index(), f.order())));
            }
        }
        let mut basis = rows.to_vec();
        let pivots = row_reduce(f, &mut basis, ambient);
        Ok(Subspace { ambient, basis, pivots })
    }

    /// Row space of a non-empty matrix; ambient dimension is taken from the rows.
    pub fn rref(f: &FieldSpec, rows: &[Vector]) -> Result<Subspace> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        Subspace::from_rows(f, n, rows)
    }

    pub fn span_of(f: &FieldSpec, v: &[FieldElement]) -> Subspace {
        Subspace::from_rows(f, v.len(), &[v.to_vec()]).unwrap()
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Vector-space dimension.
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension; the zero space has dimension -1.
    #[inline]
    pub fn proj_dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Residual of `v` after elimination against the basis; zero iff `v` lies in the space.
    fn reduce(&self, f: &FieldSpec, v: &[FieldElement]) -> Vector {
        let mut r = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = r[pc];
            if !c.is_zero() {
                for j in 0..self.ambient {
                    r[j] = f.sub(r[j], f.mul(c, row[j]));
                }
            }
        }
        r
    }

    pub fn contains_vector(&self, f: &FieldSpec, v: &[FieldElement]) -> bool {
        v.len() == self.ambient && self.reduce(f, v).iter().all(|x| x.is_zero())
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, f: &FieldSpec, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.contains_vector(f, v)))
    }

    pub fn join(&self, f: &FieldSpec, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let rows: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_rows(f, self.ambient, &rows)
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self, f: &FieldSpec) -> Subspace {
        let rows = nullspace(f, &self.basis, self.ambient).unwrap();
        Subspace::from_rows(f, self.ambient, &rows).unwrap()
    }

    pub fn meet(&self, f: &FieldSpec, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let a = self.annihilator(f);
        let b = other.annihilator(f);
        Ok(a.join(f, &b)?.annihilator(f))
    }

    /// Coefficients of `v` with respect to the RREF basis, if `v` lies in the space.
    pub fn coordinates(&self, f: &FieldSpec, v: &[FieldElement]) -> Option<Vector> {
        if !self.contains_vector(f, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Linear combination `sum coeffs[i] * basis[i]`.
    pub fn combine(&self, f: &FieldSpec, coeffs: &[FieldElement]) -> Vector {
        let mut v = vec![FieldElement::ZERO; self.ambient];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                for j in 0..self.ambient {
                    v[j] = f.add(v[j], f.mul(*c, row[j]));
                }
            }
        }
        v
    }

    /// All normalized nonzero vectors (projective points) of the subspace.
    pub fn points(&self, f: &FieldSpec) -> Vec<Vector> {
        let k = self.dim();
        let q = f.order();
        let mut out = Vec::with_capacity(((q.pow(k as u32)) - 1) / (q - 1));
        // Coefficient vectors whose first nonzero entry is 1 give each point once;
        // RREF structure makes the combination already normalized.
        for lead in 0..k {
            let tail = k - lead - 1;
            for t in 0..q.pow(tail as u32) {
                let mut coeffs = vec![FieldElement::ZERO; k];
                coeffs[lead] = FieldElement::ONE;
                let mut rest = t;
                for c in coeffs[lead + 1..].iter_mut().rev() {
                    *c = f.element(rest % q);
                    rest /= q;
                }
                out.push(self.combine(f, &coeffs));
            }
        }
        out
    }

    /// All vectors of the subspace, zero included.
    pub fn vectors(&self, f: &FieldSpec) -> Vec<Vector> {
        let k = self.dim();
        let q = f.order();
        (0..q.pow(k as u32))
            .map(|mut t| {
                let mut coeffs = vec![FieldElement::ZERO; k];
                for c in coeffs.iter_mut().rev() {
                    *c = f.element(t % q);
                    t /= q;
                }
                self.combine(f, &coeffs)
            })
            .collect()
    }
}

/// Coefficients `c` with `v = sum c_i basis[i]`, for linearly independent `basis`.
pub fn express(f: &FieldSpec, basis: &[Vector], v: &[FieldElement]) -> Option<Vector> {
    let k = basis.len();
    let n = v.len();
    // Augmented system [B^T | v], one row per coordinate.
    let mut rows: Vec<Vector> = (0..n)
        .map(|j| basis.iter().map(|b| b[j]).chain(std::iter::once(v[j])).collect())
        .collect();
    let pivots = row_reduce(f, &mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut c = vec![FieldElement::ZERO; k];
    for (row, &pc) in rows.iter().zip(&pivots) {
        c[pc] = row[k];
    }
    Some(c)
}

/// Every k-dimensional subspace of GF(q)^n exactly once, in canonical order.
pub fn enumerate_subspaces(f: &FieldSpec, n: usize, k: usize) -> Result<Vec<Subspace>> {
    if k > n {
        return Err(Error::InvalidParameter(format!("subspace dimension {k} exceeds ambient {n}")));
    }
    let q = f.order();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free slots: in row r, columns after its pivot that are not pivots.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut t in 0..total {
            let mut basis = vec![vec![FieldElement::ZERO; n]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r][pc] = FieldElement::ONE;
            }
            for &(r, c) in free.iter().rev() {
                basis[r][c] = f.element(t % q);
                t /= q;
            }
            out.push(Subspace { ambient: n, basis, pivots: pivots.clone() });
        }
        // Next k-combination of 0..n.
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out.sort();
    Ok(out)
}
