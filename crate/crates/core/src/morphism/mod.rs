//! Isomorphisms and isotopisms between algebras: witnesses, verifiers and
//! decision procedures.

mod closed_form;
mod isotopy;
mod poly;
mod relations;
mod search;

pub use closed_form::{closed_form_iso_g7, closed_form_rule_g7, ClosedFormRule};
pub use isotopy::{
    heuristic_isotopism_search, known_isotopisms, principal_isotope, AlbertCheck,
    IsotopyBudget, KnownIsotopism, PrincipalIsotope,
};
pub use relations::{check_dim6_entry_relations, check_dim7_entry_relations};
pub use search::{decide_isomorphism, find_isomorphism, SearchOptions};

use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{unit, Matrix};

/// An isomorphism `F` with `F [u, v]_source = [F u, F v]_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness<F: Field> {
    pub matrix: Matrix<F>,
    pub source: String,
    pub target: String,
}

/// An isotopism `(f, g, h)` with `h [u, v]_source = [f u, g v]_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopyWitness<F: Field> {
    pub f: Matrix<F>,
    pub g: Matrix<F>,
    pub h: Matrix<F>,
    pub source: String,
    pub target: String,
}

impl<F: Field> IsoWitness<F> {
    pub fn into_isotopy(self) -> IsotopyWitness<F> {
        IsotopyWitness {
            f: self.matrix.clone(),
            g: self.matrix.clone(),
            h: self.matrix,
            source: self.source,
            target: self.target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every candidate map was examined.
    ExhaustedSearch { nodes: u64 },
    /// Some isomorphism invariant differs.
    FingerprintMismatch(String),
}

/// What a bounded search tried before giving up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetInfo {
    pub ansatz: String,
    pub budget: u64,
    pub explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<F: Field> {
    Isomorphic(IsoWitness<F>),
    NotIsomorphic(Certificate),
    Isotopic(IsotopyWitness<F>),
    /// Not a proof of anything: the search ran out of budget.
    NotSeparated(BudgetInfo),
}

pub(crate) fn label_of<F: Field>(g: &StructureTable<F>) -> String {
    g.label().unwrap_or("unnamed").to_string()
}

fn check_dims<F: Field>(a: &StructureTable<F>, b: &StructureTable<F>, ms: &[&Matrix<F>]) -> Result<()> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    for m in ms {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if m.rows() != n { m.rows() } else { m.cols() },
            });
        }
    }
    Ok(())
}

/// Whether `m` is invertible and `m [e_i, e_j]_a = [m e_i, m e_j]_b` for every
/// pair of basis vectors.
pub fn verify_isomorphism<F: Field>(a: &StructureTable<F>, b: &StructureTable<F>, m: &Matrix<F>) -> Result<bool> {
    check_dims(a, b, &[m])?;
    if !m.is_invertible() {
        return Ok(false);
    }
    let n = a.dim();
    let cols: Vec<Vec<F::Elem>> = (0..n).map(|j| m.column(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = m.mul_vec(&a.basis_bracket(i, j))?;
            if lhs != b.bracket_raw(&cols[i], &cols[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether all three maps are invertible and `h [e_i, e_j]_a = [f e_i, g e_j]_b`
/// for every ordered pair of basis vectors.
pub fn verify_isotopism<F: Field>(
    a: &StructureTable<F>,
    b: &StructureTable<F>,
    f: &Matrix<F>,
    g: &Matrix<F>,
    h: &Matrix<F>,
) -> Result<bool> {
    check_dims(a, b, &[f, g, h])?;
    if !(f.is_invertible() && g.is_invertible() && h.is_invertible()) {
        return Ok(false);
    }
    let n = a.dim();
    let fc: Vec<Vec<F::Elem>> = (0..n).map(|j| f.column(j)).collect();
    let gc: Vec<Vec<F::Elem>> = (0..n).map(|j| g.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = h.mul_vec(&a.basis_bracket(i, j))?;
            if lhs != b.bracket_raw(&fc[i], &gc[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl<F: Field> IsoWitness<F> {
    pub fn verify(&self, a: &StructureTable<F>, b: &StructureTable<F>) -> Result<bool> {
        verify_isomorphism(a, b, &self.matrix)
    }
}

impl<F: Field> IsotopyWitness<F> {
    pub fn verify(&self, a: &StructureTable<F>, b: &StructureTable<F>) -> Result<bool> {
        verify_isotopism(a, b, &self.f, &self.g, &self.h)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            f: self.f.inverse()?,
            g: self.g.inverse()?,
            h: self.h.inverse()?,
            source: self.target.clone(),
            target: self.source.clone(),
        })
    }
}

/// A matrix that is the identity except for the listed columns, given as
/// 1-based `(column, [(row, value)])` images.
pub fn matrix_from_images<F: Field>(field: &F, n: usize, images: &[(usize, Vec<(usize, F::Elem)>)]) -> Matrix<F> {
    let mut cols: Vec<Vec<F::Elem>> = (0..n).map(|j| unit(field, n, j)).collect();
    for (c, entries) in images {
        let mut v = vec![field.zero(); n];
        for (r, x) in entries {
            v[r - 1] = x.clone();
        }
        cols[c - 1] = v;
    }
    Matrix::from_columns(field.clone(), n, &cols).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{g6, model};
    use crate::field::Fp;

    #[test]
    fn identity_and_scaling_maps() {
        let f5 = Fp::new(5).unwrap();
        let m = model(&f5, 6);
        assert!(verify_isomorphism(&m, &m, &Matrix::identity(f5, 6)).unwrap());
        // e_1 -> e_1, e_i -> 3 e_i for i >= 2 maps g6(0,0,1) onto g6(0,0,2)
        let mut s = Matrix::identity(f5, 6);
        for i in 1..6 {
            s.set(i, i, 3);
        }
        assert!(verify_isomorphism(&g6(&f5, 0, 0, 1), &g6(&f5, 0, 0, 2), &s).unwrap());
        assert!(!verify_isomorphism(&g6(&f5, 0, 0, 1), &g6(&f5, 0, 0, 1), &s).unwrap());
    }

    #[test]
    fn identity_between_different_tables_fails() {
        let f2 = Fp::new(2).unwrap();
        let id = Matrix::identity(f2, 6);
        assert!(!verify_isomorphism(&g6(&f2, 0, 1, 0), &g6(&f2, 0, 1, 1), &id).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f2 = Fp::new(2).unwrap();
        let id = Matrix::identity(f2, 5);
        assert!(matches!(
            verify_isomorphism(&model(&f2, 6), &model(&f2, 6), &id),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn singular_maps_are_rejected() {
        let f3 = Fp::new(3).unwrap();
        let m = model(&f3, 4);
        let z = Matrix::zeros(f3, 4, 4);
        assert!(!verify_isotopism(&m, &m, &z, &z, &z).unwrap());
    }
}
