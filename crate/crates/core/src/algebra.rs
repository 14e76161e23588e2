//! Lie algebras given by structure constants, and the structural queries
//! built on them: series, centralizers, ideals, quotients and filiform bases.
//!
//! Basis elements are numbered from 1 in every user-facing place (bracket
//! entries, error reports, the file format). Coordinate vectors are plain
//! slices, so `e_i` is the vector with a one at position `i - 1`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel, superspaces_of, unit, Matrix, Subspace};

/// A finite-dimensional algebra `[e_i, e_j] = sum_k c_ij^k e_k`, stored for
/// `i < j` only; antisymmetry is implicit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StructureTable<F: Field> {
    field: F,
    dim: usize,
    // one coefficient vector per pair i < j, in pair_index order
    constants: Vec<Vec<F::Elem>>,
    label: Option<String>,
}

impl<F: Field> fmt::Debug for StructureTable<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StructureTable({}, dim {} over {}",
            self.label.as_deref().unwrap_or("unlabeled"),
            self.dim,
            self.field.spec()
        )?;
        for (i, j, k, c) in self.nonzero_constants() {
            write!(f, "; [{i},{j}]_{k}={}", self.field.render(&c))?;
        }
        write!(f, ")")
    }
}

#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // 0-based i < j
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl<F: Field> StructureTable<F> {
    /// Validated constructor; entries are 1-based `(i, j, k, c_ij^k)` with `i < j`.
    pub fn new(field: F, dim: usize, entries: &[(usize, usize, usize, F::Elem)]) -> Result<Self> {
        let t = Self::new_unchecked(field, dim, entries)?;
        t.check_jacobi()?;
        Ok(t)
    }

    /// Same as [`StructureTable::new`] with integer coefficients reduced into the field.
    pub fn from_i64(field: F, dim: usize, entries: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let e: Vec<_> = entries
            .iter()
            .map(|&(i, j, k, c)| (i, j, k, field.from_i64(c)))
            .collect();
        Self::new(field, dim, &e)
    }

    /// Builds the table without the Jacobi check. Indices are still validated.
    pub fn new_unchecked(
        field: F,
        dim: usize,
        entries: &[(usize, usize, usize, F::Elem)],
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::IndexError("dimension must be positive".into()));
        }
        let npairs = dim * (dim - 1) / 2;
        let mut constants = vec![vec![field.zero(); dim]; npairs];
        for (i, j, k, c) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i == 0 || j == 0 || k == 0 || i > dim || j > dim || k > dim {
                return Err(Error::IndexError(format!(
                    "({i},{j},{k}) outside 1..={dim}"
                )));
            }
            if i >= j {
                return Err(Error::IndexError(format!("({i},{j},{k}) needs i < j")));
            }
            let slot = &mut constants[pair_index(dim, i - 1, j - 1)][k - 1];
            *slot = field.add(slot, c);
        }
        Ok(Self {
            field,
            dim,
            constants,
            label: None,
        })
    }

    /// Table whose brackets are given as vectors for every 0-based pair `i < j`.
    pub(crate) fn from_pair_vectors(
        field: F,
        dim: usize,
        mut bracket: impl FnMut(usize, usize) -> Vec<F::Elem>,
    ) -> Self {
        let mut constants = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for i in 0..dim {
            for j in i + 1..dim {
                constants.push(bracket(i, j));
            }
        }
        Self {
            field,
            dim,
            constants,
            label: None,
        }
    }

    pub fn abelian(field: F, dim: usize) -> Self {
        Self::new_unchecked(field, dim, &[]).expect("no entries")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c_ij^k`, 1-based, any order of `i` and `j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> F::Elem {
        let b = self.basis_bracket(i - 1, j - 1);
        b[k - 1].clone()
    }

    /// Nonzero constants `(i, j, k, c)` with `i < j`, sorted.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, F::Elem)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, c) in self.constants[pair_index(self.dim, i, j)].iter().enumerate() {
                    if !self.field.is_zero(c) {
                        out.push((i + 1, j + 1, k + 1, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// The vector `e_i` (1-based).
    pub fn basis_vector(&self, i: usize) -> Vec<F::Elem> {
        unit(&self.field, self.dim, i - 1)
    }

    /// `[e_i, e_j]` for 0-based indices.
    pub(crate) fn basis_bracket(&self, i: usize, j: usize) -> Vec<F::Elem> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => vec![self.field.zero(); self.dim],
            Less => self.constants[pair_index(self.dim, i, j)].clone(),
            Greater => self.constants[pair_index(self.dim, j, i)]
                .iter()
                .map(|c| self.field.neg(c))
                .collect(),
        }
    }

    fn check_len(&self, v: &[F::Elem]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            })
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &[F::Elem], v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.bracket_raw(u, v))
    }

    pub(crate) fn bracket_raw(&self, u: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![f.zero(); n];
        for i in 0..n {
            for j in i + 1..n {
                // u_i v_j - u_j v_i
                let mut coef = f.zero();
                if !f.is_zero(&u[i]) && !f.is_zero(&v[j]) {
                    coef = f.mul(&u[i], &v[j]);
                }
                if !f.is_zero(&u[j]) && !f.is_zero(&v[i]) {
                    coef = f.sub(&coef, &f.mul(&u[j], &v[i]));
                }
                if f.is_zero(&coef) {
                    continue;
                }
                for (k, c) in self.constants[pair_index(n, i, j)].iter().enumerate() {
                    if !f.is_zero(c) {
                        f.mul_add_assign(&mut out[k], &coef, c);
                    }
                }
            }
        }
        out
    }

    /// `J(e_i, e_j, e_k)` for 0-based indices.
    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<F::Elem> {
        let f = &self.field;
        let e = |x| unit(f, self.dim, x);
        let a = self.bracket_raw(&e(i), &self.basis_bracket(j, k));
        let b = self.bracket_raw(&e(j), &self.basis_bracket(k, i));
        let c = self.bracket_raw(&e(k), &self.basis_bracket(i, j));
        a.iter()
            .zip(&b)
            .zip(&c)
            .map(|((x, y), z)| f.add(&f.add(x, y), z))
            .collect()
    }

    /// First basis triple (1-based) violating the Jacobi identity.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    if self.jacobiator(i, j, k).iter().any(|x| !self.field.is_zero(x)) {
                        return Some((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        None
    }

    pub fn check_jacobi(&self) -> Result<()> {
        match self.jacobi_violation() {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::JacobiViolation(i, j, k)),
        }
    }

    /// Matrix of `v -> [v, b]` stacked over the rows of `s`; its kernel is the centralizer.
    fn centralizer_system(&self, s: &Subspace<F>) -> Matrix<F> {
        let n = self.dim;
        let bs = s.basis_vectors();
        let mut m = Matrix::zeros(self.field.clone(), bs.len() * n, n);
        for (bi, b) in bs.iter().enumerate() {
            for i in 0..n {
                let col = self.bracket_raw(&unit(&self.field, n, i), b);
                for (k, x) in col.into_iter().enumerate() {
                    m.set(bi * n + k, i, x);
                }
            }
        }
        m
    }

    /// `{u : [u, v] = 0 for all v in s}`.
    pub fn centralizer(&self, s: &Subspace<F>) -> Result<Subspace<F>> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: s.ambient_dim(),
            });
        }
        if s.dim() == 0 {
            return Ok(Subspace::full(self.field.clone(), self.dim));
        }
        Ok(kernel(&self.centralizer_system(s)))
    }

    pub fn full_space(&self) -> Subspace<F> {
        Subspace::full(self.field.clone(), self.dim)
    }

    pub fn zero_space(&self) -> Subspace<F> {
        Subspace::zero(self.field.clone(), self.dim)
    }

    pub fn center(&self) -> Subspace<F> {
        self.centralizer(&self.full_space()).expect("ambient matches")
    }

    /// `[s, g]`
    pub fn bracket_with_algebra(&self, s: &Subspace<F>) -> Subspace<F> {
        let mut rows = Vec::new();
        for b in s.basis_vectors() {
            for j in 0..self.dim {
                rows.push(self.bracket_raw(&b, &unit(&self.field, self.dim, j)));
            }
        }
        Subspace::span(self.field.clone(), self.dim, &rows).expect("lengths agree")
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> bool {
        s.basis_vectors().iter().all(|b| {
            (0..self.dim).all(|j| s.contains(&self.bracket_raw(b, &unit(&self.field, self.dim, j))))
        })
    }

    pub fn is_abelian_subspace(&self, s: &Subspace<F>) -> bool {
        let bs = s.basis_vectors();
        bs.iter().enumerate().all(|(a, x)| {
            bs[a + 1..]
                .iter()
                .all(|y| self.bracket_raw(x, y).iter().all(|c| self.field.is_zero(c)))
        })
    }

    /// `C^1 = g, C^k = [C^(k-1), g]`, up to the first zero term or until it
    /// stabilizes (the repeated term is not listed twice).
    pub fn lower_central_series(&self) -> Vec<Subspace<F>> {
        let mut series = vec![self.full_space()];
        loop {
            let last = series.last().expect("nonempty");
            if last.dim() == 0 {
                break;
            }
            let next = self.bracket_with_algebra(last);
            if next == *last {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().map(|s| s.dim()) == Some(0)
    }

    /// Smallest `p` with `C^(p+1) = 0`; `None` for non-nilpotent algebras.
    pub fn nil_index(&self) -> Option<usize> {
        let s = self.lower_central_series();
        (s.last()?.dim() == 0).then(|| s.len() - 1)
    }

    /// `dim C^k = n - k` for every `k` in `2..=n`.
    pub fn is_filiform(&self) -> bool {
        let n = self.dim;
        let s = self.lower_central_series();
        if n == 1 {
            return true;
        }
        if n == 2 {
            // the only 2-dimensional filiform algebra is abelian
            return s.len() == 2;
        }
        s.len() == n && (2..=n).all(|k| s[k - 1].dim() == n - k)
    }

    /// Dimensions of the successive quotients `C^k / C^(k+1)` of a nilpotent
    /// algebra, from `g / C^2` down to the last nonzero term.
    pub fn type_sequence(&self) -> Vec<usize> {
        let s = self.lower_central_series();
        s.windows(2).map(|w| w[0].dim() - w[1].dim()).collect()
    }

    /// The quotient `g / h` on the coset representatives given by the
    /// non-pivot coordinates of `h`.
    pub fn quotient(&self, h: &Subspace<F>) -> Result<Quotient<F>> {
        if !self.is_ideal(h) {
            return Err(Error::NotAnIdeal);
        }
        let reps = h.non_pivots();
        let r = reps.len();
        let f = self.field.clone();
        let project = |v: &[F::Elem]| -> Vec<F::Elem> {
            let red = h.reduce(v);
            reps.iter().map(|&c| red[c].clone()).collect()
        };
        let algebra = Self::from_pair_vectors(f.clone(), r, |a, b| {
            project(&self.basis_bracket(reps[a], reps[b]))
        });
        algebra.check_jacobi()?;
        let columns: Vec<Vec<F::Elem>> = (0..self.dim)
            .map(|j| project(&unit(&f, self.dim, j)))
            .collect();
        let projection = Matrix::from_columns(f, r, &columns)?;
        Ok(Quotient {
            algebra,
            projection,
            representatives: reps,
            ideal: h.clone(),
        })
    }

    /// `[g^(0), g^(1), ..., g^(depth)]` with `g^(i) = g^(i-1) / Z(g^(i-1))`.
    pub fn central_quotient_tower(&self, depth: usize) -> Result<Vec<Self>> {
        let mut out = vec![self.clone()];
        for _ in 0..depth {
            let last = out.last().expect("nonempty");
            let q = last.quotient(&last.center())?.algebra;
            out.push(q);
        }
        Ok(out)
    }

    /// Every ideal of a nilpotent algebra over a finite field, grouped by
    /// nothing in particular but sorted deterministically.
    pub fn ideals(&self) -> Result<Vec<Subspace<F>>> {
        if self.field.elements().is_none() {
            return Err(Error::UnsupportedField(
                "ideal enumeration needs a finite field".into(),
            ));
        }
        let mut all = self.ideals_rec()?;
        sort_subspaces(&mut all);
        Ok(all)
    }

    fn ideals_rec(&self) -> Result<Vec<Subspace<F>>> {
        let n = self.dim;
        let z = self.center();
        if z.dim() == n {
            let mut out = Vec::new();
            for m in 0..=n {
                out.extend(superspaces_of(m, &self.zero_space())?);
            }
            return Ok(out);
        }
        if z.dim() == 0 {
            // not nilpotent: filter every subspace
            let mut out = Vec::new();
            for m in 0..=n {
                out.extend(superspaces_of(m, &self.zero_space())?.filter(|s| self.is_ideal(s)));
            }
            return Ok(out);
        }
        // every nonzero ideal of a nilpotent algebra meets the center
        let lines: Vec<Subspace<F>> = if z.dim() == 1 {
            vec![z.clone()]
        } else {
            superspaces_of(1, &self.zero_space())?
                .filter(|l| l.is_subspace_of(&z))
                .collect()
        };
        let mut seen = HashSet::new();
        let mut out = vec![self.zero_space()];
        for line in lines {
            let q = self.quotient(&line)?;
            for j in q.algebra.ideals_rec()? {
                let ideal = q.preimage(&j);
                if seen.insert(ideal.clone()) {
                    out.push(ideal);
                }
            }
        }
        Ok(out)
    }

    /// The `m`-dimensional ideals.
    pub fn ideals_of_dim(&self, m: usize) -> Result<Vec<Subspace<F>>> {
        Ok(self.ideals()?.into_iter().filter(|s| s.dim() == m).collect())
    }

    /// `P^-1 [P u, P v]` as a new table.
    pub fn apply_basis_change(&self, p: &BasisChange<F>) -> Result<Self> {
        let pm = &p.matrix;
        if pm.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: pm.rows(),
            });
        }
        let inv = pm.inverse()?;
        let cols: Vec<Vec<F::Elem>> = (0..self.dim).map(|j| pm.column(j)).collect();
        Ok(Self::from_pair_vectors(self.field.clone(), self.dim, |a, b| {
            inv.mul_vec(&self.bracket_raw(&cols[a], &cols[b]))
                .expect("dimensions agree")
        }))
    }

    /// Whether the current basis is a filiform basis: compatible with the
    /// lower central series, and for every `i` in `3..=n` either
    /// `[e_1, e_i] = e_(i-1)` or `[e_i, e_n] = e_(i-1)`.
    pub fn is_filiform_basis(&self) -> bool {
        let n = self.dim;
        if n < 3 || !self.is_filiform() {
            return false;
        }
        let series = self.lower_central_series();
        let f = &self.field;
        for k in 2..=n {
            // C^k = <e_2, ..., e_(n-k+1)>
            let idx: Vec<usize> = (1..n - k + 1).collect();
            if series[k - 1] != Subspace::coordinate(f.clone(), n, &idx) {
                return false;
            }
        }
        (3..=n).all(|i| {
            let target = unit(f, n, i - 2);
            self.basis_bracket(0, i - 1) == target || self.basis_bracket(i - 1, n - 1) == target
        })
    }

    /// Whether the basis is adapted: `[e_1, e_(i+1)] = e_i` for all `i >= 2`
    /// (on top of being a filiform basis).
    pub fn is_adapted_basis(&self) -> bool {
        self.is_filiform_basis()
            && (3..=self.dim).all(|i| self.basis_bracket(0, i - 1) == unit(&self.field, self.dim, i - 2))
    }

    /// A change of basis to a filiform basis.
    ///
    /// `e_1` and `e_n` run over independent pairs in a complement of `C^2`;
    /// then `e_(i-1)` is `[e_1, e_i]` when that bracket leaves the next
    /// series term, and `[e_i, e_n]` otherwise. The first pair that yields a
    /// basis satisfying [`StructureTable::is_filiform_basis`] wins.
    pub fn filiform_basis(&self) -> Result<BasisChange<F>> {
        let n = self.dim;
        if n < 3 || !self.is_filiform() {
            return Err(Error::NotFiliform);
        }
        let f = self.field.clone();
        let series = self.lower_central_series();
        let comp = series[1].non_pivots();
        debug_assert_eq!(comp.len(), 2);
        let values = f
            .elements()
            .unwrap_or_else(|| vec![f.zero(), f.one(), f.neg(&f.one())]);
        let term = |k: usize| -> Subspace<F> {
            if k <= series.len() {
                series[k - 1].clone()
            } else {
                self.zero_space()
            }
        };
        let mk = |x: &F::Elem, y: &F::Elem| {
            let mut v = vec![f.zero(); n];
            v[comp[0]] = x.clone();
            v[comp[1]] = y.clone();
            v
        };
        // try the coordinate pair first, then everything else in lex order
        let mut candidates: Vec<(Vec<F::Elem>, Vec<F::Elem>)> = vec![
            (mk(&f.one(), &f.zero()), mk(&f.zero(), &f.one())),
            (mk(&f.zero(), &f.one()), mk(&f.one(), &f.zero())),
        ];
        for a in &values {
            for b in &values {
                for c in &values {
                    for d in &values {
                        let det = f.sub(&f.mul(a, d), &f.mul(b, c));
                        if !f.is_zero(&det) {
                            candidates.push((mk(a, b), mk(c, d)));
                        }
                    }
                }
            }
        }
        for (e1, en) in candidates {
            let mut basis: Vec<Vec<F::Elem>> = vec![Vec::new(); n];
            basis[0] = e1.clone();
            basis[n - 1] = en.clone();
            let mut ok = true;
            for i in (3..=n).rev() {
                let deeper = term(n - i + 3);
                let first = self.bracket_raw(&e1, &basis[i - 1]);
                if !deeper.contains(&first) {
                    basis[i - 2] = first;
                    continue;
                }
                let second = self.bracket_raw(&basis[i - 1], &en);
                if !deeper.contains(&second) {
                    basis[i - 2] = second;
                    continue;
                }
                ok = false;
                break;
            }
            if !ok {
                continue;
            }
            let Ok(m) = Matrix::from_columns(f.clone(), n, &basis) else {
                continue;
            };
            let Ok(change) = BasisChange::new(m) else {
                continue;
            };
            if self.apply_basis_change(&change)?.is_filiform_basis() {
                return Ok(change);
            }
        }
        Err(Error::NotFiliform)
    }
}

pub(crate) fn sort_subspaces<F: Field>(v: &mut [Subspace<F>]) {
    v.sort_by(|a, b| {
        a.dim()
            .cmp(&b.dim())
            .then_with(|| a.basis().entries().cmp(b.basis().entries()))
    });
}

/// An algebra quotient together with its projection.
#[derive(Debug, Clone)]
pub struct Quotient<F: Field> {
    pub algebra: StructureTable<F>,
    /// `(n - m) x n` matrix sending a vector to its coset coordinates.
    pub projection: Matrix<F>,
    /// Original coordinates used as the quotient basis.
    pub representatives: Vec<usize>,
    pub ideal: Subspace<F>,
}

impl<F: Field> Quotient<F> {
    /// Preimage in the original algebra of a subspace of the quotient.
    pub fn preimage(&self, s: &Subspace<F>) -> Subspace<F> {
        let f = self.algebra.field().clone();
        let n = self.projection.cols();
        let mut rows = self.ideal.basis_vectors();
        for w in s.basis_vectors() {
            let mut v = vec![f.zero(); n];
            for (x, &c) in w.into_iter().zip(&self.representatives) {
                v[c] = x;
            }
            rows.push(v);
        }
        Subspace::span(f, n, &rows).expect("lengths agree")
    }

    pub fn project(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.projection.mul_vec(v)
    }
}

/// New basis `e'_j = sum_i P_ij e_i`: the columns of `P` are the new basis
/// vectors in old coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange<F: Field> {
    matrix: Matrix<F>,
}

impl<F: Field> BasisChange<F> {
    pub fn new(matrix: Matrix<F>) -> Result<Self> {
        if !matrix.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { matrix })
    }

    pub fn identity(field: F, n: usize) -> Self {
        Self {
            matrix: Matrix::identity(field, n),
        }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.inverse().expect("invertible by construction"),
        }
    }

    /// Apply `self` first, then `next` (in the transformed basis).
    pub fn then(&self, next: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.mul(&next.matrix)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};

    fn model(f: Fp, n: usize) -> StructureTable<Fp> {
        let e: Vec<_> = (2..n).map(|i| (1, i + 1, i, 1i64)).collect();
        StructureTable::from_i64(f, n, &e).unwrap()
    }

    fn dims<F: Field>(s: &[Subspace<F>]) -> Vec<usize> {
        s.iter().map(|x| x.dim()).collect()
    }

    #[test]
    fn abelian_is_valid() {
        let g = StructureTable::from_i64(Fp::new(3).unwrap(), 4, &[]).unwrap();
        assert!(g.nonzero_constants().is_empty());
        assert_eq!(dims(&g.lower_central_series()), vec![4, 0]);
        assert!(!g.is_filiform());
    }

    #[test]
    fn jacobi_decided_by_evaluation() {
        let f = Fp::new(2).unwrap();
        let entries = [(1, 2, 3, 1i64), (2, 3, 1, 1)];
        let t = StructureTable::from_i64(f, 3, &entries.map(|e| e)).err();
        // evaluate J(e1, e2, e3) by hand from the bilinear bracket
        let g = StructureTable::new_unchecked(f, 3, &[(1, 2, 3, 1), (2, 3, 1, 1)]).unwrap();
        let e = |i| g.basis_vector(i);
        let a = g.bracket(&e(1), &g.bracket(&e(2), &e(3)).unwrap()).unwrap();
        let b = g.bracket(&e(2), &g.bracket(&e(3), &e(1)).unwrap()).unwrap();
        let c = g.bracket(&e(3), &g.bracket(&e(1), &e(2)).unwrap()).unwrap();
        let j: Vec<u32> = (0..3).map(|k| (a[k] + b[k] + c[k]) % 2).collect();
        let violates = j.iter().any(|&x| x != 0);
        assert_eq!(t.is_some(), violates);
        if violates {
            assert_eq!(t, Some(Error::JacobiViolation(1, 2, 3)));
        }
    }

    #[test]
    fn jacobi_violation_detected() {
        let f = Fp::new(5).unwrap();
        // [e1,e2]=e3, [e1,e3]=e1 breaks J(e1,e2,e3)? check against unchecked evaluation
        let bad = StructureTable::from_i64(f, 4, &[(1, 2, 3, 1), (2, 3, 4, 1), (1, 3, 4, 1), (3, 4, 1, 1)]);
        let unchecked =
            StructureTable::new_unchecked(f, 4, &[(1, 2, 3, 1), (2, 3, 4, 1), (1, 3, 4, 1), (3, 4, 1, 1)])
                .unwrap();
        assert_eq!(bad.err().is_some(), unchecked.jacobi_violation().is_some());
    }

    #[test]
    fn index_errors() {
        let f = Fp::new(3).unwrap();
        assert!(matches!(
            StructureTable::from_i64(f, 3, &[(2, 1, 3, 1)]),
            Err(Error::IndexError(_))
        ));
        assert!(matches!(
            StructureTable::from_i64(f, 3, &[(1, 4, 3, 1)]),
            Err(Error::IndexError(_))
        ));
        assert!(matches!(
            StructureTable::from_i64(f, 3, &[(1, 1, 3, 1)]),
            Err(Error::IndexError(_))
        ));
    }

    #[test]
    fn bracket_examples() {
        let f = Fp::new(7).unwrap();
        let g = model(f, 6);
        let u = vec![1, 2, 3, 4, 5, 6];
        assert!(g.bracket(&u, &u).unwrap().iter().all(|&x| x == 0));
        assert_eq!(g.bracket(&g.basis_vector(1), &g.basis_vector(4)).unwrap(), g.basis_vector(3));
        assert_eq!(g.bracket(&g.basis_vector(4), &g.basis_vector(1)).unwrap(), vec![0, 0, 6, 0, 0, 0]);
        assert!(matches!(g.bracket(&u[..3], &u), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn centralizers_and_center() {
        let f = Fp::new(5).unwrap();
        let g = model(f, 6);
        assert_eq!(g.centralizer(&g.zero_space()).unwrap(), g.full_space());
        let ab = StructureTable::abelian(f, 3);
        let line = Subspace::coordinate(f, 3, &[1]);
        assert_eq!(ab.centralizer(&line).unwrap(), ab.full_space());
        assert_eq!(g.center(), Subspace::coordinate(f, 6, &[1]));
        for n in 3..8 {
            assert_eq!(model(f, n).center(), Subspace::coordinate(f, n, &[1]));
        }
        assert!(g.is_ideal(&g.full_space()));
    }

    #[test]
    fn series_and_nilpotency() {
        let f = Fp::new(3).unwrap();
        let g = model(f, 6);
        assert_eq!(dims(&g.lower_central_series()), vec![6, 4, 3, 2, 1, 0]);
        assert!(g.is_filiform());
        assert!(g.is_nilpotent());
        assert_eq!(model(f, 7).nil_index(), Some(6));
        assert_eq!(g.type_sequence(), vec![2, 1, 1, 1, 1]);
        assert!(!StructureTable::abelian(f, 6).is_filiform());
        // sl2-like over F_3: [e1,e2]=e3? use [e1,e2]=e2 (non-nilpotent)
        let s = StructureTable::from_i64(f, 2, &[(1, 2, 2, 1)]).unwrap();
        assert!(!s.is_nilpotent());
        assert_eq!(s.nil_index(), None);
    }

    #[test]
    fn quotients() {
        let f = Fp::new(5).unwrap();
        let g = model(f, 6);
        let q = g.quotient(&g.zero_space()).unwrap();
        assert_eq!(q.algebra, g);
        let qz = g.quotient(&g.center()).unwrap();
        // representatives e1,e3,e4,e5,e6 become e1..e5 of the 5-dim model
        assert_eq!(qz.algebra, model(f, 5));
        let not_ideal = Subspace::coordinate(f, 6, &[5]);
        assert!(matches!(g.quotient(&not_ideal), Err(Error::NotAnIdeal)));
        // projection commutes with brackets
        let u = vec![1, 2, 0, 3, 4, 1];
        let v = vec![0, 1, 2, 3, 0, 4];
        let lhs = qz.project(&g.bracket(&u, &v).unwrap()).unwrap();
        let rhs = qz
            .algebra
            .bracket(&qz.project(&u).unwrap(), &qz.project(&v).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        let tower = g.central_quotient_tower(2).unwrap();
        assert_eq!(tower.len(), 3);
        assert_eq!(tower[2].dim(), 4);
        assert_eq!(g.central_quotient_tower(0).unwrap(), vec![g.clone()]);
    }

    #[test]
    fn ideal_enumeration_trivial_ends() {
        let f = Fp::new(3).unwrap();
        let g = model(f, 5);
        assert_eq!(g.ideals_of_dim(0).unwrap(), vec![g.zero_space()]);
        assert_eq!(g.ideals_of_dim(5).unwrap(), vec![g.full_space()]);
        assert!(matches!(
            StructureTable::abelian(Rationals, 2).ideals(),
            Err(Error::UnsupportedField(_))
        ));
    }

    #[test]
    fn hyperplanes_over_derived_algebra_are_ideals() {
        let f = Fp::new(2).unwrap();
        let g = model(f, 6);
        let c2 = &g.lower_central_series()[1];
        let hyper = g.ideals_of_dim(5).unwrap();
        assert!(hyper.len() >= 3);
        assert!(hyper.iter().all(|h| c2.is_subspace_of(h)));
        assert!(hyper.contains(&c2.with_vector(&g.basis_vector(1))));
    }

    #[test]
    fn basis_change_round_trip() {
        let f = Fp::new(7).unwrap();
        let g = model(f, 5);
        assert_eq!(g.apply_basis_change(&BasisChange::identity(f, 5)).unwrap(), g);
        let p = Matrix::from_i64(
            f,
            5,
            5,
            &[1, 2, 0, 0, 3, 0, 1, 4, 0, 0, 0, 0, 1, 5, 0, 2, 0, 0, 1, 0, 0, 0, 3, 0, 1],
        )
        .unwrap();
        let p = BasisChange::new(p).unwrap();
        let h = g.apply_basis_change(&p).unwrap();
        assert!(h.check_jacobi().is_ok());
        assert_eq!(h.apply_basis_change(&p.inverse()).unwrap(), g);
        let singular = Matrix::zeros(f, 5, 5);
        assert!(matches!(BasisChange::new(singular), Err(Error::SingularMatrix)));
    }

    #[test]
    fn filiform_basis_of_model_is_identity() {
        let f = Fp::new(3).unwrap();
        let g = model(f, 6);
        assert!(g.is_filiform_basis());
        assert!(g.is_adapted_basis());
        let p = g.filiform_basis().unwrap();
        assert_eq!(p, BasisChange::identity(f, 6));
        assert!(matches!(
            StructureTable::abelian(f, 4).filiform_basis(),
            Err(Error::NotFiliform)
        ));
    }
}
