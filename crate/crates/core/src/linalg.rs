//! Dense exact linear algebra: echelon forms, kernels, linear solving and
//! enumeration of subspaces over a finite field.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix over a single field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.render(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, cols: usize, rows: &[Vec<F::Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, data)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Result<Self> {
        Ok(Self::from_rows(field, rows, columns)?.transpose())
    }

    /// Integer entries reduced into the field, row-major.
    pub fn from_i64(field: F, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let data = entries.iter().map(|&v| field.from_i64(v)).collect();
        Self::new(field, rows, cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        f.mul_add_assign(&mut acc, a, b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        let idx = i * other.cols + j;
                        f.mul_add_assign(&mut out.data[idx], a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Self::zeros(f.clone(), n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, f.one());
        }
        let red = rref(&aug);
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Self::zeros(f.clone(), n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Swap rows in place.
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form, rank and pivot columns.
pub fn rref<F: Field>(m: &Matrix<F>) -> Rref<F> {
    let mut a = m.clone();
    let f = m.field.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, pr);
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..a.cols {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..a.cols {
                let t = f.mul(&factor, a.get(r, j));
                let v = f.sub(a.get(i, j), &t);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        matrix: a,
        rank: r,
        pivots,
    }
}

/// A subspace of `F^n`, stored as its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient)?;
        let rows: Vec<String> = (0..self.dim())
            .map(|r| {
                let v: Vec<String> = self.basis.row(r).iter().map(|x| self.basis.field.render(x)).collect();
                format!("({})", v.join(","))
            })
            .collect();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: F, ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        Self::from_matrix(&Matrix::identity(field, ambient))
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix<F>) -> Self {
        let red = rref(m);
        let mut basis = Matrix::zeros(m.field.clone(), red.rank, m.cols);
        for r in 0..red.rank {
            for c in 0..m.cols {
                basis.set(r, c, red.matrix.get(r, c).clone());
            }
        }
        Self {
            ambient: m.cols,
            basis,
            pivots: red.pivots,
        }
    }

    pub fn span(field: F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, ambient, vectors)?))
    }

    /// Span of the standard basis vectors with the given 0-based indices.
    pub fn coordinate(field: F, ambient: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<F::Elem>> = indices
            .iter()
            .map(|&i| unit(&field, ambient, i))
            .collect();
        Self::span(field, ambient, &vectors).expect("lengths agree")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn field(&self) -> &F {
        &self.basis.field
    }

    /// Canonical basis (reduced row-echelon, no zero rows).
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        (0..self.dim()).map(|r| self.basis.row(r).to_vec()).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; they index a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Remainder of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.basis.field;
        let mut out = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let factor = out[pc].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for (c, b) in self.basis.row(r).iter().enumerate() {
                if !f.is_zero(b) {
                    let t = f.mul(&factor, b);
                    out[c] = f.sub(&out[c], &t);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = &self.basis.field;
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Self::span(self.basis.field.clone(), self.ambient, &rows).expect("lengths agree")
    }

    pub fn with_vector(&self, v: &[F::Elem]) -> Self {
        let mut rows = self.basis_vectors();
        rows.push(v.to_vec());
        Self::span(self.basis.field.clone(), self.ambient, &rows).expect("lengths agree")
    }

    /// Image under a square matrix acting on column vectors.
    pub fn image(&self, m: &Matrix<F>) -> Result<Self> {
        let rows = self
            .basis_vectors()
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Self::span(self.basis.field.clone(), m.rows(), &rows)
    }
}

pub(crate) fn unit<F: Field>(field: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Null space `{v : M v = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let f = m.field.clone();
    let red = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !red.pivots.contains(c)).collect();
    let vectors: Vec<Vec<F::Elem>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); m.cols];
            v[fc] = f.one();
            for (r, &pc) in red.pivots.iter().enumerate() {
                v[pc] = f.neg(red.matrix.get(r, fc));
            }
            v
        })
        .collect();
    Subspace::span(f, m.cols, &vectors).expect("lengths agree")
}

/// Particular solution plus the homogeneous solution space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution<F: Field> {
    pub particular: Vec<F::Elem>,
    pub kernel: Subspace<F>,
}

/// Solve `M x = b`; `Ok(None)` when the system is inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F::Elem]) -> Result<Option<Solution<F>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let f = m.field.clone();
    let mut aug = Matrix::zeros(f.clone(), m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let red = rref(&aug);
    if red.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![f.zero(); m.cols];
    for (r, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.matrix.get(r, m.cols).clone();
    }
    Ok(Some(Solution {
        particular: x,
        kernel: kernel(m),
    }))
}

/// Every `dim`-dimensional subspace containing `containing`, each exactly
/// once, in lexicographic order of the echelon completion entries.
pub fn superspaces_of<F: Field>(dim: usize, containing: &Subspace<F>) -> Result<SuperspaceIter<F>> {
    let field = containing.field().clone();
    let elements = field
        .elements()
        .ok_or_else(|| Error::UnsupportedField("subspace enumeration needs a finite field".into()))?;
    let n = containing.ambient_dim();
    let k = containing.dim();
    if dim < k || dim > n {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: dim,
        });
    }
    let complement = containing.non_pivots();
    let d = dim - k;
    let r = complement.len();
    Ok(SuperspaceIter {
        field,
        elements,
        base: containing.clone(),
        complement,
        pivot_set: (0..d).collect(),
        free: Vec::new(),
        counter: Vec::new(),
        r,
        started: false,
        done: false,
    })
}

/// Stream produced by [`superspaces_of`].
pub struct SuperspaceIter<F: Field> {
    field: F,
    elements: Vec<F::Elem>,
    base: Subspace<F>,
    complement: Vec<usize>,
    pivot_set: Vec<usize>,
    // (row, quotient column) positions that are free in the current pattern
    free: Vec<(usize, usize)>,
    counter: Vec<usize>,
    r: usize,
    started: bool,
    done: bool,
}

impl<F: Field> SuperspaceIter<F> {
    fn load_pattern(&mut self) {
        self.free.clear();
        for (row, &pc) in self.pivot_set.iter().enumerate() {
            for c in pc + 1..self.r {
                if !self.pivot_set.contains(&c) {
                    self.free.push((row, c));
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn next_pivot_set(&mut self) -> bool {
        let d = self.pivot_set.len();
        let r = self.r;
        let mut i = d;
        while i > 0 {
            i -= 1;
            if self.pivot_set[i] < r - d + i {
                self.pivot_set[i] += 1;
                for j in i + 1..d {
                    self.pivot_set[j] = self.pivot_set[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn advance_counter(&mut self) -> bool {
        let q = self.elements.len();
        for i in (0..self.counter.len()).rev() {
            self.counter[i] += 1;
            if self.counter[i] < q {
                return true;
            }
            self.counter[i] = 0;
        }
        false
    }

    fn current(&self) -> Subspace<F> {
        let n = self.base.ambient_dim();
        let mut rows = self.base.basis_vectors();
        for (row, &pc) in self.pivot_set.iter().enumerate() {
            let mut v = vec![self.field.zero(); n];
            v[self.complement[pc]] = self.field.one();
            for (slot, &(fr, fc)) in self.free.iter().enumerate() {
                if fr == row {
                    v[self.complement[fc]] = self.elements[self.counter[slot]].clone();
                }
            }
            rows.push(v);
        }
        Subspace::span(self.field.clone(), n, &rows).expect("lengths agree")
    }
}

impl<F: Field> Iterator for SuperspaceIter<F> {
    type Item = Subspace<F>;

    fn next(&mut self) -> Option<Subspace<F>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.load_pattern();
            return Some(self.current());
        }
        if self.advance_counter() {
            return Some(self.current());
        }
        if self.next_pivot_set() {
            self.load_pattern();
            return Some(self.current());
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = fp(5);
        let id = Matrix::identity(f, 3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let z = Matrix::zeros(f, 2, 4);
        let r = rref(&z);
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());

        let m = Matrix::from_i64(fp(2), 2, 2, &[1, 1, 1, 1]).unwrap();
        let r = rref(&m);
        assert_eq!(r.matrix, Matrix::from_i64(fp(2), 2, 2, &[1, 1, 0, 0]).unwrap());
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let f = fp(7);
        assert_eq!(kernel(&Matrix::identity(f, 4)).dim(), 0);
        assert_eq!(kernel(&Matrix::zeros(f, 3, 3)), Subspace::full(f, 3));
        // x + 2y = 0 mod 5: enumerate
        let f5 = fp(5);
        let sols: Vec<(u32, u32)> = (0..5)
            .flat_map(|x| (0..5).map(move |y| (x, y)))
            .filter(|(x, y)| (x + 2 * y) % 5 == 0)
            .collect();
        assert_eq!(sols.len(), 5);
        let k = kernel(&Matrix::from_i64(f5, 1, 2, &[1, 2]).unwrap());
        assert_eq!(k, Subspace::span(f5, 2, &[vec![3, 1]]).unwrap());
        for (x, y) in sols {
            assert!(k.contains(&[x, y]));
        }
    }

    #[test]
    fn solve_examples() {
        let f = fp(11);
        let s = solve(&Matrix::identity(f, 3), &[4, 5, 6]).unwrap().unwrap();
        assert_eq!(s.particular, vec![4, 5, 6]);
        assert_eq!(s.kernel.dim(), 0);

        assert!(solve(&Matrix::zeros(f, 2, 2), &[0, 1]).unwrap().is_none());

        let f3 = fp(3);
        let m = Matrix::from_i64(f3, 1, 2, &[1, 1]).unwrap();
        let s = solve(&m, &[2]).unwrap().unwrap();
        assert_eq!(s.particular, vec![2, 0]);
        assert_eq!(s.kernel, Subspace::span(f3, 2, &[vec![2, 1]]).unwrap());
        // all 9 pairs: the solution set is exactly particular + kernel
        for x in 0..3u32 {
            for y in 0..3u32 {
                let is_sol = (x + y) % 3 == 2;
                let diff = vec![f3.sub(&x, &s.particular[0]), f3.sub(&y, &s.particular[1])];
                assert_eq!(is_sol, s.kernel.contains(&diff));
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = fp(7);
        let m = Matrix::from_i64(f, 3, 3, &[1, 2, 3, 0, 1, 4, 5, 6, 0]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, 3));
        let sing = Matrix::from_i64(f, 2, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn rational_kernel() {
        let q = Rationals;
        let m = Matrix::from_i64(q, 2, 3, &[1, 2, 3, 2, 4, 7]).unwrap();
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        let v = &k.basis_vectors()[0];
        assert!(m.mul_vec(v).unwrap().iter().all(|x| q.is_zero(x)));
    }

    /// q-binomial coefficient [n choose k]_q by the product formula.
    fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    /// All subspaces of F_p^n by brute force over all vector tuples.
    fn brute_subspaces(p: u32, n: usize, m: usize) -> std::collections::HashSet<Subspace<Fp>> {
        let f = fp(p);
        let total = (p as usize).pow(n as u32);
        let vecs: Vec<Vec<u32>> = (0..total)
            .map(|mut i| {
                (0..n)
                    .map(|_| {
                        let d = (i % p as usize) as u32;
                        i /= p as usize;
                        d
                    })
                    .collect()
            })
            .collect();
        let mut out = std::collections::HashSet::new();
        let mut idx = vec![0usize; m];
        loop {
            let rows: Vec<Vec<u32>> = idx.iter().map(|&i| vecs[i].clone()).collect();
            let s = Subspace::span(f, n, &rows).unwrap();
            if s.dim() == m {
                out.insert(s);
            }
            let mut j = m;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < total {
                    break;
                }
                idx[j] = 0;
            }
            if m == 0 {
                return out;
            }
        }
    }

    #[test]
    fn superspace_counts() {
        let f2 = fp(2);
        let line = Subspace::coordinate(f2, 3, &[0]);
        assert_eq!(superspaces_of(3, &line).unwrap().count(), 1);
        assert_eq!(superspaces_of(2, &line).unwrap().count(), 3);
        assert_eq!(gaussian_binomial(2, 1, 2), 3);

        let f5 = fp(5);
        let line = Subspace::coordinate(f5, 7, &[2]);
        let expected = gaussian_binomial(6, 2, 5);
        assert_eq!(expected, 508_431);
        assert_eq!(superspaces_of(3, &line).unwrap().count() as u64, expected);
    }

    #[test]
    fn superspaces_match_brute_force() {
        for (p, n) in [(2u32, 4usize), (3, 3)] {
            let f = fp(p);
            for m in 0..=n {
                let brute = brute_subspaces(p, n, m);
                let fast: Vec<Subspace<Fp>> =
                    superspaces_of(m, &Subspace::zero(f, n)).unwrap().collect();
                let set: std::collections::HashSet<_> = fast.iter().cloned().collect();
                assert_eq!(set.len(), fast.len(), "duplicates p={p} n={n} m={m}");
                assert_eq!(set, brute, "p={p} n={n} m={m}");
                assert_eq!(
                    fast.len() as u64,
                    gaussian_binomial(n as u32, m as u32, p as u64)
                );
            }
            // containing a fixed line
            let line = Subspace::span(f, n, &[vec![f.one(); n]]).unwrap();
            for m in 1..=n {
                let fast: std::collections::HashSet<_> =
                    superspaces_of(m, &line).unwrap().collect();
                let brute: std::collections::HashSet<_> = brute_subspaces(p, n, m)
                    .into_iter()
                    .filter(|s| line.is_subspace_of(s))
                    .collect();
                assert_eq!(fast, brute);
            }
        }
    }

    #[test]
    fn superspaces_need_finite_field() {
        let z = Subspace::zero(Rationals, 2);
        assert!(matches!(superspaces_of(1, &z), Err(Error::UnsupportedField(_))));
    }

    proptest::proptest! {
        #[test]
        fn rref_idempotent_and_kernel_sound(
            entries in proptest::collection::vec(0u32..5, 12),
            rows in 1usize..4,
        ) {
            let f = fp(5);
            let cols = 12 / rows.max(1);
            let m = Matrix::new(f, rows, cols, entries[..rows * cols].to_vec()).unwrap();
            let r1 = rref(&m);
            let r2 = rref(&r1.matrix);
            proptest::prop_assert_eq!(&r1.matrix, &r2.matrix);
            proptest::prop_assert_eq!(r1.rank, r2.rank);
            let k = kernel(&m);
            proptest::prop_assert_eq!(k.dim(), cols - r1.rank);
            for v in k.basis_vectors() {
                proptest::prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| *x == 0));
            }
        }
    }
}
