#![allow(dead_code)]

use filiform::{BasisChange, Fp, Matrix, StructureTable};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fp(p: u32) -> Fp {
    Fp::new(p).unwrap()
}

pub fn random_invertible(field: &Fp, n: usize, rng: &mut ChaCha8Rng) -> Matrix<Fp> {
    loop {
        let data: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..field.p())).collect();
        let m = Matrix::new(*field, n, n, data).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn scramble(g: &StructureTable<Fp>, rng: &mut ChaCha8Rng) -> StructureTable<Fp> {
    let m = random_invertible(g.field(), g.dim(), rng);
    g.apply_basis_change(&BasisChange::new(m).unwrap()).unwrap()
}

/// Brackets of basis vectors computed directly from the table.
pub fn basis_bracket(g: &StructureTable<Fp>, i: usize, j: usize) -> Vec<u32> {
    g.bracket(&g.basis_vector(i), &g.basis_vector(j)).unwrap()
}

/// The definition of a filiform basis, checked without the library's own
/// predicate: `C^k` is spanned by `e_2 .. e_(n-k+1)` and every `e_(i-1)`,
/// `i >= 3`, is `[e_1, e_i]` or `[e_i, e_n]`.
pub fn is_filiform_basis_by_definition(g: &StructureTable<Fp>) -> bool {
    let n = g.dim();
    let series = g.lower_central_series();
    for k in 2..=n {
        let expect: Vec<usize> = (2..=n + 1 - k).collect();
        let term = series.get(k - 1).cloned().unwrap_or_else(|| g.zero_space());
        if term.dim() != expect.len() {
            return false;
        }
        if expect.iter().any(|&i| !term.contains(&g.basis_vector(i))) {
            return false;
        }
    }
    (3..=n).all(|i| {
        let want = g.basis_vector(i - 1);
        basis_bracket(g, 1, i) == want || basis_bracket(g, i, n) == want
    })
}
