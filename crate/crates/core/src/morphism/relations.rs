//! Polynomial identities satisfied by the matrix `F = (f_ij)` of any
//! isomorphism between members of the dimension-6 and dimension-7 adapted
//! families. `f_ij` is the `e_i` coefficient of `F e_j`.

use crate::field::Field;
use crate::linalg::Matrix;

struct Ops<'a, F: Field> {
    f: &'a F,
    m: &'a Matrix<F>,
}

impl<F: Field> Ops<'_, F> {
    fn e(&self, i: usize, j: usize) -> F::Elem {
        self.m.get(i - 1, j - 1).clone()
    }
    fn k(&self, v: i64) -> F::Elem {
        self.f.from_i64(v)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.f.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.f.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.f.mul(a, b)
    }
    fn prod(&self, xs: &[&F::Elem]) -> F::Elem {
        xs.iter().fold(self.f.one(), |acc, x| self.f.mul(&acc, x))
    }
    fn pow(&self, a: &F::Elem, e: u32) -> F::Elem {
        (0..e).fold(self.f.one(), |acc, _| self.f.mul(&acc, a))
    }
    fn sum(&self, xs: &[F::Elem]) -> F::Elem {
        xs.iter().fold(self.f.zero(), |acc, x| self.f.add(&acc, x))
    }
}

/// Entry identities for an isomorphism `g6(a, b, c) -> g6(A, B, C)`:
/// the formulas expressing the interior diagonal and super-diagonal entries
/// through the first and last columns, `f_16 = 0`, invertibility, and the
/// three constraint equations on `a, b, c` versus `A, B, C`.
pub fn check_dim6_entry_relations<F: Field>(m: &Matrix<F>, x: [F::Elem; 3], y: [F::Elem; 3]) -> bool {
    if m.rows() != 6 || m.cols() != 6 {
        return false;
    }
    let o = Ops { f: m.field(), m };
    let [a, b, c] = x;
    let [aa, bb, cc] = y;
    let f = |i, j| o.e(i, j);
    let u = o.sub(&f(1, 1), &o.mul(&aa, &f(6, 1))); // f11 - A f61
    let ab51_61 = o.add(&o.mul(&aa, &f(5, 1)), &o.mul(&bb, &f(6, 1)));
    let checks = [
        f(1, 6) == o.f.zero(),
        // (a) - (d)
        f(5, 5) == o.mul(&f(1, 1), &f(6, 6)),
        f(4, 4) == o.mul(&u, &f(5, 5)),
        f(3, 3) == o.mul(&u, &f(4, 4)),
        f(2, 2) == o.mul(&f(1, 1), &f(3, 3)),
        // (e) - (g)
        f(4, 5) == o.add(&o.mul(&u, &f(5, 6)), &o.prod(&[&aa, &f(5, 1), &f(6, 6)])),
        f(3, 4) == o.sub(&o.mul(&u, &f(4, 5)), &o.prod(&[&bb, &f(5, 5), &f(6, 1)])),
        f(2, 3) == o.sub(&o.mul(&f(1, 1), &f(3, 4)), &o.mul(&ab51_61, &f(4, 4))),
        // (h)
        f(3, 5)
            == o.sum(&[
                o.mul(&u, &f(4, 6)),
                o.prod(&[&aa, &f(4, 1), &f(6, 6)]),
                o.mul(&bb, &o.sub(&o.mul(&f(5, 1), &f(6, 6)), &o.mul(&f(5, 6), &f(6, 1)))),
            ]),
        // (i)
        f(2, 4)
            == o.sum(&[
                o.mul(&f(1, 1), &f(3, 5)),
                o.f.neg(&o.mul(&ab51_61, &f(4, 5))),
                o.mul(&o.sub(&o.mul(&aa, &f(4, 1)), &o.mul(&cc, &f(6, 1))), &f(5, 5)),
            ]),
        // (j)
        f(2, 5)
            == o.sum(&[
                o.mul(&f(1, 1), &f(3, 6)),
                o.mul(&aa, &o.sub(&o.mul(&f(4, 1), &f(5, 6)), &o.mul(&f(4, 6), &f(5, 1)))),
                o.mul(&bb, &o.sub(&o.mul(&f(4, 1), &f(6, 6)), &o.mul(&f(4, 6), &f(6, 1)))),
                o.mul(&cc, &o.sub(&o.mul(&f(5, 1), &f(6, 6)), &o.mul(&f(5, 6), &f(6, 1)))),
            ]),
        // invertibility
        !o.f.is_zero(&o.prod(&[&f(1, 1), &f(6, 6), &u])),
        // a f11 = A (f66 + a f61)
        o.mul(&a, &f(1, 1)) == o.mul(&aa, &o.add(&f(6, 6), &o.mul(&a, &f(6, 1)))),
        // b (f11 - A f61)^2 = B (f66 + a f61)
        o.prod(&[&b, &u, &u]) == o.mul(&bb, &o.add(&f(6, 6), &o.mul(&a, &f(6, 1)))),
        o.f.is_zero(&dim6_cubic(&o, [&a, &b, &c], [&aa, &bb, &cc])),
    ];
    checks.iter().all(|&ok| ok)
}

fn dim6_cubic<F: Field>(o: &Ops<'_, F>, x: [&F::Elem; 3], y: [&F::Elem; 3]) -> F::Elem {
    let [a, b, c] = x;
    let [aa, bb, cc] = y;
    let f = |i, j| o.e(i, j);
    let u = o.sub(&f(1, 1), &o.mul(aa, &f(6, 1)));
    let inner = o.sum(&[
        o.prod(&[c, &f(1, 1), &u, &u]),
        o.prod(&[b, bb, &o.sub(&o.mul(aa, &f(6, 1)), &o.mul(&o.k(2), &f(1, 1))), &f(6, 1)]),
        o.prod(&[&o.k(2), a, aa, &f(4, 1)]),
        o.f.neg(&o.prod(&[a, cc, &f(6, 1)])),
        o.prod(&[&o.k(2), aa, &f(4, 6)]),
        o.f.neg(&o.mul(cc, &f(6, 6))),
    ]);
    let first = o.prod(&[&f(1, 1), &f(6, 6), &inner]);
    let second = o.prod(&[aa, &f(5, 6), &f(5, 6), &u]);
    let third = o.prod(&[
        aa,
        aa,
        &o.add(&o.mul(a, &f(5, 1)), &o.mul(&o.k(2), &f(5, 6))),
        &f(5, 1),
        &f(6, 6),
    ]);
    o.sub(&o.sub(&first, &second), &third)
}

/// Entry identities for an isomorphism `g7(a, b, c, d) -> g7(A, B, C, D)`:
/// the diagonal law `f_ii = f11^(7-i) f77`, invertibility, and the four
/// constraint equations. The quintic constraint is read with `f71` in the
/// `(AC + BC)` term.
pub fn check_dim7_entry_relations<F: Field>(m: &Matrix<F>, x: [F::Elem; 4], y: [F::Elem; 4]) -> bool {
    if m.rows() != 7 || m.cols() != 7 {
        return false;
    }
    let o = Ops { f: m.field(), m };
    let [a, b, c, d] = x;
    let [aa, bb, cc, dd] = y;
    let f = |i, j| o.e(i, j);
    let (f11, f77, f71) = (f(1, 1), f(7, 7), f(7, 1));
    let diag = (2..=6).all(|i| f(i, i) == o.mul(&o.pow(&f11, 7 - i as u32), &f77));
    let apb = o.add(&aa, &bb);
    let quintic_lhs = o.sum(&[
        o.prod(&[&d, &o.pow(&f11, 5), &f77]),
        o.f.neg(&o.prod(&[
            &o.add(&o.mul(&o.k(3), &aa), &o.mul(&o.k(2), &bb)),
            &c,
            &o.pow(&f11, 3),
            &f71,
            &f77,
        ])),
        o.prod(&[&a, &aa, &aa, &f11, &f71, &f71, &f77]),
        o.prod(&[
            &o.sum(&[o.prod(&[&b, &aa, &aa]), o.prod(&[&a, &aa, &bb]), o.prod(&[&b, &aa, &bb])]),
            &f11,
            &f71,
            &f71,
            &f77,
        ]),
        o.f.neg(&o.prod(&[&o.k(2), &o.add(&o.mul(&aa, &cc), &o.mul(&bb, &cc)), &f71, &f77, &f77])),
        o.f.neg(&o.prod(&[&bb, &f11, &f(6, 7), &f(6, 7)])),
        o.prod(&[&o.k(2), &bb, &f11, &f(5, 7), &f77]),
    ]);
    let checks = [
        diag,
        !o.f.is_zero(&o.mul(&f11, &f77)),
        o.mul(&a, &o.pow(&f11, 2)) == o.mul(&aa, &f77),
        o.mul(&b, &o.pow(&f11, 2)) == o.mul(&bb, &f77),
        o.mul(&c, &o.pow(&f11, 4))
            == o.add(
                &o.prod(&[&o.k(2), &apb, &apb, &f71, &f77]),
                &o.prod(&[&cc, &f11, &f77]),
            ),
        quintic_lhs == o.prod(&[&dd, &f11, &f77, &f77]),
    ];
    checks.iter().all(|&ok| ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    #[test]
    fn identity_satisfies_relations() {
        let f = Fp::new(5).unwrap();
        assert!(check_dim6_entry_relations(&Matrix::identity(f, 6), [0, 0, 0], [0, 0, 0]));
        assert!(check_dim6_entry_relations(&Matrix::identity(f, 6), [1, 2, 3], [1, 2, 3]));
        assert!(check_dim7_entry_relations(&Matrix::identity(f, 7), [0; 4], [0; 4]));
        assert!(check_dim7_entry_relations(&Matrix::identity(f, 7), [1, 2, 3, 4], [1, 2, 3, 4]));
    }

    #[test]
    fn scaling_witness_satisfies_relations() {
        // e_1 -> e_1, e_i -> 3 e_i: g6(0,0,1) -> g6(0,0,2) over F_5
        let f = Fp::new(5).unwrap();
        let mut s = Matrix::identity(f, 6);
        for i in 1..6 {
            s.set(i, i, 3);
        }
        assert!(check_dim6_entry_relations(&s, [0, 0, 1], [0, 0, 2]));
        assert!(!check_dim6_entry_relations(&s, [0, 0, 1], [0, 0, 1]));
    }
}
