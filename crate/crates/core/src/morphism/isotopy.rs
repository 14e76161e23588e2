//! Isotopisms: principal isotopes, the explicit isotopisms known for the
//! dimension-6 and dimension-7 families, and a bounded search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{label_of, matrix_from_images, verify_isotopism, BudgetInfo, IsotopyWitness, Verdict};
use crate::algebra::{BasisChange, StructureTable};
use crate::error::{Error, Result};
use crate::families::{build, Family};
use crate::field::{Field, Fp};
use crate::linalg::{kernel, Matrix};

/// The two conditions under which a principal isotope is a Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlbertCheck {
    /// `[f u, g v] = -[f v, g u]`
    pub antisymmetric: bool,
    /// `(u*v)*w - (u*w)*v - u*(v*w) = 0` for the product `u*v = [f u, g v]`
    pub jacobi: bool,
}

impl AlbertCheck {
    pub fn is_lie(&self) -> bool {
        self.antisymmetric && self.jacobi
    }
}

/// The algebra with product `u * v = [f u, g v]`.
#[derive(Debug, Clone)]
pub struct PrincipalIsotope<F: Field> {
    /// `products[i * n + j] = e_i * e_j` (0-based).
    pub products: Vec<Vec<F::Elem>>,
    pub albert: AlbertCheck,
    /// The isotope as a Lie algebra, when it is one.
    pub table: Option<StructureTable<F>>,
}

pub fn principal_isotope<F: Field>(g: &StructureTable<F>, f: &Matrix<F>, gmap: &Matrix<F>) -> Result<PrincipalIsotope<F>> {
    let n = g.dim();
    for m in [f, gmap] {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows(),
            });
        }
        if !m.is_invertible() {
            return Err(Error::SingularMatrix);
        }
    }
    let field = g.field().clone();
    let fc: Vec<Vec<F::Elem>> = (0..n).map(|j| f.column(j)).collect();
    let gc: Vec<Vec<F::Elem>> = (0..n).map(|j| gmap.column(j)).collect();
    let mut products = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            products.push(g.bracket_raw(&fc[i], &gc[j]));
        }
    }
    let product = |u: &[F::Elem], v: &[F::Elem]| -> Vec<F::Elem> {
        let fu = f.mul_vec(u).expect("square");
        let gv = gmap.mul_vec(v).expect("square");
        g.bracket_raw(&fu, &gv)
    };
    let antisymmetric = (0..n).all(|i| {
        (i..n).all(|j| {
            let a = &products[i * n + j];
            let b = &products[j * n + i];
            a.iter().zip(b).all(|(x, y)| field.is_zero(&field.add(x, y)))
        })
    });
    let e = |i: usize| crate::linalg::unit(&field, n, i);
    let mut jacobi = true;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let uv = &products[i * n + j];
                let uw = &products[i * n + k];
                let vw = &products[j * n + k];
                let t1 = product(uv, &e(k));
                let t2 = product(uw, &e(j));
                let t3 = product(&e(i), vw);
                if t1
                    .iter()
                    .zip(&t2)
                    .zip(&t3)
                    .any(|((a, b), c)| !field.is_zero(&field.sub(&field.sub(a, b), c)))
                {
                    jacobi = false;
                    break 'outer;
                }
            }
        }
    }
    let albert = AlbertCheck { antisymmetric, jacobi };
    let table = if albert.is_lie() {
        Some(StructureTable::from_pair_vectors(field, n, |a, b| products[a * n + b].clone()))
    } else {
        None
    };
    Ok(PrincipalIsotope {
        products,
        albert,
        table,
    })
}

/// An isotopism stated explicitly for two family members.
#[derive(Debug, Clone)]
pub struct KnownIsotopism {
    pub source: Family<u32>,
    pub target: Family<u32>,
    pub witness: IsotopyWitness<Fp>,
}

fn g6f(a: u32, b: u32, c: u32) -> Family<u32> {
    Family::G6 { a, b, c }
}

fn g7f(a: u32, b: u32, c: u32, d: u32) -> Family<u32> {
    Family::G7 { a, b, c, d }
}

fn known(field: &Fp, source: Family<u32>, target: Family<u32>, f: Matrix<Fp>, g: Matrix<Fp>, h: Matrix<Fp>) -> Result<KnownIsotopism> {
    let (a, b) = (build(field, &source)?, build(field, &target)?);
    Ok(KnownIsotopism {
        witness: IsotopyWitness {
            f,
            g,
            h,
            source: label_of(&a),
            target: label_of(&b),
        },
        source,
        target,
    })
}

/// The diagonal isotopism `g7(1, b, 0, 0) -> g7(1, 1, 0, 0)`; needs `2`, `b`
/// and `b + 1` invertible.
pub fn scaling_isotopism_g7(b: u32, p: u32) -> Result<KnownIsotopism> {
    let field = Fp::new(p)?;
    let b = b % p;
    if p == 2 || b == 0 || (b + 1) % p == 0 {
        return Err(Error::WrongCharacteristic(format!(
            "the scaling isotopism needs 2, b and b+1 invertible (b = {b}, p = {p})"
        )));
    }
    let inv = |x: u32| field.inv(&x).expect("nonzero");
    let b1 = inv(b + 1);
    let f66 = field.mul(&field.mul(&2, &b), &b1);
    let f55 = field.mul(&field.mul(&2, &b1), &f66);
    let f44 = field.mul(&field.mul(&4, &field.mul(&b1, &b1)), &f66);
    let f = matrix_from_images(&field, 7, &[(3, vec![(3, f44)]), (4, vec![(4, f44)]), (5, vec![(5, f55)]), (6, vec![(6, f66)])]);
    let h = matrix_from_images(&field, 7, &[(2, vec![(2, f44)]), (3, vec![(3, f44)]), (4, vec![(4, f55)]), (5, vec![(5, f66)])]);
    known(&field, g7f(1, b, 0, 0), g7f(1, 1, 0, 0), f.clone(), f, h)
}

/// Every explicit isomorphism-class-merging isotopism known for dimension
/// 6 or 7 over `F_p`, including the scalings between `g6(0, 0, c)`.
pub fn known_isotopisms(dim: usize, p: u32) -> Result<Vec<KnownIsotopism>> {
    let field = Fp::new(p)?;
    let neg = |x: u32| field.neg(&(x % p));
    let mut out = Vec::new();
    match dim {
        6 => {
            for c in 1..p {
                for cc in 1..p {
                    let s = field.mul(&c, &field.inv(&cc)?);
                    let m = matrix_from_images(&field, 6, &(2..=6).map(|i| (i, vec![(i, s)])).collect::<Vec<_>>());
                    out.push(known(&field, g6f(0, 0, c), g6f(0, 0, cc), m.clone(), m.clone(), m)?);
                }
            }
            let f = matrix_from_images(&field, 6, &[(4, vec![(4, 1), (3, neg(1))])]);
            let h = matrix_from_images(&field, 6, &[(3, vec![(3, 1), (2, neg(1))])]);
            out.push(known(&field, g6f(0, 1, 1), g6f(0, 1, 0), f.clone(), f, h)?);
        }
        7 => {
            let f = matrix_from_images(&field, 7, &[(4, vec![(4, 1), (3, neg(1))])]);
            let h = matrix_from_images(&field, 7, &[(3, vec![(3, 1), (2, neg(1))])]);
            out.push(known(&field, g7f(0, 0, 1, 1), g7f(0, 0, 1, 0), f.clone(), f, h)?);

            let f = matrix_from_images(&field, 7, &[(1, vec![(1, 1), (7, 1)]), (7, vec![(6, 1), (7, 1)])]);
            let h = matrix_from_images(
                &field,
                7,
                &[
                    (4, vec![(4, 1), (3, neg(1))]),
                    (5, vec![(5, 1), (4, neg(1))]),
                    (6, vec![(6, 1), (5, 1), (4, neg(1))]),
                ],
            );
            out.push(known(&field, g7f(0, 1, 1, 0), g7f(0, 1, 0, 0), f.clone(), f, h)?);

            for c in 0..p {
                for d in 0..p {
                    if c == 0 && d == 0 {
                        continue;
                    }
                    // 2c^2 - d
                    let t = field.sub(&field.mul(&2, &field.mul(&c, &c)), &d);
                    let two_c = neg(field.mul(&2, &c));
                    let f = matrix_from_images(
                        &field,
                        7,
                        &[(4, vec![(4, 1), (3, two_c)]), (5, vec![(5, 1), (4, neg(c)), (3, t)])],
                    );
                    let h = matrix_from_images(
                        &field,
                        7,
                        &[(3, vec![(3, 1), (2, two_c)]), (4, vec![(4, 1), (3, neg(c)), (2, t)])],
                    );
                    out.push(known(&field, g7f(1, 0, c, d), g7f(1, 0, 0, 0), f.clone(), f, h)?);
                }
            }
            if p > 2 {
                for b in 2..=p - 2 {
                    out.push(scaling_isotopism_g7(b, p)?);
                }
            }
            if p == 2 {
                let f = matrix_from_images(&field, 7, &[(4, vec![(3, 1), (4, 1)])]);
                let id = Matrix::identity(field, 7);
                out.push(known(&field, Family::H7Type3(1), Family::H7Type3(0), f.clone(), f, id)?);
            }
        }
        n => return Err(Error::UnsupportedDim(n)),
    }
    Ok(out)
}

/// Limits for [`heuristic_isotopism_search`].
#[derive(Debug, Clone)]
pub struct IsotopyBudget {
    /// Number of maps `f` tried.
    pub max_maps: u64,
    /// Candidate `(g, h)` pairs examined per `f`.
    pub max_solutions_per_map: u64,
    pub seed: u64,
}

impl Default for IsotopyBudget {
    fn default() -> Self {
        Self {
            max_maps: 2_000,
            max_solutions_per_map: 64,
            seed: 0,
        }
    }
}

/// Positions `(row, col)` of a map preserving the filiform flag
/// `C^k = <e_2, ..., e_(n-k+1)>`.
fn flag_positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for col in 0..n {
        if col == 0 || col == n - 1 {
            out.extend((0..n).map(|r| (r, col)));
        } else {
            out.extend((1..=col).map(|r| (r, col)));
        }
    }
    out
}

/// Search for an isotopism `a -> b` among maps preserving the lower central
/// series. `f` runs over flag-preserving maps by increasing distance from the
/// identity; for each `f` the isotopism equations are linear in `g` and in
/// `h` restricted to `C^2`, and solutions of that system are tried.
/// Failure is reported as `NotSeparated`, never as non-isotopy.
pub fn heuristic_isotopism_search(a: &StructureTable<Fp>, b: &StructureTable<Fp>, budget: &IsotopyBudget) -> Result<Verdict<Fp>> {
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
    if !a.is_filiform() || !b.is_filiform() {
        return Err(Error::NotFiliform);
    }
    let field = *a.field();
    let p = field.p();
    let to_basis = |g: &StructureTable<Fp>| -> Result<BasisChange<Fp>> {
        if g.is_filiform_basis() {
            Ok(BasisChange::identity(field, n))
        } else {
            g.filiform_basis()
        }
    };
    let (pa, pb) = (to_basis(a)?, to_basis(b)?);
    let a2 = a.apply_basis_change(&pa)?;
    let b2 = b.apply_basis_change(&pb)?;
    let positions = flag_positions(n);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut tried = 0u64;
    let ansatz = "f, g preserve the lower central series; h is the identity off C^2".to_string();

    let identity = Matrix::identity(field, n);
    let mut distance = 0;
    while distance <= positions.len() {
        let mut combo: Vec<usize> = (0..distance).collect();
        loop {
            // all non-identity value choices on the chosen positions
            let mut values = vec![0u32; distance];
            let alternatives = |pos: (usize, usize)| -> Vec<u32> {
                let base = u32::from(pos.0 == pos.1);
                (0..p).filter(|&v| v != base).collect()
            };
            let alts: Vec<Vec<u32>> = combo.iter().map(|&c| alternatives(positions[c])).collect();
            if alts.iter().all(|x| !x.is_empty()) {
                loop {
                    let mut f = identity.clone();
                    for (t, &c) in combo.iter().enumerate() {
                        let (r, col) = positions[c];
                        f.set(r, col, alts[t][values[t] as usize]);
                    }
                    if f.is_invertible() {
                        tried += 1;
                        if tried > budget.max_maps {
                            return Ok(Verdict::NotSeparated(BudgetInfo {
                                ansatz,
                                budget: budget.max_maps,
                                explored: tried - 1,
                            }));
                        }
                        if let Some((g, h)) = solve_for_g_h(&a2, &b2, &f, &positions, budget, &mut rng) {
                            let conj = |m: &Matrix<Fp>| {
                                pb.matrix()
                                    .mul(m)
                                    .and_then(|x| x.mul(pa.inverse().matrix()))
                                    .expect("square")
                            };
                            let (f, g, h) = (conj(&f), conj(&g), conj(&h));
                            if verify_isotopism(a, b, &f, &g, &h)? {
                                return Ok(Verdict::Isotopic(IsotopyWitness {
                                    f,
                                    g,
                                    h,
                                    source: label_of(a),
                                    target: label_of(b),
                                }));
                            }
                        }
                    }
                    // odometer over value choices
                    let mut t = 0;
                    while t < distance {
                        values[t] += 1;
                        if (values[t] as usize) < alts[t].len() {
                            break;
                        }
                        values[t] = 0;
                        t += 1;
                    }
                    if t == distance {
                        break;
                    }
                }
            }
            if !next_combination(&mut combo, positions.len()) {
                break;
            }
        }
        distance += 1;
    }
    Ok(Verdict::NotSeparated(BudgetInfo {
        ansatz,
        budget: budget.max_maps,
        explored: tried,
    }))
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Solve `[f e_i, g e_j]_b = h [e_i, e_j]_a` for flag-preserving `g` and
/// `h` on `C^2 = <e_2, ..., e_(n-1)>`, then look for an invertible pair.
fn solve_for_g_h(
    a: &StructureTable<Fp>,
    b: &StructureTable<Fp>,
    f: &Matrix<Fp>,
    positions: &[(usize, usize)],
    budget: &IsotopyBudget,
    rng: &mut ChaCha8Rng,
) -> Option<(Matrix<Fp>, Matrix<Fp>)> {
    let field = *a.field();
    let p = field.p();
    let n = a.dim();
    let ng = positions.len();
    let inner = n - 2;
    // unknowns: g at `positions`, then H[k][r] for k, r in 0..inner
    // (coefficient of e_(r+2) in h(e_(k+2)))
    let nunk = ng + inner * inner;
    let fc: Vec<Vec<u32>> = (0..n).map(|j| f.column(j)).collect();
    // [f e_i, e_t]_b for all i, t
    let fb: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|i| (0..n).map(|t| b.bracket_raw(&fc[i], &crate::linalg::unit(&field, n, t))).collect())
        .collect();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let br = a.basis_bracket(i, j);
            for r in 0..n {
                let mut row = vec![0u32; nunk];
                for (u, &(t, col)) in positions.iter().enumerate() {
                    if col == j {
                        row[u] = fb[i][t][r];
                    }
                }
                if (1..=inner).contains(&r) {
                    for (k, coef) in br.iter().enumerate() {
                        if *coef != 0 && (1..=inner).contains(&k) {
                            let u = ng + (k - 1) * inner + (r - 1);
                            row[u] = field.sub(&row[u], coef);
                        }
                    }
                } else if br[1..=inner].iter().any(|&c| c != 0) || br[0] != 0 || br[n - 1] != 0 {
                    // brackets of a filiform algebra lie in C^2
                    debug_assert!(br[0] == 0 && br[n - 1] == 0);
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(field, 1, nunk)
    } else {
        Matrix::from_rows(field, nunk, &rows).ok()?
    };
    let ker = kernel(&system).basis_vectors();
    let k = ker.len();
    if k == 0 {
        return None;
    }
    let total = (p as u64).checked_pow(k as u32);
    let exhaustive = total.is_some_and(|t| t <= budget.max_solutions_per_map);
    let count = if exhaustive { total.unwrap_or(0) } else { budget.max_solutions_per_map };
    for s in 0..count {
        let coeffs: Vec<u32> = if exhaustive {
            let mut x = s;
            (0..k)
                .map(|_| {
                    let d = (x % p as u64) as u32;
                    x /= p as u64;
                    d
                })
                .collect()
        } else {
            (0..k).map(|_| rng.gen_range(0..p)).collect()
        };
        let mut sol = vec![0u32; nunk];
        for (c, v) in coeffs.iter().zip(&ker) {
            if *c == 0 {
                continue;
            }
            for (x, y) in sol.iter_mut().zip(v) {
                *x = field.add(x, &field.mul(c, y));
            }
        }
        let mut g = Matrix::zeros(field, n, n);
        for (u, &(r, c)) in positions.iter().enumerate() {
            g.set(r, c, sol[u]);
        }
        if !g.is_invertible() {
            continue;
        }
        let mut h = Matrix::identity(field, n);
        for kk in 0..inner {
            for r in 0..inner {
                h.set(r + 1, kk + 1, sol[ng + kk * inner + r]);
            }
        }
        if h.is_invertible() {
            return Some((g, h));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{g6, model};

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn trivial_isotope() {
        let f = fp(3);
        let g = model(&f, 6);
        let id = Matrix::identity(f, 6);
        let iso = principal_isotope(&g, &id, &id).unwrap();
        assert!(iso.albert.is_lie());
        assert_eq!(iso.table.unwrap().nonzero_constants(), g.nonzero_constants());
    }

    #[test]
    fn non_symmetric_pair_breaks_antisymmetry() {
        let f = fp(3);
        let g = model(&f, 6);
        let id = Matrix::identity(f, 6);
        let mut s = Matrix::identity(f, 6);
        s.set(0, 0, 2);
        let iso = principal_isotope(&g, &id, &s).unwrap();
        assert!(!iso.albert.antisymmetric);
        assert!(iso.table.is_none());
    }

    #[test]
    fn principal_isotope_of_type3() {
        let f2 = fp(2);
        let h0 = build(&f2, &Family::H7Type3(0)).unwrap();
        let h1 = build(&f2, &Family::H7Type3(1)).unwrap();
        let f = matrix_from_images(&f2, 7, &[(4, vec![(3, 1), (4, 1)])]);
        let iso = principal_isotope(&h0, &f, &f).unwrap();
        assert!(iso.albert.is_lie());
        assert_eq!(iso.table.unwrap().nonzero_constants(), h1.nonzero_constants());
    }

    #[test]
    fn known_isotopisms_verify() {
        for (dim, p) in [(6, 2), (6, 5), (7, 2), (7, 3), (7, 7)] {
            let field = fp(p);
            for k in known_isotopisms(dim, p).unwrap() {
                let a = build(&field, &k.source).unwrap();
                let b = build(&field, &k.target).unwrap();
                assert!(k.witness.verify(&a, &b).unwrap(), "{} -> {} over F_{p}", k.source, k.target);
            }
        }
    }

    #[test]
    fn scaling_needs_odd_characteristic() {
        assert!(matches!(scaling_isotopism_g7(1, 2), Err(Error::WrongCharacteristic(_))));
        assert!(matches!(scaling_isotopism_g7(6, 7), Err(Error::WrongCharacteristic(_))));
        assert!(scaling_isotopism_g7(3, 7).is_ok());
    }

    #[test]
    fn search_rediscovers_isotopism() {
        let f2 = fp(2);
        let v = heuristic_isotopism_search(&g6(&f2, 0, 1, 1), &g6(&f2, 0, 1, 0), &IsotopyBudget::default()).unwrap();
        assert!(matches!(v, Verdict::Isotopic(_)));
        let g = g6(&f2, 1, 0, 0);
        let v = heuristic_isotopism_search(&g, &g, &IsotopyBudget::default()).unwrap();
        assert!(matches!(v, Verdict::Isotopic(_)));
    }

    #[test]
    fn hard_pair_is_not_separated() {
        let f2 = fp(2);
        let budget = IsotopyBudget {
            max_maps: 300,
            ..IsotopyBudget::default()
        };
        let v = heuristic_isotopism_search(&g6(&f2, 1, 0, 0), &g6(&f2, 1, 1, 0), &budget).unwrap();
        assert!(matches!(v, Verdict::NotSeparated(_)));
    }
}
