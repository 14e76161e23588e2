//! Backtracking isomorphism search between filiform algebras over `F_p`.
//!
//! In a filiform basis an isomorphism is determined by the images of `e_1`
//! and `e_n`: every other basis vector is a bracket of those two with
//! something already known. The entries of these two columns are the
//! unknowns; every bracket relation becomes a polynomial equation in them.
//! The search assigns unknowns one at a time, propagating equations that
//! become linear in a single unknown, and skips unknowns that no longer
//! occur in any equation (any value extends to a solution, so 0 is taken).

use std::collections::BTreeMap;

use super::poly::{inv_mod, Poly};
use super::{label_of, Certificate, BudgetInfo, IsoWitness, Verdict};
use crate::algebra::{BasisChange, StructureTable};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::invariants::fingerprint;
use crate::linalg::{unit, Matrix};

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Maximum number of branching nodes; `None` searches exhaustively.
    pub node_budget: Option<u64>,
    /// Compare fingerprints before searching (only in [`decide_isomorphism`]).
    pub use_fingerprints: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            node_budget: None,
            use_fingerprints: true,
        }
    }
}

/// Fingerprint comparison followed, if needed, by [`find_isomorphism`].
pub fn decide_isomorphism(a: &StructureTable<Fp>, b: &StructureTable<Fp>, opts: &SearchOptions) -> Result<Verdict<Fp>> {
    if opts.use_fingerprints {
        let (fa, fb) = (fingerprint(a)?, fingerprint(b)?);
        if let Some(diff) = fa.first_difference(&fb) {
            return Ok(Verdict::NotIsomorphic(Certificate::FingerprintMismatch(diff)));
        }
    }
    find_isomorphism(a, b, opts)
}

/// Search for an isomorphism `a -> b`. Returns a fully verified witness,
/// `NotIsomorphic(ExhaustedSearch)` when the whole space was covered, or
/// `NotSeparated` when the node budget ran out.
pub fn find_isomorphism(a: &StructureTable<Fp>, b: &StructureTable<Fp>, opts: &SearchOptions) -> Result<Verdict<Fp>> {
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
    if n > 9 {
        return Err(Error::UnsupportedDim(n));
    }
    let field = *a.field();
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
    let problem = Problem::new(&a2, &b2);
    let mut found = None;
    let mut dfs = Dfs {
        problem: &problem,
        nodes: 0,
        budget: opts.node_budget,
        on_solution: &mut |m: Matrix<Fp>| {
            let full = pb
                .matrix()
                .mul(&m)
                .and_then(|x| x.mul(pa.inverse().matrix()))
                .expect("square matrices");
            if verify(a, b, &full) {
                found = Some(full);
                true
            } else {
                false
            }
        },
    };
    let flow = dfs.run(problem.constraints.clone(), vec![None; problem.nvars]);
    let nodes = dfs.nodes;
    Ok(match flow {
        Flow::Found => Verdict::Isomorphic(IsoWitness {
            matrix: found.expect("solution recorded"),
            source: label_of(a),
            target: label_of(b),
        }),
        Flow::Continue => Verdict::NotIsomorphic(Certificate::ExhaustedSearch { nodes }),
        Flow::Budget => Verdict::NotSeparated(BudgetInfo {
            ansatz: "isomorphisms determined by the images of e_1 and e_n".into(),
            budget: opts.node_budget.unwrap_or(u64::MAX),
            explored: nodes,
        }),
    })
}

fn verify(a: &StructureTable<Fp>, b: &StructureTable<Fp>, m: &Matrix<Fp>) -> bool {
    super::verify_isomorphism(a, b, m).unwrap_or(false)
}

struct Problem {
    p: u32,
    n: usize,
    nvars: usize,
    order: Vec<usize>,
    /// f_11, f_nn, f_n1, f_1n
    level1: [usize; 4],
    /// Symbolic images of the basis vectors.
    cols: Vec<Vec<Poly>>,
    constraints: Vec<Poly>,
}

/// Nonzero structure constants grouped by 0-based pair.
fn grouped(g: &StructureTable<Fp>) -> BTreeMap<(usize, usize), Vec<(usize, u32)>> {
    let mut out: BTreeMap<(usize, usize), Vec<(usize, u32)>> = BTreeMap::new();
    for (i, j, k, c) in g.nonzero_constants() {
        out.entry((i - 1, j - 1)).or_default().push((k - 1, c));
    }
    out
}

fn poly_bracket(consts: &BTreeMap<(usize, usize), Vec<(usize, u32)>>, x: &[Poly], y: &[Poly], p: u32) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); x.len()];
    for (&(i, j), ks) in consts {
        if (x[i].is_zero() || y[j].is_zero()) && (x[j].is_zero() || y[i].is_zero()) {
            continue;
        }
        let t = x[i].mul(&y[j], p).sub(&x[j].mul(&y[i], p), p);
        if t.is_zero() {
            continue;
        }
        for &(k, c) in ks {
            out[k] = out[k].add(&t.scale(c, p), p);
        }
    }
    out
}

impl Problem {
    fn new(a: &StructureTable<Fp>, b: &StructureTable<Fp>) -> Self {
        let n = a.dim();
        let p = a.field().p();
        // free rows of columns 1 and n: all but row 2 (0-based row 1)
        let rows: Vec<usize> = std::iter::once(0).chain(2..n).collect();
        let var1 = |r: usize| rows.iter().position(|&x| x == r).expect("free row");
        let varn = |r: usize| n - 1 + var1(r);
        let nvars = 2 * (n - 1);
        let level1 = [var1(0), varn(n - 1), var1(n - 1), varn(0)];
        let mut order: Vec<usize> = level1.to_vec();
        order.extend((2..n - 1).rev().map(var1));
        order.extend((2..n - 1).rev().map(varn));

        let mut cols = vec![vec![Poly::zero(); n]; n];
        for &r in &rows {
            cols[0][r] = Poly::var(var1(r));
            cols[n - 1][r] = Poly::var(varn(r));
        }
        let cb = grouped(b);
        let e = |i: usize| unit(a.field(), n, i);
        for i in (2..n).rev() {
            // e_(i-1) (0-based i-1) from e_i (0-based i)
            cols[i - 1] = if a.basis_bracket(0, i) == e(i - 1) {
                poly_bracket(&cb, &cols[0], &cols[i], p)
            } else {
                poly_bracket(&cb, &cols[i], &cols[n - 1], p)
            };
        }
        let ca = grouped(a);
        let mut constraints = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut diff = poly_bracket(&cb, &cols[i], &cols[j], p);
                if let Some(ks) = ca.get(&(i, j)) {
                    for &(k, c) in ks {
                        for (r, d) in diff.iter_mut().enumerate() {
                            *d = d.sub(&cols[k][r].scale(c, p), p);
                        }
                    }
                }
                constraints.extend(diff.into_iter().filter(|d| !d.is_zero()));
            }
        }
        Self {
            p,
            n,
            nvars,
            order,
            level1,
            cols,
            constraints,
        }
    }

    fn matrix(&self, values: &[u32]) -> Matrix<Fp> {
        let field = Fp::new(self.p).expect("prime");
        let cols: Vec<Vec<u32>> = self
            .cols
            .iter()
            .map(|c| c.iter().map(|x| x.eval(values, self.p)).collect())
            .collect();
        Matrix::from_columns(field, self.n, &cols).expect("square")
    }
}

enum Flow {
    Found,
    Continue,
    Budget,
}

struct Dfs<'a> {
    problem: &'a Problem,
    nodes: u64,
    budget: Option<u64>,
    on_solution: &'a mut dyn FnMut(Matrix<Fp>) -> bool,
}

impl Dfs<'_> {
    fn run(&mut self, mut cons: Vec<Poly>, mut assign: Vec<Option<u32>>) -> Flow {
        let p = self.problem.p;
        loop {
            let mut forced = None;
            let mut kept = Vec::with_capacity(cons.len());
            for c in cons {
                match c.as_constant() {
                    Some(0) => {}
                    Some(_) => return Flow::Continue,
                    None => {
                        if forced.is_none() {
                            if let Some((v, a, b)) = c.as_linear_univariate() {
                                forced = Some((v, ((p - b) as u64 * inv_mod(a, p) as u64 % p as u64) as u32));
                            }
                        }
                        kept.push(c);
                    }
                }
            }
            cons = kept;
            match forced {
                Some((v, val)) => {
                    assign[v] = Some(val);
                    cons = cons.iter().map(|c| c.substitute(v, val, p)).collect();
                }
                None => break,
            }
        }
        let l = self.problem.level1;
        if let [Some(f11), Some(fnn), Some(fn1), Some(f1n)] = l.map(|v| assign[v]) {
            let det = (f11 as u64 * fnn as u64 + (p - f1n) as u64 * fn1 as u64) % p as u64;
            if det == 0 {
                return Flow::Continue;
            }
        }
        let mask = cons.iter().fold(0u16, |m, c| m | c.var_mask());
        let next = self
            .problem
            .order
            .iter()
            .copied()
            .find(|&v| assign[v].is_none() && (l.contains(&v) || mask & (1 << v) != 0));
        let Some(v) = next else {
            debug_assert!(cons.is_empty());
            let values: Vec<u32> = assign.iter().map(|x| x.unwrap_or(0)).collect();
            let m = self.problem.matrix(&values);
            return if (self.on_solution)(m) {
                Flow::Found
            } else {
                Flow::Continue
            };
        };
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Flow::Budget;
        }
        for val in 0..p {
            let next_cons: Vec<Poly> = cons.iter().map(|c| c.substitute(v, val, p)).collect();
            let mut next_assign = assign.clone();
            next_assign[v] = Some(val);
            match self.run(next_cons, next_assign) {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }
}
