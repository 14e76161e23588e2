//! Normal-form families of filiform Lie algebras in dimensions 5 to 7.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::field::Field;

/// A family member. Parameters of `G6`/`G7` are arbitrary field elements;
/// the characteristic-2 types take `a` in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family<E> {
    /// Only `[e_1, e_(i+1)] = e_i`.
    Model(usize),
    /// Model brackets in dimension 5 plus `[e_4, e_5] = e_2`.
    Dim5NonModel,
    G6 { a: E, b: E, c: E },
    G7 { a: E, b: E, c: E, d: E },
    /// Type 2 filiform basis, characteristic 2 only.
    G7Type2(u8),
    /// Type 3 filiform basis, characteristic 2 only.
    H7Type3(u8),
}

impl<E> Family<E> {
    pub fn dim(&self) -> usize {
        match self {
            Family::Model(n) => *n,
            Family::Dim5NonModel => 5,
            Family::G6 { .. } => 6,
            Family::G7 { .. } | Family::G7Type2(_) | Family::H7Type3(_) => 7,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::Model(_) => "model",
            Family::Dim5NonModel => "dim5",
            Family::G6 { .. } => "g6",
            Family::G7 { .. } => "g7",
            Family::G7Type2(_) => "g7type2",
            Family::H7Type3(_) => "h7type3",
        }
    }
}

impl Family<u32> {
    /// Parse a CLI tag with integer parameters. Parameters are reduced
    /// modulo `p` by [`build`].
    pub fn from_tag(tag: &str, params: &[i64], p: u32) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::IndexError(format!(
                    "family {tag} takes {k} parameters, got {}",
                    params.len()
                )))
            }
        };
        let r = |v: i64| -> u32 { v.rem_euclid(p.max(1) as i64) as u32 };
        let bit = |v: i64| -> Result<u8> {
            match v {
                0 | 1 => Ok(v as u8),
                _ => Err(Error::IndexError(format!("{tag} parameter must be 0 or 1"))),
            }
        };
        Ok(match tag {
            "model" => {
                want(1)?;
                if params[0] < 1 {
                    return Err(Error::UnsupportedDim(0));
                }
                Family::Model(params[0] as usize)
            }
            "dim5" => {
                want(0)?;
                Family::Dim5NonModel
            }
            "g6" => {
                want(3)?;
                Family::G6 {
                    a: r(params[0]),
                    b: r(params[1]),
                    c: r(params[2]),
                }
            }
            "g7" => {
                want(4)?;
                Family::G7 {
                    a: r(params[0]),
                    b: r(params[1]),
                    c: r(params[2]),
                    d: r(params[3]),
                }
            }
            "g7type2" => {
                want(1)?;
                Family::G7Type2(bit(params[0])?)
            }
            "h7type3" => {
                want(1)?;
                Family::H7Type3(bit(params[0])?)
            }
            other => return Err(Error::IndexError(format!("unknown family tag {other}"))),
        })
    }

    /// Lexicographic key used to pick class representatives.
    pub fn sort_key(&self) -> (u8, Vec<u32>) {
        match self {
            Family::Model(n) => (0, vec![*n as u32]),
            Family::Dim5NonModel => (1, vec![]),
            Family::G6 { a, b, c } => (2, vec![*a, *b, *c]),
            Family::G7 { a, b, c, d } => (3, vec![*a, *b, *c, *d]),
            Family::G7Type2(a) => (4, vec![*a as u32]),
            Family::H7Type3(a) => (5, vec![*a as u32]),
        }
    }
}

impl<E: fmt::Display> fmt::Display for Family<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Model(n) => write!(f, "model{n}"),
            Family::Dim5NonModel => write!(f, "n5"),
            Family::G6 { a, b, c } => write!(f, "g6[{a},{b},{c}]"),
            Family::G7 { a, b, c, d } => write!(f, "g7[{a},{b},{c},{d}]"),
            Family::G7Type2(a) => write!(f, "g7_a[{a}]"),
            Family::H7Type3(a) => write!(f, "h7_a[{a}]"),
        }
    }
}

fn model_entries<E: Clone>(n: usize, one: &E) -> Vec<(usize, usize, usize, E)> {
    (2..n).map(|i| (1, i + 1, i, one.clone())).collect()
}

/// Structure table of a family member, labeled like `g7[1,0,0,3]@F_11`.
pub fn build<F: Field>(field: &F, family: &Family<F::Elem>) -> Result<StructureTable<F>> {
    let f = field;
    let one = f.one();
    let mut e = match family {
        Family::Model(n) => model_entries(*n, &one),
        Family::Dim5NonModel => {
            let mut e = model_entries(5, &one);
            e.push((4, 5, 2, one.clone()));
            e
        }
        Family::G6 { a, b, c } => {
            let mut e = model_entries(6, &one);
            e.extend([
                (4, 5, 2, a.clone()),
                (4, 6, 2, b.clone()),
                (4, 6, 3, a.clone()),
                (5, 6, 2, c.clone()),
                (5, 6, 3, b.clone()),
                (5, 6, 4, a.clone()),
            ]);
            e
        }
        Family::G7 { a, b, c, d } => {
            let ab = f.add(a, b);
            let mut e = model_entries(7, &one);
            e.extend([
                (4, 7, 2, a.clone()),
                (5, 6, 2, b.clone()),
                (5, 7, 2, c.clone()),
                (5, 7, 3, ab.clone()),
                (6, 7, 2, d.clone()),
                (6, 7, 3, c.clone()),
                (6, 7, 4, ab),
            ]);
            e
        }
        Family::G7Type2(a) | Family::H7Type3(a) => {
            if f.spec().characteristic() != 2 {
                return Err(Error::WrongCharacteristic(format!(
                    "{} exists only in characteristic 2",
                    family.tag()
                )));
            }
            if *a > 1 {
                return Err(Error::IndexError("parameter must be 0 or 1".into()));
            }
            let a = if *a == 1 { one.clone() } else { f.zero() };
            let o = one.clone();
            if matches!(family, Family::G7Type2(_)) {
                vec![
                    (1, 3, 2, o.clone()),
                    (4, 6, 2, o.clone()),
                    (5, 7, 2, o.clone()),
                    (4, 7, 3, o.clone()),
                    (5, 6, 3, o.clone()),
                    (1, 5, 4, o.clone()),
                    (1, 6, 5, o.clone()),
                    (1, 7, 6, o.clone()),
                    (6, 7, 3, o),
                    (6, 7, 4, a),
                ]
            } else {
                vec![
                    (3, 7, 2, o.clone()),
                    (4, 6, 2, o.clone()),
                    (1, 4, 3, o.clone()),
                    (5, 6, 3, o.clone()),
                    (5, 7, 4, o.clone()),
                    (6, 7, 5, o.clone()),
                    (1, 7, 6, o),
                    (4, 7, 2, a),
                ]
            }
        }
    };
    e.retain(|t| !f.is_zero(&t.3));
    let label = format!("{}@{}", display_family(f, family), f.spec());
    Ok(StructureTable::new(f.clone(), family.dim(), &e)?.with_label(label))
}

/// `Display` for a family whose parameters are rendered through the field.
pub fn display_family<F: Field>(f: &F, family: &Family<F::Elem>) -> String {
    let r = |x: &F::Elem| f.render(x);
    match family {
        Family::Model(n) => format!("model{n}"),
        Family::Dim5NonModel => "n5".into(),
        Family::G6 { a, b, c } => format!("g6[{},{},{}]", r(a), r(b), r(c)),
        Family::G7 { a, b, c, d } => format!("g7[{},{},{},{}]", r(a), r(b), r(c), r(d)),
        Family::G7Type2(a) => format!("g7_a[{a}]"),
        Family::H7Type3(a) => format!("h7_a[{a}]"),
    }
}

/// The non-model five-dimensional filiform algebra.
pub fn dim5_nonmodel<F: Field>(field: &F) -> StructureTable<F> {
    build(field, &Family::Dim5NonModel).expect("valid in every characteristic")
}

pub fn model<F: Field>(field: &F, n: usize) -> StructureTable<F> {
    build(field, &Family::Model(n)).expect("model algebras are Lie algebras")
}

pub fn g6<F: Field>(field: &F, a: i64, b: i64, c: i64) -> StructureTable<F> {
    let e = |v| field.from_i64(v);
    build(field, &Family::G6 { a: e(a), b: e(b), c: e(c) }).expect("g6 family is Lie")
}

pub fn g7<F: Field>(field: &F, a: i64, b: i64, c: i64, d: i64) -> StructureTable<F> {
    let e = |v| field.from_i64(v);
    build(
        field,
        &Family::G7 {
            a: e(a),
            b: e(b),
            c: e(c),
            d: e(d),
        },
    )
    .expect("g7 family is Lie")
}
